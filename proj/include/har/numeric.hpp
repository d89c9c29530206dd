#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>

namespace har {

/// Correctly rounded floating-point summation (Shewchuk partials, finalised
/// with round-half-even correction). The result depends only on the multiset
/// of addends, never on their order, which is what makes distance and kernel
/// evaluations invariant under feature-column permutations.
class ExactSum {
 public:
  void add(double x) noexcept {
    std::size_t i = 0;
    for (std::size_t j = 0; j < count_; ++j) {
      double y = partials_[j];
      if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials_[i++] = lo;
      x = hi;
    }
    count_ = i;
    partials_[count_++] = x;
  }

  double value() const noexcept {
    if (count_ == 0) return 0.0;
    std::size_t n = count_;
    double hi = partials_[--n];
    double lo = 0.0;
    while (n > 0) {
      const double x = hi;
      const double y = partials_[--n];
      hi = x + y;
      const double yr = hi - x;
      lo = y - yr;
      if (lo != 0.0) break;
    }
    if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) ||
                  (lo > 0.0 && partials_[n - 1] > 0.0))) {
      const double y = lo * 2.0;
      const double x = hi + y;
      if (y == x - hi) hi = x;
    }
    return hi;
  }

 private:
  // A double expansion never needs more than ~40 non-overlapping partials.
  std::array<double, 64> partials_{};
  std::size_t count_ = 0;
};

inline double exact_dot(std::span<const double> a, std::span<const double> b) {
  ExactSum s;
  for (std::size_t i = 0; i < a.size(); ++i) s.add(a[i] * b[i]);
  return s.value();
}

inline double exact_squared_distance(std::span<const double> a,
                                     std::span<const double> b) {
  ExactSum s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s.add(d * d);
  }
  return s.value();
}

/// SplitMix64 finaliser; derives independent sub-seeds from (seed, stream).
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace har
