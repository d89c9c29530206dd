#include "har/features.hpp"

#include <algorithm>
#include <cmath>

#include "har/error.hpp"
#include "har/numeric.hpp"

namespace har {

namespace {

void require_nonempty(std::span<const double> x) {
  if (x.empty()) throw Error(ErrorCode::EmptySignal, "statistic of an empty signal");
}

double finite_or_zero(double v) { return std::isfinite(v) ? v : 0.0; }

// Central moment of order k about the mean.
double central_moment(std::span<const double> x, int k) {
  const double mu = mean(x);
  double s = 0.0;
  for (double v : x) s += std::pow(v - mu, k);
  return s / static_cast<double>(x.size());
}

}  // namespace

double mean(std::span<const double> x) {
  require_nonempty(x);
  ExactSum s;
  for (double v : x) s.add(v);
  // Dividing can still push the mean of a constant signal off its value.
  const auto [lo, hi] = std::ranges::minmax(x);
  return std::clamp(s.value() / static_cast<double>(x.size()), lo, hi);
}

double variance(std::span<const double> x) {
  const double mu = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - mu) * (v - mu);
  return s / static_cast<double>(x.size());
}

double stddev(std::span<const double> x) { return std::sqrt(variance(x)); }

double quantile(std::span<const double> x, double q) {
  require_nonempty(x);
  std::vector<double> sorted(x.begin(), x.end());
  std::ranges::sort(sorted);
  const double h = (static_cast<double>(sorted.size()) - 1.0) * std::clamp(q, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

double median(std::span<const double> x) { return quantile(x, 0.5); }

double interquartile_range(std::span<const double> x) {
  return quantile(x, 0.75) - quantile(x, 0.25);
}

double mean_absolute_deviation(std::span<const double> x) {
  const double mu = mean(x);
  double s = 0.0;
  for (double v : x) s += std::fabs(v - mu);
  return s / static_cast<double>(x.size());
}

double root_mean_square(std::span<const double> x) { return std::sqrt(mean_energy(x)); }

double mean_energy(std::span<const double> x) {
  require_nonempty(x);
  double s = 0.0;
  for (double v : x) s += v * v;
  return s / static_cast<double>(x.size());
}

double zero_crossings(std::span<const double> x) {
  const double mu = mean(x);
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i] - mu;
    const double b = x[i + 1] - mu;
    if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)) ++count;
  }
  return static_cast<double>(count);
}

double skewness(std::span<const double> x) {
  const double m2 = central_moment(x, 2);
  if (m2 <= 0.0) return 0.0;
  return finite_or_zero(central_moment(x, 3) / std::pow(m2, 1.5));
}

double excess_kurtosis(std::span<const double> x) {
  const double m2 = central_moment(x, 2);
  if (m2 <= 0.0) return 0.0;
  return finite_or_zero(central_moment(x, 4) / (m2 * m2) - 3.0);
}

HaarEnergies haar_dwt_energies(std::span<const double> x) {
  if (x.size() < 2) throw Error(ErrorCode::SignalTooShort, "Haar transform needs >= 2 samples");
  const std::size_t pairs = x.size() / 2;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  double approx = 0.0;
  double detail = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    const double a = (x[2 * i] + x[2 * i + 1]) * inv_sqrt2;
    const double d = (x[2 * i] - x[2 * i + 1]) * inv_sqrt2;
    approx += a * a;
    detail += d * d;
  }
  return {approx / static_cast<double>(pairs), detail / static_cast<double>(pairs)};
}

std::vector<double> binned_distribution(std::span<const double> x, std::size_t n_bins) {
  require_nonempty(x);
  if (n_bins == 0) throw Error(ErrorCode::InvalidArgument, "need at least one bin");
  std::vector<double> fractions(n_bins, 0.0);
  const auto [lo_it, hi_it] = std::ranges::minmax_element(x);
  const double lo = *lo_it;
  const double hi = *hi_it;
  const double width = (hi - lo) / static_cast<double>(n_bins);
  if (!(width > 0.0) || !std::isfinite(width)) {
    fractions[0] = 1.0;
    return fractions;
  }
  std::vector<std::size_t> counts(n_bins, 0);
  for (double v : x) {
    auto bin = std::min(static_cast<std::size_t>(std::floor((v - lo) / width)), n_bins - 1);
    // Settle against the edges lo + j * width themselves.
    while (bin > 0 && v < lo + static_cast<double>(bin) * width) --bin;
    while (bin + 1 < n_bins && v >= lo + static_cast<double>(bin + 1) * width) ++bin;
    counts[bin]++;
  }
  for (std::size_t b = 0; b < n_bins; ++b) {
    fractions[b] = static_cast<double>(counts[b]) / static_cast<double>(x.size());
  }
  return fractions;
}

double peak_interval_stats(std::span<const double> x) {
  if (x.size() < 3) throw Error(ErrorCode::SignalTooShort, "peak search needs >= 3 samples");
  std::size_t first = 0;
  std::size_t last = 0;
  std::size_t peaks = 0;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    if (x[i - 1] < x[i] && x[i] > x[i + 1]) {
      if (peaks == 0) first = i;
      last = i;
      ++peaks;
    }
  }
  if (peaks < 2) return 0.0;
  return static_cast<double>(last - first) / static_cast<double>(peaks - 1);
}

double average_resultant(std::span<const double> x, std::span<const double> y,
                         std::span<const double> z) {
  if (x.size() != y.size() || x.size() != z.size()) {
    throw Error(ErrorCode::LengthMismatch, "axes differ in length");
  }
  require_nonempty(x);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::sqrt(x[i] * x[i] + y[i] * y[i] + z[i] * z[i]);
  return s / static_cast<double>(x.size());
}

}  // namespace har
