#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "har/ingest.hpp"
#include "har/matrix.hpp"
#include "har/types.hpp"

namespace har {

/// Causal moving average: out[i] is the mean of the last `order` samples up to
/// and including i (fewer at the start). Length is preserved.
std::vector<double> moving_average_filter(std::span<const double> signal,
                                          std::size_t order = 3);

/// Applies the filter to each axis independently; timestamps are untouched.
Recording filter_recording(const Recording& rec, std::size_t order = 3);

inline constexpr std::size_t kMinWindowSamples = 4;

struct Window {
  std::string subject_id;
  Activity activity = Activity::Walking;
  SensorKind sensor = SensorKind::Accelerometer;
  std::vector<double> x, y, z;

  std::size_t size() const noexcept { return x.size(); }
  bool operator==(const Window&) const = default;
};

/// Consecutive non-overlapping blocks of exactly `samples_per_window` samples;
/// a trailing partial block is dropped.
std::vector<Window> segment_windows(const Recording& rec,
                                    std::size_t samples_per_window);

struct Normalizer {
  std::vector<double> mean;
  std::vector<double> stddev;  // population std, >= 0

  std::size_t width() const noexcept { return mean.size(); }
};

/// Column means and population standard deviations of the training rows.
Normalizer fit_normalizer(const Matrix& train_features);
/// z-score per column; columns with zero spread map to 0.
Matrix apply_normalizer(const Normalizer& norm, const Matrix& features);

struct PermutationPlan {
  std::uint64_t seed = 0;
  std::vector<std::size_t> order;  // output[i] = input[order[i]]
};

PermutationPlan make_permutation(std::uint64_t seed, std::size_t n);

template <class T>
std::vector<T> apply_permutation(const PermutationPlan& plan, std::span<const T> items) {
  std::vector<T> out;
  out.reserve(plan.order.size());
  for (std::size_t i : plan.order) out.push_back(items[i]);
  return out;
}

/// Seeded uniform shuffle of instance order.
template <class T>
std::pair<PermutationPlan, std::vector<T>> permute_instances(std::uint64_t seed,
                                                             std::span<const T> items) {
  PermutationPlan plan = make_permutation(seed, items.size());
  auto out = apply_permutation(plan, items);
  return {std::move(plan), std::move(out)};
}

/// out column j = in column order[j].
Matrix permute_columns(const Matrix& features, std::span<const std::size_t> order);

}  // namespace har
