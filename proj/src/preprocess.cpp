#include "har/preprocess.hpp"

#include <cmath>

#include "har/error.hpp"

namespace har {

std::vector<double> moving_average_filter(std::span<const double> signal, std::size_t order) {
  if (signal.empty()) throw Error(ErrorCode::EmptySignal, "cannot filter an empty signal");
  if (order == 0) throw Error(ErrorCode::InvalidArgument, "filter order must be >= 1");
  std::vector<double> out(signal.size());
  for (std::size_t i = 0; i < signal.size(); ++i) {
    const std::size_t first = i + 1 >= order ? i + 1 - order : 0;
    double sum = 0.0;
    for (std::size_t j = first; j <= i; ++j) sum += signal[j];
    out[i] = sum / static_cast<double>(i - first + 1);
  }
  return out;
}

Recording filter_recording(const Recording& rec, std::size_t order) {
  const std::size_t n = rec.samples.size();
  std::vector<double> x(n), y(n), z(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = rec.samples[i].x;
    y[i] = rec.samples[i].y;
    z[i] = rec.samples[i].z;
  }
  const auto fx = moving_average_filter(x, order);
  const auto fy = moving_average_filter(y, order);
  const auto fz = moving_average_filter(z, order);
  Recording out = rec;
  for (std::size_t i = 0; i < n; ++i) {
    out.samples[i].x = fx[i];
    out.samples[i].y = fy[i];
    out.samples[i].z = fz[i];
  }
  return out;
}

std::vector<Window> segment_windows(const Recording& rec, std::size_t samples_per_window) {
  if (samples_per_window < kMinWindowSamples) {
    throw Error(ErrorCode::InvalidArgument,
                "samples per window must be at least " + std::to_string(kMinWindowSamples));
  }
  const std::size_t count = rec.samples.size() / samples_per_window;
  std::vector<Window> out;
  out.reserve(count);
  for (std::size_t w = 0; w < count; ++w) {
    Window win{rec.subject_id, rec.activity, rec.sensor, {}, {}, {}};
    win.x.reserve(samples_per_window);
    win.y.reserve(samples_per_window);
    win.z.reserve(samples_per_window);
    for (std::size_t i = w * samples_per_window; i < (w + 1) * samples_per_window; ++i) {
      win.x.push_back(rec.samples[i].x);
      win.y.push_back(rec.samples[i].y);
      win.z.push_back(rec.samples[i].z);
    }
    out.push_back(std::move(win));
  }
  return out;
}

Normalizer fit_normalizer(const Matrix& train) {
  if (train.rows() == 0) throw Error(ErrorCode::EmptyTrainingSet, "cannot fit on zero rows");
  const std::size_t d = train.cols();
  const auto n = static_cast<double>(train.rows());
  Normalizer norm{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  for (std::size_t j = 0; j < d; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < train.rows(); ++i) sum += train(i, j);
    const double mu = sum / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < train.rows(); ++i) {
      const double dev = train(i, j) - mu;
      ss += dev * dev;
    }
    norm.mean[j] = mu;
    norm.stddev[j] = std::sqrt(ss / n);
  }
  return norm;
}

Matrix apply_normalizer(const Normalizer& norm, const Matrix& features) {
  if (features.cols() != norm.width()) {
    throw Error(ErrorCode::WidthMismatch, "normalizer width " + std::to_string(norm.width()) +
                                              " vs features " + std::to_string(features.cols()));
  }
  Matrix out(features.rows(), features.cols());
  for (std::size_t i = 0; i < features.rows(); ++i) {
    for (std::size_t j = 0; j < features.cols(); ++j) {
      out(i, j) = norm.stddev[j] > 0.0 ? (features(i, j) - norm.mean[j]) / norm.stddev[j] : 0.0;
    }
  }
  return out;
}

PermutationPlan make_permutation(std::uint64_t seed, std::size_t n) {
  PermutationPlan plan{seed, std::vector<std::size_t>(n)};
  std::iota(plan.order.begin(), plan.order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(plan.order.begin(), plan.order.end(), rng);
  return plan;
}

Matrix permute_columns(const Matrix& features, std::span<const std::size_t> order) {
  if (order.size() != features.cols()) {
    throw Error(ErrorCode::WidthMismatch, "column order has the wrong width");
  }
  std::vector<bool> seen(order.size(), false);
  for (std::size_t j : order) {
    if (j >= order.size() || seen[j]) throw Error(ErrorCode::InvalidArgument, "column order is not a permutation");
    seen[j] = true;
  }
  Matrix out(features.rows(), features.cols());
  for (std::size_t i = 0; i < features.rows(); ++i) {
    for (std::size_t j = 0; j < order.size(); ++j) out(i, j) = features(i, order[j]);
  }
  return out;
}

}  // namespace har
