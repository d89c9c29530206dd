#include <algorithm>
#include <cmath>
#include <numbers>

#include "har/classifiers.hpp"
#include "har/error.hpp"
#include "har/numeric.hpp"

namespace har {

GaussianNaiveBayes GaussianNaiveBayes::fit(const Matrix& x, std::span<const Activity> y,
                                           const NaiveBayesParams& params) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  if (n == 0) throw Error(ErrorCode::EmptyTrainingSet, "naive Bayes needs training rows");
  GaussianNaiveBayes model;
  for (Activity a : kAllActivities) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < n; ++i) {
      if (y[i] == a) rows.push_back(i);
    }
    if (rows.empty()) continue;
    const auto m = static_cast<double>(rows.size());
    ClassModel cm{a, std::log(m / static_cast<double>(n)), std::vector<double>(d, 0.0),
                  std::vector<double>(d, 0.0)};
    for (std::size_t j = 0; j < d; ++j) {
      double s = 0.0;
      for (std::size_t i : rows) s += x(i, j);
      const double mu = s / m;
      double ss = 0.0;
      for (std::size_t i : rows) ss += (x(i, j) - mu) * (x(i, j) - mu);
      cm.mean[j] = mu;
      cm.variance[j] = std::max(ss / m, params.variance_floor);
    }
    model.classes.push_back(std::move(cm));
  }
  return model;
}

Prediction GaussianNaiveBayes::predict(std::span<const double> x) const {
  std::vector<double> log_post(classes.size());
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const auto& cm = classes[c];
    ExactSum s;
    s.add(cm.log_prior);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double diff = x[j] - cm.mean[j];
      s.add(-0.5 * std::log(2.0 * std::numbers::pi * cm.variance[j]));
      s.add(-0.5 * diff * diff / cm.variance[j]);
    }
    log_post[c] = s.value();
  }
  // Classes are stored in code order, so strict > keeps the smallest code on ties.
  std::size_t best = 0;
  for (std::size_t c = 1; c < classes.size(); ++c) {
    if (log_post[c] > log_post[best]) best = c;
  }
  double norm = 0.0;
  for (double lp : log_post) norm += std::exp(lp - log_post[best]);
  const double score = std::isfinite(norm) && norm > 0.0 ? 1.0 / norm : 1.0;
  return {classes[best].label, std::clamp(score, 0.0, 1.0)};
}

}  // namespace har
