#include "har/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <vector>

#include "har/error.hpp"

namespace har {

double student_t_quantile(double p, double dof) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidArgument, "quantile level must be in (0, 1)");
  if (!(dof > 0.0)) throw Error(ErrorCode::InvalidArgument, "degrees of freedom must be positive");
  return boost::math::quantile(boost::math::students_t_distribution<double>(dof), p);
}

double student_t_two_sided_p(double t, double dof) {
  if (!(dof > 0.0)) throw Error(ErrorCode::InvalidArgument, "degrees of freedom must be positive");
  if (std::isinf(t)) return 0.0;
  const boost::math::students_t_distribution<double> dist(dof);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t))));
}

Interval confidence_interval(std::span<const double> values, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "confidence level must be in (0, 1)");
  }
  const std::size_t n = values.size();
  if (n < 2) throw Error(ErrorCode::TooFewUnits, "a confidence interval needs at least 2 units");
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double s = std::sqrt(ss / static_cast<double>(n - 1));
  const double t = student_t_quantile(0.5 + level / 2.0, static_cast<double>(n - 1));
  return {mean, t * s / std::sqrt(static_cast<double>(n))};
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "paired samples differ in length");
  const std::size_t n = a.size();
  if (n < 2) throw Error(ErrorCode::TooFewUnits, "a paired t-test needs at least 2 pairs");
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  double sum = 0.0;
  for (double v : d) sum += v;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  // Differences constant up to rounding of the inputs.
  if (sd <= 1e-12 * std::fabs(mean) || sd == 0.0) {
    if (mean == 0.0) return {0.0, 1.0, true};
    return {std::copysign(std::numeric_limits<double>::infinity(), mean), 0.0, true};
  }
  const double t = mean / (sd / std::sqrt(static_cast<double>(n)));
  return {t, student_t_two_sided_p(t, static_cast<double>(n - 1)), false};
}

}  // namespace har
