#pragma once

#include <span>

namespace har {

/// Quantile of Student's t distribution with `dof` degrees of freedom.
double student_t_quantile(double p, double dof);
/// Two-sided tail probability P(|T| >= |t|).
double student_t_two_sided_p(double t, double dof);

struct Interval {
  double mean = 0.0;
  double halfwidth = 0.0;
};

/// mean +- t_{(1+level)/2, n-1} * s / sqrt(n) with the (n-1) sample std.
/// Throws TooFewUnits for n < 2 and InvalidArgument unless 0 < level < 1.
Interval confidence_interval(std::span<const double> unit_values, double level = 0.98);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;  // two-sided
  /// Differences were constant. Zero differences give t = 0, p = 1; a
  /// nonzero constant gives t = +-inf, p = 0.
  bool degenerate = false;
};

/// Paired t-test on a - b. Throws LengthMismatch; needs n >= 2.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

inline constexpr double kSignificanceAlpha = 0.02;

}  // namespace har
