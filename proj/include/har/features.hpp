#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace har {

// Descriptive statistics. All take non-empty input.
double mean(std::span<const double> x);
double variance(std::span<const double> x);  // population
double stddev(std::span<const double> x);    // population
/// Linear-interpolation quantile (R type 7), q in [0, 1].
double quantile(std::span<const double> x, double q);
double median(std::span<const double> x);
double interquartile_range(std::span<const double> x);
double mean_absolute_deviation(std::span<const double> x);
double root_mean_square(std::span<const double> x);
double mean_energy(std::span<const double> x);
/// Sign changes of x - mean between consecutive samples.
double zero_crossings(std::span<const double> x);
/// Population skewness; 0 for zero-variance input.
double skewness(std::span<const double> x);
/// Population excess kurtosis; 0 for zero-variance input.
double excess_kurtosis(std::span<const double> x);

/// Biased sample autocovariances gamma(0..max_lag) about the sample mean.
std::vector<double> autocovariance(std::span<const double> x, std::size_t max_lag);

/// Biased sample autocorrelation at `lag`; constant signal -> 0.
/// Throws SignalTooShort when size < lag + 2.
double autocorrelation(std::span<const double> x, std::size_t lag);

struct LevinsonResult {
  std::vector<double> coefficients;  // phi_{p,1..p}
  std::vector<double> reflection;    // phi_{k,k}, k = 1..p (the PACF)
  double innovation_variance = 0.0;
  bool degenerate = false;           // a prediction-error variance hit zero
};

/// Durbin-Levinson recursion on autocovariances gamma(0..order).
LevinsonResult durbin_levinson(std::span<const double> autocov, std::size_t order);

/// PACF at `lag` (>= 1); constant signal -> 0. Throws SignalTooShort when
/// size < lag + 2.
double partial_autocorrelation(std::span<const double> x, std::size_t lag);

/// Yule-Walker AR(order) coefficients; constant -> zeros.
/// Throws SignalTooShort when size < 10 * order.
std::vector<double> fit_ar(std::span<const double> x, std::size_t order);

/// Innovations-algorithm MA(order) coefficients (x_t = e_t + sum theta_j e_{t-j});
/// constant -> zeros. Throws SignalTooShort when size < 10 * order.
std::vector<double> fit_ma(std::span<const double> x, std::size_t order);

struct ArmaFit {
  std::vector<double> coefficients;  // phi_1..phi_p, theta_1..theta_q
  bool ill_conditioned = false;      // regression was rank deficient; zeros returned
};

/// Hannan-Rissanen ARMA(p, q): long-AR residuals, then least squares on lagged
/// values and lagged residuals. Throws SignalTooShort when size < 10 * (p + q).
ArmaFit fit_arma(std::span<const double> x, std::size_t p, std::size_t q);

struct HaarEnergies {
  double approx = 0.0;  // mean squared approximation coefficient
  double detail = 0.0;  // mean squared detail coefficient
};

/// One-level orthonormal Haar transform; an odd trailing sample is dropped.
/// Throws SignalTooShort for fewer than two samples.
HaarEnergies haar_dwt_energies(std::span<const double> x);

/// Fraction of samples per equal-width bin over [min, max]; max lands in the
/// last bin; a constant signal puts everything in bin 0.
std::vector<double> binned_distribution(std::span<const double> x, std::size_t n_bins = 10);

/// Mean gap in samples between consecutive strict local maxima; 0 with fewer
/// than two peaks. Throws SignalTooShort for fewer than three samples.
double peak_interval_stats(std::span<const double> x);

/// Mean Euclidean norm of the 3-axis samples. Throws LengthMismatch.
double average_resultant(std::span<const double> x, std::span<const double> y,
                         std::span<const double> z);

}  // namespace har
