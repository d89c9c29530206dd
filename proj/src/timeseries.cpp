// Sample autocorrelation and linear time-series model estimators.

#include <algorithm>
#include <cmath>

#include "har/error.hpp"
#include "har/features.hpp"

namespace har {

namespace {

void require_length(std::span<const double> x, std::size_t needed, const char* what) {
  if (x.size() < needed) {
    throw Error(ErrorCode::SignalTooShort, std::string(what) + " needs at least " +
                                               std::to_string(needed) + " samples, got " +
                                               std::to_string(x.size()));
  }
}

bool all_finite(const std::vector<double>& v) {
  return std::ranges::all_of(v, [](double d) { return std::isfinite(d); });
}

// Prediction-error variances below this fraction of gamma(0) end the recursion.
constexpr double kDegenerateVariance = 1e-14;

// Solves the square system a * x = b in place with partial pivoting; false
// when a pivot is negligible relative to the matrix scale.
bool solve_linear(std::vector<std::vector<double>>& a, std::vector<double>& b) {
  const std::size_t n = b.size();
  double scale = 0.0;
  for (const auto& row : a) {
    for (double v : row) scale = std::max(scale, std::fabs(v));
  }
  if (scale == 0.0) return false;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    if (std::fabs(a[pivot][col]) <= 1e-12 * scale) return false;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * b[c];
    b[i] = s / a[i][i];
  }
  return true;
}

}  // namespace

std::vector<double> autocovariance(std::span<const double> x, std::size_t max_lag) {
  const double mu = mean(x);
  const auto n = static_cast<double>(x.size());
  // Corrected two-pass deviations: the rounded mean can sit a sizeable
  // fraction of the spread away from the true one on near-constant signals.
  double drift = 0.0;
  for (double v : x) drift += v - mu;
  drift /= n;
  std::vector<double> d(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) d[t] = (x[t] - mu) - drift;
  std::vector<double> gamma(max_lag + 1, 0.0);
  for (std::size_t k = 0; k <= max_lag && k < x.size(); ++k) {
    double s = 0.0;
    for (std::size_t t = 0; t + k < x.size(); ++t) s += d[t] * d[t + k];
    gamma[k] = s / n;
  }
  return gamma;
}

double autocorrelation(std::span<const double> x, std::size_t lag) {
  require_length(x, lag + 2, "autocorrelation");
  const auto gamma = autocovariance(x, lag);
  if (!(gamma[0] > 0.0)) return 0.0;
  return gamma[lag] / gamma[0];
}

LevinsonResult durbin_levinson(std::span<const double> gamma, std::size_t order) {
  if (gamma.size() < order + 1) {
    throw Error(ErrorCode::InvalidArgument, "need autocovariances up to the model order");
  }
  LevinsonResult r{std::vector<double>(order, 0.0), std::vector<double>(order, 0.0), gamma[0],
                   false};
  if (!(gamma[0] > 0.0)) {
    r.degenerate = true;
    r.innovation_variance = 0.0;
    return r;
  }
  std::vector<double> prev(order, 0.0);
  double v = gamma[0];
  for (std::size_t k = 1; k <= order; ++k) {
    double num = gamma[k];
    for (std::size_t j = 1; j < k; ++j) num -= prev[j - 1] * gamma[k - j];
    const double phi_kk = num / v;
    std::vector<double> cur(order, 0.0);
    cur[k - 1] = phi_kk;
    for (std::size_t j = 1; j < k; ++j) cur[j - 1] = prev[j - 1] - phi_kk * prev[k - j - 1];
    const double next_v = v * (1.0 - phi_kk * phi_kk);
    r.reflection[k - 1] = phi_kk;
    r.coefficients = cur;
    prev = std::move(cur);
    v = next_v;
    if (!(v > kDegenerateVariance * gamma[0])) {
      r.degenerate = true;
      break;
    }
  }
  r.innovation_variance = std::max(v, 0.0);
  return r;
}

double partial_autocorrelation(std::span<const double> x, std::size_t lag) {
  if (lag == 0) throw Error(ErrorCode::InvalidArgument, "PACF lag must be >= 1");
  require_length(x, lag + 2, "partial autocorrelation");
  const auto gamma = autocovariance(x, lag);
  if (!(gamma[0] > 0.0)) return 0.0;
  const double v = durbin_levinson(gamma, lag).reflection[lag - 1];
  return std::isfinite(v) ? v : 0.0;
}

std::vector<double> fit_ar(std::span<const double> x, std::size_t order) {
  if (order == 0) throw Error(ErrorCode::InvalidArgument, "AR order must be >= 1");
  require_length(x, 10 * order, "AR fit");
  const auto gamma = autocovariance(x, order);
  if (!(gamma[0] > 0.0)) return std::vector<double>(order, 0.0);
  auto coef = durbin_levinson(gamma, order).coefficients;
  if (!all_finite(coef)) return std::vector<double>(order, 0.0);
  return coef;
}

std::vector<double> fit_ma(std::span<const double> x, std::size_t order) {
  if (order == 0) throw Error(ErrorCode::InvalidArgument, "MA order must be >= 1");
  require_length(x, 10 * order, "MA fit");
  // Innovations recursion depth: deep enough for theta_{m,j} to settle, but
  // well inside the available lags on short windows.
  const std::size_t m = std::max(order, std::min<std::size_t>(20, x.size() / 5));
  const auto gamma = autocovariance(x, m);
  std::vector<double> zeros(order, 0.0);
  if (!(gamma[0] > 0.0)) return zeros;

  std::vector<std::vector<double>> theta(m + 1, std::vector<double>(m + 1, 0.0));
  std::vector<double> v(m + 1, 0.0);
  v[0] = gamma[0];
  for (std::size_t n = 1; n <= m; ++n) {
    for (std::size_t k = 0; k < n; ++k) {
      double s = gamma[n - k];
      for (std::size_t j = 0; j < k; ++j) s -= theta[k][k - j] * theta[n][n - j] * v[j];
      theta[n][n - k] = s / v[k];
    }
    double vn = gamma[0];
    for (std::size_t j = 0; j < n; ++j) vn -= theta[n][n - j] * theta[n][n - j] * v[j];
    if (!(vn > kDegenerateVariance * gamma[0])) {
      // Perfectly predictable: keep the deepest stable stage.
      std::vector<double> out(order, 0.0);
      for (std::size_t j = 1; j <= order && j <= n; ++j) out[j - 1] = theta[n][j];
      return all_finite(out) ? out : zeros;
    }
    v[n] = vn;
  }
  std::vector<double> out(order);
  for (std::size_t j = 1; j <= order; ++j) out[j - 1] = theta[m][j];
  return all_finite(out) ? out : zeros;
}

ArmaFit fit_arma(std::span<const double> x, std::size_t p, std::size_t q) {
  if (p == 0 || q == 0) throw Error(ErrorCode::InvalidArgument, "ARMA orders must be >= 1");
  require_length(x, 10 * (p + q), "ARMA fit");
  const std::size_t n = x.size();
  ArmaFit zeros{std::vector<double>(p + q, 0.0), false};

  const double mu = mean(x);
  std::vector<double> y(n);
  for (std::size_t t = 0; t < n; ++t) y[t] = x[t] - mu;
  const auto gamma_probe = autocovariance(y, 0);
  if (!(gamma_probe[0] > 0.0)) return zeros;

  // Stage 1: long autoregression as a proxy for the innovations.
  const auto long_order = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(10.0 * std::log10(static_cast<double>(n)))), p + q,
      std::max(p + q, n / 4));
  const auto ar = durbin_levinson(autocovariance(y, long_order), long_order).coefficients;
  std::vector<double> resid(n, 0.0);
  for (std::size_t t = long_order; t < n; ++t) {
    double pred = 0.0;
    for (std::size_t j = 1; j <= long_order; ++j) pred += ar[j - 1] * y[t - j];
    resid[t] = y[t] - pred;
  }

  // Stage 2: regress y_t on y_{t-1..t-p} and resid_{t-1..t-q}.
  const std::size_t first = std::max(long_order + q, p);
  const std::size_t d = p + q;
  if (n <= first || n - first < d + 1) {
    zeros.ill_conditioned = true;
    return zeros;
  }
  std::vector<std::vector<double>> xtx(d, std::vector<double>(d, 0.0));
  std::vector<double> xty(d, 0.0);
  std::vector<double> row(d);
  for (std::size_t t = first; t < n; ++t) {
    for (std::size_t j = 0; j < p; ++j) row[j] = y[t - j - 1];
    for (std::size_t j = 0; j < q; ++j) row[p + j] = resid[t - j - 1];
    for (std::size_t a = 0; a < d; ++a) {
      xty[a] += row[a] * y[t];
      for (std::size_t b = 0; b < d; ++b) xtx[a][b] += row[a] * row[b];
    }
  }
  if (!solve_linear(xtx, xty) || !all_finite(xty)) {
    zeros.ill_conditioned = true;
    return zeros;
  }
  return ArmaFit{xty, false};
}

}  // namespace har
