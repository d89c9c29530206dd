// One-vs-one support vector machine with the quadratic kernel, trained by SMO
// with second-order working-set selection.

#include <algorithm>
#include <cmath>
#include <limits>

#include "har/classifiers.hpp"
#include "har/error.hpp"
#include "har/numeric.hpp"
#include "har/parallel.hpp"

namespace har {

namespace {

constexpr double kTau = 1e-12;

// Symmetric matrix of training inner products.
class GramMatrix {
 public:
  GramMatrix(const Matrix& x, std::size_t threads) : n_(x.rows()), dots_(n_ * n_) {
    parallel_for(n_, threads, [&](std::size_t i) {
      for (std::size_t j = 0; j <= i; ++j) dots_[i * n_ + j] = exact_dot(x.row(i), x.row(j));
    });
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) dots_[i * n_ + j] = dots_[j * n_ + i];
    }
  }

  double kernel(std::size_t i, std::size_t j) const {
    const double v = dots_[i * n_ + j] + 1.0;
    return v * v;
  }

 private:
  std::size_t n_;
  std::vector<double> dots_;
};

struct BinarySolution {
  std::vector<double> alpha;
  double rho = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

// Dual: min 1/2 a'Qa - e'a, 0 <= a <= C, y'a = 0, Q_ij = y_i y_j K_ij.
BinarySolution solve_binary(const GramMatrix& gram, std::span<const std::size_t> rows,
                            std::span<const int> y, const SvmParams& params) {
  const std::size_t n = rows.size();
  const double c = params.c;
  const double eps = params.tolerance;
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);
  std::vector<double> diag(n);
  for (std::size_t t = 0; t < n; ++t) diag[t] = gram.kernel(rows[t], rows[t]);
  auto q = [&](std::size_t i, std::size_t j) {
    return static_cast<double>(y[i] * y[j]) * gram.kernel(rows[i], rows[j]);
  };
  const std::size_t max_iter =
      std::max<std::size_t>(params.iterations_per_instance * n, 10000);

  BinarySolution sol;
  std::vector<double> qi(n), qj(n);
  std::size_t iter = 0;
  for (; iter < max_iter; ++iter) {
    double gmax = -std::numeric_limits<double>::infinity();
    std::ptrdiff_t i = -1;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] == 1 ? alpha[t] < c : alpha[t] > 0.0) {
        const double v = -y[t] * grad[t];
        if (v >= gmax) {
          gmax = v;
          i = static_cast<std::ptrdiff_t>(t);
        }
      }
    }
    if (i < 0) {
      sol.converged = true;
      break;
    }
    const auto ui = static_cast<std::size_t>(i);
    for (std::size_t t = 0; t < n; ++t) qi[t] = q(ui, t);

    double gmax2 = -std::numeric_limits<double>::infinity();
    double obj_min = std::numeric_limits<double>::infinity();
    std::ptrdiff_t j = -1;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] == 1 ? alpha[t] > 0.0 : alpha[t] < c) {
        const double v = y[t] * grad[t];
        gmax2 = std::max(gmax2, v);
        const double grad_diff = gmax + v;
        if (grad_diff > 0.0) {
          double quad = diag[ui] + diag[t] - 2.0 * y[ui] * y[t] * qi[t];
          if (quad <= 0.0) quad = kTau;
          const double obj = -(grad_diff * grad_diff) / quad;
          if (obj <= obj_min) {
            obj_min = obj;
            j = static_cast<std::ptrdiff_t>(t);
          }
        }
      }
    }
    if (gmax + gmax2 < eps || j < 0) {
      sol.converged = true;
      break;
    }
    const auto uj = static_cast<std::size_t>(j);
    for (std::size_t t = 0; t < n; ++t) qj[t] = q(uj, t);

    const double old_ai = alpha[ui];
    const double old_aj = alpha[uj];
    if (y[ui] != y[uj]) {
      double quad = diag[ui] + diag[uj] + 2.0 * qi[uj];
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[ui] - grad[uj]) / quad;
      const double diff = alpha[ui] - alpha[uj];
      alpha[ui] += delta;
      alpha[uj] += delta;
      if (diff > 0.0) {
        if (alpha[uj] < 0.0) {
          alpha[uj] = 0.0;
          alpha[ui] = diff;
        }
      } else if (alpha[ui] < 0.0) {
        alpha[ui] = 0.0;
        alpha[uj] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[ui] > c) {
          alpha[ui] = c;
          alpha[uj] = c - diff;
        }
      } else if (alpha[uj] > c) {
        alpha[uj] = c;
        alpha[ui] = c + diff;
      }
    } else {
      double quad = diag[ui] + diag[uj] - 2.0 * qi[uj];
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[ui] - grad[uj]) / quad;
      const double sum = alpha[ui] + alpha[uj];
      alpha[ui] -= delta;
      alpha[uj] += delta;
      if (sum > c) {
        if (alpha[ui] > c) {
          alpha[ui] = c;
          alpha[uj] = sum - c;
        }
      } else if (alpha[uj] < 0.0) {
        alpha[uj] = 0.0;
        alpha[ui] = sum;
      }
      if (sum > c) {
        if (alpha[uj] > c) {
          alpha[uj] = c;
          alpha[ui] = sum - c;
        }
      } else if (alpha[ui] < 0.0) {
        alpha[ui] = 0.0;
        alpha[uj] = sum;
      }
    }
    const double dai = alpha[ui] - old_ai;
    const double daj = alpha[uj] - old_aj;
    for (std::size_t t = 0; t < n; ++t) grad[t] += qi[t] * dai + qj[t] * daj;
  }
  sol.iterations = iter;

  // Offset from the free multipliers, or the midpoint of the feasible range.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] >= c) {
      if (y[t] == -1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0.0) {
      if (y[t] == 1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  sol.rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;
  if (!std::isfinite(sol.rho)) sol.rho = 0.0;
  sol.alpha = std::move(alpha);
  return sol;
}

}  // namespace

double quadratic_kernel(std::span<const double> u, std::span<const double> v) {
  const double s = exact_dot(u, v) + 1.0;
  return s * s;
}

SupportVectorMachine SupportVectorMachine::fit(const Matrix& x, std::span<const Activity> y,
                                               const SvmParams& params, std::size_t threads) {
  const std::size_t n = x.rows();
  if (n == 0) throw Error(ErrorCode::EmptyTrainingSet, "SVM needs training rows");
  SupportVectorMachine model;
  for (Activity a : kAllActivities) {
    if (std::ranges::find(y, a) != y.end()) model.class_labels.push_back(a);
  }
  const std::size_t k = model.class_labels.size();
  if (k < 2) return model;

  const GramMatrix gram(x, threads);
  struct Pair {
    Activity pos, neg;
    std::vector<std::size_t> rows;
    std::vector<int> sign;
    BinarySolution sol;
  };
  std::vector<Pair> pairs;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      Pair p{model.class_labels[a], model.class_labels[b], {}, {}, {}};
      for (std::size_t i = 0; i < n; ++i) {
        if (y[i] == p.pos || y[i] == p.neg) {
          p.rows.push_back(i);
          p.sign.push_back(y[i] == p.pos ? 1 : -1);
        }
      }
      pairs.push_back(std::move(p));
    }
  }
  parallel_for(pairs.size(), threads, [&](std::size_t m) {
    pairs[m].sol = solve_binary(gram, pairs[m].rows, pairs[m].sign, params);
  });

  // Keep each training row that supports any machine once, in row order.
  std::vector<std::ptrdiff_t> slot(n, -1);
  for (const auto& p : pairs) {
    for (std::size_t t = 0; t < p.rows.size(); ++t) {
      if (p.sol.alpha[t] > 0.0) slot[p.rows[t]] = 0;
    }
  }
  model.vectors = Matrix(0, x.cols());
  for (std::size_t i = 0; i < n; ++i) {
    if (slot[i] >= 0) {
      slot[i] = static_cast<std::ptrdiff_t>(model.vectors.rows());
      model.vectors.append_row(x.row(i));
    }
  }
  for (const auto& p : pairs) {
    BinaryMachine m{p.pos, p.neg, {}, {}, -p.sol.rho, p.sol.converged, p.sol.iterations};
    for (std::size_t t = 0; t < p.rows.size(); ++t) {
      if (p.sol.alpha[t] > 0.0) {
        m.support.push_back(static_cast<std::size_t>(slot[p.rows[t]]));
        m.weight.push_back(p.sol.alpha[t] * p.sign[t]);
      }
    }
    model.machines.push_back(std::move(m));
  }
  return model;
}

double SupportVectorMachine::decision_value(std::size_t machine, std::span<const double> x) const {
  const auto& m = machines[machine];
  double f = m.bias;
  for (std::size_t s = 0; s < m.support.size(); ++s) {
    f += m.weight[s] * quadratic_kernel(vectors.row(m.support[s]), x);
  }
  return f;
}

Prediction SupportVectorMachine::predict(std::span<const double> x) const {
  if (class_labels.size() == 1) return {class_labels.front(), 1.0};
  std::vector<double> kernel(vectors.rows());
  for (std::size_t s = 0; s < vectors.rows(); ++s) kernel[s] = quadratic_kernel(vectors.row(s), x);

  std::array<std::size_t, kActivityCount> votes{};
  for (const auto& m : machines) {
    double f = m.bias;
    for (std::size_t s = 0; s < m.support.size(); ++s) f += m.weight[s] * kernel[m.support[s]];
    // f == 0 goes to the positive side, which has the smaller class code.
    votes[index(f >= 0.0 ? m.positive : m.negative)]++;
  }
  std::size_t best = index(class_labels.front());
  for (std::size_t c = 0; c < kActivityCount; ++c) {
    if (votes[c] > votes[best]) best = c;
  }
  return {kAllActivities[best],
          static_cast<double>(votes[best]) / static_cast<double>(class_labels.size() - 1)};
}

bool SupportVectorMachine::converged() const noexcept {
  return std::ranges::all_of(machines, [](const BinaryMachine& m) { return m.converged; });
}

}  // namespace har
