// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "har/banks.hpp"
#include "har/classifiers.hpp"
#include "har/error.hpp"
#include "har/eval.hpp"
#include "har/features.hpp"
#include "har/pipeline.hpp"
#include "har/stats.hpp"
#include "oracles.hpp"

using namespace har;
namespace ht = har::testing;

namespace {

// Tolerances and limits.
constexpr double kOracleTol = 1e-9;
constexpr int kOracleSignals = 1000;
constexpr std::size_t kMaxSignalLength = 512;
constexpr double kOracleSeconds = 10.0;

constexpr int kRecoverySeeds = 20;
constexpr int kRecoveryNeeded = 19;
constexpr std::size_t kRecoveryLength = 5000;
constexpr double kArTol = 0.05;
constexpr double kMaTol = 0.1;
constexpr double kArmaTol = 0.15;
constexpr double kRecoverySeconds = 30.0;

constexpr int kFuzzWindows = 2000;

constexpr int kColumnPermutations = 200;

constexpr double kStatsTol = 1e-6;
constexpr int kStatsVectors = 100;
constexpr double kCiLevel = 0.98;

constexpr double kPersonalFloor = 0.95;
constexpr double kImpersonalFloor = 0.85;
constexpr double kTrendSeconds = 120.0;

constexpr double kKnnDrop = 0.05;
constexpr double kTreeSpread = 0.10;
constexpr double kSweepSeconds = 600.0;

constexpr std::uint64_t kRescaleSeeds = 5;
constexpr double kRescaleDecades = 3.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const SyntheticDataset& dataset() {
  static const SyntheticDataset data = ht::default_dataset();
  return data;
}

FeatureSet features_at(std::size_t window) {
  PipelineOptions opts;
  opts.bank = Bank::B70;
  opts.samples_per_window = window;
  return build_feature_set(dataset().recordings, opts);
}

Outcome feature_oracles() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  std::size_t bin_mismatches = 0;
  for (int s = 0; s < kOracleSignals; ++s) {
    const auto x = ht::random_signal(rng, 8, kMaxSignalLength);
    for (std::size_t lag = 1; lag <= 5 && lag + 2 <= x.size(); ++lag) {
      worst = std::max(worst, std::fabs(autocorrelation(x, lag) - ht::oracle_acf(x, lag)));
      if (x.size() > 2 * lag) {
        worst = std::max(worst, std::fabs(partial_autocorrelation(x, lag) - ht::oracle_pacf(x, lag)));
      }
    }
    const auto bins = binned_distribution(x, 10);
    const auto ref = ht::oracle_bins(x, 10);
    for (std::size_t b = 0; b < 10; ++b) {
      if (bins[b] != ref[b]) ++bin_mismatches;
    }
    worst = std::max(worst, std::fabs(peak_interval_stats(x) - ht::oracle_peak_gap(x)));
    const Window w = ht::random_window(rng, x.size());
    const double res = average_resultant(w.x, w.y, w.z);
    worst = std::max(worst, std::fabs(res - ht::oracle_resultant(w.x, w.y, w.z)) / std::max(1.0, std::fabs(res)));
  }
  const double t = seconds_since(t0);
  return {worst <= kOracleTol && bin_mismatches == 0 && t < kOracleSeconds,
          fmt("%d signals, max deviation %.3g (tol %.0e), bin mismatches %zu, %.1fs (limit %.0fs)", kOracleSignals,
              worst, kOracleTol, bin_mismatches, t, kOracleSeconds)};
}

Outcome estimator_recovery() {
  const auto t0 = Clock::now();
  int ar_ok = 0, ma_ok = 0, arma_ok = 0;
  for (int i = 0; i < kRecoverySeeds; ++i) {
    const std::uint64_t seed = 5000 + static_cast<std::uint64_t>(i);
    const auto ar = fit_ar(ht::simulate_arma(std::vector<double>{0.5, -0.25}, {}, kRecoveryLength, seed), 2);
    ar_ok += std::fabs(ar[0] - 0.5) <= kArTol && std::fabs(ar[1] + 0.25) <= kArTol;
    const auto ma = fit_ma(ht::simulate_arma({}, std::vector<double>{0.5}, kRecoveryLength, seed), 1);
    ma_ok += std::fabs(ma[0] - 0.5) <= kMaTol;
    const auto arma = fit_arma(ht::simulate_arma(std::vector<double>{0.5}, std::vector<double>{0.3},
                                                 kRecoveryLength, seed),
                               1, 1)
                          .coefficients;
    arma_ok += std::fabs(arma[0] - 0.5) <= kArmaTol && std::fabs(arma[1] - 0.3) <= kArmaTol;
  }
  const double t = seconds_since(t0);
  const bool pass = ar_ok >= kRecoveryNeeded && ma_ok >= kRecoveryNeeded && arma_ok >= kRecoveryNeeded &&
                    t < kRecoverySeconds;
  return {pass, fmt("AR(2) %d/%d, MA(1) %d/%d, ARMA(1,1) %d/%d (need %d), %.1fs (limit %.0fs)", ar_ok,
                    kRecoverySeeds, ma_ok, kRecoverySeeds, arma_ok, kRecoverySeeds, kRecoveryNeeded, t,
                    kRecoverySeconds)};
}

Window filled_window(std::size_t n, const std::function<double(std::size_t, int)>& f) {
  Window w;
  for (std::size_t i = 0; i < n; ++i) {
    w.x.push_back(f(i, 0));
    w.y.push_back(f(i, 1));
    w.z.push_back(f(i, 2));
  }
  return w;
}

Outcome bank_widths() {
  std::mt19937_64 rng(3003);
  std::vector<Window> windows;
  for (int i = 0; i < kFuzzWindows; ++i) windows.push_back(ht::random_window(rng, 4 + rng() % 300));
  for (double c : {0.0, -9.81, 1e6, 1e-300}) {
    windows.push_back(filled_window(75, [c](std::size_t, int) { return c; }));
    windows.push_back(filled_window(75, [c](std::size_t i, int a) { return c + (i == 37 && a == 1 ? 1e-12 : 0.0); }));
    windows.push_back(
        filled_window(75, [c](std::size_t i, int) { return c * (1.0 + 1e-15 * static_cast<double>(i % 3)); }));
  }
  std::size_t bad = 0;
  for (const auto& w : windows) {
    const auto a = extract_bank_a(w).values;
    const auto b = extract_bank_b(w).values;
    const bool ok = a.size() == 43 && b.size() == 70 &&
                    std::ranges::all_of(a, [](double v) { return std::isfinite(v); }) &&
                    std::ranges::all_of(b, [](double v) { return std::isfinite(v); });
    bad += ok ? 0 : 1;
  }
  return {bad == 0, fmt("%zu windows (incl. constant and near-constant), %zu with wrong width or non-finite values",
                        windows.size(), bad)};
}

Matrix xor_points(double lo) {
  Matrix m;
  for (auto [a, b] : {std::pair{lo, lo}, std::pair{1.0, 1.0}, std::pair{lo, 1.0}, std::pair{1.0, lo}}) {
    m.append_row(std::vector<double>{a, b});
  }
  return m;
}

Outcome classifier_properties() {
  std::vector<std::string> failures;
  const auto train_set = ht::gaussian_blobs(4001, 5, 16, 8, 1.2, 1.0);
  const auto probe = ht::gaussian_blobs(4002, 5, 8, 8, 1.2, 1.5);

  // Column permutations.
  for (ModelKind k : {ModelKind::Knn, ModelKind::NaiveBayes, ModelKind::Svm}) {
    const auto base = train(ModelSpec::defaults(k), train_set.x, train_set.y);
    std::vector<Activity> expected;
    for (std::size_t i = 0; i < probe.x.rows(); ++i) expected.push_back(predict(base, probe.x.row(i)).label);
    int changed = 0;
    for (int p = 0; p < kColumnPermutations; ++p) {
      const auto order = make_permutation(9000 + static_cast<std::uint64_t>(p), train_set.x.cols()).order;
      const auto m = train(ModelSpec::defaults(k), permute_columns(train_set.x, order), train_set.y);
      const Matrix px = permute_columns(probe.x, order);
      for (std::size_t i = 0; i < px.rows(); ++i) changed += predict(m, px.row(i)).label != expected[i];
    }
    if (changed) failures.push_back(fmt("%s permutation changed %d labels", std::string(model_label(k)).c_str(), changed));
  }

  // XOR with the default C = 1 on centred corners, as z-scoring presents them.
  {
    const Matrix x = xor_points(-1.0);
    const std::vector<Activity> y{Activity::Walking, Activity::Walking, Activity::Jogging, Activity::Jogging};
    const auto m = train(ModelSpec::defaults(ModelKind::Svm), x, y);
    int ok = 0;
    for (std::size_t i = 0; i < 4; ++i) ok += predict(m, x.row(i)).label == y[i];
    if (ok != 4) failures.push_back(fmt("XOR training accuracy %d/4", ok));
  }

  // One bagged learner against an independent bootstrap and tree.
  {
    const auto data = ht::gaussian_blobs(4003, 4, 25, 3, 1.5, 1.0);
    int mismatches = 0;
    for (std::uint64_t seed : {0ull, 17ull, 123456789ull}) {
      ModelSpec s = ModelSpec::defaults(ModelKind::Bagging, seed);
      std::get<BaggingParams>(s.params).n_learners = 1;
      const auto bag = train(s, data.x, data.y);
      std::mt19937_64 rng(seed);
      std::uniform_int_distribution<std::size_t> pick(0, data.x.rows() - 1);
      Matrix bx;
      std::vector<Activity> by;
      for (std::size_t i = 0; i < data.x.rows(); ++i) {
        const std::size_t r = pick(rng);
        bx.append_row(data.x.row(r));
        by.push_back(data.y[r]);
      }
      const auto tree = DecisionTree::fit(bx, by, std::numeric_limits<std::size_t>::max());
      mismatches += std::get<BaggedTrees>(bag.impl()).trees.front() == tree ? 0 : 1;
      std::mt19937_64 q(seed ^ 0x5a);
      std::normal_distribution<double> normal(0, 3);
      for (int t = 0; t < 300; ++t) {
        const std::vector<double> v{normal(q), normal(q), normal(q)};
        mismatches += predict(bag, v).label != tree.predict(v).label;
      }
    }
    if (mismatches) failures.push_back(fmt("bagging oracle mismatches %d", mismatches));
  }

  // Determinism across runs and thread counts.
  {
    const auto data = ht::gaussian_blobs(4004, 5, 30, 6, 1.0, 1.0);
    for (ModelKind k : {ModelKind::DecisionTree, ModelKind::NaiveBayes, ModelKind::Knn, ModelKind::Svm,
                        ModelKind::Bagging}) {
      ModelSpec s = ModelSpec::defaults(k, 77);
      s.threads = 1;
      const auto a = train(s, data.x, data.y);
      const auto b = train(s, data.x, data.y);
      s.threads = 4;
      const auto c = train(s, data.x, data.y);
      bool same = a == b && a == c;
      for (std::size_t i = 0; i < data.x.rows() && same; ++i) {
        const auto pa = predict(a, data.x.row(i));
        const auto pc = predict(c, data.x.row(i));
        same = pa.label == pc.label && pa.score == pc.score;
      }
      if (!same) failures.push_back(fmt("%s not deterministic", std::string(model_label(k)).c_str()));
    }
  }
  std::string detail = fmt("%d permutations x {knn, nb, svm}; XOR; bagging oracle; threads {1, 4}", kColumnPermutations);
  for (const auto& f : failures) detail += "; " + f;
  return {failures.empty(), detail};
}

Outcome cv_accounting() {
  const auto fs = features_at(75);
  std::vector<std::string> failures;
  for (Protocol protocol : {Protocol::Personal, Protocol::Impersonal}) {
    EvalConfig cfg;
    cfg.model = ModelSpec::defaults(ModelKind::NaiveBayes);
    cfg.protocol = protocol;
    cfg.folds = 10;
    cfg.seed = 5;
    std::mutex mu;
    std::vector<int> tested(fs.size(), 0);
    std::size_t leaks = 0;
    std::size_t overlap = 0;
    const auto report = evaluate(cfg, fs, [&](const SplitTrace& t) {
      const std::set<std::size_t> test(t.test.begin(), t.test.end());
      std::size_t local_overlap = 0;
      for (std::size_t i : t.train) local_overlap += test.count(i);
      const auto expected = fit_normalizer(fs.values.select_rows(t.train));
      const bool leak = t.normalizer == nullptr || t.normalizer->mean != expected.mean ||
                        t.normalizer->stddev != expected.stddev;
      std::lock_guard lock(mu);
      overlap += local_overlap;
      leaks += leak ? 1 : 0;
      for (std::size_t i : t.test) tested[i]++;
    });
    std::size_t total = 0;
    for (const auto& row : report.confusion) {
      for (std::size_t v : row) total += v;
    }
    const auto wrong = std::ranges::count_if(tested, [](int h) { return h != 1; });
    if (wrong || total != fs.size() || leaks || overlap) {
      failures.push_back(fmt("%s: %zd instances not tested once, confusion total %zu vs %zu, %zu leaky splits, %zu "
                             "train/test overlaps",
                             std::string(protocol_label(protocol)).c_str(), static_cast<std::ptrdiff_t>(wrong), total,
                             fs.size(), leaks, overlap));
    }
  }
  std::string detail = fmt("%zu instances, personal 10-fold and LOSO", fs.size());
  for (const auto& f : failures) detail += "; " + f;
  return {failures.empty(), detail};
}

Outcome statistics() {
  std::mt19937_64 rng(6006);
  std::uniform_int_distribution<std::size_t> len(2, 30);
  std::uniform_real_distribution<double> acc(0.5, 1.0);
  std::uniform_real_distribution<double> gap(-0.1, 0.1);
  double worst = 0.0;
  for (int t = 0; t < kStatsVectors; ++t) {
    const std::size_t n = len(rng);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = acc(rng);
      b[i] = std::clamp(a[i] + gap(rng) - 0.02, 0.0, 1.0);
    }
    const auto ci = confidence_interval(a, kCiLevel);
    const auto [m, h] = ht::oracle_ci(a, kCiLevel);
    worst = std::max({worst, std::fabs(ci.mean - static_cast<double>(m)), std::fabs(ci.halfwidth - static_cast<double>(h))});
    const auto r = paired_t_test(a, b);
    const long double t_ref = ht::oracle_paired_t(a, b);
    worst = std::max(worst, std::fabs(r.t - static_cast<double>(t_ref)) / std::max(1.0, std::fabs(r.t)));
    worst = std::max(worst, std::fabs(r.p - static_cast<double>(ht::oracle_two_sided_p(t_ref, n - 1.0L))));
  }
  return {worst <= kStatsTol, fmt("%d vectors, max deviation %.3g (tol %.0e)", kStatsVectors, worst, kStatsTol)};
}

EvalConfig tree_config(Protocol protocol) {
  EvalConfig cfg;
  cfg.model = ModelSpec::defaults(ModelKind::DecisionTree);
  cfg.bank = Bank::B70;
  cfg.treatment = kNrRp;
  cfg.protocol = protocol;
  cfg.samples_per_window = 75;
  return cfg;
}

Outcome tree_trend() {
  const auto t0 = Clock::now();
  const auto fs = features_at(75);
  const auto personal = evaluate(tree_config(Protocol::Personal), fs);
  const auto impersonal = evaluate(tree_config(Protocol::Impersonal), fs);
  const double t = seconds_since(t0);
  bool per_activity = true;
  std::string recalls;
  for (std::size_t a = 0; a < kActivityCount; ++a) {
    const double p = personal.per_activity_unit_mean_recall[a];
    const double i = impersonal.per_activity_unit_mean_recall[a];
    per_activity &= p >= i;
    recalls += fmt(" %s %.3f/%.3f", std::string(activity_label(kAllActivities[a])).c_str(), p, i);
  }
  const bool pass = personal.unit_mean_accuracy >= kPersonalFloor &&
                    impersonal.unit_mean_accuracy >= kImpersonalFloor && per_activity && t < kTrendSeconds;
  return {pass, fmt("subject-mean accuracy personal %.4f±%.4f (>= %.2f), impersonal %.4f±%.4f (>= %.2f); pooled "
                    "%.4f/%.4f; recall personal/impersonal:%s; %.1fs (limit %.0fs)",
                    personal.unit_mean_accuracy, personal.ci_halfwidth, kPersonalFloor, impersonal.unit_mean_accuracy,
                    impersonal.ci_halfwidth, kImpersonalFloor, personal.overall_accuracy, impersonal.overall_accuracy,
                    recalls.c_str(), t, kTrendSeconds)};
}

Outcome window_sweep_trend() {
  const auto t0 = Clock::now();
  const auto sizes = default_window_sizes();
  PipelineOptions opts;
  opts.bank = Bank::B70;
  EvalConfig cfg = tree_config(Protocol::Personal);
  cfg.model = ModelSpec::defaults(ModelKind::Knn);
  const auto knn = window_sweep(cfg, dataset().recordings, sizes, opts);
  cfg.model = ModelSpec::defaults(ModelKind::DecisionTree);
  const auto tree = window_sweep(cfg, dataset().recordings, sizes, opts);
  const double t = seconds_since(t0);
  const double drop = knn.at(25).unit_mean_accuracy - knn.at(300).unit_mean_accuracy;
  double lo = 1.0, hi = 0.0;
  std::string curve;
  for (std::size_t w : sizes) {
    lo = std::min(lo, tree.at(w).unit_mean_accuracy);
    hi = std::max(hi, tree.at(w).unit_mean_accuracy);
    curve += fmt(" %zu:%.3f/%.3f", w, knn.at(w).unit_mean_accuracy, tree.at(w).unit_mean_accuracy);
  }
  const bool pass = drop >= kKnnDrop && hi - lo <= kTreeSpread && t < kSweepSeconds;
  return {pass, fmt("subject-mean accuracy; knn drop 25->300 %.4f (>= %.2f), tree spread %.4f (<= %.2f), %zu points, %.1fs (limit %.0fs); "
                    "window:knn/tree%s",
                    drop, kKnnDrop, hi - lo, kTreeSpread, sizes.size(), t, kSweepSeconds, curve.c_str())};
}

// Multiplies each feature column by 10^U(-decades, decades).
FeatureSet rescaled(FeatureSet fs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> exponent(-kRescaleDecades, kRescaleDecades);
  for (std::size_t j = 0; j < fs.values.cols(); ++j) {
    const double s = std::pow(10.0, exponent(rng));
    for (std::size_t i = 0; i < fs.values.rows(); ++i) fs.values(i, j) *= s;
  }
  return fs;
}

Outcome normalization_effect() {
  const auto base = features_at(75);
  std::vector<std::string> parts;
  bool pass = true;
  for (ModelKind kind : {ModelKind::Knn, ModelKind::Svm}) {
    double nr = 0.0, unr = 0.0;
    std::string draws;
    for (std::uint64_t seed = 1; seed <= kRescaleSeeds; ++seed) {
      const auto fs = rescaled(base, seed);
      EvalConfig cfg = tree_config(Protocol::Personal);
      cfg.model = ModelSpec::defaults(kind);
      cfg.treatment = kNrRp;
      const double a = evaluate(cfg, fs).unit_mean_accuracy;
      cfg.treatment = kUnrRp;
      const double b = evaluate(cfg, fs).unit_mean_accuracy;
      nr += a / kRescaleSeeds;
      unr += b / kRescaleSeeds;
      draws += fmt(" %.3f/%.3f", a, b);
    }
    pass &= nr >= unr;
    parts.push_back(fmt("%s nr-rp %.4f vs unr-rp %.4f (draws%s)", std::string(model_label(kind)).c_str(), nr, unr,
                        draws.c_str()));
  }
  std::string detail = fmt("subject-mean accuracy, mean over %llu rescalings of 10^U(-3,3) per column:", static_cast<unsigned long long>(kRescaleSeeds));
  for (const auto& p : parts) detail += " " + p + ";";
  return {pass, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"feature-oracles", feature_oracles},
      {"estimator-recovery", estimator_recovery},
      {"bank-widths", bank_widths},
      {"classifier-properties", classifier_properties},
      {"cv-accounting", cv_accounting},
      {"statistics", statistics},
      {"tree-trend", tree_trend},
      {"window-sweep", window_sweep_trend},
      {"normalization-effect", normalization_effect},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
