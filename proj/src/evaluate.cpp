#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "har/error.hpp"
#include "har/eval.hpp"
#include "har/numeric.hpp"
#include "har/parallel.hpp"
#include "har/pipeline.hpp"

namespace har {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Task {
  std::size_t unit = 0;
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

struct TaskResult {
  ConfusionMatrix confusion{};
  std::size_t unconverged = 0;
};

std::vector<std::string> distinct_in_order(std::span<const std::string> ids) {
  std::vector<std::string> out;
  for (const auto& s : ids) {
    if (std::ranges::find(out, s) == out.end()) out.push_back(s);
  }
  return out;
}

std::vector<std::size_t> identity_or_permutation(bool permuted, std::uint64_t seed, std::size_t n) {
  if (permuted) return make_permutation(seed, n).order;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return order;
}

std::vector<Task> personal_tasks(const EvalConfig& cfg, const FeatureSet& fs,
                                 const std::vector<std::string>& units) {
  std::vector<Task> tasks;
  for (std::size_t u = 0; u < units.size(); ++u) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      if (fs.subjects[i] == units[u]) members.push_back(i);
    }
    if (members.size() < cfg.folds) {
      throw Error(ErrorCode::TooFewInstances,
                  "subject '" + units[u] + "' has " + std::to_string(members.size()) +
                      " instances, fewer than " + std::to_string(cfg.folds) + " folds");
    }
    const auto order =
        identity_or_permutation(cfg.treatment.permuted, mix_seed(cfg.seed, u), members.size());
    std::vector<std::size_t> seq;
    std::vector<Activity> seq_labels;
    for (std::size_t p : order) {
      seq.push_back(members[p]);
      seq_labels.push_back(fs.labels[members[p]]);
    }
    const auto folds = kfold_split(seq_labels, cfg.folds);
    std::vector<std::size_t> fold_of(seq.size());
    for (std::size_t f = 0; f < folds.size(); ++f) {
      for (std::size_t pos : folds[f]) fold_of[pos] = f;
    }
    for (std::size_t f = 0; f < folds.size(); ++f) {
      Task t{u, {}, {}};
      for (std::size_t pos = 0; pos < seq.size(); ++pos) {
        (fold_of[pos] == f ? t.test : t.train).push_back(seq[pos]);
      }
      tasks.push_back(std::move(t));
    }
  }
  return tasks;
}

std::vector<Task> impersonal_tasks(const EvalConfig& cfg, const FeatureSet& fs,
                                   const std::vector<std::string>& units) {
  const auto seq = identity_or_permutation(cfg.treatment.permuted, cfg.seed, fs.size());
  std::vector<std::string> seq_subjects;
  for (std::size_t i : seq) seq_subjects.push_back(fs.subjects[i]);
  std::vector<Task> tasks;
  for (auto& split : loso_split(seq_subjects)) {
    Task t;
    t.unit = static_cast<std::size_t>(std::ranges::find(units, split.unit) - units.begin());
    for (std::size_t p : split.train) t.train.push_back(seq[p]);
    for (std::size_t p : split.test) t.test.push_back(seq[p]);
    tasks.push_back(std::move(t));
  }
  return tasks;
}

}  // namespace

std::string Treatment::label() const {
  return std::string(normalized ? "nr" : "unr") + (permuted ? "-rp" : "-nrp");
}

Treatment Treatment::parse(std::string_view label) {
  for (bool n : {true, false}) {
    for (bool p : {true, false}) {
      const Treatment t{n, p};
      if (t.label() == label) return t;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown treatment '" + std::string(label) + "'");
}

std::string_view protocol_label(Protocol p) noexcept {
  return p == Protocol::Personal ? "personal" : "impersonal";
}

Protocol parse_protocol(std::string_view label) {
  if (label == "personal") return Protocol::Personal;
  if (label == "impersonal") return Protocol::Impersonal;
  throw Error(ErrorCode::InvalidArgument, "unknown protocol '" + std::string(label) + "'");
}

std::string_view aggregation_label(Aggregation a) noexcept {
  return a == Aggregation::UnitMean ? "unit-mean" : "pooled";
}

Aggregation parse_aggregation(std::string_view label) {
  if (label == "unit-mean") return Aggregation::UnitMean;
  if (label == "pooled") return Aggregation::Pooled;
  throw Error(ErrorCode::InvalidArgument, "unknown aggregation '" + std::string(label) + "'");
}

EvalReport evaluate(const EvalConfig& config, const FeatureSet& features,
                    const SplitObserver& observer) {
  config.model.validate();
  if (features.size() == 0) throw Error(ErrorCode::TooFewInstances, "no feature vectors to evaluate");
  if (features.labels.size() != features.values.rows() ||
      features.subjects.size() != features.values.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "feature set columns are inconsistent");
  }

  Matrix x = features.values;
  if (config.permute_columns) {
    x = permute_columns(x, make_permutation(mix_seed(config.seed, 0xc01), x.cols()).order);
  }
  const auto units = distinct_in_order(features.subjects);
  std::vector<Task> tasks;
  if (config.protocol == Protocol::Personal) {
    if (config.folds < 2) throw Error(ErrorCode::InvalidArgument, "k-fold needs k >= 2");
    tasks = personal_tasks(config, features, units);
  } else {
    std::size_t classes = 0;
    for (Activity a : kAllActivities) {
      classes += std::ranges::find(features.labels, a) != features.labels.end() ? 1 : 0;
    }
    if (units.size() >= 2 && classes < 2) {
      throw Error(ErrorCode::TooFewInstances, "impersonal evaluation needs at least 2 classes");
    }
    tasks = impersonal_tasks(config, features, units);
  }

  std::vector<TaskResult> results(tasks.size());
  parallel_for(tasks.size(), config.threads, [&](std::size_t s) {
    const Task& task = tasks[s];
    Matrix train_x = x.select_rows(task.train);
    Matrix test_x = x.select_rows(task.test);
    std::vector<Activity> train_y;
    for (std::size_t i : task.train) train_y.push_back(features.labels[i]);

    std::optional<Normalizer> norm;
    if (config.treatment.normalized) {
      norm = fit_normalizer(train_x);
      train_x = apply_normalizer(*norm, train_x);
      test_x = apply_normalizer(*norm, test_x);
    }
    if (observer) {
      observer(SplitTrace{units[task.unit], s, task.train, task.test, norm ? &*norm : nullptr});
    }

    ModelSpec spec = config.model;
    spec.seed = config.seed ^ static_cast<std::uint64_t>(s);
    const TrainedModel model = train(spec, train_x, train_y);
    if (const auto* svm = std::get_if<SupportVectorMachine>(&model.impl())) {
      results[s].unconverged = static_cast<std::size_t>(std::ranges::count_if(
          svm->machines, [](const auto& m) { return !m.converged; }));
    }
    for (std::size_t r = 0; r < task.test.size(); ++r) {
      const Activity truth = features.labels[task.test[r]];
      results[s].confusion[index(truth)][index(predict(model, test_x.row(r)).label)]++;
    }
  });

  std::vector<UnitResult> unit_results(units.size());
  for (std::size_t u = 0; u < units.size(); ++u) unit_results[u].unit = units[u];
  std::size_t unconverged = 0;
  for (std::size_t s = 0; s < tasks.size(); ++s) {
    auto& c = unit_results[tasks[s].unit].confusion;
    for (std::size_t i = 0; i < kActivityCount; ++i) {
      for (std::size_t j = 0; j < kActivityCount; ++j) c[i][j] += results[s].confusion[i][j];
    }
    unconverged += results[s].unconverged;
  }
  EvalReport report = summarize_units(std::move(unit_results));
  report.unconverged_machines = unconverged;
  return report;
}

EvalReport summarize_units(std::vector<UnitResult> units) {
  EvalReport report;
  std::array<std::vector<double>, kActivityCount> unit_recalls;
  for (auto& unit : units) {
    std::size_t correct = 0;
    std::size_t total = 0;
    for (std::size_t i = 0; i < kActivityCount; ++i) {
      std::size_t row = 0;
      for (std::size_t j = 0; j < kActivityCount; ++j) {
        row += unit.confusion[i][j];
        report.confusion[i][j] += unit.confusion[i][j];
      }
      correct += unit.confusion[i][i];
      total += row;
      unit.recall[i] = row == 0 ? kNaN
                                : static_cast<double>(unit.confusion[i][i]) / static_cast<double>(row);
      if (row > 0) unit_recalls[i].push_back(unit.recall[i]);
    }
    unit.accuracy = total == 0 ? kNaN : static_cast<double>(correct) / static_cast<double>(total);
    if (total > 0) report.per_unit_accuracies.push_back(unit.accuracy);
  }

  std::size_t correct = 0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < kActivityCount; ++i) {
    std::size_t row = 0;
    for (std::size_t j = 0; j < kActivityCount; ++j) row += report.confusion[i][j];
    correct += report.confusion[i][i];
    total += row;
    report.per_activity_recall[i] =
        row == 0 ? kNaN : static_cast<double>(report.confusion[i][i]) / static_cast<double>(row);
    report.per_activity_ci_halfwidth[i] = 0.0;
    if (unit_recalls[i].size() >= 2) {
      const Interval ci = confidence_interval(unit_recalls[i]);
      report.per_activity_unit_mean_recall[i] = ci.mean;
      report.per_activity_ci_halfwidth[i] = ci.halfwidth;
    } else {
      report.per_activity_unit_mean_recall[i] = unit_recalls[i].empty() ? kNaN : unit_recalls[i].front();
    }
  }
  report.overall_accuracy =
      total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
  report.n_units = report.per_unit_accuracies.size();
  if (report.n_units >= 2) {
    const Interval ci = confidence_interval(report.per_unit_accuracies);
    report.unit_mean_accuracy = ci.mean;
    report.ci_halfwidth = ci.halfwidth;
  } else if (report.n_units == 1) {
    report.unit_mean_accuracy = report.per_unit_accuracies.front();
  }
  report.units = std::move(units);
  return report;
}

std::vector<std::size_t> default_window_sizes() {
  std::vector<std::size_t> sizes;
  for (std::size_t s = 25; s <= 300; s += 25) sizes.push_back(s);
  return sizes;
}

SweepResult window_sweep(const EvalConfig& base, std::span<const Recording> recordings,
                         std::span<const std::size_t> sizes, const PipelineOptions& pipeline) {
  if (sizes.empty()) throw Error(ErrorCode::InvalidArgument, "window sweep needs at least one size");
  SweepResult out;
  for (std::size_t size : sizes) {
    PipelineOptions opts = pipeline;
    opts.bank = base.bank;
    opts.samples_per_window = size;
    const FeatureSet fs = build_feature_set(recordings, opts);

    std::size_t expected = 0;
    for (const auto& rec : recordings) {
      if (!opts.sensor || rec.sensor == *opts.sensor) expected += rec.samples.size() / size;
    }
    if (fs.size() != expected) {
      throw Error(ErrorCode::InvalidArgument, "window count mismatch at size " + std::to_string(size));
    }
    EvalConfig cfg = base;
    cfg.samples_per_window = size;
    out.emplace(size, evaluate(cfg, fs));
  }
  return out;
}

}  // namespace har
