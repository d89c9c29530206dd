#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "har/banks.hpp"
#include "har/classifiers.hpp"
#include "har/ingest.hpp"
#include "har/pipeline.hpp"
#include "har/preprocess.hpp"
#include "har/stats.hpp"

namespace har {

/// The preprocessing cases compared in the treatment grid.
struct Treatment {
  bool normalized = true;
  bool permuted = true;

  /// nr-rp, nr-nrp, unr-rp, unr-nrp
  std::string label() const;
  static Treatment parse(std::string_view label);
  bool operator==(const Treatment&) const = default;
};

inline constexpr Treatment kNrRp{true, true};
inline constexpr Treatment kNrNrp{true, false};
inline constexpr Treatment kUnrRp{false, true};

enum class Protocol { Personal, Impersonal };

std::string_view protocol_label(Protocol p) noexcept;  // personal / impersonal
Protocol parse_protocol(std::string_view label);

/// Which accuracy the results rows and tables report: the unweighted mean over
/// units (the centre of the confidence interval) or pooled counts.
enum class Aggregation { UnitMean, Pooled };

std::string_view aggregation_label(Aggregation a) noexcept;  // unit-mean / pooled
Aggregation parse_aggregation(std::string_view label);

struct EvalConfig {
  ModelSpec model = ModelSpec::defaults(ModelKind::DecisionTree);
  Bank bank = Bank::B70;
  std::size_t samples_per_window = 75;
  Treatment treatment = kNrRp;
  Protocol protocol = Protocol::Personal;
  std::size_t folds = 10;
  std::uint64_t seed = 0;
  /// Workers across splits; results are identical for any value.
  std::size_t threads = 1;
  /// Additionally apply one seeded permutation to the feature columns.
  bool permute_columns = false;
  Aggregation aggregation = Aggregation::UnitMean;
};

using Fold = std::vector<std::size_t>;

/// Stratified k-fold partition of positions 0..n-1. Within each label stratum,
/// fold f takes the f-th contiguous chunk in the given order (sizes differ by
/// at most one); with a seed, each stratum is shuffled first.
/// Throws InvalidArgument for k < 2 and TooFewInstances for n < k.
std::vector<Fold> kfold_split(std::span<const Activity> labels, std::size_t k,
                              std::optional<std::uint64_t> shuffle_seed = std::nullopt);

struct Split {
  std::string unit;
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// One split per distinct subject (in order of first appearance): that
/// subject's positions are the test set. Throws SingleSubject.
std::vector<Split> loso_split(std::span<const std::string> subject_ids);

using ConfusionMatrix = std::array<std::array<std::size_t, kActivityCount>, kActivityCount>;

/// Per-unit outcome (a subject in both protocols).
struct UnitResult {
  std::string unit;
  ConfusionMatrix confusion{};
  double accuracy = 0.0;
  /// NaN for activities absent from this unit's test data.
  std::array<double, kActivityCount> recall{};
};

struct EvalReport {
  /// Pooled: confusion trace / total.
  double overall_accuracy = 0.0;
  /// Pooled recall per activity (row-normalised diagonal); NaN if absent.
  std::array<double, kActivityCount> per_activity_recall{};
  /// Unweighted mean of the unit recalls per activity; NaN if absent.
  std::array<double, kActivityCount> per_activity_unit_mean_recall{};
  /// Half-width of the CI over unit recalls, per activity.
  std::array<double, kActivityCount> per_activity_ci_halfwidth{};
  ConfusionMatrix confusion{};  // rows: true activity, columns: predicted
  std::vector<UnitResult> units;
  std::vector<double> per_unit_accuracies;
  /// Unweighted mean of the unit accuracies, the centre of the CI.
  double unit_mean_accuracy = 0.0;
  double ci_halfwidth = 0.0;
  std::size_t n_units = 0;
  /// Binary SVM machines that hit their iteration cap.
  std::size_t unconverged_machines = 0;
};

/// What the evaluator saw for one train/test split; for instrumentation.
struct SplitTrace {
  std::string unit;
  std::size_t split_index = 0;
  std::span<const std::size_t> train;
  std::span<const std::size_t> test;
  const Normalizer* normalizer = nullptr;  // null when not normalising
};

/// Called once per split, possibly from worker threads.
using SplitObserver = std::function<void(const SplitTrace&)>;

/// Personal: per subject, stratified k-fold on that subject's instances.
/// Impersonal: leave-one-subject-out. Permutation (if enabled) reorders the
/// instances before fold assignment; the normaliser is fit on each split's
/// training side only. Model seeds are `seed ^ split_index`.
EvalReport evaluate(const EvalConfig& config, const FeatureSet& features,
                    const SplitObserver& observer = {});

/// Assembles the pooled/unit statistics from per-unit confusion matrices.
EvalReport summarize_units(std::vector<UnitResult> units);

std::vector<std::size_t> default_window_sizes();  // 25, 50, ..., 300

using SweepResult = std::map<std::size_t, EvalReport>;

/// For each window size: re-segment, re-extract, evaluate. The base config's
/// samples_per_window is ignored.
SweepResult window_sweep(const EvalConfig& base, std::span<const Recording> recordings,
                         std::span<const std::size_t> sizes,
                         const PipelineOptions& pipeline);

// ---------------------------------------------------------------------------
// Results files

/// One line of the results CSV
/// `protocol,classifier,bank,treatment,window,activity,metric,value,ci_halfwidth,n_units`.
/// Metrics: `accuracy` (activity = overall), `recall`, and per-unit
/// `unit_accuracy[<unit>]` / `unit_recall[<unit>]`. Accuracy and recall
/// values follow the config's aggregation.
struct ResultRow {
  std::string protocol;
  std::string classifier;
  std::string bank;
  std::string treatment;
  std::size_t window = 0;
  std::string activity;
  std::string metric;
  double value = 0.0;
  double ci_halfwidth = 0.0;
  std::size_t n_units = 0;

  bool operator==(const ResultRow&) const = default;
};

inline constexpr std::string_view kResultsHeader =
    "protocol,classifier,bank,treatment,window,activity,metric,value,ci_halfwidth,n_units";

std::vector<ResultRow> report_rows(const EvalConfig& config, const EvalReport& report);
void write_results_csv(std::ostream& out, std::span<const ResultRow> rows);
std::vector<ResultRow> parse_results_csv(std::istream& in);

/// Markdown table: one row per activity plus overall, "mean±halfwidth".
std::string report_markdown(const EvalConfig& config, const EvalReport& report);

}  // namespace har
