#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "har/matrix.hpp"
#include "har/types.hpp"

namespace har {

enum class ModelKind { DecisionTree, NaiveBayes, Knn, Svm, Bagging };

std::string_view model_label(ModelKind kind) noexcept;  // dtree, nb, knn, svm, bag
ModelKind parse_model_kind(std::string_view label);

struct TreeParams {
  /// Growth budget: total number of internal splits.
  std::size_t max_splits = 85;
};

struct NaiveBayesParams {
  double variance_floor = 1e-9;
};

struct KnnParams {
  std::size_t k = 10;
};

struct SvmParams {
  double c = 1.0;
  double tolerance = 1e-3;
  /// Iteration cap per binary machine is max(iterations_per_instance * n, 10000).
  std::size_t iterations_per_instance = 10;
};

struct BaggingParams {
  std::size_t n_learners = 50;
};

using ModelParams =
    std::variant<TreeParams, NaiveBayesParams, KnnParams, SvmParams, BaggingParams>;

struct ModelSpec {
  ModelParams params = TreeParams{};
  std::uint64_t seed = 0;
  /// Worker threads for bagging learners and SVM class pairs. Never changes
  /// the fitted model.
  std::size_t threads = 1;

  ModelKind kind() const noexcept { return static_cast<ModelKind>(params.index()); }
  static ModelSpec defaults(ModelKind kind, std::uint64_t seed = 0);
  void validate() const;
};

struct Prediction {
  Activity label = Activity::Walking;
  double score = 0.0;  // vote fraction or posterior, in [0, 1]
};

/// Gini impurity 1 - sum p_i^2 of a class-count histogram.
double gini_impurity(std::span<const std::size_t> class_counts);

/// Binary axis-aligned CART tree grown best-first by impurity decrease.
class DecisionTree {
 public:
  struct Node {
    int feature = -1;  // -1 for leaves
    double threshold = 0.0;  // x[feature] <= threshold goes left
    std::int32_t left = -1;
    std::int32_t right = -1;
    Activity label = Activity::Walking;
    double score = 0.0;
    bool operator==(const Node&) const = default;
  };

  static DecisionTree fit(const Matrix& x, std::span<const Activity> y,
                          std::size_t max_splits);
  Prediction predict(std::span<const double> x) const;

  std::size_t split_count() const noexcept;
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::vector<Node>& mutable_nodes() noexcept { return nodes_; }

  bool operator==(const DecisionTree&) const = default;

 private:
  std::vector<Node> nodes_;
};

/// Gaussian naive Bayes, evaluated in the log domain.
class GaussianNaiveBayes {
 public:
  struct ClassModel {
    Activity label;
    double log_prior;
    std::vector<double> mean;
    std::vector<double> variance;
    bool operator==(const ClassModel&) const = default;
  };

  static GaussianNaiveBayes fit(const Matrix& x, std::span<const Activity> y,
                                const NaiveBayesParams& params);
  Prediction predict(std::span<const double> x) const;

  std::vector<ClassModel> classes;
  bool operator==(const GaussianNaiveBayes&) const = default;
};

/// Euclidean k-nearest neighbours over the stored training set.
class KNearestNeighbors {
 public:
  static KNearestNeighbors fit(const Matrix& x, std::span<const Activity> y,
                               const KnnParams& params);
  Prediction predict(std::span<const double> x) const;

  Matrix points;
  std::vector<Activity> labels;
  std::size_t k = 10;
  bool operator==(const KNearestNeighbors&) const = default;
};

/// Quadratic-kernel SVM, K(u, v) = (u.v + 1)^2, one-vs-one, trained by SMO.
class SupportVectorMachine {
 public:
  struct BinaryMachine {
    Activity positive;
    Activity negative;
    std::vector<std::size_t> support;  // rows of `vectors`
    std::vector<double> weight;        // alpha_i * y_i
    double bias = 0.0;
    bool converged = true;
    std::size_t iterations = 0;
    bool operator==(const BinaryMachine&) const = default;
  };

  static SupportVectorMachine fit(const Matrix& x, std::span<const Activity> y,
                                  const SvmParams& params, std::size_t threads = 1);
  Prediction predict(std::span<const double> x) const;
  /// Decision value of one binary machine; > 0 votes for `positive`.
  double decision_value(std::size_t machine, std::span<const double> x) const;
  bool converged() const noexcept;

  Matrix vectors;  // union of the support vectors of all machines
  std::vector<BinaryMachine> machines;
  std::vector<Activity> class_labels;
  bool operator==(const SupportVectorMachine&) const = default;
};

double quadratic_kernel(std::span<const double> u, std::span<const double> v);

/// Bootstrap-aggregated unbounded CART trees; majority vote.
class BaggedTrees {
 public:
  static BaggedTrees fit(const Matrix& x, std::span<const Activity> y,
                         const BaggingParams& params, std::uint64_t seed,
                         std::size_t threads = 1);
  Prediction predict(std::span<const double> x) const;

  /// Learner i draws n indices uniformly with replacement from an mt19937_64
  /// seeded with seed + i, via uniform_int_distribution over [0, n - 1].
  static std::vector<std::size_t> bootstrap_indices(std::uint64_t seed,
                                                    std::size_t learner, std::size_t n);

  std::vector<DecisionTree> trees;
  bool operator==(const BaggedTrees&) const = default;
};

/// Fitted model of any kind with a uniform predict contract.
class TrainedModel {
 public:
  using Impl = std::variant<DecisionTree, GaussianNaiveBayes, KNearestNeighbors,
                            SupportVectorMachine, BaggedTrees>;

  TrainedModel(Impl impl, std::size_t width) : impl_(std::move(impl)), width_(width) {}

  ModelKind kind() const noexcept { return static_cast<ModelKind>(impl_.index()); }
  std::size_t width() const noexcept { return width_; }
  const Impl& impl() const noexcept { return impl_; }

  bool operator==(const TrainedModel&) const = default;

 private:
  Impl impl_;
  std::size_t width_;
};

TrainedModel train(const ModelSpec& spec, const Matrix& x, std::span<const Activity> y);
Prediction predict(const TrainedModel& model, std::span<const double> x);

/// Text dump: header line `har-model 1 <kind> <width>`, then kind-specific
/// records. Doubles use shortest round-trip form, so predictions of a
/// reloaded model are bit-identical.
void save_model(std::ostream& out, const TrainedModel& model);
TrainedModel load_model(std::istream& in);

}  // namespace har
