#include "har/classifiers.hpp"

#include <cmath>

#include "har/error.hpp"

namespace har {

namespace {

constexpr std::array<std::string_view, 5> kModelLabels = {"dtree", "nb", "knn", "svm", "bag"};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::string_view model_label(ModelKind kind) noexcept {
  return kModelLabels[static_cast<std::size_t>(kind)];
}

ModelKind parse_model_kind(std::string_view label) {
  for (std::size_t i = 0; i < kModelLabels.size(); ++i) {
    if (kModelLabels[i] == label) return static_cast<ModelKind>(i);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown classifier '" + std::string(label) + "'");
}

ModelSpec ModelSpec::defaults(ModelKind kind, std::uint64_t seed) {
  ModelSpec spec;
  spec.seed = seed;
  switch (kind) {
    case ModelKind::DecisionTree: spec.params = TreeParams{}; break;
    case ModelKind::NaiveBayes: spec.params = NaiveBayesParams{}; break;
    case ModelKind::Knn: spec.params = KnnParams{}; break;
    case ModelKind::Svm: spec.params = SvmParams{}; break;
    case ModelKind::Bagging: spec.params = BaggingParams{}; break;
  }
  return spec;
}

void ModelSpec::validate() const {
  auto fail = [](const char* what) { throw Error(ErrorCode::InvalidArgument, what); };
  std::visit(Overloaded{
                 [&](const TreeParams& p) {
                   if (p.max_splits < 1) fail("max_splits must be >= 1");
                 },
                 [&](const NaiveBayesParams& p) {
                   if (!(p.variance_floor > 0.0)) fail("variance floor must be positive");
                 },
                 [&](const KnnParams& p) {
                   if (p.k < 1) fail("k must be >= 1");
                 },
                 [&](const SvmParams& p) {
                   if (!(p.c > 0.0) || !std::isfinite(p.c)) fail("C must be positive");
                   if (!(p.tolerance > 0.0)) fail("SVM tolerance must be positive");
                 },
                 [&](const BaggingParams& p) {
                   if (p.n_learners < 1) fail("n_learners must be >= 1");
                 },
             },
             params);
}

TrainedModel train(const ModelSpec& spec, const Matrix& x, std::span<const Activity> y) {
  spec.validate();
  if (x.rows() == 0) throw Error(ErrorCode::EmptyTrainingSet, "no training rows");
  if (y.size() != x.rows()) {
    throw Error(ErrorCode::DimensionMismatch, std::to_string(y.size()) + " labels for " +
                                                  std::to_string(x.rows()) + " rows");
  }
  for (double v : x.data()) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "training data is not finite");
  }
  auto impl = std::visit(
      Overloaded{
          [&](const TreeParams& p) -> TrainedModel::Impl {
            return DecisionTree::fit(x, y, p.max_splits);
          },
          [&](const NaiveBayesParams& p) -> TrainedModel::Impl {
            return GaussianNaiveBayes::fit(x, y, p);
          },
          [&](const KnnParams& p) -> TrainedModel::Impl { return KNearestNeighbors::fit(x, y, p); },
          [&](const SvmParams& p) -> TrainedModel::Impl {
            return SupportVectorMachine::fit(x, y, p, spec.threads);
          },
          [&](const BaggingParams& p) -> TrainedModel::Impl {
            return BaggedTrees::fit(x, y, p, spec.seed, spec.threads);
          },
      },
      spec.params);
  return TrainedModel(std::move(impl), x.cols());
}

Prediction predict(const TrainedModel& model, std::span<const double> x) {
  if (x.size() != model.width()) {
    throw Error(ErrorCode::DimensionMismatch, "model expects width " +
                                                  std::to_string(model.width()) + ", got " +
                                                  std::to_string(x.size()));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "feature vector is not finite");
  }
  return std::visit([&](const auto& m) { return m.predict(x); }, model.impl());
}

}  // namespace har
