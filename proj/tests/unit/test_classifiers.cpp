#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "har/classifiers.hpp"
#include "har/error.hpp"
#include "har/preprocess.hpp"
#include "oracles.hpp"

using namespace har;
using har::testing::gaussian_blobs;

namespace {

constexpr std::array<ModelKind, 5> kKinds = {ModelKind::DecisionTree, ModelKind::NaiveBayes, ModelKind::Knn,
                                             ModelKind::Svm, ModelKind::Bagging};

Matrix rows(std::initializer_list<std::vector<double>> r) {
  Matrix m;
  for (const auto& row : r) m.append_row(row);
  return m;
}

ModelSpec spec_for(ModelKind kind, std::uint64_t seed = 3) {
  ModelSpec s = ModelSpec::defaults(kind, seed);
  if (auto* b = std::get_if<BaggingParams>(&s.params)) b->n_learners = 7;
  return s;
}

double training_accuracy(const TrainedModel& m, const Matrix& x, std::span<const Activity> y) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < x.rows(); ++i) ok += predict(m, x.row(i)).label == y[i] ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(x.rows());
}

}  // namespace

TEST(Classifiers, SingleClassTrainingPredictsThatClass) {
  const Matrix x = rows({{0, 1}, {2, 3}, {4, 5}});
  const std::vector<Activity> y(3, Activity::Running);
  for (ModelKind k : kKinds) {
    const auto m = train(spec_for(k), x, y);
    EXPECT_EQ(predict(m, std::vector<double>{10, -10}).label, Activity::Running) << model_label(k);
  }
}

TEST(Classifiers, ContractErrors) {
  const Matrix x = rows({{0, 1}, {2, 3}});
  const std::vector<Activity> y{Activity::Walking, Activity::Jogging};
  for (ModelKind k : kKinds) {
    try {
      train(spec_for(k), Matrix{}, std::vector<Activity>{});
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::EmptyTrainingSet);
    }
    try {
      train(spec_for(k), x, std::vector<Activity>{Activity::Walking});
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
    const auto m = train(spec_for(k), x, y);
    try {
      predict(m, std::vector<double>{1, 2, 3});
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
  }
  ModelSpec bad = ModelSpec::defaults(ModelKind::Knn);
  std::get<KnnParams>(bad.params).k = 0;
  EXPECT_THROW(bad.validate(), Error);
  bad = ModelSpec::defaults(ModelKind::Svm);
  std::get<SvmParams>(bad.params).c = 0;
  EXPECT_THROW(bad.validate(), Error);
  bad = ModelSpec::defaults(ModelKind::Bagging);
  std::get<BaggingParams>(bad.params).n_learners = 0;
  EXPECT_THROW(bad.validate(), Error);
  bad = ModelSpec::defaults(ModelKind::DecisionTree);
  std::get<TreeParams>(bad.params).max_splits = 0;
  EXPECT_THROW(bad.validate(), Error);
  EXPECT_EQ(parse_model_kind("svm"), ModelKind::Svm);
  EXPECT_THROW(parse_model_kind("elm"), Error);
}

TEST(Classifiers, DefaultsFollowConfiguredHyperparameters) {
  EXPECT_EQ(std::get<TreeParams>(ModelSpec::defaults(ModelKind::DecisionTree).params).max_splits, 85u);
  EXPECT_EQ(std::get<KnnParams>(ModelSpec::defaults(ModelKind::Knn).params).k, 10u);
  EXPECT_EQ(std::get<BaggingParams>(ModelSpec::defaults(ModelKind::Bagging).params).n_learners, 50u);
  EXPECT_EQ(std::get<SvmParams>(ModelSpec::defaults(ModelKind::Svm).params).c, 1.0);
}

TEST(Tree, GiniAndSimpleSplits) {
  EXPECT_DOUBLE_EQ(gini_impurity(std::vector<std::size_t>{5, 5}), 0.5);
  EXPECT_DOUBLE_EQ(gini_impurity(std::vector<std::size_t>{7, 0, 0}), 0.0);

  const Matrix pure = rows({{1}, {2}, {3}});
  const auto leaf = DecisionTree::fit(pure, std::vector<Activity>(3, Activity::Jogging), 85);
  EXPECT_EQ(leaf.nodes().size(), 1u);
  EXPECT_EQ(leaf.split_count(), 0u);

  const Matrix x = rows({{-3}, {-2}, {-0.5}, {0}, {1}, {4}});
  const std::vector<Activity> y{Activity::Walking, Activity::Walking, Activity::Walking,
                                Activity::Running, Activity::Running, Activity::Running};
  const auto tree = DecisionTree::fit(x, y, 85);
  EXPECT_EQ(tree.split_count(), 1u);
  EXPECT_DOUBLE_EQ(tree.nodes()[0].threshold, -0.25);
  for (std::size_t i = 0; i < x.rows(); ++i) EXPECT_EQ(tree.predict(x.row(i)).label, y[i]);
}

TEST(Tree, MajorityTieGoesToSmallestCode) {
  const Matrix x = rows({{1}, {1}});
  const auto tree = DecisionTree::fit(x, std::vector<Activity>{Activity::Jogging, Activity::WalkingUpstairs}, 85);
  EXPECT_EQ(tree.nodes().size(), 1u);
  EXPECT_EQ(tree.predict(std::vector<double>{1}).label, Activity::WalkingUpstairs);
}

TEST(Tree, BlobsAreFitPerfectlyLikeNearestCentroid) {
  const auto blobs = gaussian_blobs(12, 3, 40, 4, 10.0, 0.5);
  ASSERT_EQ(har::testing::nearest_centroid_accuracy(blobs.x, blobs.y), 1.0);
  const auto m = train(ModelSpec::defaults(ModelKind::DecisionTree), blobs.x, blobs.y);
  EXPECT_EQ(training_accuracy(m, blobs.x, blobs.y), 1.0);
}

TEST(Tree, SplitBudgetIsRespected) {
  const auto blobs = gaussian_blobs(13, 5, 60, 6, 1.0, 1.0);
  for (std::size_t budget : {1u, 5u, 20u}) {
    const auto tree = DecisionTree::fit(blobs.x, blobs.y, budget);
    EXPECT_LE(tree.split_count(), budget);
  }
  const auto unbounded = DecisionTree::fit(blobs.x, blobs.y, std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < blobs.x.rows(); ++i) {
    EXPECT_EQ(unbounded.predict(blobs.x.row(i)).label, blobs.y[i]);
  }
}

TEST(NaiveBayes, LikelihoodDominance) {
  const Matrix x = rows({{-1}, {0}, {1}, {9}, {10}, {11}});
  const std::vector<Activity> y{Activity::WalkingUpstairs, Activity::WalkingUpstairs, Activity::WalkingUpstairs,
                                Activity::WalkingDownstairs, Activity::WalkingDownstairs, Activity::WalkingDownstairs};
  const auto m = train(ModelSpec::defaults(ModelKind::NaiveBayes), x, y);
  EXPECT_EQ(predict(m, std::vector<double>{0}).label, Activity::WalkingUpstairs);
  EXPECT_EQ(predict(m, std::vector<double>{10}).label, Activity::WalkingDownstairs);
}

TEST(NaiveBayes, FloorKeepsScoresFiniteOnFuzzedInputs) {
  const Matrix x = rows({{1, 5}, {1, 6}, {2, 5}, {2, 6}});
  const std::vector<Activity> y{Activity::Walking, Activity::Walking, Activity::Running, Activity::Running};
  const auto m = train(ModelSpec::defaults(ModelKind::NaiveBayes), x, y);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> e(-300, 300);
  for (int t = 0; t < 500; ++t) {
    const std::vector<double> q{std::copysign(std::pow(10.0, e(rng) / 2), e(rng)), std::pow(10.0, e(rng) / 2)};
    const auto p = predict(m, q);
    EXPECT_TRUE(p.score >= 0.0 && p.score <= 1.0) << p.score;
  }
}

TEST(Knn, OneNeighbourReproducesTrainingLabels) {
  const auto blobs = gaussian_blobs(14, 5, 30, 5, 1.0, 1.0);
  ModelSpec s = ModelSpec::defaults(ModelKind::Knn);
  std::get<KnnParams>(s.params).k = 1;
  const auto m = train(s, blobs.x, blobs.y);
  EXPECT_EQ(training_accuracy(m, blobs.x, blobs.y), 1.0);
  const auto& knn = std::get<KNearestNeighbors>(m.impl());
  EXPECT_EQ(knn.points, blobs.x);
}

TEST(Knn, TieBreaking) {
  // Votes 1-1: the class with the smaller mean distance wins.
  const Matrix x = rows({{1}, {-2}});
  ModelSpec s = ModelSpec::defaults(ModelKind::Knn);
  std::get<KnnParams>(s.params).k = 2;
  auto m = train(s, x, std::vector<Activity>{Activity::Jogging, Activity::Walking});
  EXPECT_EQ(predict(m, std::vector<double>{0}).label, Activity::Jogging);
  // Equal votes and equal mean distance: smallest code.
  const Matrix sym = rows({{1}, {-1}});
  m = train(s, sym, std::vector<Activity>{Activity::Jogging, Activity::WalkingUpstairs});
  EXPECT_EQ(predict(m, std::vector<double>{0}).label, Activity::WalkingUpstairs);
  // k larger than the training set uses every point.
  std::get<KnnParams>(s.params).k = 50;
  m = train(s, rows({{0}, {1}, {2}}), std::vector<Activity>{Activity::Running, Activity::Running, Activity::Walking});
  const auto p = predict(m, std::vector<double>{2});
  EXPECT_EQ(p.label, Activity::Running);
  EXPECT_NEAR(p.score, 2.0 / 3.0, 1e-15);
}

TEST(Svm, KernelAndSimpleProblems) {
  EXPECT_EQ(quadratic_kernel(std::vector<double>{1, 0}, std::vector<double>{1, 0}), 4.0);
  const auto two = train(ModelSpec::defaults(ModelKind::Svm), rows({{-1}, {1}}),
                         std::vector<Activity>{Activity::Walking, Activity::Running});
  EXPECT_EQ(predict(two, std::vector<double>{-1}).label, Activity::Walking);
  EXPECT_EQ(predict(two, std::vector<double>{1}).label, Activity::Running);
}

TEST(Svm, SolvesXor) {
  // Centred XOR, as the z-scoring treatment presents it.
  const Matrix x = rows({{-1, -1}, {1, 1}, {-1, 1}, {1, -1}});
  const std::vector<Activity> y{Activity::Walking, Activity::Walking, Activity::Jogging, Activity::Jogging};
  const auto m = train(ModelSpec::defaults(ModelKind::Svm), x, y);
  EXPECT_EQ(training_accuracy(m, x, y), 1.0);
  const auto& svm = std::get<SupportVectorMachine>(m.impl());
  EXPECT_TRUE(svm.converged());
  for (double w : svm.machines[0].weight) EXPECT_NEAR(std::fabs(w), 0.125, 1e-3);

  // On 0/1 corners the hard-margin multipliers reach 10/3, so C = 1 cannot separate.
  const Matrix corners = rows({{0, 0}, {1, 1}, {0, 1}, {1, 0}});
  ModelSpec wide = ModelSpec::defaults(ModelKind::Svm);
  std::get<SvmParams>(wide.params).c = 10;
  EXPECT_EQ(training_accuracy(train(wide, corners, y), corners, y), 1.0);
  const auto boxed = train(ModelSpec::defaults(ModelKind::Svm), corners, y);
  const auto& bm = std::get<SupportVectorMachine>(boxed.impl()).machines[0];
  ASSERT_EQ(bm.weight.size(), 4u);
  for (double w : bm.weight) EXPECT_NEAR(std::fabs(w), 1.0, 1e-3);
}

TEST(Svm, OneMachinePerClassPair) {
  const auto blobs = gaussian_blobs(15, 5, 12, 3, 4.0, 1.0);
  const auto m = train(ModelSpec::defaults(ModelKind::Svm), blobs.x, blobs.y);
  const auto& svm = std::get<SupportVectorMachine>(m.impl());
  EXPECT_EQ(svm.machines.size(), 10u);
  EXPECT_GT(training_accuracy(m, blobs.x, blobs.y), 0.95);
}

TEST(Bagging, OneLearnerEqualsBootstrapPlusTree) {
  const auto blobs = gaussian_blobs(16, 4, 25, 3, 1.5, 1.0);
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    ModelSpec s = ModelSpec::defaults(ModelKind::Bagging, seed);
    std::get<BaggingParams>(s.params).n_learners = 1;
    const auto bag = train(s, blobs.x, blobs.y);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, blobs.x.rows() - 1);
    Matrix bx;
    std::vector<Activity> by;
    for (std::size_t i = 0; i < blobs.x.rows(); ++i) {
      const std::size_t r = pick(rng);
      bx.append_row(blobs.x.row(r));
      by.push_back(blobs.y[r]);
    }
    const auto tree = DecisionTree::fit(bx, by, std::numeric_limits<std::size_t>::max());
    EXPECT_EQ(std::get<BaggedTrees>(bag.impl()).trees.front(), tree);
    std::mt19937_64 q(seed + 1);
    std::normal_distribution<double> normal(0, 3);
    for (int t = 0; t < 200; ++t) {
      const std::vector<double> v{normal(q), normal(q), normal(q)};
      EXPECT_EQ(predict(bag, v).label, tree.predict(v).label);
    }
  }
}

TEST(Bagging, IdenticalTreesVoteLikeOneTree) {
  const auto blobs = gaussian_blobs(17, 5, 20, 3, 1.0, 1.0);
  const auto tree = DecisionTree::fit(blobs.x, blobs.y, 85);
  BaggedTrees bag;
  bag.trees.assign(5, tree);
  std::mt19937_64 q(2);
  std::normal_distribution<double> normal(0, 3);
  for (int t = 0; t < 200; ++t) {
    const std::vector<double> v{normal(q), normal(q), normal(q)};
    EXPECT_EQ(bag.predict(v).label, tree.predict(v).label);
    EXPECT_EQ(bag.predict(v).score, 1.0);
  }
}

TEST(Classifiers, ColumnPermutationInvariance) {
  const auto train_set = gaussian_blobs(18, 5, 16, 8, 1.2, 1.0);
  const auto test_set = gaussian_blobs(19, 5, 8, 8, 1.2, 1.5);
  for (ModelKind k : {ModelKind::Knn, ModelKind::NaiveBayes, ModelKind::Svm}) {
    const auto base = train(ModelSpec::defaults(k), train_set.x, train_set.y);
    std::vector<Activity> expected;
    for (std::size_t i = 0; i < test_set.x.rows(); ++i) expected.push_back(predict(base, test_set.x.row(i)).label);
    for (std::uint64_t p = 0; p < 200; ++p) {
      const auto order = make_permutation(p, train_set.x.cols()).order;
      const auto m = train(ModelSpec::defaults(k), permute_columns(train_set.x, order), train_set.y);
      const Matrix tx = permute_columns(test_set.x, order);
      for (std::size_t i = 0; i < tx.rows(); ++i) {
        ASSERT_EQ(predict(m, tx.row(i)).label, expected[i]) << model_label(k) << " perm " << p;
      }
    }
  }
}

TEST(Classifiers, DeterministicAcrossRunsAndThreads) {
  const auto data = gaussian_blobs(20, 5, 30, 6, 1.0, 1.0);
  for (ModelKind k : kKinds) {
    ModelSpec s = spec_for(k, 11);
    s.threads = 1;
    const auto a = train(s, data.x, data.y);
    const auto b = train(s, data.x, data.y);
    s.threads = 4;
    const auto c = train(s, data.x, data.y);
    EXPECT_EQ(a, b) << model_label(k);
    EXPECT_EQ(a, c) << model_label(k);
    for (std::size_t i = 0; i < data.x.rows(); ++i) {
      const auto pa = predict(a, data.x.row(i));
      const auto pc = predict(c, data.x.row(i));
      EXPECT_EQ(pa.label, pc.label);
      EXPECT_EQ(pa.score, pc.score);
    }
  }
}

TEST(ModelIo, RoundTripIsBitExact) {
  const auto data = gaussian_blobs(21, 5, 20, 4, 1.0, 1.0);
  std::mt19937_64 q(4);
  std::normal_distribution<double> normal(0, 2);
  for (ModelKind k : kKinds) {
    const auto m = train(spec_for(k), data.x, data.y);
    std::stringstream buf;
    save_model(buf, m);
    const auto back = load_model(buf);
    EXPECT_EQ(back, m) << model_label(k);
    for (int t = 0; t < 100; ++t) {
      const std::vector<double> v{normal(q), normal(q), normal(q), normal(q)};
      const auto p1 = predict(m, v);
      const auto p2 = predict(back, v);
      EXPECT_EQ(p1.label, p2.label);
      EXPECT_EQ(p1.score, p2.score);
    }
  }
}

TEST(ModelIo, CorruptFilesAreRejected) {
  const auto data = gaussian_blobs(22, 3, 10, 2, 2.0, 1.0);
  const auto m = train(ModelSpec::defaults(ModelKind::DecisionTree), data.x, data.y);
  std::stringstream buf;
  save_model(buf, m);
  const std::string text = buf.str();
  for (const std::string bad : {std::string("nonsense"), std::string("har-model 2 dtree 2\n"),
                                text.substr(0, text.size() / 2)}) {
    std::istringstream in(bad);
    try {
      load_model(in);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::SchemaMismatch);
    }
  }
}
