#include <limits>
#include <random>

#include "har/classifiers.hpp"
#include "har/error.hpp"
#include "har/parallel.hpp"

namespace har {

std::vector<std::size_t> BaggedTrees::bootstrap_indices(std::uint64_t seed, std::size_t learner,
                                                        std::size_t n) {
  std::mt19937_64 rng(seed + learner);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::size_t> idx(n);
  for (auto& i : idx) i = pick(rng);
  return idx;
}

BaggedTrees BaggedTrees::fit(const Matrix& x, std::span<const Activity> y,
                             const BaggingParams& params, std::uint64_t seed,
                             std::size_t threads) {
  const std::size_t n = x.rows();
  if (n == 0) throw Error(ErrorCode::EmptyTrainingSet, "bagging needs training rows");
  BaggedTrees model;
  model.trees.resize(params.n_learners);
  parallel_for(params.n_learners, threads, [&](std::size_t l) {
    const auto idx = bootstrap_indices(seed, l, n);
    std::vector<Activity> labels;
    labels.reserve(n);
    for (std::size_t i : idx) labels.push_back(y[i]);
    model.trees[l] =
        DecisionTree::fit(x.select_rows(idx), labels, std::numeric_limits<std::size_t>::max());
  });
  return model;
}

Prediction BaggedTrees::predict(std::span<const double> x) const {
  std::array<std::size_t, kActivityCount> votes{};
  for (const auto& tree : trees) votes[index(tree.predict(x).label)]++;
  std::size_t best = 0;
  for (std::size_t c = 1; c < kActivityCount; ++c) {
    if (votes[c] > votes[best]) best = c;
  }
  return {kAllActivities[best], static_cast<double>(votes[best]) / static_cast<double>(trees.size())};
}

}  // namespace har
