#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>

#include "har/classifiers.hpp"
#include "har/error.hpp"

namespace har {

namespace {

using Index = std::uint32_t;
using Counts = std::array<std::size_t, kActivityCount>;

struct SplitCandidate {
  bool valid = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double decrease = 0.0;  // in units of weighted Gini (count * impurity)
};

// A frontier node: its tree slot plus, per feature, its instances in
// ascending order of that feature's value.
struct Frontier {
  std::int32_t node = 0;
  std::vector<std::vector<Index>> sorted;
  SplitCandidate best;
};

Counts count_labels(std::span<const Index> idx, std::span<const Activity> y) {
  Counts c{};
  for (Index i : idx) c[index(y[i])]++;
  return c;
}

// sum_k c_k^2 / m, so that m * gini = m - purity_term.
double purity_term(const Counts& c, std::size_t m) {
  if (m == 0) return 0.0;
  double s = 0.0;
  for (std::size_t v : c) s += static_cast<double>(v) * static_cast<double>(v);
  return s / static_cast<double>(m);
}

bool is_pure(const Counts& c) {
  return std::ranges::count_if(c, [](std::size_t v) { return v > 0; }) <= 1;
}

double split_threshold(double a, double b) {
  const double mid = a / 2.0 + b / 2.0;
  return (mid >= a && mid < b) ? mid : a;
}

// Exhaustive scan over midpoints between consecutive distinct values. Ties
// keep the first candidate (lowest feature, then lowest threshold).
SplitCandidate best_split(const Matrix& x, std::span<const Activity> y, const Frontier& f,
                          const Counts& parent) {
  SplitCandidate best;
  const std::size_t m = f.sorted.front().size();
  const double parent_term = purity_term(parent, m);
  double best_score = parent_term;  // children must not be worse than the parent
  bool found = false;
  for (std::size_t feat = 0; feat < f.sorted.size(); ++feat) {
    const auto& order = f.sorted[feat];
    Counts left{};
    for (std::size_t pos = 0; pos + 1 < m; ++pos) {
      left[index(y[order[pos]])]++;
      const double a = x(order[pos], feat);
      const double b = x(order[pos + 1], feat);
      if (!(a < b)) continue;
      Counts right;
      for (std::size_t k = 0; k < kActivityCount; ++k) right[k] = parent[k] - left[k];
      const double score = purity_term(left, pos + 1) + purity_term(right, m - pos - 1);
      if (!found || score > best_score) {
        found = true;
        best_score = score;
        best.valid = true;
        best.feature = feat;
        best.threshold = split_threshold(a, b);
      }
    }
  }
  if (found) best.decrease = best_score - parent_term;
  return best;
}

void set_leaf_label(DecisionTree::Node& node, const Counts& c) {
  std::size_t total = 0;
  std::size_t best = 0;
  for (std::size_t k = 0; k < kActivityCount; ++k) {
    total += c[k];
    if (c[k] > c[best]) best = k;
  }
  node.label = kAllActivities[best];
  node.score = total == 0 ? 0.0 : static_cast<double>(c[best]) / static_cast<double>(total);
}

}  // namespace

double gini_impurity(std::span<const std::size_t> class_counts) {
  double total = 0.0;
  for (std::size_t c : class_counts) total += static_cast<double>(c);
  if (total == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t c : class_counts) {
    const double p = static_cast<double>(c) / total;
    s += p * p;
  }
  return 1.0 - s;
}

DecisionTree DecisionTree::fit(const Matrix& x, std::span<const Activity> y,
                               std::size_t max_splits) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  if (n == 0) throw Error(ErrorCode::EmptyTrainingSet, "decision tree needs training rows");
  if (y.size() != n) throw Error(ErrorCode::DimensionMismatch, "label count differs from rows");

  DecisionTree tree;
  Frontier root;
  root.sorted.resize(d);
  for (std::size_t feat = 0; feat < d; ++feat) {
    auto& order = root.sorted[feat];
    order.resize(n);
    std::iota(order.begin(), order.end(), Index{0});
    std::ranges::stable_sort(order, [&](Index a, Index b) { return x(a, feat) < x(b, feat); });
  }

  tree.nodes_.emplace_back();
  Counts root_counts{};
  for (Activity a : y) root_counts[index(a)]++;
  set_leaf_label(tree.nodes_[0], root_counts);
  if (d > 0 && !is_pure(root_counts)) root.best = best_split(x, y, root, root_counts);

  // Best-first expansion: largest impurity decrease, then earliest node.
  auto cmp = [](const Frontier& a, const Frontier& b) {
    if (a.best.decrease != b.best.decrease) return a.best.decrease < b.best.decrease;
    return a.node > b.node;
  };
  std::vector<Frontier> frontier;
  if (root.best.valid) frontier.push_back(std::move(root));

  std::vector<char> goes_left(n, 0);
  std::size_t splits = 0;
  while (splits < max_splits && !frontier.empty()) {
    std::ranges::pop_heap(frontier, cmp);
    Frontier f = std::move(frontier.back());
    frontier.pop_back();
    const std::size_t feat = f.best.feature;
    const double thr = f.best.threshold;
    for (Index i : f.sorted[feat]) goes_left[i] = x(i, feat) <= thr ? 1 : 0;

    Frontier left, right;
    left.sorted.resize(d);
    right.sorted.resize(d);
    for (std::size_t k = 0; k < d; ++k) {
      for (Index i : f.sorted[k]) (goes_left[i] ? left.sorted[k] : right.sorted[k]).push_back(i);
    }
    f.sorted.clear();

    left.node = static_cast<std::int32_t>(tree.nodes_.size());
    right.node = left.node + 1;
    tree.nodes_[f.node].feature = static_cast<int>(feat);
    tree.nodes_[f.node].threshold = thr;
    tree.nodes_[f.node].left = left.node;
    tree.nodes_[f.node].right = right.node;
    tree.nodes_.emplace_back();
    tree.nodes_.emplace_back();
    ++splits;

    for (Frontier* child : {&left, &right}) {
      const Counts c = count_labels(child->sorted.front(), y);
      set_leaf_label(tree.nodes_[child->node], c);
      if (!is_pure(c)) child->best = best_split(x, y, *child, c);
      if (child->best.valid) {
        frontier.push_back(std::move(*child));
        std::ranges::push_heap(frontier, cmp);
      }
    }
  }
  return tree;
}

Prediction DecisionTree::predict(std::span<const double> x) const {
  std::size_t at = 0;
  while (nodes_[at].feature >= 0) {
    const auto& node = nodes_[at];
    at = static_cast<std::size_t>(x[node.feature] <= node.threshold ? node.left : node.right);
  }
  return {nodes_[at].label, nodes_[at].score};
}

std::size_t DecisionTree::split_count() const noexcept {
  return static_cast<std::size_t>(
      std::ranges::count_if(nodes_, [](const Node& n) { return n.feature >= 0; }));
}

}  // namespace har
