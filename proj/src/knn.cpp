#include <algorithm>
#include <cmath>
#include <numeric>

#include "har/classifiers.hpp"
#include "har/error.hpp"
#include "har/numeric.hpp"

namespace har {

KNearestNeighbors KNearestNeighbors::fit(const Matrix& x, std::span<const Activity> y,
                                         const KnnParams& params) {
  if (x.rows() == 0) throw Error(ErrorCode::EmptyTrainingSet, "KNN needs training rows");
  return KNearestNeighbors{x, std::vector<Activity>(y.begin(), y.end()), params.k};
}

Prediction KNearestNeighbors::predict(std::span<const double> x) const {
  const std::size_t n = points.rows();
  const std::size_t kk = std::min(k, n);
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) dist[i] = {exact_squared_distance(points.row(i), x), i};
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(kk), dist.end());

  std::array<std::size_t, kActivityCount> votes{};
  std::array<double, kActivityCount> dist_sum{};
  for (std::size_t r = 0; r < kk; ++r) {
    const std::size_t c = index(labels[dist[r].second]);
    votes[c]++;
    dist_sum[c] += std::sqrt(dist[r].first);
  }
  // Most votes; ties go to the smaller mean distance, then the smaller code.
  std::size_t best = kActivityCount;
  for (std::size_t c = 0; c < kActivityCount; ++c) {
    if (votes[c] == 0) continue;
    if (best == kActivityCount || votes[c] > votes[best]) {
      best = c;
    } else if (votes[c] == votes[best] &&
               dist_sum[c] / static_cast<double>(votes[c]) <
                   dist_sum[best] / static_cast<double>(votes[best])) {
      best = c;
    }
  }
  return {kAllActivities[best], static_cast<double>(votes[best]) / static_cast<double>(kk)};
}

}  // namespace har
