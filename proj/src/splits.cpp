#include <algorithm>
#include <random>

#include "har/error.hpp"
#include "har/eval.hpp"
#include "har/numeric.hpp"

namespace har {

std::vector<Fold> kfold_split(std::span<const Activity> labels, std::size_t k,
                              std::optional<std::uint64_t> shuffle_seed) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "k-fold needs k >= 2");
  if (labels.size() < k) {
    throw Error(ErrorCode::TooFewInstances, std::to_string(labels.size()) +
                                                " instances cannot fill " + std::to_string(k) +
                                                " folds");
  }
  std::vector<Fold> folds(k);
  std::size_t offset = 0;  // rotates which folds receive a stratum's remainder
  for (Activity a : kAllActivities) {
    std::vector<std::size_t> stratum;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == a) stratum.push_back(i);
    }
    if (shuffle_seed) {
      std::mt19937_64 rng(mix_seed(*shuffle_seed, index(a)));
      std::shuffle(stratum.begin(), stratum.end(), rng);
    }
    const std::size_t base = stratum.size() / k;
    const std::size_t rem = stratum.size() % k;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
      const std::size_t size = base + (((f + k - offset) % k) < rem ? 1 : 0);
      folds[f].insert(folds[f].end(), stratum.begin() + static_cast<std::ptrdiff_t>(pos),
                      stratum.begin() + static_cast<std::ptrdiff_t>(pos + size));
      pos += size;
    }
    offset = (offset + rem) % k;
  }
  for (auto& f : folds) std::ranges::sort(f);
  return folds;
}

std::vector<Split> loso_split(std::span<const std::string> subject_ids) {
  std::vector<std::string> order;
  for (const auto& s : subject_ids) {
    if (std::ranges::find(order, s) == order.end()) order.push_back(s);
  }
  if (order.size() < 2) {
    throw Error(ErrorCode::SingleSubject,
                "leave-one-subject-out needs at least 2 subjects, found " +
                    std::to_string(order.size()));
  }
  std::vector<Split> splits;
  for (const auto& subject : order) {
    Split s{subject, {}, {}};
    for (std::size_t i = 0; i < subject_ids.size(); ++i) {
      (subject_ids[i] == subject ? s.test : s.train).push_back(i);
    }
    splits.push_back(std::move(s));
  }
  return splits;
}

}  // namespace har
