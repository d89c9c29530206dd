#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "har/matrix.hpp"
#include "har/preprocess.hpp"
#include "har/types.hpp"

namespace har {

enum class Bank { A43, B70 };

std::string_view bank_label(Bank bank) noexcept;  // "a" / "b"
Bank parse_bank(std::string_view label);

/// One slot of a feature vector. `axis` is 'x', 'y', 'z', or 'r' for the
/// cross-axis resultant.
struct BankSlot {
  std::string name;
  char axis;
};

using BankLayout = std::vector<BankSlot>;

/// Lags and model orders used by bank A. The defaults give 14 slots per axis
/// plus the resultant, i.e. 43; other orders change the width accordingly.
struct BankAOptions {
  std::size_t acf_lag = 1;
  std::size_t pacf_lag = 2;
  std::size_t ar_order = 2;
  std::size_t ma_order = 1;
  std::size_t arma_p = 1;
  std::size_t arma_q = 1;
};

inline constexpr std::size_t kBankAWidth = 43;
inline constexpr std::size_t kBankBWidth = 70;
inline constexpr std::size_t kBankBBins = 10;

BankLayout bank_layout(Bank bank, const BankAOptions& options = {});
std::size_t bank_width(Bank bank, const BankAOptions& options = {});

struct FeatureVector {
  Bank bank = Bank::A43;
  std::vector<double> values;
  Activity activity = Activity::Walking;
  std::string subject_id;
};

/// Per axis: mean, median, variance, std, IQR, ACF, PACF, AR coefficients,
/// MA coefficients, ARMA coefficients, Haar approximation and detail energy;
/// then the average resultant. Estimators whose length precondition fails on
/// this window contribute 0. Throws SignalTooShort when the window has fewer
/// than 4 samples.
FeatureVector extract_bank_a(const Window& w, const BankAOptions& options = {});

/// Per axis: mean, mean absolute deviation, std, mean peak gap, 10 bin
/// fractions, min, max, range, RMS, energy, zero crossings, skewness, excess
/// kurtosis, median; then the average resultant.
FeatureVector extract_bank_b(const Window& w);

FeatureVector extract_features(const Window& w, Bank bank);

/// Labelled feature matrix: one row per window.
struct FeatureSet {
  Bank bank = Bank::A43;
  Matrix values;
  std::vector<Activity> labels;
  std::vector<std::string> subjects;

  std::size_t size() const noexcept { return labels.size(); }
};

FeatureSet extract_feature_set(std::span<const Window> windows, Bank bank,
                               std::size_t threads = 1);

/// Header `subject_id,activity,bank,f0..f{d-1}`; values use the shortest
/// representation that round-trips exactly.
void write_features_csv(std::ostream& out, const FeatureSet& features);
FeatureSet parse_features_csv(std::istream& in);

}  // namespace har
