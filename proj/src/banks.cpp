#include "har/banks.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include "csv.hpp"
#include "har/error.hpp"
#include "har/features.hpp"
#include "har/parallel.hpp"

namespace har {

namespace {

constexpr std::array<char, 3> kAxes = {'x', 'y', 'z'};

std::vector<std::string> bank_a_axis_slots(const BankAOptions& o) {
  std::vector<std::string> names = {"mean", "median", "variance", "std", "iqr",
                                    "acf_lag" + std::to_string(o.acf_lag),
                                    "pacf_lag" + std::to_string(o.pacf_lag)};
  for (std::size_t i = 1; i <= o.ar_order; ++i) names.push_back("ar" + std::to_string(i));
  for (std::size_t i = 1; i <= o.ma_order; ++i) names.push_back("ma" + std::to_string(i));
  for (std::size_t i = 1; i <= o.arma_p; ++i) names.push_back("arma_phi" + std::to_string(i));
  for (std::size_t i = 1; i <= o.arma_q; ++i) names.push_back("arma_theta" + std::to_string(i));
  names.push_back("haar_approx_energy");
  names.push_back("haar_detail_energy");
  return names;
}

std::vector<std::string> bank_b_axis_slots() {
  std::vector<std::string> names = {"mean", "mean_abs_dev", "std", "peak_gap"};
  for (std::size_t b = 0; b < kBankBBins; ++b) names.push_back("bin" + std::to_string(b));
  for (const char* n : {"min", "max", "range", "rms", "energy", "zero_crossings", "skewness",
                        "kurtosis", "median"}) {
    names.emplace_back(n);
  }
  return names;
}

// Runs an estimator whose length precondition may fail on short windows; the
// slots then hold the 0 sentinel.
template <class Fn>
std::vector<double> or_zeros(std::size_t width, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SignalTooShort) throw;
    return std::vector<double>(width, 0.0);
  }
}

void require_window(const Window& w) {
  if (w.x.size() != w.y.size() || w.x.size() != w.z.size()) {
    throw Error(ErrorCode::LengthMismatch, "window axes differ in length");
  }
  if (w.size() < kMinWindowSamples) {
    throw Error(ErrorCode::SignalTooShort,
                "windows need at least " + std::to_string(kMinWindowSamples) + " samples");
  }
}

// Overflow on extreme inputs is the only source of non-finite values left;
// those slots take the 0 sentinel too.
void sanitize(std::vector<double>& values) {
  for (double& v : values) {
    if (!std::isfinite(v)) v = 0.0;
  }
}

void append_bank_a_axis(std::vector<double>& out, std::span<const double> s,
                        const BankAOptions& o) {
  out.push_back(mean(s));
  out.push_back(median(s));
  out.push_back(variance(s));
  out.push_back(stddev(s));
  out.push_back(interquartile_range(s));
  for (double v : or_zeros(1, [&] { return std::vector{autocorrelation(s, o.acf_lag)}; })) {
    out.push_back(v);
  }
  for (double v : or_zeros(1, [&] { return std::vector{partial_autocorrelation(s, o.pacf_lag)}; })) {
    out.push_back(v);
  }
  for (double v : or_zeros(o.ar_order, [&] { return fit_ar(s, o.ar_order); })) out.push_back(v);
  for (double v : or_zeros(o.ma_order, [&] { return fit_ma(s, o.ma_order); })) out.push_back(v);
  for (double v : or_zeros(o.arma_p + o.arma_q,
                           [&] { return fit_arma(s, o.arma_p, o.arma_q).coefficients; })) {
    out.push_back(v);
  }
  const auto haar = haar_dwt_energies(s);
  out.push_back(haar.approx);
  out.push_back(haar.detail);
}

void append_bank_b_axis(std::vector<double>& out, std::span<const double> s) {
  const auto [lo, hi] = std::ranges::minmax(s);
  out.push_back(mean(s));
  out.push_back(mean_absolute_deviation(s));
  out.push_back(stddev(s));
  out.push_back(peak_interval_stats(s));
  for (double f : binned_distribution(s, kBankBBins)) out.push_back(f);
  out.push_back(lo);
  out.push_back(hi);
  out.push_back(hi - lo);
  out.push_back(root_mean_square(s));
  out.push_back(mean_energy(s));
  out.push_back(zero_crossings(s));
  out.push_back(skewness(s));
  out.push_back(excess_kurtosis(s));
  out.push_back(median(s));
}

}  // namespace

std::string_view bank_label(Bank bank) noexcept { return bank == Bank::A43 ? "a" : "b"; }

Bank parse_bank(std::string_view label) {
  if (label == "a") return Bank::A43;
  if (label == "b") return Bank::B70;
  throw Error(ErrorCode::InvalidArgument, "unknown feature bank '" + std::string(label) + "'");
}

BankLayout bank_layout(Bank bank, const BankAOptions& options) {
  const auto names = bank == Bank::A43 ? bank_a_axis_slots(options) : bank_b_axis_slots();
  BankLayout layout;
  for (char axis : kAxes) {
    for (const auto& n : names) layout.push_back({n, axis});
  }
  layout.push_back({"avg_resultant", 'r'});
  return layout;
}

std::size_t bank_width(Bank bank, const BankAOptions& options) {
  return bank_layout(bank, options).size();
}

FeatureVector extract_bank_a(const Window& w, const BankAOptions& options) {
  require_window(w);
  FeatureVector fv{Bank::A43, {}, w.activity, w.subject_id};
  fv.values.reserve(bank_width(Bank::A43, options));
  append_bank_a_axis(fv.values, w.x, options);
  append_bank_a_axis(fv.values, w.y, options);
  append_bank_a_axis(fv.values, w.z, options);
  fv.values.push_back(average_resultant(w.x, w.y, w.z));
  sanitize(fv.values);
  return fv;
}

FeatureVector extract_bank_b(const Window& w) {
  require_window(w);
  FeatureVector fv{Bank::B70, {}, w.activity, w.subject_id};
  fv.values.reserve(kBankBWidth);
  append_bank_b_axis(fv.values, w.x);
  append_bank_b_axis(fv.values, w.y);
  append_bank_b_axis(fv.values, w.z);
  fv.values.push_back(average_resultant(w.x, w.y, w.z));
  sanitize(fv.values);
  return fv;
}

FeatureVector extract_features(const Window& w, Bank bank) {
  return bank == Bank::A43 ? extract_bank_a(w) : extract_bank_b(w);
}

FeatureSet extract_feature_set(std::span<const Window> windows, Bank bank, std::size_t threads) {
  std::vector<FeatureVector> vectors(windows.size());
  parallel_for(windows.size(), threads,
               [&](std::size_t i) { vectors[i] = extract_features(windows[i], bank); });
  FeatureSet set;
  set.bank = bank;
  set.values = Matrix(0, bank_width(bank));
  for (auto& v : vectors) {
    set.values.append_row(v.values);
    set.labels.push_back(v.activity);
    set.subjects.push_back(std::move(v.subject_id));
  }
  return set;
}

void write_features_csv(std::ostream& out, const FeatureSet& features) {
  out << "subject_id,activity,bank";
  for (std::size_t j = 0; j < features.values.cols(); ++j) out << ",f" << j;
  out << '\n';
  const auto bank = bank_label(features.bank);
  for (std::size_t i = 0; i < features.size(); ++i) {
    csv::check_field(features.subjects[i]);
    out << features.subjects[i] << ',' << activity_label(features.labels[i]) << ',' << bank;
    for (double v : features.values.row(i)) out << ',' << csv::format_double(v);
    out << '\n';
  }
}

FeatureSet parse_features_csv(std::istream& in) {
  std::string line;
  if (!csv::next_line(in, line)) throw Error(ErrorCode::SchemaMismatch, "empty feature file", 1);
  const auto header = csv::split(line);
  if (header.size() < 4 || header[0] != "subject_id" || header[1] != "activity" ||
      header[2] != "bank") {
    throw Error(ErrorCode::SchemaMismatch, "expected header 'subject_id,activity,bank,f0..'", 1);
  }
  const std::size_t width = header.size() - 3;
  for (std::size_t j = 0; j < width; ++j) {
    if (header[j + 3] != "f" + std::to_string(j)) {
      throw Error(ErrorCode::SchemaMismatch, "feature columns must be f0..f{d-1}", 1);
    }
  }

  FeatureSet set;
  set.values = Matrix(0, width);
  std::vector<double> row(width);
  std::size_t line_no = 1;
  bool bank_seen = false;
  while (csv::next_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = csv::split(line);
    if (f.size() != width + 3) {
      throw Error(ErrorCode::MalformedRow, "expected " + std::to_string(width + 3) + " fields",
                  line_no);
    }
    Bank bank;
    Activity activity;
    try {
      bank = parse_bank(f[2]);
      activity = parse_activity(f[1]);
    } catch (const Error& e) {
      throw Error(ErrorCode::SchemaMismatch, e.what(), line_no);
    }
    if (bank_seen && bank != set.bank) {
      throw Error(ErrorCode::SchemaMismatch, "mixed feature banks in one file", line_no);
    }
    if (bank_width(bank) != width) {
      throw Error(ErrorCode::SchemaMismatch,
                  "bank " + std::string(f[2]) + " has width " + std::to_string(bank_width(bank)),
                  line_no);
    }
    set.bank = bank;
    bank_seen = true;
    for (std::size_t j = 0; j < width; ++j) {
      const auto v = csv::parse_double(f[j + 3]);
      if (!v) throw Error(ErrorCode::MalformedRow, "feature f" + std::to_string(j) + " is not a number", line_no);
      if (!std::isfinite(*v)) {
        throw Error(ErrorCode::NonFiniteValue, "feature f" + std::to_string(j) + " is not finite", line_no);
      }
      row[j] = *v;
    }
    set.values.append_row(row);
    set.labels.push_back(activity);
    set.subjects.emplace_back(f[0]);
  }
  return set;
}

}  // namespace har
