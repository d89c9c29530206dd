#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "har/banks.hpp"
#include "har/error.hpp"
#include "har/features.hpp"
#include "oracles.hpp"

using namespace har;
using har::testing::random_window;

namespace {

Window constant_window(std::size_t n, double v) {
  Window w;
  w.subject_id = "s";
  w.x.assign(n, v);
  w.y.assign(n, -v);
  w.z.assign(n, 2 * v);
  return w;
}

bool all_finite(const std::vector<double>& v) {
  return std::ranges::all_of(v, [](double d) { return std::isfinite(d); });
}

}  // namespace

TEST(Banks, LayoutWidthsAndNames) {
  const auto a = bank_layout(Bank::A43);
  const auto b = bank_layout(Bank::B70);
  ASSERT_EQ(a.size(), 43u);
  ASSERT_EQ(b.size(), 70u);
  EXPECT_EQ(a.back().axis, 'r');
  EXPECT_EQ(b.back().axis, 'r');
  EXPECT_EQ(a[0].name, "mean");
  EXPECT_EQ(a[14].axis, 'y');
  EXPECT_EQ(b[4].name, "bin0");
  EXPECT_EQ(b[23].axis, 'y');
  EXPECT_EQ(bank_width(Bank::A43), kBankAWidth);
  EXPECT_EQ(bank_width(Bank::B70), kBankBWidth);
  BankAOptions wider;
  wider.ar_order = 3;
  EXPECT_EQ(bank_width(Bank::A43, wider), 46u);
  EXPECT_EQ(parse_bank("a"), Bank::A43);
  EXPECT_THROW(parse_bank("c"), Error);
}

TEST(Banks, FuzzedWindowsHaveExactWidthAndFiniteValues) {
  std::mt19937_64 rng(404);
  for (int t = 0; t < 400; ++t) {
    const std::size_t len = 4 + rng() % 120;
    const Window w = random_window(rng, len);
    const auto a = extract_bank_a(w);
    const auto b = extract_bank_b(w);
    ASSERT_EQ(a.values.size(), 43u);
    ASSERT_EQ(b.values.size(), 70u);
    ASSERT_TRUE(all_finite(a.values)) << "len " << len;
    ASSERT_TRUE(all_finite(b.values)) << "len " << len;
  }
}

TEST(Banks, ConstantWindowSentinels) {
  const Window w = constant_window(75, 2.5);
  const auto a = extract_bank_a(w).values;
  EXPECT_DOUBLE_EQ(a[0], 2.5);   // mean
  EXPECT_DOUBLE_EQ(a[1], 2.5);   // median
  EXPECT_EQ(a[2], 0.0);          // variance
  EXPECT_EQ(a[3], 0.0);          // std
  EXPECT_EQ(a[4], 0.0);          // iqr
  for (std::size_t i = 5; i <= 11; ++i) EXPECT_EQ(a[i], 0.0) << i;
  EXPECT_DOUBLE_EQ(a[14], -2.5);

  const auto b = extract_bank_b(w).values;
  EXPECT_DOUBLE_EQ(b[0], 2.5);
  EXPECT_EQ(b[3], 0.0);  // peak gap
  EXPECT_EQ(b[4], 1.0);  // bin0
  for (std::size_t i = 5; i < 14; ++i) EXPECT_EQ(b[i], 0.0);
  EXPECT_EQ(b[19], 0.0);  // zero crossings
  EXPECT_EQ(b[20], 0.0);  // skewness
  EXPECT_EQ(b[21], 0.0);  // kurtosis
  EXPECT_NEAR(b[69], std::sqrt(6.0) * 2.5, 1e-12);
}

TEST(Banks, ShortWindowsUseSentinelsAndTinyOnesThrow) {
  std::mt19937_64 rng(5);
  const Window w = random_window(rng, 5);
  const auto a = extract_bank_a(w).values;
  ASSERT_EQ(a.size(), 43u);
  EXPECT_EQ(a[7], 0.0);  // AR needs 20 samples
  const Window tiny = random_window(rng, 3);
  try {
    extract_bank_b(tiny);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SignalTooShort);
  }
  EXPECT_THROW(extract_bank_a(tiny), Error);
}

TEST(Banks, BankBSlotsMatchDefinitions) {
  std::mt19937_64 rng(606);
  for (int t = 0; t < 100; ++t) {
    const Window w = random_window(rng, 4 + rng() % 100);
    const auto b = extract_bank_b(w).values;
    const std::vector<double>* axes[3] = {&w.x, &w.y, &w.z};
    for (std::size_t a = 0; a < 3; ++a) {
      const auto& x = *axes[a];
      const double* s = &b[23 * a];
      const double n = static_cast<double>(x.size());
      double sum = 0;
      for (double v : x) sum += v;
      const double m = sum / n;
      double ad = 0, sq = 0, e = 0;
      for (double v : x) {
        ad += std::fabs(v - m);
        sq += (v - m) * (v - m);
        e += v * v;
      }
      const double tol = 1e-9 * (1.0 + std::fabs(m));
      EXPECT_NEAR(s[0], m, tol);
      EXPECT_NEAR(s[1], ad / n, tol);
      EXPECT_NEAR(s[2], std::sqrt(sq / n), tol);
      EXPECT_EQ(s[3], har::testing::oracle_peak_gap(x));
      const auto bins = har::testing::oracle_bins(x, 10);
      for (std::size_t k = 0; k < 10; ++k) EXPECT_NEAR(s[4 + k], bins[k], 1e-12);
      const auto [lo, hi] = std::ranges::minmax(x);
      EXPECT_EQ(s[14], lo);
      EXPECT_EQ(s[15], hi);
      EXPECT_EQ(s[16], hi - lo);
      EXPECT_NEAR(s[17], std::sqrt(e / n), 1e-9 * std::sqrt(e / n) + 1e-300);
      EXPECT_NEAR(s[18], e / n, 1e-9 * e / n + 1e-300);
      std::vector<double> sorted = x;
      std::ranges::sort(sorted);
      const std::size_t h = sorted.size() / 2;
      EXPECT_DOUBLE_EQ(s[22], sorted.size() % 2 ? sorted[h] : (sorted[h - 1] + sorted[h]) / 2);
    }
    EXPECT_NEAR(b[69], har::testing::oracle_resultant(w.x, w.y, w.z), 1e-9 * (1 + b[69]));
  }
}

TEST(Banks, NegatedWindowProperty) {
  std::mt19937_64 rng(707);
  for (int t = 0; t < 100; ++t) {
    const Window w = random_window(rng, 8 + rng() % 100);
    Window neg = w;
    for (auto* axis : {&neg.x, &neg.y, &neg.z}) {
      for (auto& v : *axis) v = -v;
    }
    const auto b = extract_bank_b(w).values;
    const auto nb = extract_bank_b(neg).values;
    for (std::size_t a = 0; a < 3; ++a) {
      const double* s = &b[23 * a];
      const double* ns = &nb[23 * a];
      EXPECT_EQ(ns[0], -s[0]);
      EXPECT_NEAR(ns[2], s[2], 1e-12 * (1 + s[2]));
      EXPECT_EQ(ns[16], s[16]);
      EXPECT_EQ(ns[14], -s[15]);
      if (s[16] > 0) {
        // Bin shape mirrors; values on interior edges may move by one bin.
        double mass = 0;
        for (std::size_t k = 0; k < 10; ++k) mass += std::fabs(ns[4 + k] - s[4 + 9 - k]);
        EXPECT_LE(mass, 2.0 * 2.0 / static_cast<double>(w.size()));
      }
    }
    EXPECT_NEAR(nb[69], b[69], 1e-12 * (1 + b[69]));
  }
}

TEST(Banks, DeterministicAcrossThreads) {
  std::mt19937_64 rng(808);
  std::vector<Window> windows;
  for (int i = 0; i < 64; ++i) windows.push_back(random_window(rng, 75));
  for (Bank bank : {Bank::A43, Bank::B70}) {
    const auto one = extract_feature_set(windows, bank, 1);
    const auto four = extract_feature_set(windows, bank, 4);
    EXPECT_EQ(one.values, four.values);
    EXPECT_EQ(one.values.rows(), 64u);
    EXPECT_EQ(extract_features(windows[3], bank).values, extract_features(windows[3], bank).values);
  }
}

TEST(Banks, FeatureCsvRoundTripAndSchema) {
  std::mt19937_64 rng(909);
  std::vector<Window> windows;
  for (int i = 0; i < 10; ++i) {
    Window w = random_window(rng, 30);
    w.subject_id = "p" + std::to_string(i % 3);
    w.activity = kAllActivities[static_cast<std::size_t>(i) % 5];
    windows.push_back(w);
  }
  const auto fs = extract_feature_set(windows, Bank::B70);
  std::stringstream buf;
  write_features_csv(buf, fs);
  const auto back = parse_features_csv(buf);
  EXPECT_EQ(back.bank, Bank::B70);
  EXPECT_EQ(back.values, fs.values);
  EXPECT_EQ(back.labels, fs.labels);
  EXPECT_EQ(back.subjects, fs.subjects);

  std::istringstream wrong_width("subject_id,activity,bank,f0,f1\ns,walking,b,1,2\n");
  try {
    parse_features_csv(wrong_width);
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.code() == ErrorCode::SchemaMismatch || e.code() == ErrorCode::WidthMismatch);
  }
  std::istringstream bad_header("who,activity,bank,f0\n");
  EXPECT_THROW(parse_features_csv(bad_header), Error);
}
