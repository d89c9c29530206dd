#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "csv.hpp"
#include "har/error.hpp"
#include "har/eval.hpp"

namespace har {

namespace {

ResultRow base_row(const EvalConfig& config) {
  ResultRow row;
  row.protocol = std::string(protocol_label(config.protocol));
  row.classifier = std::string(model_label(config.model.kind()));
  row.bank = std::string(bank_label(config.bank));
  row.treatment = config.treatment.label();
  row.window = config.samples_per_window;
  return row;
}

double overall_value(const EvalConfig& config, const EvalReport& report) {
  return config.aggregation == Aggregation::UnitMean ? report.unit_mean_accuracy : report.overall_accuracy;
}

double recall_value(const EvalConfig& config, const EvalReport& report, std::size_t i) {
  return config.aggregation == Aggregation::UnitMean ? report.per_activity_unit_mean_recall[i]
                                                     : report.per_activity_recall[i];
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::vector<ResultRow> report_rows(const EvalConfig& config, const EvalReport& report) {
  std::vector<ResultRow> rows;
  const ResultRow base = base_row(config);

  ResultRow overall = base;
  overall.activity = "overall";
  overall.metric = "accuracy";
  overall.value = overall_value(config, report);
  overall.ci_halfwidth = report.ci_halfwidth;
  overall.n_units = report.n_units;
  rows.push_back(overall);

  for (Activity a : kAllActivities) {
    const double recall = recall_value(config, report, index(a));
    if (std::isnan(recall)) continue;
    ResultRow row = base;
    row.activity = std::string(activity_label(a));
    row.metric = "recall";
    row.value = recall;
    row.ci_halfwidth = report.per_activity_ci_halfwidth[index(a)];
    row.n_units = 0;
    for (const auto& u : report.units) row.n_units += std::isnan(u.recall[index(a)]) ? 0 : 1;
    rows.push_back(row);
  }

  for (const auto& u : report.units) {
    if (std::isnan(u.accuracy)) continue;
    ResultRow row = base;
    row.activity = "overall";
    row.metric = "unit_accuracy[" + u.unit + "]";
    row.value = u.accuracy;
    row.n_units = 1;
    rows.push_back(row);
    for (Activity a : kAllActivities) {
      if (std::isnan(u.recall[index(a)])) continue;
      ResultRow r = base;
      r.activity = std::string(activity_label(a));
      r.metric = "unit_recall[" + u.unit + "]";
      r.value = u.recall[index(a)];
      r.n_units = 1;
      rows.push_back(r);
    }
  }
  return rows;
}

void write_results_csv(std::ostream& out, std::span<const ResultRow> rows) {
  out << kResultsHeader << '\n';
  for (const auto& r : rows) {
    for (const auto* f : {&r.protocol, &r.classifier, &r.bank, &r.treatment, &r.activity, &r.metric}) {
      csv::check_field(*f);
    }
    out << r.protocol << ',' << r.classifier << ',' << r.bank << ',' << r.treatment << ','
        << r.window << ',' << r.activity << ',' << r.metric << ',' << csv::format_double(r.value)
        << ',' << csv::format_double(r.ci_halfwidth) << ',' << r.n_units << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing results");
}

std::vector<ResultRow> parse_results_csv(std::istream& in) {
  std::string line;
  if (!csv::next_line(in, line) || line != kResultsHeader) {
    throw Error(ErrorCode::SchemaMismatch, "results header must be '" + std::string(kResultsHeader) + "'", 1);
  }
  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (csv::next_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = csv::split(line);
    if (f.size() != 10) {
      throw Error(ErrorCode::MalformedRow, "expected 10 fields, got " + std::to_string(f.size()), line_no);
    }
    ResultRow r;
    r.protocol = f[0];
    r.classifier = f[1];
    r.bank = f[2];
    r.treatment = f[3];
    r.activity = f[5];
    r.metric = f[6];
    const auto window = csv::parse_int(f[4]);
    const auto value = csv::parse_double(f[7]);
    const auto ci = csv::parse_double(f[8]);
    const auto n = csv::parse_int(f[9]);
    if (!window || *window < 0 || !value || !ci || !n || *n < 0) {
      throw Error(ErrorCode::MalformedRow, "bad numeric field in results row", line_no);
    }
    if (!std::isfinite(*value) || !std::isfinite(*ci)) {
      throw Error(ErrorCode::NonFiniteValue, "non-finite value in results row", line_no);
    }
    r.window = static_cast<std::size_t>(*window);
    r.value = *value;
    r.ci_halfwidth = *ci;
    r.n_units = static_cast<std::size_t>(*n);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string report_markdown(const EvalConfig& config, const EvalReport& report) {
  std::ostringstream out;
  out << "### " << model_label(config.model.kind()) << ", bank " << bank_label(config.bank)
      << ", " << protocol_label(config.protocol) << ", " << config.treatment.label() << ", "
      << config.samples_per_window << " samples/window\n\n";
  out << "| Activity | Accuracy |\n|---|---|\n";
  for (Activity a : kAllActivities) {
    const double recall = recall_value(config, report, index(a));
    out << "| " << activity_title(a) << " | "
        << (std::isnan(recall) ? std::string("n/a")
                               : fixed2(recall) + "±" + fixed2(report.per_activity_ci_halfwidth[index(a)]))
        << " |\n";
  }
  out << "| Overall | " << fixed2(overall_value(config, report)) << "±" << fixed2(report.ci_halfwidth)
      << " |\n";
  if (report.unconverged_machines > 0) {
    out << "\n" << report.unconverged_machines << " SVM machine(s) hit the iteration cap.\n";
  }
  return out.str();
}

}  // namespace har
