#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>

#include "cli.hpp"

namespace har::cli {

namespace {

struct Run {
  std::size_t file = 0;
  std::string treatment;
  std::string column;
  // activity -> (value, ci) and activity -> unit -> value; "overall" holds accuracy.
  std::map<std::string, std::pair<double, double>> cells;
  std::map<std::string, std::map<std::string, double>> units;
};

struct Table {
  std::string title;
  std::vector<Run> runs;
};

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string pvalue(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", p);
  return buf;
}

std::string unit_of(std::string_view metric) {
  const auto open = metric.find('[');
  if (open == std::string_view::npos || metric.back() != ']') return {};
  return std::string(metric.substr(open + 1, metric.size() - open - 2));
}

std::vector<Table> collect(std::span<const ResultsFile> files) {
  std::vector<Table> tables;
  std::map<std::string, std::size_t> table_index;
  for (std::size_t f = 0; f < files.size(); ++f) {
    for (const auto& r : files[f].rows) {
      const std::string title = r.classifier + ", bank " + r.bank + ", " + r.protocol + ", " +
                                std::to_string(r.window) + " samples/window";
      auto [it, fresh] = table_index.try_emplace(title, tables.size());
      if (fresh) tables.push_back(Table{title, {}});
      auto& runs = tables[it->second].runs;
      auto run = std::ranges::find_if(
          runs, [&](const Run& x) { return x.file == f && x.treatment == r.treatment; });
      if (run == runs.end()) {
        runs.push_back(Run{f, r.treatment, r.treatment, {}, {}});
        run = std::prev(runs.end());
      }
      if (r.metric == "accuracy" || r.metric == "recall") {
        run->cells[r.activity] = {r.value, r.ci_halfwidth};
      } else if (r.metric.starts_with("unit_accuracy[") || r.metric.starts_with("unit_recall[")) {
        run->units[r.activity][unit_of(r.metric)] = r.value;
      }
    }
  }
  for (auto& t : tables) {
    for (auto& run : t.runs) {
      const auto same = std::ranges::count_if(t.runs, [&](const Run& x) { return x.treatment == run.treatment; });
      if (same > 1) run.column += " (" + std::to_string(run.file + 1) + ": " + files[run.file].name + ")";
    }
  }
  return tables;
}

std::optional<std::pair<std::size_t, std::size_t>> comparison(const Table& t) {
  const auto find = [&](std::string_view treatment) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < t.runs.size(); ++i) {
      if (t.runs[i].treatment == treatment) return i;
    }
    return std::nullopt;
  };
  const auto nr = find("nr-rp");
  const auto unr = find("unr-rp");
  if (nr && unr) return std::pair{*nr, *unr};
  if (t.runs.size() == 2) return std::pair{std::size_t{0}, std::size_t{1}};
  return std::nullopt;
}

}  // namespace

std::string combined_report(std::span<const ResultsFile> files) {
  std::ostringstream md;
  md << "# Classification results\n\n";
  const bool test = files.size() > 1;
  if (!test) {
    md << "> Only one results file was given, so no significance tests were run.\n\n";
  } else {
    md << "Paired t-tests over per-subject values; cells in bold are significantly better at alpha = "
       << kSignificanceAlpha << ".\n\n";
  }

  const std::vector<std::string> activities = [] {
    std::vector<std::string> v;
    for (Activity a : kAllActivities) v.emplace_back(activity_label(a));
    v.emplace_back("overall");
    return v;
  }();

  for (const auto& table : collect(files)) {
    const auto pair = test ? comparison(table) : std::nullopt;
    md << "### " << table.title << "\n\n| Activity |";
    for (const auto& run : table.runs) md << ' ' << run.column << " |";
    if (pair) md << " p (" << table.runs[pair->first].column << " vs " << table.runs[pair->second].column << ") |";
    md << "\n|---|";
    for (std::size_t i = 0; i < table.runs.size() + (pair ? 1 : 0); ++i) md << "---|";
    md << '\n';

    for (const auto& activity : activities) {
      std::optional<std::size_t> winner;
      std::string p_cell = "n/a";
      if (pair) {
        const Run& a = table.runs[pair->first];
        const Run& b = table.runs[pair->second];
        std::vector<double> va;
        std::vector<double> vb;
        if (a.units.contains(activity) && b.units.contains(activity)) {
          for (const auto& [unit, value] : a.units.at(activity)) {
            const auto& other = b.units.at(activity);
            if (auto it = other.find(unit); it != other.end()) {
              va.push_back(value);
              vb.push_back(it->second);
            }
          }
        }
        if (va.size() >= 2) {
          const TTestResult r = paired_t_test(va, vb);
          p_cell = pvalue(r.p);
          if (r.p < kSignificanceAlpha && r.t != 0.0) winner = r.t > 0 ? pair->first : pair->second;
        }
      }
      md << "| " << (activity == "overall" ? std::string("Overall")
                                           : std::string(activity_title(parse_activity(activity))))
         << " |";
      for (std::size_t i = 0; i < table.runs.size(); ++i) {
        const auto& cells = table.runs[i].cells;
        const auto it = cells.find(activity);
        if (it == cells.end()) {
          md << " n/a |";
          continue;
        }
        const std::string cell = fixed2(it->second.first) + "±" + fixed2(it->second.second);
        md << ' ' << (winner == i ? "**" + cell + "**" : cell) << " |";
      }
      if (pair) md << ' ' << p_cell << " |";
      md << '\n';
    }
    md << '\n';
  }
  return md.str();
}

}  // namespace har::cli
