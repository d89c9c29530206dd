#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "cli.hpp"

namespace har::cli {

namespace {

constexpr double kWidth = 820;
constexpr double kHeight = 460;
constexpr double kLeft = 70;
constexpr double kRight = 600;
constexpr double kTop = 30;
constexpr double kBottom = 400;

constexpr std::array<const char*, 10> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                                  "#bcbd22", "#17becf"};

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string sweep_svg(std::span<const ResultRow> rows) {
  // Series in order of first appearance; points sorted by window.
  std::vector<std::string> order;
  std::map<std::string, std::map<std::size_t, double>> series;
  std::size_t lo = SIZE_MAX;
  std::size_t hi = 0;
  std::vector<std::string> contexts;
  for (const auto& r : rows) {
    if (r.metric != "accuracy" && r.metric != "recall") continue;
    const std::string context = r.protocol + " " + r.bank + " " + r.treatment;
    if (std::ranges::find(contexts, context) == contexts.end()) contexts.push_back(context);
  }
  for (const auto& r : rows) {
    if (r.metric != "accuracy" && r.metric != "recall") continue;
    std::string name = r.classifier + " " + r.activity;
    if (contexts.size() > 1) name += " (" + r.protocol + " " + r.bank + " " + r.treatment + ")";
    if (!series.contains(name)) order.push_back(name);
    series[name][r.window] = r.value;
    lo = std::min(lo, r.window);
    hi = std::max(hi, r.window);
  }

  auto x_of = [&](std::size_t w) {
    if (hi == lo) return (kLeft + kRight) / 2;
    return kLeft + (kRight - kLeft) * static_cast<double>(w - lo) / static_cast<double>(hi - lo);
  };
  auto y_of = [](double v) { return kBottom - (kBottom - kTop) * std::clamp(v, 0.0, 1.0); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<title>Accuracy by samples per window</title>\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  svg << "<g stroke=\"black\">\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight << "\" y2=\"" << kBottom << "\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kBottom << "\"/>\n"
      << "</g>\n";
  svg << "<g text-anchor=\"end\">\n";
  for (int t = 0; t <= 10; t += 2) {
    const double v = t / 10.0;
    svg << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << num(y_of(v)) << "\" x2=\"" << kLeft
        << "\" y2=\"" << num(y_of(v)) << "\" stroke=\"black\"/>"
        << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(y_of(v) + 4) << "\">" << num(v) << "</text>\n";
  }
  svg << "</g>\n<g text-anchor=\"middle\">\n";
  std::vector<std::size_t> ticks;
  for (const auto& [name, pts] : series) {
    for (const auto& [w, v] : pts) ticks.push_back(w);
  }
  std::ranges::sort(ticks);
  ticks.erase(std::unique(ticks.begin(), ticks.end()), ticks.end());
  for (std::size_t w : ticks) {
    svg << "<line x1=\"" << num(x_of(w)) << "\" y1=\"" << kBottom << "\" x2=\"" << num(x_of(w))
        << "\" y2=\"" << kBottom + 4 << "\" stroke=\"black\"/>"
        << "<text x=\"" << num(x_of(w)) << "\" y=\"" << kBottom + 16 << "\">" << w << "</text>\n";
  }
  svg << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kBottom + 40
      << "\">samples per window</text>\n"
      << "<text x=\"18\" y=\"" << (kTop + kBottom) / 2 << "\" transform=\"rotate(-90 18 "
      << (kTop + kBottom) / 2 << ")\">accuracy</text>\n</g>\n";

  for (std::size_t s = 0; s < order.size(); ++s) {
    const auto& pts = series[order[s]];
    const char* color = kPalette[s % kPalette.size()];
    svg << "<g stroke=\"" << color << "\" fill=\"" << color << "\">\n";
    if (pts.size() > 1) {
      svg << "<polyline fill=\"none\" stroke-width=\"1.5\" points=\"";
      bool first = true;
      for (const auto& [w, v] : pts) {
        svg << (first ? "" : " ") << num(x_of(w)) << ',' << num(y_of(v));
        first = false;
      }
      svg << "\"/>\n";
    }
    for (const auto& [w, v] : pts) {
      svg << "<circle cx=\"" << num(x_of(w)) << "\" cy=\"" << num(y_of(v)) << "\" r=\"2.5\"/>\n";
    }
    const double ly = kTop + 14.0 * static_cast<double>(s);
    svg << "<line x1=\"" << kRight + 20 << "\" y1=\"" << num(ly) << "\" x2=\"" << kRight + 36
        << "\" y2=\"" << num(ly) << "\" stroke-width=\"2\"/>"
        << "<text x=\"" << kRight + 40 << "\" y=\"" << num(ly + 4) << "\" stroke=\"none\" fill=\"black\">"
        << escape(order[s]) << "</text>\n</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace har::cli
