#include "gw/bench/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "gw/error.hpp"

namespace gw::bench {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
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

struct Point {
  double x, y, lo, hi;
  bool band;
};

}  // namespace

PlotResult emit_plot(std::span<const AggregateRow> rows, const PlotOptions& options) {
  require(options.epsilon > 0.0, ErrorCategory::invalid_argument, "plot epsilon must be positive");
  std::string metric = options.metric;
  if (metric.empty()) {
    std::set<std::string> metrics;
    for (const auto& r : rows) metrics.insert(r.metric);
    require(metrics.size() == 1, ErrorCategory::invalid_argument,
            "plot needs --metric when the input has " + std::to_string(metrics.size()) + " metrics");
    metric = *metrics.begin();
  }

  PlotResult result;
  std::map<std::string, std::vector<Point>> series;
  long clamped = 0, dropped = 0;
  const double eps = options.epsilon;
  for (const auto& r : rows) {
    if (r.metric != metric) continue;
    const double x = options.x_axis == PlotAxis::iteration ? static_cast<double>(r.iteration)
                                                           : r.mean_wall_ns * 1e-9;
    if (!(x > 0.0)) {
      ++dropped;
      continue;
    }
    Point p{};
    p.x = std::log10(x);
    if (!(r.value.mean > eps)) ++clamped;
    p.y = std::log10(std::max(r.value.mean, eps));
    p.band = r.value.half_width.has_value();
    const double hw = p.band ? *r.value.half_width : 0.0;
    p.lo = std::log10(std::max(r.value.mean - hw, eps));
    p.hi = std::log10(std::max(r.value.mean + hw, eps));
    series[r.label].push_back(p);
  }
  require(!series.empty(), ErrorCategory::invalid_argument, "no data for metric " + metric);
  if (clamped > 0) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", eps);
    result.warnings.push_back(std::to_string(clamped) + " nonpositive or tiny value(s) clamped to " +
                              buf);
  }
  if (dropped > 0) {
    result.warnings.push_back(std::to_string(dropped) + " point(s) with nonpositive x dropped");
  }

  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (auto& [label, pts] : series) {
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
    for (const auto& p : pts) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min({ymin, p.y, p.lo});
      ymax = std::max({ymax, p.y, p.hi});
    }
  }
  xmin = std::floor(xmin);
  xmax = std::max(std::ceil(xmax), xmin + 1.0);
  ymin = std::floor(ymin);
  ymax = std::max(std::ceil(ymax), ymin + 1.0);

  const double left = 80, right = 180, top = 40, bottom = 60;
  const double w = options.width, h = options.height;
  const double pw = w - left - right, ph = h - top - bottom;
  auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(options.width) +
       "\" height=\"" + std::to_string(options.height) + "\" viewBox=\"0 0 " +
       std::to_string(options.width) + " " + std::to_string(options.height) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!options.title.empty()) {
    s += "<text x=\"" + fmt(left + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
         escape(options.title) + "</text>\n";
  }
  s += "<g font-size=\"12\" stroke=\"#cccccc\">\n";
  for (double d = xmin; d <= xmax + 1e-9; d += 1.0) {
    s += "<line x1=\"" + fmt(sx(d)) + "\" y1=\"" + fmt(top) + "\" x2=\"" + fmt(sx(d)) +
         "\" y2=\"" + fmt(top + ph) + "\"/>\n";
    s += "<text stroke=\"none\" fill=\"black\" x=\"" + fmt(sx(d)) + "\" y=\"" +
         fmt(top + ph + 18) + "\" text-anchor=\"middle\">1e" + std::to_string(std::lround(d)) +
         "</text>\n";
  }
  for (double d = ymin; d <= ymax + 1e-9; d += 1.0) {
    s += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(sy(d)) + "\" x2=\"" + fmt(left + pw) +
         "\" y2=\"" + fmt(sy(d)) + "\"/>\n";
    s += "<text stroke=\"none\" fill=\"black\" x=\"" + fmt(left - 6) + "\" y=\"" +
         fmt(sy(d) + 4) + "\" text-anchor=\"end\">1e" + std::to_string(std::lround(d)) +
         "</text>\n";
  }
  s += "</g>\n";
  s += "<rect x=\"" + fmt(left) + "\" y=\"" + fmt(top) + "\" width=\"" + fmt(pw) + "\" height=\"" +
       fmt(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  const std::string xlabel = options.x_axis == PlotAxis::iteration ? "iteration" : "time (s)";
  s += "<text x=\"" + fmt(left + pw / 2) + "\" y=\"" + fmt(h - 16) +
       "\" text-anchor=\"middle\" font-size=\"13\">" + xlabel + "</text>\n";
  s += "<text x=\"18\" y=\"" + fmt(top + ph / 2) + "\" text-anchor=\"middle\" font-size=\"13\" " +
       "transform=\"rotate(-90 18 " + fmt(top + ph / 2) + ")\">" + escape(metric) + "</text>\n";

  std::size_t index = 0;
  for (const auto& [label, pts] : series) {
    const std::string color = kPalette[index % std::size(kPalette)];
    std::string upper, lower;
    bool band = false;
    for (const auto& p : pts) band = band || p.band;
    if (band) {
      std::string poly;
      for (const auto& p : pts) poly += fmt(sx(p.x)) + "," + fmt(sy(p.hi)) + " ";
      for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
        poly += fmt(sx(it->x)) + "," + fmt(sy(it->lo)) + " ";
      }
      poly.pop_back();
      s += "<polygon points=\"" + poly + "\" fill=\"" + color +
           "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
    }
    std::string line;
    for (const auto& p : pts) line += fmt(sx(p.x)) + "," + fmt(sy(p.y)) + " ";
    line.pop_back();
    s += "<polyline points=\"" + line + "\" fill=\"none\" stroke=\"" + color +
         "\" stroke-width=\"2\"/>\n";
    const double ly = top + 16 + 20 * static_cast<double>(index);
    s += "<line x1=\"" + fmt(left + pw + 12) + "\" y1=\"" + fmt(ly) + "\" x2=\"" +
         fmt(left + pw + 36) + "\" y2=\"" + fmt(ly) + "\" stroke=\"" + color +
         "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + fmt(left + pw + 42) + "\" y=\"" + fmt(ly + 4) + "\" font-size=\"12\">" +
         escape(label) + "</text>\n";
    ++index;
  }
  s += "</svg>\n";
  result.svg = std::move(s);
  return result;
}

}  // namespace gw::bench
