#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "orient/maps.hpp"

namespace orient {

struct SvgStyle {
  double size = 480.0;
  std::string low_color = "#d7191c";
  std::string high_color = "#1a9641";
  std::string title;
};

namespace svg {

inline std::string escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::array<int, 3> parse_hex(std::string_view hex) {
  if (hex.size() != 7 || hex[0] != '#') throw Error(ErrorKind::InvalidConfig, "colors must look like #rrggbb");
  std::array<int, 3> rgb{};
  for (int i = 0; i < 3; ++i) {
    const auto part = std::string(hex.substr(1 + 2 * static_cast<std::size_t>(i), 2));
    rgb[static_cast<std::size_t>(i)] = std::stoi(part, nullptr, 16);
  }
  return rgb;
}

inline std::string lerp_color(const std::string& lo, const std::string& hi, double t) {
  const auto a = parse_hex(lo), b = parse_hex(hi);
  t = std::clamp(t, 0.0, 1.0);
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>(std::lround(a[0] + t * (b[0] - a[0]))),
                static_cast<int>(std::lround(a[1] + t * (b[1] - a[1]))),
                static_cast<int>(std::lround(a[2] + t * (b[2] - a[2]))));
  return buf;
}

/// Linear two-color scale over the observed metric range. A collapsed range
/// maps everything to the high color.
class ColorScale {
 public:
  ColorScale(const SvgStyle& style) : style_(style) {}

  void observe(double v) {
    lo_ = lo_ ? std::min(*lo_, v) : v;
    hi_ = hi_ ? std::max(*hi_, v) : v;
  }
  bool empty() const { return !lo_; }
  bool collapsed() const { return lo_ && *hi_ - *lo_ <= 1e-12; }

  std::string color(double v) const {
    if (!lo_ || collapsed()) return style_.high_color;
    return lerp_color(style_.low_color, style_.high_color, (v - *lo_) / (*hi_ - *lo_));
  }

  /// Gradient bar with its end labels, or one swatch for a constant metric.
  std::string legend(double x, double y, std::string_view label) const {
    std::string s = "<g class=\"legend\">\n";
    s += "<text x=\"" + num(x) + "\" y=\"" + num(y - 6) + "\" font-size=\"11\">" + escape(label) + "</text>\n";
    if (!lo_) {
      s += "<text x=\"" + num(x) + "\" y=\"" + num(y + 12) + "\" font-size=\"11\">no data</text>\n";
    } else if (collapsed()) {
      s += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"16\" height=\"12\" fill=\"" + style_.high_color +
           "\"/>\n";
      s += "<text x=\"" + num(x + 22) + "\" y=\"" + num(y + 10) + "\" font-size=\"11\">" + num(*lo_) + "</text>\n";
    } else {
      s += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"120\" height=\"12\" fill=\"url(#scale)\"/>\n";
      s += "<text x=\"" + num(x) + "\" y=\"" + num(y + 26) + "\" font-size=\"11\">" + num(*lo_) + "</text>\n";
      s += "<text x=\"" + num(x + 120) + "\" y=\"" + num(y + 26) + "\" font-size=\"11\" text-anchor=\"end\">" +
           num(*hi_) + "</text>\n";
    }
    s += "</g>\n";
    return s;
  }

  std::string gradient_def() const {
    return "<defs><linearGradient id=\"scale\" x1=\"0\" x2=\"1\" y1=\"0\" y2=\"0\">"
           "<stop offset=\"0\" stop-color=\"" + style_.low_color + "\"/>"
           "<stop offset=\"1\" stop-color=\"" + style_.high_color + "\"/>"
           "</linearGradient></defs>\n";
  }

 private:
  SvgStyle style_;
  std::optional<double> lo_, hi_;
};

inline std::string open(double w, double h) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) +
         "\" height=\"" + num(h) + "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n";
}

inline std::string metric_label(MetricKind m) { return m == MetricKind::PassSuccess ? "pass success" : "added EPV"; }

/// Wedges of one sonar centered at (cx, cy). Angles are field angles, drawn
/// with +y up.
inline std::string sonar_wedges(const SonarData& s, double cx, double cy, double radius, const ColorScale& scale) {
  std::size_t max_count = 0;
  for (const auto& c : s.sectors) max_count = std::max(max_count, c.count);
  std::string out;
  if (max_count == 0) return out;
  for (int k = 0; k < kNumBins; ++k) {
    const auto& c = s.sectors[static_cast<std::size_t>(k)];
    if (c.count == 0) continue;
    const double r = radius * static_cast<double>(c.count) / static_cast<double>(max_count);
    const double a0 = bin_lower_edge(k) * kRadPerDeg;
    const double a1 = (bin_lower_edge(k) + kBinWidthDeg) * kRadPerDeg;
    const double x0 = cx + r * std::cos(a0), y0 = cy - r * std::sin(a0);
    const double x1 = cx + r * std::cos(a1), y1 = cy - r * std::sin(a1);
    out += "<path class=\"wedge\" data-bin=\"" + std::to_string(k) + "\" data-count=\"" + std::to_string(c.count) +
           "\" d=\"M " + num(cx) + " " + num(cy) + " L " + num(x0) + " " + num(y0) + " A " + num(r) + " " + num(r) +
           " 0 0 0 " + num(x1) + " " + num(y1) + " Z\" fill=\"" + scale.color(*c.metric_mean()) +
           "\" stroke=\"#333333\" stroke-width=\"0.5\"/>\n";
  }
  return out;
}

}  // namespace svg

inline std::string render_svg(const SonarData& s, const SvgStyle& style = {}) {
  svg::ColorScale scale(style);
  for (const auto& c : s.sectors)
    if (const auto m = c.metric_mean()) scale.observe(*m);
  const double size = style.size;
  const double cx = size / 2.0, cy = size / 2.0 + 10.0, radius = size * 0.36;
  std::string out = svg::open(size, size + 60.0);
  out += scale.gradient_def();
  const std::string title = style.title.empty() ? "OrientSonar - " + s.query.subject() : style.title;
  out += "<text x=\"10\" y=\"20\" font-size=\"14\">" + svg::escape(title) + "</text>\n";
  out += "<g class=\"axes\" stroke=\"#999999\" fill=\"none\">\n";
  out += "<circle cx=\"" + svg::num(cx) + "\" cy=\"" + svg::num(cy) + "\" r=\"" + svg::num(radius) + "\"/>\n";
  out += "<line x1=\"" + svg::num(cx - radius) + "\" y1=\"" + svg::num(cy) + "\" x2=\"" + svg::num(cx + radius) +
         "\" y2=\"" + svg::num(cy) + "\"/>\n";
  out += "<line x1=\"" + svg::num(cx) + "\" y1=\"" + svg::num(cy - radius) + "\" x2=\"" + svg::num(cx) + "\" y2=\"" +
         svg::num(cy + radius) + "\"/>\n";
  out += "</g>\n";
  out += "<g class=\"labels\" font-size=\"11\">\n";
  for (const int deg : {0, 90, 180, 270}) {
    const double a = deg * kRadPerDeg;
    out += "<text x=\"" + svg::num(cx + (radius + 14) * std::cos(a)) + "\" y=\"" +
           svg::num(cy - (radius + 14) * std::sin(a) + 4) + "\" text-anchor=\"middle\">" + std::to_string(deg) +
           "</text>\n";
  }
  out += "</g>\n";
  out += "<g class=\"wedges\">\n" + svg::sonar_wedges(s, cx, cy, radius, scale) + "</g>\n";
  out += scale.legend(10.0, size + 30.0, svg::metric_label(s.query.metric_kind));
  out += "</svg>\n";
  return out;
}

inline std::string render_svg(const ReactionData& r, const SvgStyle& style = {}) {
  svg::ColorScale scale(style);
  std::size_t max_count = 0;
  for (const auto& row : r.cells)
    for (const auto& c : row) {
      max_count = std::max(max_count, c.count);
      if (const auto m = c.metric_mean()) scale.observe(*m);
    }
  const double margin = 50.0, plot = style.size - margin - 10.0, cell = plot / kNumBins;
  std::string out = svg::open(style.size, style.size + 50.0);
  out += scale.gradient_def();
  const std::string title = style.title.empty() ? "Reaction map - " + r.query.subject() : style.title;
  out += "<text x=\"10\" y=\"20\" font-size=\"14\">" + svg::escape(title) + "</text>\n";
  const double top = 30.0;
  out += "<rect class=\"frame\" x=\"" + svg::num(margin) + "\" y=\"" + svg::num(top) + "\" width=\"" + svg::num(plot) +
         "\" height=\"" + svg::num(plot) + "\" fill=\"none\" stroke=\"#999999\"/>\n";
  out += "<line class=\"diagonal\" x1=\"" + svg::num(margin) + "\" y1=\"" + svg::num(top + plot) + "\" x2=\"" +
         svg::num(margin + plot) + "\" y2=\"" + svg::num(top) + "\" stroke=\"#dddddd\"/>\n";
  out += "<text x=\"" + svg::num(margin + plot / 2) + "\" y=\"" + svg::num(top + plot + 18) +
         "\" font-size=\"11\" text-anchor=\"middle\">bin at pass</text>\n";
  out += "<text x=\"12\" y=\"" + svg::num(top + plot / 2) + "\" font-size=\"11\">bin at reception</text>\n";
  out += "<g class=\"dots\">\n";
  for (int a = 0; a < kNumBins; ++a) {
    for (int b = 0; b < kNumBins; ++b) {
      const auto& c = r.cells[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      if (c.count == 0) continue;
      // Dot area follows volume.
      const double rad = 0.5 * cell * std::sqrt(static_cast<double>(c.count) / static_cast<double>(max_count));
      out += "<circle data-kick=\"" + std::to_string(a) + "\" data-receive=\"" + std::to_string(b) + "\" cx=\"" +
             svg::num(margin + (a + 0.5) * cell) + "\" cy=\"" + svg::num(top + plot - (b + 0.5) * cell) + "\" r=\"" +
             svg::num(rad) + "\" fill=\"" + scale.color(*c.metric_mean()) + "\"/>\n";
    }
  }
  out += "</g>\n";
  out += scale.legend(10.0, style.size + 20.0, svg::metric_label(r.query.metric_kind));
  out += "</svg>\n";
  return out;
}

inline std::string render_svg(const OnFieldData& o, const SvgStyle& style = {}) {
  svg::ColorScale scale(style);
  std::size_t max_count = 0;
  for (const auto& row : o.cells)
    for (const auto& c : row) {
      max_count = std::max(max_count, c.count);
      if (const auto m = c.metric_mean()) scale.observe(*m);
    }
  const double margin = 50.0, top = 30.0;
  const double plot_h = style.size - margin - 10.0, cell_h = plot_h / kNumBins;
  const double cell_w = 2.0 * cell_h, plot_w = cell_w * kGoalRelativeBins;
  std::string out = svg::open(std::max(style.size, margin + plot_w + 20.0), style.size + 50.0);
  out += scale.gradient_def();
  const std::string title = style.title.empty() ? "On-field map - " + o.query.subject() : style.title;
  out += "<text x=\"10\" y=\"20\" font-size=\"14\">" + svg::escape(title) + "</text>\n";
  out += "<rect class=\"frame\" x=\"" + svg::num(margin) + "\" y=\"" + svg::num(top) + "\" width=\"" + svg::num(plot_w) +
         "\" height=\"" + svg::num(plot_h) + "\" fill=\"none\" stroke=\"#999999\"/>\n";
  out += "<text x=\"" + svg::num(margin + plot_w / 2) + "\" y=\"" + svg::num(top + plot_h + 18) +
         "\" font-size=\"11\" text-anchor=\"middle\">orientation to goal (0-180)</text>\n";
  out += "<g class=\"cells\">\n";
  for (int g = 0; g < kGoalRelativeBins; ++g) {
    for (int b = 0; b < kNumBins; ++b) {
      const auto& c = o.cells[static_cast<std::size_t>(g)][static_cast<std::size_t>(b)];
      if (c.count == 0) continue;
      const double opacity = 0.3 + 0.7 * static_cast<double>(c.count) / static_cast<double>(max_count);
      out += "<rect data-goal=\"" + std::to_string(g) + "\" data-body=\"" + std::to_string(b) + "\" x=\"" +
             svg::num(margin + g * cell_w) + "\" y=\"" + svg::num(top + plot_h - (b + 1) * cell_h) + "\" width=\"" +
             svg::num(cell_w) + "\" height=\"" + svg::num(cell_h) + "\" fill=\"" + scale.color(*c.metric_mean()) +
             "\" fill-opacity=\"" + svg::num(opacity) + "\"/>\n";
    }
  }
  out += "</g>\n";
  out += scale.legend(10.0, style.size + 20.0, svg::metric_label(o.query.metric_kind));
  out += "</svg>\n";
  return out;
}

/// Pitch outline with each player's sonar at their mean position.
inline std::string render_svg(const TeamSonar& t, const FieldDims& dims = {}, const SvgStyle& style = {}) {
  svg::ColorScale scale(style);
  for (const auto& [_, s] : t.players)
    for (const auto& c : s.sectors)
      if (const auto m = c.metric_mean()) scale.observe(*m);
  const double px_per_m = 8.0, pad = 20.0;
  const double w = dims.length * px_per_m, h = dims.width * px_per_m;
  std::string out = svg::open(w + 2 * pad, h + 2 * pad + 60.0);
  out += scale.gradient_def();
  out += "<rect class=\"pitch\" x=\"" + svg::num(pad) + "\" y=\"" + svg::num(pad) + "\" width=\"" + svg::num(w) +
         "\" height=\"" + svg::num(h) + "\" fill=\"#eef5ea\" stroke=\"#777777\"/>\n";
  out += "<line x1=\"" + svg::num(pad + w / 2) + "\" y1=\"" + svg::num(pad) + "\" x2=\"" + svg::num(pad + w / 2) +
         "\" y2=\"" + svg::num(pad + h) + "\" stroke=\"#777777\"/>\n";
  for (const auto& [id, s] : t.players) {
    const auto pos = t.positions.find(id);
    if (pos == t.positions.end()) continue;
    const double cx = pad + pos->second.x * px_per_m, cy = pad + h - pos->second.y * px_per_m;
    out += "<g class=\"player\" data-player=\"" + svg::escape(id) + "\">\n";
    out += svg::sonar_wedges(s, cx, cy, 28.0, scale);
    out += "<text x=\"" + svg::num(cx) + "\" y=\"" + svg::num(cy + 40) + "\" font-size=\"10\" text-anchor=\"middle\">" +
           svg::escape(id) + "</text>\n";
    out += "</g>\n";
  }
  out += scale.legend(pad, h + 2 * pad + 25.0, svg::metric_label(t.query.metric_kind));
  out += "</svg>\n";
  return out;
}

}  // namespace orient
