#include "loglin/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "loglin/errors.hpp"

namespace loglin::svg {
namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

// Tick positions at 1, 2 or 5 times a power of ten.
std::vector<double> ticks(double lo, double hi, int target) {
  std::vector<double> out;
  const double span = hi - lo;
  if (!(span > 0.0)) return out;
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) out.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
  return out;
}

}  // namespace

void Bounds::include(const Eigen::Vector2d& p) {
  x0 = std::min(x0, p.x());
  x1 = std::max(x1, p.x());
  y0 = std::min(y0, p.y());
  y1 = std::max(y1, p.y());
}

Bounds Bounds::padded(double fraction) const {
  Bounds b = *this;
  double dx = (x1 - x0) * fraction, dy = (y1 - y0) * fraction;
  if (dx == 0.0) dx = std::max(1e-9, std::abs(x0) * 0.1 + 1e-6);
  if (dy == 0.0) dy = std::max(1e-9, std::abs(y0) * 0.1 + 1e-6);
  b.x0 -= dx;
  b.x1 += dx;
  b.y0 -= dy;
  b.y1 += dy;
  return b;
}

Bounds Bounds::empty() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {inf, -inf, inf, -inf};
}

Figure::Figure(int width, int height) : width_(width), height_(height) {}

int Figure::panel(double px, double py, double pw, double ph, Bounds data, const std::string& title,
                  const std::string& xlabel, const std::string& ylabel, bool equal_aspect, bool log_y) {
  if (log_y) {
    data.y0 = std::log10(std::max(data.y0, 1e-300));
    data.y1 = std::log10(std::max(data.y1, 1e-300));
    if (data.y1 <= data.y0) data.y1 = data.y0 + 1.0;
  }
  if (equal_aspect) {
    const double sx = (data.x1 - data.x0) / pw, sy = (data.y1 - data.y0) / ph;
    const double s = std::max(sx, sy);
    const double cx = 0.5 * (data.x0 + data.x1), cy = 0.5 * (data.y0 + data.y1);
    data = {cx - 0.5 * s * pw, cx + 0.5 * s * pw, cy - 0.5 * s * ph, cy + 0.5 * s * ph};
  }
  panels_.push_back({px, py, pw, ph, data, log_y});
  const Panel& p = panels_.back();

  body_ += fmt::format(R"~(<rect x="{:.1f}" y="{:.1f}" width="{:.1f}" height="{:.1f}" fill="#fff" stroke="#444"/>)~"
                       "\n", px, py, pw, ph);
  body_ += fmt::format(R"~(<text x="{:.1f}" y="{:.1f}" font-size="13" text-anchor="middle">{}</text>)~" "\n",
                       px + pw / 2, py - 8, escape(title));
  body_ += fmt::format(R"~(<text x="{:.1f}" y="{:.1f}" font-size="11" text-anchor="middle">{}</text>)~" "\n",
                       px + pw / 2, py + ph + 32, escape(xlabel));
  body_ += fmt::format(R"~(<text x="{:.1f}" y="{:.1f}" font-size="11" text-anchor="middle" transform="rotate(-90 {:.1f} {:.1f})">{}</text>)~" "\n",
                       px - 44, py + ph / 2, px - 44, py + ph / 2, escape(ylabel));
  for (double t : ticks(p.data.x0, p.data.x1, 5)) {
    const double x = map(p, {t, p.data.y0}).x();
    body_ += fmt::format(R"~(<line x1="{0:.1f}" y1="{1:.1f}" x2="{0:.1f}" y2="{2:.1f}" stroke="#ddd"/>)~" "\n", x, py, py + ph);
    body_ += fmt::format(R"~(<text x="{:.1f}" y="{:.1f}" font-size="10" text-anchor="middle">{:g}</text>)~" "\n", x, py + ph + 14, t);
  }
  for (double t : ticks(p.data.y0, p.data.y1, 4)) {
    const double y = py + ph - (t - p.data.y0) / (p.data.y1 - p.data.y0) * ph;
    body_ += fmt::format(R"~(<line x1="{0:.1f}" y1="{2:.1f}" x2="{1:.1f}" y2="{2:.1f}" stroke="#ddd"/>)~" "\n", px, px + pw, y);
    const std::string label = log_y ? fmt::format("1e{:g}", t) : fmt::format("{:g}", t);
    body_ += fmt::format(R"~(<text x="{:.1f}" y="{:.1f}" font-size="10" text-anchor="end">{}</text>)~" "\n", px - 4, y + 3, label);
  }
  return static_cast<int>(panels_.size()) - 1;
}

Eigen::Vector2d Figure::map(const Panel& p, const Eigen::Vector2d& q) const {
  double y = q.y();
  if (p.log_y) y = std::log10(std::max(y, 1e-300));
  return {p.px + (q.x() - p.data.x0) / (p.data.x1 - p.data.x0) * p.pw,
          p.py + p.ph - (y - p.data.y0) / (p.data.y1 - p.data.y0) * p.ph};
}

std::string Figure::points(const Panel& p, const std::vector<Eigen::Vector2d>& pts) const {
  std::string s;
  for (const auto& q : pts) {
    const Eigen::Vector2d m = map(p, q);
    if (!s.empty()) s += ' ';
    s += fmt::format("{:.2f},{:.2f}", m.x(), m.y());
  }
  return s;
}

void Figure::polyline(int panel, const std::vector<Eigen::Vector2d>& pts, const Style& style) {
  const Panel& p = panels_.at(static_cast<std::size_t>(panel));
  body_ += fmt::format(R"~(<polyline points="{}" fill="none" stroke="{}" stroke-width="{:g}" stroke-opacity="{:g}" clip-path="url(#c{})"/>)~" "\n",
                       points(p, pts), style.stroke, style.width, style.opacity, panel);
}

void Figure::polygon(int panel, const std::vector<Eigen::Vector2d>& pts, const Style& style) {
  const Panel& p = panels_.at(static_cast<std::size_t>(panel));
  body_ += fmt::format(R"~(<polygon points="{}" fill="{}" fill-opacity="{:g}" stroke="{}" stroke-width="{:g}" clip-path="url(#c{})"/>)~" "\n",
                       points(p, pts), style.fill, style.opacity, style.stroke, style.width, panel);
}

void Figure::legend(int panel, const std::vector<std::pair<std::string, std::string>>& entries) {
  const Panel& p = panels_.at(static_cast<std::size_t>(panel));
  double y = p.py + 14;
  for (const auto& [label, color] : entries) {
    body_ += fmt::format(R"~(<line x1="{0:.1f}" y1="{2:.1f}" x2="{1:.1f}" y2="{2:.1f}" stroke="{3}" stroke-width="2"/>)~" "\n",
                         p.px + 8, p.px + 28, y - 4, color);
    body_ += fmt::format(R"~(<text x="{:.1f}" y="{:.1f}" font-size="10">{}</text>)~" "\n", p.px + 32, y, escape(label));
    y += 14;
  }
}

std::string Figure::str() const {
  std::string out = fmt::format(
      R"~(<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{1}" viewBox="0 0 {0} {1}" font-family="sans-serif">)~"
      "\n<defs>\n",
      width_, height_);
  for (std::size_t i = 0; i < panels_.size(); ++i) {
    const Panel& p = panels_[i];
    out += fmt::format(R"~(<clipPath id="c{}"><rect x="{:.1f}" y="{:.1f}" width="{:.1f}" height="{:.1f}"/></clipPath>)~" "\n",
                       i, p.px, p.py, p.pw, p.ph);
  }
  out += "</defs>\n";
  out += fmt::format(R"~(<rect width="{}" height="{}" fill="#fafafa"/>)~" "\n", width_, height_);
  out += body_;
  out += "</svg>\n";
  return out;
}

}  // namespace loglin::svg
