#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace loglin::svg {

/// Data-space rectangle.
struct Bounds {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;

  void include(const Eigen::Vector2d& p);
  Bounds padded(double fraction) const;
  static Bounds empty();
};

struct Style {
  std::string stroke = "#000";
  std::string fill = "none";
  double width = 1.0;
  double opacity = 1.0;
};

/// Multi-panel SVG figure written as plain text, no plotting dependency.
class Figure {
 public:
  Figure(int width, int height);

  /// Adds a panel occupying a pixel rectangle; returns its index. With
  /// equal_aspect the data bounds are widened so one unit is square.
  int panel(double px, double py, double pw, double ph, Bounds data, const std::string& title,
            const std::string& xlabel, const std::string& ylabel, bool equal_aspect = false, bool log_y = false);

  void polyline(int panel, const std::vector<Eigen::Vector2d>& pts, const Style& style);
  void polygon(int panel, const std::vector<Eigen::Vector2d>& pts, const Style& style);
  void legend(int panel, const std::vector<std::pair<std::string, std::string>>& entries);

  std::string str() const;

 private:
  struct Panel {
    double px, py, pw, ph;
    Bounds data;
    bool log_y;
  };
  Eigen::Vector2d map(const Panel& p, const Eigen::Vector2d& q) const;
  std::string points(const Panel& p, const std::vector<Eigen::Vector2d>& pts) const;

  int width_, height_;
  std::vector<Panel> panels_;
  std::string body_;
};

}  // namespace loglin::svg
