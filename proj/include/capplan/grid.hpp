#pragma once

#include <cstddef>

namespace capplan {

using PixelIndex = std::size_t;

struct Point {
  double x_m = 0.0;
  double y_m = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(Point a, Point b);

/// Rectangular raster of square pixels. Pixel u sits at row u / columns and
/// column u % columns; its position is the pixel center, clamped to the
/// area when the last row or column overhangs the boundary.
class GridSpec {
 public:
  GridSpec(double width_m, double height_m, double resolution_m);

  double width_m() const { return width_m_; }
  double height_m() const { return height_m_; }
  double resolution_m() const { return resolution_m_; }

  std::size_t columns() const { return columns_; }
  std::size_t rows() const { return rows_; }
  std::size_t pixel_count() const { return columns_ * rows_; }

  bool contains(PixelIndex u) const { return u < pixel_count(); }
  Point position(PixelIndex u) const;
  // Pixel whose square contains (x, y); coordinates outside the area snap to
  // the nearest edge pixel.
  PixelIndex pixel_at(Point p) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  double width_m_;
  double height_m_;
  double resolution_m_;
  std::size_t columns_;
  std::size_t rows_;
};

}  // namespace capplan
