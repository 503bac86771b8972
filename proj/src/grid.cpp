#include "capplan/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace capplan {

double distance(Point a, Point b) { return std::hypot(a.x_m - b.x_m, a.y_m - b.y_m); }

namespace {

std::size_t axis_pixels(double extent_m, double resolution_m) {
  return static_cast<std::size_t>(std::ceil(extent_m / resolution_m));
}

}  // namespace

GridSpec::GridSpec(double width_m, double height_m, double resolution_m)
    : width_m_(width_m), height_m_(height_m), resolution_m_(resolution_m) {
  if (!(resolution_m > 0.0)) {
    throw std::invalid_argument("grid resolution_m must be > 0");
  }
  if (!(width_m > 0.0) || !(height_m > 0.0)) {
    throw std::invalid_argument("grid dimensions must be > 0");
  }
  columns_ = axis_pixels(width_m, resolution_m);
  rows_ = axis_pixels(height_m, resolution_m);
}

Point GridSpec::position(PixelIndex u) const {
  if (!contains(u)) {
    throw std::out_of_range("pixel index out of range");
  }
  const auto col = static_cast<double>(u % columns_);
  const auto row = static_cast<double>(u / columns_);
  return {std::min((col + 0.5) * resolution_m_, width_m_),
          std::min((row + 0.5) * resolution_m_, height_m_)};
}

PixelIndex GridSpec::pixel_at(Point p) const {
  auto index = [this](double v, std::size_t n) {
    const double cell = std::floor(v / resolution_m_);
    if (cell < 0.0) return std::size_t{0};
    return std::min(static_cast<std::size_t>(cell), n - 1);
  };
  return index(p.y_m, rows_) * columns_ + index(p.x_m, columns_);
}

}  // namespace capplan
