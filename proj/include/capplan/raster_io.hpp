#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "capplan/grid.hpp"

namespace capplan {

/// One row per pixel: index, x_m, y_m, value. Values are written in shortest
/// round-trip form, so read_raster_csv returns them bit-identical.
void write_raster_csv(const std::filesystem::path& path, const GridSpec& grid,
                      std::span<const double> values);
std::vector<double> read_raster_csv(const std::filesystem::path& path, const GridSpec& grid);

/// 8-bit greyscale image, linearly scaled from 0 to the raster maximum.
void write_pgm(const std::filesystem::path& path, const GridSpec& grid,
               std::span<const double> values);

}  // namespace capplan
