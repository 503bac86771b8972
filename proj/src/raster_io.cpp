#include "capplan/raster_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string>

#include <fmt/format.h>
#include <fmt/os.h>

#include "capplan/error.hpp"

namespace capplan {

namespace {

void check_size(const GridSpec& grid, std::span<const double> values) {
  if (values.size() != grid.pixel_count()) {
    throw std::invalid_argument("raster does not match the grid");
  }
}

double parse_double(std::string_view field, const std::filesystem::path& path, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw InputError(fmt::format("{}:{}: bad number '{}'", path.string(), line, field));
  }
  return v;
}

}  // namespace

void write_raster_csv(const std::filesystem::path& path, const GridSpec& grid,
                      std::span<const double> values) {
  check_size(grid, values);
  auto out = fmt::output_file(path.string());
  out.print("index,x_m,y_m,value\n");
  for (PixelIndex u = 0; u < values.size(); ++u) {
    const Point p = grid.position(u);
    out.print("{},{},{},{}\n", u, p.x_m, p.y_m, values[u]);
  }
}

std::vector<double> read_raster_csv(const std::filesystem::path& path, const GridSpec& grid) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("{}: cannot open", path.string()));
  std::vector<double> values(grid.pixel_count(), 0.0);
  std::vector<bool> seen(values.size(), false);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 || line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
      fields.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    fields.push_back(rest);
    if (fields.size() != 4) {
      throw InputError(fmt::format("{}:{}: expected 4 fields", path.string(), lineno));
    }
    const double idx = parse_double(fields[0], path, lineno);
    if (idx < 0 || idx >= static_cast<double>(values.size()) || idx != std::floor(idx)) {
      throw InputError(fmt::format("{}:{}: pixel index out of range", path.string(), lineno));
    }
    const auto u = static_cast<std::size_t>(idx);
    values[u] = parse_double(fields[3], path, lineno);
    seen[u] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw InputError(fmt::format("{}: raster does not cover every pixel", path.string()));
  }
  return values;
}

void write_pgm(const std::filesystem::path& path, const GridSpec& grid,
               std::span<const double> values) {
  check_size(grid, values);
  double peak = 0.0;
  for (double v : values) {
    if (std::isfinite(v)) peak = std::max(peak, v);
  }
  auto out = fmt::output_file(path.string());
  out.print("P2\n{} {}\n255\n", grid.columns(), grid.rows());
  for (std::size_t r = 0; r < grid.rows(); ++r) {
    for (std::size_t c = 0; c < grid.columns(); ++c) {
      const double v = values[r * grid.columns() + c];
      long level = 0;
      if (std::isfinite(v) && peak > 0.0) level = std::lround(255.0 * std::max(v, 0.0) / peak);
      out.print("{}{}", level, c + 1 < grid.columns() ? ' ' : '\n');
    }
  }
}

}  // namespace capplan
