#include "capplan/sla.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "capplan/error.hpp"

namespace capplan {

BusyHourSpec busy_hour_spec(const TenantProfile& tenant, double busy_weight) {
  if (!(busy_weight > 0.0) || busy_weight > 1.0) {
    throw std::invalid_argument("busy weight must lie in (0, 1]");
  }
  return {tenant.id, tenant.contracted_capacity_mbps * busy_weight};
}

double PlanningSpecSet::cell_value(CellId id) const {
  auto it = std::find(cell_ids.begin(), cell_ids.end(), id);
  if (it == cell_ids.end()) throw PlanningError("unknown cell " + std::to_string(id));
  return cell_values[static_cast<std::size_t>(it - cell_ids.begin())];
}

double PlanningSpecSet::cell_total() const {
  return std::accumulate(cell_values.begin(), cell_values.end(), 0.0);
}

PlanningSpecSet translate_sc_level(double a_busy_mbps, const NetworkState& state, SpecMethod method,
                                   std::span<const double> cell_demands) {
  if (state.empty()) throw PlanningError("empty network");
  PlanningSpecSet out;
  out.level = SpecLevel::sc;
  out.method = method;
  out.a_busy_mbps = a_busy_mbps;
  for (const auto& c : state.cells) out.cell_ids.push_back(c.id);

  const auto n = static_cast<double>(state.size());
  if (method == SpecMethod::uniform) {
    out.cell_values.assign(state.size(), a_busy_mbps / n);
    return out;
  }
  if (cell_demands.size() != state.size()) {
    throw std::invalid_argument("cell demands do not match the network");
  }
  const double total = std::accumulate(cell_demands.begin(), cell_demands.end(), 0.0);
  if (!(total > 0.0)) throw PlanningError("no correlation basis");
  for (double d : cell_demands) out.cell_values.push_back(a_busy_mbps * d / total);
  return out;
}

PlanningSpecSet translate_pixel_level(double a_busy_mbps, const GridSpec& grid, SpecMethod method,
                                      std::span<const double> pixel_demands,
                                      const ServingMap& serving) {
  const std::size_t pixels = grid.pixel_count();
  if (pixels == 0) throw std::invalid_argument("empty grid");
  PlanningSpecSet out;
  out.level = SpecLevel::pixel;
  out.method = method;
  out.a_busy_mbps = a_busy_mbps;
  if (method == SpecMethod::uniform) {
    out.pixel_values.assign(pixels, a_busy_mbps / static_cast<double>(pixels));
  } else {
    if (pixel_demands.size() != pixels) {
      throw std::invalid_argument("pixel demands do not match the grid");
    }
    const double total = std::accumulate(pixel_demands.begin(), pixel_demands.end(), 0.0);
    if (!(total > 0.0)) throw PlanningError("no correlation basis");
    out.pixel_values.resize(pixels);
    std::transform(pixel_demands.begin(), pixel_demands.end(), out.pixel_values.begin(),
                   [&](double d) { return a_busy_mbps * d / total; });
  }
  if (serving.pixel_count() > 0) {
    out.cell_ids = serving.cell_ids();
    out.cell_values = pixel_specs_to_cell(out, serving);
  }
  return out;
}

std::vector<double> pixel_specs_to_cell(const PlanningSpecSet& specs, const ServingMap& serving) {
  if (specs.level != SpecLevel::pixel) {
    throw std::invalid_argument("pixel_specs_to_cell needs a pixel-level spec set");
  }
  return serving.sum_by_cell(specs.pixel_values);
}

}  // namespace capplan
