#pragma once

#include <span>
#include <string>
#include <vector>

#include "capplan/grid.hpp"
#include "capplan/scenario.hpp"

namespace capplan {

enum class SpecLevel { sc, pixel };
enum class SpecMethod { uniform, correlated };

struct BusyHourSpec {
  std::string tenant_id;
  double a_busy_mbps = 0.0;
};

/// A_m^(t_B) = contracted capacity times the tenant's weight at the network
/// busy hour.
BusyHourSpec busy_hour_spec(const TenantProfile& tenant, double busy_weight = 1.0);

/// Detailed planning specifications of one tenant. SC-level sets carry only
/// per-cell values; pixel-level sets carry per-pixel values plus their
/// aggregation over the serving map they were built against.
struct PlanningSpecSet {
  SpecLevel level = SpecLevel::sc;
  SpecMethod method = SpecMethod::uniform;
  double a_busy_mbps = 0.0;
  std::vector<CellId> cell_ids;
  std::vector<double> cell_values;   // A_{m,i}, parallel to cell_ids
  std::vector<double> pixel_values;  // A_{m,i,u}, pixel level only

  double cell_value(CellId id) const;
  double cell_total() const;
};

/// uniform: A_{m,i} = a / |U_S|; correlated: A_{m,i} = a * D_i / sum_p D_p.
/// `cell_demands` is parallel to state.cells and only read when correlated.
PlanningSpecSet translate_sc_level(double a_busy_mbps, const NetworkState& state, SpecMethod method,
                                   std::span<const double> cell_demands);

/// uniform: A_{m,i,u} = a / |U|; correlated: A_{m,i,u} = a * d_u / sum_v d_v.
PlanningSpecSet translate_pixel_level(double a_busy_mbps, const GridSpec& grid, SpecMethod method,
                                      std::span<const double> pixel_demands,
                                      const ServingMap& serving);

/// A_{m,i} = sum of A_{m,i,u} over the pixels served by i, per serving slot.
std::vector<double> pixel_specs_to_cell(const PlanningSpecSet& specs, const ServingMap& serving);

}  // namespace capplan
