#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "capplan/ledger.hpp"
#include "capplan/monitor.hpp"
#include "capplan/radio.hpp"
#include "capplan/scenario.hpp"
#include "capplan/sla.hpp"

namespace capplan {

/// Densification bar of the cell-addition loop.
///   printed: B * |U_S| / (N_max / K_max)
///   kmax:    B * K_max
enum class Step4Threshold { printed, kmax };

struct PlannerParams {
  double alpha = 0.9;
  double beta = 0.7;
  double gamma = 0.05;
  std::size_t k_max = 2;
  std::size_t n_max_cells = 10;
  Step4Threshold step4 = Step4Threshold::printed;
  // Re-runs the channel-addition loop once after the trimming loops, so that
  // cells deployed or loaded during this invocation leave dimensioned.
  bool closing_channel_pass = false;

  friend bool operator==(const PlannerParams&, const PlannerParams&) = default;
};

/// How one tenant's demand and planning specifications are derived for an
/// arbitrary candidate layout.
struct TenantDemandModel {
  std::string tenant_id;
  SpecLevel level = SpecLevel::pixel;
  SpecMethod method = SpecMethod::correlated;
  double a_busy_mbps = 0.0;
  // Pixel demand the correlated methods distribute the spec by (d_u); the
  // SC-level variant aggregates it over the candidate serving map.
  std::vector<double> spec_basis;
  // Known pixel demand. When absent the tenant's demand is estimated from
  // its specs: pixel specs directly, or each cell's spec spread evenly over
  // the pixels that cell serves.
  std::optional<std::vector<double>> observed;
  // Multiplies estimated demand; lets busy-hour specs drive off-peak steps.
  double estimate_scale = 1.0;
};

struct PlanningContext {
  const GridSpec& grid;
  const CandidateSiteSet& candidates;
  const PropagationParams& radio;
  const PlannerParams& params;
  std::span<const TenantDemandModel> tenants;
  const PathLossTable* path_loss = nullptr;
};

/// Network performance model output for one layout: the candidate solution's
/// per-cell required bandwidth B^_i together with its ingredients.
struct LayoutEvaluation {
  RadioSnapshot radio;
  std::vector<CellId> cell_ids;
  std::vector<std::vector<double>> tenant_demand;  // [tenant][slot] D_{i,m}
  std::vector<std::vector<double>> tenant_specs;   // [tenant][slot] A_{m,i}
  std::vector<double> pixel_demand;                // total d_u used as SE weights
  std::vector<RequiredBandwidth> required;         // [slot]

  const RequiredBandwidth& required_of(CellId id) const;
};

LayoutEvaluation evaluate_layout(const NetworkState& state, const PlanningContext& ctx);

/// Lexicographic (unservable cells, finite sum) total of B^ over all cells.
struct RequiredTotal {
  std::size_t unservable = 0;
  double mhz = 0.0;
  friend auto operator<=>(const RequiredTotal&, const RequiredTotal&) = default;
};
RequiredTotal total_required(const LayoutEvaluation& eval);

double step4_threshold_mhz(std::size_t deployed_cells, const PlannerParams& params,
                           double channel_bandwidth_mhz);

/// Channel not held by `cell` whose nearest other holder is farthest away;
/// channels unused elsewhere win outright, ties go to the lowest index.
Channel select_channel(const NetworkState& state, CellId cell, const GridSpec& grid,
                       int num_channels);
/// Same rule for a cell about to be deployed at `site`.
Channel select_channel_for_site(const NetworkState& state, PixelIndex site, const GridSpec& grid,
                                int num_channels);

struct CandidateSolution {
  NetworkState layout;
  LayoutEvaluation evaluation;
};

struct SiteChoice {
  PixelIndex site;
  Channel channel;
  CandidateSolution solution;
};

/// Exhaustive search over unoccupied candidate sites for the new cell that
/// minimises total required bandwidth. Ties go to the lowest pixel index.
SiteChoice select_site(const NetworkState& state, const PlanningContext& ctx);

struct PlanResult {
  NetworkState state;
  ActionLedger raw;
  ActionLedger compressed;
  bool site_saturated = false;
  LayoutEvaluation evaluation;  // of the final state
};

/// Capacity dimensioning and planning: channel addition, cell addition,
/// channel removal, cell removal, each loop run once in that order with the
/// layout re-evaluated after every action.
PlanResult plan(const NetworkState& initial, const PlanningContext& ctx, int invocation = 1);

}  // namespace capplan
