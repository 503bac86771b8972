#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "capplan/grid.hpp"
#include "capplan/monitor.hpp"
#include "capplan/planner.hpp"
#include "capplan/radio.hpp"
#include "capplan/scenario.hpp"

namespace capplan {

struct GridConfig {
  double width_m = 200.0;
  double height_m = 200.0;
  double resolution_m = 3.0;
};

struct CandidateConfig {
  double fraction = 0.02;
  std::uint64_t seed = 1;
  // Explicit site list; replaces the random draw when present.
  std::optional<std::vector<PixelIndex>> pixels;
  // Random draws always include the initial cell sites.
  bool pin_initial_sites = true;
};

struct InitialCell {
  PixelIndex site = 0;
  std::vector<Channel> channels;
  std::optional<double> fixed_power_dbm;
};

/// Arrival of a tenant at `step`. `map_known` says whether the planner may
/// use the tenant's real spatial map; otherwise only its SLA is known.
struct TenantArrival {
  TimeIndex step = 0;
  TenantProfile tenant;
  bool map_known = false;
};

struct Scenario {
  GridConfig grid;
  std::size_t horizon = 24;
  std::vector<TenantProfile> tenants;
  CandidateConfig candidates;
  std::vector<InitialCell> initial_cells;
  PropagationParams radio;
  MonitorParams monitor;
  PlannerParams planner;
  std::optional<TenantArrival> arrival;

  GridSpec grid_spec() const;
  CandidateSiteSet candidate_sites() const;
  /// Cells get ids 1..n in file order; powers are auto-configured except for
  /// cells with a fixed power.
  NetworkState initial_state() const;
  /// Existing tenants followed by the arriving one.
  std::vector<TenantProfile> all_tenants() const;
};

/// Parses a scenario document. Throws InputError naming the line and column
/// of syntax errors, or the JSON path of missing and mistyped fields.
Scenario parse_scenario(const std::string& text, const std::string& origin = "<scenario>");
Scenario load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const Scenario& scenario);

struct Diagnostic {
  std::string invariant;
  std::string detail;
};

/// Checks every type invariant of the scenario; empty when well-formed.
std::vector<Diagnostic> validate(const Scenario& scenario);

}  // namespace capplan
