#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "capplan/ledger.hpp"
#include "capplan/monitor.hpp"
#include "capplan/planner.hpp"
#include "capplan/scenario_io.hpp"

namespace capplan {

enum class Method { uniform_sc, corr_sc, uniform_px, corr_px, oracle };

std::string method_name(Method m);
std::optional<Method> parse_method(const std::string& name);
inline constexpr Method kAllMethods[] = {Method::uniform_sc, Method::corr_sc, Method::uniform_px,
                                         Method::corr_px, Method::oracle};

/// Shared inputs of one experiment: the scenario plus everything derived
/// from it once (grid, candidates, ground-truth traffic, path-loss cache).
class Experiment {
 public:
  Experiment(Scenario scenario, Method method);

  const Scenario& scenario() const { return scenario_; }
  Method method() const { return method_; }
  const GridSpec& grid() const { return grid_; }
  const CandidateSiteSet& candidates() const { return candidates_; }
  const TrafficMap& traffic() const { return traffic_; }
  const PathLossTable& path_loss() const { return path_loss_; }

  /// Whether the arriving tenant is in service at step t.
  bool arrived(TimeIndex t) const;
  /// Busy hour of the existing tenants' total demand over the horizon.
  TimeIndex network_busy_hour() const { return network_busy_hour_; }
  /// A_m^(t_B) of the arriving tenant.
  double arrival_busy_spec() const;

  /// Demand models the monitor and planner use at step t.
  std::vector<TenantDemandModel> planning_models(TimeIndex t) const;
  /// Actual demand of every tenant with the method's specs as caps.
  std::vector<TenantDemandModel> actual_models(TimeIndex t) const;
  /// Sum over pixels of the planning demand at step t.
  double planning_total(TimeIndex t) const;
  /// Sum over pixels of the actual demand at step t.
  double actual_total(TimeIndex t) const;

  PlanningContext context(std::span<const TenantDemandModel> models) const;

 private:
  std::vector<double> existing_total(TimeIndex t) const;

  Scenario scenario_;
  Method method_;
  GridSpec grid_;
  CandidateSiteSet candidates_;
  TrafficMap traffic_;
  PathLossTable path_loss_;
  std::vector<TenantProfile> tenants_;  // existing, then arriving
  TimeIndex network_busy_hour_ = 0;
  std::vector<double> busy_basis_;  // existing total demand at the busy hour
};

struct MonitorRow {
  TimeIndex t;
  CellId cell;
  TimeIndex busy_hour;
  RequiredBandwidth required;
  double threshold_mhz;
  bool violation;
  std::size_t counter;
  bool fired;
};

struct PlanEvent {
  int invocation;
  TimeIndex t;
  TimeIndex t_busy;
  std::size_t cells_before;
  std::size_t cells_after;
  bool site_saturated;
};

struct TimedNotification {
  TimeIndex t;
  SlaNotification notification;
};

struct TableRow {
  CellId cell;
  PixelIndex site;
  Point position;
  std::vector<Channel> channels;
  double power_dbm;
  double demand_mbps;  // sum over tenants of min(D_{i,m}, A_{m,i})
  double avg_se;
  RequiredBandwidth required;
};

struct Report {
  Method method;
  std::size_t horizon = 0;
  TimeIndex network_busy_hour = 0;
  TimeIndex table_busy_hour = 0;
  std::vector<MonitorRow> monitor_log;
  std::vector<PlanEvent> plans;
  std::vector<TimedNotification> notifications;
  ActionLedger raw;
  ActionLedger compressed;
  NetworkState initial;
  NetworkState final_state;
  std::vector<TableRow> table;
  std::size_t table_unservable = 0;
  double table_total_mhz = 0.0;
  double table_total_demand_mbps = 0.0;
  // Rasters at the table busy hour.
  std::vector<double> demand_raster;
  std::vector<double> serving_raster;
  std::vector<double> se_raster;
};

/// Steps the scenario over its horizon: monitors every step, plans whenever
/// the trigger fires, then evaluates the final layout under actual demand.
Report run_experiment(const Experiment& exp);

/// Per-cell rows under actual demand at step t for the given layout.
std::vector<TableRow> bandwidth_table(const Experiment& exp, const NetworkState& state,
                                      TimeIndex t, LayoutEvaluation* eval_out = nullptr);

/// Busy hour of actual demand over [max(arrival, horizon - T), horizon).
TimeIndex evaluation_busy_hour(const Experiment& exp);

/// Writes monitor_log.csv, bandwidth_table.csv, ledger.csv, ledger_raw.csv,
/// changelog.txt, layout.json, sla_notifications.csv, summary.txt and the
/// rasters. Existing files are overwritten.
void emit_report(const Report& report, const Experiment& exp, const std::filesystem::path& dir);

std::string layout_to_json(const NetworkState& state);
NetworkState layout_from_json(const std::string& text, const std::string& origin);

}  // namespace capplan
