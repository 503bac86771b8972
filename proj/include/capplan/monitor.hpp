#pragma once

#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "capplan/scenario.hpp"

namespace capplan {

struct MonitorParams {
  double alpha = 0.9;
  std::size_t window = 24;      // T
  std::size_t consecutive = 3;  // L

  friend bool operator==(const MonitorParams&, const MonitorParams&) = default;
};

/// Required bandwidth in MHz, or the "unservable" sentinel produced when a
/// cell must carry demand at zero spectral efficiency. The sentinel exceeds
/// every threshold and is never below one.
class RequiredBandwidth {
 public:
  static RequiredBandwidth finite(double mhz) { return RequiredBandwidth(mhz, false); }
  static RequiredBandwidth unservable() { return RequiredBandwidth(0.0, true); }

  bool is_unservable() const { return unservable_; }
  double mhz() const;  // throws for the sentinel
  bool exceeds(double threshold_mhz) const { return unservable_ || mhz_ > threshold_mhz; }
  bool below(double threshold_mhz) const { return !unservable_ && mhz_ < threshold_mhz; }
  /// +inf for the sentinel; convenient for ordering and output.
  double value_or_inf() const;

  friend bool operator==(const RequiredBandwidth&, const RequiredBandwidth&) = default;

 private:
  RequiredBandwidth(double mhz, bool unservable) : mhz_(mhz), unservable_(unservable) {}
  double mhz_;
  bool unservable_;
};

/// B~_i = sum_m min(D_{i,m}, A_{m,i}) / SE_i.
RequiredBandwidth required_bandwidth(std::span<const double> tenant_demands,
                                     std::span<const double> specs, double avg_se);

/// Sliding window of per-cell required bandwidth plus violation counters.
class DemandHistory {
 public:
  explicit DemandHistory(std::size_t window);

  struct Entry {
    TimeIndex t;
    RequiredBandwidth value;
  };

  std::size_t window() const { return window_; }
  /// Appends the value for step t and drops entries older than t - T + 1.
  void record(TimeIndex t, CellId cell, RequiredBandwidth value);
  const std::deque<Entry>& entries(CellId cell) const;
  bool empty(CellId cell) const;

  std::size_t counter(CellId cell) const;
  void set_counter(CellId cell, std::size_t value);
  void reset_counters();
  void clear();

 private:
  std::size_t window_;
  std::map<CellId, std::deque<Entry>> entries_;
  std::map<CellId, std::size_t> counters_;
};

/// Time step in the cell's window with the largest required bandwidth; ties
/// go to the most recent step.
TimeIndex busy_hour(const DemandHistory& history, CellId cell);

struct CellCheck {
  CellId cell;
  TimeIndex busy_hour;
  RequiredBandwidth required;
  double threshold_mhz;
  bool violation;
  std::size_t counter;  // after this step's update
};

struct TriggerDecision {
  bool fire = false;
  std::vector<CellId> violating_cells;
  std::vector<CellCheck> checks;
};

/// Evaluates B~_i(t_B) > alpha |F_i| B for every deployed cell, advancing the
/// per-cell counters. Fires when any counter reaches L; firing resets all
/// counters. Cells without history count as non-violating.
TriggerDecision check_trigger(DemandHistory& history, const NetworkState& state,
                              const MonitorParams& params, double channel_bandwidth_mhz);

struct SlaNotification {
  std::string tenant_id;
  double demand_mbps;
  double contracted_mbps;
};

/// Notification when the tenant's total demand strictly exceeds its SLA.
std::optional<SlaNotification> sla_exceed_check(const std::string& tenant_id,
                                                double total_tenant_demand_mbps,
                                                double contracted_mbps);

}  // namespace capplan
