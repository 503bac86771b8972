#include "capplan/monitor.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "capplan/error.hpp"

namespace capplan {

double RequiredBandwidth::mhz() const {
  if (unservable_) throw PlanningError("unservable cell has no finite requirement");
  return mhz_;
}

double RequiredBandwidth::value_or_inf() const {
  return unservable_ ? std::numeric_limits<double>::infinity() : mhz_;
}

RequiredBandwidth required_bandwidth(std::span<const double> tenant_demands,
                                     std::span<const double> specs, double avg_se) {
  if (tenant_demands.size() != specs.size()) {
    throw std::invalid_argument("demands and specs cover different tenants");
  }
  double capped = 0.0;
  for (std::size_t m = 0; m < specs.size(); ++m) capped += std::min(tenant_demands[m], specs[m]);
  if (capped <= 0.0) return RequiredBandwidth::finite(0.0);
  if (!(avg_se > 0.0)) return RequiredBandwidth::unservable();
  return RequiredBandwidth::finite(capped / avg_se);
}

DemandHistory::DemandHistory(std::size_t window) : window_(window) {
  if (window == 0) throw std::invalid_argument("monitor window must be >= 1");
}

void DemandHistory::record(TimeIndex t, CellId cell, RequiredBandwidth value) {
  auto& q = entries_[cell];
  q.push_back({t, value});
  while (!q.empty() && q.front().t + window_ <= t) q.pop_front();
}

const std::deque<DemandHistory::Entry>& DemandHistory::entries(CellId cell) const {
  static const std::deque<Entry> none;
  auto it = entries_.find(cell);
  return it == entries_.end() ? none : it->second;
}

bool DemandHistory::empty(CellId cell) const { return entries(cell).empty(); }

std::size_t DemandHistory::counter(CellId cell) const {
  auto it = counters_.find(cell);
  return it == counters_.end() ? 0 : it->second;
}

void DemandHistory::set_counter(CellId cell, std::size_t value) { counters_[cell] = value; }

void DemandHistory::reset_counters() { counters_.clear(); }

void DemandHistory::clear() {
  entries_.clear();
  counters_.clear();
}

TimeIndex busy_hour(const DemandHistory& history, CellId cell) {
  const auto& q = history.entries(cell);
  if (q.empty()) throw PlanningError("empty history");
  const DemandHistory::Entry* best = &q.front();
  for (const auto& e : q) {
    if (e.value.value_or_inf() >= best->value.value_or_inf()) best = &e;
  }
  return best->t;
}

TriggerDecision check_trigger(DemandHistory& history, const NetworkState& state,
                              const MonitorParams& params, double channel_bandwidth_mhz) {
  TriggerDecision out;
  for (const auto& cell : state.cells) {
    const double threshold =
        params.alpha * static_cast<double>(cell.channels.size()) * channel_bandwidth_mhz;
    CellCheck check{cell.id, 0, RequiredBandwidth::finite(0.0), threshold, false, 0};
    if (!history.empty(cell.id)) {
      check.busy_hour = busy_hour(history, cell.id);
      for (const auto& e : history.entries(cell.id)) {
        if (e.t == check.busy_hour) check.required = e.value;
      }
      check.violation = check.required.exceeds(threshold);
    }
    check.counter = check.violation ? history.counter(cell.id) + 1 : 0;
    history.set_counter(cell.id, check.counter);
    if (check.violation) out.violating_cells.push_back(cell.id);
    if (check.counter >= params.consecutive) out.fire = true;
    out.checks.push_back(check);
  }
  if (out.fire) history.reset_counters();
  return out;
}

std::optional<SlaNotification> sla_exceed_check(const std::string& tenant_id,
                                                double total_tenant_demand_mbps,
                                                double contracted_mbps) {
  if (total_tenant_demand_mbps > contracted_mbps) {
    return SlaNotification{tenant_id, total_tenant_demand_mbps, contracted_mbps};
  }
  return std::nullopt;
}

}  // namespace capplan
