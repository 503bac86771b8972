#include "capplan/experiment.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>
#include <fmt/os.h>
#include <json.hpp>

#include "capplan/error.hpp"
#include "capplan/raster_io.hpp"

namespace capplan {

std::string method_name(Method m) {
  switch (m) {
    case Method::uniform_sc: return "uniform-sc";
    case Method::corr_sc: return "corr-sc";
    case Method::uniform_px: return "uniform-px";
    case Method::corr_px: return "corr-px";
    case Method::oracle: return "oracle";
  }
  return "?";
}

std::optional<Method> parse_method(const std::string& name) {
  for (Method m : kAllMethods) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

namespace {

SpecLevel level_of(Method m) {
  return (m == Method::uniform_sc || m == Method::corr_sc) ? SpecLevel::sc : SpecLevel::pixel;
}

SpecMethod spec_method_of(Method m) {
  return (m == Method::uniform_sc || m == Method::uniform_px) ? SpecMethod::uniform
                                                              : SpecMethod::correlated;
}

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

std::vector<PixelIndex> all_sites(const CandidateSiteSet& candidates, const Scenario& sc) {
  std::vector<PixelIndex> sites = candidates.site_pixels;
  for (const auto& c : sc.initial_cells) sites.push_back(c.site);
  return sites;
}

// Existing tenants are planned on their observed demand; their SLA (the
// contracted capacity, spread in proportion to their own demand) caps it.
TenantDemandModel existing_model(const TenantProfile& tenant, std::span<const double> demand,
                                 SpecLevel level) {
  TenantDemandModel m;
  m.tenant_id = tenant.id;
  m.level = level;
  m.a_busy_mbps = tenant.contracted_capacity_mbps;
  m.observed = std::vector<double>(demand.begin(), demand.end());
  if (sum(demand) > 0.0) {
    m.method = SpecMethod::correlated;
    m.spec_basis = *m.observed;
  } else {
    m.method = SpecMethod::uniform;
  }
  return m;
}

}  // namespace

Experiment::Experiment(Scenario scenario, Method method)
    : scenario_(std::move(scenario)),
      method_(method),
      grid_(scenario_.grid_spec()),
      candidates_(scenario_.candidate_sites()),
      traffic_(grid_.pixel_count(), scenario_.horizon),
      path_loss_(grid_, scenario_.radio, all_sites(candidates_, scenario_)),
      tenants_(scenario_.all_tenants()) {
  for (const auto& t : scenario_.tenants) {
    if (!t.spatial) throw InputError(fmt::format("tenant '{}' has no spatial map", t.id));
  }
  if (scenario_.arrival && !scenario_.arrival->tenant.spatial) {
    throw InputError("arriving tenant has no spatial map");
  }
  for (const auto& t : tenants_) {
    const std::vector<double> busy = rasterize(grid_, *t.spatial);
    std::vector<std::vector<double>> per_step(scenario_.horizon);
    const bool arriving = scenario_.arrival && &t == &tenants_.back();
    for (TimeIndex s = 0; s < scenario_.horizon; ++s) {
      const double w = (arriving && s < scenario_.arrival->step) ? 0.0 : t.weight_at(s);
      per_step[s].resize(busy.size());
      std::transform(busy.begin(), busy.end(), per_step[s].begin(),
                     [w](double v) { return v * w; });
    }
    traffic_.add_tenant(t.id, std::move(per_step));
  }

  double best = -1.0;
  for (TimeIndex s = 0; s < scenario_.horizon; ++s) {
    const double total = sum(existing_total(s));
    if (total >= best) {
      best = total;
      network_busy_hour_ = s;
    }
  }
  busy_basis_ = existing_total(network_busy_hour_);
}

std::vector<double> Experiment::existing_total(TimeIndex t) const {
  std::vector<double> out(grid_.pixel_count(), 0.0);
  for (std::size_t m = 0; m < scenario_.tenants.size(); ++m) {
    const auto d = traffic_.demand(m, t);
    for (std::size_t u = 0; u < out.size(); ++u) out[u] += d[u];
  }
  return out;
}

bool Experiment::arrived(TimeIndex t) const {
  return scenario_.arrival && t >= scenario_.arrival->step;
}

double Experiment::arrival_busy_spec() const {
  if (!scenario_.arrival) return 0.0;
  const auto& t = scenario_.arrival->tenant;
  return t.contracted_capacity_mbps * t.weight_at(network_busy_hour_);
}

std::vector<TenantDemandModel> Experiment::planning_models(TimeIndex t) const {
  const SpecLevel level = level_of(method_);
  std::vector<TenantDemandModel> out;
  for (std::size_t m = 0; m < scenario_.tenants.size(); ++m) {
    out.push_back(existing_model(scenario_.tenants[m], traffic_.demand(m, t), level));
  }
  if (!arrived(t)) return out;

  const auto& tenant = scenario_.arrival->tenant;
  const std::size_t slot = scenario_.tenants.size();
  TenantDemandModel m;
  m.tenant_id = tenant.id;
  m.level = level;
  m.method = spec_method_of(method_);
  m.a_busy_mbps = arrival_busy_spec();
  if (method_ == Method::oracle) {
    const auto d = traffic_.demand(slot, t);
    m.observed = std::vector<double>(d.begin(), d.end());
    if (sum(d) > 0.0) {
      m.spec_basis = *m.observed;
    } else {
      m.method = SpecMethod::uniform;
    }
  } else {
    m.spec_basis = busy_basis_;
    const double peak = tenant.weight_at(network_busy_hour_);
    m.estimate_scale = peak > 0.0 ? tenant.weight_at(t) / peak : 0.0;
  }
  out.push_back(std::move(m));
  return out;
}

std::vector<TenantDemandModel> Experiment::actual_models(TimeIndex t) const {
  std::vector<TenantDemandModel> out = planning_models(t);
  if (arrived(t) && method_ != Method::oracle) {
    const auto d = traffic_.demand(scenario_.tenants.size(), t);
    out.back().observed = std::vector<double>(d.begin(), d.end());
  }
  return out;
}

double Experiment::planning_total(TimeIndex t) const {
  double total = sum(existing_total(t));
  if (arrived(t)) {
    if (method_ == Method::oracle) {
      total += sum(traffic_.demand(scenario_.tenants.size(), t));
    } else {
      const auto& tenant = scenario_.arrival->tenant;
      const double peak = tenant.weight_at(network_busy_hour_);
      if (peak > 0.0) total += arrival_busy_spec() * tenant.weight_at(t) / peak;
    }
  }
  return total;
}

double Experiment::actual_total(TimeIndex t) const {
  double total = 0.0;
  for (std::size_t m = 0; m < traffic_.tenant_count(); ++m) total += sum(traffic_.demand(m, t));
  return total;
}

PlanningContext Experiment::context(std::span<const TenantDemandModel> models) const {
  return PlanningContext{grid_, candidates_, scenario_.radio, scenario_.planner, models,
                         &path_loss_};
}

std::vector<TableRow> bandwidth_table(const Experiment& exp, const NetworkState& state,
                                      TimeIndex t, LayoutEvaluation* eval_out) {
  const auto models = exp.actual_models(t);
  LayoutEvaluation eval = evaluate_layout(state, exp.context(models));
  std::vector<TableRow> rows;
  for (std::size_t s = 0; s < state.size(); ++s) {
    const SmallCell& c = state.cells[s];
    double demand = 0.0;
    for (std::size_t m = 0; m < models.size(); ++m) {
      demand += std::min(eval.tenant_demand[m][s], eval.tenant_specs[m][s]);
    }
    rows.push_back(TableRow{c.id, c.site, exp.grid().position(c.site), c.channels, c.power_dbm,
                            demand, eval.radio.avg_se[s], eval.required[s]});
  }
  if (eval_out != nullptr) *eval_out = std::move(eval);
  return rows;
}

TimeIndex evaluation_busy_hour(const Experiment& exp) {
  const auto& sc = exp.scenario();
  TimeIndex from = sc.horizon > sc.monitor.window ? sc.horizon - sc.monitor.window : 0;
  if (sc.arrival) from = std::max(from, std::min(sc.arrival->step, sc.horizon - 1));
  TimeIndex best_t = from;
  double best = -1.0;
  for (TimeIndex t = from; t < sc.horizon; ++t) {
    const double total = exp.actual_total(t);
    if (total >= best) {
      best = total;
      best_t = t;
    }
  }
  return best_t;
}

Report run_experiment(const Experiment& exp) {
  const Scenario& sc = exp.scenario();
  const double bw = sc.radio.channel_bandwidth_mhz;
  Report report;
  report.method = exp.method();
  report.horizon = sc.horizon;
  report.network_busy_hour = exp.network_busy_hour();
  report.initial = sc.initial_state();

  NetworkState state = report.initial;
  DemandHistory history(sc.monitor.window);
  const auto all = sc.all_tenants();
  int invocation = 0;
  for (TimeIndex t = 0; t < sc.horizon; ++t) {
    state.time = t;
    const auto models = exp.planning_models(t);
    const LayoutEvaluation eval = evaluate_layout(state, exp.context(models));
    for (std::size_t s = 0; s < state.size(); ++s) {
      history.record(t, state.cells[s].id, eval.required[s]);
    }
    const TriggerDecision decision = check_trigger(history, state, sc.monitor, bw);
    for (const auto& c : decision.checks) {
      report.monitor_log.push_back(MonitorRow{t, c.cell, c.busy_hour, c.required,
                                              c.threshold_mhz, c.violation, c.counter,
                                              decision.fire});
    }
    for (std::size_t m = 0; m < exp.traffic().tenant_count(); ++m) {
      const auto d = exp.traffic().demand(m, t);
      const auto& tenant = exp.traffic().tenant_id(m);
      const auto it = std::find_if(all.begin(), all.end(),
                                   [&](const TenantProfile& p) { return p.id == tenant; });
      if (auto n = sla_exceed_check(tenant, sum(d), it->contracted_capacity_mbps)) {
        report.notifications.push_back({t, *n});
      }
    }
    if (!decision.fire) continue;

    const TimeIndex from = t + 1 >= sc.monitor.window ? t + 1 - sc.monitor.window : 0;
    TimeIndex t_busy = from;
    double best = -1.0;
    for (TimeIndex s = from; s <= t; ++s) {
      const double total = exp.planning_total(s);
      if (total >= best) {
        best = total;
        t_busy = s;
      }
    }
    const auto busy_models = exp.planning_models(t_busy);
    PlanResult result = plan(state, exp.context(busy_models), ++invocation);
    report.plans.push_back(PlanEvent{invocation, t, t_busy, state.size(), result.state.size(),
                                     result.site_saturated});
    report.raw.insert(report.raw.end(), result.raw.begin(), result.raw.end());
    report.compressed.insert(report.compressed.end(), result.compressed.begin(),
                             result.compressed.end());
    state = std::move(result.state);
    history.clear();
  }
  report.final_state = state;

  report.table_busy_hour = evaluation_busy_hour(exp);
  LayoutEvaluation eval;
  report.table = bandwidth_table(exp, state, report.table_busy_hour, &eval);
  for (const auto& row : report.table) {
    report.table_total_demand_mbps += row.demand_mbps;
    if (row.required.is_unservable()) {
      ++report.table_unservable;
    } else {
      report.table_total_mhz += row.required.mhz();
    }
  }
  report.demand_raster = eval.pixel_demand;
  report.serving_raster.resize(exp.grid().pixel_count());
  for (PixelIndex u = 0; u < report.serving_raster.size(); ++u) {
    report.serving_raster[u] = eval.radio.serving.cell_of(u);
  }
  report.se_raster = eval.radio.pixel_se;
  return report;
}

namespace {

std::string required_text(const RequiredBandwidth& r) {
  return r.is_unservable() ? std::string("inf") : fmt::format("{}", r.mhz());
}

std::string channel_list(const std::vector<Channel>& channels) {
  return fmt::format("{}", fmt::join(channels, ";"));
}

void write_ledger(const std::filesystem::path& path, const ActionLedger& ledger) {
  auto out = fmt::output_file(path.string());
  out.print("invocation,step,action,cell,channel,site,from,to\n");
  for (const auto& a : ledger) {
    const std::string name = action_name(a.kind);
    std::visit(
        [&](const auto& act) {
          using T = std::decay_t<decltype(act)>;
          if constexpr (std::is_same_v<T, AddChannel> || std::is_same_v<T, RemoveChannel>) {
            out.print("{},{},{},{},{},,,\n", a.invocation, a.step, name, act.cell, act.channel);
          } else if constexpr (std::is_same_v<T, AddCell>) {
            out.print("{},{},{},{},{},{},,\n", a.invocation, a.step, name, act.cell, act.channel,
                      act.site);
          } else if constexpr (std::is_same_v<T, RemoveCell>) {
            out.print("{},{},{},{},,,,\n", a.invocation, a.step, name, act.cell);
          } else {
            out.print("{},{},{},,{},{},{},{}\n", a.invocation, a.step, name, act.channel, act.site,
                      act.from, act.to);
          }
        },
        a.kind);
  }
}

}  // namespace

void emit_report(const Report& report, const Experiment& exp, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError(fmt::format("{}: cannot create directory", dir.string()));

  {
    auto out = fmt::output_file((dir / "monitor_log.csv").string());
    out.print("t,cell,busy_hour,required_mhz,threshold_mhz,violation,counter,fired\n");
    for (const auto& r : report.monitor_log) {
      out.print("{},{},{},{},{},{},{},{}\n", r.t, r.cell, r.busy_hour, required_text(r.required),
                r.threshold_mhz, r.violation ? 1 : 0, r.counter, r.fired ? 1 : 0);
    }
  }
  {
    auto out = fmt::output_file((dir / "bandwidth_table.csv").string());
    out.print("cell,site,x_m,y_m,channels,power_dbm,demand_mbps,avg_se,required_mhz\n");
    std::size_t channels = 0;
    for (const auto& r : report.table) {
      channels += r.channels.size();
      out.print("{},{},{},{},{},{},{},{},{}\n", r.cell, r.site, r.position.x_m, r.position.y_m,
                channel_list(r.channels), r.power_dbm, r.demand_mbps, r.avg_se,
                required_text(r.required));
    }
    out.print("total,,,,{},,{},,{}\n", channels, report.table_total_demand_mbps,
              report.table_unservable > 0 ? std::string("inf")
                                          : fmt::format("{}", report.table_total_mhz));
  }
  write_ledger(dir / "ledger.csv", report.compressed);
  write_ledger(dir / "ledger_raw.csv", report.raw);
  {
    auto out = fmt::output_file((dir / "changelog.txt").string());
    out.print("# planning changelog ({})\n", method_name(report.method));
    for (const auto& a : report.compressed) out.print("{}\n", describe(a));
  }
  {
    auto out = fmt::output_file((dir / "layout.json").string());
    out.print("{}", layout_to_json(report.final_state));
  }
  {
    auto out = fmt::output_file((dir / "sla_notifications.csv").string());
    out.print("t,tenant,demand_mbps,contracted_mbps\n");
    for (const auto& n : report.notifications) {
      out.print("{},{},{},{}\n", n.t, n.notification.tenant_id, n.notification.demand_mbps,
                n.notification.contracted_mbps);
    }
  }
  {
    auto out = fmt::output_file((dir / "summary.txt").string());
    out.print("method {}\n", method_name(report.method));
    out.print("horizon {}\n", report.horizon);
    out.print("network_busy_hour {}\n", report.network_busy_hour);
    out.print("evaluation_busy_hour {}\n", report.table_busy_hour);
    out.print("initial_cells {}\n", report.initial.size());
    out.print("final_cells {}\n", report.final_state.size());
    out.print("final_channels {}\n", report.final_state.total_channels());
    out.print("total_required_mhz {}\n", report.table_total_mhz);
    out.print("unservable_cells {}\n", report.table_unservable);
    out.print("total_demand_mbps {}\n", report.table_total_demand_mbps);
    out.print("planner_invocations {}\n", report.plans.size());
    for (const auto& p : report.plans) {
      out.print("plan {} t {} t_busy {} cells {} -> {}{}\n", p.invocation, p.t, p.t_busy,
                p.cells_before, p.cells_after, p.site_saturated ? " site-saturated" : "");
    }
    out.print("actions_raw {}\n", report.raw.size());
    out.print("actions_compressed {}\n", report.compressed.size());
  }
  const GridSpec& grid = exp.grid();
  write_raster_csv(dir / "demand.csv", grid, report.demand_raster);
  write_raster_csv(dir / "serving.csv", grid, report.serving_raster);
  write_raster_csv(dir / "se.csv", grid, report.se_raster);
  write_pgm(dir / "demand.pgm", grid, report.demand_raster);
  write_pgm(dir / "serving.pgm", grid, report.serving_raster);
  write_pgm(dir / "se.pgm", grid, report.se_raster);
}

std::string layout_to_json(const NetworkState& state) {
  nlohmann::json j;
  j["time"] = state.time;
  j["cells"] = nlohmann::json::array();
  for (const auto& c : state.cells) {
    j["cells"].push_back({{"id", c.id},
                          {"site", c.site},
                          {"channels", c.channels},
                          {"power_dbm", c.power_dbm},
                          {"fixed_power", c.fixed_power}});
  }
  return j.dump(2) + "\n";
}

NetworkState layout_from_json(const std::string& text, const std::string& origin) {
  try {
    const auto j = nlohmann::json::parse(text);
    NetworkState state;
    state.time = j.at("time").get<TimeIndex>();
    for (const auto& c : j.at("cells")) {
      state.add_cell(SmallCell{c.at("id").get<CellId>(), c.at("site").get<PixelIndex>(),
                               c.at("channels").get<std::vector<Channel>>(),
                               c.at("power_dbm").get<double>(), c.at("fixed_power").get<bool>()});
    }
    return state;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(fmt::format("{}: {}", origin, e.what()));
  } catch (const PlanningError& e) {
    throw InputError(fmt::format("{}: {}", origin, e.what()));
  }
}

}  // namespace capplan
