// capplan: command-line front end for the capacity planning simulator.
//
//   capplan validate  --scenario S
//   capplan translate --scenario S --method M [--out DIR]
//   capplan plan      --scenario S --method M --out DIR
//   capplan run       --scenario S --method M --out DIR [--horizon N] [--seed N]
//   capplan report    --scenario S --method M --layout L --out DIR
//
// Exit status: 0 ok, 1 invariant violation, 2 I/O or parse error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/os.h>

#include "capplan/error.hpp"
#include "capplan/experiment.hpp"
#include "capplan/raster_io.hpp"
#include "capplan/scenario_io.hpp"

namespace {

using namespace capplan;

struct Options {
  std::string scenario;
  std::string method = "corr-px";
  std::string out = "out";
  std::string layout;
  std::optional<std::size_t> horizon;
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha, beta, gamma;
  std::optional<std::size_t> kmax, nmax, L, T;
  std::optional<std::string> step4;
};

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kInputError = 2;

Scenario load_with_overrides(const Options& o) {
  Scenario sc = load_scenario(o.scenario);
  if (o.horizon) sc.horizon = *o.horizon;
  if (o.seed) sc.candidates.seed = *o.seed;
  if (o.alpha) sc.monitor.alpha = sc.planner.alpha = *o.alpha;
  if (o.beta) sc.planner.beta = *o.beta;
  if (o.gamma) sc.planner.gamma = *o.gamma;
  if (o.kmax) sc.planner.k_max = *o.kmax;
  if (o.nmax) sc.planner.n_max_cells = *o.nmax;
  if (o.L) sc.monitor.consecutive = *o.L;
  if (o.T) sc.monitor.window = *o.T;
  if (o.step4) sc.planner.step4 = *o.step4 == "kmax" ? Step4Threshold::kmax : Step4Threshold::printed;
  return sc;
}

// Prints diagnostics; true when the scenario is usable.
bool report_diagnostics(const Scenario& sc) {
  const auto diags = validate(sc);
  for (const auto& d : diags) fmt::print(stderr, "violation {}: {}\n", d.invariant, d.detail);
  return diags.empty();
}

Method method_of(const Options& o) {
  auto m = parse_method(o.method);
  if (!m) throw InputError(fmt::format("unknown method '{}'", o.method));
  return *m;
}

int cmd_validate(const Options& o) {
  const Scenario sc = load_with_overrides(o);
  const auto diags = validate(sc);
  for (const auto& d : diags) fmt::print("{}: {}\n", d.invariant, d.detail);
  fmt::print("{} violations\n", diags.size());
  return diags.empty() ? kOk : kViolation;
}

TimeIndex arrival_time(const Experiment& exp) {
  const auto& sc = exp.scenario();
  return sc.arrival ? sc.arrival->step : exp.network_busy_hour();
}

int cmd_translate(const Options& o) {
  const Scenario sc = load_with_overrides(o);
  if (!report_diagnostics(sc)) return kViolation;
  if (!sc.arrival) throw InputError("scenario has no arriving tenant to translate");
  const Experiment exp(sc, method_of(o));
  const auto models = exp.planning_models(arrival_time(exp));
  const NetworkState state = sc.initial_state();
  const LayoutEvaluation eval = evaluate_layout(state, exp.context(models));
  const auto& specs = eval.tenant_specs.back();

  std::filesystem::create_directories(o.out);
  auto out = fmt::output_file((std::filesystem::path(o.out) / "specs.csv").string());
  out.print("cell,spec_mbps\n");
  fmt::print("tenant {} method {} busy-hour spec {} Mbps\n", sc.arrival->tenant.id,
             method_name(exp.method()), exp.arrival_busy_spec());
  double total = 0.0;
  for (std::size_t s = 0; s < state.size(); ++s) {
    out.print("{},{}\n", state.cells[s].id, specs[s]);
    fmt::print("  cell {}: {:.2f} Mbps\n", state.cells[s].id, specs[s]);
    total += specs[s];
  }
  out.print("total,{}\n", total);
  fmt::print("  total: {:.2f} Mbps\n", total);
  return kOk;
}

int cmd_plan(const Options& o) {
  const Scenario sc = load_with_overrides(o);
  if (!report_diagnostics(sc)) return kViolation;
  const Experiment exp(sc, method_of(o));
  const TimeIndex t = arrival_time(exp);
  const auto models = exp.planning_models(t);
  NetworkState initial = sc.initial_state();
  initial.time = t;
  const PlanResult result = plan(initial, exp.context(models));

  Report report;
  report.method = exp.method();
  report.horizon = sc.horizon;
  report.initial = initial;
  report.final_state = result.state;
  report.raw = result.raw;
  report.compressed = result.compressed;
  const std::filesystem::path dir(o.out);
  std::filesystem::create_directories(dir);
  {
    auto out = fmt::output_file((dir / "layout.json").string());
    out.print("{}", layout_to_json(result.state));
  }
  {
    auto out = fmt::output_file((dir / "changelog.txt").string());
    out.print("# planning changelog ({})\n", method_name(exp.method()));
    for (const auto& a : result.compressed) out.print("{}\n", describe(a));
  }
  fmt::print("cells {} -> {}, channels {} -> {}{}\n", initial.size(), result.state.size(),
             initial.total_channels(), result.state.total_channels(),
             result.site_saturated ? " (site-saturated)" : "");
  for (const auto& a : result.compressed) fmt::print("{}\n", describe(a));
  return kOk;
}

void print_table(const std::vector<TableRow>& rows) {
  fmt::print("{:>5} {:>6} {:>9} {:>11} {:>8} {:>13}\n", "cell", "site", "channels", "demand",
             "avg_se", "required_mhz");
  double total = 0.0;
  for (const auto& r : rows) {
    const std::string req =
        r.required.is_unservable() ? "inf" : fmt::format("{:.2f}", r.required.mhz());
    if (!r.required.is_unservable()) total += r.required.mhz();
    fmt::print("{:>5} {:>6} {:>9} {:>11.2f} {:>8.3f} {:>13}\n", r.cell, r.site, r.channels.size(),
               r.demand_mbps, r.avg_se, req);
  }
  fmt::print("{:>5} {:>6} {:>9} {:>11} {:>8} {:>13.2f}\n", "tot", "", "", "", "", total);
}

int cmd_run(const Options& o) {
  const Scenario sc = load_with_overrides(o);
  if (!report_diagnostics(sc)) return kViolation;
  const Experiment exp(sc, method_of(o));
  const Report report = run_experiment(exp);
  emit_report(report, exp, o.out);
  fmt::print("method {}: {} -> {} cells, {} planner invocations, evaluated at t={}\n",
             method_name(report.method), report.initial.size(), report.final_state.size(),
             report.plans.size(), report.table_busy_hour);
  print_table(report.table);
  return kOk;
}

int cmd_report(const Options& o) {
  const Scenario sc = load_with_overrides(o);
  if (!report_diagnostics(sc)) return kViolation;
  const Experiment exp(sc, method_of(o));
  std::ifstream in(o.layout);
  if (!in) throw InputError(fmt::format("{}: cannot open", o.layout));
  std::stringstream buf;
  buf << in.rdbuf();
  const NetworkState state = layout_from_json(buf.str(), o.layout);
  if (state.empty()) throw PlanningError("empty network");
  const TimeIndex t = evaluation_busy_hour(exp);
  LayoutEvaluation eval;
  const auto rows = bandwidth_table(exp, state, t, &eval);

  const std::filesystem::path dir(o.out);
  std::filesystem::create_directories(dir);
  auto out = fmt::output_file((dir / "bandwidth_table.csv").string());
  out.print("cell,site,x_m,y_m,channels,power_dbm,demand_mbps,avg_se,required_mhz\n");
  for (const auto& r : rows) {
    out.print("{},{},{},{},{},{},{},{},{}\n", r.cell, r.site, r.position.x_m, r.position.y_m,
              fmt::join(r.channels, ";"), r.power_dbm, r.demand_mbps, r.avg_se,
              r.required.is_unservable() ? std::string("inf") : fmt::format("{}", r.required.mhz()));
  }
  write_raster_csv(dir / "demand.csv", exp.grid(), eval.pixel_demand);
  fmt::print("evaluated at t={}\n", t);
  print_table(rows);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity self-planning simulator for multi-tenant small-cell networks"};
  app.require_subcommand(1);
  Options o;

  auto common = [&o](CLI::App* sub, bool needs_method) {
    sub->add_option("--scenario", o.scenario, "Scenario JSON file")->required();
    auto* m = sub->add_option("--method", o.method, "uniform-sc|corr-sc|uniform-px|corr-px|oracle");
    if (!needs_method) m->group("");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--horizon", o.horizon, "Number of time steps");
    sub->add_option("--seed", o.seed, "Candidate site seed");
    sub->add_option("--alpha", o.alpha);
    sub->add_option("--beta", o.beta);
    sub->add_option("--gamma", o.gamma);
    sub->add_option("--kmax", o.kmax);
    sub->add_option("--nmax", o.nmax);
    sub->add_option("--L", o.L, "Consecutive violations before planning");
    sub->add_option("--T", o.T, "Busy-hour window in steps");
    sub->add_option("--step4-threshold", o.step4)->check(CLI::IsMember({"printed", "kmax"}));
  };
  auto* validate_cmd = app.add_subcommand("validate", "Check scenario invariants");
  common(validate_cmd, false);
  auto* translate_cmd = app.add_subcommand("translate", "Emit planning specs of the arriving tenant");
  common(translate_cmd, true);
  auto* plan_cmd = app.add_subcommand("plan", "Run one planner invocation");
  common(plan_cmd, true);
  auto* run_cmd = app.add_subcommand("run", "Run the full experiment and write reports");
  common(run_cmd, true);
  auto* report_cmd = app.add_subcommand("report", "Evaluate a layout under actual demand");
  common(report_cmd, true);
  report_cmd->add_option("--layout", o.layout, "layout.json to evaluate")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*validate_cmd) return cmd_validate(o);
    if (*translate_cmd) return cmd_translate(o);
    if (*plan_cmd) return cmd_plan(o);
    if (*run_cmd) return cmd_run(o);
    if (*report_cmd) return cmd_report(o);
  } catch (const InputError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kInputError;
  } catch (const std::system_error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kInputError;
  } catch (const std::exception& e) {
    fmt::print(stderr, "invariant violation: {}\n", e.what());
    return kViolation;
  }
  return kOk;
}
