// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "capplan/experiment.hpp"
#include "capplan/ledger.hpp"
#include "capplan/monitor.hpp"
#include "capplan/planner.hpp"
#include "capplan/radio.hpp"
#include "capplan/scenario_io.hpp"
#include "capplan/sla.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace capplan;
namespace fs = std::filesystem;

namespace {

const std::string kScenario = std::string(CAPPLAN_SOURCE_DIR) + "/scenarios/new_tenant.json";

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// 1. Specs of every level and method add up to the busy-hour spec.
Outcome conservation() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const double w = 20.0 + 40.0 * unit(rng);
    const double h = 20.0 + 40.0 * unit(rng);
    const GridSpec grid(w, h, 1.0 + 3.0 * unit(rng));
    PropagationParams radio;
    NetworkState state;
    const std::size_t cells = 1 + rng() % 6;
    for (std::size_t i = 0; i < cells; ++i) {
      const PixelIndex site = rng() % grid.pixel_count();
      if (state.site_occupied(site)) continue;
      state.add_cell(SmallCell{static_cast<CellId>(i + 1), site, {static_cast<Channel>(rng() % 4)},
                               24.0, false});
    }
    apply_configured_powers(state, grid, radio);
    const ServingMap serving = serving_assignment(state, grid, radio);
    std::vector<double> demand(grid.pixel_count());
    for (double& d : demand) d = unit(rng) < 0.3 ? 0.0 : unit(rng);
    demand[0] += 0.1;
    const double a = 1000.0 * unit(rng);
    const SpecMethod method = (trial % 2) ? SpecMethod::correlated : SpecMethod::uniform;
    double total = 0.0;
    if ((trial / 2) % 2 == 0) {
      const auto cell_demand = serving.sum_by_cell(demand);
      if (method == SpecMethod::correlated &&
          std::all_of(cell_demand.begin(), cell_demand.end(), [](double d) { return d == 0.0; })) {
        continue;
      }
      total = translate_sc_level(a, state, method, cell_demand).cell_total();
    } else {
      total = translate_pixel_level(a, grid, method, demand, serving).cell_total();
    }
    worst = std::max(worst, std::abs(total - a) / std::max(a, 1e-300));
  }
  const double secs = seconds_since(start);
  return {worst <= 1e-9 && secs < 5.0,
          fmt::format("200 combinations, worst relative error {:.3g}, {:.2f} s", worst, secs)};
}

// 2. Per-cell SC-level specs for the reference demands.
Outcome reference_specs() {
  const GridSpec grid(200.0, 200.0, 3.0);
  NetworkState state;
  for (int i = 0; i < 4; ++i) {
    state.add_cell(SmallCell{i + 1, static_cast<PixelIndex>(100 * i), {0}, 24.0, false});
  }
  const std::vector<double> demands{22.5, 27.9, 19.3, 16.6};
  const std::vector<double> expected{26.07, 32.33, 22.36, 19.24};
  const auto corr = translate_sc_level(100.0, state, SpecMethod::correlated, demands);
  const auto unif = translate_sc_level(100.0, state, SpecMethod::uniform, demands);
  bool ok = true;
  std::string got;
  for (std::size_t i = 0; i < 4; ++i) {
    ok = ok && std::abs(corr.cell_values[i] - expected[i]) <= 0.01 && unif.cell_values[i] == 25.0;
    got += fmt::format("{:.2f} ", corr.cell_values[i]);
  }
  return {ok, fmt::format("correlated [{}], uniform 25.00 x4", got.substr(0, got.size() - 1))};
}

// 3. Spectral efficiency mapping.
Outcome se_mapping() {
  const PropagationParams p;
  const double low = spectral_efficiency(-20.0, p);
  const double mid = spectral_efficiency(9.0, p);
  const double high = spectral_efficiency(30.0, p);
  return {low == 0.0 && std::abs(mid - 1.897) <= 0.001 && high == 4.4,
          fmt::format("SE(-20)={} SE(9)={:.4f} SE(30)={}", low, mid, high)};
}

// 4. Edge SINR after power configuration, measured independently.
Outcome power_config() {
  const auto start = std::chrono::steady_clock::now();
  const PropagationParams p;
  const GridSpec grid(200.0, 20.0, 1.0);
  const double noise_mw = std::pow(10.0, oracle::noise_dbm() / 10.0);
  std::string detail;
  bool ok = true;
  auto check = [&](double isd, std::vector<Channel> ch_a, std::vector<Channel> ch_b) {
    NetworkState state;
    const PixelIndex a = 10 * 200 + 20;
    const PixelIndex b = a + static_cast<PixelIndex>(isd);
    state.add_cell(SmallCell{1, a, ch_a, 24.0, false});
    state.add_cell(SmallCell{2, b, ch_b, 24.0, false});
    apply_configured_powers(state, grid, p);
    const bool shared = state.cells[0].has_channel(ch_b.front());
    for (std::size_t s = 0; s < 2; ++s) {
      const Point self = grid.position(state.cells[s].site);
      const Point other = grid.position(state.cells[1 - s].site);
      const double f = std::sqrt(3.0) / 2.0;
      const double x = self.x_m + f * (other.x_m - self.x_m);
      const double y = self.y_m + f * (other.y_m - self.y_m);
      const oracle::Site me{self.x_m, self.y_m, state.cells[s].power_dbm, {}};
      const oracle::Site them{other.x_m, other.y_m, state.cells[1 - s].power_dbm, {}};
      const double interference = shared ? std::pow(10.0, oracle::rx_dbm(them, x, y) / 10.0) : 0.0;
      const double sinr = oracle::rx_dbm(me, x, y) - 10.0 * std::log10(interference + noise_mw);
      const double power = state.cells[s].power_dbm;
      bool cell_ok;
      std::string state_text;
      if (power > p.power_min_dbm && power < p.power_max_dbm) {
        cell_ok = std::abs(sinr - 9.0) <= 0.1;
        state_text = "free";
      } else {
        // Clamped: the bound must be the binding one.
        cell_ok = (power == p.power_max_dbm && sinr <= 9.0 + 0.1) ||
                  (power == p.power_min_dbm && sinr >= 9.0 - 0.1);
        state_text = "clamped";
      }
      ok = ok && cell_ok;
      detail += fmt::format("ISD {} {} cell {}: P={:.2f} dBm ({}) SINR={:.2f} dB; ", isd,
                            shared ? "shared" : "distinct", s + 1, power, state_text, sinr);
    }
  };
  check(100.0, {0}, {0});
  check(60.0, {0}, {1});
  const double secs = seconds_since(start);
  ok = ok && secs < 1.0;
  return {ok, detail + fmt::format("{:.3f} s", secs)};
}

// 5. Trigger needs L consecutive strict violations.
Outcome trigger_semantics() {
  const MonitorParams params{0.9, 24, 3};
  NetworkState state;
  state.add_cell(SmallCell{1, 0, {0}, 24.0, false});
  const double bar = 0.9 * 20.0;
  auto drive = [&](const std::vector<double>& series) {
    DemandHistory history(1);
    MonitorParams one = params;
    one.window = 1;
    std::vector<bool> fired;
    for (std::size_t t = 0; t < series.size(); ++t) {
      history.record(t, 1, RequiredBandwidth::finite(series[t]));
      fired.push_back(check_trigger(history, state, one, 20.0).fire);
    }
    return fired;
  };
  const auto below_l = drive({20, 20, 10, 20, 20, 10, 20, 20});
  const auto at_l = drive({20, 20, 20});
  const auto boundary = drive({bar, bar, bar, bar});
  const bool never = std::none_of(below_l.begin(), below_l.end(), [](bool f) { return f; });
  const bool on_lth = !at_l[0] && !at_l[1] && at_l[2];
  const bool strict = std::none_of(boundary.begin(), boundary.end(), [](bool f) { return f; });
  return {never && on_lth && strict,
          fmt::format("L-1 run fires: {}, L run fires on step L: {}, boundary fires: {}", !never,
                      on_lth, !strict)};
}

// 6. Planner post-conditions on the bundled scenario for every method.
Outcome planner_postconditions() {
  const Scenario sc = load_scenario(kScenario);
  bool ok = true;
  std::string detail;
  for (Method m : kAllMethods) {
    const Experiment exp(sc, m);
    const auto models = exp.planning_models(sc.arrival->step);
    NetworkState initial = sc.initial_state();
    const auto start = std::chrono::steady_clock::now();
    const PlanResult r = plan(initial, exp.context(models));
    const double secs = seconds_since(start);
    std::size_t bad = 0;
    for (std::size_t s = 0; s < r.state.size(); ++s) {
      const auto& c = r.state.cells[s];
      const double bar = sc.planner.alpha * static_cast<double>(c.channels.size()) *
                         sc.radio.channel_bandwidth_mhz;
      if (r.evaluation.required[s].exceeds(bar) && c.channels.size() != sc.planner.k_max) ++bad;
    }
    const bool m_ok = bad == 0 && r.state.size() <= sc.planner.n_max_cells && secs < 60.0;
    ok = ok && m_ok;
    detail += fmt::format("{}: {} cells, {} violating, {:.2f} s; ", method_name(m), r.state.size(),
                          bad, secs);
  }
  return {ok, detail.substr(0, detail.size() - 2)};
}

// 7. Relations between methods on the bundled scenario.
Outcome method_relations() {
  const Scenario sc = load_scenario(kScenario);
  std::map<Method, Report> reports;
  for (Method m : kAllMethods) reports.emplace(m, run_experiment(Experiment(sc, m)));
  const auto& oracle_r = reports.at(Method::oracle);
  bool fewest = true;
  std::string counts;
  for (Method m : kAllMethods) {
    const auto& r = reports.at(m);
    fewest = fewest && oracle_r.final_state.size() <= r.final_state.size();
    counts += fmt::format("{}={} cells/{:.1f} MHz ", method_name(m), r.final_state.size(),
                          r.table_total_mhz);
  }
  const auto& corr = reports.at(Method::corr_px);
  const auto& unif = reports.at(Method::uniform_px);
  const bool all_finite = corr.table_unservable == 0 && oracle_r.table_unservable == 0;
  const double gap =
      std::abs(corr.table_total_mhz - oracle_r.table_total_mhz) / oracle_r.table_total_mhz;
  const bool close = all_finite && gap <= 0.10;
  const bool more = unif.final_state.size() > corr.final_state.size();
  return {fewest && close && more,
          fmt::format("{}| (a) oracle fewest: {} (b) corr-px gap {:.1f}%: {} (c) uniform-px > "
                      "corr-px cells: {}",
                      counts, fewest, 100.0 * gap, close, more)};
}

// 8. Library against independent oracles.
Outcome oracle_equivalence() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int channel_mismatch = 0;
  const GridSpec big(300.0, 300.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    NetworkState state;
    const std::size_t cells = 5 + rng() % 6;
    while (state.size() < cells) {
      const PixelIndex site = rng() % big.pixel_count();
      if (state.site_occupied(site)) continue;
      std::vector<Channel> chs;
      for (Channel ch = 0; ch < 4; ++ch) {
        if (unit(rng) < 0.35) chs.push_back(ch);
      }
      if (chs.empty()) chs.push_back(static_cast<Channel>(rng() % 4));
      if (chs.size() == 4) chs.pop_back();
      state.add_cell(SmallCell{state.next_cell_id(), site, chs, 24.0, false});
    }
    std::vector<oracle::Site> sites;
    for (const auto& c : state.cells) {
      const Point p = big.position(c.site);
      sites.push_back({p.x_m, p.y_m, c.power_dbm, c.channels});
    }
    const std::size_t self = rng() % cells;
    const int expect = oracle::max_min_channel(sites, self, 4);
    const int got = select_channel(state, state.cells[self].id, big, 4);
    if (expect != got) ++channel_mismatch;
  }

  double worst = 0.0;
  const PropagationParams p;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t side = 2 + rng() % 9;
    const GridSpec grid(side * 3.0, side * 3.0, 3.0);
    NetworkState state;
    const std::size_t cells = 1 + rng() % 3;
    while (state.size() < std::min(cells, grid.pixel_count())) {
      const PixelIndex site = rng() % grid.pixel_count();
      if (state.site_occupied(site)) continue;
      state.add_cell(SmallCell{state.next_cell_id(), site, {static_cast<Channel>(rng() % 2)},
                               10.0 + 14.0 * unit(rng), true});
    }
    std::vector<oracle::Site> sites;
    for (const auto& c : state.cells) {
      const Point pos = grid.position(c.site);
      sites.push_back({pos.x_m, pos.y_m, c.power_dbm, c.channels});
    }
    const std::vector<double> weights(grid.pixel_count(), 1.0);
    const RadioSnapshot snap = evaluate_radio(state, grid, p, weights);
    for (PixelIndex u = 0; u < grid.pixel_count(); ++u) {
      const Point pos = grid.position(u);
      for (Channel ch = 0; ch < 2; ++ch) {
        const double expect = oracle::sinr_db(sites, pos.x_m, pos.y_m, ch);
        const double got = snap.sinr(u, ch);
        if (std::isnan(expect) != std::isnan(got)) {
          worst = std::numeric_limits<double>::infinity();
        } else if (!std::isnan(expect)) {
          worst = std::max(worst, std::abs(expect - got));
          worst = std::max(worst, std::abs(expect - sinr_db(state, grid, u, ch, p)));
        }
      }
    }
  }
  return {channel_mismatch == 0 && worst <= 1e-9,
          fmt::format("channel choice mismatches {}/100, worst SINR deviation {:.3g} dB",
                      channel_mismatch, worst)};
}

// 9. Raw and compressed ledgers both replay to the planned state.
Outcome ledger_replay() {
  int raw_bad = 0;
  int compressed_bad = 0;
  std::size_t actions = 0;
  std::size_t relocations = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto inst = fixture::random_instance(seed);
    const PlanResult r = plan(inst->initial, inst->context());
    actions += r.raw.size();
    for (const auto& a : r.compressed) relocations += std::holds_alternative<Relocate>(a.kind);
    if (!(replay(inst->initial, r.raw, inst->grid, inst->radio) == r.state)) ++raw_bad;
    if (!(replay(inst->initial, r.compressed, inst->grid, inst->radio) == r.state)) {
      ++compressed_bad;
    }
  }
  return {raw_bad == 0 && compressed_bad == 0,
          fmt::format("100 runs ({} raw actions, {} relocations): raw mismatches {}, compressed "
                      "mismatches {}",
                      actions, relocations, raw_bad, compressed_bad)};
}

// 10. Two identical runs write byte-identical reports.
Outcome determinism() {
  const Scenario sc = load_scenario(kScenario);
  const fs::path base = fs::temp_directory_path() / "capplan_acceptance_determinism";
  fs::remove_all(base);
  for (const char* run : {"a", "b"}) {
    const Experiment exp(sc, Method::corr_px);
    emit_report(run_experiment(exp), exp, base / run);
  }
  std::size_t files = 0;
  std::size_t differing = 0;
  for (const auto& entry : fs::directory_iterator(base / "a")) {
    ++files;
    const fs::path other = base / "b" / entry.path().filename();
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) ++differing;
  }
  const bool same_count =
      std::distance(fs::directory_iterator(base / "b"), fs::directory_iterator{}) ==
      static_cast<std::ptrdiff_t>(files);
  return {files > 0 && differing == 0 && same_count,
          fmt::format("{} report files compared, {} differ", files, differing)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"conservation of planning specs", conservation},
      {"reference SC-level specs", reference_specs},
      {"spectral efficiency mapping", se_mapping},
      {"power auto-configuration edge SINR", power_config},
      {"trigger semantics", trigger_semantics},
      {"planner post-conditions", planner_postconditions},
      {"method relations on bundled scenario", method_relations},
      {"oracle equivalence", oracle_equivalence},
      {"ledger replay", ledger_replay},
      {"report determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    failed += !o.pass;
    fmt::print("[{}] {:>2}. {}: {}\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
               o.detail);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
