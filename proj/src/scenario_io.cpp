#include "capplan/scenario_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "capplan/error.hpp"

namespace capplan {

using nlohmann::json;

namespace {

// Field access with the JSON path carried along for error messages.
class Node {
 public:
  Node(const json& value, std::string path, const std::string& origin)
      : value_(value), path_(std::move(path)), origin_(origin) {}

  bool has(const char* key) const { return value_.is_object() && value_.contains(key); }

  Node at(const char* key) const {
    expect_object();
    if (!value_.contains(key)) fail(fmt::format("missing field '{}'", key));
    return child(key);
  }

  std::optional<Node> maybe(const char* key) const {
    expect_object();
    if (!value_.contains(key) || value_.at(key).is_null()) return std::nullopt;
    return child(key);
  }

  std::vector<Node> items() const {
    if (!value_.is_array()) fail("expected an array");
    std::vector<Node> out;
    for (std::size_t i = 0; i < value_.size(); ++i) {
      out.emplace_back(value_[i], fmt::format("{}[{}]", path_, i), origin_);
    }
    return out;
  }

  double number() const {
    if (!value_.is_number()) fail("expected a number");
    return value_.get<double>();
  }

  std::uint64_t unsigned_int() const {
    if (!value_.is_number_unsigned() && !(value_.is_number_integer() && value_.get<long long>() >= 0)) {
      fail("expected a non-negative integer");
    }
    return value_.get<std::uint64_t>();
  }

  int integer() const {
    if (!value_.is_number_integer()) fail("expected an integer");
    return value_.get<int>();
  }

  bool boolean() const {
    if (!value_.is_boolean()) fail("expected true or false");
    return value_.get<bool>();
  }

  std::string string() const {
    if (!value_.is_string()) fail("expected a string");
    return value_.get<std::string>();
  }

  std::vector<double> numbers() const {
    std::vector<double> out;
    for (const auto& n : items()) out.push_back(n.number());
    return out;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw InputError(fmt::format("{}: {}: {}", origin_, path_, what));
  }

 private:
  void expect_object() const {
    if (!value_.is_object()) fail("expected an object");
  }
  Node child(const char* key) const {
    return Node(value_.at(key), path_ + "." + key, origin_);
  }

  const json& value_;
  std::string path_;
  const std::string& origin_;
};

template <typename T, typename F>
void read_opt(const Node& node, const char* key, T& target, F get) {
  if (auto n = node.maybe(key)) target = get(*n);
}

double as_number(const Node& n) { return n.number(); }
std::size_t as_size(const Node& n) { return static_cast<std::size_t>(n.unsigned_int()); }

TenantProfile read_tenant(const Node& node) {
  TenantProfile t;
  t.id = node.at("id").string();
  t.contracted_capacity_mbps = node.at("contracted_capacity_mbps").number();
  if (auto p = node.maybe("temporal_profile")) t.temporal_profile = p->numbers();
  if (auto s = node.maybe("spatial")) {
    SpatialModel model;
    read_opt(*s, "floor_mbps", model.floor_mbps, as_number);
    if (auto hs = s->maybe("hotspots")) {
      for (const auto& h : hs->items()) {
        Hotspot spot;
        spot.center = {h.at("x_m").number(), h.at("y_m").number()};
        spot.sigma_m = h.at("sigma_m").number();
        spot.peak_mbps = h.at("peak_mbps").number();
        model.hotspots.push_back(spot);
      }
    }
    t.spatial = std::move(model);
  }
  return t;
}

PathLossVariant read_variant(const Node& n) {
  const std::string v = n.string();
  if (v == "nlos") return PathLossVariant::nlos;
  if (v == "los") return PathLossVariant::los;
  n.fail("expected \"los\" or \"nlos\"");
}

Step4Threshold read_step4(const Node& n) {
  const std::string v = n.string();
  if (v == "printed") return Step4Threshold::printed;
  if (v == "kmax") return Step4Threshold::kmax;
  n.fail("expected \"printed\" or \"kmax\"");
}

Scenario read_scenario(const Node& root) {
  Scenario sc;
  if (auto g = root.maybe("grid")) {
    read_opt(*g, "width_m", sc.grid.width_m, as_number);
    read_opt(*g, "height_m", sc.grid.height_m, as_number);
    read_opt(*g, "resolution_m", sc.grid.resolution_m, as_number);
  }
  read_opt(root, "horizon", sc.horizon, as_size);
  for (const auto& t : root.at("tenants").items()) sc.tenants.push_back(read_tenant(t));

  if (auto c = root.maybe("candidate_sites")) {
    read_opt(*c, "fraction", sc.candidates.fraction, as_number);
    if (auto s = c->maybe("seed")) sc.candidates.seed = s->unsigned_int();
    if (auto p = c->maybe("pixels")) {
      std::vector<PixelIndex> pixels;
      for (const auto& u : p->items()) pixels.push_back(as_size(u));
      sc.candidates.pixels = std::move(pixels);
    }
    if (auto p = c->maybe("pin_initial_sites")) sc.candidates.pin_initial_sites = p->boolean();
  }

  for (const auto& c : root.at("initial_cells").items()) {
    InitialCell cell;
    cell.site = as_size(c.at("site"));
    for (const auto& ch : c.at("channels").items()) cell.channels.push_back(ch.integer());
    if (auto p = c.maybe("fixed_power_dbm")) cell.fixed_power_dbm = p->number();
    sc.initial_cells.push_back(std::move(cell));
  }

  if (auto r = root.maybe("radio")) {
    auto& p = sc.radio;
    read_opt(*r, "carrier_ghz", p.carrier_ghz, as_number);
    read_opt(*r, "channel_bandwidth_mhz", p.channel_bandwidth_mhz, as_number);
    if (auto k = r->maybe("num_channels")) p.num_channels = k->integer();
    read_opt(*r, "antenna_gain_db", p.antenna_gain_db, as_number);
    read_opt(*r, "noise_figure_db", p.noise_figure_db, as_number);
    read_opt(*r, "thermal_noise_dbm_per_hz", p.thermal_noise_dbm_per_hz, as_number);
    read_opt(*r, "pathloss", p.pathloss, read_variant);
    read_opt(*r, "se_max_bps_hz", p.se_max_bps_hz, as_number);
    read_opt(*r, "se_impl_factor", p.se_impl_factor, as_number);
    read_opt(*r, "sinr_min_db", p.sinr_min_db, as_number);
    read_opt(*r, "power_min_dbm", p.power_min_dbm, as_number);
    read_opt(*r, "power_max_dbm", p.power_max_dbm, as_number);
    read_opt(*r, "edge_sinr_target_db", p.edge_sinr_target_db, as_number);
    read_opt(*r, "edge_fraction", p.edge_fraction, as_number);
  }
  if (auto m = root.maybe("monitor")) {
    read_opt(*m, "alpha", sc.monitor.alpha, as_number);
    read_opt(*m, "window", sc.monitor.window, as_size);
    read_opt(*m, "consecutive", sc.monitor.consecutive, as_size);
  }
  sc.planner.alpha = sc.monitor.alpha;
  if (auto p = root.maybe("planner")) {
    read_opt(*p, "beta", sc.planner.beta, as_number);
    read_opt(*p, "gamma", sc.planner.gamma, as_number);
    read_opt(*p, "k_max", sc.planner.k_max, as_size);
    read_opt(*p, "n_max_cells", sc.planner.n_max_cells, as_size);
    read_opt(*p, "step4_threshold", sc.planner.step4, read_step4);
    if (auto c = p->maybe("closing_channel_pass")) sc.planner.closing_channel_pass = c->boolean();
  }
  if (auto a = root.maybe("arrival")) {
    TenantArrival arrival;
    arrival.step = as_size(a->at("step"));
    arrival.tenant = read_tenant(a->at("tenant"));
    if (auto k = a->maybe("map_known")) arrival.map_known = k->boolean();
    sc.arrival = std::move(arrival);
  }
  return sc;
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json tenant_json(const TenantProfile& t) {
  json j{{"id", t.id},
         {"contracted_capacity_mbps", t.contracted_capacity_mbps},
         {"temporal_profile", t.temporal_profile}};
  if (t.spatial) {
    json hs = json::array();
    for (const auto& h : t.spatial->hotspots) {
      hs.push_back({{"x_m", h.center.x_m},
                    {"y_m", h.center.y_m},
                    {"sigma_m", h.sigma_m},
                    {"peak_mbps", h.peak_mbps}});
    }
    j["spatial"] = {{"floor_mbps", t.spatial->floor_mbps}, {"hotspots", hs}};
  }
  return j;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw InputError(fmt::format("{}:{}:{}: syntax error", origin, line, col));
  }
  try {
    return read_scenario(Node(doc, "$", origin));
  } catch (const json::exception& e) {
    throw InputError(fmt::format("{}: {}", origin, e.what()));
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("{}: cannot open", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

std::string scenario_to_json(const Scenario& sc) {
  json j;
  j["grid"] = {{"width_m", sc.grid.width_m},
               {"height_m", sc.grid.height_m},
               {"resolution_m", sc.grid.resolution_m}};
  j["horizon"] = sc.horizon;
  j["tenants"] = json::array();
  for (const auto& t : sc.tenants) j["tenants"].push_back(tenant_json(t));
  j["candidate_sites"] = {{"fraction", sc.candidates.fraction},
                          {"seed", sc.candidates.seed},
                          {"pin_initial_sites", sc.candidates.pin_initial_sites}};
  if (sc.candidates.pixels) j["candidate_sites"]["pixels"] = *sc.candidates.pixels;
  j["initial_cells"] = json::array();
  for (const auto& c : sc.initial_cells) {
    json cell{{"site", c.site}, {"channels", c.channels}};
    if (c.fixed_power_dbm) cell["fixed_power_dbm"] = *c.fixed_power_dbm;
    j["initial_cells"].push_back(cell);
  }
  const auto& r = sc.radio;
  j["radio"] = {{"carrier_ghz", r.carrier_ghz},
                {"channel_bandwidth_mhz", r.channel_bandwidth_mhz},
                {"num_channels", r.num_channels},
                {"antenna_gain_db", r.antenna_gain_db},
                {"noise_figure_db", r.noise_figure_db},
                {"thermal_noise_dbm_per_hz", r.thermal_noise_dbm_per_hz},
                {"pathloss", r.pathloss == PathLossVariant::los ? "los" : "nlos"},
                {"se_max_bps_hz", r.se_max_bps_hz},
                {"se_impl_factor", r.se_impl_factor},
                {"sinr_min_db", r.sinr_min_db},
                {"power_min_dbm", r.power_min_dbm},
                {"power_max_dbm", r.power_max_dbm},
                {"edge_sinr_target_db", r.edge_sinr_target_db},
                {"edge_fraction", r.edge_fraction}};
  j["monitor"] = {{"alpha", sc.monitor.alpha},
                  {"window", sc.monitor.window},
                  {"consecutive", sc.monitor.consecutive}};
  j["planner"] = {{"beta", sc.planner.beta},
                  {"gamma", sc.planner.gamma},
                  {"k_max", sc.planner.k_max},
                  {"n_max_cells", sc.planner.n_max_cells},
                  {"step4_threshold", sc.planner.step4 == Step4Threshold::kmax ? "kmax" : "printed"},
                  {"closing_channel_pass", sc.planner.closing_channel_pass}};
  if (sc.arrival) {
    j["arrival"] = {{"step", sc.arrival->step},
                    {"tenant", tenant_json(sc.arrival->tenant)},
                    {"map_known", sc.arrival->map_known}};
  }
  return j.dump(2) + "\n";
}

GridSpec Scenario::grid_spec() const {
  return GridSpec(grid.width_m, grid.height_m, grid.resolution_m);
}

CandidateSiteSet Scenario::candidate_sites() const {
  if (candidates.pixels) {
    std::vector<PixelIndex> pixels = *candidates.pixels;
    std::sort(pixels.begin(), pixels.end());
    return CandidateSiteSet{std::move(pixels), candidates.seed};
  }
  std::vector<PixelIndex> pinned;
  if (candidates.pin_initial_sites) {
    for (const auto& c : initial_cells) pinned.push_back(c.site);
  }
  return select_candidate_sites(grid_spec(), candidates.fraction, candidates.seed, pinned);
}

NetworkState Scenario::initial_state() const {
  NetworkState state;
  CellId id = 1;
  for (const auto& c : initial_cells) {
    SmallCell cell{id++, c.site, c.channels, c.fixed_power_dbm.value_or(radio.power_max_dbm),
                   c.fixed_power_dbm.has_value()};
    state.add_cell(std::move(cell));
  }
  apply_configured_powers(state, grid_spec(), radio);
  return state;
}

std::vector<TenantProfile> Scenario::all_tenants() const {
  std::vector<TenantProfile> out = tenants;
  if (arrival) out.push_back(arrival->tenant);
  return out;
}

namespace {

void check_profile(const TenantProfile& t, const std::string& where,
                   std::vector<Diagnostic>& out) {
  if (!(t.contracted_capacity_mbps >= 0.0)) {
    out.push_back({"tenant.capacity_nonnegative", where + " has negative contracted capacity"});
  }
  const auto& w = t.temporal_profile;
  if (w.empty() || std::any_of(w.begin(), w.end(), [](double v) { return !(v >= 0.0 && v <= 1.0); })) {
    out.push_back({"tenant.profile_range", where + " has temporal weights outside [0, 1]"});
  } else if (*std::max_element(w.begin(), w.end()) != 1.0) {
    out.push_back({"tenant.profile_peak", where + " temporal profile does not peak at exactly 1"});
  }
  if (t.spatial) {
    if (!(t.spatial->floor_mbps >= 0.0)) {
      out.push_back({"traffic.nonnegative", where + " has a negative demand floor"});
    }
    for (const auto& h : t.spatial->hotspots) {
      if (!(h.sigma_m > 0.0)) out.push_back({"hotspot.sigma_positive", where + " hotspot sigma <= 0"});
      if (!(h.peak_mbps >= 0.0)) {
        out.push_back({"traffic.nonnegative", where + " hotspot with negative peak"});
      }
    }
  }
}

}  // namespace

std::vector<Diagnostic> validate(const Scenario& sc) {
  std::vector<Diagnostic> out;
  auto add = [&out](std::string name, std::string detail) {
    out.push_back({std::move(name), std::move(detail)});
  };

  std::optional<GridSpec> grid;
  if (!(sc.grid.resolution_m > 0.0)) add("grid.resolution_positive", "resolution_m must be > 0");
  if (!(sc.grid.width_m > 0.0) || !(sc.grid.height_m > 0.0)) {
    add("grid.dimensions_positive", "width_m and height_m must be > 0");
  }
  if (out.empty()) grid.emplace(sc.grid.width_m, sc.grid.height_m, sc.grid.resolution_m);
  if (sc.horizon == 0) add("experiment.horizon_positive", "horizon must be at least one step");

  const auto& r = sc.radio;
  if (!(r.channel_bandwidth_mhz > 0.0)) add("radio.bandwidth_positive", "channel bandwidth must be > 0");
  if (r.num_channels < 1) add("radio.channels_positive", "num_channels must be >= 1");
  if (!(r.power_min_dbm <= r.power_max_dbm)) add("radio.power_order", "power_min exceeds power_max");
  if (!(r.se_max_bps_hz > 0.0)) add("radio.se_max_positive", "se_max must be > 0");

  const auto& m = sc.monitor;
  if (!(m.alpha >= 0.0 && m.alpha <= 1.0)) add("monitor.alpha_range", "alpha must lie in [0, 1]");
  if (m.window < 1) add("monitor.window_positive", "window T must be >= 1");
  if (m.consecutive < 1) add("monitor.consecutive_positive", "L must be >= 1");

  const auto& p = sc.planner;
  if (!(p.beta >= 0.0 && p.beta <= 1.0)) add("planner.beta_range", "beta must lie in [0, 1]");
  if (!(p.gamma >= 0.0 && p.gamma <= 1.0)) add("planner.gamma_range", "gamma must lie in [0, 1]");
  if (p.k_max < 1) add("planner.kmax_positive", "K_max must be >= 1");
  if (p.n_max_cells < 1) add("planner.nmax_positive", "N_max must be >= 1");

  std::set<std::string> ids;
  for (const auto& t : sc.all_tenants()) {
    if (!ids.insert(t.id).second) add("tenant.id_unique", fmt::format("tenant '{}' is declared twice", t.id));
    check_profile(t, fmt::format("tenant '{}'", t.id), out);
  }
  if (sc.arrival && sc.arrival->step >= sc.horizon) {
    add("experiment.event_in_horizon", "arrival step lies beyond the horizon");
  }

  std::optional<CandidateSiteSet> candidates;
  if (grid) {
    if (sc.candidates.pixels) {
      const auto& px = *sc.candidates.pixels;
      std::set<PixelIndex> seen;
      for (PixelIndex u : px) {
        if (!grid->contains(u)) add("candidates.valid_pixel", fmt::format("pixel {} is off the grid", u));
        if (!seen.insert(u).second) add("candidates.distinct", fmt::format("pixel {} listed twice", u));
      }
      if (px.empty()) add("candidates.nonempty", "no candidate sites");
    } else if (!(sc.candidates.fraction > 0.0 && sc.candidates.fraction <= 1.0)) {
      add("candidates.fraction_range", "fraction must lie in (0, 1]");
    }
    try {
      candidates = sc.candidate_sites();
    } catch (const std::exception& e) {
      add("candidates.count", e.what());
    }
  }

  std::set<PixelIndex> sites;
  for (std::size_t i = 0; i < sc.initial_cells.size(); ++i) {
    const auto& c = sc.initial_cells[i];
    const std::string where = fmt::format("initial cell {}", i + 1);
    if (grid && !grid->contains(c.site)) add("cell.site_on_grid", where + " is off the grid");
    if (candidates && !candidates->contains(c.site)) {
      add("cell.site_is_candidate", fmt::format("{} sits at non-candidate pixel {}", where, c.site));
    }
    if (!sites.insert(c.site).second) add("cell.site_distinct", where + " shares a site");
    if (c.channels.empty() || c.channels.size() > p.k_max) {
      add("cell.channel_count", fmt::format("{} holds {} channels (allowed 1..{})", where,
                                            c.channels.size(), p.k_max));
    }
    std::set<Channel> chs;
    for (Channel ch : c.channels) {
      if (ch < 0 || ch >= r.num_channels) add("cell.channel_range", fmt::format("{} uses channel {}", where, ch));
      if (!chs.insert(ch).second) add("cell.channel_distinct", fmt::format("{} lists channel {} twice", where, ch));
    }
    if (c.fixed_power_dbm &&
        !(*c.fixed_power_dbm >= r.power_min_dbm && *c.fixed_power_dbm <= r.power_max_dbm)) {
      add("cell.power_range", where + " fixed power outside [power_min, power_max]");
    }
  }
  if (sc.initial_cells.empty()) add("network.nonempty", "no initial cells");
  if (sc.initial_cells.size() > p.n_max_cells) add("network.within_nmax", "more initial cells than N_max");
  return out;
}

}  // namespace capplan
