#include "capplan/radio.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "capplan/error.hpp"

namespace capplan {

double path_loss_db(double distance_m, const PropagationParams& params) {
  const double d = std::max(distance_m, params.min_distance_m);
  const double freq_term = 20.0 * std::log10(params.carrier_ghz);
  switch (params.pathloss) {
    case PathLossVariant::los:
      return 16.9 * std::log10(d) + 32.8 + freq_term;
    case PathLossVariant::nlos:
      break;
  }
  return 43.3 * std::log10(d) + 11.5 + freq_term;
}

double noise_power_dbm(const PropagationParams& params) {
  return params.thermal_noise_dbm_per_hz + 10.0 * std::log10(params.channel_bandwidth_mhz * 1e6) +
         params.noise_figure_db;
}

double received_power_dbm(const SmallCell& cell, Point at, const GridSpec& grid,
                          const PropagationParams& params) {
  return cell.power_dbm + params.antenna_gain_db -
         path_loss_db(distance(grid.position(cell.site), at), params);
}

double received_power_dbm(const SmallCell& cell, PixelIndex pixel, const GridSpec& grid,
                          const PropagationParams& params) {
  return received_power_dbm(cell, grid.position(pixel), grid, params);
}

double spectral_efficiency(double sinr_db, const PropagationParams& params) {
  if (sinr_db < params.sinr_min_db) return 0.0;
  const double shannon = params.se_impl_factor * std::log2(1.0 + db_to_linear(sinr_db));
  return std::min(params.se_max_bps_hz, shannon);
}

PathLossTable::PathLossTable(const GridSpec& grid, const PropagationParams& params,
                             std::span<const PixelIndex> sites) {
  for (PixelIndex site : sites) {
    if (loss_db_.count(site)) continue;
    const Point origin = grid.position(site);
    std::vector<double> loss(grid.pixel_count());
    for (PixelIndex u = 0; u < loss.size(); ++u) {
      loss[u] = path_loss_db(distance(origin, grid.position(u)), params);
    }
    loss_db_.emplace(site, std::move(loss));
  }
}

const std::vector<double>* PathLossTable::loss_db(PixelIndex site) const {
  auto it = loss_db_.find(site);
  return it == loss_db_.end() ? nullptr : &it->second;
}

namespace {

// Received power of every cell at every pixel, pixel-major.
std::vector<double> rx_table(const NetworkState& state, const GridSpec& grid,
                             const PropagationParams& params, const PathLossTable* table) {
  const std::size_t n = state.size();
  const std::size_t pixels = grid.pixel_count();
  std::vector<double> rx(pixels * n);
  for (std::size_t s = 0; s < n; ++s) {
    const SmallCell& cell = state.cells[s];
    const double eirp = cell.power_dbm + params.antenna_gain_db;
    const std::vector<double>* cached = table ? table->loss_db(cell.site) : nullptr;
    if (cached != nullptr) {
      for (PixelIndex u = 0; u < pixels; ++u) rx[u * n + s] = eirp - (*cached)[u];
    } else {
      const Point origin = grid.position(cell.site);
      for (PixelIndex u = 0; u < pixels; ++u) {
        rx[u * n + s] = eirp - path_loss_db(distance(origin, grid.position(u)), params);
      }
    }
  }
  return rx;
}

ServingMap serving_from_rx(const NetworkState& state, std::span<const double> rx,
                           std::size_t pixels) {
  const std::size_t n = state.size();
  std::vector<std::uint32_t> slot_of_pixel(pixels);
  for (PixelIndex u = 0; u < pixels; ++u) {
    std::size_t best = 0;
    for (std::size_t s = 1; s < n; ++s) {
      // strict comparison keeps the lowest id (cells are id-ordered) on ties
      if (rx[u * n + s] > rx[u * n + best]) best = s;
    }
    slot_of_pixel[u] = static_cast<std::uint32_t>(best);
  }
  std::vector<CellId> ids;
  ids.reserve(n);
  for (const auto& c : state.cells) ids.push_back(c.id);
  return ServingMap(std::move(ids), std::move(slot_of_pixel));
}

bool share_channel(const SmallCell& a, const SmallCell& b) {
  return std::any_of(a.channels.begin(), a.channels.end(),
                     [&b](Channel ch) { return b.has_channel(ch); });
}

std::size_t nearest_other(const NetworkState& state, std::size_t slot, const GridSpec& grid) {
  const Point origin = grid.position(state.cells[slot].site);
  std::size_t best = slot;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < state.size(); ++k) {
    if (k == slot) continue;
    const double d = distance(origin, grid.position(state.cells[k].site));
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

Point edge_point(const NetworkState& state, std::size_t slot, std::size_t neighbour,
                 const GridSpec& grid, const PropagationParams& params) {
  const Point a = grid.position(state.cells[slot].site);
  const Point b = grid.position(state.cells[neighbour].site);
  const double f = params.edge_fraction;
  return {a.x_m + f * (b.x_m - a.x_m), a.y_m + f * (b.y_m - a.y_m)};
}

// Linear power (mW) of the strongest co-channel interferer at `at`; 0 if none.
double strongest_interferer_mw(const NetworkState& state, std::size_t slot, Point at,
                               const GridSpec& grid, const PropagationParams& params,
                               std::span<const double> powers) {
  double best = 0.0;
  for (std::size_t k = 0; k < state.size(); ++k) {
    if (k == slot || !share_channel(state.cells[slot], state.cells[k])) continue;
    const double rx = powers[k] + params.antenna_gain_db -
                      path_loss_db(distance(grid.position(state.cells[k].site), at), params);
    best = std::max(best, db_to_linear(rx));
  }
  return best;
}

}  // namespace

ServingMap serving_assignment(const NetworkState& state, const GridSpec& grid,
                              const PropagationParams& params, const PathLossTable* table) {
  if (state.empty()) throw PlanningError("empty network");
  const auto rx = rx_table(state, grid, params, table);
  return serving_from_rx(state, rx, grid.pixel_count());
}

std::vector<double> configure_powers(const NetworkState& state, const GridSpec& grid,
                                     const PropagationParams& params) {
  const std::size_t n = state.size();
  std::vector<double> powers(n);
  for (std::size_t s = 0; s < n; ++s) {
    powers[s] = state.cells[s].fixed_power ? state.cells[s].power_dbm : params.power_max_dbm;
  }
  if (n < 2) return powers;

  const double noise_mw = db_to_linear(noise_power_dbm(params));
  std::vector<std::size_t> neighbour(n);
  std::vector<Point> edge(n);
  std::vector<double> edge_loss(n);
  for (std::size_t s = 0; s < n; ++s) {
    neighbour[s] = nearest_other(state, s, grid);
    edge[s] = edge_point(state, s, neighbour[s], grid, params);
    edge_loss[s] = path_loss_db(distance(grid.position(state.cells[s].site), edge[s]), params);
  }

  for (int iter = 0; iter < params.power_max_iterations; ++iter) {
    std::vector<double> next = powers;
    double max_change = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      if (state.cells[s].fixed_power) continue;
      const double interference = strongest_interferer_mw(state, s, edge[s], grid, params, powers);
      const double wanted = params.edge_sinr_target_db + edge_loss[s] - params.antenna_gain_db +
                            linear_to_db(interference + noise_mw);
      next[s] = std::clamp(wanted, params.power_min_dbm, params.power_max_dbm);
      max_change = std::max(max_change, std::abs(next[s] - powers[s]));
    }
    powers = std::move(next);
    if (max_change < params.power_tolerance_db) break;
  }
  return powers;
}

void apply_configured_powers(NetworkState& state, const GridSpec& grid,
                             const PropagationParams& params) {
  const auto powers = configure_powers(state, grid, params);
  for (std::size_t s = 0; s < state.size(); ++s) state.cells[s].power_dbm = powers[s];
}

EdgeProbe power_edge_probe(const NetworkState& state, std::size_t slot, const GridSpec& grid,
                           const PropagationParams& params) {
  if (state.size() < 2) throw PlanningError("edge probe needs two cells");
  const std::size_t nb = nearest_other(state, slot, grid);
  const Point at = edge_point(state, slot, nb, grid, params);
  std::vector<double> powers;
  for (const auto& c : state.cells) powers.push_back(c.power_dbm);
  const double interference = strongest_interferer_mw(state, slot, at, grid, params, powers);
  const double signal = received_power_dbm(state.cells[slot], at, grid, params);
  return {at, signal - linear_to_db(interference + db_to_linear(noise_power_dbm(params)))};
}

double sinr_db(const NetworkState& state, const GridSpec& grid, PixelIndex pixel, Channel channel,
               const PropagationParams& params) {
  if (state.empty()) throw PlanningError("empty network");
  std::size_t serving = 0;
  std::vector<double> rx(state.size());
  for (std::size_t s = 0; s < state.size(); ++s) {
    rx[s] = received_power_dbm(state.cells[s], pixel, grid, params);
    if (rx[s] > rx[serving]) serving = s;
  }
  if (!state.cells[serving].has_channel(channel)) {
    throw PlanningError("channel not allocated at serving cell");
  }
  double interference = 0.0;
  for (std::size_t s = 0; s < state.size(); ++s) {
    if (s != serving && state.cells[s].has_channel(channel)) interference += db_to_linear(rx[s]);
  }
  return rx[serving] - linear_to_db(interference + db_to_linear(noise_power_dbm(params)));
}

RadioSnapshot evaluate_radio(const NetworkState& state, const GridSpec& grid,
                             const PropagationParams& params,
                             std::span<const double> demand_weights, const PathLossTable* table) {
  const std::vector<double> copy(demand_weights.begin(), demand_weights.end());
  return evaluate_radio(state, grid, params, [&copy](const ServingMap&) { return copy; }, table);
}

RadioSnapshot evaluate_radio(const NetworkState& state, const GridSpec& grid,
                             const PropagationParams& params, const WeightsFromServing& weights,
                             const PathLossTable* table) {
  if (state.empty()) throw PlanningError("empty network");
  const std::size_t pixels = grid.pixel_count();
  const std::size_t n = state.size();
  const auto k = static_cast<std::size_t>(params.num_channels);

  RadioSnapshot snap;
  snap.num_channels = k;
  snap.num_cells = n;
  snap.rx_power_dbm = rx_table(state, grid, params, table);
  snap.serving = serving_from_rx(state, snap.rx_power_dbm, pixels);
  const std::vector<double> demand_weights = weights(snap.serving);
  if (demand_weights.size() != pixels) {
    throw std::invalid_argument("demand weights do not match the grid");
  }

  std::vector<double> rx_mw(snap.rx_power_dbm.size());
  std::transform(snap.rx_power_dbm.begin(), snap.rx_power_dbm.end(), rx_mw.begin(), db_to_linear);
  const double noise_mw = db_to_linear(noise_power_dbm(params));

  snap.sinr_db.assign(pixels * k, std::numeric_limits<double>::quiet_NaN());
  snap.pixel_se.assign(pixels, 0.0);
  for (PixelIndex u = 0; u < pixels; ++u) {
    const std::size_t s = snap.serving.slot_of(u);
    const SmallCell& cell = state.cells[s];
    double se_sum = 0.0;
    for (Channel ch : cell.channels) {
      double interference = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != s && state.cells[j].has_channel(ch)) interference += rx_mw[u * n + j];
      }
      const double sinr =
          snap.rx_power_dbm[u * n + s] - linear_to_db(interference + noise_mw);
      snap.sinr_db[u * k + static_cast<std::size_t>(ch)] = sinr;
      se_sum += spectral_efficiency(sinr, params);
    }
    snap.pixel_se[u] = cell.channels.empty() ? 0.0 : se_sum / static_cast<double>(cell.channels.size());
  }

  snap.channel_counts.resize(n);
  snap.avg_se.resize(n);
  snap.capacity_mbps.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    snap.channel_counts[s] = state.cells[s].channels.size();
    snap.avg_se[s] = average_se(state.cells[s].id, snap, demand_weights);
    snap.capacity_mbps[s] = cell_capacity(state.cells[s].id, snap, params);
  }
  return snap;
}

double average_se(CellId cell, const RadioSnapshot& snapshot,
                  std::span<const double> demand_weights) {
  const auto slot = snapshot.serving.slot(cell);
  if (!slot) throw PlanningError("unknown cell " + std::to_string(cell));
  double weighted = 0.0;
  double weight = 0.0;
  double plain = 0.0;
  std::size_t served = 0;
  for (PixelIndex u = 0; u < snapshot.serving.pixel_count(); ++u) {
    if (snapshot.serving.slot_of(u) != *slot) continue;
    weighted += demand_weights[u] * snapshot.pixel_se[u];
    weight += demand_weights[u];
    plain += snapshot.pixel_se[u];
    ++served;
  }
  if (served == 0) return 0.0;
  if (weight > 0.0) return weighted / weight;
  return plain / static_cast<double>(served);
}

double cell_capacity(CellId cell, const RadioSnapshot& snapshot, const PropagationParams& params) {
  const auto slot = snapshot.serving.slot(cell);
  if (!slot) throw PlanningError("unknown cell " + std::to_string(cell));
  return static_cast<double>(snapshot.channel_counts[*slot]) * params.channel_bandwidth_mhz *
         snapshot.avg_se[*slot];
}

}  // namespace capplan
