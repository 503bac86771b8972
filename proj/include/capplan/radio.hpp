#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "capplan/grid.hpp"
#include "capplan/scenario.hpp"

namespace capplan {

enum class PathLossVariant { los, nlos };

struct PropagationParams {
  double carrier_ghz = 5.0;
  double channel_bandwidth_mhz = 20.0;
  int num_channels = 4;
  double antenna_gain_db = 2.0;
  double noise_figure_db = 9.0;
  double thermal_noise_dbm_per_hz = -174.0;
  PathLossVariant pathloss = PathLossVariant::nlos;
  double se_max_bps_hz = 4.4;
  double se_impl_factor = 0.6;
  double sinr_min_db = -10.0;
  double power_min_dbm = 10.0;
  double power_max_dbm = 24.0;
  double edge_sinr_target_db = 9.0;
  double edge_fraction = std::sqrt(3.0) / 2.0;
  double min_distance_m = 1.0;
  double power_tolerance_db = 0.01;
  int power_max_iterations = 50;

  friend bool operator==(const PropagationParams&, const PropagationParams&) = default;
};

/// Indoor-hotspot path loss in dB; distances below min_distance_m are clamped.
///   NLOS: 43.3 log10(d) + 11.5 + 20 log10(f_GHz)
///   LOS:  16.9 log10(d) + 32.8 + 20 log10(f_GHz)
double path_loss_db(double distance_m, const PropagationParams& params);

/// Thermal noise over one channel plus the terminal noise figure.
double noise_power_dbm(const PropagationParams& params);

double received_power_dbm(const SmallCell& cell, Point at, const GridSpec& grid,
                          const PropagationParams& params);
double received_power_dbm(const SmallCell& cell, PixelIndex pixel, const GridSpec& grid,
                          const PropagationParams& params);

/// Truncated Shannon mapping: 0 below sinr_min_db, otherwise
/// min(se_max, se_impl_factor * log2(1 + sinr)).
double spectral_efficiency(double sinr_db, const PropagationParams& params);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// Path loss from a set of sites to every pixel, computed once. Sites that
/// were not precomputed are evaluated on demand by the radio functions.
class PathLossTable {
 public:
  PathLossTable(const GridSpec& grid, const PropagationParams& params,
                std::span<const PixelIndex> sites);

  /// nullptr when `site` was not precomputed.
  const std::vector<double>* loss_db(PixelIndex site) const;

 private:
  std::unordered_map<PixelIndex, std::vector<double>> loss_db_;
};

/// Pixel -> strongest received power. Ties go to the lowest cell id.
ServingMap serving_assignment(const NetworkState& state, const GridSpec& grid,
                              const PropagationParams& params,
                              const PathLossTable* table = nullptr);

/// Solves each non-fixed cell's power so that the SINR at edge_fraction times
/// the distance to its nearest neighbour (on the segment towards it) reaches
/// edge_sinr_target_db, against the strongest co-channel interferer at that
/// point. The coupled problem is Jacobi-iterated from power_max until no power
/// moves by power_tolerance_db. Returns powers in cell order, clamped to
/// [power_min, power_max].
std::vector<double> configure_powers(const NetworkState& state, const GridSpec& grid,
                                     const PropagationParams& params);

/// configure_powers written back into the state.
void apply_configured_powers(NetworkState& state, const GridSpec& grid,
                             const PropagationParams& params);

/// Edge point used by the power rule for the cell at `slot`, with the
/// resulting SINR under current powers (strongest co-channel interferer only).
struct EdgeProbe {
  Point point;
  double sinr_db;
};
EdgeProbe power_edge_probe(const NetworkState& state, std::size_t slot, const GridSpec& grid,
                           const PropagationParams& params);

/// SINR of the serving link of `pixel` on `channel`, with every other
/// deployed cell holding `channel` counted as interference.
double sinr_db(const NetworkState& state, const GridSpec& grid, PixelIndex pixel, Channel channel,
               const PropagationParams& params);

struct RadioSnapshot {
  std::size_t num_channels = 0;
  std::size_t num_cells = 0;
  ServingMap serving;
  std::vector<double> rx_power_dbm;  // [pixel * num_cells + slot]
  std::vector<double> sinr_db;       // [pixel * num_channels + ch]; NaN if not allocated
  std::vector<double> pixel_se;      // mean SE over the serving cell's channels
  std::vector<std::size_t> channel_counts;  // per slot
  std::vector<double> avg_se;               // per slot
  std::vector<double> capacity_mbps;        // per slot

  double rx(PixelIndex u, std::size_t slot) const { return rx_power_dbm[u * num_cells + slot]; }
  double sinr(PixelIndex u, Channel ch) const {
    return sinr_db[u * num_channels + static_cast<std::size_t>(ch)];
  }
};

/// Full network performance evaluation. `demand_weights` (one per pixel)
/// weights the per-cell average spectral efficiency.
RadioSnapshot evaluate_radio(const NetworkState& state, const GridSpec& grid,
                             const PropagationParams& params,
                             std::span<const double> demand_weights,
                             const PathLossTable* table = nullptr);

/// Variant for weights that depend on the serving map (derived demand).
using WeightsFromServing = std::function<std::vector<double>(const ServingMap&)>;
RadioSnapshot evaluate_radio(const NetworkState& state, const GridSpec& grid,
                             const PropagationParams& params, const WeightsFromServing& weights,
                             const PathLossTable* table = nullptr);

/// Demand-weighted mean of pixel SE over the cell's served pixels; uniform
/// weights when the served demand is zero, 0 when it serves no pixel.
double average_se(CellId cell, const RadioSnapshot& snapshot,
                  std::span<const double> demand_weights);

/// |F_i| * B * average SE, in Mbps.
double cell_capacity(CellId cell, const RadioSnapshot& snapshot, const PropagationParams& params);

}  // namespace capplan
