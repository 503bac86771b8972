#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "capplan/grid.hpp"

namespace capplan {

using CellId = int;
using Channel = int;  // zero-based index into the K orthogonal channels
using TimeIndex = std::size_t;

// ---------------------------------------------------------------------------
// Network layout

struct SmallCell {
  CellId id = 0;
  PixelIndex site = 0;
  std::vector<Channel> channels;  // kept sorted ascending
  double power_dbm = 0.0;
  bool fixed_power = false;  // excluded from power auto-configuration

  bool has_channel(Channel ch) const;

  friend bool operator==(const SmallCell&, const SmallCell&) = default;
};

/// Deployed small cells, ordered by ascending id.
struct NetworkState {
  std::vector<SmallCell> cells;
  TimeIndex time = 0;
  // Ids are never reused, even after the highest-id cell is removed.
  CellId id_watermark = 1;

  std::size_t size() const { return cells.size(); }
  bool empty() const { return cells.empty(); }

  const SmallCell* find(CellId id) const;
  SmallCell* find(CellId id);
  std::optional<std::size_t> slot_of(CellId id) const;
  bool site_occupied(PixelIndex site) const;
  CellId next_cell_id() const;
  std::size_t total_channels() const;

  /// Inserts keeping id order. Throws if the id or site is already in use.
  SmallCell& add_cell(SmallCell cell);
  void remove_cell(CellId id);

  // Layout equality; the id watermark is bookkeeping and not compared.
  friend bool operator==(const NetworkState& a, const NetworkState& b) {
    return a.cells == b.cells && a.time == b.time;
  }
};

// ---------------------------------------------------------------------------
// Candidate sites

struct CandidateSiteSet {
  std::vector<PixelIndex> site_pixels;  // ascending, distinct
  std::uint64_t seed = 0;

  bool contains(PixelIndex u) const;
  std::size_t size() const { return site_pixels.size(); }
};

/// Draws round(fraction * |U|) distinct pixels uniformly without replacement.
/// Pixels listed in `pinned` are always members (they count toward the total);
/// the remainder is drawn from the other pixels with a seeded mt19937_64.
CandidateSiteSet select_candidate_sites(const GridSpec& grid, double fraction,
                                        std::uint64_t seed,
                                        std::span<const PixelIndex> pinned = {});

// ---------------------------------------------------------------------------
// Tenants and traffic

struct Hotspot {
  Point center;
  double sigma_m = 1.0;
  double peak_mbps = 0.0;  // per-pixel demand at the center

  friend bool operator==(const Hotspot&, const Hotspot&) = default;
};

/// Busy-hour spatial demand of a tenant: Gaussian hotspots over a uniform
/// per-pixel floor.
struct SpatialModel {
  double floor_mbps = 0.0;
  std::vector<Hotspot> hotspots;

  friend bool operator==(const SpatialModel&, const SpatialModel&) = default;
};

struct TenantProfile {
  std::string id;
  double contracted_capacity_mbps = 0.0;
  // Cyclic per-step weights with peak 1; step t uses entry t % size().
  std::vector<double> temporal_profile{1.0};
  // Absent when the tenant's spatial distribution is unknown.
  std::optional<SpatialModel> spatial;

  double weight_at(TimeIndex t) const;

  friend bool operator==(const TenantProfile&, const TenantProfile&) = default;
};

/// Per-pixel demand raster of a spatial model (Mbps per pixel).
std::vector<double> rasterize(const GridSpec& grid, const SpatialModel& model);

/// Dense d_{u,m}^(t) over all pixels, per (tenant, time step).
class TrafficMap {
 public:
  TrafficMap(std::size_t pixel_count, std::size_t horizon);

  /// `per_step` must hold `horizon` rasters of `pixel_count` non-negative
  /// values. Returns the tenant's slot.
  std::size_t add_tenant(std::string id, std::vector<std::vector<double>> per_step);

  std::size_t pixel_count() const { return pixel_count_; }
  std::size_t horizon() const { return horizon_; }
  std::size_t tenant_count() const { return ids_.size(); }
  const std::string& tenant_id(std::size_t slot) const { return ids_.at(slot); }
  std::optional<std::size_t> find(const std::string& id) const;

  std::span<const double> demand(std::size_t tenant, TimeIndex t) const;

 private:
  std::size_t pixel_count_;
  std::size_t horizon_;
  std::vector<std::string> ids_;
  std::vector<std::vector<std::vector<double>>> values_;  // [tenant][t][u]
};

/// Builds the map for the given tenants: busy-hour raster scaled by the
/// temporal weight at each step. Tenants without a spatial model are skipped.
TrafficMap build_traffic_map(const GridSpec& grid, std::span<const TenantProfile> tenants,
                             std::size_t horizon);

// ---------------------------------------------------------------------------
// Serving map and demand aggregation

/// Pixel -> serving cell assignment. Cells are addressed either by id or by
/// slot (position in the NetworkState the map was derived from).
class ServingMap {
 public:
  ServingMap() = default;
  ServingMap(std::vector<CellId> cell_ids, std::vector<std::uint32_t> slot_of_pixel);

  std::size_t pixel_count() const { return slot_of_pixel_.size(); }
  const std::vector<CellId>& cell_ids() const { return cell_ids_; }
  std::size_t slot_of(PixelIndex u) const { return slot_of_pixel_[u]; }
  CellId cell_of(PixelIndex u) const { return cell_ids_[slot_of_pixel_[u]]; }
  std::optional<std::size_t> slot(CellId id) const;

  std::vector<std::size_t> served_counts() const;
  /// Sums a per-pixel quantity into per-slot totals, accumulating in pixel
  /// order so the result does not depend on how the map was computed.
  std::vector<double> sum_by_cell(std::span<const double> pixel_values) const;

  friend bool operator==(const ServingMap&, const ServingMap&) = default;

 private:
  std::vector<CellId> cell_ids_;
  std::vector<std::uint32_t> slot_of_pixel_;
};

/// d_u^(t): demand of all tenants at pixel u.
double pixel_total_demand(const TrafficMap& maps, PixelIndex u, TimeIndex t);

/// d^(t) for every pixel.
std::vector<double> total_demand(const TrafficMap& maps, TimeIndex t);

/// D_{i,m}^(t): tenant demand carried by `cell`.
double cell_demand(const TrafficMap& maps, const ServingMap& serving, const std::string& tenant,
                   CellId cell, TimeIndex t);

/// D_i^(t) summed over tenants, for one cell.
double aggregate_cell_demand(const TrafficMap& maps, const ServingMap& serving, CellId cell,
                             TimeIndex t);

/// D_i^(t) for every served cell; empty when the serving map has no cells.
std::map<CellId, double> aggregate_cell_demands(const TrafficMap& maps, const ServingMap& serving,
                                                TimeIndex t);

}  // namespace capplan
