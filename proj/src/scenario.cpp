#include "capplan/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <utility>

#include "capplan/error.hpp"

namespace capplan {

bool SmallCell::has_channel(Channel ch) const {
  return std::binary_search(channels.begin(), channels.end(), ch);
}

const SmallCell* NetworkState::find(CellId id) const {
  auto it = std::lower_bound(cells.begin(), cells.end(), id,
                             [](const SmallCell& c, CellId v) { return c.id < v; });
  return (it != cells.end() && it->id == id) ? &*it : nullptr;
}

SmallCell* NetworkState::find(CellId id) {
  return const_cast<SmallCell*>(std::as_const(*this).find(id));
}

std::optional<std::size_t> NetworkState::slot_of(CellId id) const {
  const SmallCell* c = find(id);
  if (c == nullptr) return std::nullopt;
  return static_cast<std::size_t>(c - cells.data());
}

bool NetworkState::site_occupied(PixelIndex site) const {
  return std::any_of(cells.begin(), cells.end(), [site](const SmallCell& c) { return c.site == site; });
}

CellId NetworkState::next_cell_id() const {
  return cells.empty() ? id_watermark : std::max(id_watermark, cells.back().id + 1);
}

std::size_t NetworkState::total_channels() const {
  std::size_t n = 0;
  for (const auto& c : cells) n += c.channels.size();
  return n;
}

SmallCell& NetworkState::add_cell(SmallCell cell) {
  if (find(cell.id) != nullptr) {
    throw PlanningError("duplicate cell id " + std::to_string(cell.id));
  }
  if (site_occupied(cell.site)) {
    throw PlanningError("site " + std::to_string(cell.site) + " already occupied");
  }
  std::sort(cell.channels.begin(), cell.channels.end());
  id_watermark = std::max(id_watermark, cell.id + 1);
  auto it = std::lower_bound(cells.begin(), cells.end(), cell.id,
                             [](const SmallCell& c, CellId v) { return c.id < v; });
  return *cells.insert(it, std::move(cell));
}

void NetworkState::remove_cell(CellId id) {
  const auto slot = slot_of(id);
  if (!slot) {
    throw PlanningError("unknown cell " + std::to_string(id));
  }
  cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(*slot));
}

bool CandidateSiteSet::contains(PixelIndex u) const {
  return std::binary_search(site_pixels.begin(), site_pixels.end(), u);
}

namespace {

// Uniform integer in [0, n) from raw engine output. Written out instead of
// std::uniform_int_distribution so the draw sequence is identical across
// standard library implementations.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t r = rng();
  while (r >= limit) r = rng();
  return r % n;
}

}  // namespace

CandidateSiteSet select_candidate_sites(const GridSpec& grid, double fraction, std::uint64_t seed,
                                        std::span<const PixelIndex> pinned) {
  if (!(fraction > 0.0) || fraction > 1.0) {
    throw std::invalid_argument("candidate fraction must lie in (0, 1]");
  }
  const std::size_t total = grid.pixel_count();
  const auto wanted = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(total)));
  if (wanted == 0) {
    throw PlanningError("no candidate sites");
  }

  std::vector<PixelIndex> chosen(pinned.begin(), pinned.end());
  std::sort(chosen.begin(), chosen.end());
  chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  for (PixelIndex u : chosen) {
    if (!grid.contains(u)) {
      throw std::invalid_argument("pinned candidate site outside the grid");
    }
  }
  if (chosen.size() > wanted) {
    throw std::invalid_argument("more pinned sites than candidate sites");
  }

  std::vector<PixelIndex> pool;
  pool.reserve(total - chosen.size());
  for (PixelIndex u = 0; u < total; ++u) {
    if (!std::binary_search(chosen.begin(), chosen.end(), u)) pool.push_back(u);
  }

  // Partial Fisher-Yates: the first `draws` entries become a uniform sample.
  std::mt19937_64 rng(seed);
  const std::size_t draws = wanted - chosen.size();
  for (std::size_t k = 0; k < draws; ++k) {
    const auto j = k + static_cast<std::size_t>(uniform_below(rng, pool.size() - k));
    std::swap(pool[k], pool[j]);
  }
  chosen.insert(chosen.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(draws));
  std::sort(chosen.begin(), chosen.end());
  return CandidateSiteSet{std::move(chosen), seed};
}

double TenantProfile::weight_at(TimeIndex t) const {
  if (temporal_profile.empty()) return 1.0;
  return temporal_profile[t % temporal_profile.size()];
}

std::vector<double> rasterize(const GridSpec& grid, const SpatialModel& model) {
  std::vector<double> out(grid.pixel_count(), model.floor_mbps);
  for (PixelIndex u = 0; u < out.size(); ++u) {
    const Point p = grid.position(u);
    for (const auto& h : model.hotspots) {
      const double d = distance(p, h.center);
      out[u] += h.peak_mbps * std::exp(-0.5 * (d * d) / (h.sigma_m * h.sigma_m));
    }
  }
  return out;
}

TrafficMap::TrafficMap(std::size_t pixel_count, std::size_t horizon)
    : pixel_count_(pixel_count), horizon_(horizon) {}

std::size_t TrafficMap::add_tenant(std::string id, std::vector<std::vector<double>> per_step) {
  if (find(id)) {
    throw std::invalid_argument("duplicate tenant '" + id + "' in traffic map");
  }
  if (per_step.size() != horizon_) {
    throw std::invalid_argument("traffic map for '" + id + "' does not cover the horizon");
  }
  for (const auto& raster : per_step) {
    if (raster.size() != pixel_count_) {
      throw std::invalid_argument("traffic raster for '" + id + "' has wrong pixel count");
    }
    if (std::any_of(raster.begin(), raster.end(), [](double v) { return !(v >= 0.0); })) {
      throw std::invalid_argument("negative demand in traffic map for '" + id + "'");
    }
  }
  ids_.push_back(std::move(id));
  values_.push_back(std::move(per_step));
  return ids_.size() - 1;
}

std::optional<std::size_t> TrafficMap::find(const std::string& id) const {
  auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - ids_.begin());
}

std::span<const double> TrafficMap::demand(std::size_t tenant, TimeIndex t) const {
  if (t >= horizon_) {
    throw PlanningError("time out of range");
  }
  return values_.at(tenant)[t];
}

TrafficMap build_traffic_map(const GridSpec& grid, std::span<const TenantProfile> tenants,
                             std::size_t horizon) {
  TrafficMap maps(grid.pixel_count(), horizon);
  for (const auto& tenant : tenants) {
    if (!tenant.spatial) continue;
    const std::vector<double> busy = rasterize(grid, *tenant.spatial);
    std::vector<std::vector<double>> per_step(horizon);
    for (TimeIndex t = 0; t < horizon; ++t) {
      const double w = tenant.weight_at(t);
      per_step[t].resize(busy.size());
      std::transform(busy.begin(), busy.end(), per_step[t].begin(), [w](double v) { return v * w; });
    }
    maps.add_tenant(tenant.id, std::move(per_step));
  }
  return maps;
}

ServingMap::ServingMap(std::vector<CellId> cell_ids, std::vector<std::uint32_t> slot_of_pixel)
    : cell_ids_(std::move(cell_ids)), slot_of_pixel_(std::move(slot_of_pixel)) {}

std::optional<std::size_t> ServingMap::slot(CellId id) const {
  auto it = std::find(cell_ids_.begin(), cell_ids_.end(), id);
  if (it == cell_ids_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - cell_ids_.begin());
}

std::vector<std::size_t> ServingMap::served_counts() const {
  std::vector<std::size_t> counts(cell_ids_.size(), 0);
  for (auto s : slot_of_pixel_) ++counts[s];
  return counts;
}

std::vector<double> ServingMap::sum_by_cell(std::span<const double> pixel_values) const {
  if (pixel_values.size() != slot_of_pixel_.size()) {
    throw std::invalid_argument("pixel raster does not match serving map");
  }
  std::vector<double> sums(cell_ids_.size(), 0.0);
  for (std::size_t u = 0; u < pixel_values.size(); ++u) {
    sums[slot_of_pixel_[u]] += pixel_values[u];
  }
  return sums;
}

double pixel_total_demand(const TrafficMap& maps, PixelIndex u, TimeIndex t) {
  if (t >= maps.horizon()) throw PlanningError("time out of range");
  if (u >= maps.pixel_count()) throw std::out_of_range("pixel index out of range");
  double sum = 0.0;
  for (std::size_t m = 0; m < maps.tenant_count(); ++m) sum += maps.demand(m, t)[u];
  return sum;
}

std::vector<double> total_demand(const TrafficMap& maps, TimeIndex t) {
  if (t >= maps.horizon()) throw PlanningError("time out of range");
  std::vector<double> out(maps.pixel_count(), 0.0);
  for (std::size_t m = 0; m < maps.tenant_count(); ++m) {
    const auto d = maps.demand(m, t);
    for (std::size_t u = 0; u < out.size(); ++u) out[u] += d[u];
  }
  return out;
}

namespace {

std::size_t require_slot(const ServingMap& serving, CellId cell) {
  const auto slot = serving.slot(cell);
  if (!slot) throw PlanningError("unknown cell " + std::to_string(cell));
  return *slot;
}

double sum_served(std::span<const double> values, const ServingMap& serving, std::size_t slot) {
  double sum = 0.0;
  for (std::size_t u = 0; u < values.size(); ++u) {
    if (serving.slot_of(u) == slot) sum += values[u];
  }
  return sum;
}

}  // namespace

double cell_demand(const TrafficMap& maps, const ServingMap& serving, const std::string& tenant,
                   CellId cell, TimeIndex t) {
  const std::size_t slot = require_slot(serving, cell);
  const auto m = maps.find(tenant);
  if (!m) throw PlanningError("unknown tenant '" + tenant + "'");
  return sum_served(maps.demand(*m, t), serving, slot);
}

double aggregate_cell_demand(const TrafficMap& maps, const ServingMap& serving, CellId cell,
                             TimeIndex t) {
  const std::size_t slot = require_slot(serving, cell);
  double sum = 0.0;
  for (std::size_t m = 0; m < maps.tenant_count(); ++m) {
    sum += sum_served(maps.demand(m, t), serving, slot);
  }
  return sum;
}

std::map<CellId, double> aggregate_cell_demands(const TrafficMap& maps, const ServingMap& serving,
                                                TimeIndex t) {
  std::map<CellId, double> out;
  if (serving.cell_ids().empty()) return out;
  std::vector<double> sums(serving.cell_ids().size(), 0.0);
  for (std::size_t m = 0; m < maps.tenant_count(); ++m) {
    const auto per_cell = serving.sum_by_cell(maps.demand(m, t));
    for (std::size_t s = 0; s < sums.size(); ++s) sums[s] += per_cell[s];
  }
  for (std::size_t s = 0; s < sums.size(); ++s) out[serving.cell_ids()[s]] = sums[s];
  return out;
}

}  // namespace capplan
