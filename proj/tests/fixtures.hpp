#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "capplan/planner.hpp"
#include "capplan/radio.hpp"
#include "capplan/scenario.hpp"

namespace fixture {

using namespace capplan;

// Small self-contained planning problem; owns everything the context points to.
struct Instance {
  GridSpec grid{60.0, 60.0, 3.0};
  CandidateSiteSet candidates;
  PropagationParams radio;
  PlannerParams params;
  std::vector<TenantDemandModel> tenants;
  NetworkState initial;

  PlanningContext context() const {
    return PlanningContext{grid, candidates, radio, params, tenants, nullptr};
  }
};

inline std::unique_ptr<Instance> random_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto inst = std::make_unique<Instance>();

  inst->params.n_max_cells = 3 + rng() % 4;
  inst->params.k_max = 1 + rng() % 3;
  inst->params.gamma = 0.05 + 0.2 * unit(rng);
  inst->params.step4 = (rng() % 2) ? Step4Threshold::printed : Step4Threshold::kmax;
  inst->params.closing_channel_pass = rng() % 2;
  inst->candidates = select_candidate_sites(inst->grid, 0.04 + 0.04 * unit(rng), seed);

  const std::size_t cells = 1 + rng() % 3;
  for (std::size_t i = 0; i < cells; ++i) {
    const PixelIndex site = inst->candidates.site_pixels[i * 3 % inst->candidates.size()];
    if (inst->initial.site_occupied(site)) continue;
    std::vector<Channel> chs{static_cast<Channel>(rng() % 4)};
    inst->initial.add_cell(SmallCell{inst->initial.next_cell_id(), site, chs, 24.0, false});
  }
  apply_configured_powers(inst->initial, inst->grid, inst->radio);

  const std::size_t tenants = 1 + rng() % 2;
  for (std::size_t m = 0; m < tenants; ++m) {
    SpatialModel model;
    model.floor_mbps = 0.01 * unit(rng);
    for (int h = 0; h < 2; ++h) {
      model.hotspots.push_back(Hotspot{{60.0 * unit(rng), 60.0 * unit(rng)},
                                       4.0 + 10.0 * unit(rng), 2.0 * unit(rng)});
    }
    TenantDemandModel t;
    t.tenant_id = "t" + std::to_string(m);
    t.level = (rng() % 2) ? SpecLevel::pixel : SpecLevel::sc;
    t.method = (rng() % 2) ? SpecMethod::correlated : SpecMethod::uniform;
    t.spec_basis = rasterize(inst->grid, model);
    if (rng() % 2) {
      t.observed = t.spec_basis;
      for (double& d : *t.observed) d *= 0.5 + unit(rng);
    }
    double total = 0.0;
    for (double d : t.spec_basis) total += d;
    t.a_busy_mbps = total * (0.5 + 1.5 * unit(rng));
    inst->tenants.push_back(std::move(t));
  }
  return inst;
}

}  // namespace fixture
