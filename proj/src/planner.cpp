#include "capplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "capplan/error.hpp"

namespace capplan {

const RequiredBandwidth& LayoutEvaluation::required_of(CellId id) const {
  auto it = std::find(cell_ids.begin(), cell_ids.end(), id);
  if (it == cell_ids.end()) throw PlanningError("unknown cell " + std::to_string(id));
  return required[static_cast<std::size_t>(it - cell_ids.begin())];
}

namespace {

struct TenantView {
  std::vector<double> pixel_demand;
  std::vector<double> cell_specs;  // per slot
};

TenantView derive_tenant(const TenantDemandModel& model, const NetworkState& state,
                         const ServingMap& serving, const GridSpec& grid) {
  TenantView view;
  const std::size_t pixels = grid.pixel_count();
  if (model.level == SpecLevel::pixel) {
    const auto specs =
        translate_pixel_level(model.a_busy_mbps, grid, model.method, model.spec_basis, serving);
    view.cell_specs = specs.cell_values;
    if (!model.observed) {
      view.pixel_demand = specs.pixel_values;
      for (double& d : view.pixel_demand) d *= model.estimate_scale;
    }
  } else {
    std::vector<double> basis;
    if (model.method == SpecMethod::correlated) basis = serving.sum_by_cell(model.spec_basis);
    const auto specs = translate_sc_level(model.a_busy_mbps, state, model.method, basis);
    view.cell_specs = specs.cell_values;
    if (!model.observed) {
      const auto counts = serving.served_counts();
      view.pixel_demand.resize(pixels);
      for (PixelIndex u = 0; u < pixels; ++u) {
        const std::size_t s = serving.slot_of(u);
        view.pixel_demand[u] =
            model.estimate_scale * view.cell_specs[s] / static_cast<double>(counts[s]);
      }
    }
  }
  if (model.observed) {
    if (model.observed->size() != pixels) {
      throw std::invalid_argument("observed demand of '" + model.tenant_id +
                                  "' does not match the grid");
    }
    view.pixel_demand = *model.observed;
  }
  return view;
}

}  // namespace

LayoutEvaluation evaluate_layout(const NetworkState& state, const PlanningContext& ctx) {
  if (state.empty()) throw PlanningError("empty network");
  LayoutEvaluation eval;
  std::vector<TenantView> views;
  auto weights = [&](const ServingMap& serving) {
    std::vector<double> total(ctx.grid.pixel_count(), 0.0);
    for (const auto& model : ctx.tenants) {
      views.push_back(derive_tenant(model, state, serving, ctx.grid));
      const auto& d = views.back().pixel_demand;
      for (std::size_t u = 0; u < total.size(); ++u) total[u] += d[u];
    }
    eval.pixel_demand = total;
    return total;
  };
  eval.radio = evaluate_radio(state, ctx.grid, ctx.radio, weights, ctx.path_loss);

  const std::size_t n = state.size();
  for (const auto& c : state.cells) eval.cell_ids.push_back(c.id);
  for (auto& view : views) {
    eval.tenant_demand.push_back(eval.radio.serving.sum_by_cell(view.pixel_demand));
    eval.tenant_specs.push_back(std::move(view.cell_specs));
  }
  const std::size_t m = views.size();
  std::vector<double> demands(m);
  std::vector<double> specs(m);
  eval.required.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t k = 0; k < m; ++k) {
      demands[k] = eval.tenant_demand[k][s];
      specs[k] = eval.tenant_specs[k][s];
    }
    eval.required.push_back(required_bandwidth(demands, specs, eval.radio.avg_se[s]));
  }
  return eval;
}

RequiredTotal total_required(const LayoutEvaluation& eval) {
  RequiredTotal total;
  for (const auto& r : eval.required) {
    if (r.is_unservable()) {
      ++total.unservable;
    } else {
      total.mhz += r.mhz();
    }
  }
  return total;
}

double step4_threshold_mhz(std::size_t deployed_cells, const PlannerParams& params,
                           double channel_bandwidth_mhz) {
  const auto k = static_cast<double>(params.k_max);
  if (params.step4 == Step4Threshold::kmax) return channel_bandwidth_mhz * k;
  return channel_bandwidth_mhz * static_cast<double>(deployed_cells) /
         (static_cast<double>(params.n_max_cells) / k);
}

namespace {

// Distance from `origin` to the nearest cell (other than `skip`) holding `ch`.
double nearest_holder(const NetworkState& state, Point origin, CellId skip, Channel ch,
                      const GridSpec& grid) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : state.cells) {
    if (c.id == skip || !c.has_channel(ch)) continue;
    best = std::min(best, distance(origin, grid.position(c.site)));
  }
  return best;
}

Channel pick_channel(const NetworkState& state, Point origin, CellId self,
                     const SmallCell* held, const GridSpec& grid, int num_channels) {
  Channel best = -1;
  double best_d = -1.0;
  for (Channel ch = 0; ch < num_channels; ++ch) {
    if (held != nullptr && held->has_channel(ch)) continue;
    const double d = nearest_holder(state, origin, self, ch, grid);
    if (d > best_d) {
      best_d = d;
      best = ch;
    }
  }
  if (best < 0) throw PlanningError("channel-saturated");
  return best;
}

}  // namespace

Channel select_channel(const NetworkState& state, CellId cell, const GridSpec& grid,
                       int num_channels) {
  const SmallCell* c = state.find(cell);
  if (c == nullptr) throw PlanningError("unknown cell " + std::to_string(cell));
  return pick_channel(state, grid.position(c->site), cell, c, grid, num_channels);
}

Channel select_channel_for_site(const NetworkState& state, PixelIndex site, const GridSpec& grid,
                                int num_channels) {
  return pick_channel(state, grid.position(site), std::numeric_limits<CellId>::min(), nullptr,
                      grid, num_channels);
}

SiteChoice select_site(const NetworkState& state, const PlanningContext& ctx) {
  std::optional<SiteChoice> best;
  RequiredTotal best_total;
  for (PixelIndex site : ctx.candidates.site_pixels) {
    if (state.site_occupied(site)) continue;
    const Channel ch = select_channel_for_site(state, site, ctx.grid, ctx.radio.num_channels);
    NetworkState layout = state;
    layout.add_cell(SmallCell{layout.next_cell_id(), site, {ch}, ctx.radio.power_max_dbm, false});
    apply_configured_powers(layout, ctx.grid, ctx.radio);
    LayoutEvaluation eval = evaluate_layout(layout, ctx);
    const RequiredTotal total = total_required(eval);
    if (!best || total < best_total) {
      best_total = total;
      best = SiteChoice{site, ch, CandidateSolution{std::move(layout), std::move(eval)}};
    }
  }
  if (!best) throw PlanningError("site-saturated");
  return std::move(*best);
}

namespace {

class Planner {
 public:
  Planner(const NetworkState& initial, const PlanningContext& ctx, int invocation)
      : ctx_(ctx), invocation_(invocation), state_(initial) {
    apply_configured_powers(state_, ctx_.grid, ctx_.radio);
    eval_ = evaluate_layout(state_, ctx_);
  }

  void add_channels() {
    const double b = ctx_.radio.channel_bandwidth_mhz;
    for (;;) {
      std::optional<std::size_t> pick;
      double pick_excess = 0.0;
      for (std::size_t s = 0; s < state_.size(); ++s) {
        const SmallCell& c = state_.cells[s];
        if (c.channels.size() >= ctx_.params.k_max ||
            c.channels.size() >= static_cast<std::size_t>(ctx_.radio.num_channels)) {
          continue;
        }
        const double bar = ctx_.params.alpha * static_cast<double>(c.channels.size()) * b;
        if (!eval_.required[s].exceeds(bar)) continue;
        const double excess = eval_.required[s].value_or_inf() - bar;
        if (!pick || excess > pick_excess) {
          pick = s;
          pick_excess = excess;
        }
      }
      if (!pick) return;
      const CellId id = state_.cells[*pick].id;
      const Channel ch = select_channel(state_, id, ctx_.grid, ctx_.radio.num_channels);
      commit(AddChannel{id, ch}, 2);
    }
  }

  void add_cells() {
    for (;;) {
      if (state_.size() >= ctx_.params.n_max_cells) return;
      const double bar =
          step4_threshold_mhz(state_.size(), ctx_.params, ctx_.radio.channel_bandwidth_mhz);
      const bool needed = std::any_of(eval_.required.begin(), eval_.required.end(),
                                      [bar](const RequiredBandwidth& r) { return r.exceeds(bar); });
      if (!needed) return;
      const bool free_site =
          std::any_of(ctx_.candidates.site_pixels.begin(), ctx_.candidates.site_pixels.end(),
                      [this](PixelIndex u) { return !state_.site_occupied(u); });
      if (!free_site) {
        site_saturated_ = true;
        return;
      }
      SiteChoice choice = select_site(state_, ctx_);
      const CellId id = choice.solution.layout.next_cell_id() - 1;
      raw_.push_back({AddCell{id, choice.site, choice.channel}, invocation_, 5});
      state_ = std::move(choice.solution.layout);
      eval_ = std::move(choice.solution.evaluation);
    }
  }

  void remove_channels() {
    const double b = ctx_.radio.channel_bandwidth_mhz;
    for (;;) {
      std::optional<std::size_t> pick;
      for (std::size_t s = 0; s < state_.size(); ++s) {
        const SmallCell& c = state_.cells[s];
        if (c.channels.size() <= 1) continue;
        const double bar = ctx_.params.beta * static_cast<double>(c.channels.size() - 1) * b;
        if (!eval_.required[s].below(bar)) continue;
        if (!pick || eval_.required[s].mhz() < eval_.required[*pick].mhz()) pick = s;
      }
      if (!pick) return;
      const SmallCell& c = state_.cells[*pick];
      const Point origin = ctx_.grid.position(c.site);
      Channel drop = c.channels.front();
      double drop_d = std::numeric_limits<double>::infinity();
      bool first = true;
      for (Channel ch : c.channels) {
        const double d = nearest_holder(state_, origin, c.id, ch, ctx_.grid);
        if (first || d < drop_d) {
          drop = ch;
          drop_d = d;
          first = false;
        }
      }
      commit(RemoveChannel{c.id, drop}, 8);
    }
  }

  void remove_cells() {
    const double bar = ctx_.params.gamma * ctx_.radio.channel_bandwidth_mhz;
    for (;;) {
      if (state_.size() <= 1) return;
      std::optional<std::size_t> pick;
      for (std::size_t s = 0; s < state_.size(); ++s) {
        if (!eval_.required[s].below(bar)) continue;
        if (!pick || eval_.required[s].mhz() < eval_.required[*pick].mhz()) pick = s;
      }
      if (!pick) return;
      commit(RemoveCell{state_.cells[*pick].id}, 11);
    }
  }

  PlanResult finish() && {
    PlanResult out;
    out.compressed = compress_ledger(raw_);
    out.raw = std::move(raw_);
    out.state = std::move(state_);
    out.site_saturated = site_saturated_;
    out.evaluation = std::move(eval_);
    return out;
  }

 private:
  void commit(const ActionKind& action, int step) {
    apply_action(state_, action);
    apply_configured_powers(state_, ctx_.grid, ctx_.radio);
    eval_ = evaluate_layout(state_, ctx_);
    raw_.push_back({action, invocation_, step});
  }

  const PlanningContext& ctx_;
  int invocation_;
  NetworkState state_;
  LayoutEvaluation eval_;
  ActionLedger raw_;
  bool site_saturated_ = false;
};

}  // namespace

PlanResult plan(const NetworkState& initial, const PlanningContext& ctx, int invocation) {
  if (initial.empty()) throw PlanningError("empty network");
  Planner planner(initial, ctx, invocation);
  planner.add_channels();
  planner.add_cells();
  planner.remove_channels();
  planner.remove_cells();
  if (ctx.params.closing_channel_pass) planner.add_channels();
  return std::move(planner).finish();
}

}  // namespace capplan
