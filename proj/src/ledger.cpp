#include "capplan/ledger.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include <fmt/format.h>

#include "capplan/error.hpp"

namespace capplan {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

SmallCell& require_cell(NetworkState& state, CellId id) {
  SmallCell* c = state.find(id);
  if (c == nullptr) throw PlanningError("unknown cell " + std::to_string(id));
  return *c;
}

void add_new_cell(NetworkState& state, CellId id, PixelIndex site, Channel channel) {
  SmallCell cell;
  cell.id = id;
  cell.site = site;
  cell.channels = {channel};
  state.add_cell(std::move(cell));
}

}  // namespace

void apply_action(NetworkState& state, const ActionKind& action) {
  std::visit(overloaded{
                 [&](const AddChannel& a) {
                   SmallCell& c = require_cell(state, a.cell);
                   if (c.has_channel(a.channel)) throw PlanningError("channel already allocated");
                   c.channels.insert(std::lower_bound(c.channels.begin(), c.channels.end(), a.channel),
                                     a.channel);
                 },
                 [&](const RemoveChannel& a) {
                   SmallCell& c = require_cell(state, a.cell);
                   auto it = std::lower_bound(c.channels.begin(), c.channels.end(), a.channel);
                   if (it == c.channels.end() || *it != a.channel) {
                     throw PlanningError("channel not allocated");
                   }
                   c.channels.erase(it);
                 },
                 [&](const AddCell& a) { add_new_cell(state, a.cell, a.site, a.channel); },
                 [&](const RemoveCell& a) { state.remove_cell(a.cell); },
                 [&](const Relocate& a) {
                   state.remove_cell(a.from);
                   add_new_cell(state, a.to, a.site, a.channel);
                 },
             },
             action);
}

NetworkState replay(NetworkState initial, const ActionLedger& ledger, const GridSpec& grid,
                    const PropagationParams& params) {
  for (const auto& a : ledger) apply_action(initial, a.kind);
  apply_configured_powers(initial, grid, params);
  return initial;
}

ActionLedger compress_ledger(const ActionLedger& ledger) {
  // Work on primitive actions only.
  ActionLedger raw;
  for (const auto& a : ledger) {
    if (const auto* r = std::get_if<Relocate>(&a.kind)) {
      raw.push_back({RemoveCell{r->from}, a.invocation, a.step});
      raw.push_back({AddCell{r->to, r->site, r->channel}, a.invocation, a.step});
    } else {
      raw.push_back(a);
    }
  }

  std::set<CellId> removed;
  std::set<CellId> added;
  for (const auto& a : raw) {
    if (const auto* r = std::get_if<RemoveCell>(&a.kind)) removed.insert(r->cell);
    if (const auto* c = std::get_if<AddCell>(&a.kind)) added.insert(c->cell);
  }

  std::vector<bool> keep(raw.size(), true);
  std::map<std::pair<CellId, Channel>, std::vector<std::size_t>> channel_actions;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    std::visit(overloaded{
                   [&](const AddChannel& a) {
                     if (removed.count(a.cell)) keep[i] = false;
                     else channel_actions[{a.cell, a.channel}].push_back(i);
                   },
                   [&](const RemoveChannel& a) {
                     if (removed.count(a.cell)) keep[i] = false;
                     else channel_actions[{a.cell, a.channel}].push_back(i);
                   },
                   [&](const AddCell& a) {
                     if (removed.count(a.cell)) keep[i] = false;
                   },
                   [&](const RemoveCell& a) {
                     if (added.count(a.cell)) keep[i] = false;
                   },
                   [](const Relocate&) {},
               },
               raw[i].kind);
  }
  // Actions on one (cell, channel) alternate between add and remove, so an
  // even run cancels completely and an odd run reduces to its last action.
  for (const auto& [key, idx] : channel_actions) {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const bool last = k + 1 == idx.size();
      keep[idx[k]] = last && idx.size() % 2 == 1;
    }
  }

  // Pair surviving removals with additions of the same invocation.
  std::map<int, std::vector<std::size_t>> removes, adds;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!keep[i]) continue;
    if (std::holds_alternative<RemoveCell>(raw[i].kind)) removes[raw[i].invocation].push_back(i);
    if (std::holds_alternative<AddCell>(raw[i].kind)) adds[raw[i].invocation].push_back(i);
  }
  std::map<std::size_t, PlanningAction> replaced;
  for (const auto& [inv, rem] : removes) {
    const auto it = adds.find(inv);
    if (it == adds.end()) continue;
    const auto& add = it->second;
    for (std::size_t k = 0; k < std::min(rem.size(), add.size()); ++k) {
      const auto& r = std::get<RemoveCell>(raw[rem[k]].kind);
      const auto& a = std::get<AddCell>(raw[add[k]].kind);
      const std::size_t at = std::min(rem[k], add[k]);
      replaced[at] = {Relocate{r.cell, a.cell, a.site, a.channel}, inv, raw[add[k]].step};
      keep[rem[k]] = false;
      keep[add[k]] = false;
    }
  }

  ActionLedger out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (auto it = replaced.find(i); it != replaced.end()) out.push_back(it->second);
    else if (keep[i]) out.push_back(raw[i]);
  }
  return out;
}

std::string action_name(const ActionKind& action) {
  return std::visit(overloaded{
                        [](const AddChannel&) { return std::string("add_channel"); },
                        [](const RemoveChannel&) { return std::string("remove_channel"); },
                        [](const AddCell&) { return std::string("add_cell"); },
                        [](const RemoveCell&) { return std::string("remove_cell"); },
                        [](const Relocate&) { return std::string("relocate"); },
                    },
                    action);
}

std::string describe(const PlanningAction& action) {
  const std::string body = std::visit(
      overloaded{
          [](const AddChannel& a) { return fmt::format("add channel {} to cell {}", a.channel, a.cell); },
          [](const RemoveChannel& a) {
            return fmt::format("remove channel {} from cell {}", a.channel, a.cell);
          },
          [](const AddCell& a) {
            return fmt::format("deploy cell {} at pixel {} on channel {}", a.cell, a.site, a.channel);
          },
          [](const RemoveCell& a) { return fmt::format("remove cell {}", a.cell); },
          [](const Relocate& a) {
            return fmt::format("relocate cell {} to pixel {} as cell {} on channel {}", a.from, a.site,
                               a.to, a.channel);
          },
      },
      action.kind);
  return fmt::format("[plan {} step {}] {}", action.invocation, action.step, body);
}

}  // namespace capplan
