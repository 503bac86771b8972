#pragma once

#include <string>
#include <variant>
#include <vector>

#include "capplan/radio.hpp"
#include "capplan/scenario.hpp"

namespace capplan {

struct AddChannel {
  CellId cell;
  Channel channel;
  friend bool operator==(const AddChannel&, const AddChannel&) = default;
};
struct RemoveChannel {
  CellId cell;
  Channel channel;
  friend bool operator==(const RemoveChannel&, const RemoveChannel&) = default;
};
struct AddCell {
  CellId cell;  // id assigned to the new cell
  PixelIndex site;
  Channel channel;
  friend bool operator==(const AddCell&, const AddCell&) = default;
};
struct RemoveCell {
  CellId cell;
  friend bool operator==(const RemoveCell&, const RemoveCell&) = default;
};
/// Removal of `from` and deployment of `to` at `site`, produced only by
/// ledger compression.
struct Relocate {
  CellId from;
  CellId to;
  PixelIndex site;
  Channel channel;
  friend bool operator==(const Relocate&, const Relocate&) = default;
};

using ActionKind = std::variant<AddChannel, RemoveChannel, AddCell, RemoveCell, Relocate>;

struct PlanningAction {
  ActionKind kind;
  int invocation = 0;  // planner invocation that produced it
  // Planner loop that produced it: 2 add channel, 5 add cell, 8 remove
  // channel, 11 remove cell. Relocations keep the step of their addition.
  int step = 0;

  friend bool operator==(const PlanningAction&, const PlanningAction&) = default;
};

using ActionLedger = std::vector<PlanningAction>;

/// Applies one action. Powers are not touched.
void apply_action(NetworkState& state, const ActionKind& action);

/// Applies every action in order, then re-runs power auto-configuration.
NetworkState replay(NetworkState initial, const ActionLedger& ledger, const GridSpec& grid,
                    const PropagationParams& params);

/// Drops actions whose effect is undone later in the ledger and merges cell
/// removals with cell additions of the same invocation into relocations. The
/// replayed final state is unchanged.
ActionLedger compress_ledger(const ActionLedger& ledger);

std::string action_name(const ActionKind& action);
std::string describe(const PlanningAction& action);

}  // namespace capplan
