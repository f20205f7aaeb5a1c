#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "nodetrix/grouping.hpp"
#include "nodetrix/kernels.hpp"
#include "nodetrix/util.hpp"

namespace nodetrix {

struct LayoutState {
  std::map<GroupId, Vec2> positions;
  std::set<GroupId> pinned;
  // Half side length of each group's glyph, set from scene sizing.
  std::map<GroupId, double> half_extent;

  Vec2 position(GroupId g) const;
  double half_diagonal(GroupId g) const;

  friend bool operator==(const LayoutState&, const LayoutState&) = default;
};

struct LinLogParams {
  double repulsion = 1.0;
  double attraction = 1.0;
  int max_iterations = 500;
  double initial_step = 0.1;
  double step_decay = 0.5;    // applied when a step would raise the energy
  double step_growth = 1.1;   // applied after an accepted step
  double convergence = 1e-6;  // stop once every free gradient is below this
  double min_step = 1e-14;
  std::uint64_t seed = 1;     // jitter for coincident points
  double jitter = 1e-4;
  int jitter_attempts = 8;

  void validate() const;
};

// Aggregated graph in the dense form the kernels consume; edge weight is the
// number of underlying edges bundled between the two groups.
struct LinLogGraph {
  std::vector<GroupId> groups;  // ascending; point i is groups[i]
  kernels::LinLogSystem system;
};

LinLogGraph build_linlog_graph(const GraphDocument& doc, const GroupingState& s);

// attraction * sum_edges w*|pu - pv| - repulsion * sum_{u<v} ln|pu - pv|.
// Throws OperationError on coincident positions.
double linlog_energy(const LayoutState& layout, const LinLogGraph& g, const LinLogParams& params);
kernels::EnergyGradient linlog_gradient(const LayoutState& layout, const LinLogGraph& g, const LinLogParams& params);

struct RelaxResult {
  LayoutState state;
  std::vector<double> energy_trace;  // energy at every accepted iterate, starting point included
  int iterations = 0;
  int accepted = 0;
  bool converged = false;
};

// Gradient descent with step halving on energy increase. Groups in
// `layout.pinned` or `frozen` never move.
RelaxResult relax(const LayoutState& layout, const LinLogGraph& g, const LinLogParams& params,
                  const std::set<GroupId>& frozen = {});

// Seeded uniform positions in a square of side sqrt(group count).
LayoutState random_layout(const GroupingState& s, std::uint64_t seed);

// Pushes overlapping glyph disks (radius = half diagonal) apart along their
// centre line. Pinned and frozen groups stay put.
LayoutState remove_overlaps(const LayoutState& layout, const std::set<GroupId>& frozen = {}, double margin = 0.05,
                            int passes = 50);

// Positions for groups created by `edit`, without relaxing: merged groups at
// the centroid of their inputs, split members on a circle of radius equal to
// the old glyph's half diagonal, extracted nodes at `drop` or beside their
// old group. Retired groups are dropped.
LayoutState place_after_edit(const LayoutState& layout, const Edit& edit, const GroupingState& after,
                             std::optional<Vec2> drop = std::nullopt);

// place_after_edit, then a short relax and overlap pass in which only the
// created and changed groups may move.
LayoutState incremental_update(const LayoutState& layout, const Edit& edit, const GraphDocument& doc,
                               const GroupingState& after, const LinLogParams& params, int local_iterations = 60,
                               std::optional<Vec2> drop = std::nullopt);

// Sets the position and pins the group.
LayoutState move_group(const LayoutState& layout, GroupId g, Vec2 to);

// Layout file: {"positions":{"<group id>":[x,y]}, "pinned":[ids]}.
nlohmann::json to_json(const LayoutState& layout);
LayoutState load_layout(const nlohmann::json& j);
LayoutState load_layout_file(const std::string& path);
// Throws InputError unless every live group has a position.
void check_layout(const LayoutState& layout, const GroupingState& s);

}  // namespace nodetrix
