#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nodetrix/grouping.hpp"

namespace nodetrix {

enum class Pattern { cross, block, mixed, unclassified };
std::string_view to_string(Pattern p);

struct PatternThresholds {
  double hub = 0.9;     // dominance ratio needed for cross or mixed
  double sparse = 0.15; // residual density at or below which a hub group is a cross
  double dense = 0.6;   // density at or above which a group is a block

  void validate() const;
};

struct PatternReport {
  GroupId group{};
  Pattern pattern = Pattern::unclassified;
  std::optional<NodeId> dominant;
  double density = 0.0;
  double dominance = 0.0;  // max internal degree / (k-1)
  double residual_density = 0.0;  // density once the dominant member is removed
  std::string reason;
};

// Internal structure of `members`: distinct undirected pairs, self loops ignored.
PatternReport classify_members(const GraphDocument& doc, std::span<const NodeId> members,
                               const PatternThresholds& th = {});
PatternReport classify(const GraphDocument& doc, const GroupingState& s, GroupId g, const PatternThresholds& th = {});
// Every group of three or more members.
std::vector<PatternReport> classify_all(const GraphDocument& doc, const GroupingState& s,
                                        const PatternThresholds& th = {});

nlohmann::json to_json(const PatternReport& r, const GraphDocument& doc);
std::string report_table(const std::vector<PatternReport>& reports, const GraphDocument& doc, const GroupingState& s);

}  // namespace nodetrix
