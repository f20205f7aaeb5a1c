#pragma once

#include "nodetrix/grouping.hpp"

namespace nodetrix {

// Greedy agglomerative modularity (Clauset-Newman-Moore style) with a
// resolution parameter. Merges the pair with the largest gain while it is
// positive; ties go to the lexicographically smallest pair, so the result
// is fully determined by the graph.
struct SuggestResult {
  std::vector<std::vector<NodeId>> communities;  // size >= 2, members ascending, ordered by first member
  double modularity = 0.0;
};

SuggestResult suggest_communities(const GraphDocument& doc, double resolution = 1.0);

// Grouping file content listing the suggested communities.
nlohmann::json suggestion_json(const GraphDocument& doc, const SuggestResult& r);

}  // namespace nodetrix
