#pragma once

#include <span>
#include <vector>

#include "nodetrix/graph.hpp"

namespace nodetrix {

// Incident edge count, parallel edges included.
std::size_t degree(const GraphDocument& g, NodeId n);

// Components ordered by their smallest node; members ascending.
std::vector<std::vector<NodeId>> connected_components(const GraphDocument& g);

// Underlying edges (with multiplicity) whose endpoints both lie in `nodes`.
std::size_t edges_within(const GraphDocument& g, std::span<const NodeId> nodes);

// Mean local clustering over all nodes. Neighbourhoods are taken as sets, so
// parallel edges do not inflate degrees; nodes with fewer than two distinct
// neighbours contribute 0 and still count in the mean. Throws on an empty
// graph and on directed graphs.
double clustering_coefficient(const GraphDocument& g);

// Fraction of node pairs inside `nodes` joined by at least one edge. A
// singleton subset has density 0.
double density(const GraphDocument& g, std::span<const NodeId> nodes);
double density(const GraphDocument& g);

// Distinct-neighbour adjacency of the undirected simple graph underneath.
std::vector<std::vector<std::uint32_t>> simple_adjacency(const GraphDocument& g);

struct GraphStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t components = 0;
  std::size_t largest_component_nodes = 0;
  std::size_t largest_component_edges = 0;
  double clustering_coefficient = 0.0;  // NaN for an empty graph
  double density = 0.0;
};

GraphStats compute_stats(const GraphDocument& g);
nlohmann::json to_json(const GraphStats& s);

}  // namespace nodetrix
