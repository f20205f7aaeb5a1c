#include "nodetrix/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nodetrix/kernels.hpp"
#include "nodetrix/util.hpp"

namespace nodetrix {

std::size_t degree(const GraphDocument& g, NodeId n) {
  if (!g.contains(n)) throw InputError("unknown node id " + std::to_string(index(n)));
  return g.incident(n).size();
}

std::vector<std::vector<NodeId>> connected_components(const GraphDocument& g) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Edge& e : g.edges()) {
    const std::size_t a = find(index(e.source));
    const std::size_t b = find(index(e.target));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::vector<NodeId>> out;
  std::vector<std::size_t> slot(n, std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (slot[r] == std::numeric_limits<std::size_t>::max()) {
      slot[r] = out.size();
      out.emplace_back();
    }
    out[slot[r]].push_back(node_id(i));
  }
  return out;
}

std::size_t edges_within(const GraphDocument& g, std::span<const NodeId> nodes) {
  std::vector<char> in(g.node_count(), 0);
  for (NodeId n : nodes) in.at(index(n)) = 1;
  std::size_t count = 0;
  for (const Edge& e : g.edges())
    if (in[index(e.source)] && in[index(e.target)]) ++count;
  return count;
}

std::vector<std::vector<std::uint32_t>> simple_adjacency(const GraphDocument& g) {
  std::vector<std::vector<std::uint32_t>> adj(g.node_count());
  for (const Edge& e : g.edges()) {
    if (e.source == e.target) continue;
    adj[index(e.source)].push_back(static_cast<std::uint32_t>(index(e.target)));
    adj[index(e.target)].push_back(static_cast<std::uint32_t>(index(e.source)));
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return adj;
}

double clustering_coefficient(const GraphDocument& g) {
  if (g.node_count() == 0) throw OperationError("undefined metric: clustering coefficient of an empty graph");
  if (g.directed()) throw OperationError("clustering coefficient requires an undirected graph");
  const auto adj = simple_adjacency(g);
  const auto triangles = kernels::parallel::triangles_per_node(adj);
  double sum = 0.0;
  for (std::size_t i = 0; i < adj.size(); ++i) {
    const double k = static_cast<double>(adj[i].size());
    if (adj[i].size() >= 2) sum += static_cast<double>(triangles[i]) / (k * (k - 1.0) / 2.0);
  }
  return sum / static_cast<double>(adj.size());
}

double density(const GraphDocument& g, std::span<const NodeId> nodes) {
  if (nodes.empty()) throw OperationError("density of an empty node subset");
  std::vector<char> in(g.node_count(), 0);
  for (NodeId n : nodes) in.at(index(n)) = 1;
  const double n = static_cast<double>(nodes.size());
  if (nodes.size() < 2) return 0.0;

  // Count distinct joined pairs (ordered pairs for directed graphs).
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const Edge& e : g.edges()) {
    if (e.source == e.target || !in[index(e.source)] || !in[index(e.target)]) continue;
    pairs.emplace_back(index(e.source), index(e.target));
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  const double possible = g.directed() ? n * (n - 1.0) : n * (n - 1.0) / 2.0;
  return static_cast<double>(pairs.size()) / possible;
}

double density(const GraphDocument& g) {
  std::vector<NodeId> all(g.node_count());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = node_id(i);
  return density(g, all);
}

GraphStats compute_stats(const GraphDocument& g) {
  GraphStats s;
  s.nodes = g.node_count();
  s.edges = g.edge_count();
  const auto comps = connected_components(g);
  s.components = comps.size();
  for (const auto& c : comps) {
    if (c.size() > s.largest_component_nodes) {
      s.largest_component_nodes = c.size();
      s.largest_component_edges = edges_within(g, c);
    }
  }
  s.clustering_coefficient = s.nodes == 0 || g.directed() ? std::nan("") : clustering_coefficient(g);
  s.density = s.nodes == 0 ? 0.0 : density(g);
  return s;
}

nlohmann::json to_json(const GraphStats& s) {
  nlohmann::json j;
  j["nodes"] = s.nodes;
  j["edges"] = s.edges;
  j["components"] = s.components;
  j["largest_component"] = {{"nodes", s.largest_component_nodes}, {"edges", s.largest_component_edges}};
  j["clustering_coefficient"] = std::isnan(s.clustering_coefficient) ? nlohmann::json(nullptr)
                                                                     : nlohmann::json(s.clustering_coefficient);
  j["density"] = s.density;
  return j;
}

}  // namespace nodetrix
