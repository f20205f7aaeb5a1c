#pragma once

// Hot loops behind layout and metrics. Every kernel exists twice: a plain
// serial reference kept for testing and benchmarking, and an OpenMP version
// used by the library. The parallel versions accumulate per element and
// reduce in a fixed order, so their results do not depend on thread count.

#include <cstdint>
#include <span>
#include <vector>

#include "nodetrix/util.hpp"

namespace nodetrix::kernels {

struct WeightedEdge {
  std::uint32_t u;
  std::uint32_t v;
  double weight;
};

// LinLog input in two shapes: an edge list (serial reference) and a
// symmetric CSR adjacency (parallel kernel).
class LinLogSystem {
 public:
  LinLogSystem(std::size_t point_count, std::vector<WeightedEdge> edges);

  std::size_t point_count() const noexcept { return points_; }
  std::span<const WeightedEdge> edges() const { return edges_; }
  std::span<const std::uint32_t> offsets() const { return offsets_; }
  std::span<const std::uint32_t> neighbors() const { return neighbors_; }
  std::span<const double> weights() const { return weights_; }

 private:
  std::size_t points_;
  std::vector<WeightedEdge> edges_;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> neighbors_;
  std::vector<double> weights_;
};

struct EnergyGradient {
  double energy = 0.0;
  std::vector<Vec2> gradient;
};

// Sorted, duplicate-free neighbour lists of a simple undirected graph.
using Adjacency = std::vector<std::vector<std::uint32_t>>;

namespace serial {
EnergyGradient linlog(const LinLogSystem& sys, std::span<const Vec2> pos, double attraction, double repulsion);
double linlog_energy(const LinLogSystem& sys, std::span<const Vec2> pos, double attraction, double repulsion);
std::vector<std::uint64_t> triangles_per_node(const Adjacency& adj);
}  // namespace serial

namespace parallel {
EnergyGradient linlog(const LinLogSystem& sys, std::span<const Vec2> pos, double attraction, double repulsion);
double linlog_energy(const LinLogSystem& sys, std::span<const Vec2> pos, double attraction, double repulsion);
std::vector<std::uint64_t> triangles_per_node(const Adjacency& adj);
}  // namespace parallel

int max_threads();

}  // namespace nodetrix::kernels
