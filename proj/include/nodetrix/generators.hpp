#pragma once

#include <cstdint>

#include "nodetrix/graph.hpp"

namespace nodetrix {

// Co-authorship-like small-world network: authors live in labs, papers are
// written by small teams drawn mostly from one lab around a few senior
// authors, and every paper connects its authors pairwise. The result is
// sparse, locally dense and split into many components.
struct CoauthorshipParams {
  std::size_t authors = 1104;
  std::size_t papers = 1250;
  std::size_t labs = 180;
  double cross_lab_probability = 0.01;
  double repeat_probability = 0.0;  // chance a paper repeats an earlier team (parallel edges)
  std::uint64_t seed = 2004;
};

GraphDocument generate_coauthorship(const CoauthorshipParams& params);

// G(n, p) with nodes named "0".."n-1".
GraphDocument generate_random_graph(std::size_t nodes, double edge_probability, std::uint64_t seed);

}  // namespace nodetrix
