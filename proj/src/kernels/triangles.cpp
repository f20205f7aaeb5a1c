#include <algorithm>
#include <set>

#include "nodetrix/kernels.hpp"

namespace nodetrix::kernels {

namespace serial {

// Node iterator with set lookups; each triangle at u is seen twice.
std::vector<std::uint64_t> triangles_per_node(const Adjacency& adj) {
  std::vector<std::uint64_t> out(adj.size(), 0);
  for (std::size_t u = 0; u < adj.size(); ++u) {
    std::uint64_t seen = 0;
    for (std::uint32_t v : adj[u]) {
      const std::set<std::uint32_t> nv(adj[v].begin(), adj[v].end());
      for (std::uint32_t w : adj[u])
        if (w != v && nv.contains(w)) ++seen;
    }
    out[u] = seen / 2;
  }
  return out;
}

}  // namespace serial

namespace parallel {

// Sorted-merge intersection of N(u) and N(v) for every neighbour v.
std::vector<std::uint64_t> triangles_per_node(const Adjacency& adj) {
  const auto n = static_cast<std::ptrdiff_t>(adj.size());
  std::vector<std::uint64_t> out(adj.size(), 0);

#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t u = 0; u < n; ++u) {
    const auto& nu = adj[u];
    std::uint64_t seen = 0;
    for (std::uint32_t v : nu) {
      const auto& nv = adj[v];
      auto a = nu.begin();
      auto b = nv.begin();
      while (a != nu.end() && b != nv.end()) {
        if (*a < *b) {
          ++a;
        } else if (*b < *a) {
          ++b;
        } else {
          ++seen;
          ++a;
          ++b;
        }
      }
    }
    out[u] = seen / 2;
  }
  return out;
}

}  // namespace parallel
}  // namespace nodetrix::kernels
