#include <cmath>

#include "nodetrix/kernels.hpp"

namespace nodetrix::kernels {

LinLogSystem::LinLogSystem(std::size_t point_count, std::vector<WeightedEdge> edges)
    : points_(point_count), edges_(std::move(edges)), offsets_(point_count + 1, 0) {
  for (const auto& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < point_count; ++i) offsets_[i + 1] += offsets_[i];
  neighbors_.resize(offsets_.back());
  weights_.resize(offsets_.back());
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    neighbors_[fill[e.u]] = e.v;
    weights_[fill[e.u]++] = e.weight;
    neighbors_[fill[e.v]] = e.u;
    weights_[fill[e.v]++] = e.weight;
  }
}

namespace serial {

// Pairwise reference: attraction over the edge list, repulsion over u < v.
EnergyGradient linlog(const LinLogSystem& sys, std::span<const Vec2> pos, double attraction, double repulsion) {
  const std::size_t n = sys.point_count();
  EnergyGradient out{0.0, std::vector<Vec2>(n)};
  for (const auto& e : sys.edges()) {
    const Vec2 d = pos[e.u] - pos[e.v];
    const double len = norm(d);
    out.energy += attraction * e.weight * len;
    const Vec2 g = (attraction * e.weight / len) * d;
    out.gradient[e.u] = out.gradient[e.u] + g;
    out.gradient[e.v] = out.gradient[e.v] - g;
  }
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const Vec2 d = pos[u] - pos[v];
      const double sq = dot(d, d);
      out.energy -= repulsion * 0.5 * std::log(sq);
      const Vec2 g = (-repulsion / sq) * d;
      out.gradient[u] = out.gradient[u] + g;
      out.gradient[v] = out.gradient[v] - g;
    }
  }
  return out;
}

double linlog_energy(const LinLogSystem& sys, std::span<const Vec2> pos, double attraction, double repulsion) {
  double e = 0.0;
  for (const auto& ed : sys.edges()) e += attraction * ed.weight * norm(pos[ed.u] - pos[ed.v]);
  const std::size_t n = sys.point_count();
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) e -= repulsion * std::log(norm(pos[u] - pos[v]));
  return e;
}

}  // namespace serial
}  // namespace nodetrix::kernels
