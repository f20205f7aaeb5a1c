#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "nodetrix/kernels.hpp"

namespace nodetrix::kernels {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace parallel {

// Row-wise: each point sums its full interaction row (both triangle halves),
// so rows are independent and no atomics are needed. Row energies are
// reduced serially afterwards to keep the sum order fixed.
EnergyGradient linlog(const LinLogSystem& sys, std::span<const Vec2> pos, double attraction, double repulsion) {
  const auto n = static_cast<std::ptrdiff_t>(sys.point_count());
  const auto offsets = sys.offsets();
  const auto neighbors = sys.neighbors();
  const auto weights = sys.weights();
  EnergyGradient out{0.0, std::vector<Vec2>(static_cast<std::size_t>(n))};
  std::vector<double> row_energy(static_cast<std::size_t>(n), 0.0);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const Vec2 p = pos[i];
    double e = 0.0;
    double gx = 0.0;
    double gy = 0.0;
    for (std::uint32_t k = offsets[i]; k < offsets[i + 1]; ++k) {
      const Vec2 d = p - pos[neighbors[k]];
      const double len = std::sqrt(d.x * d.x + d.y * d.y);
      const double w = attraction * weights[k];
      e += w * len;
      gx += w * d.x / len;
      gy += w * d.y / len;
    }
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dx = p.x - pos[j].x;
      const double dy = p.y - pos[j].y;
      const double sq = dx * dx + dy * dy;
      e -= repulsion * 0.5 * std::log(sq);
      gx -= repulsion * dx / sq;
      gy -= repulsion * dy / sq;
    }
    row_energy[i] = e;
    out.gradient[i] = {gx, gy};
  }

  double total = 0.0;
  for (double e : row_energy) total += e;
  out.energy = 0.5 * total;
  return out;
}

double linlog_energy(const LinLogSystem& sys, std::span<const Vec2> pos, double attraction, double repulsion) {
  const auto n = static_cast<std::ptrdiff_t>(sys.point_count());
  const auto offsets = sys.offsets();
  const auto neighbors = sys.neighbors();
  const auto weights = sys.weights();
  std::vector<double> row_energy(static_cast<std::size_t>(n), 0.0);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const Vec2 p = pos[i];
    double e = 0.0;
    for (std::uint32_t k = offsets[i]; k < offsets[i + 1]; ++k) {
      const Vec2 d = p - pos[neighbors[k]];
      e += attraction * weights[k] * std::sqrt(d.x * d.x + d.y * d.y);
    }
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dx = p.x - pos[j].x;
      const double dy = p.y - pos[j].y;
      e -= repulsion * 0.5 * std::log(dx * dx + dy * dy);
    }
    row_energy[i] = e;
  }

  double total = 0.0;
  for (double e : row_energy) total += e;
  return 0.5 * total;
}

}  // namespace parallel
}  // namespace nodetrix::kernels
