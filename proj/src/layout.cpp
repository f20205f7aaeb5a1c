#include "nodetrix/layout.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

namespace nodetrix {

Vec2 LayoutState::position(GroupId g) const {
  auto it = positions.find(g);
  if (it == positions.end()) throw OperationError("group " + std::to_string(value(g)) + " has no position");
  return it->second;
}

double LayoutState::half_diagonal(GroupId g) const {
  auto it = half_extent.find(g);
  return it == half_extent.end() ? 0.0 : it->second * std::numbers::sqrt2;
}

void LinLogParams::validate() const {
  if (!(repulsion > 0.0) || !(attraction > 0.0)) throw OperationError("LinLog weights must be positive");
  if (max_iterations < 0) throw OperationError("max iterations must be non-negative");
  if (!(initial_step > 0.0)) throw OperationError("initial step must be positive");
  if (!(step_decay > 0.0 && step_decay < 1.0)) throw OperationError("step decay must lie in (0,1)");
  if (!(step_growth >= 1.0)) throw OperationError("step growth must be at least 1");
  if (!(convergence > 0.0)) throw OperationError("convergence threshold must be positive");
}

LinLogGraph build_linlog_graph(const GraphDocument& doc, const GroupingState& s) {
  LinLogGraph g{{}, kernels::LinLogSystem(0, {})};
  std::map<GroupId, std::uint32_t> slot;
  for (const auto& [id, members] : s.groups()) {
    slot[id] = static_cast<std::uint32_t>(g.groups.size());
    g.groups.push_back(id);
  }
  std::vector<kernels::WeightedEdge> edges;
  for (const auto& ae : aggregated_edges(doc, s))
    edges.push_back({slot.at(ae.a), slot.at(ae.b), static_cast<double>(ae.underlying.size())});
  g.system = kernels::LinLogSystem(g.groups.size(), std::move(edges));
  return g;
}

namespace {

std::vector<Vec2> gather(const LayoutState& layout, const LinLogGraph& g) {
  std::vector<Vec2> pos;
  pos.reserve(g.groups.size());
  for (GroupId id : g.groups) pos.push_back(layout.position(id));
  return pos;
}

bool has_coincident(std::span<const Vec2> pos) {
  for (std::size_t i = 0; i < pos.size(); ++i)
    for (std::size_t j = i + 1; j < pos.size(); ++j)
      if (pos[i] == pos[j]) return true;
  return false;
}

// Moves free points off any point they coincide with; deterministic in seed.
void separate_coincident(std::vector<Vec2>& pos, const std::vector<char>& free, const LinLogParams& params) {
  Rng rng(params.seed);
  for (int attempt = 0; attempt <= params.jitter_attempts; ++attempt) {
    bool clash = false;
    for (std::size_t i = 0; i < pos.size(); ++i) {
      for (std::size_t j = i + 1; j < pos.size(); ++j) {
        if (!(pos[i] == pos[j])) continue;
        clash = true;
        const std::size_t k = free[j] ? j : free[i] ? i : pos.size();
        if (k == pos.size()) throw OperationError("two pinned groups share a position");
        if (attempt == params.jitter_attempts) break;
        pos[k] = pos[k] + Vec2{rng.uniform(-params.jitter, params.jitter), rng.uniform(-params.jitter, params.jitter)};
      }
    }
    if (!clash) return;
  }
  throw OperationError("coincident positions remain after jitter");
}

}  // namespace

double linlog_energy(const LayoutState& layout, const LinLogGraph& g, const LinLogParams& params) {
  const auto pos = gather(layout, g);
  if (has_coincident(pos)) throw OperationError("LinLog energy is undefined for coincident positions");
  return kernels::parallel::linlog_energy(g.system, pos, params.attraction, params.repulsion);
}

kernels::EnergyGradient linlog_gradient(const LayoutState& layout, const LinLogGraph& g, const LinLogParams& params) {
  const auto pos = gather(layout, g);
  if (has_coincident(pos)) throw OperationError("LinLog energy is undefined for coincident positions");
  return kernels::parallel::linlog(g.system, pos, params.attraction, params.repulsion);
}

RelaxResult relax(const LayoutState& layout, const LinLogGraph& g, const LinLogParams& params,
                  const std::set<GroupId>& frozen) {
  params.validate();
  RelaxResult r{layout, {}, 0, 0, false};
  const std::size_t n = g.groups.size();
  std::vector<char> free(n, 0);
  bool any_free = false;
  for (std::size_t i = 0; i < n; ++i) {
    free[i] = !layout.pinned.contains(g.groups[i]) && !frozen.contains(g.groups[i]);
    any_free = any_free || free[i];
  }
  if (n < 2 || !any_free) {
    r.converged = true;
    return r;
  }

  std::vector<Vec2> pos = gather(layout, g);
  separate_coincident(pos, free, params);

  auto eg = kernels::parallel::linlog(g.system, pos, params.attraction, params.repulsion);
  double energy = eg.energy;
  r.energy_trace.push_back(energy);
  double step = params.initial_step;
  std::vector<Vec2> candidate(n);

  for (; r.iterations < params.max_iterations; ++r.iterations) {
    double largest = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (free[i]) largest = std::max(largest, norm(eg.gradient[i]));
    if (largest < params.convergence) {
      r.converged = true;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) candidate[i] = free[i] ? pos[i] - step * eg.gradient[i] : pos[i];
    const double next = kernels::parallel::linlog_energy(g.system, candidate, params.attraction, params.repulsion);
    if (std::isfinite(next) && next <= energy) {
      pos.swap(candidate);
      energy = next;
      r.energy_trace.push_back(energy);
      ++r.accepted;
      step *= params.step_growth;
      eg = kernels::parallel::linlog(g.system, pos, params.attraction, params.repulsion);
    } else {
      step *= params.step_decay;
      if (step < params.min_step) {
        r.converged = true;
        break;
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) r.state.positions[g.groups[i]] = pos[i];
  return r;
}

LayoutState random_layout(const GroupingState& s, std::uint64_t seed) {
  Rng rng(seed);
  LayoutState out;
  const double side = std::sqrt(static_cast<double>(std::max<std::size_t>(1, s.group_count())));
  for (const auto& [g, members] : s.groups()) out.positions[g] = {rng.uniform(0.0, side), rng.uniform(0.0, side)};
  return out;
}

LayoutState remove_overlaps(const LayoutState& layout, const std::set<GroupId>& frozen, double margin, int passes) {
  LayoutState out = layout;
  std::vector<GroupId> ids;
  for (const auto& [g, p] : out.positions) ids.push_back(g);
  auto movable = [&](GroupId g) { return !out.pinned.contains(g) && !frozen.contains(g); };

  for (int pass = 0; pass < passes; ++pass) {
    bool moved = false;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = i + 1; j < ids.size(); ++j) {
        const GroupId a = ids[i];
        const GroupId b = ids[j];
        const double need = out.half_diagonal(a) + out.half_diagonal(b) + margin;
        Vec2& pa = out.positions[a];
        Vec2& pb = out.positions[b];
        const Vec2 d = pb - pa;
        const double len = norm(d);
        if (len >= need) continue;
        const bool ma = movable(a);
        const bool mb = movable(b);
        if (!ma && !mb) continue;
        const Vec2 dir = len > 0.0 ? (1.0 / len) * d : Vec2{1.0, 0.0};
        const double push = need - len;
        if (ma && mb) {
          pa = pa - (0.5 * push) * dir;
          pb = pb + (0.5 * push) * dir;
        } else if (ma) {
          pa = pa - push * dir;
        } else {
          pb = pb + push * dir;
        }
        moved = true;
      }
    }
    if (!moved) break;
  }
  return out;
}

LayoutState place_after_edit(const LayoutState& layout, const Edit& edit, const GroupingState& after,
                             std::optional<Vec2> drop) {
  LayoutState out = layout;
  switch (edit.kind) {
    case EditKind::aggregate:
    case EditKind::merge: {
      if (edit.created.empty()) break;
      Vec2 sum{};
      for (GroupId g : edit.inputs) sum = sum + layout.position(g);
      out.positions[edit.created.front()] = (1.0 / static_cast<double>(edit.inputs.size())) * sum;
      break;
    }
    case EditKind::split: {
      const GroupId old = edit.inputs.front();
      const Vec2 center = layout.position(old);
      double radius = layout.half_diagonal(old);
      if (radius <= 0.0) radius = 1.0;
      const auto n = static_cast<double>(edit.created.size());
      for (std::size_t k = 0; k < edit.created.size(); ++k) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / n;
        out.positions[edit.created[k]] = center + Vec2{radius * std::cos(angle), radius * std::sin(angle)};
      }
      break;
    }
    case EditKind::extract: {
      const GroupId origin = edit.inputs.front();
      const double offset = std::max(1.0, 1.5 * layout.half_diagonal(origin));
      out.positions[edit.created.front()] = drop ? *drop : layout.position(origin) + Vec2{offset, 0.0};
      break;
    }
    case EditKind::add:
    case EditKind::move:
    case EditKind::reorder:
      break;
  }
  for (GroupId g : edit.retired) {
    out.positions.erase(g);
    out.pinned.erase(g);
    out.half_extent.erase(g);
  }
  for (auto it = out.positions.begin(); it != out.positions.end();) {
    it = after.contains(it->first) ? std::next(it) : out.positions.erase(it);
  }
  return out;
}

LayoutState incremental_update(const LayoutState& layout, const Edit& edit, const GraphDocument& doc,
                               const GroupingState& after, const LinLogParams& params, int local_iterations,
                               std::optional<Vec2> drop) {
  LayoutState placed = place_after_edit(layout, edit, after, drop);
  std::set<GroupId> free(edit.created.begin(), edit.created.end());
  free.insert(edit.changed.begin(), edit.changed.end());
  if (free.empty() || local_iterations <= 0) return placed;

  std::set<GroupId> frozen;
  for (const auto& [g, p] : placed.positions)
    if (!free.contains(g)) frozen.insert(g);

  LinLogParams local = params;
  local.max_iterations = local_iterations;
  const LinLogGraph graph = build_linlog_graph(doc, after);
  LayoutState relaxed = relax(placed, graph, local, frozen).state;
  return remove_overlaps(relaxed, frozen);
}

LayoutState move_group(const LayoutState& layout, GroupId g, Vec2 to) {
  if (!layout.positions.contains(g)) throw OperationError("group " + std::to_string(value(g)) + " has no position");
  LayoutState out = layout;
  out.positions[g] = to;
  out.pinned.insert(g);
  return out;
}

nlohmann::json to_json(const LayoutState& layout) {
  nlohmann::json positions = nlohmann::json::object();
  for (const auto& [g, p] : layout.positions) positions[std::to_string(value(g))] = {p.x, p.y};
  auto pinned = nlohmann::json::array();
  for (GroupId g : layout.pinned) pinned.push_back(value(g));
  return {{"positions", std::move(positions)}, {"pinned", std::move(pinned)}};
}

LayoutState load_layout(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("positions") || !j["positions"].is_object())
    throw InputError("layout file needs a 'positions' object");
  LayoutState out;
  for (const auto& [key, v] : j["positions"].items()) {
    std::uint64_t id = 0;
    try {
      std::size_t used = 0;
      id = std::stoull(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw InputError("layout position key '" + key + "' is not a group id");
    }
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw InputError("layout position for group " + key + " must be [x, y]");
    out.positions[group_id(id)] = {v[0].get<double>(), v[1].get<double>()};
  }
  if (j.contains("pinned")) {
    for (const auto& p : j["pinned"]) {
      if (!p.is_number_unsigned()) throw InputError("pinned entries must be group ids");
      out.pinned.insert(group_id(p.get<std::uint64_t>()));
    }
  }
  return out;
}

LayoutState load_layout_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open layout file '" + path + "'");
  try {
    return load_layout(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("malformed layout file '" + path + "': " + e.what());
  }
}

void check_layout(const LayoutState& layout, const GroupingState& s) {
  for (const auto& [g, members] : s.groups())
    if (!layout.positions.contains(g))
      throw InputError("layout has no position for group " + std::to_string(value(g)));
}

}  // namespace nodetrix
