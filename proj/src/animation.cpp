#include "nodetrix/animation.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace nodetrix {

namespace {

double progress(double t, double lo, double hi) {
  if (t >= hi) return 1.0;
  if (t <= lo) return 0.0;
  return (t - lo) / (hi - lo);
}

double progress(double t, const std::pair<double, double>& slot) { return progress(t, slot.first, slot.second); }

// Quadratic Bezier blossom; b(u,u) is the curve point, b(u,v) the control
// point of the piece between u and v.
Vec2 blossom(const std::vector<Vec2>& p, double u, double v) {
  return (1.0 - u) * (1.0 - v) * p[0] + ((1.0 - u) * v + u * (1.0 - v)) * p[1] + u * v * p[2];
}

template <typename E, std::size_t N>
E pick(const nlohmann::json& j, const char* key, const std::array<std::pair<E, const char*>, N>& names, E fallback) {
  if (!j.contains(key)) return fallback;
  const auto text = j[key].get<std::string>();
  for (const auto& [e, name] : names)
    if (text == name) return e;
  throw InputError(std::string("unknown ") + key + " '" + text + "'");
}

constexpr std::array kDepictions{std::pair{EdgeDepiction::polyline, "polyline"}, std::pair{EdgeDepiction::curve, "curve"}};
constexpr std::array kPlacements{std::pair{NodePlacement::diagonal, "diagonal"}, std::pair{NodePlacement::sides, "sides"}};
constexpr std::array kExtents{std::pair{MatrixExtent::upper_half, "upper-half"}, std::pair{MatrixExtent::full, "full"}};
constexpr std::array kSequencings{std::pair{Sequencing::simultaneous, "simultaneous"},
                                  std::pair{Sequencing::per_edge, "per-edge"},
                                  std::pair{Sequencing::per_node, "per-node"}};
constexpr std::array kDirections{std::pair{Direction::to_matrix, "to-matrix"},
                                 std::pair{Direction::to_node_link, "to-node-link"}};

template <typename E, std::size_t N>
const char* name_of(E e, const std::array<std::pair<E, const char*>, N>& names) {
  for (const auto& [v, name] : names)
    if (v == e) return name;
  return "";
}

}  // namespace

void AnimationSpec::validate() const {
  if (!(duration > 0.0)) throw InputError("animation duration must be positive");
  if (!(ratio > 0.0) || ratio > 1.0) throw InputError("acceleration ratio must lie in (0, 1]");
  if (!(stage_a >= 0.0) || !(stage_b > 0.0) || !(stage_c > 0.0))
    throw InputError("interpolation and cross-fade stages need positive length");
  if (std::abs(stage_a + stage_b + stage_c - 1.0) > 1e-9) throw InputError("stage fractions must sum to 1");
  if (extent == MatrixExtent::full && stage_a <= 0.0) throw InputError("full matrix extent needs a duplication stage");
}

nlohmann::json to_json(const AnimationSpec& s) {
  return {{"edges", name_of(s.edges, kDepictions)},
          {"placement", name_of(s.placement, kPlacements)},
          {"extent", name_of(s.extent, kExtents)},
          {"sequencing", name_of(s.sequencing, kSequencings)},
          {"accelerate", s.accelerate},
          {"ratio", s.ratio},
          {"duration", s.duration},
          {"direction", name_of(s.direction, kDirections)},
          {"stages", {s.stage_a, s.stage_b, s.stage_c}}};
}

AnimationSpec animation_spec_from_json(const nlohmann::json& j) {
  if (j.is_null()) return {};
  if (!j.is_object()) throw InputError("animation spec must be a JSON object");
  AnimationSpec s;
  try {
    if (j.contains("preset")) {
      const auto preset = j["preset"].get<std::string>();
      if (preset == "novice") s = AnimationSpec::novice();
      else if (preset != "expert") throw InputError("unknown preset '" + preset + "'");
    }
    s.edges = pick(j, "edges", kDepictions, s.edges);
    s.placement = pick(j, "placement", kPlacements, s.placement);
    s.extent = pick(j, "extent", kExtents, s.extent);
    s.sequencing = pick(j, "sequencing", kSequencings, s.sequencing);
    s.direction = pick(j, "direction", kDirections, s.direction);
    s.accelerate = j.value("accelerate", s.accelerate);
    s.ratio = j.value("ratio", s.ratio);
    s.duration = j.value("duration", s.duration);
    if (j.contains("stages")) {
      const auto& st = j["stages"];
      if (!st.is_array() || st.size() != 3) throw InputError("stages must be three fractions");
      s.stage_a = st[0].get<double>();
      s.stage_b = st[1].get<double>();
      s.stage_c = st[2].get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed animation spec: ") + e.what());
  }
  s.validate();
  return s;
}

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::duplicate: return "duplicate";
    case Stage::interpolate: return "interpolate";
    case Stage::crossfade: return "crossfade";
  }
  return "duplicate";
}

nlohmann::json to_json(const Keyframe& k) {
  auto pt = [](Vec2 p) { return nlohmann::json::array({p.x, p.y}); };
  nlohmann::json j{{"t", k.t}, {"stage", to_string(k.stage)}, {"matrix_opacity", k.matrix_opacity}};
  auto nodes = nlohmann::json::array();
  for (const auto& n : k.nodes)
    nodes.push_back({{"node", index(n.node)},
                     {"copy", n.copy},
                     {"center", pt(n.center)},
                     {"radius", n.radius},
                     {"opacity", n.opacity}});
  j["nodes"] = std::move(nodes);
  auto curves = nlohmann::json::array();
  for (const auto& c : k.curves) {
    auto pts = nlohmann::json::array();
    for (Vec2 p : c.points) pts.push_back(pt(p));
    curves.push_back({{"path", c.path},
                      {"duplicate", c.duplicate},
                      {"cell", {c.row, c.col}},
                      {"shape", c.shape == PathShape::quadratic ? "quadratic" : "polyline"},
                      {"points", std::move(pts)},
                      {"corner", pt(c.corner)},
                      {"opacity", c.opacity},
                      {"segment_opacity", c.segment_opacity}});
  }
  j["curves"] = std::move(curves);
  return j;
}

std::vector<std::pair<double, double>> sequence_schedule(const AnimationSpec& spec, std::size_t count, double lo,
                                                         double hi) {
  if (count == 0) return {};
  std::vector<double> weights(count, 1.0);
  if (spec.accelerate)
    for (std::size_t i = 1; i < count; ++i) weights[i] = weights[i - 1] * spec.ratio;
  double total = 0.0;
  for (double w : weights) total += w;
  std::vector<std::pair<double, double>> slots;
  double acc = 0.0;
  double start = lo;
  for (std::size_t i = 0; i < count; ++i) {
    acc += weights[i];
    const double end = i + 1 == count ? hi : lo + (hi - lo) * (acc / total);
    slots.emplace_back(start, end);
    start = end;
  }
  return slots;
}

AnimationPlan plan_transition(const GraphDocument& doc, const GroupingState& grouping, const LayoutState& layout,
                              const StyleConfig& style, GroupId g, const AnimationSpec& spec) {
  spec.validate();
  if (!grouping.contains(g)) throw InputError("unknown group " + std::to_string(value(g)));
  const auto& order = grouping.members(g);
  if (order.size() < 2) throw OperationError("group " + std::to_string(value(g)) + " has a single member; nothing to animate");

  LayoutState merged = layout;
  update_extents(merged, grouping, style);
  const Transition split_t = split(grouping, g);
  LayoutState apart = place_after_edit(merged, split_t.edit, split_t.state);
  update_extents(apart, split_t.state, style);

  AnimationPlan plan;
  plan.spec_ = spec;
  plan.group_ = g;
  plan.target_ = fragment(build_scene(doc, grouping, merged, style), {g});
  const std::set<GroupId> singles(split_t.edit.created.begin(), split_t.edit.created.end());
  plan.source_ = fragment(build_scene(doc, split_t.state, apart, style), singles);

  const MatrixGlyph& m = plan.target_.matrices.front();
  plan.end_radius_ = 0.35 * m.cell;
  std::map<GroupId, std::size_t> ordinal_of_single;
  for (std::size_t i = 0; i < order.size(); ++i) {
    AnimationPlan::Member mem;
    mem.node = order[i];
    const GroupId single = split_t.state.group_of(order[i]);
    ordinal_of_single[single] = i;
    const auto it = std::find_if(plan.source_.nodes.begin(), plan.source_.nodes.end(),
                                 [&](const NodeGlyph& n) { return n.group == single; });
    if (it == plan.source_.nodes.end()) throw InvariantError("split member missing from the node-link fragment");
    mem.glyph = static_cast<std::size_t>(it - plan.source_.nodes.begin());
    mem.start = it->center;
    mem.diagonal = m.cell_center(i, i);
    mem.row_box = m.axis[i].row_box.center();
    mem.col_box = m.axis[i].col_box.center();
    plan.members_.push_back(mem);
  }
  for (std::size_t p = 0; p < plan.source_.edges.size(); ++p) {
    const EdgePath& path = plan.source_.edges[p];
    plan.curves_.push_back({p, ordinal_of_single.at(path.source_group), ordinal_of_single.at(path.target_group),
                            path.points.front(), path.points.back()});
  }

  const double lo = spec.stage_a;
  const double hi = spec.stage_a + spec.stage_b;
  const std::size_t n_nodes = plan.members_.size();
  const std::size_t n_curves = plan.curves_.size();
  if (spec.sequencing == Sequencing::per_node) {
    plan.node_slots_ = sequence_schedule(spec, n_nodes, lo, hi);
  } else {
    plan.node_slots_.assign(n_nodes, {lo, hi});
  }
  if (spec.sequencing == Sequencing::per_edge && n_curves > 0) plan.edge_slots_ = sequence_schedule(spec, n_curves, lo, hi);
  else plan.edge_slots_.assign(n_curves, {lo, hi});
  return plan;
}

Keyframe AnimationPlan::sample(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw OperationError("animation time must lie in [0, 1]");
  if (spec_.direction == Direction::to_matrix) return forward(t);
  Keyframe k = forward(1.0 - t);
  k.t = t;
  return k;
}

std::vector<Keyframe> AnimationPlan::frames(std::size_t n) const {
  if (n < 2) throw InputError("an animation needs at least two frames");
  std::vector<Keyframe> out;
  const double last = static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    if (spec_.direction == Direction::to_matrix) {
      out.push_back(forward(static_cast<double>(k) / last));
    } else {
      const double f = static_cast<double>(n - 1 - k) / last;
      out.push_back(forward(f));
      out.back().t = 1.0 - f;
    }
  }
  return out;
}

Keyframe AnimationPlan::forward(double t) const {
  const double a_end = spec_.stage_a;
  const double b_end = spec_.stage_a + spec_.stage_b;
  const bool sides = spec_.placement == NodePlacement::sides;
  const bool full = spec_.extent == MatrixExtent::full;

  Keyframe k;
  k.t = t;
  k.stage = t <= a_end ? Stage::duplicate : t <= b_end ? Stage::interpolate : Stage::crossfade;

  // Node progress through stage B, per member.
  std::vector<double> sigma(members_.size());
  for (std::size_t i = 0; i < members_.size(); ++i) sigma[i] = progress(t, node_slots_[i]);
  const double fade_in = a_end > 0.0 ? progress(t, 0.0, a_end) : 1.0;
  const double fade_out = progress(t, b_end, 1.0);

  auto node_target = [&](std::size_t i, bool copy) {
    const Member& m = members_[i];
    if (!sides) return m.diagonal;
    return copy ? m.col_box : m.row_box;
  };

  for (std::size_t i = 0; i < members_.size(); ++i) {
    const Member& m = members_[i];
    const NodeGlyph& glyph = source_.nodes[m.glyph];
    for (bool copy : {false, true}) {
      if (copy && !sides) break;
      NodePose pose{m.node, copy, m.start, glyph.radius, glyph.opacity};
      if (k.stage == Stage::duplicate) {
        if (copy) pose.opacity = fade_in * glyph.opacity;
      } else {
        pose.center = lerp(m.start, node_target(i, copy), sigma[i]);
        pose.radius = lerp(glyph.radius, end_radius_, sigma[i]);
        if (k.stage == Stage::crossfade) pose.opacity = (1.0 - fade_out) * glyph.opacity;
      }
      k.nodes.push_back(pose);
    }
  }

  for (std::size_t c = 0; c < curves_.size(); ++c) {
    const Curve& cv = curves_[c];
    const EdgePath& path = source_.edges[cv.path];
    const std::size_t lo_ord = std::min(cv.a, cv.b);
    const std::size_t hi_ord = std::max(cv.a, cv.b);
    for (bool dup : {false, true}) {
      if (dup && !full) break;
      CurvePose pose;
      pose.path = cv.path;
      pose.duplicate = dup;
      pose.row = dup ? hi_ord : lo_ord;
      pose.col = dup ? lo_ord : hi_ord;
      const Vec2 cell = target_.matrices.front().cell_center(pose.row, pose.col);
      if (k.stage == Stage::duplicate) {
        pose.points = path.points;
        pose.shape = path.shape;
        pose.corner = lerp(cv.a0, cv.b0, 0.5);
        pose.opacity = dup ? fade_in * path.opacity : path.opacity;
        k.curves.push_back(std::move(pose));
        continue;
      }
      // With side placement the row end sits on the row node and the column
      // end on the other node's column copy.
      const bool a_is_row = cv.a == pose.row;
      const Vec2 a_target = node_target(cv.a, sides && !a_is_row);
      const Vec2 b_target = node_target(cv.b, sides && a_is_row);
      const Vec2 a = lerp(cv.a0, a_target, sigma[cv.a]);
      const Vec2 b = lerp(cv.b0, b_target, sigma[cv.b]);
      double s_edge = progress(t, edge_slots_[c]);
      if (spec_.sequencing == Sequencing::per_node) s_edge = std::min(sigma[cv.a], sigma[cv.b]);
      pose.corner = lerp(lerp(cv.a0, cv.b0, 0.5), cell, s_edge);
      if (spec_.edges == EdgeDepiction::curve) {
        pose.shape = PathShape::quadratic;
        pose.points = {a, 2.0 * pose.corner - 0.5 * (a + b), b};
      } else {
        pose.shape = PathShape::polyline;
        pose.points = {a, pose.corner, b};
      }
      pose.opacity = path.opacity;
      if (k.stage == Stage::crossfade) {
        for (std::size_t s = 0; s < kFadeSegments; ++s) {
          const double mid = (static_cast<double>(s) + 0.5) / static_cast<double>(kFadeSegments);
          const double delta = std::abs(mid - 0.5) / 0.5;  // 0 at the corner, 1 at the ends
          const double o = std::clamp(1.0 - (fade_out - 0.5 * (1.0 - delta)) / 0.5, 0.0, 1.0);
          pose.segment_opacity.push_back(o * path.opacity);
        }
      }
      k.curves.push_back(std::move(pose));
    }
  }

  for (const Label& l : source_.labels) {
    Label moved = l;
    if (k.stage != Stage::duplicate) {
      std::size_t i = 0;
      while (i < members_.size() && source_.nodes[members_[i].glyph].group != l.owner) ++i;
      if (i < members_.size()) {
        moved.position = l.position + (k.nodes[sides ? 2 * i : i].center - members_[i].start);
        moved.opacity = (1.0 - sigma[i]) * l.opacity;
      }
      if (k.stage == Stage::crossfade) moved.opacity = 0.0;
    }
    k.labels.push_back(moved);
  }
  k.matrix_opacity = k.stage == Stage::crossfade ? fade_out : 0.0;
  for (const Label& l : target_.labels) {
    Label faded = l;
    faded.opacity = k.matrix_opacity * l.opacity;
    k.labels.push_back(faded);
  }
  return k;
}

Scene AnimationPlan::scene(const Keyframe& k) const {
  Scene out;
  for (const CurvePose& c : k.curves) {
    EdgePath base = source_.edges[c.path];
    base.shape = c.shape;
    if (c.segment_opacity.empty()) {
      if (c.opacity <= 0.0) continue;
      base.points = c.points;
      base.opacity = c.opacity;
      out.edges.push_back(std::move(base));
      continue;
    }
    const double n = static_cast<double>(kFadeSegments);
    for (std::size_t s = 0; s < kFadeSegments; ++s) {
      if (c.segment_opacity[s] <= 0.0) continue;
      const double u0 = static_cast<double>(s) / n;
      const double u1 = static_cast<double>(s + 1) / n;
      EdgePath piece = base;
      piece.opacity = c.segment_opacity[s];
      if (c.shape == PathShape::quadratic) {
        piece.points = {blossom(c.points, u0, u0), blossom(c.points, u0, u1), blossom(c.points, u1, u1)};
      } else {
        // Two legs of a polyline, half the pieces on each.
        auto at = [&](double u) {
          return u <= 0.5 ? lerp(c.points[0], c.points[1], u / 0.5) : lerp(c.points[1], c.points[2], (u - 0.5) / 0.5);
        };
        piece.points = {at(u0), at(u1)};
      }
      out.edges.push_back(std::move(piece));
    }
  }
  for (const NodePose& p : k.nodes) {
    if (p.opacity <= 0.0) continue;
    auto it = std::find_if(members_.begin(), members_.end(), [&](const Member& m) { return m.node == p.node; });
    NodeGlyph glyph = source_.nodes[it->glyph];
    glyph.center = p.center;
    glyph.radius = p.radius;
    glyph.opacity = p.opacity;
    out.nodes.push_back(std::move(glyph));
  }
  if (k.matrix_opacity > 0.0) {
    MatrixGlyph m = target_.matrices.front();
    m.opacity = k.matrix_opacity * m.opacity;
    out.matrices.push_back(std::move(m));
  }
  for (const Label& l : k.labels)
    if (l.opacity > 0.0) out.labels.push_back(l);
  return out;
}

}  // namespace nodetrix
