#include "nodetrix/scene.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

namespace nodetrix {

namespace {

constexpr const char* kNodeFill = "#4e79a7";
constexpr const char* kNodeBorder = "#2f4b68";
constexpr const char* kEdgeColor = "#8c8c8c";
constexpr const char* kMatrixBackground = "#ffffff";
constexpr const char* kMatrixBorder = "#555555";
constexpr const char* kAxisFill = "#e8eef5";
constexpr const char* kCellFill = "#2b2b2b";
constexpr const char* kDiagonalFill = "#e6e6e6";

std::string number_text(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  return std::tolower(static_cast<unsigned char>(c)) - 'a' + 10;
}

std::string ramp(const std::string& lo, const std::string& hi, double t) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out = "#";
  for (int i = 0; i < 3; ++i) {
    const int a = hex_digit(lo[1 + 2 * i]) * 16 + hex_digit(lo[2 + 2 * i]);
    const int b = hex_digit(hi[1 + 2 * i]) * 16 + hex_digit(hi[2 + 2 * i]);
    const int c = static_cast<int>(std::lround(lerp(static_cast<double>(a), static_cast<double>(b), t)));
    out += digits[c / 16];
    out += digits[c % 16];
  }
  return out;
}

}  // namespace

std::string_view to_string(Side s) {
  switch (s) {
    case Side::right: return "right";
    case Side::left: return "left";
    case Side::top: return "top";
    case Side::bottom: return "bottom";
  }
  return "right";
}

Vec2 outward_normal(Side s) {
  switch (s) {
    case Side::right: return {1.0, 0.0};
    case Side::left: return {-1.0, 0.0};
    case Side::top: return {0.0, -1.0};
    case Side::bottom: return {0.0, 1.0};
  }
  return {1.0, 0.0};
}

Side choose_side(Vec2 direction) {
  Side best = Side::right;
  double score = dot(outward_normal(best), direction);
  for (Side s : {Side::left, Side::top, Side::bottom}) {
    const double d = dot(outward_normal(s), direction);
    if (d > score) {
      best = s;
      score = d;
    }
  }
  return best;
}

Vec2 MatrixGlyph::cell_center(std::size_t row, std::size_t col) const {
  return {grid.x + (static_cast<double>(col) + 0.5) * cell, grid.y + (static_cast<double>(row) + 0.5) * cell};
}

double glyph_half_extent(std::size_t members, const StyleConfig& style) {
  if (members < 2) return style.node_radius;
  return 0.5 * (static_cast<double>(members) * style.scaled_cell() + style.axis_extent());
}

void update_extents(LayoutState& layout, const GroupingState& s, const StyleConfig& style) {
  layout.half_extent.clear();
  for (const auto& [g, members] : s.groups()) layout.half_extent[g] = glyph_half_extent(members.size(), style);
}

// ---------------------------------------------------------------- SceneContext

SceneContext::SceneContext(const GraphDocument& doc, const GroupingState& grouping, const LayoutState& layout,
                           const StyleConfig& style)
    : doc_(doc), grouping_(grouping), layout_(layout), style_(style) {
  // Domains first: glyph radii may depend on a size binding.
  for (const auto& [key, b] : style_.bindings) {
    const auto [channel, target] = key;
    std::vector<Datum> data;
    switch (target) {
      case Target::node:
      case Target::axis:
        for (std::size_t i = 0; i < doc_.node_count(); ++i) data.push_back(node_datum(node_id(i), b.attribute));
        break;
      case Target::edge:
        if (style_.edge_mode == EdgeMode::aggregated) {
          for (const auto& ae : aggregated_edges(doc_, grouping_)) data.push_back(edge_datum(ae.underlying, b.attribute));
          break;
        }
        [[fallthrough]];
      case Target::cell:
        for (const Edge& e : doc_.edges()) data.push_back(edge_datum(std::array{e.id}, b.attribute));
        break;
      case Target::matrix:
        for (const auto& [g, members] : grouping_.groups())
          if (members.size() >= 2) data.push_back(group_datum(g, b.attribute));
        break;
    }
    Domain d;
    bool first = true;
    for (const auto& datum : data) {
      if (datum.number) {
        d.min = first ? *datum.number : std::min(d.min, *datum.number);
        d.max = first ? *datum.number : std::max(d.max, *datum.number);
        first = false;
      }
      if (datum.text) d.categories.push_back(*datum.text);
      else if (datum.number) d.categories.push_back(number_text(*datum.number));
    }
    std::sort(d.categories.begin(), d.categories.end());
    d.categories.erase(std::unique(d.categories.begin(), d.categories.end()), d.categories.end());
    domains_[key] = std::move(d);
  }

  const double c = style_.scaled_cell();
  const double strip = style_.axis_extent();
  for (const auto& [g, members] : grouping_.groups()) {
    Glyph glyph;
    glyph.group = g;
    glyph.center = layout_.position(g);
    glyph.matrix = members.size() >= 2;
    if (glyph.matrix) {
      const double side = static_cast<double>(members.size()) * c + strip;
      glyph.frame = {glyph.center.x - 0.5 * side, glyph.center.y - 0.5 * side, side, side};
      glyph.grid = {glyph.frame.x + strip, glyph.frame.y + strip, side - strip, side - strip};
      glyph.cell = c;
      for (std::size_t i = 0; i < members.size(); ++i) glyph.ordinal[members[i]] = i;
    } else {
      const double scale = number(Channel::size, Target::node, node_datum(members.front(), "")).value_or(1.0);
      glyph.radius = style_.node_radius * scale;
      glyph.frame = {glyph.center.x - glyph.radius, glyph.center.y - glyph.radius, 2 * glyph.radius, 2 * glyph.radius};
      glyph.ordinal[members.front()] = 0;
    }
    glyphs_.emplace(g, std::move(glyph));
  }
}

SceneContext::Datum SceneContext::node_datum(NodeId n, const std::string& attr) const {
  std::string name = attr;
  if (name.empty()) {
    const Binding* b = style_.binding(Channel::size, Target::node);
    if (!b) return {};
    name = b->attribute;
  }
  auto col = doc_.node_attributes().find(name);
  if (!col) return {};
  const auto& v = doc_.node_attributes().value(*col, index(n));
  if (const auto* d = std::get_if<double>(&v)) return {*d, std::nullopt};
  if (std::holds_alternative<std::monostate>(v)) return {};
  return {std::nullopt, value_text(v)};
}

SceneContext::Datum SceneContext::edge_datum(std::span<const EdgeId> edges, const std::string& attr) const {
  if (attr == "count") return {static_cast<double>(edges.size()), std::nullopt};
  auto col = doc_.edge_attributes().find(attr);
  if (!col) return {};
  std::vector<std::size_t> elements;
  for (EdgeId e : edges) elements.push_back(index(e));
  const AggregatedValue v = combine(doc_.edge_attributes().column(*col), elements);
  if (v.count == 0) return {};
  if (v.kind == AttributeKind::numeric) return {v.mean, std::nullopt};
  return {std::nullopt, v.text};
}

SceneContext::Datum SceneContext::group_datum(GroupId g, const std::string& attr) const {
  if (attr == "count") return {static_cast<double>(grouping_.members(g).size()), std::nullopt};
  for (const auto& a : aggregate_attributes(doc_, grouping_, g)) {
    if (a.name != attr) continue;
    if (a.value.count == 0) return {};
    if (a.value.kind == AttributeKind::numeric) return {a.value.mean, std::nullopt};
    return {std::nullopt, a.value.text};
  }
  return {};
}

const SceneContext::Domain& SceneContext::domain(Channel c, Target t) const { return domains_.at({c, t}); }

std::optional<std::string> SceneContext::color(Channel c, Target t, const Datum& d) const {
  const Binding* b = style_.binding(c, t);
  if (!b) return std::nullopt;
  const Domain& dom = domain(c, t);
  if (b->scale == ScaleKind::categorical) {
    const std::string key = d.text ? *d.text : d.number ? number_text(*d.number) : std::string();
    if (key.empty()) return std::nullopt;
    const auto it = std::lower_bound(dom.categories.begin(), dom.categories.end(), key);
    const auto& palette = categorical_palette();
    return palette[static_cast<std::size_t>(it - dom.categories.begin()) % palette.size()];
  }
  if (!d.number) return std::nullopt;
  const double u = dom.max > dom.min ? (*d.number - dom.min) / (dom.max - dom.min) : 0.5;
  return ramp(b->low_color, b->high_color, u);
}

std::optional<double> SceneContext::number(Channel c, Target t, const Datum& d) const {
  const Binding* b = style_.binding(c, t);
  if (!b) return std::nullopt;
  const Domain& dom = domain(c, t);
  double u = 0.5;
  if (b->scale == ScaleKind::categorical) {
    const std::string key = d.text ? *d.text : d.number ? number_text(*d.number) : std::string();
    if (key.empty()) return std::nullopt;
    const auto it = std::lower_bound(dom.categories.begin(), dom.categories.end(), key);
    if (dom.categories.size() > 1)
      u = static_cast<double>(it - dom.categories.begin()) / static_cast<double>(dom.categories.size() - 1);
  } else {
    if (!d.number) return std::nullopt;
    if (dom.max > dom.min) u = (*d.number - dom.min) / (dom.max - dom.min);
  }
  return lerp(b->low, b->high, u);
}

Vec2 SceneContext::anchor(GroupId g, NodeId member, Vec2 toward, std::optional<Side>* side) const {
  const Glyph& gl = glyph(g);
  const Vec2 dir = toward - gl.center;
  if (!gl.matrix) {
    if (side) side->reset();
    const double len = norm(dir);
    if (len == 0.0) return gl.center;
    return gl.center + (gl.radius / len) * dir;
  }
  const Side s = choose_side(dir);
  if (side) *side = s;
  const double k = static_cast<double>(gl.ordinal.at(member)) + 0.5;
  switch (s) {
    case Side::right: return {gl.frame.right(), gl.grid.y + k * gl.cell};
    case Side::left: return {gl.frame.left(), gl.grid.y + k * gl.cell};
    case Side::top: return {gl.grid.x + k * gl.cell, gl.frame.top()};
    case Side::bottom: return {gl.grid.x + k * gl.cell, gl.frame.bottom()};
  }
  return gl.center;
}

double SceneContext::anchor_span(GroupId g) const {
  const Glyph& gl = glyph(g);
  return gl.matrix ? gl.grid.w : 2.0 * gl.radius;
}

std::string SceneContext::edge_color(std::span<const EdgeId> edges) const {
  const Binding* b = style_.binding(Channel::fill, Target::edge);
  if (!b) return kEdgeColor;
  return color(Channel::fill, Target::edge, edge_datum(edges, b->attribute)).value_or(kEdgeColor);
}

std::string SceneContext::edge_color_key(std::span<const EdgeId> edges) const {
  const Binding* b = style_.binding(Channel::fill, Target::edge);
  if (!b) return {};
  const Datum d = edge_datum(edges, b->attribute);
  return d.text ? *d.text : d.number ? number_text(*d.number) : std::string();
}

double SceneContext::edge_width(std::span<const EdgeId> edges) const {
  const Binding* b = style_.binding(Channel::size, Target::edge);
  if (!b) return style_.link_thickness * static_cast<double>(edges.size());
  return style_.link_thickness * number(Channel::size, Target::edge, edge_datum(edges, b->attribute)).value_or(1.0);
}

double SceneContext::edge_opacity(std::span<const EdgeId> edges) const {
  const Binding* b = style_.binding(Channel::opacity, Target::edge);
  if (!b) return 1.0;
  return number(Channel::opacity, Target::edge, edge_datum(edges, b->attribute)).value_or(1.0);
}

NodeGlyph SceneContext::node_glyph(GroupId g) const {
  const Glyph& gl = glyph(g);
  const NodeId n = grouping_.members(g).front();
  auto bound = [&](Channel c) {
    const Binding* b = style_.binding(c, Target::node);
    return b ? node_datum(n, b->attribute) : Datum{};
  };
  NodeGlyph out{g, n, gl.center, gl.radius, kNodeFill, kNodeBorder, 1.0};
  out.fill = color(Channel::fill, Target::node, bound(Channel::fill)).value_or(kNodeFill);
  out.border = color(Channel::border, Target::node, bound(Channel::border)).value_or(kNodeBorder);
  out.opacity = number(Channel::opacity, Target::node, bound(Channel::opacity)).value_or(1.0);
  return out;
}

MatrixGlyph SceneContext::matrix_glyph(GroupId g) const {
  const Glyph& gl = glyph(g);
  const auto& members = grouping_.members(g);
  const std::size_t k = members.size();
  MatrixGlyph m;
  m.group = g;
  m.center = gl.center;
  m.frame = gl.frame;
  m.grid = gl.grid;
  m.cell = gl.cell;
  m.order = members;
  m.axis_labels = style_.axis_labels;
  m.axis_label_size = style_.axis_label_size * style_.matrix_scale;

  std::vector<std::vector<EdgeId>> cell_edges(k * k);
  for (EdgeId e : internal_edges(doc_, grouping_, g)) {
    const Edge& ed = doc_.edge(e);
    const std::size_t i = gl.ordinal.at(ed.source);
    const std::size_t j = gl.ordinal.at(ed.target);
    cell_edges[i * k + j].push_back(e);
    if (!doc_.directed() && i != j) cell_edges[j * k + i].push_back(e);
  }
  const Binding* cell_fill = style_.binding(Channel::fill, Target::cell);
  const Binding* cell_opacity = style_.binding(Channel::opacity, Target::cell);
  m.cells.reserve(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const auto& edges = cell_edges[i * k + j];
      MatrixCell cell{i, j, edges.size(), i == j, edges.empty() ? kDiagonalFill : kCellFill, 1.0};
      if (!edges.empty()) {
        if (cell_fill) cell.fill = color(Channel::fill, Target::cell, edge_datum(edges, cell_fill->attribute)).value_or(kCellFill);
        if (cell_opacity)
          cell.opacity = number(Channel::opacity, Target::cell, edge_datum(edges, cell_opacity->attribute)).value_or(1.0);
      }
      m.cells.push_back(std::move(cell));
    }
  }

  const double strip = gl.grid.x - gl.frame.x;
  const Binding* axis_fill = style_.binding(Channel::fill, Target::axis);
  const Binding* axis_label = style_.binding(Channel::label, Target::axis);
  for (std::size_t i = 0; i < k; ++i) {
    const double offset = static_cast<double>(i) * gl.cell;
    AxisItem item{members[i],
                  {gl.frame.x, gl.grid.y + offset, strip, gl.cell},
                  {gl.grid.x + offset, gl.frame.y, gl.cell, strip},
                  kAxisFill,
                  doc_.label(members[i])};
    if (axis_fill) item.fill = color(Channel::fill, Target::axis, node_datum(members[i], axis_fill->attribute)).value_or(kAxisFill);
    if (axis_label) {
      const Datum d = node_datum(members[i], axis_label->attribute);
      if (d.text) item.label = *d.text;
      else if (d.number) item.label = number_text(*d.number);
    }
    m.axis.push_back(std::move(item));
  }

  auto bound = [&](Channel c) {
    const Binding* b = style_.binding(c, Target::matrix);
    return b ? group_datum(g, b->attribute) : Datum{};
  };
  m.background = color(Channel::fill, Target::matrix, bound(Channel::fill)).value_or(kMatrixBackground);
  m.border = color(Channel::border, Target::matrix, bound(Channel::border)).value_or(kMatrixBorder);
  m.opacity = number(Channel::opacity, Target::matrix, bound(Channel::opacity)).value_or(1.0);
  return m;
}

Label SceneContext::group_label(GroupId g) const {
  const Glyph& gl = glyph(g);
  const double size = style_.group_label_size;
  Label l{nodetrix::group_label(doc_, grouping_, g, style_.label_max_length),
          {gl.center.x, gl.frame.bottom() + 1.2 * size}, size, g, 1.0};
  const Target t = gl.matrix ? Target::matrix : Target::node;
  if (const Binding* b = style_.binding(Channel::label, t)) {
    const Datum d = gl.matrix ? group_datum(g, b->attribute) : node_datum(grouping_.members(g).front(), b->attribute);
    if (d.text) l.text = *d.text;
    else if (d.number) l.text = number_text(*d.number);
  }
  return l;
}

// ---------------------------------------------------------------- edges

EdgePath route_edge(const SceneContext& ctx, EdgeId e) {
  const Edge& ed = ctx.doc().edge(e);
  const GroupId ga = ctx.grouping().group_of(ed.source);
  const GroupId gb = ctx.grouping().group_of(ed.target);
  if (ga == gb) throw OperationError("edge " + std::to_string(index(e)) + " is internal to a group");
  const auto& a = ctx.glyph(ga);
  const auto& b = ctx.glyph(gb);

  EdgePath p;
  p.edges = {e};
  p.source_group = ga;
  p.target_group = gb;
  Vec2 pa = a.center;
  Vec2 pb = b.center;
  if (a.matrix) pa = ctx.anchor(ga, ed.source, b.center, &p.source_side);
  if (b.matrix) pb = ctx.anchor(gb, ed.target, a.center, &p.target_side);
  if (!a.matrix) pa = ctx.anchor(ga, ed.source, b.matrix ? pb : b.center);
  if (!b.matrix) pb = ctx.anchor(gb, ed.target, a.matrix ? pa : a.center);
  p.points = {pa, pb};
  const std::array one{e};
  p.width = ctx.edge_width(one);
  p.color = ctx.edge_color(one);
  p.color_key = ctx.edge_color_key(one);
  p.opacity = ctx.edge_opacity(one);
  return p;
}

namespace {

Vec2 side_tangent(Side s) { return s == Side::left || s == Side::right ? Vec2{0.0, 1.0} : Vec2{1.0, 0.0}; }

}  // namespace

std::vector<EdgePath> merge_bands(std::vector<EdgePath> paths, const StyleConfig& style, double span) {
  if (paths.size() < 2) return paths;
  double total = 0.0;
  for (const auto& p : paths) total += p.width;
  if (total <= style.merge_threshold * span) return paths;

  Vec2 from{};
  Vec2 to{};
  for (const auto& p : paths) {
    from = from + p.points.front();
    to = to + p.points.back();
  }
  const double inv = 1.0 / static_cast<double>(paths.size());
  from = inv * from;
  to = inv * to;

  Vec2 dir = to - from;
  const double len = norm(dir);
  dir = len > 0.0 ? (1.0 / len) * dir : Vec2{1.0, 0.0};
  const Vec2 perp{-dir.y, dir.x};
  auto offset_axis = [&](const std::optional<Side>& side) {
    if (!side) return perp;
    Vec2 t = side_tangent(*side);
    return dot(t, perp) < 0.0 ? -1.0 * t : t;
  };
  const Vec2 axis_a = offset_axis(paths.front().source_side);
  const Vec2 axis_b = offset_axis(paths.front().target_side);

  std::map<std::string, EdgePath> classes;
  for (auto& p : paths) {
    auto [it, fresh] = classes.try_emplace(p.color_key, p);
    if (fresh) continue;
    it->second.width += p.width;
    it->second.edges.insert(it->second.edges.end(), p.edges.begin(), p.edges.end());
  }

  std::vector<EdgePath> bands;
  double cursor = -0.5 * total;
  for (auto& [key, band] : classes) {
    std::sort(band.edges.begin(), band.edges.end());
    const double mid = cursor + 0.5 * band.width;
    band.points = {from + mid * axis_a, to + mid * axis_b};
    band.band = true;
    cursor += band.width;
    bands.push_back(std::move(band));
  }
  return bands;
}

EdgePath aggregated_edge_geometry(const SceneContext& ctx, const AggregatedEdge& ae) {
  EdgePath p;
  p.edges = ae.underlying;
  p.source_group = ae.a;
  p.target_group = ae.b;
  Vec2 sa{};
  Vec2 sb{};
  for (EdgeId e : ae.underlying) {
    const EdgePath single = route_edge(ctx, e);
    const bool forward = single.source_group == ae.a;
    sa = sa + (forward ? single.points.front() : single.points.back());
    sb = sb + (forward ? single.points.back() : single.points.front());
    if (e == ae.underlying.front()) {
      p.source_side = forward ? single.source_side : single.target_side;
      p.target_side = forward ? single.target_side : single.source_side;
    }
  }
  const double inv = 1.0 / static_cast<double>(ae.underlying.size());
  p.points = {inv * sa, inv * sb};

  p.width = ctx.edge_width(ae.underlying);
  p.color = ctx.edge_color(ae.underlying);
  p.color_key = ctx.edge_color_key(ae.underlying);
  p.opacity = ctx.edge_opacity(ae.underlying);
  return p;
}

Scene build_scene(const GraphDocument& doc, const GroupingState& grouping, const LayoutState& layout,
                  const StyleConfig& style) {
  const SceneContext ctx(doc, grouping, layout, style);
  Scene scene;
  for (const auto& [g, members] : grouping.groups()) {
    if (members.size() >= 2) scene.matrices.push_back(ctx.matrix_glyph(g));
    else scene.nodes.push_back(ctx.node_glyph(g));
    if (style.group_label_size > 0.0) scene.labels.push_back(ctx.group_label(g));
  }
  for (const auto& ae : aggregated_edges(doc, grouping)) {
    if (style.edge_mode == EdgeMode::aggregated) {
      scene.edges.push_back(aggregated_edge_geometry(ctx, ae));
      continue;
    }
    std::vector<EdgePath> paths;
    for (EdgeId e : ae.underlying) paths.push_back(route_edge(ctx, e));
    const double span = std::min(ctx.anchor_span(ae.a), ctx.anchor_span(ae.b));
    for (auto& p : merge_bands(std::move(paths), style, span)) scene.edges.push_back(std::move(p));
  }
  return scene;
}

Scene fragment(const Scene& scene, const std::set<GroupId>& groups) {
  Scene out;
  for (const auto& e : scene.edges)
    if (groups.contains(e.source_group) && groups.contains(e.target_group)) out.edges.push_back(e);
  for (const auto& n : scene.nodes)
    if (groups.contains(n.group)) out.nodes.push_back(n);
  for (const auto& m : scene.matrices)
    if (groups.contains(m.group)) out.matrices.push_back(m);
  for (const auto& l : scene.labels)
    if (groups.contains(l.owner)) out.labels.push_back(l);
  return out;
}

namespace {

nlohmann::json point(Vec2 p) { return nlohmann::json::array({p.x, p.y}); }
nlohmann::json rect(const Rect& r) { return nlohmann::json::array({r.x, r.y, r.w, r.h}); }

}  // namespace

nlohmann::json to_json(const Scene& scene) {
  nlohmann::json j;
  auto edges = nlohmann::json::array();
  for (const auto& e : scene.edges) {
    nlohmann::json je;
    auto ids = nlohmann::json::array();
    for (EdgeId id : e.edges) ids.push_back(index(id));
    je["edges"] = std::move(ids);
    je["source_group"] = value(e.source_group);
    je["target_group"] = value(e.target_group);
    je["source_side"] = e.source_side ? nlohmann::json(to_string(*e.source_side)) : nlohmann::json();
    je["target_side"] = e.target_side ? nlohmann::json(to_string(*e.target_side)) : nlohmann::json();
    je["shape"] = e.shape == PathShape::quadratic ? "quadratic" : "polyline";
    auto pts = nlohmann::json::array();
    for (Vec2 p : e.points) pts.push_back(point(p));
    je["points"] = std::move(pts);
    je["width"] = e.width;
    je["color"] = e.color;
    je["color_key"] = e.color_key;
    je["opacity"] = e.opacity;
    je["band"] = e.band;
    edges.push_back(std::move(je));
  }
  j["edges"] = std::move(edges);

  auto nodes = nlohmann::json::array();
  for (const auto& n : scene.nodes)
    nodes.push_back({{"group", value(n.group)},
                     {"node", index(n.node)},
                     {"center", point(n.center)},
                     {"radius", n.radius},
                     {"fill", n.fill},
                     {"border", n.border},
                     {"opacity", n.opacity}});
  j["nodes"] = std::move(nodes);

  auto matrices = nlohmann::json::array();
  for (const auto& m : scene.matrices) {
    nlohmann::json jm{{"group", value(m.group)},
                      {"center", point(m.center)},
                      {"frame", rect(m.frame)},
                      {"grid", rect(m.grid)},
                      {"cell", m.cell},
                      {"axis_labels", m.axis_labels},
                      {"axis_label_size", m.axis_label_size},
                      {"background", m.background},
                      {"border", m.border},
                      {"opacity", m.opacity}};
    auto order = nlohmann::json::array();
    for (NodeId n : m.order) order.push_back(index(n));
    jm["order"] = std::move(order);
    auto cells = nlohmann::json::array();
    for (const auto& c : m.cells)
      cells.push_back({{"row", c.row},
                       {"col", c.col},
                       {"multiplicity", c.multiplicity},
                       {"diagonal", c.diagonal},
                       {"fill", c.fill},
                       {"opacity", c.opacity}});
    jm["cells"] = std::move(cells);
    auto axis = nlohmann::json::array();
    for (const auto& a : m.axis)
      axis.push_back({{"node", index(a.node)},
                      {"row_box", rect(a.row_box)},
                      {"col_box", rect(a.col_box)},
                      {"fill", a.fill},
                      {"label", a.label}});
    jm["axis"] = std::move(axis);
    matrices.push_back(std::move(jm));
  }
  j["matrices"] = std::move(matrices);

  auto labels = nlohmann::json::array();
  for (const auto& l : scene.labels)
    labels.push_back({{"text", l.text},
                      {"position", point(l.position)},
                      {"size", l.size},
                      {"owner", value(l.owner)},
                      {"opacity", l.opacity}});
  j["labels"] = std::move(labels);
  return j;
}

std::uint64_t scene_hash(const Scene& scene) { return fnv1a(to_json(scene).dump()); }

}  // namespace nodetrix
