#include <doctest.h>

#include <cmath>

#include "nodetrix/scene.hpp"
#include "oracles.hpp"

using namespace nodetrix;

namespace {

struct Fixture {
  GraphDocument doc;
  GroupingState grouping;
  LayoutState layout;
  StyleConfig style;
};

// K4 on 0..3 as a matrix at the origin, node 4 far right, node 5 far above.
Fixture k4_with_neighbours() {
  Fixture f;
  f.doc = oracle::from_pairs(6, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {1, 4}, {3, 4}, {2, 5}, {2, 5}});
  f.grouping = aggregate(GroupingState::singletons(f.doc), std::array{group_id(0), group_id(1), group_id(2), group_id(3)})
                   .state;
  f.layout.positions[group_id(6)] = {0, 0};
  f.layout.positions[group_id(4)] = {5, 0.1};
  f.layout.positions[group_id(5)] = {0.2, -5};
  update_extents(f.layout, f.grouping, f.style);
  return f;
}

}  // namespace

TEST_CASE("side choice and tie order") {
  CHECK(choose_side({1, 0}) == Side::right);
  CHECK(choose_side({-2, 1}) == Side::left);
  CHECK(choose_side({0.1, -3}) == Side::top);
  CHECK(choose_side({0, 1}) == Side::bottom);
  CHECK(choose_side({1, 1}) == Side::right);
  CHECK(choose_side({-1, -1}) == Side::left);
  CHECK(choose_side({0, 0}) == Side::right);
}

TEST_CASE("matrix side is k cells plus the axis strip") {
  auto f = k4_with_neighbours();
  for (double scale : {0.5, 1.0, 2.0}) {
    f.style.matrix_scale = scale;
    update_extents(f.layout, f.grouping, f.style);
    const SceneContext ctx(f.doc, f.grouping, f.layout, f.style);
    const auto m = ctx.matrix_glyph(group_id(6));
    const double c = f.style.cell_size * scale;
    const double L = 4 * f.style.axis_label_size * scale;
    CHECK(m.frame.w == doctest::Approx(4 * c + L));
    CHECK(m.frame.h == doctest::Approx(4 * c + L));
    CHECK(m.grid.w == doctest::Approx(4 * c));
    CHECK(m.grid.x == doctest::Approx(m.frame.x + L));
    CHECK(m.frame.center().x == doctest::Approx(0.0));
    CHECK(f.layout.half_extent[group_id(6)] == doctest::Approx(0.5 * m.frame.w));
  }
  f.style.axis_labels = false;
  CHECK(glyph_half_extent(4, f.style) == doctest::Approx(0.5 * 4 * f.style.scaled_cell()));
}

TEST_CASE("cells hold the internal adjacency") {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = oracle::random_graph(rng, 9, 0.5, 0.3);
    std::vector<GroupId> sel;
    for (std::size_t i = 0; i < 6; ++i) sel.push_back(group_id(8 - i));
    const auto s = aggregate(GroupingState::singletons(g), sel).state;
    LayoutState l = random_layout(s, 1);
    const StyleConfig style;
    update_extents(l, s, style);
    const auto m = SceneContext(g, s, l, style).matrix_glyph(group_id(9));
    const auto adj = oracle::matrix(g);
    REQUIRE(m.cells.size() == 36);
    for (std::size_t r = 0; r < 6; ++r)
      for (std::size_t c = 0; c < 6; ++c) {
        const auto& cell = m.at(r, c);
        CHECK(cell.multiplicity == static_cast<std::size_t>(adj[index(m.order[r])][index(m.order[c])]));
        CHECK(cell.diagonal == (r == c));
      }
  }
}

TEST_CASE("links leave the matrix on the side facing the other end") {
  const auto f = k4_with_neighbours();
  const SceneContext ctx(f.doc, f.grouping, f.layout, f.style);
  const auto& gl = ctx.glyph(group_id(6));
  for (const auto& e : f.doc.edges()) {
    if (f.grouping.group_of(e.source) == f.grouping.group_of(e.target)) {
      CHECK_THROWS_AS(route_edge(ctx, e.id), OperationError);
      continue;
    }
    const auto p = route_edge(ctx, e.id);
    REQUIRE(p.source_side);
    const double k = static_cast<double>(gl.ordinal.at(e.source)) + 0.5;
    if (index(e.target) == 4) {
      CHECK(*p.source_side == Side::right);
      CHECK(p.points[0].x == doctest::Approx(gl.frame.right()));
      CHECK(p.points[0].y == doctest::Approx(gl.grid.y + k * gl.cell));
    } else {
      CHECK(*p.source_side == Side::top);
      CHECK(p.points[0].y == doctest::Approx(gl.frame.top()));
      CHECK(p.points[0].x == doctest::Approx(gl.grid.x + k * gl.cell));
    }
    // The node end sits on the node circle.
    const Vec2 c = f.layout.position(f.grouping.group_of(e.target));
    CHECK(norm(p.points[1] - c) == doctest::Approx(f.style.node_radius));
    CHECK(p.width == doctest::Approx(f.style.link_thickness));
  }
}

TEST_CASE("thick bundles merge into bands, ink conserved") {
  auto f = k4_with_neighbours();
  f.style.link_thickness = 0.3;
  const auto scene = build_scene(f.doc, f.grouping, f.layout, f.style);
  double ink = 0.0;
  std::size_t bands = 0;
  for (const auto& e : scene.edges) {
    ink += e.width;
    bands += e.band;
  }
  CHECK(ink == doctest::Approx(0.3 * 4));
  CHECK(bands == 2);  // one band per neighbour, single colour class
  f.style.link_thickness = 0.01;
  const auto thin = build_scene(f.doc, f.grouping, f.layout, f.style);
  CHECK(thin.edges.size() == 4);
}

TEST_CASE("bands stack one per colour class") {
  const StyleConfig style;
  std::vector<EdgePath> paths;
  for (int i = 0; i < 5; ++i) {
    EdgePath p;
    p.edges = {edge_id(static_cast<std::size_t>(4 - i))};
    p.points = {{0, 0.1 * i}, {3, 0.1 * i}};
    p.width = 0.2;
    p.color_key = i % 2 ? "b" : "a";
    paths.push_back(p);
  }
  const auto bands = merge_bands(paths, style, 0.5);
  REQUIRE(bands.size() == 2);
  CHECK(bands[0].color_key == "a");
  CHECK(bands[0].width == doctest::Approx(0.6));
  CHECK(bands[1].width == doctest::Approx(0.4));
  CHECK(std::is_sorted(bands[0].edges.begin(), bands[0].edges.end()));
  // Adjacent, non-overlapping.
  CHECK(std::abs(bands[1].points[0].y - bands[0].points[0].y) == doctest::Approx(0.5));
  CHECK(merge_bands(paths, style, 10.0).size() == 5);
}

TEST_CASE("aggregated mode draws one segment per group pair") {
  auto f = k4_with_neighbours();
  const auto under = build_scene(f.doc, f.grouping, f.layout, f.style);
  f.style.edge_mode = EdgeMode::aggregated;
  const auto agg = build_scene(f.doc, f.grouping, f.layout, f.style);
  REQUIRE(agg.edges.size() == 2);
  double ink_a = 0.0;
  double ink_u = 0.0;
  for (const auto& e : agg.edges) ink_a += e.width;
  for (const auto& e : under.edges) ink_u += e.width;
  CHECK(ink_a == doctest::Approx(ink_u));

  // Endpoint is the mean of the member anchors.
  const SceneContext ctx(f.doc, f.grouping, f.layout, f.style);
  const auto aes = aggregated_edges(f.doc, f.grouping);
  for (const auto& ae : aes) {
    Vec2 sum{};
    for (EdgeId e : ae.underlying) sum = sum + route_edge(ctx, e).points[0];
    const auto p = aggregated_edge_geometry(ctx, ae);
    const Vec2 mean = (1.0 / static_cast<double>(ae.underlying.size())) * sum;
    const Vec2 end = p.source_group == group_id(6) ? p.points[0] : p.points[1];
    CHECK(norm(end - mean) < 1e-12);
  }
}

TEST_CASE("bindings drive edge colour and width") {
  auto f = k4_with_neighbours();
  f.style.edge_mode = EdgeMode::aggregated;
  f.style.bindings[{Channel::size, Target::edge}] = Binding{"count", ScaleKind::linear, 0.0, 1.0};
  f.style.bindings[{Channel::fill, Target::edge}] = Binding{"count", ScaleKind::linear, 0.0, 1.0, "#000000", "#ffffff"};
  const SceneContext ctx(f.doc, f.grouping, f.layout, f.style);
  const auto aes = aggregated_edges(f.doc, f.grouping);
  REQUIRE(aes.size() == 2);
  for (const auto& ae : aes) {
    // Both bundles have two edges, so the domain is degenerate; anything finite will do.
    CHECK(std::isfinite(ctx.edge_width(ae.underlying)));
    CHECK(ctx.edge_color(ae.underlying).size() == 7);
  }
}

TEST_CASE("fragments, hashes and svg") {
  const auto f = k4_with_neighbours();
  const auto scene = build_scene(f.doc, f.grouping, f.layout, f.style);
  CHECK(scene.matrices.size() == 1);
  CHECK(scene.nodes.size() == 2);
  CHECK(scene.labels.size() == 3);
  const auto frag = fragment(scene, {group_id(6), group_id(4)});
  CHECK(frag.matrices.size() == 1);
  CHECK(frag.nodes.size() == 1);
  for (const auto& e : frag.edges) CHECK(e.target_group == group_id(4));
  CHECK(fragment(scene, {}).empty());

  CHECK(scene_hash(scene) == scene_hash(build_scene(f.doc, f.grouping, f.layout, f.style)));
  CHECK(scene_hash(scene) != scene_hash(frag));

  const auto svg = render_svg(scene, 400, 300);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("class=\"matrix\"") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg == render_svg(scene, 400, 300));
  CHECK_THROWS_AS(render_svg(scene, 0, 300), InputError);
  const auto blank = render_svg(Scene{}, 10, 10);
  CHECK(blank.find("<path") == std::string::npos);
}
