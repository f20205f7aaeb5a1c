#include <doctest.h>

#include <cmath>

#include "nodetrix/animation.hpp"
#include "oracles.hpp"

using namespace nodetrix;

namespace {

struct Fixture {
  GraphDocument doc;
  GroupingState grouping;
  LayoutState layout;
  StyleConfig style;
  GroupId group{};
};

// Random graph with one group of `k` random members; everything else stays single.
Fixture random_fixture(Rng& rng, std::size_t n, std::size_t k) {
  Fixture f;
  f.doc = oracle::random_graph(rng, n, 0.35, 0.2);
  std::vector<GroupId> pool;
  for (std::size_t i = 0; i < n; ++i) pool.push_back(group_id(i));
  std::vector<GroupId> sel;
  while (sel.size() < k) {
    const std::size_t i = rng.below(pool.size());
    sel.push_back(pool[i]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
  }
  const auto t = aggregate(GroupingState::singletons(f.doc), sel);
  f.grouping = t.state;
  f.group = t.edit.result;
  f.layout = random_layout(f.grouping, rng.below(1000));
  for (auto& [g, p] : f.layout.positions) p = 4.0 * p;
  update_extents(f.layout, f.grouping, f.style);
  return f;
}

AnimationPlan plan(const Fixture& f, const AnimationSpec& spec) {
  return plan_transition(f.doc, f.grouping, f.layout, f.style, f.group, spec);
}

Vec2 quad_at(const std::vector<Vec2>& p, double u) {
  return (1 - u) * (1 - u) * p[0] + 2 * u * (1 - u) * p[1] + u * u * p[2];
}

}  // namespace

TEST_CASE("schedules tile the interval") {
  AnimationSpec spec;
  spec.sequencing = Sequencing::per_edge;
  const auto eq = sequence_schedule(spec, 4, 0.2, 0.6);
  REQUIRE(eq.size() == 4);
  CHECK(eq.front().first == 0.2);
  CHECK(eq.back().second == 0.6);
  for (std::size_t i = 1; i < 4; ++i) CHECK(eq[i].first == eq[i - 1].second);
  CHECK(eq[1].second - eq[1].first == doctest::Approx(0.1));

  spec.accelerate = true;
  spec.ratio = 0.5;
  const auto geo = sequence_schedule(spec, 3, 0.0, 1.0);
  CHECK(geo[0].second == doctest::Approx(4.0 / 7.0));
  CHECK(geo[1].second - geo[1].first == doctest::Approx(2.0 / 7.0));
  CHECK(geo[2].second == 1.0);
}

TEST_CASE("spec json and validation") {
  auto spec = animation_spec_from_json(nlohmann::json::parse(
      R"({"edges":"polyline","placement":"sides","extent":"upper-half","sequencing":"per-node","direction":"to-node-link","preset":"novice"})"));
  CHECK(spec.edges == EdgeDepiction::polyline);
  CHECK(spec.placement == NodePlacement::sides);
  CHECK(spec.extent == MatrixExtent::upper_half);
  CHECK(spec.sequencing == Sequencing::per_node);
  CHECK(spec.direction == Direction::to_node_link);
  CHECK(spec.duration == 3.0);
  CHECK(animation_spec_from_json(to_json(spec)) == spec);
  CHECK_THROWS_AS(animation_spec_from_json(nlohmann::json::parse(R"({"edges":"wavy"})")), InputError);
  spec.stage_a = 0.5;
  CHECK_THROWS_AS(spec.validate(), InputError);
}

TEST_CASE("end points equal the static scenes") {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_fixture(rng, 10, 2 + rng.below(5));
    for (auto placement : {NodePlacement::diagonal, NodePlacement::sides})
      for (auto extent : {MatrixExtent::full, MatrixExtent::upper_half}) {
        AnimationSpec spec;
        spec.placement = placement;
        spec.extent = extent;
        const auto p = plan(f, spec);
        CHECK(scene_hash(p.scene_at(0.0)) == scene_hash(p.source()));
        CHECK(scene_hash(p.scene_at(1.0)) == scene_hash(p.target()));
        CHECK(p.target() == fragment(build_scene(f.doc, f.grouping, f.layout, f.style), {f.group}));
      }
  }
}

TEST_CASE("corners land on their cells when interpolation ends") {
  Rng rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_fixture(rng, 12, 3 + rng.below(5));
    for (auto seq : {Sequencing::simultaneous, Sequencing::per_edge, Sequencing::per_node}) {
      AnimationSpec spec;
      spec.sequencing = seq;
      spec.accelerate = trial % 2 == 0;
      const auto p = plan(f, spec);
      const auto k = p.sample(p.stage_b_end());
      const auto& m = p.target().matrices.front();
      for (const auto& c : k.curves) {
        CHECK(norm(c.corner - m.cell_center(c.row, c.col)) < 1e-9);
        // The quadratic passes through its corner halfway.
        CHECK(norm(quad_at(c.points, 0.5) - c.corner) < 1e-9);
      }
      for (const auto& n : k.nodes) {
        std::size_t i = 0;
        while (m.order[i] != n.node) ++i;
        CHECK(norm(n.center - m.cell_center(i, i)) < 1e-9);
      }
    }
  }
}

TEST_CASE("curves go to the upper cell and duplicates to the mirror") {
  Rng rng(23);
  const auto f = random_fixture(rng, 8, 5);
  const auto p = plan(f, {});
  std::size_t originals = 0;
  for (const auto& c : p.sample(0.5).curves) {
    if (c.duplicate) CHECK(c.row > c.col);
    else {
      CHECK(c.row < c.col);
      ++originals;
    }
  }
  CHECK(originals == p.curves().size());
  AnimationSpec half;
  half.extent = MatrixExtent::upper_half;
  for (const auto& c : plan(f, half).sample(0.5).curves) CHECK(!c.duplicate);
}

TEST_CASE("cross-fade removes the corner last") {
  Rng rng(24);
  const auto f = random_fixture(rng, 10, 5);
  const auto p = plan(f, {});
  const double b_end = p.stage_b_end();
  for (double tau : {0.1, 0.4, 0.6, 0.9}) {
    const auto k = p.sample(b_end + tau * (1.0 - b_end));
    CHECK(k.matrix_opacity == doctest::Approx(tau));
    for (const auto& c : k.curves) {
      REQUIRE(c.segment_opacity.size() == kFadeSegments);
      for (std::size_t s = 0; s < kFadeSegments; ++s) {
        const double mid = (s + 0.5) / kFadeSegments;
        const double delta = std::abs(mid - 0.5) / 0.5;
        const double want = std::clamp(1.0 - (tau - 0.5 * (1.0 - delta)) / 0.5, 0.0, 1.0);
        CHECK(c.segment_opacity[s] == doctest::Approx(want));
      }
      // Inner segments never fade before outer ones.
      CHECK(c.segment_opacity[3] >= c.segment_opacity[0]);
    }
  }
}

TEST_CASE("reverse direction mirrors the forward animation") {
  Rng rng(25);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_fixture(rng, 9, 4);
    AnimationSpec fwd;
    AnimationSpec rev;
    rev.direction = Direction::to_node_link;
    const auto pf = plan(f, fwd);
    const auto pr = plan(f, rev);
    const auto ff = pf.frames(13);
    const auto fr = pr.frames(13);
    for (std::size_t i = 0; i < 13; ++i)
      CHECK(scene_hash(pr.scene(fr[i])) == scene_hash(pf.scene(ff[12 - i])));
    CHECK(scene_hash(pr.scene_at(0.0)) == scene_hash(pf.target()));
    CHECK(scene_hash(pr.scene_at(1.0)) == scene_hash(pf.source()));
  }
}

TEST_CASE("animation errors") {
  Rng rng(26);
  const auto f = random_fixture(rng, 6, 3);
  const auto p = plan(f, {});
  CHECK_THROWS_AS(p.sample(-0.01), OperationError);
  CHECK_THROWS_AS(p.sample(1.5), OperationError);
  CHECK_THROWS_AS(p.frames(1), InputError);
  GroupId single{};
  for (const auto& [g, m] : f.grouping.groups())
    if (m.size() == 1) single = g;
  CHECK_THROWS_AS(plan_transition(f.doc, f.grouping, f.layout, f.style, single, {}), OperationError);
  CHECK_THROWS_AS(plan_transition(f.doc, f.grouping, f.layout, f.style, group_id(999), {}), InputError);
}
