#include <doctest.h>

#include <cmath>

#include "nodetrix/generators.hpp"
#include "nodetrix/patterns.hpp"
#include "nodetrix/suggest.hpp"
#include "oracles.hpp"

using namespace nodetrix;

namespace {

std::vector<NodeId> all_nodes(const GraphDocument& g) {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < g.node_count(); ++i) out.push_back(node_id(i));
  return out;
}

struct Measures {
  double density = 0.0;
  double dominance = 0.0;
  double residual = 0.0;
  std::size_t hub = 0;
};

// Straight from the adjacency matrix restricted to `sub`.
Measures measure(const std::vector<std::vector<int>>& adj, const std::vector<std::size_t>& sub) {
  const std::size_t k = sub.size();
  auto dens = [&](const std::vector<std::size_t>& v) {
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = i + 1; j < v.size(); ++j) pairs += adj[v[i]][v[j]] > 0;
    return v.size() < 2 ? 0.0 : 2.0 * static_cast<double>(pairs) / (static_cast<double>(v.size()) * (v.size() - 1));
  };
  Measures m;
  m.density = dens(sub);
  std::size_t best = 0;
  m.hub = sub[0];
  for (std::size_t a : sub) {
    std::size_t d = 0;
    for (std::size_t b : sub) d += a != b && adj[a][b] > 0;
    if (d > best || (d == best && a < m.hub)) {
      best = d;
      m.hub = a;
    }
  }
  m.dominance = static_cast<double>(best) / static_cast<double>(k - 1);
  std::vector<std::size_t> rest;
  for (std::size_t a : sub)
    if (a != m.hub) rest.push_back(a);
  m.residual = dens(rest);
  return m;
}

Pattern expected(const Measures& m, const PatternThresholds& th) {
  if (m.dominance >= th.hub && m.residual <= th.sparse) return Pattern::cross;
  if (m.density >= th.dense) return Pattern::block;
  if (m.dominance >= th.hub) return Pattern::mixed;
  return Pattern::unclassified;
}

// Q = sum_c [ L_c / m - gamma * (D_c / 2m)^2 ] over distinct-pair weights.
double brute_modularity(const GraphDocument& g, const std::vector<int>& comm, double gamma) {
  const auto adj = oracle::matrix(g);
  const std::size_t n = adj.size();
  double m = 0.0;
  std::vector<double> deg(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      deg[i] += adj[i][j];
      if (i < j) m += adj[i][j];
    }
  std::map<int, double> inside;
  std::map<int, double> total;
  for (std::size_t i = 0; i < n; ++i) {
    total[comm[i]] += deg[i];
    for (std::size_t j = i + 1; j < n; ++j)
      if (comm[i] == comm[j]) inside[comm[i]] += adj[i][j];
  }
  double q = 0.0;
  for (auto [c, d] : total) q += inside[c] / m - gamma * (d / (2 * m)) * (d / (2 * m));
  return q;
}

}  // namespace

TEST_CASE("stars are crosses and cliques are blocks") {
  for (std::size_t k = 3; k <= 8; ++k) {
    const auto s = oracle::star(k);
    const auto r = classify_members(s, all_nodes(s));
    CHECK(r.pattern == Pattern::cross);
    CHECK(r.dominant == node_id(0));
    const auto c = oracle::clique(k);
    CHECK(classify_members(c, all_nodes(c)).pattern == Pattern::block);
  }
}

TEST_CASE("a hub joining two triangles is mixed") {
  const auto g = oracle::from_pairs(7, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {0, 6}, {1, 2}, {2, 3}, {1, 3}, {4, 5}, {5, 6}, {4, 6}});
  const auto r = classify_members(g, all_nodes(g));
  CHECK(r.pattern == Pattern::mixed);
  CHECK(r.dominant == node_id(0));
  CHECK(r.residual_density == doctest::Approx(0.4));
}

TEST_CASE("small groups are unclassified with a reason") {
  const auto g = oracle::from_pairs(2, {{0, 1}});
  const auto r = classify_members(g, all_nodes(g));
  CHECK(r.pattern == Pattern::unclassified);
  CHECK(!r.reason.empty());
}

TEST_CASE("classification agrees with the brute-force rule on random groups") {
  Rng rng(31);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t k = 3 + rng.below(6);
    const double p = rng.uniform(0.0, 1.0);
    auto g = oracle::random_graph(rng, k, p, 0.2);
    if (rng.chance(0.5)) {
      // Bolt on a hub.
      for (std::size_t i = 1; i < k; ++i) g.add_edge(node_id(0), node_id(i));
    }
    PatternThresholds th;
    if (rng.chance(0.3)) th = {rng.uniform(0.5, 1.0), rng.uniform(0.0, 0.5), rng.uniform(0.3, 1.0)};
    std::vector<std::size_t> sub;
    for (std::size_t i = 0; i < k; ++i) sub.push_back(i);
    const auto want = measure(oracle::matrix(g), sub);
    const auto got = classify_members(g, all_nodes(g), th);
    REQUIRE(got.density == doctest::Approx(want.density).epsilon(1e-12));
    REQUIRE(got.dominance == doctest::Approx(want.dominance).epsilon(1e-12));
    REQUIRE(got.residual_density == doctest::Approx(want.residual).epsilon(1e-12));
    REQUIRE(got.pattern == expected(want, th));
    if (got.pattern == Pattern::cross || got.pattern == Pattern::mixed) REQUIRE(got.dominant == node_id(want.hub));
  }
}

TEST_CASE("classify_all covers groups of three or more") {
  const auto g = oracle::from_pairs(6, {{0, 1}, {0, 2}, {3, 4}});
  auto s = aggregate(GroupingState::singletons(g), std::array{group_id(0), group_id(1), group_id(2)}).state;
  s = aggregate(s, std::array{group_id(3), group_id(4)}).state;
  const auto all = classify_all(g, s);
  REQUIRE(all.size() == 1);
  CHECK(all[0].pattern == Pattern::cross);
  CHECK(to_json(all[0], g)["class"] == "cross");
  CHECK(report_table(all, g, s).find("cross") != std::string::npos);
  CHECK_THROWS_AS((PatternThresholds{1.5, 0.1, 0.5}.validate()), InputError);
}

TEST_CASE("suggestion finds planted cliques") {
  // Three K5s in a ring, one edge between neighbours.
  std::vector<std::pair<int, int>> pairs;
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) pairs.push_back({5 * c + i, 5 * c + j});
    pairs.push_back({5 * c, (5 * c + 5) % 15});
  }
  const auto g = oracle::from_pairs(15, pairs);
  const auto r = suggest_communities(g);
  REQUIRE(r.communities.size() == 3);
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 5; ++i) CHECK(r.communities[c][i] == node_id(5 * c + i));
  std::vector<int> comm(15);
  for (int i = 0; i < 15; ++i) comm[i] = i / 5;
  CHECK(r.modularity == doctest::Approx(brute_modularity(g, comm, 1.0)).epsilon(1e-12));
}

TEST_CASE("reported modularity matches the brute-force value") {
  Rng rng(32);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = oracle::random_graph(rng, 20, 0.15, 0.2);
    if (g.edge_count() == 0) continue;
    const double gamma = trial % 3 == 0 ? 0.5 : 1.0;
    const auto r = suggest_communities(g, gamma);
    std::vector<int> comm(20);
    for (int i = 0; i < 20; ++i) comm[i] = 100 + i;  // singletons
    for (std::size_t c = 0; c < r.communities.size(); ++c)
      for (NodeId n : r.communities[c]) comm[index(n)] = static_cast<int>(c);
    CHECK(r.modularity == doctest::Approx(brute_modularity(g, comm, gamma)).epsilon(1e-9));
    // Never worse than leaving every node alone.
    std::vector<int> alone(20);
    for (int i = 0; i < 20; ++i) alone[i] = i;
    CHECK(r.modularity >= brute_modularity(g, alone, gamma) - 1e-12);
  }
}

TEST_CASE("suggestion output is a valid grouping file") {
  const auto g = generate_random_graph(40, 0.1, 3);
  const auto r = suggest_communities(g);
  const auto j = suggestion_json(g, r);
  const auto s = load_grouping(j, g);
  CHECK(s.group_count() >= r.communities.size());
  CHECK(suggestion_json(g, suggest_communities(g)) == j);
}
