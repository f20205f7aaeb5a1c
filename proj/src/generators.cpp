#include "nodetrix/generators.hpp"

#include <algorithm>
#include <cmath>

#include "nodetrix/util.hpp"

namespace nodetrix {

GraphDocument generate_coauthorship(const CoauthorshipParams& params) {
  Rng rng(params.seed);
  GraphDocument doc;
  const auto label = doc.node_attributes().declare("label", AttributeKind::nominal);
  const auto lab_col = doc.node_attributes().declare("lab", AttributeKind::categorical);
  const auto year_col = doc.edge_attributes().declare("year", AttributeKind::numeric);

  const std::size_t labs = std::max<std::size_t>(1, std::min(params.labs, params.authors));
  std::vector<std::vector<NodeId>> members(labs);
  // Lab sizes skew heavily: lab k receives weight 1/(k+1).
  std::vector<double> cumulative(labs);
  double total = 0.0;
  for (std::size_t k = 0; k < labs; ++k) cumulative[k] = total += 1.0 / static_cast<double>(k + 1);

  for (std::size_t i = 0; i < params.authors; ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "a%04zu", i);
    const NodeId n = doc.add_node(name);
    doc.node_attributes().set(label, i, Nominal{"Author " + std::to_string(i)});
    const std::size_t lab =
        i < labs ? i : static_cast<std::size_t>(std::lower_bound(cumulative.begin(), cumulative.end(), rng.uniform(0.0, total)) -
                                               cumulative.begin());
    members[lab].push_back(n);
    doc.node_attributes().set(lab_col, i, Categorical{"lab" + std::to_string(lab)});
  }

  std::vector<std::vector<NodeId>> teams;
  for (std::size_t p = 0; p < params.papers; ++p) {
    std::vector<NodeId> team;
    if (!teams.empty() && rng.chance(params.repeat_probability)) {
      team = teams[rng.below(teams.size())];
    } else {
      const std::size_t lab = static_cast<std::size_t>(
          std::lower_bound(cumulative.begin(), cumulative.end(), rng.uniform(0.0, total)) - cumulative.begin());
      const auto& pool = members[lab];
      if (pool.empty()) continue;
      // Senior author: the lab's first member, most of the time.
      team.push_back(rng.chance(0.6) ? pool.front() : pool[rng.below(pool.size())]);
      const double r = rng.uniform();
      const std::size_t size = r < 0.15 ? 1 : r < 0.65 ? 2 : r < 0.9 ? 3 : 4;
      for (std::size_t t = 1; t < size; ++t) {
        const auto& from = rng.chance(params.cross_lab_probability) ? members[rng.below(labs)] : pool;
        if (from.empty()) continue;
        const NodeId a = from[rng.below(from.size())];
        if (std::find(team.begin(), team.end(), a) == team.end()) team.push_back(a);
      }
    }
    const double year = 1995.0 + static_cast<double>(rng.below(10));
    for (std::size_t i = 0; i < team.size(); ++i) {
      for (std::size_t j = i + 1; j < team.size(); ++j) {
        const EdgeId e = doc.add_edge(team[i], team[j]);
        doc.edge_attributes().set(year_col, index(e), year);
      }
    }
    teams.push_back(std::move(team));
  }
  return doc;
}

GraphDocument generate_random_graph(std::size_t nodes, double edge_probability, std::uint64_t seed) {
  Rng rng(seed);
  GraphDocument doc;
  for (std::size_t i = 0; i < nodes; ++i) doc.add_node(std::to_string(i));
  for (std::size_t i = 0; i < nodes; ++i)
    for (std::size_t j = i + 1; j < nodes; ++j)
      if (rng.chance(edge_probability)) doc.add_edge(node_id(i), node_id(j));
  return doc;
}

}  // namespace nodetrix
