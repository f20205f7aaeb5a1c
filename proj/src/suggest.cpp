#include "nodetrix/suggest.hpp"

#include "nodetrix/util.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace nodetrix {

SuggestResult suggest_communities(const GraphDocument& doc, double resolution) {
  if (!(resolution > 0.0)) throw InputError("resolution must be positive");
  const std::size_t n = doc.node_count();
  std::vector<std::map<std::size_t, double>> between(n);
  std::vector<double> degree(n, 0.0);
  double m = 0.0;
  for (const Edge& e : doc.edges()) {
    const std::size_t a = index(e.source);
    const std::size_t b = index(e.target);
    if (a == b) continue;
    between[a][b] += 1.0;
    between[b][a] += 1.0;
    degree[a] += 1.0;
    degree[b] += 1.0;
    m += 1.0;
  }

  std::vector<std::vector<NodeId>> members(n);
  std::vector<bool> alive(n, true);
  for (std::size_t i = 0; i < n; ++i) members[i] = {node_id(i)};

  SuggestResult out;
  if (m == 0.0) return out;

  for (;;) {
    double best = 0.0;
    std::size_t bi = n;
    std::size_t bj = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      for (const auto& [j, w] : between[i]) {
        if (j <= i) continue;
        const double gain = w / m - resolution * degree[i] * degree[j] / (2.0 * m * m);
        if (gain > best) {
          best = gain;
          bi = i;
          bj = j;
        }
      }
    }
    if (bi == n) break;
    // Fold bj into bi.
    for (const auto& [k, w] : between[bj]) {
      if (k == bi) continue;
      between[bi][k] += w;
      between[k][bi] += w;
      between[k].erase(bj);
    }
    between[bi].erase(bj);
    between[bj].clear();
    degree[bi] += degree[bj];
    members[bi].insert(members[bi].end(), members[bj].begin(), members[bj].end());
    members[bj].clear();
    alive[bj] = false;
  }

  // Modularity of the final partition.
  std::vector<std::size_t> community(n);
  for (std::size_t c = 0; c < n; ++c)
    for (NodeId v : members[c]) community[index(v)] = c;
  std::vector<double> internal(n, 0.0);
  std::vector<double> total(n, 0.0);
  for (const Edge& e : doc.edges()) {
    const std::size_t a = index(e.source);
    const std::size_t b = index(e.target);
    if (a == b) continue;
    total[community[a]] += 1.0;
    total[community[b]] += 1.0;
    if (community[a] == community[b]) internal[community[a]] += 1.0;
  }
  for (std::size_t c = 0; c < n; ++c) {
    if (!alive[c]) continue;
    out.modularity += internal[c] / m - resolution * (total[c] / (2.0 * m)) * (total[c] / (2.0 * m));
    if (members[c].size() < 2) continue;
    std::sort(members[c].begin(), members[c].end());
    out.communities.push_back(members[c]);
  }
  std::sort(out.communities.begin(), out.communities.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

nlohmann::json suggestion_json(const GraphDocument& doc, const SuggestResult& r) {
  auto groups = nlohmann::json::array();
  for (std::size_t i = 0; i < r.communities.size(); ++i) {
    auto names = nlohmann::json::array();
    for (NodeId v : r.communities[i]) names.push_back(doc.name(v));
    groups.push_back({{"id", i}, {"members", std::move(names)}});
  }
  return {{"groups", std::move(groups)}, {"modularity", r.modularity}};
}

}  // namespace nodetrix
