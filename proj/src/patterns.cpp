#include "nodetrix/patterns.hpp"

#include "nodetrix/util.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

namespace nodetrix {

std::string_view to_string(Pattern p) {
  switch (p) {
    case Pattern::cross: return "cross";
    case Pattern::block: return "block";
    case Pattern::mixed: return "mixed";
    case Pattern::unclassified: return "unclassified";
  }
  return "unclassified";
}

void PatternThresholds::validate() const {
  for (double v : {hub, sparse, dense})
    if (!(v >= 0.0 && v <= 1.0)) throw InputError("pattern thresholds must lie in [0, 1]");
}

PatternReport classify_members(const GraphDocument& doc, std::span<const NodeId> members, const PatternThresholds& th) {
  th.validate();
  PatternReport r;
  const std::size_t k = members.size();
  if (k < 3) {
    r.reason = "fewer than three members";
    return r;
  }
  std::map<NodeId, std::size_t> ordinal;
  for (std::size_t i = 0; i < k; ++i) ordinal[members[i]] = i;
  if (ordinal.size() != k) throw InputError("duplicate member in pattern input");

  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (NodeId n : members) {
    for (EdgeId e : doc.incident(n)) {
      const NodeId o = doc.opposite(e, n);
      auto it = ordinal.find(o);
      if (it == ordinal.end() || o == n) continue;
      const std::size_t a = ordinal[n];
      const std::size_t b = it->second;
      pairs.insert({std::min(a, b), std::max(a, b)});
    }
  }
  std::vector<std::size_t> deg(k, 0);
  for (const auto& [a, b] : pairs) {
    ++deg[a];
    ++deg[b];
  }
  const double kk = static_cast<double>(k);
  r.density = static_cast<double>(pairs.size()) / (kk * (kk - 1.0) / 2.0);

  // Ties go to the smallest node id; any tied member removes the same number of pairs.
  std::size_t hub = 0;
  for (std::size_t i = 1; i < k; ++i)
    if (deg[i] > deg[hub] || (deg[i] == deg[hub] && members[i] < members[hub])) hub = i;
  r.dominant = members[hub];
  r.dominance = static_cast<double>(deg[hub]) / (kk - 1.0);
  r.residual_density = static_cast<double>(pairs.size() - deg[hub]) / ((kk - 1.0) * (kk - 2.0) / 2.0);

  if (r.dominance >= th.hub && r.residual_density <= th.sparse) {
    r.pattern = Pattern::cross;
  } else if (r.density >= th.dense) {
    r.pattern = Pattern::block;
  } else if (r.dominance >= th.hub) {
    r.pattern = Pattern::mixed;
  } else {
    r.pattern = Pattern::unclassified;
    r.reason = "no dominant member and not dense";
  }
  if (r.pattern != Pattern::cross && r.pattern != Pattern::mixed && r.dominance < th.hub) r.dominant.reset();
  return r;
}

PatternReport classify(const GraphDocument& doc, const GroupingState& s, GroupId g, const PatternThresholds& th) {
  if (!s.contains(g)) throw InputError("unknown group " + std::to_string(value(g)));
  PatternReport r = classify_members(doc, s.members(g), th);
  r.group = g;
  return r;
}

std::vector<PatternReport> classify_all(const GraphDocument& doc, const GroupingState& s, const PatternThresholds& th) {
  std::vector<PatternReport> out;
  for (const auto& [g, members] : s.groups())
    if (members.size() >= 3) out.push_back(classify(doc, s, g, th));
  return out;
}

nlohmann::json to_json(const PatternReport& r, const GraphDocument& doc) {
  nlohmann::json j{{"group", value(r.group)},
                   {"class", to_string(r.pattern)},
                   {"density", r.density},
                   {"dominance", r.dominance},
                   {"residual_density", r.residual_density}};
  j["dominant"] = r.dominant ? nlohmann::json(doc.name(*r.dominant)) : nlohmann::json();
  if (!r.reason.empty()) j["reason"] = r.reason;
  return j;
}

std::string report_table(const std::vector<PatternReport>& reports, const GraphDocument& doc, const GroupingState& s) {
  std::string out = "group  size  class         density  dominance  residual  dominant\n";
  char line[256];
  for (const auto& r : reports) {
    std::snprintf(line, sizeof line, "%-6llu %-5zu %-13s %-8s %-10s %-9s %s\n",
                  static_cast<unsigned long long>(value(r.group)), s.members(r.group).size(),
                  std::string(to_string(r.pattern)).c_str(), format_fixed(r.density).c_str(),
                  format_fixed(r.dominance).c_str(), format_fixed(r.residual_density).c_str(),
                  r.dominant ? doc.name(*r.dominant).c_str() : "-");
    out += line;
  }
  return out;
}

}  // namespace nodetrix
