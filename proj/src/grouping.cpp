#include "nodetrix/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "nodetrix/util.hpp"

namespace nodetrix {

namespace {

std::string gid_text(GroupId g) { return std::to_string(value(g)); }

const std::vector<NodeId>& require(const GroupingState& s, GroupId g) {
  if (!s.contains(g)) throw OperationError("unknown group " + gid_text(g));
  return s.members(g);
}

// Records of `removed` taken from `before`, of `added` from `after`.
GroupDelta make_delta(const GroupingState& before, const GroupingState& after, std::span<const GroupId> removed,
                      std::span<const GroupId> added) {
  GroupDelta d;
  for (GroupId g : removed) d.removed.push_back(before.record(g));
  for (GroupId g : added) d.added.push_back(after.record(g));
  return d;
}

}  // namespace

// ---------------------------------------------------------------- GroupingState

GroupingState GroupingState::singletons(const GraphDocument& doc) {
  GroupingState s;
  s.membership_.resize(doc.node_count());
  for (std::size_t i = 0; i < doc.node_count(); ++i) s.insert({group_id(i), {node_id(i)}, std::nullopt});
  s.next_id_ = doc.node_count();
  return s;
}

const std::vector<NodeId>& GroupingState::members(GroupId g) const {
  auto it = groups_.find(g);
  if (it == groups_.end()) throw OperationError("unknown group " + gid_text(g));
  return it->second;
}

GroupId GroupingState::group_of(NodeId n) const {
  if (index(n) >= membership_.size() || !membership_[index(n)])
    throw OperationError("node " + std::to_string(index(n)) + " belongs to no group");
  return *membership_[index(n)];
}

std::optional<std::string> GroupingState::label_override(GroupId g) const {
  auto it = labels_.find(g);
  if (it == labels_.end()) return std::nullopt;
  return it->second;
}

GroupRecord GroupingState::record(GroupId g) const { return {g, members(g), label_override(g)}; }

void GroupingState::insert(const GroupRecord& rec) {
  if (groups_.contains(rec.id)) throw InvariantError("group " + gid_text(rec.id) + " already exists");
  if (rec.members.empty()) throw InvariantError("group " + gid_text(rec.id) + " has no members");
  for (NodeId n : rec.members) {
    if (index(n) >= membership_.size()) membership_.resize(index(n) + 1);
    if (membership_[index(n)]) throw InvariantError("node " + std::to_string(index(n)) + " is already grouped");
    membership_[index(n)] = rec.id;
  }
  groups_.emplace(rec.id, rec.members);
  if (rec.label) labels_[rec.id] = *rec.label;
  next_id_ = std::max(next_id_, value(rec.id) + 1);
}

void GroupingState::erase(GroupId g) {
  auto it = groups_.find(g);
  if (it == groups_.end()) throw InvariantError("erasing unknown group " + gid_text(g));
  for (NodeId n : it->second) membership_[index(n)].reset();
  groups_.erase(it);
  labels_.erase(g);
}

void GroupingState::set_label(GroupId g, std::optional<std::string> label) {
  if (!contains(g)) throw OperationError("unknown group " + gid_text(g));
  if (label)
    labels_[g] = *label;
  else
    labels_.erase(g);
}

void GroupingState::check_invariants() const {
  std::size_t seen = 0;
  for (const auto& [g, members] : groups_) {
    if (members.empty()) throw InvariantError("empty group " + gid_text(g));
    std::set<NodeId> unique(members.begin(), members.end());
    if (unique.size() != members.size()) throw InvariantError("duplicate member in group " + gid_text(g));
    for (NodeId n : members) {
      if (index(n) >= membership_.size() || membership_[index(n)] != g)
        throw InvariantError("membership disagrees with group " + gid_text(g));
    }
    if (value(g) >= next_id_) throw InvariantError("group id beyond id counter");
    seen += members.size();
  }
  for (std::size_t i = 0; i < membership_.size(); ++i)
    if (!membership_[i]) throw InvariantError("node " + std::to_string(i) + " belongs to no group");
  if (seen != membership_.size()) throw InvariantError("groups do not partition the nodes");
  for (const auto& [g, label] : labels_)
    if (!groups_.contains(g)) throw InvariantError("label for missing group " + gid_text(g));
}

std::string_view to_string(EditKind kind) {
  switch (kind) {
    case EditKind::aggregate: return "aggregate";
    case EditKind::split: return "split";
    case EditKind::add: return "add";
    case EditKind::extract: return "extract";
    case EditKind::move: return "move";
    case EditKind::merge: return "merge";
    case EditKind::reorder: return "reorder";
  }
  return "aggregate";
}

// ---------------------------------------------------------------- operations

Transition aggregate(const GroupingState& s, std::span<const GroupId> selection) {
  if (selection.empty()) throw OperationError("aggregate needs a nonempty selection");
  std::set<GroupId> unique(selection.begin(), selection.end());
  if (unique.size() != selection.size()) throw OperationError("aggregate selection lists a group twice");
  for (GroupId g : selection) require(s, g);

  if (selection.size() == 1) {
    const GroupId g = selection.front();
    return {s, {EditKind::aggregate, {}, g, {g}, {}, {}, {}}};
  }

  std::vector<NodeId> members;
  for (GroupId g : selection) {
    const auto& m = s.members(g);
    members.insert(members.end(), m.begin(), m.end());
  }
  Transition t{s, {}};
  for (GroupId g : selection) t.state.erase(g);
  const GroupId fresh = t.state.fresh_id();
  t.state.insert({fresh, std::move(members), std::nullopt});
  const std::vector<GroupId> sel(selection.begin(), selection.end());
  t.edit = {EditKind::aggregate, make_delta(s, t.state, sel, std::array{fresh}), fresh, sel, {fresh}, sel, {}};
  return t;
}

Transition split(const GroupingState& s, GroupId g) {
  const auto& members = require(s, g);
  if (members.size() < 2) throw OperationError("group " + gid_text(g) + " has a single member; nothing to split");
  Transition t{s, {}};
  t.state.erase(g);
  std::vector<GroupId> created;
  for (NodeId n : members) {
    const GroupId fresh = t.state.fresh_id();
    t.state.insert({fresh, {n}, std::nullopt});
    created.push_back(fresh);
  }
  t.edit = {EditKind::split, make_delta(s, t.state, std::array{g}, created), created.front(), {g}, created, {g}, {}};
  return t;
}

Transition add_node_to_group(const GroupingState& s, GroupId node_group, GroupId g) {
  const auto& single = require(s, node_group);
  require(s, g);
  if (node_group == g) throw OperationError("cannot add a group to itself");
  if (single.size() != 1) throw OperationError("group " + gid_text(node_group) + " is not a single node; merge instead");
  Transition t{s, {}};
  const NodeId n = single.front();
  GroupRecord target = s.record(g);
  target.members.push_back(n);
  t.state.erase(node_group);
  t.state.erase(g);
  t.state.insert(target);
  t.edit = {EditKind::add,
            make_delta(s, t.state, std::array{node_group, g}, std::array{g}),
            g,
            {node_group, g},
            {},
            {node_group},
            {g}};
  return t;
}

Transition extract_node(const GroupingState& s, GroupId g, NodeId n) {
  const auto& members = require(s, g);
  auto it = std::find(members.begin(), members.end(), n);
  if (it == members.end())
    throw OperationError("node " + std::to_string(index(n)) + " is not a member of group " + gid_text(g));
  if (members.size() == 1) throw OperationError("node " + std::to_string(index(n)) + " is already a single node");
  Transition t{s, {}};
  GroupRecord rest = s.record(g);
  rest.members.erase(rest.members.begin() + (it - members.begin()));
  t.state.erase(g);
  t.state.insert(rest);
  const GroupId fresh = t.state.fresh_id();
  t.state.insert({fresh, {n}, std::nullopt});
  t.edit = {EditKind::extract, make_delta(s, t.state, std::array{g}, std::array{g, fresh}), fresh, {g}, {fresh}, {},
            {g}};
  return t;
}

Transition move_item(const GroupingState& s, GroupId from, NodeId n, GroupId to) {
  const auto& source = require(s, from);
  require(s, to);
  if (from == to) throw OperationError("move needs two different groups");
  auto it = std::find(source.begin(), source.end(), n);
  if (it == source.end())
    throw OperationError("node " + std::to_string(index(n)) + " is not a member of group " + gid_text(from));
  if (source.size() == 1) {
    Transition t = add_node_to_group(s, from, to);
    t.edit.kind = EditKind::move;
    return t;
  }
  Transition t{s, {}};
  GroupRecord rest = s.record(from);
  rest.members.erase(rest.members.begin() + (it - source.begin()));
  GroupRecord target = s.record(to);
  target.members.push_back(n);
  t.state.erase(from);
  t.state.erase(to);
  t.state.insert(rest);
  t.state.insert(target);
  t.edit = {EditKind::move, make_delta(s, t.state, std::array{from, to}, std::array{from, to}), to, {from, to}, {}, {},
            {from, to}};
  return t;
}

Transition merge_groups(const GroupingState& s, GroupId a, GroupId b) {
  require(s, a);
  require(s, b);
  if (a == b) throw OperationError("cannot merge a group with itself");
  std::vector<NodeId> members = s.members(a);
  members.insert(members.end(), s.members(b).begin(), s.members(b).end());
  std::sort(members.begin(), members.end());
  Transition t{s, {}};
  t.state.erase(a);
  t.state.erase(b);
  const GroupId fresh = t.state.fresh_id();
  t.state.insert({fresh, std::move(members), std::nullopt});
  t.edit = {EditKind::merge, make_delta(s, t.state, std::array{a, b}, std::array{fresh}), fresh, {a, b}, {fresh},
            {a, b}, {}};
  return t;
}

Transition reorder_member(const GroupingState& s, GroupId g, NodeId n, std::size_t ordinal) {
  const auto& members = require(s, g);
  auto it = std::find(members.begin(), members.end(), n);
  if (it == members.end())
    throw OperationError("node " + std::to_string(index(n)) + " is not a member of group " + gid_text(g));
  if (ordinal >= members.size())
    throw OperationError("ordinal " + std::to_string(ordinal) + " out of range for group of size " +
                         std::to_string(members.size()));
  GroupRecord rec = s.record(g);
  rec.members.erase(rec.members.begin() + (it - members.begin()));
  rec.members.insert(rec.members.begin() + static_cast<std::ptrdiff_t>(ordinal), n);
  Transition t{s, {}};
  t.state.erase(g);
  t.state.insert(rec);
  t.edit = {EditKind::reorder, make_delta(s, t.state, std::array{g}, std::array{g}), g, {g}, {}, {}, {g}};
  return t;
}

GroupingState revert(const GroupingState& s, const GroupDelta& delta) {
  GroupingState out = s;
  for (const auto& rec : delta.added) out.erase(rec.id);
  for (const auto& rec : delta.removed) out.insert(rec);
  return out;
}

// ---------------------------------------------------------------- derived views

std::vector<AggregatedEdge> aggregated_edges(const GraphDocument& doc, const GroupingState& s) {
  std::map<std::pair<GroupId, GroupId>, std::vector<EdgeId>> bundles;
  for (const Edge& e : doc.edges()) {
    GroupId a = s.group_of(e.source);
    GroupId b = s.group_of(e.target);
    if (a == b) continue;
    if (!doc.directed() && b < a) std::swap(a, b);
    bundles[{a, b}].push_back(e.id);
  }
  std::vector<AggregatedEdge> out;
  out.reserve(bundles.size());
  for (auto& [key, edges] : bundles) out.push_back({key.first, key.second, std::move(edges)});
  return out;
}

std::vector<EdgeId> internal_edges(const GraphDocument& doc, const GroupingState& s, GroupId g) {
  std::vector<EdgeId> out;
  for (NodeId n : s.members(g)) {
    for (EdgeId e : doc.incident(n)) {
      const Edge& ed = doc.edge(e);
      // Visit each edge once, from its source.
      if (ed.source == n && s.group_of(ed.target) == g) out.push_back(e);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

AggregatedValue combine(const AttributeColumn& column, std::span<const std::size_t> elements) {
  AggregatedValue v;
  v.kind = column.kind;
  if (column.kind == AttributeKind::numeric) {
    double sum = 0.0;
    v.min = std::numeric_limits<double>::infinity();
    v.max = -std::numeric_limits<double>::infinity();
    for (std::size_t e : elements) {
      const auto* d = std::get_if<double>(&column.values[e]);
      if (!d) continue;
      sum += *d;
      v.min = std::min(v.min, *d);
      v.max = std::max(v.max, *d);
      ++v.count;
    }
    if (v.count == 0) {
      v.mean = v.min = v.max = std::nan("");
    } else {
      v.mean = sum / static_cast<double>(v.count);
    }
    return v;
  }
  for (std::size_t e : elements) {
    if (std::holds_alternative<std::monostate>(column.values[e])) continue;
    if (v.count++ > 0) v.text += '+';
    v.text += value_text(column.values[e]);
  }
  return v;
}

std::vector<AggregatedAttribute> aggregate_attributes(const GraphDocument& doc, const GroupingState& s, GroupId g) {
  std::vector<std::size_t> elements;
  for (NodeId n : s.members(g)) elements.push_back(index(n));
  std::vector<AggregatedAttribute> out;
  for (const auto& col : doc.node_attributes().columns()) out.push_back({col.name, combine(col, elements)});
  return out;
}

std::vector<AggregatedAttribute> aggregate_edge_attributes(const GraphDocument& doc, std::span<const EdgeId> edges) {
  std::vector<std::size_t> elements;
  for (EdgeId e : edges) elements.push_back(index(e));
  std::vector<AggregatedAttribute> out;
  for (const auto& col : doc.edge_attributes().columns()) out.push_back({col.name, combine(col, elements)});
  return out;
}

std::string group_label(const GraphDocument& doc, const GroupingState& s, GroupId g, std::size_t max_length) {
  if (auto o = s.label_override(g)) return *o;
  const auto& members = s.members(g);
  std::string joined;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i > 0) joined += '+';
    joined += doc.label(members[i]);
  }
  if (members.size() == 1 || joined.size() <= max_length) return joined;
  return doc.label(members.front()) + " et al.";
}

// ---------------------------------------------------------------- grouping file

GroupingState load_grouping(const nlohmann::json& j, const GraphDocument& doc) {
  if (!j.is_object() || !j.contains("groups") || !j["groups"].is_array())
    throw InputError("grouping file must be an object with a 'groups' array");
  GroupingState s;
  std::uint64_t next = 0;
  std::vector<char> placed(doc.node_count(), 0);
  for (const auto& g : j["groups"]) {
    if (!g.is_object() || !g.contains("id") || !g["id"].is_number_unsigned())
      throw InputError("every group needs a non-negative integer id");
    GroupRecord rec{group_id(g["id"].get<std::uint64_t>()), {}, std::nullopt};
    if (s.contains(rec.id)) throw InputError("duplicate group id " + gid_text(rec.id));
    if (g.contains("label") && g["label"].is_string()) rec.label = g["label"].get<std::string>();
    if (!g.contains("members") || !g["members"].is_array() || g["members"].empty())
      throw InputError("group " + gid_text(rec.id) + " needs a nonempty members array");
    for (const auto& m : g["members"]) {
      std::string name = m.is_string() ? m.get<std::string>() : m.is_number_integer() ? std::to_string(m.get<long long>()) : "";
      const NodeId n = doc.require_node(name);
      if (placed[index(n)]) throw InputError("node '" + name + "' is listed in more than one group");
      placed[index(n)] = 1;
      rec.members.push_back(n);
    }
    next = std::max(next, value(rec.id) + 1);
    s.insert(rec);
  }
  for (std::size_t i = 0; i < doc.node_count(); ++i)
    if (!placed[i]) s.insert({group_id(next++), {node_id(i)}, std::nullopt});
  s.reserve_ids(next);
  return s;
}

GroupingState load_grouping_file(const std::string& path, const GraphDocument& doc) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open grouping file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("malformed grouping file '" + path + "': " + e.what());
  }
  return load_grouping(j, doc);
}

nlohmann::json to_json(const GroupingState& s, const GraphDocument& doc) {
  auto groups = nlohmann::json::array();
  for (const auto& [g, members] : s.groups()) {
    const auto label = s.label_override(g);
    if (members.size() < 2 && !label) continue;
    nlohmann::json o = {{"id", value(g)}};
    if (label) o["label"] = *label;
    auto m = nlohmann::json::array();
    for (NodeId n : members) m.push_back(doc.name(n));
    o["members"] = std::move(m);
    groups.push_back(std::move(o));
  }
  return {{"groups", std::move(groups)}};
}

}  // namespace nodetrix
