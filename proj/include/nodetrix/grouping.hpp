#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nodetrix/graph.hpp"

namespace nodetrix {

// Identifies one aggregated node. Ids are never reused within a session:
// a group keeps its id across membership edits and loses it when it is
// split or merged away.
enum class GroupId : std::uint64_t {};
constexpr std::uint64_t value(GroupId g) { return static_cast<std::uint64_t>(g); }
constexpr GroupId group_id(std::uint64_t v) { return static_cast<GroupId>(v); }

struct GroupRecord {
  GroupId id;
  std::vector<NodeId> members;
  std::optional<std::string> label;
  friend bool operator==(const GroupRecord&, const GroupRecord&) = default;
};

// Many-to-one partition of the underlying nodes. Every node belongs to
// exactly one group; singletons are ordinary groups of size 1.
class GroupingState {
 public:
  GroupingState() = default;

  // One singleton per node, group id = node index.
  static GroupingState singletons(const GraphDocument& doc);

  std::size_t node_count() const noexcept { return membership_.size(); }
  std::size_t group_count() const noexcept { return groups_.size(); }
  const std::map<GroupId, std::vector<NodeId>>& groups() const noexcept { return groups_; }
  bool contains(GroupId g) const { return groups_.contains(g); }
  const std::vector<NodeId>& members(GroupId g) const;
  GroupId group_of(NodeId n) const;
  std::optional<std::string> label_override(GroupId g) const;
  const std::map<GroupId, std::string>& label_overrides() const noexcept { return labels_; }
  std::uint64_t next_id() const noexcept { return next_id_; }

  GroupRecord record(GroupId g) const;

  // Throws InvariantError when membership and groups disagree.
  void check_invariants() const;

  // Low-level building blocks; editing operations below go through these.
  GroupId fresh_id() { return group_id(next_id_++); }
  void insert(const GroupRecord& rec);
  void erase(GroupId g);
  void set_label(GroupId g, std::optional<std::string> label);
  void reserve_ids(std::uint64_t next) { next_id_ = std::max(next_id_, next); }

  friend bool operator==(const GroupingState&, const GroupingState&) = default;

 private:
  std::map<GroupId, std::vector<NodeId>> groups_;
  std::vector<std::optional<GroupId>> membership_;
  std::map<GroupId, std::string> labels_;
  std::uint64_t next_id_ = 0;
};

enum class EditKind { aggregate, split, add, extract, move, merge, reorder };
std::string_view to_string(EditKind kind);

// Groups removed (pre-edit records) and added (post-edit records). Undo
// removes `added` and restores `removed`; a group that only changed appears
// in both.
struct GroupDelta {
  std::vector<GroupRecord> removed;
  std::vector<GroupRecord> added;
};

struct Edit {
  EditKind kind;
  GroupDelta delta;
  GroupId result;                 // the group the user ends up holding
  std::vector<GroupId> inputs;    // pre-existing groups consumed or touched
  std::vector<GroupId> created;   // ids that did not exist before
  std::vector<GroupId> retired;   // ids that no longer exist
  std::vector<GroupId> changed;   // surviving ids whose membership changed
};

struct Transition {
  GroupingState state;
  Edit edit;
};

// Member order: the selected groups' members in selection order. Selecting a
// single group is the identity.
Transition aggregate(const GroupingState& s, std::span<const GroupId> selection);
Transition split(const GroupingState& s, GroupId g);
// `node_group` must be a singleton; its node is appended to `g`.
Transition add_node_to_group(const GroupingState& s, GroupId node_group, GroupId g);
Transition extract_node(const GroupingState& s, GroupId g, NodeId n);
Transition move_item(const GroupingState& s, GroupId from, NodeId n, GroupId to);
// Members of both, ordered by underlying node index, under a fresh id.
Transition merge_groups(const GroupingState& s, GroupId a, GroupId b);
Transition reorder_member(const GroupingState& s, GroupId g, NodeId n, std::size_t ordinal);

GroupingState revert(const GroupingState& s, const GroupDelta& delta);

// ---------------------------------------------------------------- derived views

struct AggregatedEdge {
  GroupId a;  // a < b for undirected graphs; source group for directed ones
  GroupId b;
  std::vector<EdgeId> underlying;  // ascending
  friend bool operator==(const AggregatedEdge&, const AggregatedEdge&) = default;
};

// Inter-group edges bundled per group pair, ordered by (a, b).
std::vector<AggregatedEdge> aggregated_edges(const GraphDocument& doc, const GroupingState& s);
std::vector<EdgeId> internal_edges(const GraphDocument& doc, const GroupingState& s, GroupId g);

struct AggregatedValue {
  AttributeKind kind = AttributeKind::nominal;
  std::string text;  // nominal/categorical: member values joined with '+'
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;  // non-missing values combined
};

struct AggregatedAttribute {
  std::string name;
  AggregatedValue value;
};

AggregatedValue combine(const AttributeColumn& column, std::span<const std::size_t> elements);
std::vector<AggregatedAttribute> aggregate_attributes(const GraphDocument& doc, const GroupingState& s, GroupId g);
std::vector<AggregatedAttribute> aggregate_edge_attributes(const GraphDocument& doc, std::span<const EdgeId> edges);

// Override if set; else member labels joined with '+', or "<first> et al."
// when that would exceed `max_length` characters.
std::string group_label(const GraphDocument& doc, const GroupingState& s, GroupId g, std::size_t max_length = 24);

// Grouping file: {"groups":[{"id":7,"label":"...","members":["a","b"]}]}.
// Unlisted nodes become singletons numbered after the largest listed id.
GroupingState load_grouping(const nlohmann::json& j, const GraphDocument& doc);
GroupingState load_grouping_file(const std::string& path, const GraphDocument& doc);
// Lists every group with two or more members or a label override.
nlohmann::json to_json(const GroupingState& s, const GraphDocument& doc);

}  // namespace nodetrix
