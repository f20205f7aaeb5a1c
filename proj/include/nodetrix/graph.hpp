#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "nodetrix/util.hpp"

namespace nodetrix {

// Dense indices into a GraphDocument. Never reused: documents only grow.
enum class NodeId : std::uint32_t {};
enum class EdgeId : std::uint32_t {};

constexpr std::size_t index(NodeId n) { return static_cast<std::size_t>(n); }
constexpr std::size_t index(EdgeId e) { return static_cast<std::size_t>(e); }
constexpr NodeId node_id(std::size_t i) { return static_cast<NodeId>(i); }
constexpr EdgeId edge_id(std::size_t i) { return static_cast<EdgeId>(i); }

enum class AttributeKind { nominal, categorical, numeric };

struct Nominal {
  std::string text;
  friend bool operator==(const Nominal&, const Nominal&) = default;
};
struct Categorical {
  std::string token;
  friend bool operator==(const Categorical&, const Categorical&) = default;
};

// monostate marks a missing value.
using AttributeValue = std::variant<std::monostate, Nominal, Categorical, double>;

std::string_view to_string(AttributeKind kind);
AttributeKind parse_attribute_kind(std::string_view text);
bool matches_kind(const AttributeValue& value, AttributeKind kind);
// Text form of a value; numbers use the shortest round-trip representation.
std::string value_text(const AttributeValue& value);

struct AttributeColumn {
  std::string name;
  AttributeKind kind;
  std::vector<AttributeValue> values;
};

// One column per declared attribute, one slot per element.
class AttributeTable {
 public:
  std::size_t declare(std::string name, AttributeKind kind);
  std::optional<std::size_t> find(std::string_view name) const;

  void resize(std::size_t element_count);
  void set(std::size_t column, std::size_t element, AttributeValue value);

  std::span<const AttributeColumn> columns() const { return columns_; }
  const AttributeColumn& column(std::size_t c) const { return columns_.at(c); }
  const AttributeValue& value(std::size_t column, std::size_t element) const;

 private:
  std::vector<AttributeColumn> columns_;
  std::size_t elements_ = 0;
};

struct Edge {
  EdgeId id;
  NodeId source;
  NodeId target;
};

class GraphDocument {
 public:
  explicit GraphDocument(bool directed = false, bool allow_self_loops = false)
      : directed_(directed), allow_self_loops_(allow_self_loops) {}

  bool directed() const noexcept { return directed_; }
  bool allows_self_loops() const noexcept { return allow_self_loops_; }
  std::size_t node_count() const noexcept { return names_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  NodeId add_node(std::string name);
  NodeId find_or_add_node(std::string_view name);
  // Undirected edges are stored with source <= target. Parallel edges are kept.
  EdgeId add_edge(NodeId a, NodeId b);

  std::optional<NodeId> find_node(std::string_view name) const;
  NodeId require_node(std::string_view name) const;
  bool contains(NodeId n) const noexcept { return index(n) < names_.size(); }

  const std::string& name(NodeId n) const { return names_.at(index(n)); }
  // Display label: the "label" node attribute when present, else the id.
  std::string label(NodeId n) const;

  const Edge& edge(EdgeId e) const { return edges_.at(index(e)); }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const EdgeId> incident(NodeId n) const { return incident_.at(index(n)); }
  NodeId opposite(EdgeId e, NodeId n) const;

  AttributeTable& node_attributes() { return node_attrs_; }
  AttributeTable& edge_attributes() { return edge_attrs_; }
  const AttributeTable& node_attributes() const { return node_attrs_; }
  const AttributeTable& edge_attributes() const { return edge_attrs_; }

 private:
  bool directed_;
  bool allow_self_loops_;
  std::vector<std::string> names_;
  std::map<std::string, NodeId, std::less<>> by_name_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> incident_;
  AttributeTable node_attrs_;
  AttributeTable edge_attrs_;
};

enum class GraphFormat { edge_list_csv, graph_json };

struct LoadOptions {
  bool directed = false;  // CSV only; graph-json carries its own flag
  bool allow_self_loops = false;
};

GraphDocument load_graph(std::istream& in, GraphFormat format, const LoadOptions& options = {});
GraphDocument load_graph(std::string_view text, GraphFormat format, const LoadOptions& options = {});
// Format from extension: .json is graph-json, anything else edge-list CSV.
GraphDocument load_graph_file(const std::string& path, const LoadOptions& options = {});

nlohmann::json to_json(const GraphDocument& doc);
std::string write_graph_json(const GraphDocument& doc);

}  // namespace nodetrix
