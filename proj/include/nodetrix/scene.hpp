#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "nodetrix/graph.hpp"
#include "nodetrix/grouping.hpp"
#include "nodetrix/layout.hpp"
#include "nodetrix/style.hpp"

namespace nodetrix {

// Scene coordinates are layout units with y growing downwards.
enum class Side { right, left, top, bottom };
std::string_view to_string(Side s);
Vec2 outward_normal(Side s);
// Side whose outward normal has the largest dot product with `direction`;
// ties resolve in the order right, left, top, bottom.
Side choose_side(Vec2 direction);

struct Rect {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double left() const { return x; }
  double right() const { return x + w; }
  double top() const { return y; }
  double bottom() const { return y + h; }
  Vec2 center() const { return {x + 0.5 * w, y + 0.5 * h}; }
  friend bool operator==(const Rect&, const Rect&) = default;
};

struct NodeGlyph {
  GroupId group;
  NodeId node;
  Vec2 center;
  double radius = 0.0;
  std::string fill;
  std::string border;
  double opacity = 1.0;
  friend bool operator==(const NodeGlyph&, const NodeGlyph&) = default;
};

struct MatrixCell {
  std::size_t row = 0;
  std::size_t col = 0;
  std::size_t multiplicity = 0;  // underlying edges in the cell; filled iff > 0
  bool diagonal = false;
  std::string fill;
  double opacity = 1.0;
  friend bool operator==(const MatrixCell&, const MatrixCell&) = default;
};

struct AxisItem {
  NodeId node;
  Rect row_box;  // left of the row
  Rect col_box;  // above the column
  std::string fill;
  std::string label;
  friend bool operator==(const AxisItem&, const AxisItem&) = default;
};

struct MatrixGlyph {
  GroupId group;
  Vec2 center;
  Rect frame;  // whole glyph, axis strips included
  Rect grid;   // the k x k cells
  double cell = 0.0;
  std::vector<NodeId> order;       // rows and columns share it
  std::vector<MatrixCell> cells;   // row-major, k*k
  std::vector<AxisItem> axis;
  bool axis_labels = true;
  double axis_label_size = 0.0;
  std::string background;
  std::string border;
  double opacity = 1.0;

  std::size_t size() const { return order.size(); }
  const MatrixCell& at(std::size_t row, std::size_t col) const { return cells.at(row * order.size() + col); }
  Vec2 cell_center(std::size_t row, std::size_t col) const;
  friend bool operator==(const MatrixGlyph&, const MatrixGlyph&) = default;
};

enum class PathShape { polyline, quadratic };

struct EdgePath {
  std::vector<EdgeId> edges;  // underlying edges drawn by this path
  GroupId source_group;
  GroupId target_group;
  std::optional<Side> source_side;  // set when the endpoint is a matrix
  std::optional<Side> target_side;
  PathShape shape = PathShape::polyline;
  std::vector<Vec2> points;  // polyline vertices, or {start, control, end}
  double width = 0.0;
  std::string color;
  std::string color_key;  // band class; bands stack in key order
  double opacity = 1.0;
  bool band = false;
  friend bool operator==(const EdgePath&, const EdgePath&) = default;
};

struct Label {
  std::string text;
  Vec2 position;  // baseline centre
  double size = 0.0;
  GroupId owner;
  double opacity = 1.0;
  friend bool operator==(const Label&, const Label&) = default;
};

struct Scene {
  std::vector<EdgePath> edges;
  std::vector<NodeGlyph> nodes;
  std::vector<MatrixGlyph> matrices;
  std::vector<Label> labels;

  bool empty() const { return edges.empty() && nodes.empty() && matrices.empty() && labels.empty(); }
  friend bool operator==(const Scene&, const Scene&) = default;
};

// Half side of the glyph a group of `members` nodes gets.
double glyph_half_extent(std::size_t members, const StyleConfig& style);
// Refreshes layout.half_extent for every live group.
void update_extents(LayoutState& layout, const GroupingState& s, const StyleConfig& style);

// Geometry of every glyph plus resolved visual variables, shared by the
// scene operations below.
class SceneContext {
 public:
  SceneContext(const GraphDocument& doc, const GroupingState& grouping, const LayoutState& layout,
               const StyleConfig& style);

  struct Glyph {
    GroupId group;
    bool matrix = false;
    Vec2 center;
    double radius = 0.0;  // plain nodes
    Rect frame;
    Rect grid;
    double cell = 0.0;
    std::map<NodeId, std::size_t> ordinal;
  };

  const GraphDocument& doc() const { return doc_; }
  const GroupingState& grouping() const { return grouping_; }
  const StyleConfig& style() const { return style_; }
  const Glyph& glyph(GroupId g) const { return glyphs_.at(g); }
  const std::map<GroupId, Glyph>& glyphs() const { return glyphs_; }

  // Where an edge from `member` of `g` towards `toward` leaves the glyph.
  Vec2 anchor(GroupId g, NodeId member, Vec2 toward, std::optional<Side>* side = nullptr) const;
  // Span available for links along the side used towards `toward`.
  double anchor_span(GroupId g) const;

  // Visual variables of one underlying edge, or of a bundle whose
  // attribute values are aggregated first.
  std::string edge_color(std::span<const EdgeId> edges) const;
  std::string edge_color_key(std::span<const EdgeId> edges) const;
  double edge_width(std::span<const EdgeId> edges) const;
  double edge_opacity(std::span<const EdgeId> edges) const;

  NodeGlyph node_glyph(GroupId g) const;
  MatrixGlyph matrix_glyph(GroupId g) const;
  Label group_label(GroupId g) const;

 private:
  struct Datum {
    std::optional<double> number;
    std::optional<std::string> text;
  };
  struct Domain {
    double min = 0.0;
    double max = 0.0;
    std::vector<std::string> categories;
  };

  Datum node_datum(NodeId n, const std::string& attr) const;
  Datum edge_datum(std::span<const EdgeId> edges, const std::string& attr) const;
  Datum group_datum(GroupId g, const std::string& attr) const;
  const Domain& domain(Channel c, Target t) const;
  std::optional<std::string> color(Channel c, Target t, const Datum& d) const;
  std::optional<double> number(Channel c, Target t, const Datum& d) const;

  const GraphDocument& doc_;
  const GroupingState& grouping_;
  const LayoutState& layout_;
  const StyleConfig& style_;
  std::map<GroupId, Glyph> glyphs_;
  std::map<std::pair<Channel, Target>, Domain> domains_;
};

// One segment per inter-group underlying edge, anchored per the side rule.
EdgePath route_edge(const SceneContext& ctx, EdgeId e);

// Links of one group pair; when their total width exceeds the merge
// threshold times the smaller anchor span they collapse into one band per
// colour class, stacked in class-key order.
std::vector<EdgePath> merge_bands(std::vector<EdgePath> paths, const StyleConfig& style, double span);

// One segment per aggregated edge. Width defaults to thickness * count, so
// the total ink equals that of the underlying mode.
EdgePath aggregated_edge_geometry(const SceneContext& ctx, const AggregatedEdge& ae);

Scene build_scene(const GraphDocument& doc, const GroupingState& grouping, const LayoutState& layout,
                  const StyleConfig& style);

// Items owned by `groups`: their glyphs and labels and the edges with both
// ends inside the set.
Scene fragment(const Scene& scene, const std::set<GroupId>& groups);

nlohmann::json to_json(const Scene& scene);
std::uint64_t scene_hash(const Scene& scene);

// Standalone SVG 1.1. Edges, then glyphs, then labels; one <g> per matrix.
std::string render_svg(const Scene& scene, double width, double height);

}  // namespace nodetrix
