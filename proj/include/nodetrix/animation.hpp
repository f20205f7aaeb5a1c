#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nodetrix/scene.hpp"

namespace nodetrix {

enum class EdgeDepiction { polyline, curve };
enum class NodePlacement { diagonal, sides };
enum class MatrixExtent { upper_half, full };
enum class Sequencing { simultaneous, per_edge, per_node };
enum class Direction { to_matrix, to_node_link };

struct AnimationSpec {
  EdgeDepiction edges = EdgeDepiction::curve;
  NodePlacement placement = NodePlacement::diagonal;
  MatrixExtent extent = MatrixExtent::full;
  Sequencing sequencing = Sequencing::simultaneous;
  bool accelerate = false;
  double ratio = 0.85;
  double duration = 0.5;  // seconds
  Direction direction = Direction::to_matrix;
  // Fractions of [0,1] for duplication, interpolation, cross-fade.
  double stage_a = 0.15;
  double stage_b = 0.55;
  double stage_c = 0.30;

  static AnimationSpec expert() { return {}; }
  static AnimationSpec novice() {
    AnimationSpec s;
    s.duration = 3.0;
    return s;
  }

  void validate() const;
  friend bool operator==(const AnimationSpec&, const AnimationSpec&) = default;
};

nlohmann::json to_json(const AnimationSpec& spec);
// Missing keys keep their defaults; "preset": "expert" | "novice" picks the duration.
AnimationSpec animation_spec_from_json(const nlohmann::json& j);

enum class Stage { duplicate, interpolate, crossfade };
std::string_view to_string(Stage s);

struct NodePose {
  NodeId node;
  bool copy = false;  // column copy for side placement
  Vec2 center;
  double radius = 0.0;
  double opacity = 1.0;
};

struct CurvePose {
  std::size_t path = 0;  // index into the source fragment's edges
  bool duplicate = false;
  std::size_t row = 0;  // target cell
  std::size_t col = 0;
  PathShape shape = PathShape::polyline;
  std::vector<Vec2> points;
  Vec2 corner;
  double opacity = 1.0;
  std::vector<double> segment_opacity;  // cross-fade only
};

struct Keyframe {
  double t = 0.0;
  Stage stage = Stage::duplicate;
  std::vector<NodePose> nodes;
  std::vector<CurvePose> curves;
  std::vector<Label> labels;
  double matrix_opacity = 0.0;
};

nlohmann::json to_json(const Keyframe& k);

// Time slots inside [lo, hi]; equal, or shrinking geometrically by `ratio`.
std::vector<std::pair<double, double>> sequence_schedule(const AnimationSpec& spec, std::size_t count, double lo = 0.0,
                                                         double hi = 1.0);

// Number of sub-segments a curve is cut into for the corner-last fade.
inline constexpr std::size_t kFadeSegments = 8;

class AnimationPlan {
 public:
  struct Member {
    NodeId node;
    std::size_t glyph = 0;  // index into source.nodes
    Vec2 start;
    Vec2 diagonal;  // cell (i,i) centre
    Vec2 row_box;   // axis item centres
    Vec2 col_box;
  };
  struct Curve {
    std::size_t path = 0;
    std::size_t a = 0;  // ordinals of the endpoint nodes
    std::size_t b = 0;
    Vec2 a0;
    Vec2 b0;
  };

  const AnimationSpec& spec() const { return spec_; }
  GroupId group() const { return group_; }
  const Scene& source() const { return source_; }
  const Scene& target() const { return target_; }
  const std::vector<Member>& members() const { return members_; }
  const std::vector<Curve>& curves() const { return curves_; }
  double stage_b_end() const { return spec_.stage_a + spec_.stage_b; }

  // Throws OperationError outside [0,1].
  Keyframe sample(double t) const;
  Scene scene(const Keyframe& k) const;
  Scene scene_at(double t) const { return scene(sample(t)); }

  // n >= 2 frames at t = k/(n-1). A reversed plan walks the forward grid
  // backwards, so its frames are the forward frames in reverse order.
  std::vector<Keyframe> frames(std::size_t n) const;

 private:
  friend AnimationPlan plan_transition(const GraphDocument&, const GroupingState&, const LayoutState&,
                                       const StyleConfig&, GroupId, const AnimationSpec&);
  Keyframe forward(double t) const;

  AnimationSpec spec_;
  GroupId group_{};
  Scene source_;
  Scene target_;
  std::vector<Member> members_;
  std::vector<Curve> curves_;
  std::vector<std::pair<double, double>> node_slots_;
  std::vector<std::pair<double, double>> edge_slots_;
  double end_radius_ = 0.0;
};

// `g` is a group of at least two members in `grouping`. The node-link side is
// the state after splitting it, members placed as the split places them.
AnimationPlan plan_transition(const GraphDocument& doc, const GroupingState& grouping, const LayoutState& layout,
                              const StyleConfig& style, GroupId g, const AnimationSpec& spec);

}  // namespace nodetrix
