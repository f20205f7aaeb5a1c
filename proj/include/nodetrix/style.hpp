#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace nodetrix {

enum class Channel { fill, border, opacity, size, label };
enum class Target { node, edge, matrix, axis, cell };
enum class ScaleKind { categorical, linear };
enum class EdgeMode { underlying, aggregated };

std::string_view to_string(Channel c);
std::string_view to_string(Target t);
std::string_view to_string(ScaleKind s);
std::string_view to_string(EdgeMode m);

// Maps one attribute onto one visual channel. Numeric channels (opacity,
// size) use [low, high]; colour channels use the palette (categorical) or a
// ramp from low_color to high_color (linear). "count" names the number of
// underlying edges on edge and cell targets.
struct Binding {
  std::string attribute;
  ScaleKind scale = ScaleKind::categorical;
  double low = 0.0;
  double high = 1.0;
  std::string low_color = "#deebf7";
  std::string high_color = "#08519c";
  friend bool operator==(const Binding&, const Binding&) = default;
};

// All geometry is in layout units. One style applies to every matrix.
struct StyleConfig {
  double link_thickness = 0.02;
  double cell_size = 0.1;
  bool axis_labels = true;
  double axis_label_size = 0.05;
  double matrix_scale = 1.0;
  double node_radius = 0.08;
  double group_label_size = 0.08;
  double merge_threshold = 0.8;  // merge when total link width > threshold * anchor span
  std::size_t label_max_length = 24;
  EdgeMode edge_mode = EdgeMode::underlying;
  std::map<std::pair<Channel, Target>, Binding> bindings;

  void validate() const;
  const Binding* binding(Channel c, Target t) const;

  // Width of the axis strip on the left and top of a matrix.
  double axis_extent() const;
  double scaled_cell() const { return cell_size * matrix_scale; }

  friend bool operator==(const StyleConfig&, const StyleConfig&) = default;
};

// Palette used by categorical colour scales.
const std::vector<std::string>& categorical_palette();

nlohmann::json to_json(const StyleConfig& style);
StyleConfig style_from_json(const nlohmann::json& j);
// Overlays the keys present in `patch` onto `style`; bindings replace per
// channel/target pair, and a null attribute removes a binding.
StyleConfig apply_style_patch(const StyleConfig& style, const nlohmann::json& patch);
StyleConfig load_style_file(const std::string& path);

}  // namespace nodetrix
