#include "nodetrix/style.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>

#include "nodetrix/util.hpp"

namespace nodetrix {

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view text, const std::array<E, N>& all, const char* what) {
  for (E e : all)
    if (to_string(e) == text) return e;
  throw InputError(std::string("unknown ") + what + " '" + std::string(text) + "'");
}

constexpr std::array kChannels{Channel::fill, Channel::border, Channel::opacity, Channel::size, Channel::label};
constexpr std::array kTargets{Target::node, Target::edge, Target::matrix, Target::axis, Target::cell};
constexpr std::array kScales{ScaleKind::categorical, ScaleKind::linear};
constexpr std::array kModes{EdgeMode::underlying, EdgeMode::aggregated};

bool is_color(const std::string& s) {
  if (s.size() != 7 || s[0] != '#') return false;
  for (std::size_t i = 1; i < 7; ++i)
    if (!std::isxdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

std::string_view to_string(Channel c) {
  switch (c) {
    case Channel::fill: return "fill";
    case Channel::border: return "border";
    case Channel::opacity: return "opacity";
    case Channel::size: return "size";
    case Channel::label: return "label";
  }
  return "fill";
}

std::string_view to_string(Target t) {
  switch (t) {
    case Target::node: return "node";
    case Target::edge: return "edge";
    case Target::matrix: return "matrix";
    case Target::axis: return "axis";
    case Target::cell: return "cell";
  }
  return "node";
}

std::string_view to_string(ScaleKind s) { return s == ScaleKind::linear ? "linear" : "categorical"; }
std::string_view to_string(EdgeMode m) { return m == EdgeMode::aggregated ? "aggregated" : "underlying"; }

const std::vector<std::string>& categorical_palette() {
  static const std::vector<std::string> palette{"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                                "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};
  return palette;
}

void StyleConfig::validate() const {
  if (!(link_thickness > 0.0)) throw InputError("link thickness must be positive");
  if (!(cell_size > 0.0)) throw InputError("cell size must be positive");
  if (!(matrix_scale > 0.0)) throw InputError("matrix scale must be positive");
  if (!(node_radius > 0.0)) throw InputError("node radius must be positive");
  if (!(axis_label_size >= 0.0) || !(group_label_size >= 0.0)) throw InputError("label sizes must be non-negative");
  if (!(merge_threshold > 0.0)) throw InputError("merge threshold must be positive");
  for (const auto& [key, b] : bindings) {
    if (b.attribute.empty()) throw InputError("binding without attribute");
    if (!is_color(b.low_color) || !is_color(b.high_color)) throw InputError("binding colours must be #rrggbb");
  }
}

const Binding* StyleConfig::binding(Channel c, Target t) const {
  auto it = bindings.find({c, t});
  return it == bindings.end() ? nullptr : &it->second;
}

double StyleConfig::axis_extent() const { return axis_labels ? 4.0 * axis_label_size * matrix_scale : 0.0; }

nlohmann::json to_json(const StyleConfig& s) {
  nlohmann::json j;
  j["link_thickness"] = s.link_thickness;
  j["cell_size"] = s.cell_size;
  j["axis_labels"] = s.axis_labels;
  j["axis_label_size"] = s.axis_label_size;
  j["matrix_scale"] = s.matrix_scale;
  j["node_radius"] = s.node_radius;
  j["group_label_size"] = s.group_label_size;
  j["merge_threshold"] = s.merge_threshold;
  j["label_max_length"] = s.label_max_length;
  j["edge_mode"] = to_string(s.edge_mode);
  auto bindings = nlohmann::json::array();
  for (const auto& [key, b] : s.bindings) {
    bindings.push_back({{"channel", to_string(key.first)},
                        {"target", to_string(key.second)},
                        {"attribute", b.attribute},
                        {"scale", to_string(b.scale)},
                        {"low", b.low},
                        {"high", b.high},
                        {"low_color", b.low_color},
                        {"high_color", b.high_color}});
  }
  j["bindings"] = std::move(bindings);
  return j;
}

StyleConfig apply_style_patch(const StyleConfig& style, const nlohmann::json& patch) {
  if (!patch.is_object()) throw InputError("style must be a JSON object");
  StyleConfig s = style;
  try {
    if (patch.contains("link_thickness")) s.link_thickness = patch["link_thickness"].get<double>();
    if (patch.contains("cell_size")) s.cell_size = patch["cell_size"].get<double>();
    if (patch.contains("axis_labels")) s.axis_labels = patch["axis_labels"].get<bool>();
    if (patch.contains("axis_label_size")) s.axis_label_size = patch["axis_label_size"].get<double>();
    if (patch.contains("matrix_scale")) s.matrix_scale = patch["matrix_scale"].get<double>();
    if (patch.contains("node_radius")) s.node_radius = patch["node_radius"].get<double>();
    if (patch.contains("group_label_size")) s.group_label_size = patch["group_label_size"].get<double>();
    if (patch.contains("merge_threshold")) s.merge_threshold = patch["merge_threshold"].get<double>();
    if (patch.contains("label_max_length")) s.label_max_length = patch["label_max_length"].get<std::size_t>();
    if (patch.contains("edge_mode"))
      s.edge_mode = parse_enum(patch["edge_mode"].get<std::string>(), kModes, "edge mode");
    if (patch.contains("bindings")) {
      std::set<std::pair<Channel, Target>> seen;
      for (const auto& b : patch["bindings"]) {
        const auto channel = parse_enum(b.at("channel").get<std::string>(), kChannels, "channel");
        const auto target = parse_enum(b.at("target").get<std::string>(), kTargets, "target");
        if (!seen.insert({channel, target}).second)
          throw InputError("more than one binding for " + std::string(to_string(channel)) + "/" +
                           std::string(to_string(target)));
        if (b.contains("attribute") && b["attribute"].is_null()) {
          s.bindings.erase({channel, target});
          continue;
        }
        Binding bind;
        bind.attribute = b.at("attribute").get<std::string>();
        bind.scale = parse_enum(b.value("scale", std::string("categorical")), kScales, "scale");
        bind.low = b.value("low", bind.low);
        bind.high = b.value("high", bind.high);
        bind.low_color = b.value("low_color", bind.low_color);
        bind.high_color = b.value("high_color", bind.high_color);
        s.bindings[{channel, target}] = std::move(bind);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed style: ") + e.what());
  }
  s.validate();
  return s;
}

StyleConfig style_from_json(const nlohmann::json& j) { return apply_style_patch(StyleConfig{}, j); }

StyleConfig load_style_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open style file '" + path + "'");
  try {
    return style_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("malformed style file '" + path + "': " + e.what());
  }
}

}  // namespace nodetrix
