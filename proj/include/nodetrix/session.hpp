#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "nodetrix/animation.hpp"
#include "nodetrix/layout.hpp"
#include "nodetrix/patterns.hpp"
#include "nodetrix/scene.hpp"

namespace nodetrix {

struct SessionOptions {
  LinLogParams layout;  // layout.seed is the session seed
  int local_iterations = 60;
  double canvas = 800.0;  // default SVG size for request-scene
};

// Seeded random start, full relax, then the overlap pass. Used whenever no
// layout file is given.
LayoutState initial_layout(const GraphDocument& doc, const GroupingState& grouping, const StyleConfig& style,
                           const LinLogParams& params);

// One editing session: a command stream applied to grouping, layout and
// style. Commands are JSON objects {"cmd", "id", "args"}; every command
// yields exactly one event {"reply-to", "event", "payload"}.
class Session {
 public:
  Session(std::shared_ptr<const GraphDocument> doc, GroupingState grouping, LayoutState layout, StyleConfig style,
          SessionOptions options = {});

  const GraphDocument& doc() const { return *doc_; }
  const GroupingState& grouping() const { return grouping_; }
  const LayoutState& layout() const { return layout_; }
  const StyleConfig& style() const { return style_; }
  const SessionOptions& options() const { return options_; }
  // State-changing commands in the order they were applied, undo included.
  const std::vector<nlohmann::json>& log() const { return log_; }
  std::size_t undo_depth() const { return undo_.size(); }

  // FNV-1a of the canonical grouping, layout and style; the id counter is
  // left out so undo restores the hash.
  std::uint64_t state_hash() const;

  nlohmann::json handle(const nlohmann::json& command);
  // Parses one protocol line; malformed JSON gives an error event.
  std::string handle_line(std::string_view line);

  // Applies `log` to a fresh session built from the initial state.
  static Session replay(std::shared_ptr<const GraphDocument> doc, GroupingState grouping, LayoutState layout,
                        StyleConfig style, const std::vector<nlohmann::json>& log, SessionOptions options = {});

 private:
  struct UndoEntry {
    GroupDelta delta;
    LayoutState layout;
    StyleConfig style;
  };

  nlohmann::json run(const std::string& cmd, const nlohmann::json& args, bool& mutated);
  nlohmann::json apply_edit(const Transition& t, std::optional<Vec2> drop);
  nlohmann::json snapshot_change(LayoutState layout, StyleConfig style, const char* what);
  GroupId group_arg(const nlohmann::json& args, const char* key) const;
  NodeId node_arg(const nlohmann::json& args, const char* key) const;

  std::shared_ptr<const GraphDocument> doc_;
  GroupingState grouping_;
  LayoutState layout_;
  StyleConfig style_;
  SessionOptions options_;
  std::vector<nlohmann::json> log_;
  std::vector<UndoEntry> undo_;
};

// Serves newline-delimited commands until end of input.
void serve_stream(Session& session, std::istream& in, std::ostream& out);
// Listens on a local socket and serves each connection in turn until a
// connection sends {"cmd":"shutdown"}.
void serve_unix_socket(Session& session, const std::string& path);

}  // namespace nodetrix
