#include "nodetrix/session.hpp"

#include <sys/socket.h>
#include <sys/un.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "nodetrix/util.hpp"

namespace nodetrix {

namespace {

// Parsed text gives unsigned numbers, values built in code may be signed.
bool is_count(const nlohmann::json& v) { return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0); }

nlohmann::json ids_json(const std::vector<GroupId>& ids) {
  auto out = nlohmann::json::array();
  for (GroupId g : ids) out.push_back(value(g));
  return out;
}

nlohmann::json event(const nlohmann::json& id, const char* kind, nlohmann::json payload) {
  return {{"reply-to", id}, {"event", kind}, {"payload", std::move(payload)}};
}

Vec2 point_arg(const nlohmann::json& v) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw InputError("a position is a two-element number array");
  return {v[0].get<double>(), v[1].get<double>()};
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

}  // namespace

LayoutState initial_layout(const GraphDocument& doc, const GroupingState& grouping, const StyleConfig& style,
                           const LinLogParams& params) {
  LayoutState start = random_layout(grouping, params.seed);
  update_extents(start, grouping, style);
  LayoutState out = remove_overlaps(relax(start, build_linlog_graph(doc, grouping), params).state);
  update_extents(out, grouping, style);
  return out;
}

Session::Session(std::shared_ptr<const GraphDocument> doc, GroupingState grouping, LayoutState layout,
                 StyleConfig style, SessionOptions options)
    : doc_(std::move(doc)),
      grouping_(std::move(grouping)),
      layout_(std::move(layout)),
      style_(std::move(style)),
      options_(options) {
  if (!doc_) throw InputError("session needs a graph");
  options_.layout.validate();
  grouping_.check_invariants();
  if (grouping_.node_count() != doc_->node_count()) throw InputError("grouping does not cover the graph");
  check_layout(layout_, grouping_);
  update_extents(layout_, grouping_, style_);
}

std::uint64_t Session::state_hash() const {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& [g, members] : grouping_.groups()) {
    auto m = nlohmann::json::array();
    for (NodeId n : members) m.push_back(index(n));
    const auto label = grouping_.label_override(g);
    groups.push_back({value(g), std::move(m), label ? nlohmann::json(*label) : nlohmann::json()});
  }
  nlohmann::json extents = nlohmann::json::object();
  for (const auto& [g, e] : layout_.half_extent) extents[std::to_string(value(g))] = e;
  const nlohmann::json canonical{
      {"grouping", std::move(groups)}, {"layout", to_json(layout_)}, {"extents", std::move(extents)},
      {"style", to_json(style_)}};
  return fnv1a(canonical.dump());
}

GroupId Session::group_arg(const nlohmann::json& args, const char* key) const {
  if (!args.contains(key) || !is_count(args[key])) throw InputError(std::string("argument '") + key + "' must be a group id");
  const GroupId g = group_id(args[key].get<std::uint64_t>());
  if (!grouping_.contains(g)) throw InputError("unknown group " + std::to_string(value(g)));
  return g;
}

NodeId Session::node_arg(const nlohmann::json& args, const char* key) const {
  if (!args.contains(key)) throw InputError(std::string("missing argument '") + key + "'");
  const auto& v = args[key];
  if (v.is_string()) return doc_->require_node(v.get<std::string>());
  if (v.is_number_integer()) return doc_->require_node(std::to_string(v.get<long long>()));
  throw InputError(std::string("argument '") + key + "' must be a node name");
}

nlohmann::json Session::apply_edit(const Transition& t, std::optional<Vec2> drop) {
  t.state.check_invariants();
  LayoutState before = layout_;
  for (const auto& [g, members] : t.state.groups()) before.half_extent[g] = glyph_half_extent(members.size(), style_);
  LayoutState next = incremental_update(before, t.edit, *doc_, t.state, options_.layout, options_.local_iterations, drop);
  update_extents(next, t.state, style_);
  check_layout(next, t.state);

  undo_.push_back({t.edit.delta, layout_, style_});
  grouping_ = t.state;
  layout_ = std::move(next);
  return {{"edit", to_string(t.edit.kind)},
          {"result", value(t.edit.result)},
          {"created", ids_json(t.edit.created)},
          {"retired", ids_json(t.edit.retired)},
          {"changed", ids_json(t.edit.changed)},
          {"state_hash", hex64(state_hash())}};
}

nlohmann::json Session::snapshot_change(LayoutState layout, StyleConfig style, const char* what) {
  undo_.push_back({{}, layout_, style_});
  layout_ = std::move(layout);
  style_ = std::move(style);
  update_extents(layout_, grouping_, style_);
  return {{"edit", what}, {"state_hash", hex64(state_hash())}};
}

nlohmann::json Session::run(const std::string& cmd, const nlohmann::json& args, bool& mutated) {
  mutated = true;
  if (cmd == "aggregate") {
    std::vector<GroupId> selection;
    if (args.contains("groups")) {
      if (!args["groups"].is_array()) throw InputError("'groups' must be an array");
      for (const auto& v : args["groups"]) selection.push_back(group_arg({{"g", v}}, "g"));
    }
    if (args.contains("nodes")) {
      if (!args["nodes"].is_array()) throw InputError("'nodes' must be an array");
      for (const auto& v : args["nodes"]) selection.push_back(grouping_.group_of(node_arg({{"n", v}}, "n")));
    }
    return apply_edit(aggregate(grouping_, selection), std::nullopt);
  }
  if (cmd == "split") return apply_edit(split(grouping_, group_arg(args, "group")), std::nullopt);
  if (cmd == "add") {
    const GroupId from = args.contains("node") ? grouping_.group_of(node_arg(args, "node")) : group_arg(args, "node_group");
    return apply_edit(add_node_to_group(grouping_, from, group_arg(args, "group")), std::nullopt);
  }
  if (cmd == "extract") {
    std::optional<Vec2> drop;
    if (args.contains("position")) drop = point_arg(args["position"]);
    return apply_edit(extract_node(grouping_, group_arg(args, "group"), node_arg(args, "node")), drop);
  }
  if (cmd == "move")
    return apply_edit(move_item(grouping_, group_arg(args, "from"), node_arg(args, "node"), group_arg(args, "to")),
                      std::nullopt);
  if (cmd == "merge") return apply_edit(merge_groups(grouping_, group_arg(args, "a"), group_arg(args, "b")), std::nullopt);
  if (cmd == "reorder") {
    if (!args.contains("ordinal") || !is_count(args["ordinal"]))
      throw InputError("argument 'ordinal' must be a non-negative integer");
    return apply_edit(reorder_member(grouping_, group_arg(args, "group"), node_arg(args, "node"),
                                     args["ordinal"].get<std::size_t>()),
                      std::nullopt);
  }
  if (cmd == "move-group") {
    const GroupId g = group_arg(args, "group");
    return snapshot_change(move_group(layout_, g, point_arg(args.value("position", nlohmann::json()))), style_,
                           "move-group");
  }
  if (cmd == "set-style") {
    StyleConfig next = apply_style_patch(style_, args.value("style", nlohmann::json::object()));
    return snapshot_change(layout_, std::move(next), "set-style");
  }
  if (cmd == "relax") {
    LinLogParams params = options_.layout;
    if (args.contains("iterations")) params.max_iterations = args["iterations"].get<int>();
    params.validate();
    LayoutState start = layout_;
    if (!args.value("keep_pins", false)) start.pinned.clear();
    const RelaxResult r = relax(start, build_linlog_graph(*doc_, grouping_), params);
    nlohmann::json payload = snapshot_change(remove_overlaps(r.state), style_, "relax");
    payload["iterations"] = r.iterations;
    payload["converged"] = r.converged;
    payload["energy"] = r.energy_trace.empty() ? 0.0 : r.energy_trace.back();
    return payload;
  }
  if (cmd == "undo") {
    if (undo_.empty()) throw OperationError("nothing to undo");
    UndoEntry last = std::move(undo_.back());
    undo_.pop_back();
    grouping_ = revert(grouping_, last.delta);
    layout_ = std::move(last.layout);
    style_ = std::move(last.style);
    return {{"edit", "undo"}, {"state_hash", hex64(state_hash())}};
  }

  mutated = false;
  if (cmd == "request-scene") {
    const Scene scene = build_scene(*doc_, grouping_, layout_, style_);
    const std::string format = args.value("format", std::string("json"));
    nlohmann::json payload{{"scene_hash", hex64(scene_hash(scene))}};
    if (format == "json") payload["scene"] = to_json(scene);
    else if (format == "svg")
      payload["svg"] = render_svg(scene, args.value("width", options_.canvas), args.value("height", options_.canvas));
    else throw InputError("unknown scene format '" + format + "'");
    return payload;
  }
  if (cmd == "plan-animation") {
    const AnimationSpec spec = animation_spec_from_json(args.value("spec", nlohmann::json::object()));
    const AnimationPlan plan = plan_transition(*doc_, grouping_, layout_, style_, group_arg(args, "group"), spec);
    const auto n = args.value("frames", std::size_t{11});
    const bool scenes = args.value("scenes", false);
    auto frames = nlohmann::json::array();
    for (const Keyframe& k : plan.frames(n)) {
      const Scene s = plan.scene(k);
      nlohmann::json f = to_json(k);
      f["scene_hash"] = hex64(scene_hash(s));
      if (scenes) f["scene"] = to_json(s);
      frames.push_back(std::move(f));
    }
    return {{"group", value(plan.group())},
            {"spec", to_json(spec)},
            {"stage_b_end", plan.stage_b_end()},
            {"frames", std::move(frames)}};
  }
  if (cmd == "classify") {
    PatternThresholds th;
    th.hub = args.value("hub", th.hub);
    th.sparse = args.value("sparse", th.sparse);
    th.dense = args.value("dense", th.dense);
    std::vector<PatternReport> reports;
    if (args.contains("group")) reports.push_back(classify(*doc_, grouping_, group_arg(args, "group"), th));
    else reports = classify_all(*doc_, grouping_, th);
    auto out = nlohmann::json::array();
    for (const auto& r : reports) out.push_back(to_json(r, *doc_));
    return {{"reports", std::move(out)}};
  }
  if (cmd == "save") {
    if (!args.contains("dir") || !args["dir"].is_string()) throw InputError("argument 'dir' must be a path");
    const std::filesystem::path dir = args["dir"].get<std::string>();
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw InputError("cannot create '" + dir.string() + "': " + ec.message());
    write_json(dir / "groups.json", to_json(grouping_, *doc_));
    write_json(dir / "layout.json", to_json(layout_));
    write_json(dir / "style.json", to_json(style_));
    write_json(dir / "session-log.json", log_);
    return {{"dir", dir.string()}, {"state_hash", hex64(state_hash())}};
  }
  throw InputError("unknown command '" + cmd + "'");
}

nlohmann::json Session::handle(const nlohmann::json& command) {
  const nlohmann::json id = command.is_object() && command.contains("id") ? command["id"] : nlohmann::json();
  try {
    if (!command.is_object() || !command.contains("cmd") || !command["cmd"].is_string())
      throw InputError("a command is an object with a string 'cmd'");
    const std::string cmd = command["cmd"].get<std::string>();
    const nlohmann::json args = command.value("args", nlohmann::json::object());
    if (!args.is_object()) throw InputError("'args' must be an object");
    bool mutated = false;
    nlohmann::json payload = run(cmd, args, mutated);
    if (mutated) log_.push_back({{"cmd", cmd}, {"args", args}});
    const char* kind = "report";
    if (mutated) kind = "state-delta";
    else if (cmd == "request-scene") kind = "scene";
    else if (cmd == "plan-animation") kind = "keyframes";
    return event(id, kind, std::move(payload));
  } catch (const InvariantError& e) {
    return event(id, "error", {{"kind", "invariant"}, {"message", e.what()}});
  } catch (const InputError& e) {
    return event(id, "error", {{"kind", "input"}, {"message", e.what()}});
  } catch (const OperationError& e) {
    return event(id, "error", {{"kind", "operation"}, {"message", e.what()}});
  } catch (const nlohmann::json::exception& e) {
    return event(id, "error", {{"kind", "input"}, {"message", e.what()}});
  }
}

std::string Session::handle_line(std::string_view line) {
  nlohmann::json command;
  try {
    command = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    return event(nullptr, "error", {{"kind", "protocol"}, {"message", e.what()}}).dump();
  }
  return handle(command).dump();
}

Session Session::replay(std::shared_ptr<const GraphDocument> doc, GroupingState grouping, LayoutState layout,
                        StyleConfig style, const std::vector<nlohmann::json>& log, SessionOptions options) {
  Session s(std::move(doc), std::move(grouping), std::move(layout), std::move(style), options);
  for (const auto& cmd : log) {
    const nlohmann::json ev = s.handle(cmd);
    if (ev["event"] == "error") throw InputError("replay failed: " + ev["payload"]["message"].get<std::string>());
  }
  return s;
}

void serve_stream(Session& session, std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out << session.handle_line(line) << '\n';
    out.flush();
  }
}

void serve_unix_socket(Session& session, const std::string& path) {
  const int listener = ::socket(AF_UNIX, SOCK_STREAM, 0);
  if (listener < 0) throw InputError("cannot create socket");
  sockaddr_un addr{};
  addr.sun_family = AF_UNIX;
  if (path.size() >= sizeof addr.sun_path) throw InputError("socket path too long");
  std::snprintf(addr.sun_path, sizeof addr.sun_path, "%s", path.c_str());
  ::unlink(path.c_str());
  if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(listener, 1) < 0) {
    ::close(listener);
    throw InputError("cannot listen on '" + path + "'");
  }
  bool running = true;
  while (running) {
    const int conn = ::accept(listener, nullptr, nullptr);
    if (conn < 0) break;
    std::string buffer;
    char chunk[4096];
    ssize_t got = 0;
    while (running && (got = ::read(conn, chunk, sizeof chunk)) > 0) {
      buffer.append(chunk, static_cast<std::size_t>(got));
      std::size_t nl;
      while ((nl = buffer.find('\n')) != std::string::npos) {
        const std::string line = buffer.substr(0, nl);
        buffer.erase(0, nl + 1);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto parsed = nlohmann::json::parse(line, nullptr, false);
        if (parsed.is_object() && parsed.value("cmd", std::string()) == "shutdown") {
          running = false;
          break;
        }
        const std::string reply = session.handle_line(line) + "\n";
        for (std::size_t off = 0; off < reply.size();) {
          const ssize_t w = ::write(conn, reply.data() + off, reply.size() - off);
          if (w <= 0) break;
          off += static_cast<std::size_t>(w);
        }
      }
    }
    ::close(conn);
  }
  ::close(listener);
  ::unlink(path.c_str());
}

}  // namespace nodetrix
