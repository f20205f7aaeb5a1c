#include "nodetrix/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "nodetrix/util.hpp"

namespace nodetrix {

std::string_view to_string(AttributeKind kind) {
  switch (kind) {
    case AttributeKind::nominal: return "nominal";
    case AttributeKind::categorical: return "categorical";
    case AttributeKind::numeric: return "numeric";
  }
  return "nominal";
}

AttributeKind parse_attribute_kind(std::string_view text) {
  if (text == "nominal") return AttributeKind::nominal;
  if (text == "categorical") return AttributeKind::categorical;
  if (text == "numeric") return AttributeKind::numeric;
  throw InputError("unknown attribute kind '" + std::string(text) + "'");
}

bool matches_kind(const AttributeValue& value, AttributeKind kind) {
  switch (value.index()) {
    case 0: return true;
    case 1: return kind == AttributeKind::nominal;
    case 2: return kind == AttributeKind::categorical;
    default: return kind == AttributeKind::numeric;
  }
}

std::string value_text(const AttributeValue& value) {
  if (const auto* n = std::get_if<Nominal>(&value)) return n->text;
  if (const auto* c = std::get_if<Categorical>(&value)) return c->token;
  if (const auto* d = std::get_if<double>(&value)) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, *d);
    return std::string(buf, end);
  }
  return {};
}

// ---------------------------------------------------------------- AttributeTable

std::size_t AttributeTable::declare(std::string name, AttributeKind kind) {
  if (find(name)) throw InputError("duplicate attribute declaration '" + name + "'");
  columns_.push_back({std::move(name), kind, std::vector<AttributeValue>(elements_)});
  return columns_.size() - 1;
}

std::optional<std::size_t> AttributeTable::find(std::string_view name) const {
  for (std::size_t c = 0; c < columns_.size(); ++c)
    if (columns_[c].name == name) return c;
  return std::nullopt;
}

void AttributeTable::resize(std::size_t element_count) {
  elements_ = element_count;
  for (auto& col : columns_) col.values.resize(element_count);
}

void AttributeTable::set(std::size_t column, std::size_t element, AttributeValue value) {
  auto& col = columns_.at(column);
  if (!matches_kind(value, col.kind))
    throw InputError("attribute '" + col.name + "' expects " + std::string(to_string(col.kind)) + " values");
  col.values.at(element) = std::move(value);
}

const AttributeValue& AttributeTable::value(std::size_t column, std::size_t element) const {
  return columns_.at(column).values.at(element);
}

// ---------------------------------------------------------------- GraphDocument

NodeId GraphDocument::add_node(std::string name) {
  if (by_name_.contains(name)) throw InputError("duplicate node id '" + name + "'");
  const NodeId id = node_id(names_.size());
  by_name_.emplace(name, id);
  names_.push_back(std::move(name));
  incident_.emplace_back();
  node_attrs_.resize(names_.size());
  return id;
}

NodeId GraphDocument::find_or_add_node(std::string_view name) {
  if (auto found = find_node(name)) return *found;
  return add_node(std::string(name));
}

EdgeId GraphDocument::add_edge(NodeId a, NodeId b) {
  if (!contains(a) || !contains(b)) throw InputError("edge endpoint references an unknown node");
  if (a == b && !allow_self_loops_) throw InputError("self-loop on node '" + name(a) + "' is not allowed");
  if (!directed_ && index(b) < index(a)) std::swap(a, b);
  const EdgeId id = edge_id(edges_.size());
  edges_.push_back({id, a, b});
  incident_[index(a)].push_back(id);
  if (a != b) incident_[index(b)].push_back(id);
  edge_attrs_.resize(edges_.size());
  return id;
}

std::optional<NodeId> GraphDocument::find_node(std::string_view name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

NodeId GraphDocument::require_node(std::string_view name) const {
  if (auto n = find_node(name)) return *n;
  throw InputError("unknown node id '" + std::string(name) + "'");
}

std::string GraphDocument::label(NodeId n) const {
  if (auto c = node_attrs_.find("label")) {
    std::string text = value_text(node_attrs_.value(*c, index(n)));
    if (!text.empty()) return text;
  }
  return name(n);
}

NodeId GraphDocument::opposite(EdgeId e, NodeId n) const {
  const Edge& ed = edge(e);
  return ed.source == n ? ed.target : ed.source;
}

// ---------------------------------------------------------------- CSV

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// RFC 4180 fields of one physical line; quotes may not span lines.
std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      if (!trim(field).empty()) throw ParseError("unexpected quote inside unquoted field", line_no, i + 1);
      field.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? field : trim(field));
      field.clear();
      was_quoted = false;
    } else {
      field.push_back(c);
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", line_no, line.size() + 1);
  fields.push_back(was_quoted ? field : trim(field));
  return fields;
}

std::optional<double> parse_number(std::string_view s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

GraphDocument load_csv(std::istream& in, const LoadOptions& options) {
  GraphDocument doc(options.directed, options.allow_self_loops);

  struct Row {
    std::size_t line;
    std::vector<std::string> fields;
  };
  std::vector<Row> rows;
  std::vector<std::string> header;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line, line_no);
    if (rows.empty() && header.empty() && fields.size() >= 2 && lower(fields[0]) == "source" &&
        lower(fields[1]) == "target") {
      header = std::move(fields);
      continue;
    }
    if (fields.size() < 2) throw ParseError("expected at least source,target", line_no, line.size() + 1);
    if (fields[0].empty() || fields[1].empty()) throw ParseError("empty node id", line_no, 1);
    rows.push_back({line_no, std::move(fields)});
  }

  // Edge attribute columns: named by the header, otherwise attr1, attr2, ...
  std::size_t extra = header.size() > 2 ? header.size() - 2 : 0;
  for (const auto& r : rows) extra = std::max(extra, r.fields.size() - 2);
  std::vector<std::string> names(extra);
  for (std::size_t c = 0; c < extra; ++c)
    names[c] = c + 2 < header.size() && !header[c + 2].empty() ? header[c + 2] : "attr" + std::to_string(c + 1);

  std::vector<std::size_t> columns;
  for (std::size_t c = 0; c < extra; ++c) {
    bool numeric = true;
    for (const auto& r : rows) {
      if (c + 2 < r.fields.size() && !r.fields[c + 2].empty() && !parse_number(r.fields[c + 2])) {
        numeric = false;
        break;
      }
    }
    columns.push_back(doc.edge_attributes().declare(names[c], numeric ? AttributeKind::numeric : AttributeKind::nominal));
  }

  for (const auto& r : rows) {
    const NodeId a = doc.find_or_add_node(r.fields[0]);
    const NodeId b = doc.find_or_add_node(r.fields[1]);
    EdgeId e;
    try {
      e = doc.add_edge(a, b);
    } catch (const InputError& err) {
      throw ParseError(err.what(), r.line, 1);
    }
    for (std::size_t c = 0; c < extra; ++c) {
      if (c + 2 >= r.fields.size() || r.fields[c + 2].empty()) continue;
      const std::string& raw = r.fields[c + 2];
      const auto kind = doc.edge_attributes().column(columns[c]).kind;
      AttributeValue v = kind == AttributeKind::numeric ? AttributeValue(*parse_number(raw)) : AttributeValue(Nominal{raw});
      doc.edge_attributes().set(columns[c], index(e), std::move(v));
    }
  }
  return doc;
}

// ---------------------------------------------------------------- graph-json

std::string json_id(const nlohmann::json& v, const char* what) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw InputError(std::string(what) + " must be a string or integer");
}

AttributeValue json_value(const nlohmann::json& v, AttributeKind kind, const std::string& name) {
  if (v.is_null()) return std::monostate{};
  switch (kind) {
    case AttributeKind::numeric:
      if (!v.is_number()) throw InputError("attribute '" + name + "' expects numeric values");
      return v.get<double>();
    case AttributeKind::categorical:
      if (!v.is_string()) throw InputError("attribute '" + name + "' expects categorical values");
      return Categorical{v.get<std::string>()};
    case AttributeKind::nominal:
      if (!v.is_string()) throw InputError("attribute '" + name + "' expects nominal values");
      return Nominal{v.get<std::string>()};
  }
  return std::monostate{};
}

void declare_from_json(AttributeTable& table, const nlohmann::json& decls) {
  if (!decls.is_array()) throw InputError("attribute declarations must be an array");
  for (const auto& d : decls) {
    if (!d.is_object() || !d.contains("name") || !d["name"].is_string())
      throw InputError("attribute declaration needs a string name");
    table.declare(d["name"].get<std::string>(), parse_attribute_kind(d.value("kind", std::string("nominal"))));
  }
}

// Undeclared attributes take their kind from the first non-null value seen.
void read_attrs(AttributeTable& table, std::size_t element, const nlohmann::json& obj,
                std::initializer_list<std::string_view> reserved) {
  for (const auto& [key, v] : obj.items()) {
    if (std::find(reserved.begin(), reserved.end(), key) != reserved.end()) continue;
    auto col = table.find(key);
    if (!col) {
      if (v.is_null()) continue;
      const AttributeKind kind = v.is_number() ? AttributeKind::numeric : AttributeKind::nominal;
      if (!v.is_number() && !v.is_string()) throw InputError("attribute '" + key + "' has an unsupported value type");
      col = table.declare(key, kind);
    }
    table.set(*col, element, json_value(v, table.column(*col).kind, key));
  }
}

GraphDocument load_json(std::string_view text, const LoadOptions& options) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < err.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("malformed graph-json", line, col);
  }
  if (!j.is_object()) throw InputError("graph-json root must be an object");

  GraphDocument doc(j.value("directed", false), options.allow_self_loops);
  if (j.contains("attributes")) {
    const auto& a = j["attributes"];
    if (a.contains("nodes")) declare_from_json(doc.node_attributes(), a["nodes"]);
    if (a.contains("edges")) declare_from_json(doc.edge_attributes(), a["edges"]);
  }
  if (j.contains("nodes")) {
    for (const auto& n : j["nodes"]) {
      if (!n.is_object() || !n.contains("id")) throw InputError("every node needs an id");
      const NodeId id = doc.add_node(json_id(n["id"], "node id"));
      read_attrs(doc.node_attributes(), index(id), n, {"id"});
    }
  }
  if (j.contains("edges")) {
    for (const auto& e : j["edges"]) {
      if (!e.is_object() || !e.contains("source") || !e.contains("target"))
        throw InputError("every edge needs a source and a target");
      const std::string s = json_id(e["source"], "edge source");
      const std::string t = json_id(e["target"], "edge target");
      auto a = doc.find_node(s);
      auto b = doc.find_node(t);
      if (!a || !b) throw InputError("dangling edge endpoint '" + (a ? t : s) + "'");
      const EdgeId id = doc.add_edge(*a, *b);
      read_attrs(doc.edge_attributes(), index(id), e, {"source", "target"});
    }
  }
  return doc;
}

nlohmann::json attr_json(const AttributeValue& v) {
  if (std::holds_alternative<std::monostate>(v)) return nullptr;
  if (const auto* d = std::get_if<double>(&v)) return *d;
  return value_text(v);
}

nlohmann::json decl_json(const AttributeTable& table) {
  auto out = nlohmann::json::array();
  for (const auto& c : table.columns()) out.push_back({{"name", c.name}, {"kind", to_string(c.kind)}});
  return out;
}

}  // namespace

GraphDocument load_graph(std::istream& in, GraphFormat format, const LoadOptions& options) {
  if (format == GraphFormat::edge_list_csv) return load_csv(in, options);
  std::stringstream buf;
  buf << in.rdbuf();
  return load_json(buf.str(), options);
}

GraphDocument load_graph(std::string_view text, GraphFormat format, const LoadOptions& options) {
  if (format == GraphFormat::graph_json) return load_json(text, options);
  std::istringstream in{std::string(text)};
  return load_csv(in, options);
}

GraphDocument load_graph_file(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open graph file '" + path + "'");
  const bool json = path.size() >= 5 && lower(path.substr(path.size() - 5)) == ".json";
  return load_graph(in, json ? GraphFormat::graph_json : GraphFormat::edge_list_csv, options);
}

nlohmann::json to_json(const GraphDocument& doc) {
  nlohmann::json j;
  j["directed"] = doc.directed();
  j["attributes"] = {{"nodes", decl_json(doc.node_attributes())}, {"edges", decl_json(doc.edge_attributes())}};
  auto nodes = nlohmann::json::array();
  for (std::size_t i = 0; i < doc.node_count(); ++i) {
    nlohmann::json n = {{"id", doc.name(node_id(i))}};
    for (const auto& c : doc.node_attributes().columns())
      if (!std::holds_alternative<std::monostate>(c.values[i])) n[c.name] = attr_json(c.values[i]);
    nodes.push_back(std::move(n));
  }
  auto edges = nlohmann::json::array();
  for (const Edge& e : doc.edges()) {
    nlohmann::json o = {{"source", doc.name(e.source)}, {"target", doc.name(e.target)}};
    for (const auto& c : doc.edge_attributes().columns())
      if (!std::holds_alternative<std::monostate>(c.values[index(e.id)])) o[c.name] = attr_json(c.values[index(e.id)]);
    edges.push_back(std::move(o));
  }
  j["nodes"] = std::move(nodes);
  j["edges"] = std::move(edges);
  return j;
}

std::string write_graph_json(const GraphDocument& doc) { return to_json(doc).dump(2) + "\n"; }

}  // namespace nodetrix
