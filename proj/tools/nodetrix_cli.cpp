// nodetrix command line: stats, render, animate, suggest, classify, session,
// generate.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "nodetrix/animation.hpp"
#include "nodetrix/generators.hpp"
#include "nodetrix/metrics.hpp"
#include "nodetrix/patterns.hpp"
#include "nodetrix/session.hpp"
#include "nodetrix/suggest.hpp"

using namespace nodetrix;

namespace {

struct Inputs {
  std::string graph;
  std::string groups;
  std::string layout;
  std::string style;
  std::uint64_t seed = 1;
  bool directed = false;
};

void add_inputs(CLI::App* cmd, Inputs& in, bool need_groups) {
  cmd->add_option("--graph", in.graph, "edge-list CSV or graph JSON")->required();
  auto* g = cmd->add_option("--groups", in.groups, "grouping file (default: all singletons)");
  if (need_groups) g->required();
  cmd->add_option("--layout", in.layout, "layout file (default: seeded relax)");
  cmd->add_option("--style", in.style, "style file");
  cmd->add_option("--seed", in.seed, "seed for layout randomness")->capture_default_str();
  cmd->add_flag("--directed", in.directed, "treat CSV edges as directed");
}

struct Loaded {
  std::shared_ptr<GraphDocument> doc;
  GroupingState grouping;
  StyleConfig style;
  LayoutState layout;
  LinLogParams params;
};

Loaded load(const Inputs& in) {
  Loaded l;
  LoadOptions opts;
  opts.directed = in.directed;
  l.doc = std::make_shared<GraphDocument>(load_graph_file(in.graph, opts));
  l.grouping = in.groups.empty() ? GroupingState::singletons(*l.doc) : load_grouping_file(in.groups, *l.doc);
  l.style = in.style.empty() ? StyleConfig{} : load_style_file(in.style);
  l.params.seed = in.seed;
  if (in.layout.empty()) {
    l.layout = initial_layout(*l.doc, l.grouping, l.style, l.params);
  } else {
    l.layout = load_layout_file(in.layout);
    check_layout(l.layout, l.grouping);
    update_extents(l.layout, l.grouping, l.style);
  }
  return l;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

std::string stats_text(const GraphStats& s) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "nodes                   %zu\n"
                "edges                   %zu\n"
                "components              %zu\n"
                "largest component       %zu nodes, %zu edges\n"
                "clustering coefficient  %s\n"
                "density                 %s\n",
                s.nodes, s.edges, s.components, s.largest_component_nodes, s.largest_component_edges,
                std::isnan(s.clustering_coefficient) ? "n/a" : format_fixed(s.clustering_coefficient, 6).c_str(),
                format_fixed(s.density, 6).c_str());
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NodeTrix: node-link diagrams with embedded adjacency matrices"};
  app.require_subcommand(1);

  // stats
  auto* stats = app.add_subcommand("stats", "graph statistics");
  std::string stats_graph;
  bool stats_json = false;
  bool stats_directed = false;
  stats->add_option("--graph", stats_graph)->required();
  stats->add_flag("--json", stats_json, "print JSON");
  stats->add_flag("--directed", stats_directed);

  // render
  Inputs render_in;
  std::string render_out;
  double render_size = 800.0;
  bool render_scene_json = false;
  auto* render = app.add_subcommand("render", "render a NodeTrix view to SVG");
  add_inputs(render, render_in, false);
  render->add_option("--out", render_out, "SVG path, - for stdout")->required();
  render->add_option("--size", render_size, "canvas size in pixels")->capture_default_str();
  render->add_flag("--json", render_scene_json, "write the scene as JSON instead of SVG");

  // animate
  Inputs anim_in;
  std::string anim_out;
  std::string anim_spec;
  std::uint64_t anim_group = 0;
  std::size_t anim_frames = 11;
  double anim_size = 800.0;
  auto* animate = app.add_subcommand("animate", "export a node-link to matrix transition");
  add_inputs(animate, anim_in, true);
  animate->add_option("--group", anim_group, "group id to animate")->required();
  animate->add_option("--frames", anim_frames, "number of frames (>= 2)")->capture_default_str();
  animate->add_option("--spec", anim_spec, "animation spec JSON file");
  animate->add_option("--out", anim_out, "output directory")->required();
  animate->add_option("--size", anim_size, "canvas size in pixels")->capture_default_str();

  // suggest
  std::string sug_graph;
  std::string sug_out;
  double sug_resolution = 1.0;
  std::uint64_t sug_seed = 1;
  bool sug_directed = false;
  auto* suggest = app.add_subcommand("suggest", "suggest a grouping by greedy modularity");
  suggest->add_option("--graph", sug_graph)->required();
  suggest->add_option("--resolution", sug_resolution)->capture_default_str();
  suggest->add_option("--seed", sug_seed, "accepted for uniformity; the greedy merge is deterministic");
  suggest->add_option("--out", sug_out, "grouping file, - for stdout");
  suggest->add_flag("--directed", sug_directed);

  // classify
  Inputs cls_in;
  bool cls_json = false;
  std::vector<std::uint64_t> cls_groups;
  PatternThresholds th;
  auto* classify_cmd = app.add_subcommand("classify", "classify group structure");
  classify_cmd->add_option("--graph", cls_in.graph)->required();
  classify_cmd->add_option("--groups", cls_in.groups)->required();
  classify_cmd->add_option("--group", cls_groups, "only these groups");
  classify_cmd->add_option("--hub", th.hub)->capture_default_str();
  classify_cmd->add_option("--sparse", th.sparse)->capture_default_str();
  classify_cmd->add_option("--dense", th.dense)->capture_default_str();
  classify_cmd->add_flag("--json", cls_json);
  classify_cmd->add_flag("--directed", cls_in.directed);

  // session
  Inputs ses_in;
  std::string transport = "stdio";
  auto* session = app.add_subcommand("session", "serve the editing protocol");
  add_inputs(session, ses_in, false);
  session->add_option("--transport", transport, "stdio or unix:/path")->capture_default_str();

  // generate
  CoauthorshipParams gen;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "write a synthetic co-authorship graph");
  generate->add_option("--authors", gen.authors)->capture_default_str();
  generate->add_option("--papers", gen.papers)->capture_default_str();
  generate->add_option("--labs", gen.labs)->capture_default_str();
  generate->add_option("--seed", gen.seed)->capture_default_str();
  generate->add_option("--cross-lab", gen.cross_lab_probability)->capture_default_str();
  generate->add_option("--out", gen_out, "graph JSON path, - for stdout")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*stats) {
      LoadOptions opts;
      opts.directed = stats_directed;
      const GraphStats s = compute_stats(load_graph_file(stats_graph, opts));
      std::cout << (stats_json ? to_json(s).dump(2) + "\n" : stats_text(s));
    } else if (*render) {
      const Loaded l = load(render_in);
      const Scene scene = build_scene(*l.doc, l.grouping, l.layout, l.style);
      write_text(render_out, render_scene_json ? to_json(scene).dump(2) + "\n" : render_svg(scene, render_size, render_size));
    } else if (*animate) {
      const Loaded l = load(anim_in);
      AnimationSpec spec;
      if (!anim_spec.empty()) {
        std::ifstream f(anim_spec);
        if (!f) throw InputError("cannot open spec file '" + anim_spec + "'");
        spec = animation_spec_from_json(nlohmann::json::parse(f, nullptr, false));
      }
      const AnimationPlan plan = plan_transition(*l.doc, l.grouping, l.layout, l.style, group_id(anim_group), spec);
      const std::filesystem::path dir = anim_out;
      std::filesystem::create_directories(dir);
      auto manifest = nlohmann::json::array();
      const auto frames = plan.frames(anim_frames);
      for (std::size_t k = 0; k < frames.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%04zu.svg", k);
        const Scene s = plan.scene(frames[k]);
        write_text((dir / name).string(), render_svg(s, anim_size, anim_size));
        nlohmann::json entry = to_json(frames[k]);
        entry["file"] = name;
        entry["scene_hash"] = hex64(scene_hash(s));
        manifest.push_back(std::move(entry));
      }
      const nlohmann::json doc{{"group", anim_group},
                               {"spec", to_json(spec)},
                               {"duration", spec.duration},
                               {"stage_b_end", plan.stage_b_end()},
                               {"frames", std::move(manifest)}};
      write_text((dir / "manifest.json").string(), doc.dump(2) + "\n");
    } else if (*suggest) {
      LoadOptions opts;
      opts.directed = sug_directed;
      const GraphDocument doc = load_graph_file(sug_graph, opts);
      write_text(sug_out, suggestion_json(doc, suggest_communities(doc, sug_resolution)).dump(2) + "\n");
    } else if (*classify_cmd) {
      LoadOptions opts;
      opts.directed = cls_in.directed;
      const GraphDocument doc = load_graph_file(cls_in.graph, opts);
      const GroupingState s = load_grouping_file(cls_in.groups, doc);
      std::vector<PatternReport> reports;
      if (cls_groups.empty()) reports = classify_all(doc, s, th);
      for (auto g : cls_groups) reports.push_back(classify(doc, s, group_id(g), th));
      if (cls_json) {
        auto out = nlohmann::json::array();
        for (const auto& r : reports) out.push_back(to_json(r, doc));
        std::cout << out.dump(2) << "\n";
      } else {
        std::cout << report_table(reports, doc, s);
      }
    } else if (*session) {
      const Loaded l = load(ses_in);
      SessionOptions opts;
      opts.layout = l.params;
      Session s(l.doc, l.grouping, l.layout, l.style, opts);
      if (transport == "stdio") serve_stream(s, std::cin, std::cout);
      else if (transport.rfind("unix:", 0) == 0) serve_unix_socket(s, transport.substr(5));
      else throw InputError("unknown transport '" + transport + "'");
    } else if (*generate) {
      write_text(gen_out, write_graph_json(generate_coauthorship(gen)));
    }
  } catch (const InvariantError& e) {
    std::cerr << "nodetrix: internal error: " << e.what() << "\n";
    return 3;
  } catch (const InputError& e) {
    std::cerr << "nodetrix: " << e.what() << "\n";
    return 2;
  } catch (const OperationError& e) {
    std::cerr << "nodetrix: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "nodetrix: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
