// Command-line front end for the bounded-domain analysis pipeline:
// generate/load a surface, classify its critical points, build the Reeb
// graphs, validate and simplify the weighted indexed graph, apply the
// classification rules and the visibility checks.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bdomain/annotate.hpp"
#include "bdomain/classify.hpp"
#include "bdomain/diagram.hpp"
#include "bdomain/generators.hpp"
#include "bdomain/mesh.hpp"
#include "bdomain/morse.hpp"
#include "bdomain/reeb.hpp"
#include "bdomain/rewrite.hpp"
#include "bdomain/visibility.hpp"
#include "bdomain/wirg.hpp"

namespace {

using namespace bdomain;
namespace fs = std::filesystem;

std::string module_of(const std::string& code) {
  if (code == "ParseError" || code == "NotClosed" || code == "NotOriented" ||
      code == "NotConnected" || code == "Degenerate" || code == "InvalidSpec")
    return "geometry";
  if (code == "NotMorseAfterTieBreak" || code == "PerturbationFailed") return "morse";
  if (code == "CriticalHeight") return "reeb";
  if (code == "SchemaError") return "wirg";
  if (code == "UnknownTypePair") return "rewrite";
  if (code == "LexError" || code == "StrandCountError" || code == "PatternMismatch") return "diagram";
  if (code == "MissingMarks") return "visibility";
  if (code == "InvalidWIRG") return "classify";
  return "bdomain";
}

struct CommonOpts {
  std::string input;      // mesh file
  std::string gen_kind;   // generator name
  std::string gen_spec;   // generator spec as a JSON file
  std::vector<double> dir{0, 0, 1};
  uint64_t seed = 1;
  int samples = 1000;
  int rays = 256;
  int budget = 10000;
  int bridges = 0;  // declared bridge count for the min-count check
  std::string out_dir = "out";
  std::vector<std::string> formats{"json", "dot"};
};

GeneratorSpec spec_from_json(const nlohmann::json& j) {
  GeneratorSpec spec;
  if (j.contains("kind")) spec.kind = gen_kind_from_string(j["kind"].get<std::string>());
  if (j.contains("R")) spec.R = j["R"].get<double>();
  if (j.contains("r")) spec.r = j["r"].get<double>();
  if (j.contains("rho")) spec.rho = j["rho"].get<double>();
  if (j.contains("tilt_deg")) spec.tilt_deg = j["tilt_deg"].get<double>();
  if (j.contains("res")) spec.res = j["res"].get<int>();
  if (j.contains("bridges")) spec.bridges = j["bridges"].get<int>();
  if (j.contains("wiggles")) spec.wiggles = j["wiggles"].get<int>();
  if (j.contains("knot")) {
    std::string k = j["knot"].get<std::string>();
    if (k == "trefoil")
      spec.knot = KnotName::Trefoil;
    else if (k == "figure8")
      spec.knot = KnotName::Figure8;
    else
      throw InvalidSpecError("unknown knot: " + k);
  }
  return spec;
}

TriSurface obtain_surface(const CommonOpts& opts) {
  if (!opts.input.empty()) return load_surface(opts.input);
  if (!opts.gen_spec.empty()) {
    std::ifstream in(opts.gen_spec);
    if (!in) throw IoError("cannot open spec file: " + opts.gen_spec);
    nlohmann::json j;
    in >> j;
    return generate(spec_from_json(j));
  }
  if (!opts.gen_kind.empty()) {
    GeneratorSpec spec;
    spec.kind = gen_kind_from_string(opts.gen_kind);
    return generate(spec);
  }
  throw InvalidSpecError("need --in FILE, --gen KIND or --spec FILE");
}

HeightFunction height_of(const CommonOpts& opts) {
  if (opts.dir.size() != 3) throw InvalidSpecError("--dir needs three components");
  return make_height({opts.dir[0], opts.dir[1], opts.dir[2]});
}

SolidReebResult run_pipeline(const TriSurface& s, HeightFunction h, uint64_t seed) {
  try {
    return solid_reeb(s, h);
  } catch (const NotMorseError&) {
    return solid_reeb(s, perturb_to_morse(s, h, seed));
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

bool wants(const CommonOpts& opts, const std::string& fmt) {
  return std::find(opts.formats.begin(), opts.formats.end(), fmt) != opts.formats.end();
}

int do_reeb(const CommonOpts& opts, SolidReebResult* out_res = nullptr) {
  TriSurface s = obtain_surface(opts);
  auto res = run_pipeline(s, height_of(opts), opts.seed);
  fs::create_directories(opts.out_dir);
  if (wants(opts, "json")) {
    write_json(fs::path(opts.out_dir) / "wirg.json", encode(res.wirg));
    nlohmann::json cps = nlohmann::json::array();
    for (const auto& cp : res.critical)
      cps.push_back({{"vertex", cp.vertex},
                     {"height", cp.height},
                     {"index", cp.index},
                     {"multiplicity", cp.multiplicity},
                     {"convexity", cp.convexity == Convexity::NA ? nlohmann::json(nullptr)
                                                                 : nlohmann::json(to_string(cp.convexity))}});
    write_json(fs::path(opts.out_dir) / "critical_points.json", cps);
  }
  if (wants(opts, "dot")) {
    write_text(fs::path(opts.out_dir) / "reeb_surface.dot",
               to_dot(res.surface, "surface", &res.critical));
    write_text(fs::path(opts.out_dir) / "reeb_solid.dot", to_dot(res.solid, "solid", &res.critical));
    write_text(fs::path(opts.out_dir) / "wirg.dot", to_dot(res.wirg, "wirg"));
  }
  if (out_res) *out_res = std::move(res);
  return 0;
}

int do_analyze(const CommonOpts& opts) {
  TriSurface s = obtain_surface(opts);
  auto res = run_pipeline(s, height_of(opts), opts.seed);
  fs::create_directories(opts.out_dir);

  auto violations = validate(res.wirg);
  if (!violations.empty()) {
    for (const auto& v : violations)
      std::cerr << "violation " << v.rule << " at " << v.subject << ": " << v.detail << "\n";
    return 2;
  }

  auto rep = classify(res.wirg, res.critical, res.surface.betti1());
  if (opts.bridges > 0) rep.min_count_context = 4 * opts.bridges;

  nlohmann::json report = report_to_json(rep);
  if (opts.bridges > 0) {
    auto chk = min_count_check(rep, opts.bridges);
    const char* outcome = chk.outcome == MinCountOutcome::Exact
                              ? "exact"
                              : (chk.outcome == MinCountOutcome::Slack ? "slack" : "contradiction");
    report["min_count_check"] = {{"declared_bridges", opts.bridges},
                                 {"expected", chk.expected},
                                 {"observed", chk.observed},
                                 {"outcome", outcome},
                                 {"slack", chk.slack}};
  }
  BasinMarks marks = basin_marks_from_pipeline(res);
  try {
    auto basins = basin_analysis(res.wirg, marks);
    nlohmann::json jb = nlohmann::json::array();
    for (const auto& b : basins) {
      jb.push_back({{"concave_min", b.concave_min},
                    {"cases", b.case_sequence},
                    {"outcome", to_string(b.outcome)},
                    {"witness", b.witness_node}});
    }
    report["basins"] = jb;
    report["visibility_verdict"] = visibility_verdict(rep, basins);
  } catch (const MissingMarksError& e) {
    report["basins"] = nullptr;
    report["basin_note"] = e.what();
  }

  VisibilityReport vis = sample_visibility(s, opts.samples, opts.rays, opts.seed);
  report["sampled_visible_fraction"] = vis.visible_fraction;

  if (wants(opts, "json")) {
    write_json(fs::path(opts.out_dir) / "report.json", report);
    write_json(fs::path(opts.out_dir) / "wirg.json", encode(res.wirg));
    write_json(fs::path(opts.out_dir) / "visibility.json", visibility_to_json(vis));
  }
  if (wants(opts, "dot")) {
    write_text(fs::path(opts.out_dir) / "reeb_surface.dot",
               to_dot(res.surface, "surface", &res.critical));
    write_text(fs::path(opts.out_dir) / "reeb_solid.dot", to_dot(res.solid, "solid", &res.critical));
  }
  if (wants(opts, "ply"))
    write_text(fs::path(opts.out_dir) / "visibility.ply", visibility_to_ply(s, vis));
  std::cout << report_to_text(rep);
  if (report.contains("visibility_verdict"))
    std::cout << "visibility: " << report["visibility_verdict"].get<std::string>() << "\n";
  return 0;
}

Wirg load_wirg(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad JSON: ") + e.what());
  }
  return decode(j);
}

int do_classify(const std::string& path, const CommonOpts& opts) {
  Wirg g = load_wirg(path);
  auto violations = validate(g);
  if (!violations.empty()) {
    for (const auto& v : violations)
      std::cout << "violation " << v.rule << " at " << v.subject << ": " << v.detail << "\n";
    return 2;
  }
  // abstract graphs carry no critical list: derive one from node indices
  std::vector<CriticalPoint> crit;
  for (const auto& n : g.nodes) {
    int deg_below = static_cast<int>(g.edges_below(n.id).size());
    int deg_above = static_cast<int>(g.edges_above(n.id).size());
    int index = n.index ? *n.index : (deg_below == 0 ? 0 : (deg_above == 0 ? 2 : 1));
    crit.push_back({0, n.height, index, 1, n.convexity, n.saddle_normal});
  }
  auto rep = classify(g, crit);
  if (opts.bridges > 0) rep.min_count_context = 4 * opts.bridges;
  std::cout << report_to_text(rep);
  if (opts.bridges > 0) {
    auto chk = min_count_check(rep, opts.bridges);
    std::cout << "min-count check (k=" << opts.bridges << "): observed " << chk.observed
              << " vs " << chk.expected
              << (chk.outcome == MinCountOutcome::Exact
                      ? " (exact)"
                      : chk.outcome == MinCountOutcome::Slack ? " (slack)" : " (contradiction)")
              << "\n";
  }
  fs::create_directories(opts.out_dir);
  if (wants(opts, "json")) write_json(fs::path(opts.out_dir) / "report.json", report_to_json(rep));
  return 0;
}

std::map<std::string, std::pair<EndpointAnnotation, EndpointAnnotation>> load_annotations(
    const std::string& path) {
  std::map<std::string, std::pair<EndpointAnnotation, EndpointAnnotation>> out;
  if (path.empty()) return out;
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json j;
  in >> j;
  auto parse_side = [](const nlohmann::json& js) {
    EndpointAnnotation a;
    a.type = static_cast<EndpointType>(js.at("type").get<int>());
    a.mirrored = js.value("mirrored", false);
    a.mirror_known = js.value("mirror_known", true);
    return a;
  };
  for (auto it = j.begin(); it != j.end(); ++it)
    out[it.key()] = {parse_side(it.value().at("lower")), parse_side(it.value().at("upper"))};
  return out;
}

int do_simplify(const std::string& path, const std::string& annotations_path, bool explain,
                const CommonOpts& opts) {
  Wirg g = load_wirg(path);
  auto violations = validate(g);
  if (!violations.empty()) {
    for (const auto& v : violations)
      std::cout << "violation " << v.rule << " at " << v.subject << ": " << v.detail << "\n";
    return 2;
  }
  auto res = simplify(g, load_annotations(annotations_path), opts.budget);
  fs::create_directories(opts.out_dir);
  write_json(fs::path(opts.out_dir) / "wirg_simplified.json", encode(res.graph));
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& step : res.trace)
    trace.push_back({{"rule", step.rule}, {"affected", step.affected}, {"result", encode(step.result)}});
  write_json(fs::path(opts.out_dir) / "trace.json", trace);
  if (explain)
    for (const auto& step : res.trace) {
      std::cout << step.rule << ":";
      for (const auto& id : step.affected) std::cout << " " << id;
      std::cout << "\n";
    }
  std::cout << "steps: " << res.trace.size() << (res.budget_exhausted ? " (budget exhausted)" : "")
            << "\n";
  return 0;
}

int do_visibility(const CommonOpts& opts) {
  TriSurface s = obtain_surface(opts);
  VisibilityReport vis = sample_visibility(s, opts.samples, opts.rays, opts.seed);
  fs::create_directories(opts.out_dir);
  if (wants(opts, "json")) write_json(fs::path(opts.out_dir) / "visibility.json", visibility_to_json(vis));
  if (wants(opts, "ply"))
    write_text(fs::path(opts.out_dir) / "visibility.ply", visibility_to_ply(s, vis));
  std::cout << "visible fraction: " << vis.visible_fraction << " (" << vis.rays_used << " rays)\n";
  return 0;
}

int do_gen(const CommonOpts& opts, const std::string& out_file) {
  TriSurface s = obtain_surface(opts);
  save_surface(s, out_file);
  std::cout << s.name << ": " << s.vertex_count() << " vertices, " << s.triangle_count()
            << " triangles, chi " << euler_characteristic(s) << "\n";
  return 0;
}

int do_diagram(const std::string& action, const std::string& word_text, const CommonOpts& opts) {
  std::string text = word_text;
  if (!text.empty() && text[0] == '@') {  // read the word from a DSL file
    std::ifstream in(text.substr(1));
    if (!in) throw IoError("cannot open " + text.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  DiagramWord w = parse_diagram(text);
  if (action == "parse") {
    std::cout << render(w) << "\n  strands:";
    for (int p : w.profile) std::cout << " " << p;
    std::cout << "\n  crossings: " << w.crossings() << "\n";
    return 0;
  }
  if (action == "dot") {
    std::cout << diagram_to_dot(w);
    return 0;
  }
  if (action == "normalize") {
    auto res = normalize(w, opts.budget > 10000 ? opts.budget : 100000);
    std::cout << render(res.word) << "\n"
              << (res.status == NormalizeStatus::Planar ? "planar" : "budget-exhausted") << " after "
              << res.states_explored << " states\n";
    return res.status == NormalizeStatus::Planar ? 0 : 1;
  }
  throw InvalidSpecError("unknown diagram action: " + action);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reeb-graph analysis of bounded domains in 3-space"};
  app.require_subcommand(1);

  CommonOpts opts;
  auto add_common = [&](CLI::App* cmd, bool mesh_input) {
    if (mesh_input) {
      cmd->add_option("--in", opts.input, "input mesh (OFF or OBJ)");
      cmd->add_option("--gen", opts.gen_kind,
                      "generator kind: sphere | torus-horizontal | torus-vertical-tilted | "
                      "knot-tube | genus2-pretzel");
      cmd->add_option("--spec", opts.gen_spec, "generator spec JSON file");
    }
    cmd->add_option("--dir", opts.dir, "height direction")->expected(3)->delimiter(',');
    cmd->add_option("--seed", opts.seed, "random seed");
    cmd->add_option("--samples", opts.samples, "visibility sample count");
    cmd->add_option("--rays", opts.rays, "rays per sample");
    cmd->add_option("--budget", opts.budget, "rewrite/search budget");
    cmd->add_option("--bridges", opts.bridges,
                    "declared bridge count: compare critical count against 4k");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--format", opts.formats, "output formats: json dot ply")->delimiter(',');
  };

  std::string gen_out = "surface.off";
  auto* gen = app.add_subcommand("gen", "generate a surface and write it to a mesh file");
  add_common(gen, true);
  gen->add_option("--mesh-out", gen_out, "output mesh path (.off or .obj)");

  auto* analyze = app.add_subcommand("analyze", "full pipeline: reeb + classify + visibility");
  add_common(analyze, true);

  auto* reeb = app.add_subcommand("reeb", "critical points and Reeb graphs only");
  add_common(reeb, true);

  std::string wirg_path, annotations_path;
  auto* classify_cmd = app.add_subcommand("classify", "validate and classify a WIRG JSON document");
  classify_cmd->add_option("wirg", wirg_path, "WIRG JSON file")->required();
  add_common(classify_cmd, false);

  bool explain = false;
  auto* simplify_cmd = app.add_subcommand("simplify", "rewrite a WIRG to its simple form");
  simplify_cmd->add_option("wirg", wirg_path, "WIRG JSON file")->required();
  simplify_cmd->add_option("--annotations", annotations_path,
                           "endpoint annotations JSON for weight-2 segments");
  simplify_cmd->add_flag("--explain", explain, "print each rewrite step");
  add_common(simplify_cmd, false);

  auto* vis = app.add_subcommand("visibility", "ray-cast visibility sampling");
  add_common(vis, true);

  std::string diagram_action = "normalize", diagram_word;
  auto* diagram_cmd = app.add_subcommand("diagram", "trivalent diagram words");
  diagram_cmd->add_option("action", diagram_action, "parse | normalize | dot")->required();
  diagram_cmd->add_option("word", diagram_word, "diagram word, e.g. \"cup Y1 s1 L1 cap\"")->required();
  add_common(diagram_cmd, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return do_gen(opts, gen_out);
    if (analyze->parsed()) return do_analyze(opts);
    if (reeb->parsed()) return do_reeb(opts);
    if (classify_cmd->parsed()) return do_classify(wirg_path, opts);
    if (simplify_cmd->parsed()) return do_simplify(wirg_path, annotations_path, explain, opts);
    if (vis->parsed()) return do_visibility(opts);
    if (diagram_cmd->parsed()) return do_diagram(diagram_action, diagram_word, opts);
  } catch (const Error& e) {
    std::cerr << module_of(e.code()) << "." << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
