#include "cli.hpp"

#include "covkit/cheeger.hpp"
#include "covkit/error.hpp"
#include "covkit/finite_model.hpp"
#include "covkit/group_model.hpp"
#include "covkit/json_io.hpp"
#include "covkit/matrix_model.hpp"
#include "covkit/normal_surface.hpp"
#include "covkit/orbifold.hpp"
#include "covkit/perturbation.hpp"
#include "covkit/torus_model.hpp"
#include "covkit/triangulation.hpp"
#include "covkit/weighting.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <ostream>

namespace covkit::cli {

namespace {

struct Config {
  std::string model;
  std::string graph;
  std::string weights;
  std::string presentation;
  std::string orbifold;
  std::string singular;
  std::string tri;
  std::string set;
  std::string out;
  std::string dot;
  std::string epsilon;
  std::string k4 = "0";
  std::string haar;
  std::uint64_t seed = 0;
  std::size_t verify_len = 6;
  std::size_t haar_samples = 4096;
  std::size_t edge_samples = 64;
  std::size_t samples = 200;
  std::size_t base_vertex = 0;
  std::size_t cap = kDefaultCheegerCap;
  std::uint64_t p = 2;
  std::int64_t dp = 0;
  std::int64_t gens = 0;
  std::int64_t rels = 0;
  double dimension = 1.0;
  bool exact = false;
  bool sweep = false;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("COVKIT_SEED")) {
    try {
      std::size_t used = 0;
      unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw ParseError("COVKIT_SEED must be a nonnegative integer");
  }
  return 0;
}

Json base_report(const std::string& command, Json config) {
  return {{"tool", "covkit"}, {"version", COVKIT_VERSION}, {"command", command}, {"config", std::move(config)}};
}

template <typename Scalar>
Json scalar_json(const Scalar& x) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return rational_to_json(x);
  } else {
    return Json(x);
  }
}

std::string sampled(std::size_t n, std::uint64_t seed) {
  return "sampled(" + std::to_string(n) + ", " + std::to_string(seed) + ")";
}

template <LatticeModel M>
Json pipeline_report(const PerturbationResult<M>& r) {
  Rational vertex_total = 0, edge_total = 0;
  for (const auto& w : r.integer_weights.vertex) vertex_total += w;
  for (const auto& w : r.integer_weights.edge) edge_total += w;
  const auto& eps = r.epsilon_report;
  const auto& vh = r.virtual_hom_report;
  Json haar;
  if (r.haar_exact) {
    auto check = verify_weighting(r.graph.y, *r.haar_exact);
    haar = {{"mode", "exact"},
            {"balanced", check.balanced()},
            {"max_abs_residual", rational_to_json(check.max_abs_residual)},
            {"weights", weighting_to_json(*r.haar_exact)}};
  } else if (r.haar_sampled) {
    auto check = verify_weighting(r.graph.y, r.haar_sampled->value);
    double max_se = 0.0;
    for (double se : r.haar_sampled->std_error.edge) max_se = std::max(max_se, se);
    haar = {{"mode", "monte_carlo"},
            {"max_abs_residual", check.max_abs_residual},
            {"max_edge_std_error", max_se},
            {"weights", weight_estimate_to_json(*r.haar_sampled)}};
  }
  Json result{
      {"delta", scalar_json(r.delta)},
      {"epsilon", scalar_json(r.epsilon)},
      {"epsilon_precheck", r.epsilon_precheck_certified ? "passed" : "unchecked"},
      {"cell_count", r.partition.cells.size()},
      {"y_vertices", r.graph.y.num_vertices()},
      {"y_edges", r.graph.y.edges().size()},
      {"integer_weight_totals", {{"vertex", rational_to_json(vertex_total)}, {"edge", rational_to_json(edge_total)}}},
      {"x_vertices", r.cover().num_vertices()},
      {"x_unpruned_vertices", r.x.unpruned_vertices},
      {"x_components", r.x.components},
      {"is_rose_covering", r.cover().is_rose_covering()},
      {"subgroup_index", subgroup_index(r.cover())},
      {"subgroup_rank", subgroup_rank(r.cover())},
      {"haar_weighting", haar},
      {"epsilon_perturbation",
       {{"max_len", eps.max_len},
        {"checks", eps.checks},
        {"max_defect", scalar_json(eps.max_defect)},
        {"failure_count", eps.failure_count},
        {"failures", eps.failures}}},
      {"virtual_homomorphism",
       {{"max_len", vh.max_len},
        {"words_checked", vh.words_checked},
        {"subgroup_words", vh.subgroup_words},
        {"pairs_checked", vh.pairs_checked},
        {"homomorphism_failures", vh.hom_failures},
        {"homomorphism_failure_count", vh.hom_failure_count},
        {"lattice_failures", vh.lattice_failures},
        {"lattice_failure_count", vh.lattice_failure_count},
        {"cocycle_failures", vh.cocycle_failures},
        {"cocycle_failure_count", vh.cocycle_failure_count}}}};
  Json basis = Json::array();
  if (r.cover().num_vertices() <= 64) {
    for (const auto& w : schreier_basis(r.cover())) basis.push_back(format_word(r.alphabet, w));
    result["subgroup_basis"] = basis;
  }
  return result;
}

template <LatticeModel M>
bool pipeline_passed(const PerturbationResult<M>& r) {
  return r.cover().is_rose_covering() && r.epsilon_report.passed() && r.virtual_hom_report.passed();
}

void emit(const Config& cfg, const Json& report, std::ostream& out) {
  if (cfg.out.empty()) {
    out << report.dump(2) << "\n";
  } else {
    write_json_atomic(cfg.out, report);
  }
}

template <LatticeModel M>
int finish_pipeline(const Config& cfg, Json report, const PerturbationResult<M>& r, std::ostream& out) {
  report["result"] = pipeline_report(r);
  const bool exact_transitions = M::exact;
  report["provenance"] = {
      {"delta", "exact"},
      {"transitions", exact_transitions ? "exact" : sampled(cfg.edge_samples, cfg.seed)},
      {"haar_weighting", r.haar_exact ? "exact" : sampled(cfg.haar_samples, cfg.seed)},
      {"integer_weighting", "exact"},
      {"verification", M::exact ? "exact" : "floating"}};
  report["passed"] = pipeline_passed(r);
  if (!cfg.dot.empty()) {
    std::vector<std::string> annotations;
    for (auto v : r.projection().vertex_map) annotations.push_back("cell " + std::to_string(v));
    write_text_atomic(cfg.dot, to_dot(r.cover(), annotations));
  }
  emit(cfg, report, out);
  return pipeline_passed(r) ? kExitOk : kExitVerificationFailed;
}

int cmd_perturb(const Config& cfg, std::ostream& out) {
  ModelSpec spec = model_from_json(read_json_file(cfg.model));
  if (cfg.epsilon.empty()) throw ParseError("--epsilon is required");
  PipelineOptions opt;
  opt.seed = cfg.seed;
  opt.verify_len = cfg.verify_len;
  opt.edge_samples = cfg.edge_samples;
  opt.haar_samples = cfg.haar_samples;
  Json config{{"model", cfg.model},
              {"epsilon", cfg.epsilon},
              {"seed", cfg.seed},
              {"verify_len", cfg.verify_len},
              {"edge_samples", cfg.edge_samples},
              {"haar_samples", cfg.haar_samples}};
  auto pick_mode = [&](bool exact_default) {
    std::string mode = cfg.haar.empty() ? (exact_default ? "exact" : "mc") : cfg.haar;
    config["haar"] = mode;
    opt.haar_mode = mode == "exact" ? HaarMode::exact : HaarMode::monte_carlo;
  };
  if (auto* f = std::get_if<FiniteModelSpec>(&spec)) {
    pick_mode(true);
    auto r = run_pipeline(f->model, f->alphabet, f->phi, parse_rational(cfg.epsilon), opt);
    Json report = base_report("perturb run", config);
    report["model_type"] = "finite";
    return finish_pipeline(cfg, report, r, out);
  }
  if (auto* t = std::get_if<TorusModelSpec>(&spec)) {
    pick_mode(t->exact);
    Json report = base_report("perturb run", config);
    report["model_type"] = t->exact ? "torus_exact" : "torus_floating";
    if (t->exact) {
      std::vector<ExactTorusModel::Element> phi;
      for (std::size_t s = 0; s < t->alphabet.size(); ++s) phi.push_back(t->exact_image(s));
      auto r = run_pipeline(ExactTorusModel(t->dimension), t->alphabet, phi, parse_rational(cfg.epsilon), opt);
      return finish_pipeline(cfg, report, r, out);
    }
    std::vector<FloatTorusModel::Element> phi;
    for (std::size_t s = 0; s < t->alphabet.size(); ++s) phi.push_back(t->float_image(s));
    auto r = run_pipeline(FloatTorusModel(t->dimension), t->alphabet, phi,
                          to_double(parse_rational(cfg.epsilon)), opt);
    return finish_pipeline(cfg, report, r, out);
  }
  throw ModelError("matrix models carry no lattice partition; use 'model check' instead");
}

int cmd_weight_solve(const Config& cfg, std::ostream& out) {
  auto y = digraph_from_json(read_json_file(cfg.graph));
  Json report = base_report("weight solve", {{"graph", cfg.graph}});
  auto w = solve_integer_weighting(y);
  report["provenance"] = {{"weighting", "exact"}};
  if (!w) {
    Json missing = Json::array();
    for (const auto& v : degree_violations(y)) {
      missing.push_back({{"vertex", v.vertex},
                         {"label", y.alphabet().name(v.label)},
                         {"missing_out", v.missing_out},
                         {"missing_in", v.missing_in}});
    }
    report["result"] = {{"feasible", false}, {"degree_violations", missing}};
    report["passed"] = false;
    emit(cfg, report, out);
    return kExitVerificationFailed;
  }
  auto check = verify_weighting(y, *w);
  report["result"] = {{"feasible", true}, {"weights", weighting_to_json(*w)}, {"balanced", check.balanced()}};
  report["passed"] = check.balanced();
  emit(cfg, report, out);
  return check.balanced() ? kExitOk : kExitVerificationFailed;
}

int cmd_weight_verify(const Config& cfg, std::ostream& out) {
  auto y = digraph_from_json(read_json_file(cfg.graph));
  auto w = weighting_from_json(read_json_file(cfg.weights));
  if (w.vertex.size() != y.num_vertices() || w.edge.size() != y.edges().size()) {
    throw ParseError("weighting does not match the graph's vertex and edge counts");
  }
  auto check = verify_weighting(y, w);
  Json violations = Json::array();
  for (const auto& v : check.violations()) {
    violations.push_back({{"vertex", v.vertex},
                          {"label", y.alphabet().name(v.label)},
                          {"direction", v.incoming ? "in" : "out"},
                          {"residual", rational_to_json(v.residual)}});
  }
  const bool ok = check.balanced() && check.nonpositive_vertices.empty() && check.nonpositive_edges.empty();
  Json report = base_report("weight verify", {{"graph", cfg.graph}, {"weights", cfg.weights}});
  report["result"] = {{"balanced", check.balanced()},
                      {"max_abs_residual", rational_to_json(check.max_abs_residual)},
                      {"violations", violations},
                      {"nonpositive_vertices", check.nonpositive_vertices},
                      {"nonpositive_edges", check.nonpositive_edges}};
  report["provenance"] = {{"residuals", "exact"}};
  report["passed"] = ok;
  emit(cfg, report, out);
  return ok ? kExitOk : kExitVerificationFailed;
}

int cmd_cover_expand(const Config& cfg, std::ostream& out) {
  auto y = digraph_from_json(read_json_file(cfg.graph));
  auto w = weighting_from_json(read_json_file(cfg.weights));
  auto x = expand_cover(y, w, cfg.seed, cfg.base_vertex);
  Json report = base_report("cover expand", {{"graph", cfg.graph},
                                             {"weights", cfg.weights},
                                             {"seed", cfg.seed},
                                             {"base_vertex", cfg.base_vertex}});
  report["result"] = {{"cover", cover_to_json(x.cover)},
                      {"projection", projection_to_json(x.projection)},
                      {"is_rose_covering", x.cover.is_rose_covering()},
                      {"subgroup_index", x.cover.num_vertices()},
                      {"unpruned_vertices", x.unpruned_vertices},
                      {"components", x.components}};
  report["provenance"] = {{"matching", sampled(1, cfg.seed)}};
  report["passed"] = x.cover.is_rose_covering();
  if (!cfg.dot.empty()) write_text_atomic(cfg.dot, to_dot(x.cover));
  emit(cfg, report, out);
  return x.cover.is_rose_covering() ? kExitOk : kExitVerificationFailed;
}

int cmd_orb_dp(const Config& cfg, std::ostream& out) {
  if (cfg.presentation.empty() == cfg.orbifold.empty()) {
    throw ParseError("give exactly one of --presentation or --orbifold");
  }
  Json config{{"p", cfg.p}};
  Json result;
  if (!cfg.presentation.empty()) {
    config["presentation"] = cfg.presentation;
    auto pres = parse_presentation(read_text_file(cfg.presentation));
    result = {{"dp", dp_rank(pres, cfg.p)},
              {"generators", pres.num_generators()},
              {"relators", pres.num_relators()}};
  } else {
    config["orbifold"] = cfg.orbifold;
    auto data = orbifold_data_from_json(read_json_file(cfg.orbifold));
    auto pres = meridional_presentation(data);
    const std::size_t components = data.singular_graph.edges.size();
    result = {{"dp", dp_rank(pres, cfg.p)},
              {"dp_lower_bound", dp_lower_bound(data, cfg.p)},
              {"meridional_presentation", presentation_to_json(pres)},
              {"generators", pres.num_generators()},
              {"relators", pres.num_relators()},
              {"deficiency_bound_holds", deficiency_bound_check(pres, components)},
              {"warnings", orbifold_data_warnings(data)}};
  }
  Json report = base_report("orb dp", config);
  report["result"] = result;
  report["provenance"] = {{"dp", "exact"}};
  report["passed"] = true;
  emit(cfg, report, out);
  return kExitOk;
}

int cmd_orb_gs(const Config& cfg, std::ostream& out) {
  auto gs = golod_shafarevich(cfg.dp, cfg.gens, cfg.rels);
  Json report = base_report("orb gs", {{"dp", cfg.dp}, {"gens", cfg.gens}, {"rels", cfg.rels}});
  report["result"] = {{"verdict", to_string(gs.verdict)}, {"margin", rational_to_json(gs.margin)}};
  report["provenance"] = {{"margin", "exact"}};
  report["passed"] = true;
  emit(cfg, report, out);
  return kExitOk;
}

int cmd_orb_singp(const Config& cfg, std::ostream& out) {
  auto g = singular_graph_from_json(read_json_file(cfg.singular));
  if (!is_prime(cfg.p)) throw ParseError(std::to_string(cfg.p) + " is not prime");
  auto sub = sing_p_extract(g, cfg.p);
  Json report = base_report("orb singp", {{"graph", cfg.singular}, {"p", cfg.p}});
  report["result"] = {{"sing_p", singular_graph_to_json(sub)},
                      {"b1", graph_b1(sub)},
                      {"components", graph_components(sub)},
                      {"non_circle_components", non_circle_components(sub)},
                      {"chi_lower_bound", rational_to_json(chi_lower_bound(sub))},
                      {"warnings", singular_graph_warnings(g)}};
  report["provenance"] = {{"b1", "exact"}};
  report["passed"] = true;
  emit(cfg, report, out);
  return kExitOk;
}

Json skeleton_json(const SkeletonGraph& g) {
  Json edges = Json::array();
  for (auto [u, v] : g.edges) edges.push_back({u, v});
  return {{"num_vertices", g.num_vertices}, {"edges", edges}, {"valences", g.valences()}};
}

int cmd_tri_skeleton(const Config& cfg, std::ostream& out) {
  auto t = parse_triangulation(read_text_file(cfg.tri));
  auto g = one_skeleton(t);
  std::vector<std::size_t> degrees;
  for (std::size_t e = 0; e < t.num_edges(); ++e) degrees.push_back(t.edge_degree(e));
  Json report = base_report("tri skeleton", {{"triangulation", cfg.tri}});
  report["result"] = {{"skeleton", skeleton_json(g)},
                      {"tetrahedra", t.size()},
                      {"faces", t.num_faces()},
                      {"edge_degrees", degrees},
                      {"euler_characteristic", t.euler_characteristic()},
                      {"orientable", t.is_orientable()}};
  report["provenance"] = {{"classes", "exact"}};
  report["passed"] = true;
  emit(cfg, report, out);
  return kExitOk;
}

int cmd_tri_cheeger(const Config& cfg, std::ostream& out) {
  auto t = parse_triangulation(read_text_file(cfg.tri));
  auto g = one_skeleton(t);
  const bool run_exact = cfg.exact || !cfg.sweep;
  const bool run_sweep = cfg.sweep || !cfg.exact;
  Json report = base_report("tri cheeger", {{"triangulation", cfg.tri},
                                            {"exact", run_exact},
                                            {"sweep", run_sweep},
                                            {"cap", cfg.cap}});
  Json result{{"convention", "min |dA|/|A| over nonempty A with |A| <= |V|/2"}};
  if (run_exact) {
    auto r = cheeger_exact(g, cfg.cap);
    result["exact"] = {{"value", rational_to_json(r.value)}, {"set", r.set}, {"sets_examined", r.sets_examined}};
  }
  if (run_sweep) {
    auto r = cheeger_sweep(g);
    result["sweep"] = {{"value", rational_to_json(r.value)}, {"set", r.set}, {"sets_examined", r.sets_examined}};
  }
  report["result"] = result;
  report["provenance"] = {{"exact", "exact"}, {"sweep", "upper bound from a floating Fiedler ordering"}};
  report["passed"] = true;
  emit(cfg, report, out);
  return kExitOk;
}

int cmd_tri_surface(const Config& cfg, std::ostream& out) {
  auto t = parse_triangulation(read_text_file(cfg.tri));
  auto a = vertex_set_from_json(read_json_file(cfg.set));
  if (a.empty()) throw ParseError("vertex set must be nonempty");
  Rational k4 = parse_rational(cfg.k4);
  if (k4 < 0) throw ParseError("--k4 must be nonnegative");
  auto parity = face_parity_check(t, a);
  Json report = base_report("tri surface", {{"triangulation", cfg.tri}, {"set", cfg.set}, {"k4", cfg.k4}});
  Json violations = Json::array();
  for (const auto& v : parity.violations) {
    violations.push_back({{"tet", v.tet}, {"face", v.face}, {"cut_edges", v.cut_edges}});
  }
  Json result{{"face_parity", {{"faces_checked", parity.faces_checked}, {"violations", violations}}}};
  bool ok = parity.passed();
  if (ok) {
    auto s = build_surface(t, a);
    auto c = claim_constants(t);
    auto bounds = claim_bounds_eval(s, c, a.size(), k4);
    ok = bounds.passed();
    result["surface"] = {{"zero_cells", s.zero_cells},
                         {"one_cells", s.one_cells},
                         {"two_cells", s.two_cells},
                         {"triangles", s.triangles},
                         {"quads", s.quads},
                         {"components", s.components},
                         {"euler_characteristic", s.euler_characteristic},
                         {"boundary_edges", s.boundary_edges},
                         {"d2_upper_bound", d2_upper_bound_surface(s)}};
    result["claims"] = {{"k0", rational_to_json(c.k0)},
                        {"k1", rational_to_json(c.k1)},
                        {"k2", rational_to_json(c.k2)},
                        {"k3", rational_to_json(bounds.k3)},
                        {"k4", rational_to_json(bounds.k4)},
                        {"k5", rational_to_json(bounds.k5)},
                        {"k1_convention", "max edge degree counted as tetrahedron-edge incidences, halved"},
                        {"set_size", bounds.set_size},
                        {"boundary_size", bounds.boundary_size},
                        {"zero_cells_ok", bounds.zero_cells_ok},
                        {"one_cells_ok", bounds.one_cells_ok},
                        {"two_cells_ok", bounds.two_cells_ok},
                        {"two_thirds_ok", bounds.two_thirds_ok},
                        {"surface_d2_bound", rational_to_json(bounds.surface_d2_bound)},
                        {"interior_d2_lower_bound", rational_to_json(bounds.interior_d2_lower_bound)}};
  }
  report["result"] = result;
  report["provenance"] = {{"counts", "exact"}};
  report["passed"] = ok;
  emit(cfg, report, out);
  return ok ? kExitOk : kExitVerificationFailed;
}

Json check_report_json(const ModelCheckReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"max_violation", c.max_violation}, {"samples", c.samples}});
  }
  return checks;
}

int cmd_model_check(const Config& cfg, std::ostream& out) {
  ModelSpec spec = model_from_json(read_json_file(cfg.model));
  Json report = base_report("model check", {{"model", cfg.model}, {"samples", cfg.samples}, {"seed", cfg.seed}});
  ModelCheckReport r;
  Json extra = Json::object();
  if (auto* f = std::get_if<FiniteModelSpec>(&spec)) {
    r = model_checks(f->model, cfg.samples, cfg.seed);
    extra = {{"order", f->model.order()}, {"lattice_order", f->model.lattice().size()}, {"cosets", f->model.num_cosets()}};
  } else if (auto* t = std::get_if<TorusModelSpec>(&spec)) {
    if (t->exact) {
      r = model_checks(ExactTorusModel(t->dimension), cfg.samples, cfg.seed);
    } else {
      r = model_checks(FloatTorusModel(t->dimension), cfg.samples, cfg.seed);
    }
    extra = {{"dimension", t->dimension}};
  } else {
    auto& m = std::get<MatrixModelSpec>(spec);
    r = model_checks(m.model, cfg.samples, cfg.seed);
    extra = {{"distortion_bound", m.model.distortion_bound(m.phi)}};
  }
  report["result"] = {{"checks", check_report_json(r)}, {"model", extra}};
  report["provenance"] = {{"checks", sampled(cfg.samples, cfg.seed)}};
  report["passed"] = r.passed();
  emit(cfg, report, out);
  return r.passed() ? kExitOk : kExitVerificationFailed;
}

int cmd_lambda0(const Config& cfg, std::ostream& out) {
  double value = sullivan_lambda0(cfg.dimension);
  Json report = base_report("util lambda0", {{"dimension", cfg.dimension}});
  report["result"] = {{"lambda0", value}};
  report["provenance"] = {{"lambda0", "floating"}};
  report["passed"] = true;
  emit(cfg, report, out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  try {
    cfg.seed = default_seed();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  CLI::App app{"Coverings, perturbations and orbifold homology toolkit", "covkit"};
  app.set_version_flag("--version", std::string(COVKIT_VERSION));
  app.require_subcommand(1);
  int (*handler)(const Config&, std::ostream&) = nullptr;

  auto add_out = [&](CLI::App* c) { c->add_option("--out", cfg.out, "Write the JSON report here"); };
  auto add_seed = [&](CLI::App* c) {
    c->add_option("--seed", cfg.seed, "Random seed (default: $COVKIT_SEED or 0)");
  };
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help,
                  int (*fn)(const Config&, std::ostream&)) {
    auto* c = parent->add_subcommand(name, help);
    c->callback([&handler, fn] { handler = fn; });
    add_out(c);
    return c;
  };

  auto* perturb = app.add_subcommand("perturb", "Epsilon-perturbation pipeline");
  perturb->require_subcommand(1);
  auto* prun = leaf(perturb, "run", "Run the pipeline on a model file", cmd_perturb);
  prun->add_option("--model", cfg.model, "Model JSON")->required();
  prun->add_option("--epsilon", cfg.epsilon, "Epsilon (exact decimal or p/q)")->required();
  prun->add_option("--verify-len", cfg.verify_len, "Word-length bound for verification");
  prun->add_option("--haar", cfg.haar, "Haar weighting: exact or mc")->check(CLI::IsMember({"exact", "mc"}));
  prun->add_option("--haar-samples", cfg.haar_samples, "Monte-Carlo samples per (cell, label)");
  prun->add_option("--edge-samples", cfg.edge_samples, "Transition samples per (cell, label)");
  prun->add_option("--dot", cfg.dot, "Write X as Graphviz");
  add_seed(prun);

  auto* weight = app.add_subcommand("weight", "Weightings of labelled digraphs");
  weight->require_subcommand(1);
  auto* wsolve = leaf(weight, "solve", "Minimal strictly positive integer weighting", cmd_weight_solve);
  wsolve->add_option("--graph", cfg.graph, "Graph JSON")->required();
  auto* wverify = leaf(weight, "verify", "Check balance equations", cmd_weight_verify);
  wverify->add_option("--graph", cfg.graph, "Graph JSON")->required();
  wverify->add_option("--weights", cfg.weights, "Weights JSON")->required();

  auto* cover = app.add_subcommand("cover", "Rose coverings");
  cover->require_subcommand(1);
  auto* cexpand = leaf(cover, "expand", "Expand an integer weighting to a covering", cmd_cover_expand);
  cexpand->add_option("--graph", cfg.graph, "Graph JSON")->required();
  cexpand->add_option("--weights", cfg.weights, "Integer weights JSON")->required();
  cexpand->add_option("--base-vertex", cfg.base_vertex, "Graph vertex under the basepoint");
  cexpand->add_option("--dot", cfg.dot, "Write the covering as Graphviz");
  add_seed(cexpand);

  auto* orb = app.add_subcommand("orb", "Orbifold homology");
  orb->require_subcommand(1);
  auto* odp = leaf(orb, "dp", "Mod-p homology rank", cmd_orb_dp);
  odp->add_option("-p", cfg.p, "Prime")->required();
  odp->add_option("--presentation", cfg.presentation, "Presentation text file");
  odp->add_option("--orbifold", cfg.orbifold, "Orbifold data JSON");
  auto* ogs = leaf(orb, "gs", "Golod-Shafarevich test", cmd_orb_gs);
  ogs->add_option("--dp", cfg.dp, "d_p")->required();
  ogs->add_option("--gens", cfg.gens, "Number of generators")->required();
  ogs->add_option("--rels", cfg.rels, "Number of relators")->required();
  auto* osing = leaf(orb, "singp", "Extract the order-divisible-by-p locus", cmd_orb_singp);
  osing->add_option("-p", cfg.p, "Prime")->required();
  osing->add_option("--graph", cfg.singular, "Singular graph JSON")->required();

  auto* tri = app.add_subcommand("tri", "Triangulations");
  tri->require_subcommand(1);
  auto* tskel = leaf(tri, "skeleton", "1-skeleton and identification classes", cmd_tri_skeleton);
  tskel->add_option("--tri", cfg.tri, "Triangulation file")->required();
  auto* tche = leaf(tri, "cheeger", "Cheeger constant of the 1-skeleton", cmd_tri_cheeger);
  tche->add_option("--tri", cfg.tri, "Triangulation file")->required();
  tche->add_flag("--exact", cfg.exact, "Brute force only");
  tche->add_flag("--sweep", cfg.sweep, "Spectral sweep only");
  tche->add_option("--cap", cfg.cap, "Vertex limit for brute force");
  auto* tsurf = leaf(tri, "surface", "Normal surface around a vertex set", cmd_tri_surface);
  tsurf->add_option("--tri", cfg.tri, "Triangulation file")->required();
  tsurf->add_option("--set", cfg.set, "Vertex set JSON")->required();
  tsurf->add_option("--k4", cfg.k4, "Singular-locus intersections per disc");

  auto* model = app.add_subcommand("model", "Group models");
  model->require_subcommand(1);
  auto* mcheck = leaf(model, "check", "Spot-check the model contract", cmd_model_check);
  mcheck->add_option("--model", cfg.model, "Model JSON")->required();
  mcheck->add_option("--samples", cfg.samples, "Samples per check");
  add_seed(mcheck);

  auto* util = app.add_subcommand("util", "Utilities");
  util->require_subcommand(1);
  auto* ulam = leaf(util, "lambda0", "Bottom of the spectrum from limit-set dimension", cmd_lambda0);
  ulam->add_option("--dimension", cfg.dimension, "Hausdorff dimension in [1, 2]")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (!handler) {
    err << app.help();
    return kExitUsage;
  }
  try {
    return handler(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace covkit::cli
