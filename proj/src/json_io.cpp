#include "covkit/json_io.hpp"

#include "covkit/error.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace covkit {

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::size_t as_index(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw ParseError(std::string(what) + " must be a nonnegative integer");
  }
  return j.get<std::size_t>();
}

Alphabet alphabet_from_generators(const Json& gens) {
  if (!gens.is_array() || gens.empty()) throw ParseError("'generators' must be a nonempty array");
  std::vector<std::string> names;
  for (const auto& g : gens) {
    if (g.is_string()) {
      names.push_back(g.get<std::string>());
    } else {
      names.push_back(require(g, "name").get<std::string>());
    }
  }
  return Alphabet(std::move(names));
}

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return Complex(j[0].get<double>(), j[1].get<double>());
  }
  throw ParseError("complex entries are numbers or [re, im] pairs");
}

Mat2 mat2_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 4) throw ParseError("a matrix is [a, b, c, d]");
  Mat2 m;
  for (std::size_t i = 0; i < 4; ++i) m.m[i] = complex_from_json(j[i]);
  return m;
}

/// A finite-group element given as an index, or as a permutation when the
/// group was built from permutations.
std::size_t finite_element(const Json& j, const std::vector<std::vector<std::size_t>>& perms,
                           std::size_t order) {
  if (j.is_array()) {
    if (perms.empty()) throw ParseError("permutation given for a group not built from permutations");
    auto p = j.get<std::vector<std::size_t>>();
    auto it = std::find(perms.begin(), perms.end(), p);
    if (it == perms.end()) throw ParseError("permutation is not in the generated group");
    return static_cast<std::size_t>(it - perms.begin());
  }
  std::size_t e = as_index(j, "group element");
  if (e >= order) throw ParseError("group element " + std::to_string(e) + " out of range");
  return e;
}

FiniteModelSpec finite_from_json(const Json& j) {
  const auto& group = require(j, "group");
  std::vector<std::vector<std::size_t>> table;
  std::vector<std::vector<std::size_t>> perms;
  if (group.contains("cyclic")) {
    std::size_t n = as_index(group.at("cyclic"), "cyclic order");
    if (n == 0) throw ParseError("cyclic order must be positive");
    table = FiniteModel::cyclic(n, {0}).table();
  } else if (group.contains("table")) {
    table = group.at("table").get<std::vector<std::vector<std::size_t>>>();
  } else if (group.contains("permutations")) {
    perms = FiniteModel::close_permutations(
        group.at("permutations").get<std::vector<std::vector<std::size_t>>>());
    table = FiniteModel::permutation_table(perms);
  } else {
    throw ParseError("group needs 'cyclic', 'table' or 'permutations'");
  }
  std::vector<std::size_t> lattice;
  if (j.contains("lattice")) {
    for (const auto& e : j.at("lattice")) lattice.push_back(finite_element(e, perms, table.size()));
  } else {
    std::vector<std::size_t> gens;
    for (const auto& e : require(j, "lattice_generators")) gens.push_back(finite_element(e, perms, table.size()));
    lattice = FiniteModel::generated_subgroup(table, gens);
  }
  const auto& gens = require(j, "generators");
  Alphabet alphabet = alphabet_from_generators(gens);
  std::vector<std::size_t> phi;
  for (const auto& g : gens) phi.push_back(finite_element(require(g, "image"), perms, table.size()));
  FiniteModel model = [&] {
    try {
      return FiniteModel(std::move(table), std::move(lattice));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what());
    }
  }();
  return {std::move(model), std::move(alphabet), std::move(phi)};
}

TorusModelSpec torus_from_json(const Json& j) {
  TorusModelSpec spec{as_index(require(j, "dimension"), "dimension"), true, Alphabet::standard(1), {}};
  if (spec.dimension == 0) throw ParseError("torus dimension must be positive");
  if (j.contains("arithmetic")) {
    auto mode = j.at("arithmetic").get<std::string>();
    if (mode != "exact" && mode != "floating") throw ParseError("arithmetic is 'exact' or 'floating'");
    spec.exact = mode == "exact";
  }
  const auto& gens = require(j, "generators");
  spec.alphabet = alphabet_from_generators(gens);
  for (const auto& g : gens) {
    const auto& t = require(g, "translation");
    if (!t.is_array() || t.size() != spec.dimension) {
      throw ParseError("translation must have " + std::to_string(spec.dimension) + " coordinates");
    }
    std::vector<Rational> v;
    for (const auto& x : t) v.push_back(rational_from_json(x));
    spec.translations.push_back(std::move(v));
  }
  return spec;
}

MatrixModelSpec matrix_from_json(const Json& j) {
  std::optional<Mat2> fault;
  if (j.contains("metric_fault")) fault = mat2_from_json(j.at("metric_fault"));
  const auto& gens = require(j, "generators");
  MatrixModelSpec spec{MatrixModel(fault), alphabet_from_generators(gens), {}};
  for (const auto& g : gens) spec.phi.push_back(mat2_from_json(require(g, "matrix")));
  try {
    spec.model.validate(spec.phi);
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  return spec;
}

std::vector<std::string> names_of(const Alphabet& a) { return a.names(); }

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json read_json_file(const std::string& path) {
  std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number_float()) return rational_from_double(j.get<double>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer()) {
    long long den = j[1].get<long long>();
    if (den == 0) throw ParseError("zero denominator");
    return Rational(j[0].get<long long>(), den);
  }
  throw ParseError("expected a rational number");
}

Json rational_to_json(const Rational& r) {
  if (is_integer(r) && abs(r) < Rational(1LL << 53)) return Json(r.convert_to<long long>());
  return Json(to_string(r));
}

FloatTorusModel::Element TorusModelSpec::float_image(std::size_t s) const {
  FloatTorusModel::Element v;
  for (const auto& x : translations[s]) v.push_back(to_double(x));
  return v;
}

ModelSpec model_from_json(const Json& j) {
  try {
    auto type = require(j, "type").get<std::string>();
    if (type == "finite") return finite_from_json(j);
    if (type == "torus") return torus_from_json(j);
    if (type == "matrix") return matrix_from_json(j);
    throw ParseError("unknown model type '" + type + "'");
  } catch (const Json::exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
}

LabeledDigraph digraph_from_json(const Json& j) {
  try {
    Alphabet alphabet = alphabet_from_generators(require(j, "generators"));
    LabeledDigraph y(alphabet, as_index(require(j, "num_vertices"), "num_vertices"));
    for (const auto& e : require(j, "edges")) {
      std::size_t src = as_index(require(e, "src"), "src");
      std::size_t dst = as_index(require(e, "dst"), "dst");
      std::size_t label = alphabet.index_of(require(e, "label").get<std::string>());
      try {
        y.add_edge(src, dst, label);
      } catch (const ParseError&) {
        throw;
      } catch (const Error& err) {
        throw ParseError(err.what());
      }
    }
    return y;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("graph: ") + e.what());
  }
}

Json digraph_to_json(const LabeledDigraph& y) {
  Json edges = Json::array();
  for (const auto& e : y.edges()) {
    edges.push_back({{"src", e.src}, {"dst", e.dst}, {"label", y.alphabet().name(e.label)}});
  }
  return {{"generators", names_of(y.alphabet())}, {"num_vertices", y.num_vertices()}, {"edges", edges}};
}

Weighting weighting_from_json(const Json& j) {
  Weighting w;
  for (const auto& x : require(j, "vertex")) w.vertex.push_back(rational_from_json(x));
  for (const auto& x : require(j, "edge")) w.edge.push_back(rational_from_json(x));
  return w;
}

Json weighting_to_json(const Weighting& w) {
  Json v = Json::array(), e = Json::array();
  for (const auto& x : w.vertex) v.push_back(rational_to_json(x));
  for (const auto& x : w.edge) e.push_back(rational_to_json(x));
  return {{"vertex", v}, {"edge", e}};
}

Json weight_estimate_to_json(const WeightEstimate& w) {
  return {{"vertex", w.value.vertex},
          {"edge", w.value.edge},
          {"edge_std_error", w.std_error.edge},
          {"samples_per_cell", w.samples_per_cell},
          {"seed", w.seed}};
}

RoseCover cover_from_json(const Json& j) {
  try {
    Alphabet alphabet = alphabet_from_generators(require(j, "generators"));
    std::size_t n = as_index(require(j, "num_vertices"), "num_vertices");
    std::size_t base = j.contains("basepoint") ? as_index(j.at("basepoint"), "basepoint") : 0;
    if (base >= n) throw ParseError("basepoint out of range");
    const auto& out = require(j, "out");
    std::vector<std::vector<Vertex>> maps;
    for (std::size_t s = 0; s < alphabet.size(); ++s) {
      const auto& m = require(out, alphabet.name(s).c_str());
      std::vector<Vertex> row;
      for (const auto& v : m) {
        if (v.is_null()) {
          row.push_back(kNoVertex);
        } else {
          row.push_back(as_index(v, "vertex"));
        }
      }
      if (row.size() != n) throw ParseError("out map for '" + alphabet.name(s) + "' has wrong length");
      maps.push_back(std::move(row));
    }
    return RoseCover(std::move(alphabet), n, base, std::move(maps));
  } catch (const Json::exception& e) {
    throw ParseError(std::string("cover: ") + e.what());
  }
}

Json cover_to_json(const RoseCover& x) {
  Json out = Json::object();
  for (std::size_t s = 0; s < x.alphabet().size(); ++s) {
    Json row = Json::array();
    for (Vertex v : x.out_maps()[s]) {
      if (v == kNoVertex) {
        row.push_back(nullptr);
      } else {
        row.push_back(v);
      }
    }
    out[x.alphabet().name(s)] = row;
  }
  return {{"generators", names_of(x.alphabet())},
          {"num_vertices", x.num_vertices()},
          {"basepoint", x.basepoint()},
          {"out", out}};
}

Json projection_to_json(const CoverProjection& h) {
  return {{"vertex_map", h.vertex_map}, {"edge_map", h.edge_map}};
}

SingularGraph singular_graph_from_json(const Json& j) {
  try {
    SingularGraph g;
    for (const auto& v : require(j, "vertices")) {
      LocalGroup lg;
      lg.kind = parse_local_group_kind(require(v, "group").get<std::string>());
      if (v.contains("order")) lg.order = as_index(v.at("order"), "order");
      g.vertices.push_back(lg);
    }
    for (const auto& e : require(j, "edges")) {
      SingularEdge edge;
      edge.closed = e.value("closed", false);
      edge.order = as_index(require(e, "order"), "order");
      if (!edge.closed) {
        edge.u = as_index(require(e, "u"), "u");
        edge.v = as_index(require(e, "v"), "v");
      }
      g.edges.push_back(edge);
    }
    try {
      check_singular_graph(g);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& err) {
      throw ParseError(err.what());
    }
    return g;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("singular graph: ") + e.what());
  }
}

Json singular_graph_to_json(const SingularGraph& g) {
  static const char* names[] = {"cyclic", "dihedral", "z2xz2", "a4", "s4", "a5", "boundary"};
  Json vertices = Json::array();
  for (const auto& v : g.vertices) {
    Json item{{"group", names[static_cast<int>(v.kind)]}};
    if (v.kind == LocalGroupKind::cyclic || v.kind == LocalGroupKind::dihedral) item["order"] = v.order;
    vertices.push_back(item);
  }
  Json edges = Json::array();
  for (const auto& e : g.edges) {
    if (e.closed) {
      edges.push_back({{"closed", true}, {"order", e.order}});
    } else {
      edges.push_back({{"u", e.u}, {"v", e.v}, {"order", e.order}});
    }
  }
  return {{"vertices", vertices}, {"edges", edges}};
}

Presentation presentation_from_json(const Json& j) {
  try {
    Alphabet alphabet = alphabet_from_generators(require(j, "generators"));
    std::vector<Word> relators;
    for (const auto& r : require(j, "relators")) relators.push_back(parse_word(alphabet, r.get<std::string>()));
    return {std::move(alphabet), std::move(relators)};
  } catch (const Json::exception& e) {
    throw ParseError(std::string("presentation: ") + e.what());
  }
}

Json presentation_to_json(const Presentation& p) {
  Json relators = Json::array();
  for (const auto& r : p.relators) relators.push_back(format_word(p.generators, r));
  return {{"generators", names_of(p.generators)}, {"relators", relators}};
}

OrbifoldData orbifold_data_from_json(const Json& j) {
  try {
    OrbifoldData data{presentation_from_json(require(j, "presentation")), {}, {}};
    if (j.contains("meridians")) {
      for (const auto& m : j.at("meridians")) {
        data.meridians.push_back({parse_word(data.complement_presentation.generators,
                                             require(m, "word").get<std::string>()),
                                  as_index(require(m, "order"), "order")});
      }
    }
    if (j.contains("singular_graph")) data.singular_graph = singular_graph_from_json(j.at("singular_graph"));
    return data;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("orbifold data: ") + e.what());
  }
}

VertexSet vertex_set_from_json(const Json& j) {
  const Json& list = j.is_object() ? require(j, "vertices") : j;
  if (!list.is_array()) throw ParseError("vertex set must be an array");
  std::set<std::size_t> ids;
  for (const auto& v : list) ids.insert(as_index(v, "vertex"));
  return VertexSet(ids.begin(), ids.end());
}

void write_text_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot write '" + tmp.string() + "'");
    out << text;
    out.flush();
    if (!out) throw ParseError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ParseError("cannot move report into '" + path + "'");
  }
}

void write_json_atomic(const std::string& path, const Json& j) { write_text_atomic(path, j.dump(2) + "\n"); }

}  // namespace covkit
