#pragma once

#include "covkit/finite_model.hpp"
#include "covkit/matrix_model.hpp"
#include "covkit/normal_surface.hpp"
#include "covkit/orbifold.hpp"
#include "covkit/rational.hpp"
#include "covkit/rose_cover.hpp"
#include "covkit/torus_model.hpp"
#include "covkit/weighting.hpp"

#include <json.hpp>

#include <string>
#include <variant>
#include <vector>

namespace covkit {

using Json = nlohmann::json;

/// Reads a whole file; throws ParseError naming the path on failure.
std::string read_text_file(const std::string& path);
Json read_json_file(const std::string& path);

/// Integers, "p/q" or decimal strings, or [num, den] pairs.
Rational rational_from_json(const Json& j);
/// Integers stay integers; anything else becomes a "p/q" string.
Json rational_to_json(const Rational& r);

struct FiniteModelSpec {
  FiniteModel model;
  Alphabet alphabet;
  std::vector<FiniteModel::Element> phi;
};

struct TorusModelSpec {
  std::size_t dimension = 1;
  bool exact = true;
  Alphabet alphabet;
  std::vector<std::vector<Rational>> translations;

  ExactTorusModel::Element exact_image(std::size_t s) const { return translations[s]; }
  FloatTorusModel::Element float_image(std::size_t s) const;
};

struct MatrixModelSpec {
  MatrixModel model;
  Alphabet alphabet;
  std::vector<Mat2> phi;
};

using ModelSpec = std::variant<FiniteModelSpec, TorusModelSpec, MatrixModelSpec>;

/// {"type": "finite" | "torus" | "matrix", "generators": [{"name", "image"}], ...}
ModelSpec model_from_json(const Json& j);

LabeledDigraph digraph_from_json(const Json& j);
Json digraph_to_json(const LabeledDigraph& y);

Weighting weighting_from_json(const Json& j);
Json weighting_to_json(const Weighting& w);
Json weight_estimate_to_json(const WeightEstimate& w);

RoseCover cover_from_json(const Json& j);
Json cover_to_json(const RoseCover& x);
Json projection_to_json(const CoverProjection& h);

SingularGraph singular_graph_from_json(const Json& j);
Json singular_graph_to_json(const SingularGraph& g);

/// {"generators": [...], "relators": ["a b a^-1 b^-1", ...]}
Presentation presentation_from_json(const Json& j);
Json presentation_to_json(const Presentation& p);

/// {"presentation": ..., "meridians": [{"word", "order"}], "singular_graph": ...}
OrbifoldData orbifold_data_from_json(const Json& j);

/// A plain array of vertex ids or {"vertices": [...]}; sorted and deduplicated.
VertexSet vertex_set_from_json(const Json& j);

/// Serialises with two-space indentation and a trailing newline, then
/// writes to a temporary file beside `path` and renames it into place.
void write_json_atomic(const std::string& path, const Json& j);
void write_text_atomic(const std::string& path, const std::string& text);

}  // namespace covkit
