#pragma once

#include "covkit/rational.hpp"
#include "covkit/words.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace covkit {

/// A finite presentation <X | R>. Relators are reduced words over X.
struct Presentation {
  Alphabet generators;
  std::vector<Word> relators;

  std::size_t num_generators() const { return generators.size(); }
  std::size_t num_relators() const { return relators.size(); }
};

/// Text form: the first non-comment line lists generator names, every
/// further line is one relator ("a b a^-1 b^-1", "a^3"). '#' starts a
/// comment. A presentation with no generators is not representable.
Presentation parse_presentation(std::string_view text);
std::string format_presentation(const Presentation& p);

enum class LocalGroupKind { cyclic, dihedral, z2xz2, a4, s4, a5, boundary };

/// Local group at a vertex of the singular graph. `order` is n for cyclic(n)
/// and for dihedral of order 2n; unused otherwise. `boundary` tags the free
/// end of an arc meeting the boundary of the orbifold.
struct LocalGroup {
  LocalGroupKind kind = LocalGroupKind::cyclic;
  std::size_t order = 0;
};

std::string to_string(const LocalGroup& g);
/// "cyclic", "dihedral", "z2xz2", "a4", "s4", "a5", "boundary".
LocalGroupKind parse_local_group_kind(std::string_view name);

struct SingularEdge {
  std::size_t u = 0;
  std::size_t v = 0;
  /// A component that is a circle with no vertices; u and v are ignored.
  bool closed = false;
  std::size_t order = 2;
};

struct SingularGraph {
  std::vector<LocalGroup> vertices;
  std::vector<SingularEdge> edges;

  /// Number of edge ends at v (a loop counts twice).
  std::size_t valence(std::size_t v) const;
  std::size_t num_closed_curves() const;
};

/// Structural problems (endpoints out of range, order < 2) throw. Deviations
/// from the local-group edge-order patterns only produce warnings.
void check_singular_graph(const SingularGraph& g);
std::vector<std::string> singular_graph_warnings(const SingularGraph& g);

struct Meridian {
  Word word;
  std::size_t order = 2;
};

struct OrbifoldData {
  Presentation complement_presentation;
  std::vector<Meridian> meridians;
  SingularGraph singular_graph;
};

/// Meridian count against codimension-2 components and order agreement.
std::vector<std::string> orbifold_data_warnings(const OrbifoldData& data);

/// Complement relators followed by mu_i^{n_i}, one per meridian.
Presentation meridional_presentation(const OrbifoldData& data);

/// |R| - |X| <= num_sing_components.
bool deficiency_bound_check(const Presentation& pres, std::size_t num_sing_components);

bool is_prime(std::uint64_t p);

/// Dimension of H_1(<X|R>; Z/p): |X| minus the GF(p) rank of the
/// exponent-sum matrix. Throws Error when p is not prime.
std::size_t dp_rank(const Presentation& pres, std::uint64_t p);

/// GF(p) rank of an integer matrix.
std::size_t rank_mod_p(const std::vector<std::vector<long>>& rows, std::uint64_t p);

/// Edges whose order is a multiple of p together with their endpoints,
/// renumbered in original order.
SingularGraph sing_p_extract(const SingularGraph& g, std::uint64_t p);

/// Connected components of the graph, circles counted individually.
std::size_t graph_components(const SingularGraph& g);
std::size_t graph_b1(const SingularGraph& g);
/// sum over vertices of (val(v)/2 - 1); this is -chi of the part of the
/// graph that is not closed curves.
Rational chi_lower_bound(const SingularGraph& g);
/// Components that are not closed curves (isolated vertices included).
std::size_t non_circle_components(const SingularGraph& g);

/// b_1 of the closure of sing_p.
std::size_t dp_lower_bound(const OrbifoldData& data, std::uint64_t p);

enum class GsVerdict { infinite, inconclusive };

struct GsResult {
  GsVerdict verdict = GsVerdict::inconclusive;
  Rational margin;  // d^2/4 - d + |X| - |R|
};

/// Throws Error on negative input.
GsResult golod_shafarevich(std::int64_t dp, std::int64_t num_gens, std::int64_t num_rels);
std::string to_string(GsVerdict v);

}  // namespace covkit
