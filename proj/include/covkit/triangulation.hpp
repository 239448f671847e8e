#pragma once

#include "covkit/rng.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace covkit {

/// A permutation of {0,1,2,3}; perm[i] is the image of i.
using Perm4 = std::array<std::uint8_t, 4>;

Perm4 perm4_identity();
Perm4 perm4_inverse(const Perm4& p);
/// (a * b)(i) = a[b[i]].
Perm4 perm4_compose(const Perm4& a, const Perm4& b);
int perm4_sign(const Perm4& p);
std::string to_string(const Perm4& p);

/// Face f of a tetrahedron (the face opposite vertex f) is glued to face
/// perm[f] of tetrahedron `tet`, with vertex i of this tetrahedron going to
/// vertex perm[i] of the other.
struct Gluing {
  std::size_t tet = 0;
  Perm4 perm{};
};

/// The six edges of a tetrahedron, in order (0,1) (0,2) (0,3) (1,2) (1,3) (2,3).
inline constexpr std::array<std::pair<int, int>, 6> kTetEdges{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
/// Index into kTetEdges of the edge {a, b}.
int tet_edge_index(int a, int b);

/// A 3-dimensional triangulation given by face gluings. Construction checks
/// that gluings are involutive; it does not require every face to be glued.
/// Identification classes are computed once, at construction.
class Triangulation {
 public:
  explicit Triangulation(std::vector<std::array<std::optional<Gluing>, 4>> gluings);

  std::size_t size() const { return gluings_.size(); }
  const std::optional<Gluing>& gluing(std::size_t tet, int face) const { return gluings_[tet][face]; }
  const std::vector<std::array<std::optional<Gluing>, 4>>& gluings() const { return gluings_; }

  bool is_closed() const;
  bool is_orientable() const { return orientable_; }
  /// Some edge is identified with itself in reverse.
  bool has_reversed_edge() const { return reversed_edge_; }

  std::size_t num_vertices() const { return num_vertices_; }
  std::size_t num_edges() const { return edge_degree_.size(); }
  std::size_t num_faces() const { return num_faces_; }

  std::size_t vertex_class(std::size_t tet, int v) const { return vertex_class_[tet][v]; }
  std::size_t edge_class(std::size_t tet, int edge) const { return edge_class_[tet][edge]; }
  std::size_t face_class(std::size_t tet, int face) const { return face_class_[tet][face]; }
  /// Number of tetrahedron-edge incidences in an edge class.
  std::size_t edge_degree(std::size_t edge) const { return edge_degree_[edge]; }
  std::size_t max_edge_degree() const;
  /// Endpoints (vertex classes) of an edge class.
  std::pair<std::size_t, std::size_t> edge_endpoints(std::size_t edge) const { return edge_ends_[edge]; }

  /// V - E + F - T.
  long euler_characteristic() const;

 private:
  std::vector<std::array<std::optional<Gluing>, 4>> gluings_;
  std::vector<std::array<std::size_t, 4>> vertex_class_;
  std::vector<std::array<std::size_t, 6>> edge_class_;
  std::vector<std::array<std::size_t, 4>> face_class_;
  std::vector<std::size_t> edge_degree_;
  std::vector<std::pair<std::size_t, std::size_t>> edge_ends_;
  std::size_t num_vertices_ = 0;
  std::size_t num_faces_ = 0;
  bool orientable_ = true;
  bool reversed_edge_ = false;
};

/// One line per tetrahedron with four entries, one per face: "t:pppp"
/// (target tetrahedron and vertex images) or "-" for an unglued face.
/// '#' starts a comment.
Triangulation parse_triangulation(std::string_view text);
std::string format_triangulation(const Triangulation& t);

/// Multigraph with loops: vertices are vertex classes, one edge per edge class.
struct SkeletonGraph {
  std::size_t num_vertices = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  /// Edge ends at each vertex (a loop counts twice).
  std::vector<std::size_t> valences() const;
};

/// Throws Error if the triangulation is not closed.
SkeletonGraph one_skeleton(const Triangulation& t);

/// Closed, orientable one-tetrahedron triangulations whose vertex links are
/// spheres (Euler characteristic 0) and with no edge folded onto itself.
std::vector<Triangulation> one_tetrahedron_manifolds();

/// Replaces tetrahedron `tet` by four tetrahedra coned from a new interior
/// vertex.
Triangulation one_four_move(const Triangulation& t, std::size_t tet);

/// Randomly permutes tetrahedra and the vertex labels inside each one.
Triangulation relabel(const Triangulation& t, Rng& rng);

/// A closed orientable triangulation with at most max_tets tetrahedra,
/// grown from a small seed by random 1-4 moves and relabelled.
Triangulation random_closed_triangulation(Rng& rng, std::size_t max_tets);

}  // namespace covkit
