#pragma once

#include "covkit/rational.hpp"
#include "covkit/triangulation.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace covkit {

/// A set A of skeleton vertices, as a sorted list of vertex-class ids.
using VertexSet = std::vector<std::size_t>;

/// Edges (ids into g.edges) with exactly one endpoint in A. Loops never qualify.
std::vector<std::size_t> boundary_set(const SkeletonGraph& g, const VertexSet& a);

struct FaceParityViolation {
  std::size_t tet = 0;
  int face = 0;
  std::size_t cut_edges = 0;
};

struct FaceParityReport {
  std::size_t faces_checked = 0;
  std::vector<FaceParityViolation> violations;
  bool passed() const { return violations.empty(); }
};

/// Every tetrahedron face has 0 or 2 of its three edges in the boundary of A.
FaceParityReport face_parity_check(const Triangulation& t, const VertexSet& a);

enum class NormalCurveKind { triangle, quad };

/// A normal curve in the boundary of a tetrahedron: the triangle linking
/// a vertex, or the quad separating a pair of vertices from the other pair.
struct NormalCurveType {
  NormalCurveKind kind = NormalCurveKind::triangle;
  /// Triangle: `vertex` is the linked vertex. Quad: the curve separates
  /// {0, partner} from the other two vertices.
  int vertex = 0;
  int partner = 0;
  /// Tetrahedron edges (indices into kTetEdges) whose midpoints it meets.
  std::vector<int> edges;
};

/// The four vertex-linking triangles, then the three quads.
std::vector<NormalCurveType> enumerate_normal_curve_types();

/// A disc of the surface in one tetrahedron.
struct NormalCell {
  std::size_t tet = 0;
  NormalCurveKind kind = NormalCurveKind::triangle;
  /// Triangle: the corner it cuts off. Quad: the partner of corner 0.
  int type_vertex = 0;
};

struct NormalSurfaceComplex {
  std::vector<NormalCell> cells;
  /// Normal arcs per tetrahedron face: 1 for faces meeting the boundary of A.
  std::vector<std::array<int, 4>> arcs_per_face;
  std::vector<std::size_t> boundary_edges;
  std::size_t zero_cells = 0;
  std::size_t one_cells = 0;
  std::size_t two_cells = 0;
  std::size_t triangles = 0;
  std::size_t quads = 0;
  std::size_t components = 0;
  long euler_characteristic = 0;
};

/// Builds the surface made of one normal disc per tetrahedron meeting the
/// boundary of A. Throws Error on a parity violation or on a tetrahedron
/// with other than 0, 3 or 4 boundary edges.
NormalSurfaceComplex build_surface(const Triangulation& t, const VertexSet& a);

/// Certified upper bound on d_2 of the underlying surface: its 1-cell count.
std::size_t d2_upper_bound_surface(const NormalSurfaceComplex& s);

struct ClaimConstants {
  Rational k0;
  Rational k1;
  Rational k2;
  /// Largest number of tetrahedron-edge incidences of an edge class. Each
  /// incidence contributes two face slots and each face slot is shared by
  /// two tetrahedra, so this is also the number of face slots at the edge.
  std::size_t max_edge_degree = 0;
};

/// k0 = 1, k1 = max_edge_degree / 2, k2 = 2 k1 / 3.
ClaimConstants claim_constants(const Triangulation& t);

struct ClaimBoundsReport {
  ClaimConstants constants;
  Rational k3;
  Rational k4;
  Rational k5;
  std::size_t set_size = 0;
  std::size_t boundary_size = 0;
  bool zero_cells_ok = false;
  bool one_cells_ok = false;
  bool two_cells_ok = false;
  /// two_cells <= (2/3) one_cells.
  bool two_thirds_ok = false;
  /// k3 |dA| bounds the 1-cells plus k4 times the 2-cells.
  Rational surface_d2_bound;
  /// |A|/2 - k5 |dA|.
  Rational interior_d2_lower_bound;
  bool passed() const { return zero_cells_ok && one_cells_ok && two_cells_ok && two_thirds_ok; }
};

/// k3 = k1 + k4 k2, k5 = k4 k2 / 2.
ClaimBoundsReport claim_bounds_eval(const NormalSurfaceComplex& s, const ClaimConstants& c,
                                    std::size_t set_size, const Rational& k4);

}  // namespace covkit
