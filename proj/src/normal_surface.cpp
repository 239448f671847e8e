#include "covkit/normal_surface.hpp"

#include "covkit/error.hpp"

#include <algorithm>
#include <numeric>

namespace covkit {

namespace {

std::vector<bool> membership(std::size_t n, const VertexSet& a) {
  std::vector<bool> in(n, false);
  for (auto v : a) {
    if (v >= n) throw Error("vertex " + std::to_string(v) + " is not in the skeleton");
    in[v] = true;
  }
  return in;
}

/// Which tetrahedron edges lie in the boundary of A.
std::vector<std::array<bool, 6>> cut_edges(const Triangulation& t, const std::vector<bool>& in) {
  std::vector<std::array<bool, 6>> cut(t.size());
  for (std::size_t tet = 0; tet < t.size(); ++tet) {
    for (int e = 0; e < 6; ++e) {
      auto [u, v] = t.edge_endpoints(t.edge_class(tet, e));
      cut[tet][e] = in[u] != in[v];
    }
  }
  return cut;
}

std::size_t face_cut_count(const std::array<bool, 6>& cut, int face) {
  std::size_t n = 0;
  for (int e = 0; e < 6; ++e) {
    if (kTetEdges[e].first != face && kTetEdges[e].second != face) n += cut[e];
  }
  return n;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

}  // namespace

std::vector<std::size_t> boundary_set(const SkeletonGraph& g, const VertexSet& a) {
  auto in = membership(g.num_vertices, a);
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (in[g.edges[e].first] != in[g.edges[e].second]) out.push_back(e);
  }
  return out;
}

FaceParityReport face_parity_check(const Triangulation& t, const VertexSet& a) {
  auto cut = cut_edges(t, membership(t.num_vertices(), a));
  FaceParityReport report;
  for (std::size_t tet = 0; tet < t.size(); ++tet) {
    for (int f = 0; f < 4; ++f) {
      ++report.faces_checked;
      std::size_t n = face_cut_count(cut[tet], f);
      if (n != 0 && n != 2) report.violations.push_back({tet, f, n});
    }
  }
  return report;
}

std::vector<NormalCurveType> enumerate_normal_curve_types() {
  std::vector<NormalCurveType> out;
  for (int v = 0; v < 4; ++v) {
    NormalCurveType c{NormalCurveKind::triangle, v, v, {}};
    for (int e = 0; e < 6; ++e) {
      if (kTetEdges[e].first == v || kTetEdges[e].second == v) c.edges.push_back(e);
    }
    out.push_back(std::move(c));
  }
  for (int partner = 1; partner < 4; ++partner) {
    NormalCurveType c{NormalCurveKind::quad, 0, partner, {}};
    for (int e = 0; e < 6; ++e) {
      bool first_side = kTetEdges[e].first == 0 || kTetEdges[e].first == partner;
      bool second_side = kTetEdges[e].second == 0 || kTetEdges[e].second == partner;
      if (first_side != second_side) c.edges.push_back(e);
    }
    out.push_back(std::move(c));
  }
  return out;
}

NormalSurfaceComplex build_surface(const Triangulation& t, const VertexSet& a) {
  if (!t.is_closed()) throw Error("triangulation has an unglued face");
  auto in = membership(t.num_vertices(), a);
  auto cut = cut_edges(t, in);
  NormalSurfaceComplex s;
  s.arcs_per_face.assign(t.size(), {0, 0, 0, 0});
  auto skeleton = one_skeleton(t);
  s.boundary_edges = boundary_set(skeleton, a);
  s.zero_cells = s.boundary_edges.size();

  // cell_of[tet] is the index of the tetrahedron's disc, if any.
  std::vector<std::size_t> cell_of(t.size(), SIZE_MAX);
  for (std::size_t tet = 0; tet < t.size(); ++tet) {
    for (int f = 0; f < 4; ++f) {
      std::size_t n = face_cut_count(cut[tet], f);
      if (n != 0 && n != 2) {
        throw Error("face " + std::to_string(f) + " of tetrahedron " + std::to_string(tet) + " has " +
                    std::to_string(n) + " boundary edges");
      }
      s.arcs_per_face[tet][f] = n == 2 ? 1 : 0;
    }
    const auto count = static_cast<std::size_t>(std::count(cut[tet].begin(), cut[tet].end(), true));
    if (count == 0) continue;
    if (count != 3 && count != 4) {
      throw Error("tetrahedron " + std::to_string(tet) + " has " + std::to_string(count) +
                  " boundary edges");
    }
    NormalCell cell{tet, NormalCurveKind::triangle, 0};
    std::array<bool, 4> corner{};
    for (int v = 0; v < 4; ++v) corner[v] = in[t.vertex_class(tet, v)];
    const int inside = static_cast<int>(std::count(corner.begin(), corner.end(), true));
    if (count == 3) {
      const bool lone = inside == 1;
      for (int v = 0; v < 4; ++v) {
        if (corner[v] == lone) cell.type_vertex = v;
      }
      ++s.triangles;
    } else {
      cell.kind = NormalCurveKind::quad;
      for (int v = 1; v < 4; ++v) {
        if (corner[v] == corner[0]) cell.type_vertex = v;
      }
      ++s.quads;
    }
    cell_of[tet] = s.cells.size();
    s.cells.push_back(cell);
  }
  s.two_cells = s.cells.size();

  UnionFind uf(s.cells.size());
  std::size_t components = s.cells.size();
  std::size_t arc_slots = 0;
  for (std::size_t tet = 0; tet < t.size(); ++tet) {
    for (int f = 0; f < 4; ++f) {
      if (!s.arcs_per_face[tet][f]) continue;
      ++arc_slots;
      const auto& g = *t.gluing(tet, f);
      if (uf.unite(cell_of[tet], cell_of[g.tet])) --components;
    }
  }
  s.one_cells = arc_slots / 2;
  s.components = components;
  s.euler_characteristic = static_cast<long>(s.zero_cells) - static_cast<long>(s.one_cells) +
                           static_cast<long>(s.two_cells);
  return s;
}

std::size_t d2_upper_bound_surface(const NormalSurfaceComplex& s) { return s.one_cells; }

ClaimConstants claim_constants(const Triangulation& t) {
  ClaimConstants c;
  c.max_edge_degree = t.max_edge_degree();
  c.k0 = 1;
  c.k1 = Rational(static_cast<long>(c.max_edge_degree), 2);
  c.k2 = c.k1 * 2 / 3;
  return c;
}

ClaimBoundsReport claim_bounds_eval(const NormalSurfaceComplex& s, const ClaimConstants& c,
                                    std::size_t set_size, const Rational& k4) {
  ClaimBoundsReport r;
  r.constants = c;
  r.k4 = k4;
  r.k3 = c.k1 + k4 * c.k2;
  r.k5 = k4 * c.k2 / 2;
  r.set_size = set_size;
  r.boundary_size = s.boundary_edges.size();
  const Rational boundary(static_cast<long>(r.boundary_size));
  r.zero_cells_ok = Rational(static_cast<long>(s.zero_cells)) <= c.k0 * boundary;
  r.one_cells_ok = Rational(static_cast<long>(s.one_cells)) <= c.k1 * boundary;
  r.two_cells_ok = Rational(static_cast<long>(s.two_cells)) <= c.k2 * boundary;
  r.two_thirds_ok = 3 * s.two_cells <= 2 * s.one_cells;
  r.surface_d2_bound = r.k3 * boundary;
  r.interior_d2_lower_bound = Rational(static_cast<long>(set_size), 2) - r.k5 * boundary;
  return r;
}

}  // namespace covkit
