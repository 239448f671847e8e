#include "support.hpp"

#include "covkit/triangulation.hpp"

#include <gtest/gtest.h>

#include <map>
#include <numeric>
#include <set>

using namespace covkit;
using namespace covkit::testing;

namespace {

const char* kDoubledTet =
    "1:0123 1:0123 1:0123 1:0123\n"
    "0:0123 0:0123 0:0123 0:0123\n";

// Edge classes by union-find over (tet, edge) slots, following every face
// gluing; returns the class id of each slot.
std::vector<std::size_t> edge_orbits(const Triangulation& t) {
  std::vector<std::size_t> parent(6 * t.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t tet = 0; tet < t.size(); ++tet) {
    for (int f = 0; f < 4; ++f) {
      const auto& g = t.gluing(tet, f);
      if (!g) continue;
      for (int e = 0; e < 6; ++e) {
        auto [a, b] = kTetEdges[e];
        if (a == f || b == f) continue;
        int img = tet_edge_index(g->perm[a], g->perm[b]);
        parent[find(6 * tet + e)] = find(6 * g->tet + img);
      }
    }
  }
  std::vector<std::size_t> out(parent.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = find(i);
  return out;
}

}  // namespace

TEST(Perm4, Algebra) {
  Perm4 p{1, 2, 3, 0};
  EXPECT_EQ(perm4_compose(p, perm4_inverse(p)), perm4_identity());
  EXPECT_EQ(perm4_sign(p), -1);
  EXPECT_EQ(perm4_sign(Perm4{1, 0, 3, 2}), 1);
  EXPECT_EQ(tet_edge_index(3, 1), 4);
}

TEST(Triangulation, DoubledTetrahedronIsSphere) {
  auto t = parse_triangulation(kDoubledTet);
  EXPECT_TRUE(t.is_closed());
  EXPECT_TRUE(t.is_orientable());
  EXPECT_EQ(t.num_vertices(), 4u);
  EXPECT_EQ(t.num_edges(), 6u);
  EXPECT_EQ(t.num_faces(), 4u);
  EXPECT_EQ(t.euler_characteristic(), 0);
  auto g = one_skeleton(t);
  EXPECT_EQ(g.edges.size(), 6u);
  for (auto v : g.valences()) EXPECT_EQ(v, 3u);
  EXPECT_EQ(format_triangulation(parse_triangulation(format_triangulation(t))), format_triangulation(t));
}

TEST(Triangulation, RejectsBadGluings) {
  EXPECT_THROW(parse_triangulation("0:1023 - - -\n"), Error);
  EXPECT_THROW(parse_triangulation("1:0123 - - -\n- - - -\n"), Error);
  EXPECT_THROW(parse_triangulation("0:0123 x - -\n"), Error);
  auto open = parse_triangulation("- - - -\n");
  EXPECT_FALSE(open.is_closed());
  EXPECT_THROW(one_skeleton(open), Error);
}

TEST(Triangulation, OneTetrahedronManifolds) {
  auto all = one_tetrahedron_manifolds();
  ASSERT_FALSE(all.empty());
  for (const auto& t : all) {
    EXPECT_EQ(t.size(), 1u);
    EXPECT_TRUE(t.is_closed());
    EXPECT_TRUE(t.is_orientable());
    EXPECT_FALSE(t.has_reversed_edge());
    EXPECT_EQ(t.euler_characteristic(), 0);
    auto orbits = edge_orbits(t);
    EXPECT_EQ(std::set<std::size_t>(orbits.begin(), orbits.end()).size(), t.num_edges());
    std::size_t degree_sum = 0;
    for (std::size_t e = 0; e < t.num_edges(); ++e) degree_sum += t.edge_degree(e);
    EXPECT_EQ(degree_sum, 6u);
  }
}

TEST(Triangulation, EdgeClassesMatchOrbitOracle) {
  Rng rng(71);
  for (const auto& t : triangulation_corpus(rng, 60, 12)) {
    auto orbits = edge_orbits(t);
    std::map<std::size_t, std::size_t> oracle_to_class;
    for (std::size_t tet = 0; tet < t.size(); ++tet) {
      for (int e = 0; e < 6; ++e) {
        auto [it, fresh] = oracle_to_class.emplace(orbits[6 * tet + e], t.edge_class(tet, e));
        EXPECT_EQ(it->second, t.edge_class(tet, e));
      }
    }
    EXPECT_EQ(oracle_to_class.size(), t.num_edges());
  }
}

TEST(Triangulation, CorpusIsClosedOrientableManifolds) {
  Rng rng(72);
  for (const auto& t : triangulation_corpus(rng, 80, 10)) {
    ASSERT_LE(t.size(), 10u);
    EXPECT_TRUE(t.is_closed());
    EXPECT_TRUE(t.is_orientable());
    EXPECT_EQ(t.euler_characteristic(), 0);
    EXPECT_EQ(t.num_faces(), 2 * t.size());
    auto g = one_skeleton(t);
    EXPECT_EQ(g.num_vertices, t.num_vertices());
    auto val = g.valences();
    EXPECT_EQ(std::accumulate(val.begin(), val.end(), std::size_t{0}), 2 * g.edges.size());
    auto again = parse_triangulation(format_triangulation(t));
    EXPECT_EQ(format_triangulation(again), format_triangulation(t));
  }
}

TEST(Triangulation, OneFourMove) {
  auto t = parse_triangulation(kDoubledTet);
  auto u = one_four_move(t, 1);
  EXPECT_EQ(u.size(), 5u);
  EXPECT_EQ(u.num_vertices(), 5u);
  EXPECT_EQ(u.num_edges(), 10u);
  EXPECT_TRUE(u.is_closed());
  EXPECT_TRUE(u.is_orientable());
  EXPECT_EQ(u.euler_characteristic(), 0);
}

TEST(Triangulation, RelabelPreservesInvariants) {
  Rng rng(73);
  for (const auto& t : triangulation_corpus(rng, 30, 8)) {
    auto u = relabel(t, rng);
    EXPECT_EQ(u.num_vertices(), t.num_vertices());
    EXPECT_EQ(u.num_edges(), t.num_edges());
    EXPECT_EQ(u.max_edge_degree(), t.max_edge_degree());
    EXPECT_EQ(u.is_orientable(), t.is_orientable());
  }
}
