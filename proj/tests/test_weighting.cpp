#include "support.hpp"

#include "covkit/finite_model.hpp"
#include "covkit/perturbation.hpp"
#include "covkit/simplex.hpp"
#include "covkit/torus_model.hpp"
#include "covkit/weighting.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>

using namespace covkit;
using namespace covkit::testing;

namespace {

const Alphabet kS(std::vector<std::string>{"s"});

LabeledDigraph graph(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& s_edges) {
  LabeledDigraph y(kS, n);
  for (auto [a, b] : s_edges) y.add_edge(a, b, 0);
  return y;
}

Weighting ints(std::vector<long> vertex, std::vector<long> edge) {
  Weighting w;
  for (long v : vertex) w.vertex.emplace_back(v);
  for (long e : edge) w.edge.emplace_back(e);
  return w;
}

// Length of [lo, lo + len) intersected with the circle cell [c - h, c + h).
Rational circle_overlap(Rational lo, Rational len, Rational c, Rational h) {
  Rational total = 0;
  for (int shift = -2; shift <= 2; ++shift) {
    Rational a = std::max(lo, Rational(c - h + shift));
    Rational b = std::min(Rational(lo + len), Rational(c + h + shift));
    if (b > a) total += b - a;
  }
  return total;
}

}  // namespace

TEST(LabeledDigraph, RejectsDuplicateEdges) {
  auto y = graph(2, {{0, 1}});
  EXPECT_THROW(y.add_edge(0, 1, 0), Error);
  EXPECT_EQ(y.find_edge(0, 1, 0), std::optional<std::size_t>(0));
  EXPECT_FALSE(y.find_edge(1, 0, 0));
}

TEST(LabeledDigraph, DegreeViolations) {
  auto y = graph(2, {{0, 0}, {0, 1}});
  auto v = degree_violations(y);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].vertex, 1u);
  EXPECT_TRUE(v[0].missing_out);
  EXPECT_FALSE(v[0].missing_in);
  EXPECT_FALSE(solve_integer_weighting(y));
}

TEST(SolveIntegerWeighting, ForcedSolution) {
  auto y = graph(2, {{0, 0}, {0, 1}, {1, 0}});
  auto w = solve_integer_weighting(y);
  ASSERT_TRUE(w);
  EXPECT_EQ(*w, ints({2, 1}, {1, 1, 1}));
  EXPECT_TRUE(verify_weighting(y, *w).balanced());
}

TEST(SolveIntegerWeighting, TwoCycle) {
  auto y = graph(2, {{0, 1}, {1, 0}});
  EXPECT_EQ(*solve_integer_weighting(y), ints({1, 1}, {1, 1}));
}

TEST(SolveIntegerWeighting, InfeasibleWithGoodDegrees) {
  // Balance at vertex 0 forces the 0 -> 1 edge to weight zero.
  auto y = graph(2, {{0, 0}, {0, 1}, {1, 1}});
  EXPECT_TRUE(degree_violations(y).empty());
  EXPECT_FALSE(solve_integer_weighting(y));
}

TEST(ClearDenominators, Halves) {
  Weighting w;
  w.vertex = {Rational(1, 2), Rational(1, 2)};
  w.edge = {Rational(1, 2), Rational(1, 2)};
  EXPECT_EQ(clear_denominators(w), ints({1, 1}, {1, 1}));
  w.vertex = {Rational(2, 3), Rational(1, 4)};
  w.edge = {Rational(5, 6)};
  EXPECT_EQ(clear_denominators(w), ints({8, 3}, {10}));
}

TEST(SolveIntegerWeighting, RandomQuotientsAreFeasible) {
  Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    std::size_t n = 2 + rng.below(9), k = 1 + rng.below(3);
    auto x = random_rose_cover(rng, n, k);
    auto y = random_quotient_graph(rng, x, 1 + rng.below(n));
    auto w = solve_integer_weighting(y);
    ASSERT_TRUE(w);
    auto rep = verify_weighting(y, *w);
    EXPECT_TRUE(rep.balanced());
    EXPECT_TRUE(rep.violations().empty());
    EXPECT_TRUE(rep.nonpositive_edges.empty());
    for (const auto& e : w->edge) EXPECT_TRUE(is_integer(e) && e >= 1);
    EXPECT_EQ(*w, *solve_integer_weighting(y));
    // Total edge weight is |S| times total vertex weight.
    Rational ev = std::accumulate(w->edge.begin(), w->edge.end(), Rational(0));
    Rational vv = std::accumulate(w->vertex.begin(), w->vertex.end(), Rational(0));
    EXPECT_EQ(ev, vv * static_cast<long>(k));
  }
}

TEST(VerifyWeighting, PerturbationIsLocal) {
  Rng rng(32);
  for (int i = 0; i < 50; ++i) {
    auto x = random_rose_cover(rng, 2 + rng.below(6), 2);
    auto y = random_quotient_graph(rng, x, 1 + rng.below(x.num_vertices()));
    auto w = *solve_integer_weighting(y);
    std::size_t e = rng.below(y.edges().size());
    w.edge[e] += 1;
    auto bad = verify_weighting(y, w).violations();
    ASSERT_EQ(bad.size(), 2u);
    const auto& edge = y.edge(e);
    for (const auto& r : bad) {
      EXPECT_EQ(r.label, edge.label);
      EXPECT_EQ(r.vertex, r.incoming ? edge.dst : edge.src);
      EXPECT_EQ(r.residual, 1);
    }
  }
}

TEST(LinearProgram, CertifiedMatchesExact) {
  Rng rng(33);
  for (int i = 0; i < 100; ++i) {
    LinearProgram lp;
    lp.num_vars = 3 + rng.below(6);
    std::size_t m = 1 + rng.below(lp.num_vars - 1);
    std::vector<Rational> x0;
    for (std::size_t j = 0; j < lp.num_vars; ++j) x0.emplace_back(static_cast<long>(rng.below(4)));
    for (std::size_t r = 0; r < m; ++r) {
      std::vector<std::pair<std::size_t, Rational>> row;
      Rational b = 0;
      for (std::size_t j = 0; j < lp.num_vars; ++j) {
        long a = static_cast<long>(rng.below(7)) - 3;
        if (a == 0) continue;
        row.push_back({j, Rational(a)});
        b += a * x0[j];
      }
      lp.rows.push_back(row);
      lp.rhs.push_back(b);
    }
    for (std::size_t j = 0; j < lp.num_vars; ++j) lp.cost.emplace_back(static_cast<long>(1 + rng.below(5)));
    auto fast = solve_lp(lp);
    auto slow = solve_lp_exact(lp);
    ASSERT_EQ(fast.status, LpStatus::optimal);
    ASSERT_EQ(slow.status, LpStatus::optimal);
    EXPECT_EQ(fast.objective, slow.objective);
    for (std::size_t r = 0; r < m; ++r) {
      Rational lhs = 0;
      for (auto [j, a] : lp.rows[r]) lhs += a * fast.x[j];
      EXPECT_EQ(lhs, lp.rhs[r]);
    }
    for (const auto& v : fast.x) EXPECT_GE(v, 0);
  }
}

TEST(LinearProgram, InfeasibleAndUnbounded) {
  LinearProgram bad;
  bad.num_vars = 2;
  bad.rows = {{{0, Rational(1)}, {1, Rational(1)}}};
  bad.rhs = {Rational(-1)};
  bad.cost = {Rational(1), Rational(1)};
  EXPECT_EQ(solve_lp(bad).status, LpStatus::infeasible);
  EXPECT_EQ(solve_lp_exact(bad).status, LpStatus::infeasible);
  LinearProgram open;
  open.num_vars = 2;
  open.rows = {{{0, Rational(1)}, {1, Rational(-1)}}};
  open.rhs = {Rational(0)};
  open.cost = {Rational(-1), Rational(0)};
  EXPECT_EQ(solve_lp(open).status, LpStatus::unbounded);
  EXPECT_EQ(solve_lp_exact(open).status, LpStatus::unbounded);
}

TEST(HaarWeighting, CyclicFourExample) {
  auto model = FiniteModel::cyclic(4, {0, 2});
  auto p = model.build_partition(Rational(1, 2));
  std::vector<std::size_t> phi{1};
  auto g = build_transition_graph(model, p, kS, std::span<const std::size_t>(phi), 1);
  ASSERT_EQ(g.y.num_vertices(), 2u);
  ASSERT_EQ(g.y.edges().size(), 2u);
  auto w = haar_weighting_exact(model, p, g.y, std::span<const std::size_t>(phi));
  EXPECT_EQ(w, ints({1, 1}, {1, 1}));
}

TEST(HaarWeighting, TorusHalfShift) {
  ExactTorusModel model(2);
  auto p = model.build_partition(Rational(1, 2));
  ASSERT_EQ(p.cells.size(), 4u);
  std::vector<ExactTorusModel::Element> phi{{Rational(1, 2), Rational(0)}};
  auto g = build_transition_graph(model, p, kS, std::span<const ExactTorusModel::Element>(phi), 1);
  EXPECT_EQ(g.y.edges().size(), 4u);
  auto w = haar_weighting_exact(model, p, g.y, std::span<const ExactTorusModel::Element>(phi));
  for (const auto& e : w.edge) EXPECT_EQ(e, Rational(1, 4));
  for (const auto& e : g.y.edges()) EXPECT_NE(e.src, e.dst);
}

TEST(HaarWeighting, TorusRectangleOverlaps) {
  ExactTorusModel model(2);
  auto p = model.build_partition(Rational(1, 4));
  ASSERT_EQ(p.grid, 4u);
  const Rational tx(3, 10), ty(7, 10), h(1, 8);
  std::vector<ExactTorusModel::Element> phi{{tx, ty}};
  auto g = build_transition_graph(model, p, kS, std::span<const ExactTorusModel::Element>(phi), 1);
  auto w = haar_weighting_exact(model, p, g.y, std::span<const ExactTorusModel::Element>(phi));
  std::map<std::size_t, Rational> row_sum, col_sum;
  for (std::size_t e = 0; e < g.y.edges().size(); ++e) {
    const auto& edge = g.y.edge(e);
    auto src = model.cell_coordinates(p, edge.src);
    auto dst = model.cell_coordinates(p, edge.dst);
    Rational expect = 1;
    Rational t[2] = {tx, ty};
    for (int a = 0; a < 2; ++a) {
      Rational lo = Rational(static_cast<long>(src[a]), 4) - h + t[a];
      expect *= circle_overlap(lo, 2 * h, Rational(static_cast<long>(dst[a]), 4), h);
    }
    EXPECT_EQ(w.edge[e], expect);
    row_sum[edge.src] += w.edge[e];
    col_sum[edge.dst] += w.edge[e];
  }
  EXPECT_EQ(g.y.edges().size(), 64u);
  for (std::size_t c = 0; c < 16; ++c) {
    EXPECT_EQ(row_sum[c], Rational(1, 16));
    EXPECT_EQ(col_sum[c], Rational(1, 16));
    EXPECT_EQ(w.vertex[c], Rational(1, 16));
  }
}

TEST(HaarWeighting, SingleLoopIsForced) {
  ExactTorusModel model(1);
  auto p = model.build_partition(Rational(1));
  std::vector<ExactTorusModel::Element> phi{{Rational(1, 3)}};
  auto g = build_transition_graph(model, p, kS, std::span<const ExactTorusModel::Element>(phi), 1);
  ASSERT_EQ(g.y.edges().size(), 1u);
  auto w = haar_weighting_exact(model, p, g.y, std::span<const ExactTorusModel::Element>(phi));
  EXPECT_EQ(w.edge[0], w.vertex[0]);
  EXPECT_EQ(*solve_integer_weighting(g.y), ints({1}, {1}));
}

TEST(HaarWeighting, MonteCarloWithinFiveStandardErrors) {
  FloatTorusModel model(1);
  auto p = model.build_partition(1.0 / 3.0);
  std::vector<FloatTorusModel::Element> phi{{0.3}};
  auto g = build_transition_graph(model, p, kS, std::span<const FloatTorusModel::Element>(phi), 5, 4096);
  auto est = haar_weighting_sampled(model, p, g.y, std::span<const FloatTorusModel::Element>(phi), 1000000, 9);
  auto rep = verify_weighting(g.y, est.value);
  for (const auto& r : rep.residuals) {
    double bound = 0.0;
    const auto& ids = r.incoming ? g.y.in_edges(r.vertex, r.label) : g.y.out_edges(r.vertex, r.label);
    for (std::size_t e : ids) bound += est.std_error.edge[e];
    EXPECT_LE(std::abs(r.residual), 5.0 * bound + 1e-15);
  }
  // Exact answer on this grid: overlap lengths 1/3 - 0.3 and 0.3 - 0 shifted.
  ExactTorusModel exact(1);
  auto ep = exact.build_partition(Rational(1, 3));
  std::vector<ExactTorusModel::Element> ephi{{Rational(3, 10)}};
  for (std::size_t e = 0; e < g.y.edges().size(); ++e) {
    const auto& edge = g.y.edge(e);
    double truth = to_double(exact.transition_measure(ep, edge.src, ephi[0], edge.dst));
    EXPECT_LE(std::abs(est.value.edge[e] - truth), 5.0 * est.std_error.edge[e] + 1e-12);
  }
}

TEST(HaarWeighting, UndersamplingIsReported) {
  FloatTorusModel model(2);
  auto p = model.build_partition(1.0 / 8.0);
  std::vector<FloatTorusModel::Element> phi{{0.301, 0.127}};
  auto g = build_transition_graph(model, p, kS, std::span<const FloatTorusModel::Element>(phi), 5, 4096);
  EXPECT_THROW(haar_weighting_sampled(model, p, g.y, std::span<const FloatTorusModel::Element>(phi), 2, 1),
               UndersamplingError);
}

TEST(ExpandCover, SingleLoopWeightOne) {
  auto y = graph(1, {{0, 0}});
  auto x = expand_cover(y, ints({1}, {1}), 0);
  EXPECT_EQ(x.cover, RoseCover::rose(kS));
}

TEST(ExpandCover, SingleLoopWeightTwo) {
  auto y = graph(1, {{0, 0}});
  bool saw_connected = false, saw_split = false;
  for (std::uint64_t seed = 0; seed < 32; ++seed) {
    auto x = expand_cover(y, ints({2}, {2}), seed);
    EXPECT_TRUE(x.cover.is_rose_covering());
    EXPECT_EQ(x.unpruned_vertices, 2u);
    if (x.components == 1) {
      saw_connected = true;
      EXPECT_EQ(subgroup_index(x.cover), 2u);
    } else {
      saw_split = true;
      EXPECT_EQ(x.components, 2u);
      EXPECT_EQ(subgroup_index(x.cover), 1u);
    }
  }
  EXPECT_TRUE(saw_connected);
  EXPECT_TRUE(saw_split);
}

TEST(ExpandCover, CyclicFourIsIsomorphicToY) {
  auto y = graph(2, {{0, 1}, {1, 0}});
  auto x = expand_cover(y, ints({1, 1}, {1, 1}), 3);
  EXPECT_EQ(x.cover.num_vertices(), 2u);
  EXPECT_EQ(x.projection.vertex_map[x.cover.basepoint()], 0u);
  EXPECT_TRUE(is_in_subgroup(x.cover, power(Word::generator(0), 2)));
  EXPECT_FALSE(is_in_subgroup(x.cover, Word::generator(0)));
}

TEST(ExpandCover, FibersLabelsAndDeterminism) {
  Rng rng(34);
  for (int i = 0; i < 100; ++i) {
    auto src = random_rose_cover(rng, 2 + rng.below(8), 1 + rng.below(3));
    auto y = random_quotient_graph(rng, src, 1 + rng.below(src.num_vertices()));
    auto w = *solve_integer_weighting(y);
    std::size_t base = rng.below(y.num_vertices());
    std::uint64_t seed = rng.next();
    auto x = expand_cover(y, w, seed, base);
    auto again = expand_cover(y, w, seed, base);
    EXPECT_EQ(x.cover, again.cover);
    EXPECT_EQ(x.projection, again.projection);
    ASSERT_TRUE(x.cover.is_rose_covering());
    EXPECT_EQ(x.cover.basepoint(), 0u);
    EXPECT_EQ(x.projection.vertex_map[0], base);
    Rational total = std::accumulate(w.vertex.begin(), w.vertex.end(), Rational(0));
    EXPECT_EQ(Rational(static_cast<long>(x.unpruned_vertices)), total);
    EXPECT_GE(total, static_cast<long>(x.cover.num_vertices()));
    std::vector<long> vfiber(y.num_vertices(), 0);
    std::vector<long> efiber(y.edges().size(), 0);
    for (Vertex v = 0; v < x.cover.num_vertices(); ++v) {
      ++vfiber[x.projection.vertex_map[v]];
      for (std::size_t s = 0; s < y.num_labels(); ++s) {
        const auto& e = y.edge(x.projection.edge_map[s][v]);
        EXPECT_EQ(e.label, s);
        EXPECT_EQ(e.src, x.projection.vertex_map[v]);
        EXPECT_EQ(e.dst, x.projection.vertex_map[x.cover.out(s, v)]);
        ++efiber[x.projection.edge_map[s][v]];
      }
    }
    if (x.components == 1) {
      for (std::size_t v = 0; v < y.num_vertices(); ++v) EXPECT_EQ(vfiber[v], w.vertex[v]);
      for (std::size_t e = 0; e < y.edges().size(); ++e) EXPECT_EQ(efiber[e], w.edge[e]);
    }
  }
}
