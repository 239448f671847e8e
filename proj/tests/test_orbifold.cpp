#include "support.hpp"

#include "covkit/orbifold.hpp"

#include <gtest/gtest.h>

using namespace covkit;
using namespace covkit::testing;

namespace {

Presentation pres(const std::string& text) { return parse_presentation(text); }

SingularGraph theta(std::size_t n, std::size_t a, std::size_t b, std::size_t c) {
  SingularGraph g;
  g.vertices = {{LocalGroupKind::dihedral, n}, {LocalGroupKind::dihedral, n}};
  g.edges = {{0, 1, false, a}, {0, 1, false, b}, {0, 1, false, c}};
  return g;
}

SingularGraph circles(std::vector<std::size_t> orders) {
  SingularGraph g;
  for (auto n : orders) g.edges.push_back({0, 0, true, n});
  return g;
}

}  // namespace

TEST(Presentation, ParseAndFormat) {
  auto p = pres("# torus knot\na b\na^2 b^-3\n\na b a^-1 b^-1  # commutator\n");
  EXPECT_EQ(p.num_generators(), 2u);
  ASSERT_EQ(p.num_relators(), 2u);
  EXPECT_EQ(p.relators[0].length(), 5u);
  auto again = parse_presentation(format_presentation(p));
  EXPECT_EQ(again.relators, p.relators);
  EXPECT_THROW(pres("a\nb"), ParseError);
  EXPECT_THROW(pres("# nothing"), ParseError);
}

TEST(Meridional, AddsOneRelatorPerMeridian) {
  OrbifoldData none{pres("a b\na b a^-1 b^-1"), {}, {}};
  EXPECT_EQ(meridional_presentation(none).relators, none.complement_presentation.relators);
  OrbifoldData one{pres("a"), {{Word::generator(0), 2}}, circles({2})};
  auto m = meridional_presentation(one);
  ASSERT_EQ(m.num_relators(), 1u);
  EXPECT_EQ(m.relators[0], power(Word::generator(0), 2));
  OrbifoldData torus{pres("a b\na b a^-1 b^-1"), {{Word::generator(0), 3}}, circles({3})};
  auto t = meridional_presentation(torus);
  EXPECT_EQ(t.num_relators(), 2u);
  EXPECT_EQ(t.relators[1], power(Word::generator(0), 3));
  EXPECT_TRUE(deficiency_bound_check(t, 1));
}

TEST(Meridional, DeficiencyBound) {
  EXPECT_TRUE(deficiency_bound_check(pres("a b c\na\nb\nc"), 0));
  EXPECT_FALSE(deficiency_bound_check(pres("a b\na\nb\na b\na^2"), 1));
  Rng rng(61);
  for (int i = 0; i < 100; ++i) {
    std::size_t g = 1 + rng.below(4);
    Presentation comp{Alphabet::standard(g), {}};
    for (std::size_t r = 0; r < g; ++r) comp.relators.push_back(Word::generator(rng.below(g), 1));
    OrbifoldData d{comp, {}, {}};
    std::size_t circles_count = rng.below(4);
    for (std::size_t c = 0; c < circles_count; ++c) d.meridians.push_back({Word::generator(rng.below(g)), 2 + rng.below(5)});
    auto m = meridional_presentation(d);
    EXPECT_EQ(m.num_relators() - m.num_generators(), circles_count);
    EXPECT_TRUE(deficiency_bound_check(m, circles_count));
  }
}

TEST(DpRank, Examples) {
  EXPECT_EQ(dp_rank(pres("a\na^2"), 2), 1u);
  EXPECT_EQ(dp_rank(pres("a\na^2"), 3), 0u);
  for (std::uint64_t p : {2, 3, 5, 7}) EXPECT_EQ(dp_rank(pres("a b\na b a^-1 b^-1"), p), 2u);
  EXPECT_THROW(dp_rank(pres("a"), 4), Error);
  EXPECT_THROW(dp_rank(pres("a"), 1), Error);
}

TEST(DpRank, MatchesHomomorphismCount) {
  Rng rng(62);
  for (int i = 0; i < 200; ++i) {
    auto p = random_presentation(rng, 5, 6, 8);
    std::uint64_t prime = std::vector<std::uint64_t>{2, 3, 5}[rng.below(3)];
    EXPECT_EQ(dp_rank(p, prime), dp_by_counting_homs(p, prime));
  }
}

TEST(DpRank, MeridianPowersCoprimeToP) {
  Rng rng(63);
  for (int i = 0; i < 100; ++i) {
    auto comp = random_presentation(rng, 4, 3, 6);
    std::uint64_t p = std::vector<std::uint64_t>{2, 3, 5}[rng.below(3)];
    OrbifoldData d{comp, {}, {}};
    for (std::size_t m = 0, r = 1 + rng.below(3); m < r; ++m) {
      Word mu = concat(Word::generator(rng.below(comp.num_generators()), 1),
                       Word::generator(rng.below(comp.num_generators()), rng.below(2) ? 1 : -1));
      d.meridians.push_back({mu, 2 + rng.below(9)});
    }
    auto full = meridional_presentation(d);
    Presentation replaced = comp, deleted = comp;
    for (const auto& m : d.meridians) {
      if (m.order % p != 0) {
        replaced.relators.push_back(m.word);
        deleted.relators.push_back(m.word);
      } else {
        replaced.relators.push_back(power(m.word, static_cast<long>(m.order)));
      }
    }
    EXPECT_EQ(dp_rank(full, p), dp_rank(replaced, p));
    EXPECT_EQ(dp_rank(full, p), dp_rank(deleted, p));
  }
}

TEST(RankModP, Basics) {
  EXPECT_EQ(rank_mod_p({{2, 4}, {1, 2}}, 2), 1u);
  EXPECT_EQ(rank_mod_p({{2, 4}, {1, 2}}, 3), 1u);
  EXPECT_EQ(rank_mod_p({{1, 0}, {0, 1}}, 5), 2u);
  EXPECT_EQ(rank_mod_p({{5, 10}}, 5), 0u);
  EXPECT_EQ(rank_mod_p({{-1, 1}, {1, -1}}, 3), 1u);
  EXPECT_TRUE(is_prime(2) && is_prime(97) && is_prime(1000000007));
  EXPECT_FALSE(is_prime(0) || is_prime(1) || is_prime(91) || is_prime(561));
}

TEST(SingularGraph, SingPExtract) {
  auto g = circles({2, 2});
  EXPECT_TRUE(sing_p_extract(g, 3).edges.empty());
  auto t = theta(3, 2, 2, 3);
  auto two = sing_p_extract(t, 2);
  EXPECT_EQ(two.edges.size(), 2u);
  EXPECT_EQ(two.vertices.size(), 2u);
  EXPECT_EQ(graph_b1(two), 1u);
  auto three = sing_p_extract(t, 3);
  EXPECT_EQ(three.edges.size(), 1u);
  EXPECT_EQ(graph_b1(three), 0u);
  SingularGraph mixed;
  mixed.vertices = {{LocalGroupKind::cyclic, 2}, {LocalGroupKind::cyclic, 2}, {LocalGroupKind::cyclic, 2}};
  mixed.edges = {{0, 1, false, 2}, {1, 2, false, 4}, {0, 0, true, 6}, {0, 2, false, 3}};
  auto m2 = sing_p_extract(mixed, 2);
  EXPECT_EQ(m2.edges.size(), 3u);
}

TEST(SingularGraph, BettiAndEuler) {
  EXPECT_EQ(graph_b1(circles({5})), 1u);
  auto th = theta(3, 2, 2, 3);
  EXPECT_EQ(graph_b1(th), 2u);
  SingularGraph both = th;
  both.edges.push_back({0, 0, true, 2});
  both.edges.push_back({0, 0, true, 2});
  EXPECT_EQ(graph_b1(both), 4u);
  EXPECT_EQ(chi_lower_bound(th), 1);
  EXPECT_EQ(chi_lower_bound(both), 1);
  SingularGraph arc;
  arc.vertices = {{LocalGroupKind::boundary, 0}, {LocalGroupKind::boundary, 0}};
  arc.edges = {{0, 1, false, 2}};
  EXPECT_EQ(chi_lower_bound(arc), -1);
  EXPECT_EQ(graph_b1(arc), 0u);
  SingularGraph tripod;
  tripod.vertices.assign(4, {LocalGroupKind::boundary, 0});
  tripod.edges = {{0, 1, false, 2}, {0, 2, false, 2}, {0, 3, false, 2}};
  EXPECT_EQ(chi_lower_bound(tripod), -1);
}

TEST(SingularGraph, BettiBoundProperty) {
  Rng rng(64);
  for (int i = 0; i < 300; ++i) {
    SingularGraph g;
    std::size_t n = rng.below(7);
    g.vertices.assign(n, {LocalGroupKind::cyclic, 2});
    std::size_t m = n == 0 ? 0 : rng.below(2 * n + 1);
    for (std::size_t e = 0; e < m; ++e) g.edges.push_back({rng.below(n), rng.below(n), false, 2 + rng.below(4)});
    for (std::size_t c = rng.below(3); c > 0; --c) g.edges.push_back({0, 0, true, 2});
    Rational chi = chi_lower_bound(g);
    Rational rhs = chi + static_cast<long>(non_circle_components(g));
    EXPECT_GE(Rational(static_cast<long>(graph_b1(g))), rhs);
    if (non_circle_components(g) == 1) {
      EXPECT_EQ(Rational(static_cast<long>(graph_b1(g)) - static_cast<long>(g.num_closed_curves())), rhs);
    }
  }
}

TEST(SingularGraph, Warnings) {
  check_singular_graph(theta(3, 2, 2, 3));
  EXPECT_TRUE(singular_graph_warnings(theta(3, 2, 2, 3)).empty());
  EXPECT_FALSE(singular_graph_warnings(theta(3, 2, 3, 3)).empty());
  SingularGraph bad;
  bad.vertices = {{LocalGroupKind::cyclic, 2}};
  bad.edges = {{0, 3, false, 2}};
  EXPECT_THROW(check_singular_graph(bad), Error);
  bad.edges = {{0, 0, false, 1}};
  EXPECT_THROW(check_singular_graph(bad), Error);
}

TEST(DpLowerBound, Examples) {
  OrbifoldData two{pres("a b"), {{Word::generator(0), 2}, {Word::generator(1), 2}}, circles({2, 2})};
  EXPECT_EQ(dp_lower_bound(two, 2), 2u);
  OrbifoldData th{pres("a b"), {}, theta(2, 2, 2, 2)};
  EXPECT_EQ(dp_lower_bound(th, 2), 2u);
  for (std::uint64_t p : {2, 3, 5}) {
    OrbifoldData d{pres("a b"), {{Word::generator(0), p}}, circles({p})};
    EXPECT_TRUE(orbifold_data_warnings(d).empty());
    EXPECT_GE(dp_rank(meridional_presentation(d), p), dp_lower_bound(d, p));
  }
}

TEST(GolodShafarevich, Examples) {
  auto nine = golod_shafarevich(9, 0, 9);
  EXPECT_EQ(nine.verdict, GsVerdict::infinite);
  EXPECT_EQ(nine.margin, Rational(9, 4));
  auto eight = golod_shafarevich(8, 0, 8);
  EXPECT_EQ(eight.verdict, GsVerdict::inconclusive);
  EXPECT_EQ(eight.margin, 0);
  auto five = golod_shafarevich(5, 3, 3);
  EXPECT_EQ(five.verdict, GsVerdict::infinite);
  EXPECT_EQ(five.margin, Rational(5, 4));
  EXPECT_THROW(golod_shafarevich(-1, 0, 0), Error);
  for (std::int64_t d = 0; d <= 40; ++d) {
    for (std::int64_t excess = 0; excess <= d; ++excess) {
      auto r = golod_shafarevich(d, 2, 2 + excess);
      if (excess == d) { EXPECT_EQ(r.verdict == GsVerdict::infinite, d >= 9); }
      if (d >= 9) { EXPECT_EQ(r.verdict, GsVerdict::infinite); }
    }
  }
}
