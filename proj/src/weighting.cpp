#include "covkit/weighting.hpp"

#include "covkit/error.hpp"
#include "covkit/simplex.hpp"

#include <algorithm>
#include <cmath>

namespace covkit {

LabeledDigraph::LabeledDigraph(Alphabet alphabet, std::size_t num_vertices)
    : alphabet_(std::move(alphabet)),
      num_vertices_(num_vertices),
      out_(alphabet_.size(), std::vector<std::vector<std::size_t>>(num_vertices)),
      in_(alphabet_.size(), std::vector<std::vector<std::size_t>>(num_vertices)) {}

std::size_t LabeledDigraph::add_edge(std::size_t src, std::size_t dst, std::size_t label,
                                     std::optional<std::size_t> decoration) {
  if (src >= num_vertices_ || dst >= num_vertices_) throw Error("edge endpoint out of range");
  if (label >= alphabet_.size()) throw Error("edge label out of range");
  if (find_edge(src, dst, label)) {
    throw Error("duplicate edge " + std::to_string(src) + " -> " + std::to_string(dst) +
                " labelled " + alphabet_.name(label));
  }
  std::size_t id = edges_.size();
  edges_.push_back({src, dst, label, decoration});
  out_[label][src].push_back(id);
  in_[label][dst].push_back(id);
  return id;
}

std::optional<std::size_t> LabeledDigraph::find_edge(std::size_t src, std::size_t dst,
                                                     std::size_t label) const {
  for (std::size_t e : out_[label][src]) {
    if (edges_[e].dst == dst) return e;
  }
  return std::nullopt;
}

std::vector<DegreeViolation> degree_violations(const LabeledDigraph& y) {
  std::vector<DegreeViolation> out;
  for (std::size_t v = 0; v < y.num_vertices(); ++v) {
    for (std::size_t s = 0; s < y.num_labels(); ++s) {
      bool no_out = y.out_edges(v, s).empty();
      bool no_in = y.in_edges(v, s).empty();
      if (no_out || no_in) out.push_back({v, s, no_out, no_in});
    }
  }
  return out;
}

namespace {

template <typename W>
W absolute(const W& x) {
  return x < W{} ? W(-x) : x;
}

template <typename W>
WeightingReport<W> verify_impl(const LabeledDigraph& y, const BasicWeighting<W>& w) {
  if (w.vertex.size() != y.num_vertices() || w.edge.size() != y.edges().size()) {
    throw Error("weighting size does not match graph");
  }
  WeightingReport<W> report;
  for (std::size_t v = 0; v < y.num_vertices(); ++v) {
    for (std::size_t s = 0; s < y.num_labels(); ++s) {
      for (bool incoming : {false, true}) {
        W sum{};
        for (std::size_t e : incoming ? y.in_edges(v, s) : y.out_edges(v, s)) sum += w.edge[e];
        W r = sum - w.vertex[v];
        if (absolute(r) > report.max_abs_residual) report.max_abs_residual = absolute(r);
        report.residuals.push_back({v, s, incoming, r});
      }
    }
  }
  for (std::size_t v = 0; v < w.vertex.size(); ++v) {
    if (!(w.vertex[v] > W{})) report.nonpositive_vertices.push_back(v);
  }
  for (std::size_t e = 0; e < w.edge.size(); ++e) {
    if (!(w.edge[e] > W{})) report.nonpositive_edges.push_back(e);
  }
  return report;
}

}  // namespace

WeightingReport<Rational> verify_weighting(const LabeledDigraph& y, const Weighting& w) {
  return verify_impl(y, w);
}

WeightingReport<double> verify_weighting(const LabeledDigraph& y, const BasicWeighting<double>& w) {
  return verify_impl(y, w);
}

Weighting clear_denominators(const Weighting& w) {
  BigInt lcm = 1;
  auto absorb = [&](const Rational& x) {
    BigInt d = boost::multiprecision::denominator(x);
    lcm = lcm / boost::multiprecision::gcd(lcm, d) * d;
  };
  for (const auto& x : w.vertex) absorb(x);
  for (const auto& x : w.edge) absorb(x);
  BigInt g = 0;
  auto gather = [&](const Rational& x) {
    BigInt scaled = boost::multiprecision::numerator(Rational(x * lcm));
    g = boost::multiprecision::gcd(g, scaled);
  };
  for (const auto& x : w.vertex) gather(x);
  for (const auto& x : w.edge) gather(x);
  Rational factor = g == 0 ? Rational(lcm) : Rational(lcm, g);
  if (factor < 0) factor = -factor;
  Weighting out = w;
  for (auto& x : out.vertex) x *= factor;
  for (auto& x : out.edge) x *= factor;
  return out;
}

std::optional<Weighting> solve_integer_weighting(const LabeledDigraph& y) {
  if (!degree_violations(y).empty()) return std::nullopt;
  // Variables y_e = w(e) - 1 >= 0. Vertex weights are eliminated through
  // w(v) = sum of first-label out-edges, so every balance equation becomes
  //   sum_{edges in group} y_e - sum_{label-0 out edges} y_e
  //     = |label-0 out edges| - |group|.
  const std::size_t n = y.edges().size();
  LinearProgram lp;
  lp.num_vars = n;
  lp.cost.assign(n, Rational(1));
  for (std::size_t v = 0; v < y.num_vertices(); ++v) {
    const auto& base = y.out_edges(v, 0);
    for (std::size_t s = 0; s < y.num_labels(); ++s) {
      for (bool incoming : {false, true}) {
        if (s == 0 && !incoming) continue;
        const auto& group = incoming ? y.in_edges(v, s) : y.out_edges(v, s);
        std::vector<Rational> coeff(n);
        for (std::size_t e : group) coeff[e] += 1;
        for (std::size_t e : base) coeff[e] -= 1;
        std::vector<std::pair<std::size_t, Rational>> row;
        for (std::size_t e = 0; e < n; ++e) {
          if (coeff[e] != 0) row.emplace_back(e, coeff[e]);
        }
        Rational rhs = Rational(static_cast<long>(base.size())) - static_cast<long>(group.size());
        if (row.empty()) {
          if (rhs != 0) return std::nullopt;
          continue;
        }
        lp.rows.push_back(std::move(row));
        lp.rhs.push_back(rhs);
      }
    }
  }
  LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::optimal) return std::nullopt;
  Weighting w;
  w.edge.resize(n);
  for (std::size_t e = 0; e < n; ++e) w.edge[e] = sol.x[e] + 1;
  w.vertex.assign(y.num_vertices(), Rational(0));
  for (std::size_t v = 0; v < y.num_vertices(); ++v) {
    for (std::size_t e : y.out_edges(v, 0)) w.vertex[v] += w.edge[e];
  }
  return clear_denominators(w);
}

ExpandedCover expand_cover(const LabeledDigraph& y, const Weighting& w, std::uint64_t seed,
                           std::size_t base_vertex) {
  auto report = verify_weighting(y, w);
  if (!report.balanced() || !report.nonpositive_vertices.empty() ||
      !report.nonpositive_edges.empty()) {
    throw Error("expand_cover needs a strictly positive balanced weighting");
  }
  if (base_vertex >= y.num_vertices()) throw Error("base vertex out of range");
  auto as_count = [](const Rational& x) {
    if (!is_integer(x)) throw Error("expand_cover needs integer weights");
    return static_cast<std::size_t>(boost::multiprecision::numerator(x).convert_to<unsigned long long>());
  };
  std::vector<std::size_t> fiber_start(y.num_vertices() + 1, 0);
  for (std::size_t v = 0; v < y.num_vertices(); ++v) {
    fiber_start[v + 1] = fiber_start[v] + as_count(w.vertex[v]);
  }
  const std::size_t total = fiber_start.back();
  const std::size_t k = y.num_labels();

  Rng rng(seed);
  std::vector<std::vector<Vertex>> out(k, std::vector<Vertex>(total, kNoVertex));
  std::vector<std::vector<std::size_t>> edge_over(k, std::vector<std::size_t>(total, 0));
  for (std::size_t s = 0; s < k; ++s) {
    // Edge copies of label s, each tagged with its Y-edge, get a tail and a
    // head through one bijection per fiber on each side.
    struct Copy {
      std::size_t y_edge;
      Vertex tail = kNoVertex;
      Vertex head = kNoVertex;
    };
    std::vector<Copy> copies;
    std::vector<std::vector<std::size_t>> copies_out(y.num_vertices());
    std::vector<std::vector<std::size_t>> copies_in(y.num_vertices());
    for (std::size_t e = 0; e < y.edges().size(); ++e) {
      const auto& edge = y.edge(e);
      if (edge.label != s) continue;
      for (std::size_t c = 0; c < as_count(w.edge[e]); ++c) {
        copies_out[edge.src].push_back(copies.size());
        copies_in[edge.dst].push_back(copies.size());
        copies.push_back({e});
      }
    }
    for (std::size_t v = 0; v < y.num_vertices(); ++v) {
      std::vector<Vertex> fiber;
      for (Vertex x = fiber_start[v]; x < fiber_start[v + 1]; ++x) fiber.push_back(x);
      std::vector<Vertex> tails = fiber;
      rng.shuffle(tails);
      for (std::size_t i = 0; i < copies_out[v].size(); ++i) copies[copies_out[v][i]].tail = tails[i];
      std::vector<Vertex> heads = fiber;
      rng.shuffle(heads);
      for (std::size_t i = 0; i < copies_in[v].size(); ++i) copies[copies_in[v][i]].head = heads[i];
    }
    for (const auto& c : copies) {
      out[s][c.tail] = c.head;
      edge_over[s][c.tail] = c.y_edge;
    }
  }

  std::vector<std::size_t> vertex_over(total);
  for (std::size_t v = 0; v < y.num_vertices(); ++v) {
    for (Vertex x = fiber_start[v]; x < fiber_start[v + 1]; ++x) vertex_over[x] = v;
  }

  // Connected components of the full expansion.
  RoseCover full(y.alphabet(), total, fiber_start[base_vertex], out);
  std::vector<int> comp(total, -1);
  int components = 0;
  for (Vertex x = 0; x < total; ++x) {
    if (comp[x] >= 0) continue;
    for (Vertex z : connected_component(full, x)) comp[z] = components;
    ++components;
  }
  const int keep = comp[fiber_start[base_vertex]];
  std::vector<Vertex> renumber(total, kNoVertex);
  std::vector<Vertex> kept;
  // The base vertex comes first so it becomes vertex 0.
  kept.push_back(fiber_start[base_vertex]);
  for (Vertex x = 0; x < total; ++x) {
    if (comp[x] == keep && x != fiber_start[base_vertex]) kept.push_back(x);
  }
  for (std::size_t i = 0; i < kept.size(); ++i) renumber[kept[i]] = i;

  std::vector<std::vector<Vertex>> pruned(k, std::vector<Vertex>(kept.size()));
  CoverProjection h;
  h.vertex_map.resize(kept.size());
  h.edge_map.assign(k, std::vector<std::size_t>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) {
    h.vertex_map[i] = vertex_over[kept[i]];
    for (std::size_t s = 0; s < k; ++s) {
      pruned[s][i] = renumber[out[s][kept[i]]];
      h.edge_map[s][i] = edge_over[s][kept[i]];
    }
  }
  return ExpandedCover{RoseCover(y.alphabet(), kept.size(), 0, std::move(pruned)), std::move(h),
                       total, static_cast<std::size_t>(components)};
}

}  // namespace covkit
