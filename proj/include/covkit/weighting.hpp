#pragma once

#include "covkit/rational.hpp"
#include "covkit/rng.hpp"
#include "covkit/rose_cover.hpp"
#include "covkit/words.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace covkit {

struct LabeledEdge {
  std::size_t src = 0;
  std::size_t dst = 0;
  std::size_t label = 0;
  /// Index into a side table of edge decorations (psi values), if any.
  std::optional<std::size_t> decoration;
};

/// The transition graph Y: one vertex per partition cell, an s-labelled edge
/// i -> j whenever some point of cell i is carried into cell j by phi(s).
/// At most one edge per (src, dst, label).
class LabeledDigraph {
 public:
  LabeledDigraph(Alphabet alphabet, std::size_t num_vertices);

  /// Adds an edge; throws if the (src, dst, label) triple already exists.
  std::size_t add_edge(std::size_t src, std::size_t dst, std::size_t label,
                       std::optional<std::size_t> decoration = std::nullopt);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t num_vertices() const { return num_vertices_; }
  std::size_t num_labels() const { return alphabet_.size(); }
  const std::vector<LabeledEdge>& edges() const { return edges_; }
  const LabeledEdge& edge(std::size_t e) const { return edges_[e]; }
  std::optional<std::size_t> find_edge(std::size_t src, std::size_t dst, std::size_t label) const;

  /// Edge ids leaving / entering v with the given label, in id order.
  const std::vector<std::size_t>& out_edges(std::size_t v, std::size_t label) const {
    return out_[label][v];
  }
  const std::vector<std::size_t>& in_edges(std::size_t v, std::size_t label) const {
    return in_[label][v];
  }

 private:
  Alphabet alphabet_;
  std::size_t num_vertices_;
  std::vector<LabeledEdge> edges_;
  std::vector<std::vector<std::vector<std::size_t>>> out_;
  std::vector<std::vector<std::vector<std::size_t>>> in_;
};

/// A vertex missing an incoming or outgoing edge of some label. Any such
/// vertex makes a strictly positive weighting impossible.
struct DegreeViolation {
  std::size_t vertex = 0;
  std::size_t label = 0;
  bool missing_out = false;
  bool missing_in = false;
};

std::vector<DegreeViolation> degree_violations(const LabeledDigraph& y);

template <typename W>
struct BasicWeighting {
  std::vector<W> vertex;
  std::vector<W> edge;
  bool operator==(const BasicWeighting&) const = default;
};

/// Exact weights (rational, or integral after solve_integer_weighting).
using Weighting = BasicWeighting<Rational>;
/// Sampled weights, with one standard error per entry.
struct WeightEstimate {
  BasicWeighting<double> value;
  BasicWeighting<double> std_error;
  std::size_t samples_per_cell = 0;
  std::uint64_t seed = 0;
};

/// Balance constraint residual: out (or in) s-edge sum minus vertex weight.
template <typename W>
struct BalanceResidual {
  std::size_t vertex = 0;
  std::size_t label = 0;
  bool incoming = false;
  W residual{};
};

template <typename W>
struct WeightingReport {
  std::vector<BalanceResidual<W>> residuals;  // every constraint, in order
  std::vector<std::size_t> nonpositive_vertices;
  std::vector<std::size_t> nonpositive_edges;
  W max_abs_residual{};

  /// Constraints whose residual is nonzero.
  std::vector<BalanceResidual<W>> violations() const {
    std::vector<BalanceResidual<W>> out;
    for (const auto& r : residuals) {
      if (r.residual != W{}) out.push_back(r);
    }
    return out;
  }
  bool balanced() const { return max_abs_residual == W{}; }
};

/// Residual of every (vertex, label, direction) balance equation.
WeightingReport<Rational> verify_weighting(const LabeledDigraph& y, const Weighting& w);
WeightingReport<double> verify_weighting(const LabeledDigraph& y, const BasicWeighting<double>& w);

/// Strictly positive integer weighting of minimum total edge weight among
/// weightings with every weight >= 1, scaled to clear denominators.
/// nullopt when no strictly positive weighting exists.
std::optional<Weighting> solve_integer_weighting(const LabeledDigraph& y);

/// Smallest positive integer multiple of a rational weighting.
Weighting clear_denominators(const Weighting& w);

/// h: X -> Y. vertex_map[x] is the Y-vertex under x; edge_map[s][x] is the
/// Y-edge under the s-edge leaving x.
struct CoverProjection {
  std::vector<std::size_t> vertex_map;
  std::vector<std::vector<std::size_t>> edge_map;
  bool operator==(const CoverProjection&) const = default;
};

struct ExpandedCover {
  RoseCover cover;
  CoverProjection projection;
  /// Vertices of the full expansion before discarding other components.
  std::size_t unpruned_vertices = 0;
  std::size_t components = 0;
};

/// Builds the covering graph X from an integer weighting: w'(v) vertices over
/// v, w'(e) edges over e, matched to fibers by seeded random bijections.
/// Keeps the component of the first vertex over Y-vertex `base_vertex`,
/// which becomes X's basepoint (vertex 0).
ExpandedCover expand_cover(const LabeledDigraph& y, const Weighting& w, std::uint64_t seed,
                           std::size_t base_vertex = 0);

}  // namespace covkit
