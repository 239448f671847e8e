#pragma once

#include "covkit/words.hpp"

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace covkit {

using Vertex = std::size_t;
inline constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();

/// The s-labelled edge leaving `tail`. In a covering there is exactly one
/// per (vertex, label), so the pair names the edge.
struct CoverEdge {
  Vertex tail = 0;
  std::size_t label = 0;
  bool operator==(const CoverEdge&) const = default;
};

struct TracedStep {
  CoverEdge edge;
  int exponent = 1;
};

struct TracedPath {
  Vertex end = 0;
  std::vector<TracedStep> steps;
};

/// A finite graph with edges labelled by the alphabet, read as a candidate
/// covering of the wedge of |S| circles. out[s][v] is the head of the
/// s-edge leaving v, or kNoVertex when v has none. The data may be invalid;
/// is_rose_covering() says whether it is, and the group-theoretic queries
/// throw NotACovering when it is not.
class RoseCover {
 public:
  RoseCover(Alphabet alphabet, std::size_t num_vertices, Vertex basepoint,
            std::vector<std::vector<Vertex>> out);

  /// One vertex, one loop per generator.
  static RoseCover rose(const Alphabet& alphabet);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t num_vertices() const { return num_vertices_; }
  Vertex basepoint() const { return basepoint_; }
  Vertex out(std::size_t label, Vertex v) const { return out_[label][v]; }
  Vertex in(std::size_t label, Vertex v) const { return in_[label][v]; }
  const std::vector<std::vector<Vertex>>& out_maps() const { return out_; }

  /// Per-label maps are bijections and the graph is connected.
  bool is_rose_covering() const { return valid_; }
  /// Human-readable reason when is_rose_covering() is false.
  const std::string& defect() const { return defect_; }

  bool operator==(const RoseCover& other) const {
    return alphabet_ == other.alphabet_ && num_vertices_ == other.num_vertices_ &&
           basepoint_ == other.basepoint_ && out_ == other.out_;
  }

 private:
  void check();

  Alphabet alphabet_;
  std::size_t num_vertices_;
  Vertex basepoint_;
  std::vector<std::vector<Vertex>> out_;
  std::vector<std::vector<Vertex>> in_;
  bool valid_ = false;
  std::string defect_;
};

inline bool is_rose_covering(const RoseCover& x) { return x.is_rose_covering(); }

TracedPath trace_path(const RoseCover& x, Vertex start, const Word& f);
/// End vertex only; no allocation.
Vertex trace_end(const RoseCover& x, Vertex start, std::span<const Letter> letters);

/// f lies in F' = pi_1(X, b).
bool is_in_subgroup(const RoseCover& x, const Word& f);

std::size_t subgroup_index(const RoseCover& x);
/// Nielsen-Schreier: |V|(|S| - 1) + 1.
std::size_t subgroup_rank(const RoseCover& x);
/// Free basis of F' read off a BFS spanning tree rooted at the basepoint.
/// Tree edges are discovered in generator order, +1 before -1, so the basis
/// is deterministic. Returned in shortlex order.
std::vector<Word> schreier_basis(const RoseCover& x);

/// Vertex ids reachable from `from` (ignoring orientation), in BFS order.
std::vector<Vertex> connected_component(const RoseCover& x, Vertex from);

/// Graphviz rendering. When `annotations` is non-empty it supplies an
/// extra line for each vertex label (e.g. the fiber it lies over).
std::string to_dot(const RoseCover& x, const std::vector<std::string>& annotations = {});

}  // namespace covkit
