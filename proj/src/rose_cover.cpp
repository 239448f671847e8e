#include "covkit/rose_cover.hpp"

#include "covkit/error.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace covkit {

RoseCover::RoseCover(Alphabet alphabet, std::size_t num_vertices, Vertex basepoint,
                     std::vector<std::vector<Vertex>> out)
    : alphabet_(std::move(alphabet)),
      num_vertices_(num_vertices),
      basepoint_(basepoint),
      out_(std::move(out)) {
  if (num_vertices_ == 0) throw Error("a cover needs at least one vertex");
  if (basepoint_ >= num_vertices_) throw Error("basepoint out of range");
  if (out_.size() != alphabet_.size()) throw Error("one edge map per generator required");
  for (const auto& map : out_) {
    if (map.size() != num_vertices_) throw Error("edge map size differs from vertex count");
  }
  check();
}

RoseCover RoseCover::rose(const Alphabet& alphabet) {
  return RoseCover(alphabet, 1, 0, std::vector<std::vector<Vertex>>(alphabet.size(), {0}));
}

void RoseCover::check() {
  in_.assign(alphabet_.size(), std::vector<Vertex>(num_vertices_, kNoVertex));
  valid_ = true;
  for (std::size_t s = 0; s < alphabet_.size() && valid_; ++s) {
    for (Vertex v = 0; v < num_vertices_; ++v) {
      Vertex w = out_[s][v];
      if (w == kNoVertex || w >= num_vertices_) {
        valid_ = false;
        defect_ = "vertex " + std::to_string(v) + " has no outgoing " + alphabet_.name(s) + "-edge";
        break;
      }
      if (in_[s][w] != kNoVertex) {
        valid_ = false;
        defect_ = "vertex " + std::to_string(w) + " has two incoming " + alphabet_.name(s) + "-edges";
        break;
      }
      in_[s][w] = v;
    }
  }
  if (!valid_) return;
  if (connected_component(*this, basepoint_).size() != num_vertices_) {
    valid_ = false;
    defect_ = "graph is not connected";
  }
}

namespace {

void require_covering(const RoseCover& x) {
  if (!x.is_rose_covering()) throw NotACovering("not a covering of the rose: " + x.defect());
}

Vertex step(const RoseCover& x, Vertex v, const Letter& l) {
  return l.exponent == 1 ? x.out(l.generator, v) : x.in(l.generator, v);
}

}  // namespace

std::vector<Vertex> connected_component(const RoseCover& x, Vertex from) {
  std::vector<bool> seen(x.num_vertices(), false);
  std::vector<Vertex> order{from};
  seen[from] = true;
  for (std::size_t head = 0; head < order.size(); ++head) {
    Vertex v = order[head];
    for (std::size_t s = 0; s < x.alphabet().size(); ++s) {
      for (Vertex w : {x.out(s, v), x.in(s, v)}) {
        if (w != kNoVertex && w < x.num_vertices() && !seen[w]) {
          seen[w] = true;
          order.push_back(w);
        }
      }
    }
  }
  // Incoming edges of a non-bijective map are not recorded in in(); pick
  // them up from the raw out maps.
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t s = 0; s < x.alphabet().size(); ++s) {
      for (Vertex v = 0; v < x.num_vertices(); ++v) {
        Vertex w = x.out(s, v);
        if (w == kNoVertex || w >= x.num_vertices()) continue;
        if (seen[v] != seen[w]) {
          Vertex fresh = seen[v] ? w : v;
          seen[fresh] = true;
          order.push_back(fresh);
          grew = true;
        }
      }
    }
  }
  return order;
}

TracedPath trace_path(const RoseCover& x, Vertex start, const Word& f) {
  require_covering(x);
  if (start >= x.num_vertices()) throw Error("start vertex out of range");
  TracedPath path{start, {}};
  path.steps.reserve(f.length());
  for (const auto& l : f.letters()) {
    Vertex next = step(x, path.end, l);
    // Reading s^-1 crosses the s-edge whose tail is the next vertex.
    CoverEdge e = l.exponent == 1 ? CoverEdge{path.end, l.generator} : CoverEdge{next, l.generator};
    path.steps.push_back({e, l.exponent});
    path.end = next;
  }
  return path;
}

Vertex trace_end(const RoseCover& x, Vertex start, std::span<const Letter> letters) {
  require_covering(x);
  Vertex v = start;
  for (const auto& l : letters) v = step(x, v, l);
  return v;
}

bool is_in_subgroup(const RoseCover& x, const Word& f) {
  return trace_end(x, x.basepoint(), f.letters()) == x.basepoint();
}

std::size_t subgroup_index(const RoseCover& x) {
  require_covering(x);
  return x.num_vertices();
}

std::size_t subgroup_rank(const RoseCover& x) {
  require_covering(x);
  return x.num_vertices() * (x.alphabet().size() - 1) + 1;
}

std::vector<Word> schreier_basis(const RoseCover& x) {
  require_covering(x);
  const std::size_t n = x.num_vertices();
  const std::size_t k = x.alphabet().size();
  std::vector<Word> tree_word(n);
  std::vector<bool> seen(n, false);
  // tree_edge[s][v]: the s-edge leaving v is a spanning-tree edge.
  std::vector<std::vector<bool>> tree_edge(k, std::vector<bool>(n, false));
  std::deque<Vertex> queue{x.basepoint()};
  seen[x.basepoint()] = true;
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    for (std::size_t s = 0; s < k; ++s) {
      Vertex fwd = x.out(s, v);
      if (!seen[fwd]) {
        seen[fwd] = true;
        tree_edge[s][v] = true;
        tree_word[fwd] = concat(tree_word[v], Word::generator(s, 1));
        queue.push_back(fwd);
      }
      Vertex back = x.in(s, v);
      if (!seen[back]) {
        seen[back] = true;
        tree_edge[s][back] = true;
        tree_word[back] = concat(tree_word[v], Word::generator(s, -1));
        queue.push_back(back);
      }
    }
  }
  std::vector<Word> basis;
  for (Vertex v = 0; v < n; ++v) {
    for (std::size_t s = 0; s < k; ++s) {
      if (tree_edge[s][v]) continue;
      Vertex w = x.out(s, v);
      basis.push_back(concat(concat(tree_word[v], Word::generator(s, 1)), invert(tree_word[w])));
    }
  }
  std::sort(basis.begin(), basis.end());
  return basis;
}

std::string to_dot(const RoseCover& x, const std::vector<std::string>& annotations) {
  std::ostringstream os;
  os << "digraph X {\n";
  for (Vertex v = 0; v < x.num_vertices(); ++v) {
    os << "  " << v << " [label=\"" << v;
    if (v < annotations.size() && !annotations[v].empty()) os << "\\n" << annotations[v];
    os << "\"";
    if (v == x.basepoint()) os << ", shape=doublecircle";
    os << "];\n";
  }
  for (std::size_t s = 0; s < x.alphabet().size(); ++s) {
    for (Vertex v = 0; v < x.num_vertices(); ++v) {
      Vertex w = x.out(s, v);
      if (w == kNoVertex) continue;
      os << "  " << v << " -> " << w << " [label=\"" << x.alphabet().name(s) << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace covkit
