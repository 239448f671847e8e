#include "covkit/triangulation.hpp"

#include "covkit/error.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

namespace covkit {

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

/// Class ids numbered by first appearance in item order.
std::vector<std::size_t> number_classes(UnionFind& uf, std::size_t& count) {
  std::vector<std::size_t> id(uf.parent.size(), SIZE_MAX);
  std::vector<std::size_t> out(uf.parent.size());
  count = 0;
  for (std::size_t i = 0; i < uf.parent.size(); ++i) {
    std::size_t r = uf.find(i);
    if (id[r] == SIZE_MAX) id[r] = count++;
    out[i] = id[r];
  }
  return out;
}

bool is_perm(const Perm4& p) {
  std::array<bool, 4> seen{};
  for (auto x : p) {
    if (x > 3 || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

std::string strip_comment(std::string line) {
  if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
  return line;
}

}  // namespace

Perm4 perm4_identity() { return {0, 1, 2, 3}; }

Perm4 perm4_inverse(const Perm4& p) {
  Perm4 q{};
  for (std::uint8_t i = 0; i < 4; ++i) q[p[i]] = i;
  return q;
}

Perm4 perm4_compose(const Perm4& a, const Perm4& b) {
  Perm4 c{};
  for (int i = 0; i < 4; ++i) c[i] = a[b[i]];
  return c;
}

int perm4_sign(const Perm4& p) {
  int inversions = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) inversions += p[i] > p[j];
  }
  return inversions % 2 ? -1 : 1;
}

std::string to_string(const Perm4& p) {
  std::string s;
  for (auto x : p) s += static_cast<char>('0' + x);
  return s;
}

int tet_edge_index(int a, int b) {
  if (a > b) std::swap(a, b);
  for (int i = 0; i < 6; ++i) {
    if (kTetEdges[i].first == a && kTetEdges[i].second == b) return i;
  }
  throw Error("not a tetrahedron edge");
}

Triangulation::Triangulation(std::vector<std::array<std::optional<Gluing>, 4>> gluings)
    : gluings_(std::move(gluings)) {
  const std::size_t n = gluings_.size();
  for (std::size_t t = 0; t < n; ++t) {
    for (int f = 0; f < 4; ++f) {
      const auto& g = gluings_[t][f];
      if (!g) continue;
      const std::string where = "tetrahedron " + std::to_string(t) + " face " + std::to_string(f);
      if (g->tet >= n) throw Error(where + " is glued to a missing tetrahedron");
      if (!is_perm(g->perm)) throw Error(where + " has an invalid permutation");
      const int back_face = g->perm[f];
      if (g->tet == t && back_face == f) throw Error(where + " is glued to itself");
      const auto& back = gluings_[g->tet][back_face];
      if (!back || back->tet != t || back->perm != perm4_inverse(g->perm)) {
        throw Error(where + " gluing is not reciprocated");
      }
    }
  }

  UnionFind vertices(4 * n);
  UnionFind oriented_edges(12 * n);  // (t, a, b) ordered, index t*12 + a*3 + slot
  UnionFind faces(4 * n);
  auto oriented = [](std::size_t t, int a, int b) {
    return t * 12 + static_cast<std::size_t>(a) * 3 + static_cast<std::size_t>(b < a ? b : b - 1);
  };
  for (std::size_t t = 0; t < n; ++t) {
    for (int f = 0; f < 4; ++f) {
      const auto& g = gluings_[t][f];
      if (!g) continue;
      faces.unite(4 * t + f, 4 * g->tet + g->perm[f]);
      for (int v = 0; v < 4; ++v) {
        if (v == f) continue;
        vertices.unite(4 * t + v, 4 * g->tet + g->perm[v]);
        for (int w = 0; w < 4; ++w) {
          if (w == f || w == v) continue;
          oriented_edges.unite(oriented(t, v, w), oriented(g->tet, g->perm[v], g->perm[w]));
        }
      }
    }
  }
  auto vids = number_classes(vertices, num_vertices_);
  auto fids = number_classes(faces, num_faces_);
  vertex_class_.resize(n);
  face_class_.resize(n);
  edge_class_.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    for (int i = 0; i < 4; ++i) {
      vertex_class_[t][i] = vids[4 * t + i];
      face_class_[t][i] = fids[4 * t + i];
    }
  }
  // Unoriented edge classes: merge each oriented class with its reverse.
  UnionFind edges(6 * n);
  std::vector<std::size_t> rep_of_root(12 * n, SIZE_MAX);
  for (std::size_t t = 0; t < n; ++t) {
    for (int e = 0; e < 6; ++e) {
      auto [a, b] = kTetEdges[e];
      if (oriented_edges.find(oriented(t, a, b)) == oriented_edges.find(oriented(t, b, a))) {
        reversed_edge_ = true;
      }
      for (std::size_t key : {oriented_edges.find(oriented(t, a, b)), oriented_edges.find(oriented(t, b, a))}) {
        if (rep_of_root[key] == SIZE_MAX) {
          rep_of_root[key] = 6 * t + e;
        } else {
          edges.unite(rep_of_root[key], 6 * t + e);
        }
      }
    }
  }
  std::size_t num_edges = 0;
  auto eids = number_classes(edges, num_edges);
  edge_degree_.assign(num_edges, 0);
  edge_ends_.assign(num_edges, {0, 0});
  for (std::size_t t = 0; t < n; ++t) {
    for (int e = 0; e < 6; ++e) {
      std::size_t id = eids[6 * t + e];
      edge_class_[t][e] = id;
      if (edge_degree_[id]++ == 0) {
        std::size_t u = vertex_class_[t][kTetEdges[e].first];
        std::size_t v = vertex_class_[t][kTetEdges[e].second];
        edge_ends_[id] = {std::min(u, v), std::max(u, v)};
      }
    }
  }

  // Orientation: 2-colour tetrahedra so every gluing permutation has sign
  // equal to -(colour product).
  std::vector<int> colour(n, 0);
  for (std::size_t start = 0; start < n && orientable_; ++start) {
    if (colour[start]) continue;
    colour[start] = 1;
    std::deque<std::size_t> queue{start};
    while (!queue.empty() && orientable_) {
      std::size_t t = queue.front();
      queue.pop_front();
      for (int f = 0; f < 4; ++f) {
        const auto& g = gluings_[t][f];
        if (!g) continue;
        int want = -colour[t] * perm4_sign(g->perm);
        if (colour[g->tet] == 0) {
          colour[g->tet] = want;
          queue.push_back(g->tet);
        } else if (colour[g->tet] != want) {
          orientable_ = false;
        }
      }
    }
  }
}

bool Triangulation::is_closed() const {
  for (const auto& tet : gluings_) {
    for (const auto& g : tet) {
      if (!g) return false;
    }
  }
  return true;
}

std::size_t Triangulation::max_edge_degree() const {
  return edge_degree_.empty() ? 0 : *std::max_element(edge_degree_.begin(), edge_degree_.end());
}

long Triangulation::euler_characteristic() const {
  return static_cast<long>(num_vertices_) - static_cast<long>(num_edges()) +
         static_cast<long>(num_faces_) - static_cast<long>(size());
}

Triangulation parse_triangulation(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::array<std::optional<Gluing>, 4>> gluings;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream tokens(strip_comment(line));
    std::vector<std::string> items;
    for (std::string tok; tokens >> tok;) items.push_back(tok);
    if (items.empty()) continue;
    const std::string where = "triangulation line " + std::to_string(lineno);
    if (items.size() != 4) throw ParseError(where + ": expected 4 face entries");
    std::array<std::optional<Gluing>, 4> tet;
    for (int f = 0; f < 4; ++f) {
      const auto& item = items[f];
      if (item == "-") continue;
      auto colon = item.find(':');
      if (colon == std::string::npos || item.size() != colon + 5) {
        throw ParseError(where + ": bad entry '" + item + "'");
      }
      Gluing g;
      try {
        std::size_t used = 0;
        g.tet = std::stoul(item.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument("tet");
      } catch (const std::exception&) {
        throw ParseError(where + ": bad tetrahedron index in '" + item + "'");
      }
      for (int i = 0; i < 4; ++i) {
        char c = item[colon + 1 + i];
        if (c < '0' || c > '3') throw ParseError(where + ": bad permutation in '" + item + "'");
        g.perm[i] = static_cast<std::uint8_t>(c - '0');
      }
      tet[f] = g;
    }
    gluings.push_back(tet);
  }
  try {
    return Triangulation(std::move(gluings));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

std::string format_triangulation(const Triangulation& t) {
  std::string out;
  for (const auto& tet : t.gluings()) {
    for (int f = 0; f < 4; ++f) {
      if (f) out += ' ';
      out += tet[f] ? std::to_string(tet[f]->tet) + ":" + to_string(tet[f]->perm) : "-";
    }
    out += '\n';
  }
  return out;
}

std::vector<std::size_t> SkeletonGraph::valences() const {
  std::vector<std::size_t> val(num_vertices, 0);
  for (auto [u, v] : edges) {
    ++val[u];
    ++val[v];
  }
  return val;
}

SkeletonGraph one_skeleton(const Triangulation& t) {
  if (!t.is_closed()) throw Error("triangulation has an unglued face");
  SkeletonGraph g;
  g.num_vertices = t.num_vertices();
  for (std::size_t e = 0; e < t.num_edges(); ++e) g.edges.push_back(t.edge_endpoints(e));
  return g;
}

std::vector<Triangulation> one_tetrahedron_manifolds() {
  std::vector<Perm4> perms;
  Perm4 p = perm4_identity();
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  std::vector<Triangulation> out;
  // Face 0 is paired with face `partner`; the remaining two faces pair up.
  for (int partner = 1; partner < 4; ++partner) {
    std::array<int, 2> rest{};
    int k = 0;
    for (int f = 1; f < 4; ++f) {
      if (f != partner) rest[k++] = f;
    }
    for (const auto& p0 : perms) {
      if (p0[0] != partner) continue;
      for (const auto& p1 : perms) {
        if (p1[rest[0]] != rest[1]) continue;
        std::vector<std::array<std::optional<Gluing>, 4>> g(1);
        g[0][0] = Gluing{0, p0};
        g[0][partner] = Gluing{0, perm4_inverse(p0)};
        g[0][rest[0]] = Gluing{0, p1};
        g[0][rest[1]] = Gluing{0, perm4_inverse(p1)};
        try {
          Triangulation t(std::move(g));
          if (t.is_orientable() && !t.has_reversed_edge() && t.euler_characteristic() == 0) {
            out.push_back(std::move(t));
          }
        } catch (const Error&) {
        }
      }
    }
  }
  return out;
}

Triangulation one_four_move(const Triangulation& t, std::size_t tet) {
  if (tet >= t.size()) throw Error("no such tetrahedron");
  auto gl = t.gluings();
  const std::size_t n = gl.size();
  // New tetrahedron i is the cone from the new vertex (at position i) over
  // face i of the old one; index tet for i = 0, then n, n+1, n+2.
  std::array<std::size_t, 4> id{tet, n, n + 1, n + 2};
  const auto old = gl[tet];
  gl.resize(n + 3);
  for (int i = 0; i < 4; ++i) {
    std::array<std::optional<Gluing>, 4> fresh;
    if (old[i]) {
      Gluing g = *old[i];
      if (g.tet == tet) g.tet = id[g.perm[i]];
      fresh[i] = g;
      if (old[i]->tet != tet) {
        gl[old[i]->tet][old[i]->perm[i]] = Gluing{id[i], perm4_inverse(old[i]->perm)};
      }
    }
    for (int j = 0; j < 4; ++j) {
      if (j == i) continue;
      Perm4 swap = perm4_identity();
      std::swap(swap[i], swap[j]);
      fresh[j] = Gluing{id[j], swap};
    }
    gl[id[i]] = fresh;
  }
  return Triangulation(std::move(gl));
}

Triangulation relabel(const Triangulation& t, Rng& rng) {
  const std::size_t n = t.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);  // new index of old tet i is order[i]
  std::vector<Perm4> sigma(n);
  for (auto& s : sigma) {
    std::vector<std::uint8_t> v{0, 1, 2, 3};
    rng.shuffle(v);
    s = {v[0], v[1], v[2], v[3]};
  }
  std::vector<std::array<std::optional<Gluing>, 4>> gl(n);
  for (std::size_t old = 0; old < n; ++old) {
    for (int f = 0; f < 4; ++f) {
      const auto& g = t.gluing(old, f);
      if (!g) continue;
      Perm4 p = perm4_compose(sigma[g->tet], perm4_compose(g->perm, perm4_inverse(sigma[old])));
      gl[order[old]][sigma[old][f]] = Gluing{order[g->tet], p};
    }
  }
  return Triangulation(std::move(gl));
}

Triangulation random_closed_triangulation(Rng& rng, std::size_t max_tets) {
  if (max_tets < 1) throw Error("need at least one tetrahedron");
  static const std::vector<Triangulation> seeds = [] {
    auto s = one_tetrahedron_manifolds();
    std::vector<std::array<std::optional<Gluing>, 4>> sphere(2);
    for (int f = 0; f < 4; ++f) {
      sphere[0][f] = Gluing{1, perm4_identity()};
      sphere[1][f] = Gluing{0, perm4_identity()};
    }
    s.emplace_back(std::move(sphere));
    return s;
  }();
  std::vector<const Triangulation*> fitting;
  for (const auto& s : seeds) {
    if (s.size() <= max_tets) fitting.push_back(&s);
  }
  if (fitting.empty()) throw Error("no seed triangulation fits");
  Triangulation t = *fitting[rng.below(fitting.size())];
  std::size_t moves = (max_tets - t.size()) / 3;
  if (moves > 0) moves = rng.below(moves + 1);
  for (std::size_t m = 0; m < moves; ++m) t = one_four_move(t, rng.below(t.size()));
  return relabel(t, rng);
}

}  // namespace covkit
