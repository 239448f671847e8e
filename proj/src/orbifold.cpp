#include "covkit/orbifold.hpp"

#include "covkit/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

namespace covkit {

namespace {

std::string strip_comment(std::string line) {
  if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
  auto first = line.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  auto last = line.find_last_not_of(" \t\r");
  return line.substr(first, last - first + 1);
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

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t reduce_mod(long x, std::uint64_t p) {
  long m = static_cast<long>(static_cast<std::int64_t>(x % static_cast<long>(p)));
  return static_cast<std::uint64_t>(m < 0 ? m + static_cast<long>(p) : m);
}

}  // namespace

Presentation parse_presentation(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::optional<Alphabet> alphabet;
  std::vector<Word> relators;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_comment(line);
    if (line.empty()) continue;
    try {
      if (!alphabet) {
        std::istringstream names(line);
        std::vector<std::string> list;
        for (std::string n; names >> n;) list.push_back(n);
        alphabet.emplace(std::move(list));
      } else {
        relators.push_back(parse_word(*alphabet, line));
      }
    } catch (const ParseError& e) {
      throw ParseError("presentation line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!alphabet) throw ParseError("presentation has no generator line");
  return Presentation{std::move(*alphabet), std::move(relators)};
}

std::string format_presentation(const Presentation& p) {
  std::string out;
  for (std::size_t i = 0; i < p.generators.size(); ++i) {
    if (i) out += ' ';
    out += p.generators.name(i);
  }
  out += '\n';
  for (const auto& r : p.relators) out += format_word(p.generators, r) + '\n';
  return out;
}

std::string to_string(const LocalGroup& g) {
  switch (g.kind) {
    case LocalGroupKind::cyclic: return "cyclic(" + std::to_string(g.order) + ")";
    case LocalGroupKind::dihedral: return "dihedral(" + std::to_string(2 * g.order) + ")";
    case LocalGroupKind::z2xz2: return "z2xz2";
    case LocalGroupKind::a4: return "a4";
    case LocalGroupKind::s4: return "s4";
    case LocalGroupKind::a5: return "a5";
    case LocalGroupKind::boundary: return "boundary";
  }
  return "?";
}

LocalGroupKind parse_local_group_kind(std::string_view name) {
  static const std::map<std::string, LocalGroupKind, std::less<>> kinds{
      {"cyclic", LocalGroupKind::cyclic}, {"dihedral", LocalGroupKind::dihedral},
      {"z2xz2", LocalGroupKind::z2xz2},   {"a4", LocalGroupKind::a4},
      {"s4", LocalGroupKind::s4},         {"a5", LocalGroupKind::a5},
      {"boundary", LocalGroupKind::boundary}};
  auto it = kinds.find(name);
  if (it == kinds.end()) throw ParseError("unknown local group '" + std::string(name) + "'");
  return it->second;
}

std::size_t SingularGraph::valence(std::size_t v) const {
  std::size_t n = 0;
  for (const auto& e : edges) {
    if (e.closed) continue;
    n += (e.u == v) + (e.v == v);
  }
  return n;
}

std::size_t SingularGraph::num_closed_curves() const {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [](const SingularEdge& e) { return e.closed; }));
}

void check_singular_graph(const SingularGraph& g) {
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (e.order < 2) throw Error("singular edge " + std::to_string(i) + " has order < 2");
    if (!e.closed && (e.u >= g.vertices.size() || e.v >= g.vertices.size())) {
      throw Error("singular edge " + std::to_string(i) + " has an endpoint out of range");
    }
  }
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    const auto& lg = g.vertices[v];
    if ((lg.kind == LocalGroupKind::cyclic || lg.kind == LocalGroupKind::dihedral) && lg.order < 2) {
      throw Error("vertex " + std::to_string(v) + " needs a local group order >= 2");
    }
  }
}

std::vector<std::string> singular_graph_warnings(const SingularGraph& g) {
  check_singular_graph(g);
  std::vector<std::vector<std::size_t>> orders(g.vertices.size());
  for (const auto& e : g.edges) {
    if (e.closed) continue;
    orders[e.u].push_back(e.order);
    orders[e.v].push_back(e.order);
  }
  std::vector<std::string> warnings;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    auto got = orders[v];
    std::sort(got.begin(), got.end());
    const auto& lg = g.vertices[v];
    std::vector<std::size_t> want;
    switch (lg.kind) {
      case LocalGroupKind::boundary: continue;
      case LocalGroupKind::cyclic:
        want = {lg.order, lg.order};
        break;
      case LocalGroupKind::dihedral: want = {2, 2, lg.order}; break;
      case LocalGroupKind::z2xz2: want = {2, 2, 2}; break;
      case LocalGroupKind::a4: want = {2, 3, 3}; break;
      case LocalGroupKind::s4: want = {2, 3, 4}; break;
      case LocalGroupKind::a5: want = {2, 3, 5}; break;
    }
    std::sort(want.begin(), want.end());
    if (got != want) {
      std::string list;
      for (auto o : got) list += (list.empty() ? "" : ",") + std::to_string(o);
      warnings.push_back("vertex " + std::to_string(v) + " (" + to_string(lg) +
                         ") has incident edge orders {" + list + "}");
    }
  }
  return warnings;
}

std::vector<std::string> orbifold_data_warnings(const OrbifoldData& data) {
  auto warnings = singular_graph_warnings(data.singular_graph);
  const auto& edges = data.singular_graph.edges;
  if (data.meridians.size() != edges.size()) {
    warnings.push_back(std::to_string(data.meridians.size()) + " meridians for " +
                       std::to_string(edges.size()) + " singular edges");
  } else {
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (data.meridians[i].order != edges[i].order) {
        warnings.push_back("meridian " + std::to_string(i) + " has order " +
                           std::to_string(data.meridians[i].order) + " but its edge has order " +
                           std::to_string(edges[i].order));
      }
    }
  }
  return warnings;
}

Presentation meridional_presentation(const OrbifoldData& data) {
  Presentation out = data.complement_presentation;
  for (const auto& m : data.meridians) {
    out.relators.push_back(power(m.word, static_cast<long>(m.order)));
  }
  return out;
}

bool deficiency_bound_check(const Presentation& pres, std::size_t num_sing_components) {
  return static_cast<long long>(pres.num_relators()) - static_cast<long long>(pres.num_generators()) <=
         static_cast<long long>(num_sing_components);
}

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (p % q == 0) return p == q;
  }
  std::uint64_t d = p - 1;
  int s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod(a, d, p);
    if (x == 1 || x == p - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, p);
      if (x == p - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::size_t rank_mod_p(const std::vector<std::vector<long>>& rows, std::uint64_t p) {
  if (!is_prime(p)) throw Error(std::to_string(p) + " is not prime");
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  std::vector<std::vector<std::uint64_t>> m;
  for (const auto& r : rows) {
    if (r.size() != cols) throw Error("ragged matrix");
    std::vector<std::uint64_t> row;
    for (long x : r) row.push_back(reduce_mod(x, p));
    m.push_back(std::move(row));
  }
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < m.size() && m[pivot][c] == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[pivot], m[rank]);
    std::uint64_t inv = powmod(m[rank][c], p - 2, p);
    for (auto& x : m[rank]) x = mulmod(x, inv, p);
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][c] == 0) continue;
      std::uint64_t f = m[r][c];
      for (std::size_t k = c; k < cols; ++k) {
        m[r][k] = (m[r][k] + p - mulmod(f, m[rank][k], p)) % p;
      }
    }
    ++rank;
  }
  return rank;
}

std::size_t dp_rank(const Presentation& pres, std::uint64_t p) {
  if (!is_prime(p)) throw Error(std::to_string(p) + " is not prime");
  std::vector<std::vector<long>> rows;
  for (const auto& r : pres.relators) rows.push_back(r.exponent_sums(pres.num_generators()));
  return pres.num_generators() - rank_mod_p(rows, p);
}

SingularGraph sing_p_extract(const SingularGraph& g, std::uint64_t p) {
  check_singular_graph(g);
  std::vector<bool> keep(g.vertices.size(), false);
  for (const auto& e : g.edges) {
    if (e.order % p != 0 || e.closed) continue;
    keep[e.u] = keep[e.v] = true;
  }
  std::vector<std::size_t> renumber(g.vertices.size(), 0);
  SingularGraph out;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (!keep[v]) continue;
    renumber[v] = out.vertices.size();
    out.vertices.push_back(g.vertices[v]);
  }
  for (const auto& e : g.edges) {
    if (e.order % p != 0) continue;
    SingularEdge copy = e;
    if (!e.closed) {
      copy.u = renumber[e.u];
      copy.v = renumber[e.v];
    }
    out.edges.push_back(copy);
  }
  return out;
}

std::size_t non_circle_components(const SingularGraph& g) {
  check_singular_graph(g);
  UnionFind uf(g.vertices.size());
  std::size_t comps = g.vertices.size();
  for (const auto& e : g.edges) {
    if (!e.closed && uf.unite(e.u, e.v)) --comps;
  }
  return comps;
}

std::size_t graph_components(const SingularGraph& g) {
  return non_circle_components(g) + g.num_closed_curves();
}

std::size_t graph_b1(const SingularGraph& g) {
  const std::size_t closed = g.num_closed_curves();
  const std::size_t arcs = g.edges.size() - closed;
  return arcs + non_circle_components(g) + closed - g.vertices.size();
}

Rational chi_lower_bound(const SingularGraph& g) {
  check_singular_graph(g);
  Rational sum = 0;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    sum += Rational(static_cast<long>(g.valence(v)), 2) - 1;
  }
  return sum;
}

std::size_t dp_lower_bound(const OrbifoldData& data, std::uint64_t p) {
  if (!is_prime(p)) throw Error(std::to_string(p) + " is not prime");
  return graph_b1(sing_p_extract(data.singular_graph, p));
}

GsResult golod_shafarevich(std::int64_t dp, std::int64_t num_gens, std::int64_t num_rels) {
  if (dp < 0 || num_gens < 0 || num_rels < 0) throw Error("Golod-Shafarevich inputs must be nonnegative");
  Rational d(dp);
  Rational margin = d * d / 4 - d + Rational(num_gens) - Rational(num_rels);
  return {margin > 0 ? GsVerdict::infinite : GsVerdict::inconclusive, margin};
}

std::string to_string(GsVerdict v) { return v == GsVerdict::infinite ? "infinite" : "inconclusive"; }

}  // namespace covkit
