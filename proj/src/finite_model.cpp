#include "covkit/finite_model.hpp"

#include <algorithm>
#include <map>

namespace covkit {

FiniteModel::FiniteModel(std::vector<std::vector<Element>> table, std::vector<Element> lattice)
    : table_(std::move(table)) {
  const std::size_t n = table_.size();
  if (n == 0) throw ModelError("finite model needs a nonempty table");
  for (const auto& row : table_) {
    if (row.size() != n) throw ModelError("Cayley table must be square");
    std::vector<bool> hit(n, false);
    for (Element x : row) {
      if (x >= n || hit[x]) throw ModelError("Cayley table row is not a permutation");
      hit[x] = true;
    }
  }
  for (Element a = 0; a < n; ++a) {
    if (table_[0][a] != a || table_[a][0] != a) throw ModelError("element 0 must be the identity");
  }
  // Associativity is checked on all triples for small groups, on a fixed
  // stride of triples otherwise.
  const std::size_t stride = n <= 64 ? 1 : n / 16 + 1;
  for (Element a = 0; a < n; a += stride) {
    for (Element b = 0; b < n; b += stride) {
      for (Element c = 0; c < n; c += stride) {
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]]) {
          throw ModelError("Cayley table is not associative");
        }
      }
    }
  }
  inverse_.assign(n, 0);
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) {
      if (table_[a][b] == 0) inverse_[a] = b;
    }
  }

  in_lattice_.assign(n, false);
  for (Element g : lattice) {
    if (g >= n) throw ModelError("lattice element out of range");
    in_lattice_[g] = true;
  }
  if (!in_lattice_[0]) throw ModelError("lattice must contain the identity");
  for (Element a = 0; a < n; ++a) {
    if (!in_lattice_[a]) continue;
    if (!in_lattice_[inverse_[a]]) throw ModelError("lattice is not closed under inverses");
    for (Element b = 0; b < n; ++b) {
      if (in_lattice_[b] && !in_lattice_[table_[a][b]]) {
        throw ModelError("lattice is not closed under products");
      }
    }
  }
  for (Element a = 0; a < n; ++a) {
    if (in_lattice_[a]) lattice_.push_back(a);
  }

  // Right cosets Gamma*g, numbered by smallest member.
  coset_of_.assign(n, n);
  for (Element g = 0; g < n; ++g) {
    if (coset_of_[g] != n) continue;
    std::size_t id = coset_reps_.size();
    coset_reps_.push_back(g);
    for (Element gamma : lattice_) coset_of_[table_[gamma][g]] = id;
  }
}

FiniteModel FiniteModel::cyclic(std::size_t n, std::vector<Element> lattice) {
  std::vector<std::vector<Element>> table(n, std::vector<Element>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) table[a][b] = (a + b) % n;
  }
  return FiniteModel(std::move(table), std::move(lattice));
}

std::vector<std::vector<std::size_t>> FiniteModel::close_permutations(
    const std::vector<std::vector<std::size_t>>& generators) {
  std::size_t degree = generators.empty() ? 1 : generators.front().size();
  std::vector<std::size_t> id(degree);
  for (std::size_t i = 0; i < degree; ++i) id[i] = i;
  for (const auto& g : generators) {
    if (g.size() != degree) throw ModelError("permutation generators differ in degree");
    std::vector<bool> hit(degree, false);
    for (std::size_t x : g) {
      if (x >= degree || hit[x]) throw ModelError("generator is not a permutation");
      hit[x] = true;
    }
  }
  std::vector<std::vector<std::size_t>> elements{id};
  std::map<std::vector<std::size_t>, std::size_t> index{{id, 0}};
  for (std::size_t head = 0; head < elements.size(); ++head) {
    for (const auto& g : generators) {
      std::vector<std::size_t> next(degree);
      for (std::size_t i = 0; i < degree; ++i) next[i] = g[elements[head][i]];
      if (index.emplace(next, elements.size()).second) {
        elements.push_back(std::move(next));
        if (elements.size() > 100000) throw ModelError("permutation group too large");
      }
    }
  }
  return elements;
}

std::vector<std::vector<FiniteModel::Element>> FiniteModel::permutation_table(
    const std::vector<std::vector<std::size_t>>& elements) {
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t i = 0; i < elements.size(); ++i) index.emplace(elements[i], i);
  const std::size_t n = elements.size();
  std::vector<std::vector<Element>> table(n, std::vector<Element>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      std::vector<std::size_t> ab(elements[a].size());
      for (std::size_t i = 0; i < ab.size(); ++i) ab[i] = elements[b][elements[a][i]];
      auto it = index.find(ab);
      if (it == index.end()) throw ModelError("permutation set is not closed");
      table[a][b] = it->second;
    }
  }
  return table;
}

std::vector<FiniteModel::Element> FiniteModel::generated_subgroup(
    const std::vector<std::vector<Element>>& table, const std::vector<Element>& generators) {
  std::vector<bool> in(table.size(), false);
  std::vector<Element> members{0};
  in[0] = true;
  for (std::size_t head = 0; head < members.size(); ++head) {
    for (Element g : generators) {
      Element next = table[members[head]][g];
      if (!in[next]) {
        in[next] = true;
        members.push_back(next);
      }
    }
  }
  std::sort(members.begin(), members.end());
  return members;
}

std::optional<FiniteModel::Scalar> FiniteModel::min_lattice_displacement() const {
  if (lattice_.size() <= 1) return std::nullopt;
  return Scalar(1);
}

FiniteModel::Scalar FiniteModel::choose_delta(std::span<const Element>, const Scalar& epsilon) const {
  if (epsilon <= 0) throw ModelError("epsilon must be positive");
  return Scalar(1, 2);
}

FiniteModel::Partition FiniteModel::build_partition(const Scalar& delta) const {
  if (delta <= 0) throw ModelError("delta must be positive");
  Partition p;
  p.delta = delta;
  for (std::size_t c = 0; c < coset_reps_.size(); ++c) {
    p.cells.push_back({c, coset_reps_[c], Scalar(0)});
  }
  p.identity_cell = coset_of_[0];
  return p;
}

std::vector<Transition<FiniteModel::Element>> FiniteModel::transitions(const Partition& p,
                                                                       std::size_t cell,
                                                                       Element image, Rng&,
                                                                       std::size_t) const {
  Element rep = p.cells[cell].representative;
  return {{coset_of_[table_[rep][image]], rep}};
}

FiniteModel::Element FiniteModel::local_offset(const Partition& p, std::size_t cell, Element x) const {
  if (coset_of_[x] != cell) throw ModelError("point does not lie in the requested cell");
  (void)p;
  return 0;
}

Rational FiniteModel::transition_measure(const Partition& p, std::size_t from, Element image,
                                         std::size_t to) const {
  Element rep = p.cells[from].representative;
  return coset_of_[table_[rep][image]] == to ? Rational(1) : Rational(0);
}

}  // namespace covkit
