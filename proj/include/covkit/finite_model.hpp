#pragma once

#include "covkit/group_model.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace covkit {

/// A finite group G given by its Cayley table, a subgroup Gamma, and the
/// right-coset space B = Gamma \ G with counting measure (each coset has
/// measure one). The metric is discrete, so every partition is by single
/// cosets and the construction runs with no approximation at all.
class FiniteModel {
 public:
  using Element = std::size_t;
  using Scalar = Rational;
  static constexpr bool exact = true;
  static constexpr bool true_metric = true;

  struct Partition {
    std::vector<Cell<Element, Scalar>> cells;
    std::size_t identity_cell = 0;
    Scalar delta;
  };

  /// table[a][b] = a*b; element 0 must be the identity. `lattice` lists
  /// the elements of Gamma; it must be a subgroup.
  FiniteModel(std::vector<std::vector<Element>> table, std::vector<Element> lattice);

  static FiniteModel cyclic(std::size_t n, std::vector<Element> lattice);
  /// Group generated by permutations of {0..d-1}; product a*b applies a
  /// first, then b. Elements are numbered in BFS order from the identity.
  static std::vector<std::vector<std::size_t>> close_permutations(
      const std::vector<std::vector<std::size_t>>& generators);
  static std::vector<std::vector<Element>> permutation_table(
      const std::vector<std::vector<std::size_t>>& elements);
  /// Subgroup generated by the given elements of a table.
  static std::vector<Element> generated_subgroup(const std::vector<std::vector<Element>>& table,
                                                 const std::vector<Element>& generators);

  std::size_t order() const { return table_.size(); }
  const std::vector<Element>& lattice() const { return lattice_; }
  const std::vector<std::vector<Element>>& table() const { return table_; }
  std::size_t num_cosets() const { return coset_reps_.size(); }
  /// Right coset index of g (coset 0 is Gamma itself).
  std::size_t coset_of(Element g) const { return coset_of_[g]; }

  Element identity() const { return 0; }
  Element multiply(Element a, Element b) const { return table_[a][b]; }
  Element inverse(Element a) const { return inverse_[a]; }
  Scalar distance(Element a, Element b) const { return a == b ? Scalar(0) : Scalar(1); }
  bool same(Element a, Element b) const { return a == b; }
  Element random_element(Rng& rng) const { return static_cast<Element>(rng.below(order())); }

  bool in_lattice(Element g) const { return in_lattice_[g]; }
  std::optional<Scalar> min_lattice_displacement() const;
  /// Discrete metric: any delta < 1 forces g1 = g2 = id, so 1/2 works for
  /// every epsilon.
  Scalar choose_delta(std::span<const Element> phi, const Scalar& epsilon) const;
  Partition build_partition(const Scalar& delta) const;
  std::size_t locate(const Partition&, Element g) const { return coset_of_[g]; }
  std::vector<Transition<Element>> transitions(const Partition& p, std::size_t cell, Element image,
                                               Rng& rng, std::size_t samples) const;
  Element local_offset(const Partition& p, std::size_t cell, Element x) const;
  Rational cell_measure(const Partition&, std::size_t) const { return Rational(1); }
  Rational transition_measure(const Partition& p, std::size_t from, Element image,
                              std::size_t to) const;
  Element sample_in_cell(const Partition& p, std::size_t cell, Rng&) const {
    return p.cells[cell].representative;
  }
  Element random_lattice_element(Rng& rng) const {
    return lattice_[static_cast<std::size_t>(rng.below(lattice_.size()))];
  }

 private:
  std::vector<std::vector<Element>> table_;
  std::vector<Element> inverse_;
  std::vector<Element> lattice_;
  std::vector<bool> in_lattice_;
  std::vector<std::size_t> coset_of_;
  std::vector<Element> coset_reps_;
};

}  // namespace covkit
