#pragma once

#include "covkit/group_model.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace covkit {

/// G = R^d acting by translation, Gamma = Z^d, B = the torus R^d / Z^d
/// with Lebesgue (Haar) measure. The metric is the sup norm, which is
/// bi-invariant, so delta = epsilon / 2 is certified.
///
/// Cells form an n^d grid of half-open boxes centred on the points k/n, so
/// the identity coset is the centre of cell 0.
///
/// With Scalar = Rational everything (transitions, overlaps, witnesses,
/// psi values) is exact. With Scalar = double, transitions are found by
/// seeded sampling and the exact Haar measure is unavailable.
template <typename S>
class TorusModel {
 public:
  using Element = std::vector<S>;
  using Scalar = S;
  static constexpr bool exact = std::is_same_v<S, Rational>;
  static constexpr bool true_metric = true;

  struct Partition {
    std::vector<Cell<Element, Scalar>> cells;
    std::size_t identity_cell = 0;
    Scalar delta;
    std::size_t grid = 1;  // cells per axis
    std::size_t dimension = 1;
  };

  explicit TorusModel(std::size_t dimension);

  std::size_t dimension() const { return dimension_; }

  Element identity() const { return Element(dimension_, S(0)); }
  Element multiply(const Element& a, const Element& b) const;
  Element inverse(const Element& a) const;
  Scalar distance(const Element& a, const Element& b) const;
  bool same(const Element& a, const Element& b) const;
  Element random_element(Rng& rng) const;

  bool in_lattice(const Element& g) const;
  std::optional<Scalar> min_lattice_displacement() const { return Scalar(1); }
  Scalar choose_delta(std::span<const Element> phi, const Scalar& epsilon) const;
  /// Grid with n = ceil(1/delta) cells per axis, so every cell has
  /// sup-norm diameter 1/n <= delta.
  Partition build_partition(const Scalar& delta) const;
  std::size_t locate(const Partition& p, const Element& g) const;
  std::vector<Transition<Element>> transitions(const Partition& p, std::size_t cell,
                                               const Element& image, Rng& rng,
                                               std::size_t samples) const;
  Element local_offset(const Partition& p, std::size_t cell, const Element& x) const;
  Rational cell_measure(const Partition& p, std::size_t cell) const;
  Rational transition_measure(const Partition& p, std::size_t from, const Element& image,
                              std::size_t to) const
    requires exact;
  Element sample_in_cell(const Partition& p, std::size_t cell, Rng& rng) const;
  Element random_lattice_element(Rng& rng) const;

  /// Grid coordinates of a cell id (mixed radix, axis 0 least significant).
  std::vector<std::size_t> cell_coordinates(const Partition& p, std::size_t cell) const;

  static constexpr std::size_t kMaxCells = 1000000;

 private:
  struct AxisPiece {
    std::size_t target = 0;  // grid coordinate along this axis
    Rational length;         // overlap length
    Rational offset;         // witness offset from the source centre
  };
  /// Pieces of the translate of one grid interval by t, grouped by target.
  std::vector<AxisPiece> axis_pieces(std::size_t grid, std::size_t k, const Rational& t) const;

  std::size_t dimension_;
};

using ExactTorusModel = TorusModel<Rational>;
using FloatTorusModel = TorusModel<double>;

extern template class TorusModel<Rational>;
extern template class TorusModel<double>;

}  // namespace covkit
