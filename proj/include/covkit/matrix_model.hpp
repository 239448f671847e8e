#pragma once

#include "covkit/group_model.hpp"

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace covkit {

using Complex = std::complex<double>;

/// 2x2 complex matrix [[a, b], [c, d]] standing for +-M in PSL(2, C).
struct Mat2 {
  std::array<Complex, 4> m{Complex(1), Complex(0), Complex(0), Complex(1)};

  Complex a() const { return m[0]; }
  Complex b() const { return m[1]; }
  Complex c() const { return m[2]; }
  Complex d() const { return m[3]; }
  Complex det() const { return m[0] * m[3] - m[1] * m[2]; }
  double frobenius() const;

  friend Mat2 operator*(const Mat2& x, const Mat2& y);
  friend Mat2 operator-(const Mat2& x, const Mat2& y);
  bool operator==(const Mat2&) const = default;
};

/// Loxodromic generator conjugate to z -> lambda^2 z with fixed points at
/// `attract` and `repel`; distinct generators with well separated fixed
/// points and large |lambda| play ping-pong and generate a Schottky group.
Mat2 loxodromic(Complex lambda, Complex attract, Complex repel);

/// PSL(2, C) with the left-invariant surrogate metric
///   d(g, h) = min(||g^-1 h - I||_F, ||g^-1 h + I||_F).
/// There is no lattice here: the model serves psi arithmetic and defect
/// measurement only.
///
/// A `metric_fault` matrix P replaces the metric by min over signs of
/// ||P (g -+ h)||_F, which is not left-invariant; model_checks must catch it.
class MatrixModel {
 public:
  using Element = Mat2;
  using Scalar = double;
  static constexpr bool exact = false;
  static constexpr bool true_metric = false;

  MatrixModel() = default;
  explicit MatrixModel(std::optional<Mat2> metric_fault) : fault_(metric_fault) {}

  Element identity() const { return Mat2{}; }
  Element multiply(const Element& x, const Element& y) const { return x * y; }
  /// Adjugate; equals the inverse for determinant one.
  Element inverse(const Element& x) const;
  Scalar distance(const Element& x, const Element& y) const;
  bool same(const Element& x, const Element& y) const { return distance(x, y) <= 1e-9; }
  /// exp of a random traceless matrix with entries of size ~1.
  Element random_element(Rng& rng) const;

  /// Checks det = 1 within tolerance for every generator image.
  void validate(std::span<const Element> phi, double tolerance = 1e-9) const;

  /// L(s) = ||phi(s)||_F^2 bounds conjugation distortion ||phi^-1 A phi|| <= L ||A||;
  /// with L = max_s L(s), delta = epsilon / (L (1 + epsilon) + 1) guarantees
  /// d(g1 phi(s) g2, phi(s)) <= epsilon whenever d(g1, id), d(g2, id) <= delta.
  Scalar choose_delta(std::span<const Element> phi, const Scalar& epsilon) const;
  /// The distortion bound L used by choose_delta.
  Scalar distortion_bound(std::span<const Element> phi) const;

  /// Random element g with d(g, id) <= radius.
  Element random_near_identity(Rng& rng, double radius) const;

 private:
  std::optional<Mat2> fault_;
};

}  // namespace covkit
