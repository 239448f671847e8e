#include "covkit/matrix_model.hpp"

#include <cmath>

namespace covkit {

double Mat2::frobenius() const {
  double s = 0;
  for (const auto& z : m) s += std::norm(z);
  return std::sqrt(s);
}

Mat2 operator*(const Mat2& x, const Mat2& y) {
  return Mat2{{x.m[0] * y.m[0] + x.m[1] * y.m[2], x.m[0] * y.m[1] + x.m[1] * y.m[3],
               x.m[2] * y.m[0] + x.m[3] * y.m[2], x.m[2] * y.m[1] + x.m[3] * y.m[3]}};
}

Mat2 operator-(const Mat2& x, const Mat2& y) {
  return Mat2{{x.m[0] - y.m[0], x.m[1] - y.m[1], x.m[2] - y.m[2], x.m[3] - y.m[3]}};
}

namespace {

Mat2 negate(const Mat2& x) { return Mat2{{-x.m[0], -x.m[1], -x.m[2], -x.m[3]}}; }

Mat2 scaled_unimodular(const Mat2& x) {
  Complex root = std::sqrt(x.det());
  return Mat2{{x.m[0] / root, x.m[1] / root, x.m[2] / root, x.m[3] / root}};
}

/// exp of a traceless 2x2 matrix A: cosh(mu) I + sinh(mu)/mu A, mu^2 = -det A.
Mat2 exp_traceless(const Mat2& a) {
  Complex mu = std::sqrt(-a.det());
  Complex ch = std::cosh(mu);
  Complex sh = std::abs(mu) < 1e-12 ? Complex(1) : std::sinh(mu) / mu;
  return Mat2{{ch + sh * a.m[0], sh * a.m[1], sh * a.m[2], ch + sh * a.m[3]}};
}

Complex gaussian_complex(Rng& rng) {
  // Box-Muller on the hand-rolled uniform stream.
  double u1 = std::max(rng.unit(), 1e-300);
  double u2 = rng.unit();
  double r = std::sqrt(-2.0 * std::log(u1));
  return {r * std::cos(2 * M_PI * u2), r * std::sin(2 * M_PI * u2)};
}

}  // namespace

Mat2 loxodromic(Complex lambda, Complex attract, Complex repel) {
  // Conjugate diag(lambda, 1/lambda) by the Mobius map sending 0 -> repel,
  // infinity -> attract: C = [[attract, repel], [1, 1]].
  Mat2 c{{attract, repel, Complex(1), Complex(1)}};
  c = scaled_unimodular(c);
  Mat2 d{{lambda, Complex(0), Complex(0), Complex(1) / lambda}};
  Mat2 ci{{c.m[3], -c.m[1], -c.m[2], c.m[0]}};
  return c * d * ci;
}

Mat2 MatrixModel::inverse(const Element& x) const {
  return Mat2{{x.m[3], -x.m[1], -x.m[2], x.m[0]}};
}

double MatrixModel::distance(const Element& x, const Element& y) const {
  if (fault_) {
    Mat2 diff = x - y;
    Mat2 sum = x - negate(y);
    return std::min((*fault_ * diff).frobenius(), (*fault_ * sum).frobenius());
  }
  Mat2 q = inverse(x) * y;
  Mat2 minus = q - Mat2{};
  Mat2 plus = q - negate(Mat2{});
  return std::min(minus.frobenius(), plus.frobenius());
}

MatrixModel::Element MatrixModel::random_element(Rng& rng) const {
  Mat2 a{{gaussian_complex(rng) * 0.5, gaussian_complex(rng) * 0.5, gaussian_complex(rng) * 0.5,
          Complex(0)}};
  a.m[3] = -a.m[0];
  return exp_traceless(a);
}

MatrixModel::Element MatrixModel::random_near_identity(Rng& rng, double radius) const {
  // Draw a traceless direction, then shrink until the distance fits.
  Mat2 a{{gaussian_complex(rng), gaussian_complex(rng), gaussian_complex(rng), Complex(0)}};
  a.m[3] = -a.m[0];
  double scale = radius * rng.unit();
  double norm = a.frobenius();
  for (auto& z : a.m) z *= scale / norm;
  Mat2 g = exp_traceless(a);
  while (distance(identity(), g) > radius) {
    for (auto& z : a.m) z *= 0.5;
    g = exp_traceless(a);
  }
  return g;
}

void MatrixModel::validate(std::span<const Element> phi, double tolerance) const {
  for (const auto& g : phi) {
    for (const auto& z : g.m) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw ModelError("matrix generator has non-finite entries");
      }
    }
    if (std::abs(g.det() - Complex(1)) > tolerance) {
      throw ModelError("matrix generator does not have determinant 1");
    }
  }
}

double MatrixModel::distortion_bound(std::span<const Element> phi) const {
  validate(phi, 1e-6);
  double bound = 1.0;
  for (const auto& g : phi) bound = std::max(bound, g.frobenius() * g.frobenius());
  return bound;
}

double MatrixModel::choose_delta(std::span<const Element> phi, const Scalar& epsilon) const {
  if (!(epsilon > 0)) throw ModelError("epsilon must be positive");
  if (fault_) throw ModelError("cannot certify delta for a non-invariant metric");
  double l = distortion_bound(phi);
  if (!std::isfinite(l)) throw ModelError("unbounded conjugation distortion");
  return epsilon / (l * (1.0 + epsilon) + 1.0);
}

}  // namespace covkit
