#pragma once

#include "covkit/error.hpp"
#include "covkit/rational.hpp"
#include "covkit/rng.hpp"

#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace covkit {

/// Group arithmetic plus a left-invariant metric.
template <typename M>
concept GroupModel = requires(const M& m, const typename M::Element& a, Rng& rng) {
  typename M::Element;
  typename M::Scalar;
  { m.identity() } -> std::same_as<typename M::Element>;
  { m.multiply(a, a) } -> std::same_as<typename M::Element>;
  { m.inverse(a) } -> std::same_as<typename M::Element>;
  { m.distance(a, a) } -> std::same_as<typename M::Scalar>;
  { m.same(a, a) } -> std::same_as<bool>;
  { m.random_element(rng) } -> std::same_as<typename M::Element>;
  { M::exact } -> std::convertible_to<bool>;
  { M::true_metric } -> std::convertible_to<bool>;
};

/// A cell B_i of a partition of the coset space B = Gamma \ G.
template <typename Element, typename Scalar>
struct Cell {
  std::size_t id = 0;
  Element representative;  // beta_i, a group element whose coset lies inside the cell
  Scalar diameter_bound{};
};

/// A target cell reached from a source cell by right multiplication, with a
/// witness point of the source cell whose image lands inside the target.
template <typename Element>
struct Transition {
  std::size_t target = 0;
  Element witness;
};

/// A group model that also carries a lattice Gamma, the coset space B, Haar
/// measure on B, and a way to cut B into small cells.
template <typename M>
concept LatticeModel =
    GroupModel<M> &&
    requires(const M& m, const typename M::Element& a, const typename M::Scalar& x,
             const typename M::Partition& p, std::span<const typename M::Element> phi, Rng& rng,
             std::size_t i) {
      typename M::Partition;
      { p.cells } -> std::convertible_to<std::vector<Cell<typename M::Element, typename M::Scalar>>>;
      { p.identity_cell } -> std::convertible_to<std::size_t>;
      { m.in_lattice(a) } -> std::same_as<bool>;
      { m.min_lattice_displacement() } -> std::same_as<std::optional<typename M::Scalar>>;
      { m.choose_delta(phi, x) } -> std::same_as<typename M::Scalar>;
      { m.build_partition(x) } -> std::same_as<typename M::Partition>;
      { m.locate(p, a) } -> std::same_as<std::size_t>;
      { m.transitions(p, i, a, rng, i) } -> std::same_as<std::vector<Transition<typename M::Element>>>;
      { m.local_offset(p, i, a) } -> std::same_as<typename M::Element>;
      { m.cell_measure(p, i) } -> std::same_as<Rational>;
      { m.sample_in_cell(p, i, rng) } -> std::same_as<typename M::Element>;
      { m.random_lattice_element(rng) } -> std::same_as<typename M::Element>;
    };

/// Exact Haar measure of {x in B_i : x * image in B_j}.
template <typename M>
concept ExactMeasureModel = LatticeModel<M> && requires(const M& m, const typename M::Partition& p,
                                                        const typename M::Element& a, std::size_t i) {
  { m.transition_measure(p, i, a, i) } -> std::same_as<Rational>;
};

struct ModelCheck {
  std::string name;
  bool passed = true;
  double max_violation = 0.0;
  std::size_t samples = 0;
};

struct ModelCheckReport {
  std::vector<ModelCheck> checks;
  bool passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }
};

template <typename Scalar>
double scalar_to_double(const Scalar& x) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return to_double(x);
  } else {
    return static_cast<double>(x);
  }
}

/// Epsilon used when model_checks needs some partition to test against.
template <typename M>
typename M::Scalar default_check_epsilon() {
  return typename M::Scalar(1) / 4;
}

/// Spot-checks the model contract on seeded samples: identity and inverse
/// axioms, left-invariance of the metric, and (for lattice models)
/// constancy of the coset projection on Gamma-orbits.
template <GroupModel M>
ModelCheckReport model_checks(const M& model, std::size_t samples, std::uint64_t seed) {
  using Scalar = typename M::Scalar;
  Rng rng(seed);
  const double tol = M::exact ? 0.0 : 1e-9;
  ModelCheckReport report;
  ModelCheck identity{"identity_and_inverse", true, 0.0, samples};
  ModelCheck invariance{"left_invariance", true, 0.0, samples};
  ModelCheck metric{"metric_axioms", true, 0.0, samples};
  for (std::size_t k = 0; k < samples; ++k) {
    auto g = model.random_element(rng);
    auto x = model.random_element(rng);
    auto y = model.random_element(rng);
    const auto e = model.identity();
    double v = std::max({scalar_to_double(model.distance(model.multiply(e, x), x)),
                         scalar_to_double(model.distance(model.multiply(x, e), x)),
                         scalar_to_double(model.distance(model.multiply(x, model.inverse(x)), e))});
    identity.max_violation = std::max(identity.max_violation, v);
    if (!(model.same(model.multiply(e, x), x) && model.same(model.multiply(x, model.inverse(x)), e))) {
      identity.passed = false;
    }
    Scalar d0 = model.distance(x, y);
    Scalar d1 = model.distance(model.multiply(g, x), model.multiply(g, y));
    double gap = std::abs(scalar_to_double(d0) - scalar_to_double(d1));
    double scale = std::max(1.0, std::abs(scalar_to_double(d0)));
    invariance.max_violation = std::max(invariance.max_violation, gap);
    if constexpr (M::exact) {
      if (d0 != d1) invariance.passed = false;
    } else {
      if (gap > tol * scale) invariance.passed = false;
    }
    double sym = std::abs(scalar_to_double(model.distance(x, y)) - scalar_to_double(model.distance(y, x)));
    double self = scalar_to_double(model.distance(x, x));
    double tri = 0.0;
    if constexpr (M::true_metric) {
      tri = scalar_to_double(model.distance(x, y)) - scalar_to_double(model.distance(x, g)) -
            scalar_to_double(model.distance(g, y));
    }
    double mv = std::max({sym, self, tri, 0.0});
    metric.max_violation = std::max(metric.max_violation, mv);
    if (mv > tol * scale) metric.passed = false;
  }
  report.checks = {identity, invariance, metric};
  if constexpr (LatticeModel<M>) {
    ModelCheck projection{"projection_gamma_invariance", true, 0.0, samples};
    ModelCheck lattice{"lattice_closure", true, 0.0, samples};
    auto partition = model.build_partition(model.choose_delta(std::span<const typename M::Element>{},
                                                              default_check_epsilon<M>()));
    for (std::size_t k = 0; k < samples; ++k) {
      auto x = model.random_element(rng);
      auto gamma = model.random_lattice_element(rng);
      auto gamma2 = model.random_lattice_element(rng);
      if (model.locate(partition, model.multiply(gamma, x)) != model.locate(partition, x)) {
        projection.passed = false;
        projection.max_violation = 1.0;
      }
      if (!model.in_lattice(model.multiply(gamma, model.inverse(gamma2)))) {
        lattice.passed = false;
        lattice.max_violation = 1.0;
      }
    }
    report.checks.push_back(projection);
    report.checks.push_back(lattice);
  }
  return report;
}

/// Sullivan's relation lambda_0 = D(2 - D) between the bottom of the
/// spectrum and the limit-set dimension, valid for 1 <= D <= 2.
inline double sullivan_lambda0(double dimension) {
  if (!(dimension >= 1.0 && dimension <= 2.0)) {
    throw Error("sullivan_lambda0 requires 1 <= D <= 2");
  }
  return dimension * (2.0 - dimension);
}

}  // namespace covkit
