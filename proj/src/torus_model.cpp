#include "covkit/torus_model.hpp"

#include <algorithm>
#include <cmath>

namespace covkit {

namespace {

template <typename S>
S floor_of(const S& x) {
  if constexpr (std::is_same_v<S, Rational>) {
    return floor_rational(x);
  } else {
    return std::floor(x);
  }
}

template <typename S>
S abs_of(const S& x) {
  return x < 0 ? S(-x) : x;
}

/// x reduced into [-1/2, 1/2).
template <typename S>
S centred_fraction(const S& x) {
  return x - floor_of(S(x + S(1) / 2));
}

std::size_t mod_index(const Rational& k, std::size_t n) {
  BigInt v = boost::multiprecision::numerator(k);  // k is an integer here
  BigInt r = v % static_cast<long>(n);
  if (r < 0) r += static_cast<long>(n);
  return static_cast<std::size_t>(r.convert_to<unsigned long>());
}

}  // namespace

template <typename S>
TorusModel<S>::TorusModel(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw ModelError("torus dimension must be positive");
}

template <typename S>
typename TorusModel<S>::Element TorusModel<S>::multiply(const Element& a, const Element& b) const {
  Element out(dimension_);
  for (std::size_t i = 0; i < dimension_; ++i) out[i] = a[i] + b[i];
  return out;
}

template <typename S>
typename TorusModel<S>::Element TorusModel<S>::inverse(const Element& a) const {
  Element out(dimension_);
  for (std::size_t i = 0; i < dimension_; ++i) out[i] = -a[i];
  return out;
}

template <typename S>
S TorusModel<S>::distance(const Element& a, const Element& b) const {
  S best(0);
  for (std::size_t i = 0; i < dimension_; ++i) best = std::max(best, abs_of(S(b[i] - a[i])));
  return best;
}

template <typename S>
bool TorusModel<S>::same(const Element& a, const Element& b) const {
  if constexpr (exact) {
    return a == b;
  } else {
    return distance(a, b) <= 1e-9;
  }
}

template <typename S>
typename TorusModel<S>::Element TorusModel<S>::random_element(Rng& rng) const {
  Element out(dimension_);
  for (auto& x : out) {
    if constexpr (exact) {
      x = Rational(static_cast<long>(rng.below(1u << 20)), 1 << 18) - 2;
    } else {
      x = rng.unit() * 4.0 - 2.0;
    }
  }
  return out;
}

template <typename S>
bool TorusModel<S>::in_lattice(const Element& g) const {
  for (const auto& x : g) {
    if constexpr (exact) {
      if (!is_integer(x)) return false;
    } else {
      if (std::abs(x - std::round(x)) > 1e-9) return false;
    }
  }
  return true;
}

template <typename S>
S TorusModel<S>::choose_delta(std::span<const Element>, const Scalar& epsilon) const {
  if (!(epsilon > 0)) throw ModelError("epsilon must be positive");
  return epsilon / 2;
}

template <typename S>
typename TorusModel<S>::Partition TorusModel<S>::build_partition(const Scalar& delta) const {
  if (!(delta > 0)) throw ModelError("delta must be positive");
  S inv = S(1) / delta;
  S n_real = floor_of(inv);
  if (n_real < inv) n_real += 1;
  if (scalar_to_double(n_real) > static_cast<double>(kMaxCells)) {
    throw ModelError("cannot build cells of diameter <= delta within the cell budget");
  }
  std::size_t n = static_cast<std::size_t>(std::llround(scalar_to_double(n_real)));
  std::size_t total = 1;
  for (std::size_t i = 0; i < dimension_; ++i) {
    total *= n;
    if (total > kMaxCells) {
      throw ModelError("cannot build cells of diameter <= delta within the cell budget");
    }
  }
  Partition p;
  p.delta = delta;
  p.grid = n;
  p.dimension = dimension_;
  p.identity_cell = 0;
  for (std::size_t id = 0; id < total; ++id) {
    Element rep(dimension_);
    std::size_t rest = id;
    for (std::size_t a = 0; a < dimension_; ++a) {
      rep[a] = S(static_cast<long>(rest % n)) / S(static_cast<long>(n));
      rest /= n;
    }
    p.cells.push_back({id, std::move(rep), S(1) / S(static_cast<long>(n))});
  }
  return p;
}

template <typename S>
std::vector<std::size_t> TorusModel<S>::cell_coordinates(const Partition& p, std::size_t cell) const {
  std::vector<std::size_t> out(dimension_);
  for (std::size_t a = 0; a < dimension_; ++a) {
    out[a] = cell % p.grid;
    cell /= p.grid;
  }
  return out;
}

template <typename S>
std::size_t TorusModel<S>::locate(const Partition& p, const Element& g) const {
  std::size_t id = 0;
  std::size_t stride = 1;
  const long n = static_cast<long>(p.grid);
  for (std::size_t a = 0; a < dimension_; ++a) {
    S k = floor_of(S(g[a] * S(n) + S(1) / 2));
    long idx;
    if constexpr (exact) {
      idx = static_cast<long>(mod_index(k, p.grid));
    } else {
      idx = static_cast<long>(std::fmod(k, static_cast<double>(n)));
      if (idx < 0) idx += n;
      if (idx >= n) idx -= n;
    }
    id += static_cast<std::size_t>(idx) * stride;
    stride *= p.grid;
  }
  return id;
}

template <typename S>
std::vector<typename TorusModel<S>::AxisPiece> TorusModel<S>::axis_pieces(std::size_t grid,
                                                                          std::size_t k,
                                                                          const Rational& t) const {
  // Source interval (in units of 1/n): [k - 1/2, k + 1/2), shifted by t*n.
  const Rational n(static_cast<long>(grid));
  const Rational u = Rational(static_cast<long>(k)) + t * n;
  const Rational m0 = floor_rational(u);
  std::vector<AxisPiece> pieces;
  for (Rational m : {m0, Rational(m0 + 1)}) {
    Rational lo = std::max(Rational(u - Rational(1, 2)), Rational(m - Rational(1, 2)));
    Rational hi = std::min(Rational(u + Rational(1, 2)), Rational(m + Rational(1, 2)));
    if (hi <= lo) continue;
    Rational length = (hi - lo) / n;
    Rational offset = ((lo + hi) / 2 - u) / n;
    std::size_t target = mod_index(m, grid);
    auto same_target = std::find_if(pieces.begin(), pieces.end(),
                                    [&](const AxisPiece& q) { return q.target == target; });
    if (same_target == pieces.end()) {
      pieces.push_back({target, length, offset});
    } else {
      if (length > same_target->length) same_target->offset = offset;
      same_target->length += length;
    }
  }
  return pieces;
}

template <typename S>
std::vector<Transition<typename TorusModel<S>::Element>> TorusModel<S>::transitions(
    const Partition& p, std::size_t cell, const Element& image, Rng& rng, std::size_t samples) const {
  std::vector<Transition<Element>> out;
  const auto& rep = p.cells[cell].representative;
  if constexpr (exact) {
    (void)rng;
    (void)samples;
    auto coords = cell_coordinates(p, cell);
    std::vector<std::vector<AxisPiece>> axes;
    for (std::size_t a = 0; a < dimension_; ++a) axes.push_back(axis_pieces(p.grid, coords[a], image[a]));
    // Cartesian product of per-axis pieces, target ids ascending on axis 0 first.
    std::vector<std::size_t> choice(dimension_, 0);
    for (;;) {
      std::size_t target = 0;
      std::size_t stride = 1;
      Element witness(dimension_);
      for (std::size_t a = 0; a < dimension_; ++a) {
        const auto& piece = axes[a][choice[a]];
        target += piece.target * stride;
        stride *= p.grid;
        witness[a] = rep[a] + piece.offset;
      }
      out.push_back({target, std::move(witness)});
      std::size_t a = 0;
      while (a < dimension_ && ++choice[a] == axes[a].size()) choice[a++] = 0;
      if (a == dimension_) break;
    }
  } else {
    if (samples == 0) throw UndersamplingError("sampled transitions need at least one sample");
    for (std::size_t k = 0; k < samples; ++k) {
      Element x = sample_in_cell(p, cell, rng);
      std::size_t target = locate(p, multiply(x, image));
      auto it = std::find_if(out.begin(), out.end(),
                             [&](const Transition<Element>& t) { return t.target == target; });
      if (it == out.end()) out.push_back({target, std::move(x)});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Transition<Element>& a, const Transition<Element>& b) { return a.target < b.target; });
  return out;
}

template <typename S>
typename TorusModel<S>::Element TorusModel<S>::local_offset(const Partition& p, std::size_t cell,
                                                            const Element& x) const {
  const auto& rep = p.cells[cell].representative;
  Element g(dimension_);
  for (std::size_t a = 0; a < dimension_; ++a) g[a] = centred_fraction(S(x[a] - rep[a]));
  if (!(distance(g, identity()) * S(2) * S(static_cast<long>(p.grid)) <= S(1) + S(exact ? 0 : 1e-9))) {
    throw ModelError("point does not lie in the requested cell");
  }
  return g;
}

template <typename S>
Rational TorusModel<S>::cell_measure(const Partition& p, std::size_t) const {
  Rational m(1);
  for (std::size_t a = 0; a < dimension_; ++a) m /= static_cast<long>(p.grid);
  return m;
}

template <typename S>
Rational TorusModel<S>::transition_measure(const Partition& p, std::size_t from, const Element& image,
                                           std::size_t to) const
  requires exact
{
  auto src = cell_coordinates(p, from);
  auto dst = cell_coordinates(p, to);
  Rational m(1);
  for (std::size_t a = 0; a < dimension_; ++a) {
    Rational len(0);
    for (const auto& piece : axis_pieces(p.grid, src[a], image[a])) {
      if (piece.target == dst[a]) len = piece.length;
    }
    m *= len;
  }
  return m;
}

template <typename S>
typename TorusModel<S>::Element TorusModel<S>::sample_in_cell(const Partition& p, std::size_t cell,
                                                              Rng& rng) const {
  const auto& rep = p.cells[cell].representative;
  Element x(dimension_);
  for (std::size_t a = 0; a < dimension_; ++a) {
    if constexpr (exact) {
      // Midpoints of a 2^32 subdivision of the cell: always interior.
      Rational frac = (Rational(static_cast<long long>(rng.below(1ULL << 32))) + Rational(1, 2)) /
                      Rational(static_cast<long long>(1ULL << 32));
      x[a] = rep[a] + (frac - Rational(1, 2)) / static_cast<long>(p.grid);
    } else {
      x[a] = rep[a] + (rng.unit() - 0.5) / static_cast<double>(p.grid);
    }
  }
  return x;
}

template <typename S>
typename TorusModel<S>::Element TorusModel<S>::random_lattice_element(Rng& rng) const {
  Element out(dimension_);
  for (auto& x : out) x = S(static_cast<long>(rng.below(7)) - 3);
  return out;
}

template class TorusModel<Rational>;
template class TorusModel<double>;

}  // namespace covkit
