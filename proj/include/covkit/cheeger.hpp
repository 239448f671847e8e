#pragma once

#include "covkit/normal_surface.hpp"
#include "covkit/rational.hpp"
#include "covkit/triangulation.hpp"

#include <cstddef>

namespace covkit {

/// Finite-graph convention: minimise |dA| / |A| over nonempty A with
/// |A| <= |V| / 2.
struct CheegerResult {
  Rational value;
  VertexSet set;
  std::size_t sets_examined = 0;
};

inline constexpr std::size_t kDefaultCheegerCap = 20;

/// Brute force over all admissible subsets. Throws Error when |V| > cap or
/// |V| < 2.
CheegerResult cheeger_exact(const SkeletonGraph& g, std::size_t cap = kDefaultCheegerCap);

/// Upper bound: best prefix (or complementary suffix) of the ordering by
/// the Fiedler vector of the graph Laplacian. Throws Error when |V| < 2.
CheegerResult cheeger_sweep(const SkeletonGraph& g);

}  // namespace covkit
