#pragma once

#include "covkit/rational.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace covkit {

/// min cost . x  subject to  rows x = rhs,  x >= 0, over exact rationals.
struct LinearProgram {
  std::size_t num_vars = 0;
  /// Sparse rows: (variable, coefficient) pairs.
  std::vector<std::vector<std::pair<std::size_t, Rational>>> rows;
  std::vector<Rational> rhs;
  std::vector<Rational> cost;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<Rational> x;
  Rational objective;
  std::size_t pivots = 0;
};

/// Two-phase primal simplex on a dense exact tableau. Entering columns use
/// Dantzig's rule with lowest-index tie-breaking, switching to Bland's rule
/// after a run of degenerate pivots, so the result is a deterministic
/// function of the input.
LpSolution solve_lp_exact(const LinearProgram& lp);

/// Same pivot rules run in double precision to find a basis, which is then
/// certified exactly (B x_B = b with x_B >= 0, nonnegative reduced costs).
/// Falls back to solve_lp_exact when the certificate fails, so the result
/// is always an exact optimum.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace covkit
