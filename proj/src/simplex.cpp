#include "covkit/simplex.hpp"

#include "covkit/error.hpp"

#include <cmath>
#include <optional>

namespace covkit {

namespace {

constexpr std::size_t kDegenerateRunBeforeBland = 40;

/// Sign tests: exact for rationals, toleranced for doubles.
struct ExactSigns {
  static bool neg(const Rational& x) { return x < 0; }
  static bool pos(const Rational& x) { return x > 0; }
  static bool zero(const Rational& x) { return x == 0; }
};

struct FloatSigns {
  static constexpr double tol = 1e-9;
  static bool neg(double x) { return x < -tol; }
  static bool pos(double x) { return x > tol; }
  static bool zero(double x) { return std::abs(x) <= tol; }
};

template <typename T, typename Signs>
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), n_(cols), a_(rows, std::vector<T>(cols, T(0))), rhs_(rows, T(0)), obj_(cols, T(0)),
        obj_value_(0), basis_(rows) {}

  T& at(std::size_t i, std::size_t j) { return a_[i][j]; }
  T& rhs(std::size_t i) { return rhs_[i]; }
  T& obj(std::size_t j) { return obj_[j]; }
  T& obj_value() { return obj_value_; }
  std::size_t& basis(std::size_t i) { return basis_[i]; }

  void pivot(std::size_t r, std::size_t c) {
    T inv = T(1) / a_[r][c];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < n_; ++j) {
      if (a_[r][j] != 0) {
        a_[r][j] *= inv;
        nz.push_back(j);
      }
    }
    rhs_[r] *= inv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || a_[i][c] == 0) continue;
      T f = a_[i][c];
      for (std::size_t j : nz) a_[i][j] -= f * a_[r][j];
      a_[i][c] = 0;
      rhs_[i] -= f * rhs_[r];
    }
    if (obj_[c] != 0) {
      T f = obj_[c];
      for (std::size_t j : nz) obj_[j] -= f * a_[r][j];
      obj_[c] = 0;
      obj_value_ -= f * rhs_[r];
    }
    basis_[r] = c;
    ++pivots_;
  }

  /// Runs simplex iterations over the allowed columns. Returns false when
  /// the objective is unbounded below.
  bool optimize(const std::vector<bool>& allowed, const std::vector<bool>& live_row) {
    std::size_t degenerate_run = 0;
    for (;;) {
      bool bland = degenerate_run >= kDegenerateRunBeforeBland;
      std::size_t enter = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (!allowed[j] || !Signs::neg(obj_[j])) continue;
        if (enter == n_) {
          enter = j;
          if (bland) break;
        } else if (obj_[j] < obj_[enter]) {
          enter = j;
        }
      }
      if (enter == n_) return true;
      std::size_t leave = m_;
      T best(0);
      for (std::size_t i = 0; i < m_; ++i) {
        if (!live_row[i] || !Signs::pos(a_[i][enter])) continue;
        T ratio = rhs_[i] / a_[i][enter];
        if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      degenerate_run = Signs::zero(best) ? degenerate_run + 1 : 0;
      pivot(leave, enter);
    }
  }

  std::size_t pivots() const { return pivots_; }

 private:
  std::size_t m_, n_;
  std::vector<std::vector<T>> a_;
  std::vector<T> rhs_;
  std::vector<T> obj_;
  T obj_value_;  // negated objective value, tableau convention
  std::vector<std::size_t> basis_;
  std::size_t pivots_ = 0;
};

/// Constraint rows with nonnegative right-hand sides.
struct NormalizedRows {
  std::vector<std::vector<std::pair<std::size_t, Rational>>> rows;
  std::vector<Rational> rhs;
};

NormalizedRows normalize(const LinearProgram& lp) {
  NormalizedRows out{lp.rows, lp.rhs};
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    for (const auto& [j, v] : out.rows[i]) {
      (void)v;
      if (j >= lp.num_vars) throw Error("linear program: variable index out of range");
    }
    if (out.rhs[i] < 0) {
      out.rhs[i] = -out.rhs[i];
      for (auto& entry : out.rows[i]) entry.second = -entry.second;
    }
  }
  return out;
}

template <typename T>
T convert(const Rational& x) {
  if constexpr (std::is_same_v<T, Rational>) {
    return x;
  } else {
    return to_double(x);
  }
}

struct SimplexOutcome {
  LpStatus status = LpStatus::infeasible;
  /// Basic column per row; columns >= num_vars are artificials.
  std::vector<std::size_t> basis;
  std::vector<bool> live;
  std::size_t pivots = 0;
};

template <typename T, typename Signs>
SimplexOutcome run_simplex(const LinearProgram& lp, const NormalizedRows& rows,
                           std::vector<Rational>* exact_rhs) {
  const std::size_t m = rows.rows.size();
  const std::size_t n = lp.num_vars;
  Tableau<T, Signs> t(m, n + m);
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& [j, v] : rows.rows[i]) t.at(i, j) += convert<T>(v);
    t.rhs(i) = convert<T>(rows.rhs[i]);
    t.at(i, n + i) = T(1);
    t.basis(i) = n + i;
  }
  // Phase 1 objective: sum of artificials, priced out.
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (t.at(i, j) != 0) t.obj(j) -= t.at(i, j);
    }
    t.obj_value() -= t.rhs(i);
  }
  std::vector<bool> allowed(n + m, true);
  SimplexOutcome out;
  out.live.assign(m, true);
  t.optimize(allowed, out.live);
  if (!Signs::zero(t.obj_value())) {
    out.status = LpStatus::infeasible;
    out.pivots = t.pivots();
    return out;
  }
  // Drive zero-level artificials out of the basis; rows where that is
  // impossible are linearly dependent and are retired.
  for (std::size_t i = 0; i < m; ++i) {
    if (t.basis(i) < n) continue;
    std::size_t col = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (!Signs::zero(t.at(i, j))) {
        col = j;
        break;
      }
    }
    if (col == n) {
      out.live[i] = false;
    } else {
      t.pivot(i, col);
    }
  }
  for (std::size_t j = n; j < n + m; ++j) allowed[j] = false;

  // Phase 2 objective priced against the current basis.
  for (std::size_t j = 0; j < n + m; ++j) t.obj(j) = j < n ? convert<T>(lp.cost[j]) : T(0);
  t.obj_value() = T(0);
  for (std::size_t i = 0; i < m; ++i) {
    if (!out.live[i]) continue;
    std::size_t b = t.basis(i);
    if (b >= n || lp.cost[b] == 0) continue;
    T cb = convert<T>(lp.cost[b]);
    for (std::size_t j = 0; j < n; ++j) {
      if (t.at(i, j) != 0) t.obj(j) -= cb * t.at(i, j);
    }
    t.obj_value() -= cb * t.rhs(i);
  }
  bool bounded = t.optimize(allowed, out.live);
  out.pivots = t.pivots();
  out.status = bounded ? LpStatus::optimal : LpStatus::unbounded;
  for (std::size_t i = 0; i < m; ++i) out.basis.push_back(t.basis(i));
  if (exact_rhs) {
    if constexpr (std::is_same_v<T, Rational>) {
      exact_rhs->assign(m, Rational(0));
      for (std::size_t i = 0; i < m; ++i) (*exact_rhs)[i] = t.rhs(i);
    }
  }
  return out;
}

/// Solves M x = rhs exactly; nullopt when M is singular.
std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> a, std::vector<Rational> rhs) {
  const std::size_t m = a.size();
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t p = c;
    while (p < m && a[p][c] == 0) ++p;
    if (p == m) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(rhs[p], rhs[c]);
    std::vector<std::size_t> nz;
    for (std::size_t j = c; j < m; ++j) {
      if (a[c][j] != 0) nz.push_back(j);
    }
    for (std::size_t r = c + 1; r < m; ++r) {
      if (a[r][c] == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (std::size_t j : nz) a[r][j] -= f * a[c][j];
      rhs[r] -= f * rhs[c];
    }
  }
  std::vector<Rational> x(m);
  for (std::size_t i = m; i-- > 0;) {
    Rational s = rhs[i];
    for (std::size_t j = i + 1; j < m; ++j) {
      if (a[i][j] != 0) s -= a[i][j] * x[j];
    }
    x[i] = s / a[i][i];
  }
  return x;
}

/// Exact optimality certificate for a basis proposed by the floating
/// simplex: primal feasibility of B x_B = b and nonnegative reduced costs.
std::optional<std::vector<Rational>> certify_basis(const LinearProgram& lp, const NormalizedRows& rows,
                                                   const std::vector<std::size_t>& basis) {
  const std::size_t m = rows.rows.size();
  const std::size_t n = lp.num_vars;
  std::vector<std::vector<Rational>> dense(m, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& [j, v] : rows.rows[i]) dense[i][j] += v;
  }
  auto column = [&](std::size_t col, std::size_t row) -> Rational {
    if (col < n) return dense[row][col];
    return col - n == row ? Rational(1) : Rational(0);
  };
  std::vector<std::vector<Rational>> b(m, std::vector<Rational>(m));
  std::vector<std::vector<Rational>> bt(m, std::vector<Rational>(m));
  std::vector<Rational> cb(m, Rational(0));
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t row = 0; row < m; ++row) {
      b[row][k] = column(basis[k], row);
      bt[k][row] = b[row][k];
    }
    if (basis[k] < n) cb[k] = lp.cost[basis[k]];
  }
  auto xb = solve_square(b, rows.rhs);
  if (!xb) return std::nullopt;
  std::vector<Rational> x(n, Rational(0));
  std::vector<bool> is_basic(n, false);
  for (std::size_t k = 0; k < m; ++k) {
    if ((*xb)[k] < 0) return std::nullopt;
    if (basis[k] >= n) {
      if ((*xb)[k] != 0) return std::nullopt;
    } else {
      x[basis[k]] = (*xb)[k];
      is_basic[basis[k]] = true;
    }
  }
  auto pi = solve_square(bt, cb);
  if (!pi) return std::nullopt;
  for (std::size_t j = 0; j < n; ++j) {
    if (is_basic[j]) continue;
    Rational reduced = lp.cost[j];
    for (std::size_t i = 0; i < m; ++i) {
      if (dense[i][j] != 0) reduced -= (*pi)[i] * dense[i][j];
    }
    if (reduced < 0) return std::nullopt;
  }
  return x;
}

LpSolution finish(const LinearProgram& lp, std::vector<Rational> x, std::size_t pivots) {
  LpSolution out;
  out.status = LpStatus::optimal;
  out.x = std::move(x);
  out.pivots = pivots;
  for (std::size_t j = 0; j < lp.num_vars; ++j) out.objective += lp.cost[j] * out.x[j];
  return out;
}

}  // namespace

LpSolution solve_lp_exact(const LinearProgram& lp) {
  if (lp.rhs.size() != lp.rows.size()) throw Error("linear program: rhs size mismatch");
  if (lp.cost.size() != lp.num_vars) throw Error("linear program: cost size mismatch");
  auto rows = normalize(lp);
  std::vector<Rational> rhs;
  auto run = run_simplex<Rational, ExactSigns>(lp, rows, &rhs);
  if (run.status != LpStatus::optimal) {
    LpSolution out;
    out.status = run.status;
    out.pivots = run.pivots;
    return out;
  }
  std::vector<Rational> x(lp.num_vars, Rational(0));
  for (std::size_t i = 0; i < run.basis.size(); ++i) {
    if (run.live[i] && run.basis[i] < lp.num_vars) x[run.basis[i]] = rhs[i];
  }
  return finish(lp, std::move(x), run.pivots);
}

LpSolution solve_lp(const LinearProgram& lp) {
  if (lp.rhs.size() != lp.rows.size()) throw Error("linear program: rhs size mismatch");
  if (lp.cost.size() != lp.num_vars) throw Error("linear program: cost size mismatch");
  auto rows = normalize(lp);
  auto guess = run_simplex<double, FloatSigns>(lp, rows, nullptr);
  if (guess.status == LpStatus::optimal) {
    // Retired rows keep their artificial column, which certify_basis
    // requires to sit at level zero.
    for (std::size_t i = 0; i < guess.basis.size(); ++i) {
      if (!guess.live[i]) guess.basis[i] = lp.num_vars + i;
    }
    if (auto x = certify_basis(lp, rows, guess.basis)) return finish(lp, std::move(*x), guess.pivots);
  }
  return solve_lp_exact(lp);
}

}  // namespace covkit
