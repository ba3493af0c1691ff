#include "qecsense/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace qecsense::lp {

using linalg::RealMatrix;

namespace {

constexpr double kPivotTol = 1e-11;

class Tableau {
 public:
  // Columns: structural [0, n), artificial [n, n + m), rhs last.
  Tableau(const StandardForm& p, std::vector<double> row_sign)
      : m_(p.b.size()), n_(p.c.size()), t_(m_ + 1, n_ + m_ + 1), basis_(m_),
        row_sign_(std::move(row_sign)) {
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) t_(i, j) = row_sign_[i] * p.a(i, j);
      t_(i, n_ + i) = 1.0;
      t_(i, rhs()) = row_sign_[i] * p.b[i];
      basis_[i] = n_ + i;
    }
  }

  std::size_t rhs() const { return n_ + m_; }

  void set_costs(const std::vector<double>& cost) {
    cost_ = cost;
    const std::size_t obj = m_;
    for (std::size_t j = 0; j <= rhs(); ++j) t_(obj, j) = 0.0;
    for (std::size_t j = 0; j < n_ + m_; ++j) t_(obj, j) = -cost_[j];
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = cost_[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= rhs(); ++j) t_(obj, j) += cb * t_(i, j);
    }
    scale_ = 1.0;
    for (double c : cost_) scale_ = std::max(scale_, std::abs(c));
  }

  // Runs Bland's rule over the allowed columns until optimal.
  void optimize(std::size_t allowed_cols) {
    const double tol = 1e-12 * scale_;
    for (std::size_t iter = 0; iter < 100000; ++iter) {
      std::size_t enter = allowed_cols;
      for (std::size_t j = 0; j < allowed_cols; ++j) {
        if (t_(m_, j) < -tol) {
          enter = j;
          break;
        }
      }
      if (enter == allowed_cols) return;
      std::size_t leave = m_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double aij = t_(i, enter);
        if (aij <= kPivotTol) continue;
        const double ratio = t_(i, rhs()) / aij;
        if (ratio < best_ratio - 1e-14 ||
            (std::abs(ratio - best_ratio) <= 1e-14 && leave < m_ && basis_[i] < basis_[leave])) {
          best_ratio = ratio;
          leave = i;
        }
      }
      // Bounded feasible regions only; an unbounded ray is a construction bug.
      if (leave == m_) throw Error(ErrorKind::Infeasible, "linear program is unbounded");
      pivot(leave, enter);
    }
    throw Error(ErrorKind::Infeasible, "simplex iteration limit reached");
  }

  void pivot(std::size_t r, std::size_t col) {
    const double inv = 1.0 / t_(r, col);
    for (std::size_t j = 0; j <= rhs(); ++j) t_(r, j) *= inv;
    t_(r, col) = 1.0;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = t_(i, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= rhs(); ++j) t_(i, j) -= f * t_(r, j);
      t_(i, col) = 0.0;
    }
    basis_[r] = col;
  }

  // Moves zero-valued artificials out of the basis where a structural column
  // can replace them.
  void expel_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      std::size_t best = n_;
      double mag = kPivotTol;
      for (std::size_t j = 0; j < n_; ++j) {
        if (std::abs(t_(i, j)) > mag) {
          mag = std::abs(t_(i, j));
          best = j;
        }
      }
      if (best < n_) pivot(i, best);
    }
  }

  double objective() const { return t_(m_, rhs()); }

  std::vector<double> solution() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = std::max(0.0, t_(i, rhs()));
    return x;
  }

  // Artificial columns start as the identity, so their reduced costs under
  // zero artificial cost are exactly c_B B^{-1}.
  std::vector<double> duals() const {
    std::vector<double> y(m_);
    for (std::size_t i = 0; i < m_; ++i) y[i] = row_sign_[i] * (t_(m_, n_ + i) + cost_[n_ + i]);
    return y;
  }

 private:
  std::size_t m_;
  std::size_t n_;
  RealMatrix t_;
  std::vector<std::size_t> basis_;
  std::vector<double> row_sign_;
  std::vector<double> cost_;
  double scale_ = 1.0;
};

}  // namespace

SimplexResult simplex_maximize(const StandardForm& p) {
  const std::size_t m = p.b.size();
  const std::size_t n = p.c.size();
  if (p.a.rows() != m || p.a.cols() != n)
    throw Error(ErrorKind::DimensionMismatch, "standard form shape mismatch");

  std::vector<double> sign(m, 1.0);
  for (std::size_t i = 0; i < m; ++i)
    if (p.b[i] < 0.0) sign[i] = -1.0;
  Tableau tab(p, sign);

  std::vector<double> phase1(n + m, 0.0);
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = -1.0;
  tab.set_costs(phase1);
  tab.optimize(n + m);
  double bscale = 1.0;
  for (double v : p.b) bscale = std::max(bscale, std::abs(v));
  if (tab.objective() < -1e-9 * bscale)
    throw Error(ErrorKind::Infeasible, "equality constraints admit no nonnegative solution");
  tab.expel_artificials();

  std::vector<double> phase2(n + m, 0.0);
  std::copy(p.c.begin(), p.c.end(), phase2.begin());
  tab.set_costs(phase2);
  tab.optimize(n);

  SimplexResult out;
  out.x = tab.solution();
  out.value = std::inner_product(p.c.begin(), p.c.end(), out.x.begin(), 0.0);
  out.duals = tab.duals();
  return out;
}

namespace {

void check_dims(const std::vector<double>& objective, const std::vector<std::vector<double>>& rows) {
  if (objective.empty()) throw Error(ErrorKind::DimensionMismatch, "empty objective");
  for (const auto& r : rows)
    if (r.size() != objective.size())
      throw Error(ErrorKind::DimensionMismatch,
                  "constraint vector of length " + std::to_string(r.size()) +
                      " against objective of length " + std::to_string(objective.size()));
}

}  // namespace

LPSolution solve_l1(const L1BallProgram& program) {
  check_dims(program.objective, program.equality_rows);
  const auto& h = program.objective;
  const std::size_t d = h.size();
  const auto rows = linalg::orthonormalize<double>(program.equality_rows);
  const std::size_t r = rows.size();

  // Variables: beta+ (d), beta- (d), slack (1).
  StandardForm sf;
  sf.a = RealMatrix(1 + r, 2 * d + 1);
  sf.b.assign(1 + r, 0.0);
  sf.c.assign(2 * d + 1, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    sf.a(0, i) = 1.0;
    sf.a(0, d + i) = 1.0;
    sf.c[i] = h[i];
    sf.c[d + i] = -h[i];
  }
  sf.a(0, 2 * d) = 1.0;
  sf.b[0] = program.radius;
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      sf.a(1 + k, i) = rows[k][i];
      sf.a(1 + k, d + i) = -rows[k][i];
    }
  }

  const auto res = simplex_maximize(sf);
  LPSolution out;
  out.argmax.resize(d);
  for (std::size_t i = 0; i < d; ++i) out.argmax[i] = res.x[i] - res.x[d + i];
  out.objective_value = linalg::dot(out.argmax, h);

  std::vector<double> shifted = h;
  for (std::size_t k = 0; k < r; ++k)
    for (std::size_t i = 0; i < d; ++i) shifted[i] -= res.duals[1 + k] * rows[k][i];
  out.dual_value = program.radius * linalg::norm_inf(shifted);
  return out;
}

LPSolution solve_linf(const LInfBallProgram& program) {
  check_dims(program.objective, program.orthogonality_space);
  const auto& h = program.objective;
  const std::size_t d = h.size();
  const auto rows = linalg::orthonormalize<double>(program.orthogonality_space);
  const std::size_t r = rows.size();

  // Shifted variables x = b + 1 in [0, 2]: x (d), box slack (d).
  StandardForm sf;
  sf.a = RealMatrix(d + r, 2 * d);
  sf.b.assign(d + r, 0.0);
  sf.c.assign(2 * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    sf.a(i, i) = 1.0;
    sf.a(i, d + i) = 1.0;
    sf.b[i] = 2.0;
    sf.c[i] = h[i];
  }
  for (std::size_t k = 0; k < r; ++k) {
    double total = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      sf.a(d + k, i) = rows[k][i];
      total += rows[k][i];
    }
    sf.b[d + k] = total;
  }

  const auto res = simplex_maximize(sf);
  LPSolution out;
  out.argmax.resize(d);
  for (std::size_t i = 0; i < d; ++i) out.argmax[i] = std::clamp(res.x[i] - 1.0, -1.0, 1.0);
  out.objective_value = linalg::dot(out.argmax, h);

  std::vector<double> shifted = h;
  for (std::size_t k = 0; k < r; ++k)
    for (std::size_t i = 0; i < d; ++i) shifted[i] -= res.duals[d + k] * rows[k][i];
  out.dual_value = linalg::norm1(shifted);
  return out;
}

namespace {

// Row echelon reduction with partial pivoting; keeps a maximal independent
// subset of the rows (as reduced combinations).
std::vector<std::vector<double>> independent_rows(std::vector<std::vector<double>> rows) {
  if (rows.empty()) return rows;
  const std::size_t n = rows.front().size();
  double scale = 0.0;
  for (const auto& r : rows)
    for (double x : r) scale = std::max(scale, std::abs(x));
  const double tol = 1e-10 * std::max(scale, 1e-300);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    for (std::size_t i = rank + 1; i < rows.size(); ++i)
      if (std::abs(rows[i][col]) > std::abs(rows[piv][col])) piv = i;
    if (std::abs(rows[piv][col]) <= tol) continue;
    std::swap(rows[rank], rows[piv]);
    for (std::size_t i = rank + 1; i < rows.size(); ++i) {
      const double f = rows[i][col] / rows[rank][col];
      for (std::size_t j = 0; j < n; ++j) rows[i][j] -= f * rows[rank][j];
    }
    ++rank;
  }
  rows.resize(rank);
  return rows;
}

double enumerate_bases(const RealMatrix& a, const std::vector<double>& b,
                       const std::vector<double>& c) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick(m);
  std::iota(pick.begin(), pick.end(), 0);
  RealMatrix basis(m, m);
  while (true) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < m; ++k) basis(i, k) = a(i, pick[k]);
    if (auto xb = linalg::try_solve_linear<double>(basis, b)) {
      bool feasible = true;
      double value = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        if ((*xb)[k] < -1e-9) {
          feasible = false;
          break;
        }
        value += c[pick[k]] * (*xb)[k];
      }
      if (feasible) best = std::max(best, value);
    }
    // Next m-subset of {0..n-1} in lexicographic order.
    std::size_t i = m;
    while (i > 0 && pick[i - 1] == n - m + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t k = i; k < m; ++k) pick[k] = pick[k - 1] + 1;
  }
  if (!std::isfinite(best)) throw Error(ErrorKind::Infeasible, "no basic feasible solution");
  return best;
}

void check_size(std::size_t d, std::size_t rows) {
  if (d > 10 || rows > 10)
    throw Error(ErrorKind::TooLarge, "brute_force_lp limited to d <= 10 and <= 10 constraints");
}

}  // namespace

double brute_force_lp(const L1BallProgram& program) {
  check_dims(program.objective, program.equality_rows);
  const std::size_t d = program.objective.size();
  check_size(d, program.equality_rows.size());
  const auto rows = independent_rows(program.equality_rows);

  // Columns: positive parts, negative parts, slack on the norm row.
  RealMatrix a(1 + rows.size(), 2 * d + 1);
  std::vector<double> b(1 + rows.size(), 0.0);
  std::vector<double> c(2 * d + 1, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    a(0, i) = a(0, d + i) = 1.0;
    c[i] = program.objective[i];
    c[d + i] = -program.objective[i];
    for (std::size_t k = 0; k < rows.size(); ++k) {
      a(1 + k, i) = rows[k][i];
      a(1 + k, d + i) = -rows[k][i];
    }
  }
  a(0, 2 * d) = 1.0;
  b[0] = program.radius;
  return enumerate_bases(a, b, c);
}

double brute_force_lp(const LInfBallProgram& program) {
  check_dims(program.objective, program.orthogonality_space);
  const std::size_t d = program.objective.size();
  check_size(d, program.orthogonality_space.size());
  const auto rows = independent_rows(program.orthogonality_space);

  // b = p - q with p + q + slack = 1 would double the variables; use the
  // shift x = b + 1 in [0, 2] with explicit upper-bound slacks instead.
  RealMatrix a(d + rows.size(), 2 * d);
  std::vector<double> b(d + rows.size(), 0.0);
  std::vector<double> c(2 * d, 0.0);
  double offset = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    a(i, i) = a(i, d + i) = 1.0;
    b[i] = 2.0;
    c[i] = program.objective[i];
    offset += program.objective[i];
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      a(d + k, i) = rows[k][i];
      b[d + k] += rows[k][i];
    }
  }
  return enumerate_bases(a, b, c) - offset;
}

}  // namespace qecsense::lp
