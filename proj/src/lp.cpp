#include "margo/lp.hpp"

#include "margo/error.hpp"

#include <string>

namespace margo::lp {

namespace {

// Dense phase-one tableau. Columns are laid out as
//   [0, n)        shifted structural variables x' = x - lower
//   [n, n+k)      slacks of the box rows x'_j + s_j = upper_j - lower_j
//   [n+k, n+k+m)  artificials of the equality rows
class Tableau {
 public:
  explicit Tableau(const Problem& p) : n_(p.num_vars), m_(p.rows.size()) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (p.upper[j]) bounded_.push_back(j);
    }
    k_ = bounded_.size();
    width_ = n_ + k_ + m_;
    rows_.assign(m_ + k_, std::vector<Rational>(width_));
    rhs_.assign(m_ + k_, Rational(0));
    basis_.assign(m_ + k_, 0);
    sign_.assign(m_, 1);
    cost_.assign(width_, Rational(0));

    for (std::size_t i = 0; i < m_; ++i) {
      Rational b = p.rhs[i];
      for (const Term& t : p.rows[i]) {
        rows_[i][t.var] += t.coef;
        b -= t.coef * p.lower[t.var];
      }
      if (b < 0) {
        sign_[i] = -1;
        b = -b;
        for (std::size_t j = 0; j < n_; ++j) rows_[i][j] = -rows_[i][j];
      }
      rhs_[i] = b;
      rows_[i][n_ + k_ + i] = 1;
      basis_[i] = n_ + k_ + i;
    }
    for (std::size_t r = 0; r < k_; ++r) {
      std::size_t j = bounded_[r];
      Rational span = *p.upper[j] - p.lower[j];
      if (span < 0) throw DomainError("lp: lower bound exceeds upper bound for variable " + std::to_string(j));
      rows_[m_ + r][j] = 1;
      rows_[m_ + r][n_ + r] = 1;
      rhs_[m_ + r] = span;
      basis_[m_ + r] = n_ + r;
    }
    // reduced costs of the phase-one objective (sum of artificials)
    for (std::size_t col = 0; col < width_; ++col) {
      Rational r = col >= n_ + k_ ? Rational(1) : Rational(0);
      for (std::size_t i = 0; i < m_; ++i) r -= rows_[i][col];
      cost_[col] = r;
    }
    for (std::size_t i = 0; i < m_; ++i) objective_ += rhs_[i];
  }

  // Bland's rule: lowest-index improving column, ties in the ratio test go to
  // the lowest-index basic variable.
  std::size_t run() {
    std::size_t pivots = 0;
    while (sgn(objective_) > 0) {
      std::size_t entering = width_;
      for (std::size_t col = 0; col < width_; ++col) {
        if (sgn(cost_[col]) < 0) {
          entering = col;
          break;
        }
      }
      if (entering == width_) break;

      std::size_t leaving = rows_.size();
      Rational best_ratio;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (sgn(rows_[i][entering]) <= 0) continue;
        Rational ratio = rhs_[i] / rows_[i][entering];
        if (leaving == rows_.size() || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leaving])) {
          leaving = i;
          best_ratio = ratio;
        }
      }
      if (leaving == rows_.size()) throw InvariantViolation("lp: phase-one objective unbounded");
      pivot(leaving, entering);
      ++pivots;
    }
    return pivots;
  }

  bool feasible() const {
    Rational residual;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (basis_[i] >= n_ + k_) residual += rhs_[i];
    }
    if (residual != objective_) throw InvariantViolation("lp: tracked objective drifted from the basis");
    return sgn(residual) == 0;
  }

  std::vector<Rational> point(const Problem& p) const {
    std::vector<Rational> x(p.lower);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (basis_[i] < n_) x[basis_[i]] += rhs_[i];
    }
    return x;
  }

  // The artificial column of row i starts as e_i with cost 1, so its reduced
  // cost is 1 - pi_i.
  std::vector<Rational> farkas() const {
    std::vector<Rational> y(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      Rational pi = 1 - cost_[n_ + k_ + i];
      y[i] = sign_[i] > 0 ? pi : Rational(-pi);
    }
    return y;
  }

 private:
  void pivot(std::size_t row, std::size_t col) {
    std::vector<Rational>& prow = rows_[row];
    Rational piv = prow[col];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < width_; ++j) {
      if (sgn(prow[j]) != 0) {
        prow[j] /= piv;
        nz.push_back(j);
      }
    }
    rhs_[row] /= piv;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i == row || sgn(rows_[i][col]) == 0) continue;
      Rational f = rows_[i][col];
      for (std::size_t j : nz) rows_[i][j] -= f * prow[j];
      rhs_[i] -= f * rhs_[row];
    }
    if (sgn(cost_[col]) != 0) {
      Rational f = cost_[col];
      for (std::size_t j : nz) cost_[j] -= f * prow[j];
      objective_ += f * rhs_[row];
    }
    basis_[row] = col;
  }

  std::size_t n_;
  std::size_t m_;
  std::size_t k_ = 0;
  std::size_t width_ = 0;
  std::vector<std::size_t> bounded_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> rhs_;
  std::vector<std::size_t> basis_;
  std::vector<int> sign_;
  std::vector<Rational> cost_;
  Rational objective_;
};

}  // namespace

Result solve_feasibility(const Problem& problem) {
  if (problem.rhs.size() != problem.rows.size() || problem.lower.size() != problem.num_vars ||
      problem.upper.size() != problem.num_vars) {
    throw DomainError("lp: inconsistent problem dimensions");
  }
  for (const auto& row : problem.rows) {
    for (const Term& t : row) {
      if (t.var >= problem.num_vars) throw DomainError("lp: term refers to an unknown variable");
    }
  }
  Tableau tableau(problem);
  Result result;
  result.pivots = tableau.run();
  result.feasible = tableau.feasible();
  if (result.feasible) {
    result.x = tableau.point(problem);
  } else {
    result.farkas = tableau.farkas();
  }
  return result;
}

}  // namespace margo::lp
