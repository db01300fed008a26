#include "margo/oracle.hpp"

#include "margo/error.hpp"

#include <algorithm>
#include <numeric>

namespace margo::oracle {

namespace {

using Matrix = std::vector<std::vector<Rational>>;

// Row-reduces [M | d] in place; returns the rank of M, or nullopt when the
// system is inconsistent. Afterwards the first `rank` rows are independent.
std::optional<std::size_t> reduce(Matrix& m, std::vector<Rational>& d) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && sgn(m[p][c]) == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[rank]);
    std::swap(d[p], d[rank]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || sgn(m[r][c]) == 0) continue;
      Rational f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
      d[r] -= f * d[rank];
    }
    ++rank;
  }
  for (std::size_t r = rank; r < rows; ++r) {
    if (sgn(d[r]) != 0) return std::nullopt;
  }
  return rank;
}

// Solves the square system on the chosen columns; nullopt when singular.
std::optional<std::vector<Rational>> solve_square(const Matrix& m, const std::vector<Rational>& d,
                                                  const std::vector<std::size_t>& columns) {
  const std::size_t n = columns.size();
  Matrix a(n, std::vector<Rational>(n + 1));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) a[r][k] = m[r][columns[k]];
    a[r][n] = d[r];
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(a[p][c]) == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(a[p], a[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || sgn(a[r][c]) == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k <= n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t r = 0; r < n; ++r) x[r] = a[r][n] / a[r][r];
  return x;
}

}  // namespace

bool nonnegative_feasible(const Matrix& matrix, const std::vector<Rational>& rhs) {
  Matrix m = matrix;
  std::vector<Rational> d = rhs;
  auto rank = reduce(m, d);
  if (!rank) return false;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  if (*rank == 0) return true;  // d = 0 after reduction, z = 0 works
  m.resize(*rank);
  d.resize(*rank);

  // If some nonnegative solution exists, a basic one exists whose support
  // extends to a basis of the column space; try them all.
  std::vector<std::size_t> columns(*rank);
  std::iota(columns.begin(), columns.end(), 0);
  while (true) {
    if (auto x = solve_square(m, d, columns)) {
      if (std::all_of(x->begin(), x->end(), [](const Rational& v) { return sgn(v) >= 0; })) return true;
    }
    // next combination in lexicographic order
    std::size_t k = *rank;
    while (k > 0 && columns[k - 1] == cols - *rank + k - 1) --k;
    if (k == 0) return false;
    ++columns[k - 1];
    for (std::size_t j = k; j < *rank; ++j) columns[j] = columns[j - 1] + 1;
  }
}

namespace {

// Marginal constraint rows built directly from the projection definition.
void marginal_rows(const MarginalFamily& family, std::size_t width, Matrix& m, std::vector<Rational>& d) {
  const ProductSpace& joint = family.index_set();
  for (const Member& member : family.members()) {
    const ProductSpace& sub = member.measure.space();
    for (std::size_t a = 0; a < sub.size(); ++a) {
      std::vector<Rational> row(width);
      auto target = sub.decode(a);
      for (std::size_t b = 0; b < joint.size(); ++b) {
        auto full = joint.decode(b);
        bool hit = true;
        std::size_t pos = 0;
        for (std::size_t f = 0; f < joint.factors().size(); ++f) {
          if (!member.coords.contains(joint.factors()[f].first)) continue;
          if (full[f] != target[pos++]) {
            hit = false;
            break;
          }
        }
        if (hit) row[b] = 1;
      }
      m.push_back(std::move(row));
      d.push_back(member.measure[a]);
    }
  }
}

}  // namespace

bool positive_feasible(const MarginalFamily& family) {
  return bounded_feasible(family, Measure::zero(family.index_set()), std::nullopt);
}

std::size_t column_count(const MarginalFamily& family, const std::optional<Measure>& upper) {
  return family.index_set().size() * (upper ? 2 : 1);
}

bool bounded_feasible(const MarginalFamily& family, const Measure& lower, const std::optional<Measure>& upper) {
  const ProductSpace& joint = family.index_set();
  const std::size_t n = joint.size();
  const std::size_t width = column_count(family, upper);
  Matrix m;
  std::vector<Rational> d;
  // variables z = x - lower (and slacks upper - x when bounded above)
  marginal_rows(family, width, m, d);
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (std::size_t b = 0; b < n; ++b) d[r] -= m[r][b] * lower[b];
  }
  if (upper) {
    for (std::size_t b = 0; b < n; ++b) {
      std::vector<Rational> row(width);
      row[b] = 1;
      row[n + b] = 1;
      m.push_back(std::move(row));
      d.push_back((*upper)[b] - lower[b]);
      if (d.back() < 0) return false;
    }
  }
  if (m.empty()) return true;
  return nonnegative_feasible(m, d);
}

}  // namespace margo::oracle
