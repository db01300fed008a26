#pragma once

// Exact rational linear feasibility:
//
//   find x  with  A x = b,  lower <= x <= upper   (upper may be absent per variable)
//
// decided by a phase-one tableau simplex under Bland's rule. On infeasibility
// the kernel returns a Farkas multiplier y (one entry per equality row) with
//
//   y.b  >  sum_j h_j^+ upper_j - h_j^- lower_j,   h = A^T y,
//
// and h_j <= 0 for every variable without an upper bound.

#include "margo/rational.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace margo::lp {

struct Term {
  std::size_t var;
  Rational coef;
};

struct Problem {
  std::size_t num_vars = 0;
  std::vector<std::vector<Term>> rows;
  std::vector<Rational> rhs;
  std::vector<Rational> lower;
  std::vector<std::optional<Rational>> upper;
};

struct Result {
  bool feasible = false;
  /// A feasible point when feasible.
  std::vector<Rational> x;
  /// Farkas multipliers per equality row when infeasible.
  std::vector<Rational> farkas;
  std::size_t pivots = 0;
};

/// Requires lower <= upper wherever upper is present.
Result solve_feasibility(const Problem& problem);

}  // namespace margo::lp
