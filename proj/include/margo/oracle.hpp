#pragma once

// Brute-force feasibility by vertex enumeration. Intended as an independent
// cross-check of the simplex kernel on small instances only.

#include "margo/positive.hpp"
#include "margo/rational.hpp"
#include "margo/signed.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace margo::oracle {

/// Decides whether { z >= 0 : M z = d } is nonempty by trying every basis of
/// the column space. Dense row-major M.
bool nonnegative_feasible(const std::vector<std::vector<Rational>>& matrix, const std::vector<Rational>& rhs);

/// Positive joint measure with the family's marginals exists.
bool positive_feasible(const MarginalFamily& family);

/// Joint measure between lower and upper with the family's marginals exists.
bool bounded_feasible(const MarginalFamily& family, const Measure& lower, const std::optional<Measure>& upper);

/// Number of LP columns the exhaustive search would see for these bounds.
std::size_t column_count(const MarginalFamily& family, const std::optional<Measure>& upper);

}  // namespace margo::oracle
