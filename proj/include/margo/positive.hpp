#pragma once

// The restricted marginal problem: joint measures between prescribed lower and
// upper bounds, decided exactly, with infeasibility reported as a violated
// instance of the dual inequality
//
//   sum_T \int g_T d nu_T  <=  \int (sum_T g~_T)^+ d upper - \int (sum_T g~_T)^- d lower.

#include "margo/measure.hpp"
#include "margo/signed.hpp"

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

namespace margo {

/// A rational-valued function on the atoms of a product space.
struct SpaceFunction {
  ProductSpace space;
  std::vector<Rational> values;

  static SpaceFunction zero(ProductSpace space);
  friend bool operator==(const SpaceFunction&, const SpaceFunction&) = default;
};

/// g~ = g o pi_T on the joint space.
SpaceFunction lift(const SpaceFunction& g, const ProductSpace& joint);

/// Test functions g_T, one per family member in member order.
struct DualCertificate {
  std::vector<SpaceFunction> functions;
  Rational lhs;
  Rational rhs;
};

struct CertificateSides {
  Rational lhs;
  /// Absent when the right-hand side is +infinity (positive mass of the
  /// combined function on an atom without an upper bound).
  std::optional<Rational> rhs;

  bool violated() const { return rhs && lhs > *rhs; }
};

/// Recomputes both sides from scratch. `upper` absent means no upper bound.
CertificateSides evaluate_certificate(const std::vector<SpaceFunction>& functions, const MarginalFamily& family,
                                      const Measure& lower, const std::optional<Measure>& upper);

/// True iff the certificate's test functions violate the dual inequality
/// (lhs > rhs), which proves that no bounded joint measure exists.
bool verify_certificate(const DualCertificate& cert, const MarginalFamily& family, const Measure& lower,
                        const std::optional<Measure>& upper);

struct Feasible {
  Measure measure;
};

struct Infeasible {
  DualCertificate certificate;
};

using Verdict = std::variant<Feasible, Infeasible>;

inline bool is_feasible(const Verdict& v) { return std::holds_alternative<Feasible>(v); }

/// Decides existence of nu with lower <= nu <= upper and every prescribed
/// marginal. Throws DomainError when lower exceeds upper on some atom.
Verdict solve_bounded(const MarginalFamily& family, const Measure& lower, const std::optional<Measure>& upper);

/// Positive joint measure with every prescribed marginal, or a certificate.
/// Pairwise inconsistency is reported without running the LP.
Verdict solve_positive(const MarginalFamily& family);

/// The detour through the signed solution: bounded solve with lower = 0 and
/// upper = variation of solve_signed(family).
Verdict solve_positive_via_variation(const MarginalFamily& family);

/// Certificate for a pair of members whose marginals disagree on their overlap.
DualCertificate certificate_from_violation(const MarginalFamily& family, const Violation& violation);

// ---------------------------------------------------------------- decomposable families

/// A permutation of the members such that each member meets the union of its
/// predecessors inside a single predecessor, recorded as `witness`.
struct EliminationOrder {
  std::vector<std::size_t> order;
  /// witness[k] is the member index of the predecessor containing the
  /// overlap of order[k]; absent for the first step.
  std::vector<std::optional<std::size_t>> witness;
};

/// Checks the running-intersection property step by step.
bool check_elimination_order(const std::vector<CoordSet>& family, const EliminationOrder& order);

/// Searches greedily, then exhaustively (memoised over placed subsets) for
/// families up to `exhaustive_cap` members.
std::optional<EliminationOrder> is_decomposable(const std::vector<CoordSet>& family,
                                                std::size_t exhaustive_cap = 20);

/// Conditional-product gluing along the order. The result is a positive joint
/// measure whose marginal on every member is the prescribed one.
Measure glue_decomposable(const MarginalFamily& family, const EliminationOrder& order);

}  // namespace margo
