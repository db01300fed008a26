#include "margo/positive.hpp"

#include "margo/error.hpp"
#include "margo/lp.hpp"

#include <algorithm>
#include <cstdint>

namespace margo {

SpaceFunction SpaceFunction::zero(ProductSpace space) {
  std::vector<Rational> values(space.size());
  return SpaceFunction{std::move(space), std::move(values)};
}

SpaceFunction lift(const SpaceFunction& g, const ProductSpace& joint) {
  CoordSet coords = g.space.coords();
  if (!(joint.restrict(coords) == g.space)) {
    throw CoordinateMismatch("lift: function space " + coords.str() + " is not a factor of the joint space");
  }
  auto proj = projection_map(joint, coords);
  SpaceFunction out = SpaceFunction::zero(joint);
  for (std::size_t b = 0; b < joint.size(); ++b) out.values[b] = g.values[proj[b]];
  return out;
}

namespace {

void require_joint(const MarginalFamily& family, const Measure& bound, const char* what) {
  if (!(bound.space() == family.index_set())) {
    throw CoordinateMismatch(std::string(what) + " bound does not live on the joint space " +
                             family.index_set().coords().str());
  }
}

bool matches_marginals(const MarginalFamily& family, const Measure& joint) {
  return std::all_of(family.members().begin(), family.members().end(),
                     [&](const Member& m) { return marginalize(joint, m.coords) == m.measure; });
}

// Clears denominators and common factors; the verdict is scale invariant.
std::vector<Rational> primitive(std::vector<Rational> y) {
  mpz_class den = 1;
  for (const auto& v : y) {
    if (sgn(v) != 0) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
  }
  mpz_class num = 0;
  for (auto& v : y) {
    v *= den;
    if (sgn(v) != 0) mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), v.get_num_mpz_t());
  }
  if (num > 1) {
    for (auto& v : y) v /= num;
  }
  return y;
}

}  // namespace

CertificateSides evaluate_certificate(const std::vector<SpaceFunction>& functions, const MarginalFamily& family,
                                      const Measure& lower, const std::optional<Measure>& upper) {
  if (functions.size() != family.size()) {
    throw CoordinateMismatch("certificate has " + std::to_string(functions.size()) + " functions for " +
                             std::to_string(family.size()) + " members");
  }
  require_joint(family, lower, "lower");
  if (upper) require_joint(family, *upper, "upper");
  const ProductSpace& joint = family.index_set();

  CertificateSides sides;
  std::vector<Rational> combined(joint.size());
  for (std::size_t t = 0; t < functions.size(); ++t) {
    const Member& member = family.member(t);
    const SpaceFunction& g = functions[t];
    if (!(g.space == member.measure.space()) || g.values.size() != member.measure.size()) {
      throw CoordinateMismatch("certificate function " + std::to_string(t) + " does not live on " +
                               member.coords.str());
    }
    for (std::size_t a = 0; a < g.values.size(); ++a) sides.lhs += g.values[a] * member.measure[a];
    SpaceFunction lifted = lift(g, joint);
    for (std::size_t b = 0; b < joint.size(); ++b) combined[b] += lifted.values[b];
  }

  Rational rhs;
  for (std::size_t b = 0; b < joint.size(); ++b) {
    const Rational& h = combined[b];
    if (sgn(h) > 0) {
      if (!upper) return sides;  // +infinity
      rhs += h * (*upper)[b];
    } else if (sgn(h) < 0) {
      rhs += h * lower[b];  // -(h^-) * lower
    }
  }
  sides.rhs = rhs;
  return sides;
}

bool verify_certificate(const DualCertificate& cert, const MarginalFamily& family, const Measure& lower,
                        const std::optional<Measure>& upper) {
  return evaluate_certificate(cert.functions, family, lower, upper).violated();
}

Verdict solve_bounded(const MarginalFamily& family, const Measure& lower, const std::optional<Measure>& upper) {
  require_joint(family, lower, "lower");
  if (upper) {
    require_joint(family, *upper, "upper");
    for (std::size_t b = 0; b < lower.size(); ++b) {
      if (lower[b] > (*upper)[b]) {
        throw DomainError("lower bound exceeds upper bound at atom \"" + family.index_set().label(b) + "\"");
      }
    }
  }
  const ProductSpace& joint = family.index_set();

  lp::Problem problem;
  problem.num_vars = joint.size();
  problem.lower = lower.weights();
  problem.upper.resize(joint.size());
  if (upper) {
    for (std::size_t b = 0; b < joint.size(); ++b) problem.upper[b] = (*upper)[b];
  }
  std::vector<std::size_t> first_row;
  for (const Member& m : family.members()) {
    first_row.push_back(problem.rows.size());
    auto proj = projection_map(joint, m.coords);
    std::vector<std::vector<lp::Term>> rows(m.measure.size());
    for (std::size_t b = 0; b < joint.size(); ++b) rows[proj[b]].push_back(lp::Term{b, Rational(1)});
    for (std::size_t a = 0; a < rows.size(); ++a) {
      problem.rows.push_back(std::move(rows[a]));
      problem.rhs.push_back(m.measure[a]);
    }
  }

  lp::Result result = lp::solve_feasibility(problem);
  if (result.feasible) {
    Measure nu(joint, std::move(result.x));
    for (std::size_t b = 0; b < joint.size(); ++b) {
      if (nu[b] < lower[b] || (upper && nu[b] > (*upper)[b])) {
        throw InvariantViolation("bounded solve returned a point outside the bounds");
      }
    }
    if (!matches_marginals(family, nu)) throw InvariantViolation("bounded solve returned wrong marginals");
    return Feasible{std::move(nu)};
  }

  std::vector<Rational> y = primitive(std::move(result.farkas));
  DualCertificate cert;
  for (std::size_t t = 0; t < family.size(); ++t) {
    SpaceFunction g = SpaceFunction::zero(family.member(t).measure.space());
    for (std::size_t a = 0; a < g.values.size(); ++a) g.values[a] = y[first_row[t] + a];
    cert.functions.push_back(std::move(g));
  }
  CertificateSides sides = evaluate_certificate(cert.functions, family, lower, upper);
  if (!sides.violated()) throw InvariantViolation("Farkas multipliers do not violate the dual inequality");
  cert.lhs = sides.lhs;
  cert.rhs = *sides.rhs;
  return Infeasible{std::move(cert)};
}

DualCertificate certificate_from_violation(const MarginalFamily& family, const Violation& violation) {
  DualCertificate cert;
  for (const Member& m : family.members()) cert.functions.push_back(SpaceFunction::zero(m.measure.space()));
  Rational sign = violation.first_mass > violation.second_mass ? 1 : -1;
  auto mark = [&](std::size_t member, const Rational& value) {
    const Member& m = family.member(member);
    auto proj = projection_map(m.measure.space(), violation.overlap);
    for (std::size_t a = 0; a < proj.size(); ++a) {
      if (proj[a] == violation.atom) cert.functions[member].values[a] = value;
    }
  };
  mark(violation.first, sign);
  mark(violation.second, -sign);
  cert.lhs = sign * (violation.first_mass - violation.second_mass);
  cert.rhs = 0;
  return cert;
}

Verdict solve_positive(const MarginalFamily& family) {
  auto violations = check_pairwise_consistency(family);
  if (!violations.empty()) return Infeasible{certificate_from_violation(family, violations.front())};
  return solve_bounded(family, Measure::zero(family.index_set()), std::nullopt);
}

Verdict solve_positive_via_variation(const MarginalFamily& family) {
  auto violations = check_pairwise_consistency(family);
  if (!violations.empty()) return Infeasible{certificate_from_violation(family, violations.front())};
  Measure upper = variation(solve_signed(family));
  return solve_bounded(family, Measure::zero(family.index_set()), upper);
}

// ---------------------------------------------------------------- decomposability

namespace {

CoordSet union_of(const std::vector<CoordSet>& family, const std::vector<std::size_t>& placed) {
  CoordSet out;
  for (std::size_t p : placed) out = unite(out, family[p]);
  return out;
}

std::optional<std::size_t> find_witness(const std::vector<CoordSet>& family, const std::vector<std::size_t>& placed,
                                        const CoordSet& placed_union, std::size_t candidate) {
  CoordSet overlap = intersect(family[candidate], placed_union);
  for (std::size_t p : placed) {
    if (overlap.is_subset_of(family[p])) return p;
  }
  return std::nullopt;
}

std::optional<EliminationOrder> greedy_order(const std::vector<CoordSet>& family) {
  const std::size_t m = family.size();
  EliminationOrder out;
  std::vector<bool> used(m, false);
  CoordSet placed_union;
  // start from a largest member, then always take the admissible member with
  // the largest overlap (lowest index on ties)
  std::size_t start = 0;
  for (std::size_t j = 1; j < m; ++j) {
    if (family[j].size() > family[start].size()) start = j;
  }
  if (m == 0) return out;
  out.order.push_back(start);
  out.witness.push_back(std::nullopt);
  used[start] = true;
  placed_union = family[start];
  while (out.order.size() < m) {
    std::optional<std::size_t> pick;
    std::size_t pick_witness = 0;
    std::size_t best_overlap = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j]) continue;
      auto w = find_witness(family, out.order, placed_union, j);
      if (!w) continue;
      std::size_t overlap = intersect(family[j], placed_union).size();
      if (!pick || overlap > best_overlap) {
        pick = j;
        pick_witness = *w;
        best_overlap = overlap;
      }
    }
    if (!pick) return std::nullopt;
    out.order.push_back(*pick);
    out.witness.push_back(pick_witness);
    used[*pick] = true;
    placed_union = unite(placed_union, family[*pick]);
  }
  return out;
}

class ExhaustiveSearch {
 public:
  explicit ExhaustiveSearch(const std::vector<CoordSet>& family)
      : family_(family), dead_(std::size_t{1} << family.size(), false) {}

  std::optional<EliminationOrder> run() {
    if (search(0)) return result_;
    return std::nullopt;
  }

 private:
  bool search(std::uint32_t mask) {
    const std::size_t m = family_.size();
    if (result_.order.size() == m) return true;
    if (dead_[mask]) return false;
    CoordSet placed_union = union_of(family_, result_.order);
    for (std::size_t j = 0; j < m; ++j) {
      if (mask & (std::uint32_t{1} << j)) continue;
      std::optional<std::size_t> w;
      if (!result_.order.empty()) {
        w = find_witness(family_, result_.order, placed_union, j);
        if (!w) continue;
      }
      result_.order.push_back(j);
      result_.witness.push_back(w);
      if (search(mask | (std::uint32_t{1} << j))) return true;
      result_.order.pop_back();
      result_.witness.pop_back();
    }
    dead_[mask] = true;
    return false;
  }

  const std::vector<CoordSet>& family_;
  std::vector<bool> dead_;
  EliminationOrder result_;
};

}  // namespace

bool check_elimination_order(const std::vector<CoordSet>& family, const EliminationOrder& order) {
  const std::size_t m = family.size();
  if (order.order.size() != m || order.witness.size() != m) return false;
  std::vector<bool> seen(m, false);
  CoordSet placed_union;
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t j = order.order[k];
    if (j >= m || seen[j]) return false;
    if (k > 0) {
      if (!order.witness[k]) return false;
      std::size_t w = *order.witness[k];
      if (w >= m || !seen[w]) return false;
      if (!intersect(family[j], placed_union).is_subset_of(family[w])) return false;
    }
    seen[j] = true;
    placed_union = unite(placed_union, family[j]);
  }
  return true;
}

std::optional<EliminationOrder> is_decomposable(const std::vector<CoordSet>& family, std::size_t exhaustive_cap) {
  if (auto order = greedy_order(family)) return order;
  if (family.size() > exhaustive_cap || family.size() > 30) return std::nullopt;
  return ExhaustiveSearch(family).run();
}

Measure glue_decomposable(const MarginalFamily& family, const EliminationOrder& order) {
  if (!check_elimination_order(family.coord_sets(), order)) {
    throw OrderError("order does not have the running-intersection property for this family");
  }
  for (const Member& m : family.members()) {
    if (!m.measure.is_positive()) throw DomainError("member " + m.coords.str() + " is not a positive measure");
  }
  auto violations = check_pairwise_consistency(family);
  if (!violations.empty()) {
    throw ConsistencyError("gluing needs a pairwise consistent family", std::move(violations));
  }
  const ProductSpace& joint = family.index_set();

  Measure current(ProductSpace(), {Rational(1)});
  bool started = false;
  for (std::size_t k : order.order) {
    const Member& next = family.member(k);
    if (!started) {
      current = next.measure;
      started = true;
      continue;
    }
    CoordSet have = current.space().coords();
    CoordSet overlap = intersect(next.coords, have);
    Measure overlap_mass = marginalize(next.measure, overlap);
    ProductSpace glued = joint.restrict(unite(have, next.coords));
    auto to_current = projection_map(glued, have);
    auto to_next = projection_map(glued, next.coords);
    auto to_overlap = projection_map(glued, overlap);
    std::vector<Rational> w(glued.size());
    for (std::size_t atom = 0; atom < glued.size(); ++atom) {
      const Rational& mass = overlap_mass[to_overlap[atom]];
      if (sgn(mass) == 0) continue;  // zero fiber: zero extension
      w[atom] = current[to_current[atom]] * next.measure[to_next[atom]] / mass;
    }
    current = Measure(std::move(glued), std::move(w));
  }
  for (Coord c : minus(joint.coords(), current.space().coords())) {
    current = tensor(current, Measure::uniform(ProductSpace::single(c, joint.space(c))));
  }
  if (!(current.space() == joint) || !matches_marginals(family, current)) {
    throw InvariantViolation("gluing produced a measure with the wrong marginals");
  }
  return current;
}

}  // namespace margo
