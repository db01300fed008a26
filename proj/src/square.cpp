#include "margo/square.hpp"

#include "margo/error.hpp"

namespace margo {

namespace {

// T restricted to supp(x_i*) x supp(x0*), between the two quotients.
LatticeMap induced(const LatticeMap& t, const KakutaniQuotient& from, const KakutaniQuotient& to) {
  RationalMatrix m(to.support.size(), from.support.size());
  for (std::size_t r = 0; r < to.support.size(); ++r) {
    for (std::size_t c = 0; c < from.support.size(); ++c) m.at(r, c) = t.matrix().at(to.support[r], from.support[c]);
  }
  LatticeMap out(from.space, to.space, std::move(m));
  if (auto check = is_isometric_embedding(out); !check) {
    throw InvariantViolation("induced map between quotients is not isometric: " + check.reason);
  }
  return out;
}

}  // namespace

SquareClosure close_square(const LatticeMap& t1, const LatticeMap& t2, const Vector& x1) {
  if (!(t1.source() == t2.source())) throw CoordinateMismatch("T1 and T2 must share their source lattice");
  if (Rational n = operator_norm(t1); n > 1) throw PreconditionError("||T1|| = " + to_string(n) + " exceeds 1");
  if (auto check = is_isometric_embedding(t2); !check) {
    throw PreconditionError("T2 is not an isometric lattice embedding: " + check.reason);
  }

  NormingFunctional norming = norming_functional(t1.target(), x1);
  PositiveFunctional f1 = norming.functional;
  PositiveFunctional f0 = pull_back(f1, t1);
  PositiveFunctional f2 = extend_positive_functional(f0, t2);

  KakutaniQuotient q0 = kakutani_quotient(t1.source(), f0);
  KakutaniQuotient q1 = kakutani_quotient(t1.target(), f1);
  KakutaniQuotient q2 = kakutani_quotient(t2.target(), f2);
  bool degenerate = q0.space.dim() == 0;

  L1AmalgamResult amalgam = amalgamate_l1(induced(t1, q0, q1), induced(t2, q0, q2));
  LatticeMap s1 = compose(amalgam.v1, q1.psi);
  LatticeMap s2 = compose(amalgam.v2, q2.psi);

  if (!(s1.matrix() * t1.matrix() == s2.matrix() * t2.matrix())) {
    throw InvariantViolation("closed square does not commute");
  }
  if (operator_norm(s1) > 1 || operator_norm(s2) > 1) throw InvariantViolation("closing map has norm above 1");
  if (norm(s1.target(), s1(x1)) != 1) throw InvariantViolation("closing map does not preserve the witness norm");

  AtomicL1 target = amalgam.target;
  return SquareClosure{std::move(target), std::move(s1), std::move(s2), std::move(f0), std::move(f1), std::move(f2),
                       degenerate, std::move(amalgam)};
}

}  // namespace margo
