#pragma once

// Closing a square T1: X0 -> X1, T2: X0 -> X2 of atomic L1 lattices through
// Kakutani quotients and the L1 amalgam, keeping the norm of a witness.

#include "margo/amalgam.hpp"
#include "margo/lattice.hpp"

namespace margo {

struct SquareClosure {
  AtomicL1 target;
  LatticeMap s1;
  LatticeMap s2;
  PositiveFunctional x0;
  PositiveFunctional x1;
  PositiveFunctional x2;
  /// x0* = 0: the quotient of X0 is empty and the amalgam is a plain direct sum.
  bool degenerate = false;
  L1AmalgamResult amalgam;
};

/// Requires ||T1|| <= 1, T2 an isometric embedding and x1 >= 0 with ||x1|| = 1.
/// Guarantees S1 T1 = S2 T2, ||S1||, ||S2|| <= 1 and ||S1 x1|| = 1.
SquareClosure close_square(const LatticeMap& t1, const LatticeMap& t2, const Vector& x1);

}  // namespace margo
