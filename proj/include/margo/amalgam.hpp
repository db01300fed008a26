#pragma once

// Back-amalgamation of measure-preserving maps and amalgamation of atomic L1
// lattices along isometric lattice embeddings.

#include "margo/lattice.hpp"
#include "margo/measure.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace margo {

/// A coupling space over a cospan f1: X1 -> X0 <- X2: f2.
struct AmalgamResult {
  /// Triples (x0, x1, x2) with x0 = f1(x1) = f2(x2), labeled "x0|x1|x2".
  FiniteSpace space3;
  Measure nu3;
  /// Projections onto the second and third entries.
  AtomMap g1;
  AtomMap g2;
  /// The glued measure on X0 x X1 x X2 (coordinates 0, 1, 2).
  Measure full_joint;
};

/// Requires f1, f2 measure-preserving and all measures positive.
AmalgamResult amalgamate_maps(const Measure& nu0, const Measure& nu1, const Measure& nu2, const AtomMap& f1,
                              const AtomMap& f2);

/// For a unital measure-preserving lattice embedding u = (h -> h o f), the
/// atom map f from target atoms to source atoms.
AtomMap extract_iwanik_map(const LatticeMap& u);

struct Block {
  std::string name;
  std::size_t offset = 0;
  std::size_t size = 0;
};

struct L1AmalgamResult {
  AtomicL1 target;
  LatticeMap v1;
  LatticeMap v2;
  /// "glued", "left" (X1 outside supp u1(1)), "right" (X2 outside supp u2(1)).
  std::vector<Block> blocks;
  /// The measure-space amalgam behind the glued block, for audit.
  AmalgamResult glue;
  /// Factor applied to every measure so that nu0 is a probability; undone in `target`.
  Rational scale;
};

/// Requires u1, u2 isometric lattice embeddings out of the same lattice.
L1AmalgamResult amalgamate_l1(const LatticeMap& u1, const LatticeMap& u2);

}  // namespace margo
