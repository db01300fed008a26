#pragma once

// Seeded random instances for property tests and the `generate` subcommand.
// Draws use raw mt19937_64 output so a seed means the same instance on every
// standard library.

#include "margo/lattice.hpp"
#include "margo/measure.hpp"
#include "margo/signed.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace margo::gen {

using Rng = std::mt19937_64;

/// Uniform integer in [lo, hi].
long long uniform(Rng& rng, long long lo, long long hi);
/// p/q with p in [lo, hi] and q in [1, max_den].
Rational rational(Rng& rng, long long lo, long long hi, long long max_den = 4);

/// Index set {0..k-1} with 1..max_atoms atoms per coordinate, labeled "0", "1", ...
ProductSpace random_joint(Rng& rng, int coords, int max_atoms, std::size_t max_size = 0);
Measure random_signed_measure(Rng& rng, const ProductSpace& space);
/// Nonnegative weights; roughly one atom in `zero_odds` gets 0.
Measure random_positive_measure(Rng& rng, const ProductSpace& space, int zero_odds = 4);

/// The family of marginals of `master` on the given coordinate sets.
MarginalFamily marginals_of(const Measure& master, const std::vector<CoordSet>& sets);

/// Distinct nonempty coordinate sets, at most `max_members`.
std::vector<CoordSet> random_sets(Rng& rng, const CoordSet& coords, std::size_t max_members);

/// Pairwise-consistent family: marginals of a random signed master
/// (|I| <= 4, <= 4 atoms per coordinate, <= 5 members).
MarginalFamily consistent_signed_family(Rng& rng);

/// Positive-mass family over a joint space of at most `max_joint` atoms. A mix
/// of marginals of a positive master (feasible), marginals of a signed master
/// that happen to be positive, three binary pair marginals with random
/// disagreement rates (consistent, often infeasible), and independently drawn
/// members (usually inconsistent).
MarginalFamily random_positive_family(Rng& rng, std::size_t max_joint = 12);

/// Each member is a fresh-coordinate extension of a subset of an earlier one,
/// then the members are shuffled. Marginals of a random positive master.
MarginalFamily decomposable_family(Rng& rng);

/// Three binary coordinates, pairs {0,1}, {1,2}, {0,2}, each 1/2 on (0,1) and (1,0).
MarginalFamily anticorrelated_family();

/// Mutually independent draws of each member with equal total mass.
MarginalFamily inconsistent_family(Rng& rng);

struct Cospan {
  Measure nu0, nu1, nu2;
  AtomMap f1, f2;
};

/// nu0 on <= 3 atoms; X1, X2 split the atoms of X0 into fibers carrying the
/// same mass, <= 6 atoms each.
Cospan random_cospan(Rng& rng);

/// Random positive weights on 1..max_atoms atoms labeled prefix + index.
AtomicL1 random_lattice(Rng& rng, std::size_t max_atoms, const std::string& prefix);

/// Splits every atom of `source` into weighted pieces, adds unused atoms,
/// then relabels by a random permutation. At most `max_atoms` target atoms.
LatticeMap random_embedding(Rng& rng, const AtomicL1& source, std::size_t max_atoms, const std::string& prefix);

/// Random homomorphism source -> target scaled to operator norm <= 1.
LatticeMap random_contraction(Rng& rng, const AtomicL1& source, const AtomicL1& target);

/// Nonnegative vector with norm one.
Vector random_witness(Rng& rng, const AtomicL1& space);

struct SquareInstance {
  LatticeMap t1, t2;
  Vector x1;
};

SquareInstance random_square(Rng& rng);

}  // namespace margo::gen
