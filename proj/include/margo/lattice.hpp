#pragma once

// Atomic L1 Banach lattices L1(nu) over finitely many atoms, lattice
// homomorphisms between them as nonnegative matrices, and positive
// functionals in density form.

#include "margo/measure.hpp"
#include "margo/rational.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace margo {

using Vector = std::vector<Rational>;

/// Dense row-major rational matrix.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Vector apply(const Vector& x) const;

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// L1(nu) on labeled atoms with strictly positive weights; ||x|| = sum nu(a)|x_a|.
class AtomicL1 {
 public:
  AtomicL1() = default;
  /// Zero-weight atoms are dropped; negative weights throw DomainError.
  AtomicL1(std::vector<std::string> atoms, std::vector<Rational> weights, std::string name = {});
  static AtomicL1 from_measure(const Measure& measure, std::string name = {});

  const std::string& name() const { return atoms_.name(); }
  const FiniteSpace& atoms() const { return atoms_; }
  const std::vector<Rational>& weights() const { return weights_; }
  std::size_t dim() const { return weights_.size(); }
  Rational total_mass() const;
  /// The weights as a measure on the atom space.
  Measure measure(Coord coord = 0) const;

  friend bool operator==(const AtomicL1& a, const AtomicL1& b) {
    return a.atoms_ == b.atoms_ && a.weights_ == b.weights_;
  }

 private:
  FiniteSpace atoms_;
  std::vector<Rational> weights_;
};

Vector join(const Vector& x, const Vector& y);
Vector meet(const Vector& x, const Vector& y);
Vector abs(const Vector& x);
Rational norm(const AtomicL1& space, const Vector& x);
/// \int x d nu.
Rational integral(const AtomicL1& space, const Vector& x);

struct MapCheck {
  bool ok = true;
  std::optional<std::size_t> row;
  std::optional<std::size_t> column;
  std::string reason;

  explicit operator bool() const { return ok; }
};

/// Nonnegative entries and at most one nonzero entry per row.
MapCheck is_lattice_homomorphism(const RationalMatrix& matrix);

/// A matrix of lattice-homomorphism shape between two atomic L1 spaces.
class LatticeMap {
 public:
  LatticeMap(AtomicL1 source, AtomicL1 target, RationalMatrix matrix);
  static LatticeMap identity(const AtomicL1& space);

  const AtomicL1& source() const { return source_; }
  const AtomicL1& target() const { return target_; }
  const RationalMatrix& matrix() const { return matrix_; }
  Vector operator()(const Vector& x) const { return matrix_.apply(x); }

 private:
  AtomicL1 source_;
  AtomicL1 target_;
  RationalMatrix matrix_;
};

/// g o f.
LatticeMap compose(const LatticeMap& g, const LatticeMap& f);

/// Homomorphism whose weighted column sums reproduce the source weights and
/// that has no zero column.
MapCheck is_isometric_embedding(const LatticeMap& map);

/// max over source atoms a of sum_b w_target(b) |M[b,a]| / w_source(a).
Rational operator_norm(const LatticeMap& map);

/// x*(z) = sum_a coeffs(a) nu(a) z_a with coeffs >= 0.
class PositiveFunctional {
 public:
  PositiveFunctional(AtomicL1 space, Vector coeffs);

  const AtomicL1& space() const { return space_; }
  const Vector& coeffs() const { return coeffs_; }
  Rational operator()(const Vector& z) const;
  /// The largest coefficient.
  Rational norm() const;

  friend bool operator==(const PositiveFunctional& a, const PositiveFunctional& b) {
    return a.space_ == b.space_ && a.coeffs_ == b.coeffs_;
  }

 private:
  AtomicL1 space_;
  Vector coeffs_;
};

/// L1(nu_{x*}) for the seminorm z -> x*(|z|) and the canonical homomorphism
/// psi onto it. The quotient lives on supp(coeffs) with weights coeffs * nu.
struct KakutaniQuotient {
  AtomicL1 space;
  LatticeMap psi;
  std::vector<std::size_t> support;
};

KakutaniQuotient kakutani_quotient(const AtomicL1& space, const PositiveFunctional& functional);

/// A norm-one positive functional attaining the norm of x, together with the
/// probability measure nu_{x*}(a) = x_a nu(a) on supp(x) and the map
/// psi_{x*}(z) = (z / x) restricted to supp(x).
struct NormingFunctional {
  PositiveFunctional functional;
  AtomicL1 probability;
  LatticeMap psi;
};

/// Requires x >= 0 with ||x|| = 1 (PreconditionError otherwise).
NormingFunctional norming_functional(const AtomicL1& space, const Vector& x);

/// Extension of x0* along an isometric lattice embedding U with x2* o U = x0*
/// and equal norms.
PositiveFunctional extend_positive_functional(const PositiveFunctional& functional, const LatticeMap& embedding);

/// x* o T.
PositiveFunctional pull_back(const PositiveFunctional& functional, const LatticeMap& map);

}  // namespace margo
