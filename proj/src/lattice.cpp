#include "margo/lattice.hpp"

#include "margo/error.hpp"

#include <algorithm>

namespace margo {

// ---------------------------------------------------------------- RationalMatrix

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out.at(i, i) = 1;
  return out;
}

Vector RationalMatrix::apply(const Vector& x) const {
  if (x.size() != cols_) throw CoordinateMismatch("matrix-vector dimension mismatch");
  Vector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (sgn(at(r, c)) != 0) out[r] += at(r, c) * x[c];
    }
  }
  return out;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols_ != b.rows_) throw CoordinateMismatch("matrix product dimension mismatch");
  RationalMatrix out(a.rows_, b.cols_);
  for (std::size_t r = 0; r < a.rows_; ++r) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rational& f = a.at(r, k);
      if (sgn(f) == 0) continue;
      for (std::size_t c = 0; c < b.cols_; ++c) out.at(r, c) += f * b.at(k, c);
    }
  }
  return out;
}

// ---------------------------------------------------------------- AtomicL1

AtomicL1::AtomicL1(std::vector<std::string> atoms, std::vector<Rational> weights, std::string name) {
  if (atoms.size() != weights.size()) throw CoordinateMismatch("lattice needs one weight per atom");
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (sgn(weights[i]) < 0) throw DomainError("negative weight on atom \"" + atoms[i] + "\"");
    if (sgn(weights[i]) == 0) continue;
    kept.push_back(std::move(atoms[i]));
    weights_.push_back(weights[i]);
  }
  atoms_ = FiniteSpace(std::move(name), std::move(kept));
}

AtomicL1 AtomicL1::from_measure(const Measure& measure, std::string name) {
  std::vector<std::string> labels;
  for (std::size_t a = 0; a < measure.size(); ++a) labels.push_back(measure.space().label(a));
  return AtomicL1(std::move(labels), measure.weights(), std::move(name));
}

Rational AtomicL1::total_mass() const {
  Rational total;
  for (const auto& w : weights_) total += w;
  return total;
}

Measure AtomicL1::measure(Coord coord) const { return Measure::on(atoms_, weights_, coord); }

// ---------------------------------------------------------------- lattice operations

namespace {

void same_dim(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw CoordinateMismatch("vectors of different dimension");
}

}  // namespace

Vector join(const Vector& x, const Vector& y) {
  same_dim(x, y);
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] < y[i] ? y[i] : x[i];
  return out;
}

Vector meet(const Vector& x, const Vector& y) {
  same_dim(x, y);
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] < y[i] ? x[i] : y[i];
  return out;
}

Vector abs(const Vector& x) {
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = abs(x[i]);
  return out;
}

Rational norm(const AtomicL1& space, const Vector& x) {
  if (x.size() != space.dim()) throw CoordinateMismatch("vector does not match the lattice dimension");
  Rational total;
  for (std::size_t i = 0; i < x.size(); ++i) total += space.weights()[i] * abs(x[i]);
  return total;
}

Rational integral(const AtomicL1& space, const Vector& x) {
  if (x.size() != space.dim()) throw CoordinateMismatch("vector does not match the lattice dimension");
  Rational total;
  for (std::size_t i = 0; i < x.size(); ++i) total += space.weights()[i] * x[i];
  return total;
}

// ---------------------------------------------------------------- maps

MapCheck is_lattice_homomorphism(const RationalMatrix& matrix) {
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    std::size_t nonzero = 0;
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      int s = sgn(matrix.at(r, c));
      if (s < 0) return MapCheck{false, r, c, "negative entry"};
      if (s > 0 && ++nonzero > 1) return MapCheck{false, r, c, "more than one nonzero entry in a row"};
    }
  }
  return {};
}

LatticeMap::LatticeMap(AtomicL1 source, AtomicL1 target, RationalMatrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != target_.dim() || matrix_.cols() != source_.dim()) {
    throw CoordinateMismatch("matrix is " + std::to_string(matrix_.rows()) + "x" + std::to_string(matrix_.cols()) +
                             ", expected " + std::to_string(target_.dim()) + "x" + std::to_string(source_.dim()));
  }
  if (auto check = is_lattice_homomorphism(matrix_); !check) {
    throw DomainError("not a lattice homomorphism: " + check.reason + " at row " + std::to_string(*check.row));
  }
}

LatticeMap LatticeMap::identity(const AtomicL1& space) {
  return LatticeMap(space, space, RationalMatrix::identity(space.dim()));
}

LatticeMap compose(const LatticeMap& g, const LatticeMap& f) {
  if (!(f.target() == g.source())) throw CoordinateMismatch("compose: target of f is not the source of g");
  return LatticeMap(f.source(), g.target(), g.matrix() * f.matrix());
}

MapCheck is_isometric_embedding(const LatticeMap& map) {
  if (auto check = is_lattice_homomorphism(map.matrix()); !check) return check;
  const auto& m = map.matrix();
  for (std::size_t a = 0; a < m.cols(); ++a) {
    Rational mass;
    bool nonzero = false;
    for (std::size_t b = 0; b < m.rows(); ++b) {
      if (sgn(m.at(b, a)) == 0) continue;
      nonzero = true;
      mass += map.target().weights()[b] * m.at(b, a);
    }
    if (!nonzero) return MapCheck{false, std::nullopt, a, "zero column"};
    if (mass != map.source().weights()[a]) return MapCheck{false, std::nullopt, a, "column mass differs from weight"};
  }
  return {};
}

Rational operator_norm(const LatticeMap& map) {
  const auto& m = map.matrix();
  Rational best;
  for (std::size_t a = 0; a < m.cols(); ++a) {
    Rational mass;
    for (std::size_t b = 0; b < m.rows(); ++b) mass += map.target().weights()[b] * abs(m.at(b, a));
    mass /= map.source().weights()[a];
    if (mass > best) best = mass;
  }
  return best;
}

// ---------------------------------------------------------------- functionals

PositiveFunctional::PositiveFunctional(AtomicL1 space, Vector coeffs)
    : space_(std::move(space)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != space_.dim()) throw CoordinateMismatch("functional needs one coefficient per atom");
  for (std::size_t a = 0; a < coeffs_.size(); ++a) {
    if (sgn(coeffs_[a]) < 0) throw DomainError("negative coefficient on atom \"" + space_.atoms().label(a) + "\"");
  }
}

Rational PositiveFunctional::operator()(const Vector& z) const {
  if (z.size() != coeffs_.size()) throw CoordinateMismatch("functional applied to a vector of the wrong dimension");
  Rational total;
  for (std::size_t a = 0; a < z.size(); ++a) total += coeffs_[a] * space_.weights()[a] * z[a];
  return total;
}

Rational PositiveFunctional::norm() const {
  Rational best;
  for (const auto& c : coeffs_) {
    if (c > best) best = c;
  }
  return best;
}

KakutaniQuotient kakutani_quotient(const AtomicL1& space, const PositiveFunctional& functional) {
  if (!(functional.space() == space)) throw CoordinateMismatch("functional does not act on this lattice");
  std::vector<std::size_t> support;
  std::vector<std::string> labels;
  std::vector<Rational> weights;
  for (std::size_t a = 0; a < space.dim(); ++a) {
    if (sgn(functional.coeffs()[a]) == 0) continue;
    support.push_back(a);
    labels.push_back(space.atoms().label(a));
    weights.push_back(functional.coeffs()[a] * space.weights()[a]);
  }
  AtomicL1 quotient(std::move(labels), std::move(weights), space.name() + "/x*");
  RationalMatrix psi(support.size(), space.dim());
  for (std::size_t k = 0; k < support.size(); ++k) psi.at(k, support[k]) = 1;
  return KakutaniQuotient{quotient, LatticeMap(space, quotient, std::move(psi)), std::move(support)};
}

NormingFunctional norming_functional(const AtomicL1& space, const Vector& x) {
  if (x.size() != space.dim()) throw PreconditionError("witness has the wrong dimension");
  for (const auto& v : x) {
    if (sgn(v) < 0) throw PreconditionError("norming_functional needs a positive vector");
  }
  if (norm(space, x) != 1) throw PreconditionError("norming_functional needs a vector of norm one");

  // y* = 1 on supp(x) norms x; psi_{y*}(x) is supported on A = supp(x), and
  // restricting to A gives x* with nu_{x*}(a) = x_a nu(a), a probability.
  Vector coeffs(space.dim());
  std::vector<std::size_t> support;
  std::vector<std::string> labels;
  std::vector<Rational> mass;
  for (std::size_t a = 0; a < space.dim(); ++a) {
    if (sgn(x[a]) == 0) continue;
    coeffs[a] = 1;
    support.push_back(a);
    labels.push_back(space.atoms().label(a));
    mass.push_back(x[a] * space.weights()[a]);
  }
  AtomicL1 probability(std::move(labels), std::move(mass), space.name() + "/x*");
  RationalMatrix psi(support.size(), space.dim());
  for (std::size_t k = 0; k < support.size(); ++k) psi.at(k, support[k]) = 1 / x[support[k]];
  PositiveFunctional functional(space, std::move(coeffs));
  if (functional(x) != 1 || functional.norm() != 1 || probability.total_mass() != 1) {
    throw InvariantViolation("norming functional does not norm the witness");
  }
  return NormingFunctional{std::move(functional), probability, LatticeMap(space, probability, std::move(psi))};
}

PositiveFunctional extend_positive_functional(const PositiveFunctional& functional, const LatticeMap& embedding) {
  if (!(functional.space() == embedding.source())) {
    throw CoordinateMismatch("functional does not act on the embedding's source");
  }
  if (auto check = is_isometric_embedding(embedding); !check) {
    throw PreconditionError("extension needs an isometric lattice embedding: " + check.reason);
  }
  const auto& m = embedding.matrix();
  Vector coeffs(embedding.target().dim());
  for (std::size_t b = 0; b < m.rows(); ++b) {
    for (std::size_t a = 0; a < m.cols(); ++a) {
      if (sgn(m.at(b, a)) != 0) coeffs[b] = functional.coeffs()[a];
    }
  }
  PositiveFunctional out(embedding.target(), std::move(coeffs));
  if (!(pull_back(out, embedding) == functional) || out.norm() != functional.norm()) {
    throw InvariantViolation("functional extension does not restrict to the original");
  }
  return out;
}

PositiveFunctional pull_back(const PositiveFunctional& functional, const LatticeMap& map) {
  if (!(functional.space() == map.target())) throw CoordinateMismatch("functional does not act on the map's target");
  const auto& m = map.matrix();
  Vector coeffs(m.cols());
  for (std::size_t a = 0; a < m.cols(); ++a) {
    Rational value;
    for (std::size_t b = 0; b < m.rows(); ++b) {
      if (sgn(m.at(b, a)) != 0) value += functional.coeffs()[b] * map.target().weights()[b] * m.at(b, a);
    }
    coeffs[a] = value / map.source().weights()[a];
  }
  return PositiveFunctional(map.source(), std::move(coeffs));
}

}  // namespace margo
