#pragma once

// Finite measure spaces, product spaces over coordinate sets, exact-rational
// measures and the basic operations between them. Every sigma-algebra here is
// the power set of a finite atom set, so a measure is a weight per atom.

#include "margo/rational.hpp"

#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace margo {

using Coord = int;

/// An ordered list of distinct atom labels. The order is canonical.
class FiniteSpace {
 public:
  FiniteSpace() = default;
  FiniteSpace(std::string name, std::vector<std::string> atoms);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  const std::string& label(std::size_t atom) const { return atoms_.at(atom); }

  std::optional<std::size_t> find(std::string_view label) const;
  /// Like find() but throws CoordinateMismatch for unknown labels.
  std::size_t index_of(std::string_view label) const;

  /// Spaces are equal when their atom lists are; the name is decoration.
  friend bool operator==(const FiniteSpace& a, const FiniteSpace& b) { return a.atoms_ == b.atoms_; }

 private:
  std::string name_;
  std::vector<std::string> atoms_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// A sorted set of coordinate identifiers.
class CoordSet {
 public:
  CoordSet() = default;
  CoordSet(std::initializer_list<Coord> coords);
  explicit CoordSet(std::vector<Coord> coords);

  const std::vector<Coord>& indices() const { return coords_; }
  std::size_t size() const { return coords_.size(); }
  bool empty() const { return coords_.empty(); }
  bool contains(Coord c) const;
  bool is_subset_of(const CoordSet& other) const;

  auto begin() const { return coords_.begin(); }
  auto end() const { return coords_.end(); }

  std::string str() const;

  friend bool operator==(const CoordSet&, const CoordSet&) = default;
  friend auto operator<=>(const CoordSet&, const CoordSet&) = default;

 private:
  std::vector<Coord> coords_;
};

CoordSet intersect(const CoordSet& a, const CoordSet& b);
CoordSet unite(const CoordSet& a, const CoordSet& b);
CoordSet minus(const CoordSet& a, const CoordSet& b);

/// The product of finite spaces over a coordinate set. Atoms are tuples
/// enumerated lexicographically, the smallest coordinate varying slowest.
/// The product over no coordinates is the one-point space.
class ProductSpace {
 public:
  ProductSpace() { rebuild(); }
  explicit ProductSpace(const std::map<Coord, FiniteSpace>& factors);
  static ProductSpace single(Coord coord, FiniteSpace space);

  const std::vector<std::pair<Coord, FiniteSpace>>& factors() const { return factors_; }
  CoordSet coords() const;
  bool has(Coord coord) const;
  const FiniteSpace& space(Coord coord) const;

  /// Number of atoms; 1 for the empty product.
  std::size_t size() const { return size_; }

  /// Restriction to a subset of the coordinates. Throws CoordinateMismatch otherwise.
  ProductSpace restrict(const CoordSet& coords) const;

  std::vector<std::size_t> decode(std::size_t atom) const;
  std::size_t encode(std::span<const std::size_t> components) const;
  /// Atom labels joined by '|'; the empty product has the label "".
  std::string label(std::size_t atom) const;

  bool is_single() const { return factors_.size() == 1; }
  /// The lone factor of a one-coordinate product.
  const FiniteSpace& only_space() const;
  Coord only_coord() const;

  friend bool operator==(const ProductSpace& a, const ProductSpace& b) { return a.factors_ == b.factors_; }

 private:
  void rebuild();

  std::vector<std::pair<Coord, FiniteSpace>> factors_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

/// Product of two spaces over disjoint coordinate sets.
ProductSpace combine(const ProductSpace& a, const ProductSpace& b);

/// For every atom of `from`, the index of its projection in from.restrict(onto).
std::vector<std::size_t> projection_map(const ProductSpace& from, const CoordSet& onto);

/// A signed measure with exact rational atom weights.
class Measure {
 public:
  Measure() : weights_(1) {}
  Measure(ProductSpace space, std::vector<Rational> weights);

  static Measure zero(ProductSpace space);
  /// Uniform probability; the zero measure when the space has no atoms.
  static Measure uniform(ProductSpace space);
  /// A measure on a single finite space, placed at coordinate `coord`.
  static Measure on(FiniteSpace space, std::vector<Rational> weights, Coord coord = 0);

  const ProductSpace& space() const { return space_; }
  const std::vector<Rational>& weights() const { return weights_; }
  const Rational& operator[](std::size_t atom) const { return weights_[atom]; }
  std::size_t size() const { return weights_.size(); }

  Rational total_mass() const;
  bool is_positive() const;

  Measure& operator+=(const Measure& other);
  Measure& operator-=(const Measure& other);
  Measure& operator*=(const Rational& factor);
  friend Measure operator+(Measure a, const Measure& b) { return a += b; }
  friend Measure operator-(Measure a, const Measure& b) { return a -= b; }
  friend Measure operator*(const Rational& factor, Measure a) { return a *= factor; }

  friend bool operator==(const Measure& a, const Measure& b) {
    return a.space_ == b.space_ && a.weights_ == b.weights_;
  }

 private:
  ProductSpace space_;
  std::vector<Rational> weights_;
};

/// A total function between atom sets.
class AtomMap {
 public:
  AtomMap(FiniteSpace source, FiniteSpace target, std::vector<std::size_t> image);
  static AtomMap identity(const FiniteSpace& space);

  const FiniteSpace& source() const { return source_; }
  const FiniteSpace& target() const { return target_; }
  const std::vector<std::size_t>& image() const { return image_; }
  std::size_t operator()(std::size_t atom) const { return image_[atom]; }

  friend bool operator==(const AtomMap&, const AtomMap&) = default;

 private:
  FiniteSpace source_;
  FiniteSpace target_;
  std::vector<std::size_t> image_;
};

/// g o f.
AtomMap compose(const AtomMap& g, const AtomMap& f);

Measure marginalize(const Measure& measure, const CoordSet& onto);
Measure tensor(const Measure& a, const Measure& b);
/// Iterated tensor of positive single-space factors.
Measure product_measure(const std::vector<std::pair<Coord, Measure>>& factors);
Measure variation(const Measure& measure);

/// The measure carried by the graph {(f(x), x)} of f, on target_coord x source_coord.
/// `source_measure` lives on f's source; its coordinate becomes the source coordinate.
Measure graph_measure(const AtomMap& f, const Measure& source_measure, Coord target_coord);

Measure pushforward(const AtomMap& f, const Measure& measure);

struct PreservationReport {
  bool preserving = true;
  /// First target atom whose preimage mass differs.
  std::optional<std::size_t> witness;
  Rational expected;
  Rational actual;

  explicit operator bool() const { return preserving; }
};

PreservationReport is_measure_preserving(const AtomMap& f, const Measure& source, const Measure& target);

}  // namespace margo
