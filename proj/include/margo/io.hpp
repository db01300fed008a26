#pragma once

// JSON instance schema. Rationals are "p/q" strings; weights and images are
// objects keyed by atom labels, product atoms by labels joined with '|'.
// Every reader reports failures as SchemaError prefixed with the JSON pointer
// of the offending value.

#include "margo/lattice.hpp"
#include "margo/measure.hpp"
#include "margo/positive.hpp"
#include "margo/signed.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace margo::io {

using Json = nlohmann::ordered_json;

/// A JSON value together with its pointer inside the document.
class Node {
 public:
  Node(const Json& value, std::string path = "") : value_(&value), path_(std::move(path)) {}

  const Json& value() const { return *value_; }
  const std::string& path() const { return path_; }
  std::string where() const { return path_.empty() ? "/" : path_; }

  [[noreturn]] void fail(const std::string& message) const;

  bool has(std::string_view key) const;
  Node at(std::string_view key) const;
  Node at(std::size_t index) const;
  std::size_t size() const;

  const Json& object() const;
  const Json& array() const;
  std::string string() const;
  Rational rational() const;
  long long integer() const;

 private:
  const Json* value_;
  std::string path_;
};

/// Parses text, turning syntax errors into SchemaError with the byte offset.
Json parse(std::string_view text);

FiniteSpace read_space(const Node& node);
Json write_space(const FiniteSpace& space);

/// {"weights": {label: "p/q"}}; unlisted atoms get 0.
Measure read_weights(const Node& node, const ProductSpace& space);
/// {"space": {...}, "weights": {...}} on a single finite space.
Measure read_measure(const Node& node, Coord coord = 0);
/// {"coords": [...], "weights": {...}} listing every atom in canonical order.
Json write_measure(const Measure& measure);
Json write_weights(const Measure& measure);

/// {"index_set": [coords], "spaces": {"c": space}, "members": [{"coords", "measure"}]}.
MarginalFamily read_family(const Node& node);
Json write_family(const MarginalFamily& family);

/// {"source": space or name, "target": space or name, "image": {a: b}}.
/// Names refer to `known`.
AtomMap read_map(const Node& node, const std::vector<FiniteSpace>& known);
Json write_map(const AtomMap& map);

/// {"name"?, "atoms": [...], "weights": {a: "p/q"}} with strictly positive weights.
AtomicL1 read_lattice(const Node& node);
Json write_lattice(const AtomicL1& lattice);

/// Dense rows of "p/q", target atoms by source atoms.
RationalMatrix read_matrix(const Node& node, std::size_t rows, std::size_t cols);
Json write_matrix(const RationalMatrix& matrix);
LatticeMap read_lattice_map(const Node& node, const AtomicL1& source, const AtomicL1& target);

/// A vector as a coefficient map {atom: "p/q"}; unlisted atoms get 0.
Vector read_vector(const Node& node, const AtomicL1& space);
Json write_vector(const AtomicL1& space, const Vector& x);

/// {"g": {"{0,1}": {atom: "p/q"}, ...}, "lhs", "rhs"}, one entry per member
/// keyed by its coordinate set. Missing members and atoms read as 0.
Json write_certificate(const DualCertificate& cert);
/// {"lhs", "rhs"}; rhs null means +infinity.
Json write_sides(const CertificateSides& sides);
std::vector<SpaceFunction> read_certificate(const Node& node, const MarginalFamily& family);

}  // namespace margo::io
