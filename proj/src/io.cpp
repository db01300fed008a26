#include "margo/io.hpp"

#include "margo/error.hpp"

#include <algorithm>
#include <unordered_map>

namespace margo::io {

namespace {

std::string escape_pointer(std::string_view key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

std::string type_name(const Json& j) { return j.type_name(); }

// label -> atom index; product atoms by their '|'-joined label
std::unordered_map<std::string, std::size_t> label_index(const ProductSpace& space, const Node& where) {
  std::unordered_map<std::string, std::size_t> out;
  for (std::size_t a = 0; a < space.size(); ++a) {
    if (!out.emplace(space.label(a), a).second) {
      where.fail("atom label \"" + space.label(a) + "\" is ambiguous in the product space");
    }
  }
  return out;
}

std::vector<Coord> read_coords(const Node& node) {
  std::vector<Coord> out;
  node.array();
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(static_cast<Coord>(node.at(i).integer()));
  return out;
}

Json coords_json(const CoordSet& coords) {
  Json out = Json::array();
  for (Coord c : coords) out.push_back(c);
  return out;
}

}  // namespace

// ---------------------------------------------------------------- Node

void Node::fail(const std::string& message) const { throw SchemaError("at " + where() + ": " + message); }

bool Node::has(std::string_view key) const { return value_->is_object() && value_->contains(std::string(key)); }

Node Node::at(std::string_view key) const {
  const Json& obj = object();
  auto it = obj.find(std::string(key));
  if (it == obj.end()) fail("missing field \"" + std::string(key) + "\"");
  return Node(*it, path_ + "/" + escape_pointer(key));
}

Node Node::at(std::size_t index) const {
  const Json& arr = array();
  if (index >= arr.size()) fail("index " + std::to_string(index) + " out of range");
  return Node(arr[index], path_ + "/" + std::to_string(index));
}

std::size_t Node::size() const {
  if (!value_->is_array() && !value_->is_object()) fail("expected an array or object, got " + type_name(*value_));
  return value_->size();
}

const Json& Node::object() const {
  if (!value_->is_object()) fail("expected an object, got " + type_name(*value_));
  return *value_;
}

const Json& Node::array() const {
  if (!value_->is_array()) fail("expected an array, got " + type_name(*value_));
  return *value_;
}

std::string Node::string() const {
  if (!value_->is_string()) fail("expected a string, got " + type_name(*value_));
  return value_->get<std::string>();
}

Rational Node::rational() const {
  if (!value_->is_string()) fail("expected a rational string \"p/q\", got " + type_name(*value_));
  try {
    return parse_rational(value_->get<std::string>());
  } catch (const DomainError& e) {
    fail(e.what());
  }
}

long long Node::integer() const {
  if (!value_->is_number_integer()) fail("expected an integer, got " + type_name(*value_));
  return value_->get<long long>();
}

Json parse(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

// ---------------------------------------------------------------- spaces and measures

FiniteSpace read_space(const Node& node) {
  std::string name = node.has("name") ? node.at("name").string() : std::string();
  Node atoms = node.at("atoms");
  atoms.array();
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < atoms.size(); ++i) labels.push_back(atoms.at(i).string());
  try {
    return FiniteSpace(std::move(name), std::move(labels));
  } catch (const Error& e) {
    atoms.fail(e.what());
  }
}

Json write_space(const FiniteSpace& space) {
  Json out = Json::object();
  out["name"] = space.name();
  out["atoms"] = space.atoms();
  return out;
}

Measure read_weights(const Node& node, const ProductSpace& space) {
  Node weights = node.at("weights");
  const Json& obj = weights.object();
  auto index = label_index(space, weights);
  std::vector<Rational> values(space.size());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    Node entry = weights.at(it.key());
    auto hit = index.find(it.key());
    if (hit == index.end()) entry.fail("unknown atom \"" + it.key() + "\"");
    values[hit->second] = entry.rational();
  }
  return Measure(space, std::move(values));
}

Measure read_measure(const Node& node, Coord coord) {
  FiniteSpace space = read_space(node.at("space"));
  return read_weights(node, ProductSpace::single(coord, std::move(space)));
}

Json write_weights(const Measure& measure) {
  Json out = Json::object();
  for (std::size_t a = 0; a < measure.size(); ++a) out[measure.space().label(a)] = to_string(measure[a]);
  return out;
}

Json write_measure(const Measure& measure) {
  Json out = Json::object();
  out["coords"] = coords_json(measure.space().coords());
  out["weights"] = write_weights(measure);
  return out;
}

// ---------------------------------------------------------------- families

MarginalFamily read_family(const Node& node) {
  std::vector<Coord> index = read_coords(node.at("index_set"));
  Node spaces = node.at("spaces");
  spaces.object();
  std::map<Coord, FiniteSpace> factors;
  for (Coord c : index) {
    if (factors.contains(c)) node.at("index_set").fail("coordinate " + std::to_string(c) + " listed twice");
    factors.emplace(c, read_space(spaces.at(std::to_string(c))));
  }
  if (spaces.size() != factors.size()) spaces.fail("spaces must be given exactly for the coordinates of index_set");
  ProductSpace joint(factors);

  Node members = node.at("members");
  members.array();
  std::vector<Member> out;
  for (std::size_t i = 0; i < members.size(); ++i) {
    Node member = members.at(i);
    Node coords_node = member.at("coords");
    CoordSet coords(read_coords(coords_node));
    for (Coord c : coords) {
      if (!joint.has(c)) coords_node.fail("coordinate " + std::to_string(c) + " is not in index_set");
    }
    out.push_back(Member{coords, read_weights(member.at("measure"), joint.restrict(coords))});
  }
  try {
    return MarginalFamily(std::move(joint), std::move(out));
  } catch (const Error& e) {
    members.fail(e.what());
  }
}

Json write_family(const MarginalFamily& family) {
  Json out = Json::object();
  out["index_set"] = coords_json(family.index_set().coords());
  Json spaces = Json::object();
  for (const auto& [c, space] : family.index_set().factors()) spaces[std::to_string(c)] = write_space(space);
  out["spaces"] = std::move(spaces);
  Json members = Json::array();
  for (const Member& m : family.members()) {
    Json member = Json::object();
    member["coords"] = coords_json(m.coords);
    member["measure"] = Json{{"weights", write_weights(m.measure)}};
    members.push_back(std::move(member));
  }
  out["members"] = std::move(members);
  return out;
}

// ---------------------------------------------------------------- atom maps

namespace {

FiniteSpace resolve_space(const Node& node, const std::vector<FiniteSpace>& known) {
  if (node.value().is_string()) {
    std::string name = node.string();
    for (const auto& s : known) {
      if (s.name() == name) return s;
    }
    node.fail("no space named \"" + name + "\"");
  }
  return read_space(node);
}

}  // namespace

AtomMap read_map(const Node& node, const std::vector<FiniteSpace>& known) {
  FiniteSpace source = resolve_space(node.at("source"), known);
  FiniteSpace target = resolve_space(node.at("target"), known);
  Node image = node.at("image");
  const Json& obj = image.object();
  std::vector<std::optional<std::size_t>> partial(source.size());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    Node entry = image.at(it.key());
    auto a = source.find(it.key());
    if (!a) entry.fail("unknown source atom \"" + it.key() + "\"");
    auto b = target.find(entry.string());
    if (!b) entry.fail("unknown target atom \"" + entry.string() + "\"");
    partial[*a] = *b;
  }
  std::vector<std::size_t> values;
  for (std::size_t a = 0; a < source.size(); ++a) {
    if (!partial[a]) image.fail("no image for source atom \"" + source.label(a) + "\"");
    values.push_back(*partial[a]);
  }
  return AtomMap(std::move(source), std::move(target), std::move(values));
}

Json write_map(const AtomMap& map) {
  Json image = Json::object();
  for (std::size_t a = 0; a < map.source().size(); ++a) image[map.source().label(a)] = map.target().label(map(a));
  Json out = Json::object();
  out["source"] = write_space(map.source());
  out["target"] = write_space(map.target());
  out["image"] = std::move(image);
  return out;
}

// ---------------------------------------------------------------- lattices

AtomicL1 read_lattice(const Node& node) {
  FiniteSpace atoms = read_space(node);
  Node weights = node.at("weights");
  const Json& obj = weights.object();
  std::vector<std::optional<Rational>> partial(atoms.size());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    Node entry = weights.at(it.key());
    auto a = atoms.find(it.key());
    if (!a) entry.fail("unknown atom \"" + it.key() + "\"");
    Rational w = entry.rational();
    if (sgn(w) <= 0) entry.fail("lattice weights must be strictly positive");
    partial[*a] = w;
  }
  std::vector<Rational> values;
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    if (!partial[a]) weights.fail("no weight for atom \"" + atoms.label(a) + "\"");
    values.push_back(*partial[a]);
  }
  return AtomicL1(atoms.atoms(), std::move(values), atoms.name());
}

Json write_lattice(const AtomicL1& lattice) {
  Json weights = Json::object();
  for (std::size_t a = 0; a < lattice.dim(); ++a) weights[lattice.atoms().label(a)] = to_string(lattice.weights()[a]);
  Json out = write_space(lattice.atoms());
  out["weights"] = std::move(weights);
  return out;
}

RationalMatrix read_matrix(const Node& node, std::size_t rows, std::size_t cols) {
  node.array();
  if (node.size() != rows) node.fail("expected " + std::to_string(rows) + " rows, got " + std::to_string(node.size()));
  RationalMatrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    Node row = node.at(r);
    row.array();
    if (row.size() != cols) row.fail("expected " + std::to_string(cols) + " entries, got " + std::to_string(row.size()));
    for (std::size_t c = 0; c < cols; ++c) out.at(r, c) = row.at(c).rational();
  }
  return out;
}

Json write_matrix(const RationalMatrix& matrix) {
  Json out = Json::array();
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < matrix.cols(); ++c) row.push_back(to_string(matrix.at(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

LatticeMap read_lattice_map(const Node& node, const AtomicL1& source, const AtomicL1& target) {
  RationalMatrix m = read_matrix(node, target.dim(), source.dim());
  try {
    return LatticeMap(source, target, std::move(m));
  } catch (const DomainError& e) {
    node.fail(e.what());
  }
}

Vector read_vector(const Node& node, const AtomicL1& space) {
  const Json& obj = node.object();
  Vector out(space.dim());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    Node entry = node.at(it.key());
    auto a = space.atoms().find(it.key());
    if (!a) entry.fail("unknown atom \"" + it.key() + "\"");
    out[*a] = entry.rational();
  }
  return out;
}

Json write_vector(const AtomicL1& space, const Vector& x) {
  Json out = Json::object();
  for (std::size_t a = 0; a < space.dim(); ++a) out[space.atoms().label(a)] = to_string(x[a]);
  return out;
}

// ---------------------------------------------------------------- certificates

Json write_certificate(const DualCertificate& cert) {
  Json g = Json::object();
  for (const SpaceFunction& f : cert.functions) {
    Json values = Json::object();
    for (std::size_t a = 0; a < f.space.size(); ++a) values[f.space.label(a)] = to_string(f.values[a]);
    g[f.space.coords().str()] = std::move(values);
  }
  Json out = Json::object();
  out["g"] = std::move(g);
  out["lhs"] = to_string(cert.lhs);
  out["rhs"] = to_string(cert.rhs);
  return out;
}

Json write_sides(const CertificateSides& sides) {
  Json out = Json::object();
  out["lhs"] = to_string(sides.lhs);
  out["rhs"] = sides.rhs ? Json(to_string(*sides.rhs)) : Json(nullptr);
  return out;
}

std::vector<SpaceFunction> read_certificate(const Node& node, const MarginalFamily& family) {
  Node g = node.at("g");
  const Json& obj = g.object();
  std::vector<SpaceFunction> out;
  std::size_t seen = 0;
  for (const Member& member : family.members()) {
    out.push_back(SpaceFunction::zero(member.measure.space()));
    std::string key = member.coords.str();
    if (!g.has(key)) continue;
    ++seen;
    Node values = g.at(key);
    const Json& entries = values.object();
    auto index = label_index(member.measure.space(), values);
    for (auto it = entries.begin(); it != entries.end(); ++it) {
      Node value = values.at(it.key());
      auto hit = index.find(it.key());
      if (hit == index.end()) value.fail("unknown atom \"" + it.key() + "\"");
      out.back().values[hit->second] = value.rational();
    }
  }
  if (seen != obj.size()) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      bool known = std::any_of(family.members().begin(), family.members().end(),
                               [&](const Member& m) { return m.coords.str() == it.key(); });
      if (!known) g.at(it.key()).fail("no family member has coordinates " + it.key());
    }
  }
  return out;
}

}  // namespace margo::io
