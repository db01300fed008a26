#include "margo/measure.hpp"

#include "margo/error.hpp"

#include <algorithm>

namespace margo {

// ---------------------------------------------------------------- FiniteSpace

FiniteSpace::FiniteSpace(std::string name, std::vector<std::string> atoms)
    : name_(std::move(name)), atoms_(std::move(atoms)) {
  index_.reserve(atoms_.size());
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (!index_.emplace(atoms_[i], i).second) {
      throw DomainError("duplicate atom label \"" + atoms_[i] + "\" in space \"" + name_ + "\"");
    }
  }
}

std::optional<std::size_t> FiniteSpace::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t FiniteSpace::index_of(std::string_view label) const {
  if (auto i = find(label)) return *i;
  throw CoordinateMismatch("unknown atom \"" + std::string(label) + "\" in space \"" + name_ + "\"");
}

// ---------------------------------------------------------------- CoordSet

CoordSet::CoordSet(std::initializer_list<Coord> coords) : CoordSet(std::vector<Coord>(coords)) {}

CoordSet::CoordSet(std::vector<Coord> coords) : coords_(std::move(coords)) {
  std::sort(coords_.begin(), coords_.end());
  coords_.erase(std::unique(coords_.begin(), coords_.end()), coords_.end());
}

bool CoordSet::contains(Coord c) const { return std::binary_search(coords_.begin(), coords_.end(), c); }

bool CoordSet::is_subset_of(const CoordSet& other) const {
  return std::includes(other.coords_.begin(), other.coords_.end(), coords_.begin(), coords_.end());
}

std::string CoordSet::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(coords_[i]);
  }
  return out + "}";
}

CoordSet intersect(const CoordSet& a, const CoordSet& b) {
  std::vector<Coord> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return CoordSet(std::move(out));
}

CoordSet unite(const CoordSet& a, const CoordSet& b) {
  std::vector<Coord> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return CoordSet(std::move(out));
}

CoordSet minus(const CoordSet& a, const CoordSet& b) {
  std::vector<Coord> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return CoordSet(std::move(out));
}

// ---------------------------------------------------------------- ProductSpace

ProductSpace::ProductSpace(const std::map<Coord, FiniteSpace>& factors)
    : factors_(factors.begin(), factors.end()) {
  rebuild();
}

ProductSpace ProductSpace::single(Coord coord, FiniteSpace space) {
  return ProductSpace(std::map<Coord, FiniteSpace>{{coord, std::move(space)}});
}

void ProductSpace::rebuild() {
  strides_.assign(factors_.size(), 1);
  size_ = 1;
  for (std::size_t k = factors_.size(); k-- > 0;) {
    strides_[k] = size_;
    size_ *= factors_[k].second.size();
  }
}

CoordSet ProductSpace::coords() const {
  std::vector<Coord> out;
  out.reserve(factors_.size());
  for (const auto& [c, _] : factors_) out.push_back(c);
  return CoordSet(std::move(out));
}

bool ProductSpace::has(Coord coord) const {
  return std::any_of(factors_.begin(), factors_.end(), [&](const auto& f) { return f.first == coord; });
}

const FiniteSpace& ProductSpace::space(Coord coord) const {
  for (const auto& [c, s] : factors_) {
    if (c == coord) return s;
  }
  throw CoordinateMismatch("coordinate " + std::to_string(coord) + " not in product " + coords().str());
}

ProductSpace ProductSpace::restrict(const CoordSet& coords) const {
  std::map<Coord, FiniteSpace> out;
  for (Coord c : coords) out.emplace(c, space(c));
  return ProductSpace(out);
}

std::vector<std::size_t> ProductSpace::decode(std::size_t atom) const {
  std::vector<std::size_t> out(factors_.size());
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    out[k] = (atom / strides_[k]) % factors_[k].second.size();
  }
  return out;
}

std::size_t ProductSpace::encode(std::span<const std::size_t> components) const {
  if (components.size() != factors_.size()) {
    throw CoordinateMismatch("tuple length does not match product " + coords().str());
  }
  std::size_t atom = 0;
  for (std::size_t k = 0; k < factors_.size(); ++k) atom += components[k] * strides_[k];
  return atom;
}

std::string ProductSpace::label(std::size_t atom) const {
  auto parts = decode(atom);
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) out += '|';
    out += factors_[k].second.label(parts[k]);
  }
  return out;
}

const FiniteSpace& ProductSpace::only_space() const {
  if (!is_single()) throw CoordinateMismatch("expected a single-coordinate space, got " + coords().str());
  return factors_.front().second;
}

Coord ProductSpace::only_coord() const {
  if (!is_single()) throw CoordinateMismatch("expected a single-coordinate space, got " + coords().str());
  return factors_.front().first;
}

ProductSpace combine(const ProductSpace& a, const ProductSpace& b) {
  std::map<Coord, FiniteSpace> out;
  for (const auto& [c, s] : a.factors()) out.emplace(c, s);
  for (const auto& [c, s] : b.factors()) {
    if (!out.emplace(c, s).second) {
      throw CoordinateMismatch("coordinate " + std::to_string(c) + " appears in both factors");
    }
  }
  return ProductSpace(out);
}

std::vector<std::size_t> projection_map(const ProductSpace& from, const CoordSet& onto) {
  ProductSpace target = from.restrict(onto);
  // stride in the target for each factor of `from` (0 when projected away)
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> target_stride;
  for (const auto& [c, s] : from.factors()) {
    sizes.push_back(s.size());
    std::size_t stride = 0;
    if (onto.contains(c)) {
      std::vector<std::size_t> unit(target.factors().size(), 0);
      std::size_t pos = 0;
      while (target.factors()[pos].first != c) ++pos;
      unit[pos] = 1;
      stride = target.encode(unit);
    }
    target_stride.push_back(stride);
  }
  std::vector<std::size_t> out(from.size(), 0);
  if (from.size() == 0) return out;
  std::vector<std::size_t> digits(sizes.size(), 0);
  std::size_t current = 0;
  for (std::size_t atom = 0; atom < from.size(); ++atom) {
    out[atom] = current;
    // odometer increment, last factor fastest
    for (std::size_t k = sizes.size(); k-- > 0;) {
      if (++digits[k] < sizes[k]) {
        current += target_stride[k];
        break;
      }
      current -= target_stride[k] * (sizes[k] - 1);
      digits[k] = 0;
    }
  }
  return out;
}

// ---------------------------------------------------------------- Measure

Measure::Measure(ProductSpace space, std::vector<Rational> weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
  if (weights_.size() != space_.size()) {
    throw CoordinateMismatch("measure has " + std::to_string(weights_.size()) + " weights for " +
                             std::to_string(space_.size()) + " atoms");
  }
}

Measure Measure::zero(ProductSpace space) {
  std::vector<Rational> w(space.size());
  return Measure(std::move(space), std::move(w));
}

Measure Measure::uniform(ProductSpace space) {
  std::vector<Rational> w(space.size());
  if (!w.empty()) {
    Rational each(1, static_cast<unsigned long>(w.size()));
    std::fill(w.begin(), w.end(), each);
  }
  return Measure(std::move(space), std::move(w));
}

Measure Measure::on(FiniteSpace space, std::vector<Rational> weights, Coord coord) {
  return Measure(ProductSpace::single(coord, std::move(space)), std::move(weights));
}

Rational Measure::total_mass() const {
  Rational total;
  for (const auto& w : weights_) total += w;
  return total;
}

bool Measure::is_positive() const {
  return std::all_of(weights_.begin(), weights_.end(), [](const Rational& w) { return sgn(w) >= 0; });
}

Measure& Measure::operator+=(const Measure& other) {
  if (!(space_ == other.space_)) throw CoordinateMismatch("adding measures on different spaces");
  for (std::size_t i = 0; i < weights_.size(); ++i) weights_[i] += other.weights_[i];
  return *this;
}

Measure& Measure::operator-=(const Measure& other) {
  if (!(space_ == other.space_)) throw CoordinateMismatch("subtracting measures on different spaces");
  for (std::size_t i = 0; i < weights_.size(); ++i) weights_[i] -= other.weights_[i];
  return *this;
}

Measure& Measure::operator*=(const Rational& factor) {
  for (auto& w : weights_) w *= factor;
  return *this;
}

// ---------------------------------------------------------------- AtomMap

AtomMap::AtomMap(FiniteSpace source, FiniteSpace target, std::vector<std::size_t> image)
    : source_(std::move(source)), target_(std::move(target)), image_(std::move(image)) {
  if (image_.size() != source_.size()) {
    throw CoordinateMismatch("atom map must give an image for each of the " + std::to_string(source_.size()) +
                             " source atoms");
  }
  for (std::size_t i = 0; i < image_.size(); ++i) {
    if (image_[i] >= target_.size()) {
      throw CoordinateMismatch("image of atom \"" + source_.label(i) + "\" is outside the target space");
    }
  }
}

AtomMap AtomMap::identity(const FiniteSpace& space) {
  std::vector<std::size_t> image(space.size());
  for (std::size_t i = 0; i < image.size(); ++i) image[i] = i;
  return AtomMap(space, space, std::move(image));
}

AtomMap compose(const AtomMap& g, const AtomMap& f) {
  if (!(f.target() == g.source())) throw CoordinateMismatch("compose: target of f is not the source of g");
  std::vector<std::size_t> image(f.source().size());
  for (std::size_t i = 0; i < image.size(); ++i) image[i] = g(f(i));
  return AtomMap(f.source(), g.target(), std::move(image));
}

// ---------------------------------------------------------------- operations

Measure marginalize(const Measure& measure, const CoordSet& onto) {
  const ProductSpace& space = measure.space();
  for (Coord c : onto) {
    if (!space.has(c)) {
      throw CoordinateMismatch("cannot marginalize onto " + onto.str() + ": coordinate " + std::to_string(c) +
                               " not in " + space.coords().str());
    }
  }
  Measure out = Measure::zero(space.restrict(onto));
  auto proj = projection_map(space, onto);
  std::vector<Rational> w(out.size());
  for (std::size_t atom = 0; atom < measure.size(); ++atom) w[proj[atom]] += measure[atom];
  return Measure(out.space(), std::move(w));
}

Measure tensor(const Measure& a, const Measure& b) {
  ProductSpace joint = combine(a.space(), b.space());
  auto pa = projection_map(joint, a.space().coords());
  auto pb = projection_map(joint, b.space().coords());
  std::vector<Rational> w(joint.size());
  for (std::size_t atom = 0; atom < w.size(); ++atom) w[atom] = a[pa[atom]] * b[pb[atom]];
  return Measure(std::move(joint), std::move(w));
}

Measure product_measure(const std::vector<std::pair<Coord, Measure>>& factors) {
  Measure out = Measure(ProductSpace(), {Rational(1)});
  for (const auto& [coord, factor] : factors) {
    if (!factor.is_positive()) {
      throw DomainError("product factor at coordinate " + std::to_string(coord) + " is not positive");
    }
    out = tensor(out, Measure::on(factor.space().only_space(), factor.weights(), coord));
  }
  return out;
}

Measure variation(const Measure& measure) {
  std::vector<Rational> w(measure.weights());
  for (auto& x : w) x = abs(x);
  return Measure(measure.space(), std::move(w));
}

Measure graph_measure(const AtomMap& f, const Measure& source_measure, Coord target_coord) {
  const FiniteSpace& src = source_measure.space().only_space();
  Coord source_coord = source_measure.space().only_coord();
  if (!(src == f.source())) throw CoordinateMismatch("graph_measure: measure does not live on the map's source");
  if (source_coord == target_coord) {
    throw CoordinateMismatch("graph_measure: source and target share coordinate " + std::to_string(target_coord));
  }
  ProductSpace joint(std::map<Coord, FiniteSpace>{{target_coord, f.target()}, {source_coord, f.source()}});
  std::vector<Rational> w(joint.size());
  bool target_first = target_coord < source_coord;
  for (std::size_t x = 0; x < src.size(); ++x) {
    std::size_t parts[2];
    parts[target_first ? 0 : 1] = f(x);
    parts[target_first ? 1 : 0] = x;
    w[joint.encode(parts)] = source_measure[x];
  }
  return Measure(std::move(joint), std::move(w));
}

Measure pushforward(const AtomMap& f, const Measure& measure) {
  if (!(measure.space().only_space() == f.source())) {
    throw CoordinateMismatch("pushforward: measure does not live on the map's source");
  }
  std::vector<Rational> w(f.target().size());
  for (std::size_t x = 0; x < f.source().size(); ++x) w[f(x)] += measure[x];
  return Measure::on(f.target(), std::move(w), measure.space().only_coord());
}

PreservationReport is_measure_preserving(const AtomMap& f, const Measure& source, const Measure& target) {
  if (!(target.space().only_space() == f.target())) {
    throw CoordinateMismatch("is_measure_preserving: target measure does not live on the map's target");
  }
  Measure pushed = pushforward(f, source);
  PreservationReport report;
  for (std::size_t a = 0; a < pushed.size(); ++a) {
    if (pushed[a] != target[a]) {
      report.preserving = false;
      report.witness = a;
      report.expected = target[a];
      report.actual = pushed[a];
      break;
    }
  }
  return report;
}

}  // namespace margo
