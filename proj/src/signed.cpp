#include "margo/signed.hpp"

#include <algorithm>

namespace margo {

MarginalFamily::MarginalFamily(ProductSpace index_set, std::vector<Member> members)
    : index_set_(std::move(index_set)), members_(std::move(members)) {
  for (std::size_t i = 0; i < members_.size(); ++i) {
    const Member& m = members_[i];
    if (!m.coords.is_subset_of(index_set_.coords())) {
      throw CoordinateMismatch("member " + m.coords.str() + " is not a subset of the index set " +
                               index_set_.coords().str());
    }
    if (!(m.measure.space() == index_set_.restrict(m.coords))) {
      throw CoordinateMismatch("measure of member " + m.coords.str() + " does not live on its product space");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (members_[j].coords == m.coords) throw DomainError("duplicate member " + m.coords.str());
    }
  }
}

std::vector<CoordSet> MarginalFamily::coord_sets() const {
  std::vector<CoordSet> out;
  out.reserve(members_.size());
  for (const auto& m : members_) out.push_back(m.coords);
  return out;
}

std::vector<Violation> check_pairwise_consistency(const MarginalFamily& family) {
  std::vector<Violation> out;
  const auto& members = family.members();
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      CoordSet overlap = intersect(members[i].coords, members[j].coords);
      Measure a = marginalize(members[i].measure, overlap);
      Measure b = marginalize(members[j].measure, overlap);
      for (std::size_t atom = 0; atom < a.size(); ++atom) {
        if (a[atom] != b[atom]) {
          out.push_back(Violation{i, j, overlap, atom, a.space().label(atom), a[atom], b[atom]});
          break;
        }
      }
    }
  }
  return out;
}

namespace {

void require_consistent(const MarginalFamily& family) {
  auto violations = check_pairwise_consistency(family);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw ConsistencyError("members " + family.member(v.first).coords.str() + " and " +
                               family.member(v.second).coords.str() + " disagree on " + v.overlap.str() +
                               " at atom \"" + v.atom_label + "\": " + to_string(v.first_mass) + " vs " +
                               to_string(v.second_mass),
                           std::move(violations));
  }
}

CoordSet intersection_of(const MarginalFamily& family, std::span<const std::size_t> selection) {
  CoordSet out = family.member(selection.front()).coords;
  for (std::size_t k : selection.subspan(1)) out = intersect(out, family.member(k).coords);
  return out;
}

}  // namespace

Measure common_marginal(const MarginalFamily& family, std::span<const std::size_t> selection) {
  if (selection.empty()) throw DomainError("common_marginal needs a nonempty selection");
  require_consistent(family);
  return marginalize(family.member(selection.front()).measure, intersection_of(family, selection));
}

Measure solve_signed(const MarginalFamily& family, const SignedOptions& options) {
  const std::size_t m = family.size();
  if (m > options.max_members) {
    throw DomainError("family has " + std::to_string(m) + " members; the inclusion-exclusion cap is " +
                      std::to_string(options.max_members));
  }
  require_consistent(family);

  const ProductSpace& joint = family.index_set();
  std::map<Coord, Measure> refs;
  for (const auto& [coord, space] : joint.factors()) {
    auto it = options.references.find(coord);
    if (it == options.references.end()) {
      refs.emplace(coord, Measure::uniform(ProductSpace::single(coord, space)));
      continue;
    }
    const Measure& ref = it->second;
    if (!(ref.space().only_space() == space)) {
      throw CoordinateMismatch("reference measure for coordinate " + std::to_string(coord) +
                               " does not live on its space");
    }
    bool strictly_positive = std::all_of(ref.weights().begin(), ref.weights().end(),
                                         [](const Rational& w) { return sgn(w) > 0; });
    if (!strictly_positive || ref.total_mass() != 1) {
      throw DomainError("reference measure for coordinate " + std::to_string(coord) +
                        " must be a strictly positive probability");
    }
    refs.emplace(coord, Measure::on(space, ref.weights(), coord));
  }
  for (const auto& [coord, _] : options.references) {
    if (!refs.count(coord)) throw CoordinateMismatch("reference for unknown coordinate " + std::to_string(coord));
  }

  // Subfamilies with the same intersection contribute the same tensor term, so
  // collect the signed counts per intersection first.
  std::map<CoordSet, long> coefficient;
  std::map<CoordSet, std::size_t> representative;
  std::vector<std::size_t> selection;
  for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
    selection.clear();
    for (std::size_t k = 0; k < m; ++k) {
      if (mask & (std::size_t{1} << k)) selection.push_back(k);
    }
    CoordSet cap = intersection_of(family, selection);
    coefficient[cap] += (selection.size() % 2 == 1) ? 1 : -1;
    representative.emplace(cap, selection.front());
  }

  Measure result = Measure::zero(joint);
  for (const auto& [cap, count] : coefficient) {
    if (count == 0) continue;
    Measure term = marginalize(family.member(representative.at(cap)).measure, cap);
    Measure rest(ProductSpace(), {Rational(1)});
    for (Coord c : minus(joint.coords(), cap)) rest = tensor(rest, refs.at(c));
    result += Rational(count) * tensor(term, rest);
  }
  return result;
}

}  // namespace margo
