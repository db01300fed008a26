#include "margo/generate.hpp"

#include "margo/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace margo::gen {

long long uniform(Rng& rng, long long lo, long long hi) {
  auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<long long>(rng() % span);
}

Rational rational(Rng& rng, long long lo, long long hi, long long max_den) {
  return ratio(uniform(rng, lo, hi), uniform(rng, 1, max_den));
}

namespace {

template <typename T>
void shuffle(Rng& rng, std::vector<T>& items) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[static_cast<std::size_t>(uniform(rng, 0, static_cast<long long>(i) - 1))]);
  }
}

FiniteSpace labeled(const std::string& prefix, std::size_t n) {
  std::vector<std::string> atoms;
  for (std::size_t i = 0; i < n; ++i) atoms.push_back(prefix + std::to_string(i));
  return FiniteSpace(prefix.empty() ? "X" : prefix, std::move(atoms));
}

// m split into k nonnegative parts; all parts positive when `positive`
std::vector<Rational> partition(Rng& rng, const Rational& m, std::size_t k, bool positive) {
  std::vector<long long> r(k);
  long long total = 0;
  for (auto& v : r) {
    v = uniform(rng, positive ? 1 : 0, 4);
    total += v;
  }
  if (total == 0) {
    r[0] = 1;
    total = 1;
  }
  std::vector<Rational> out;
  for (long long v : r) out.push_back(m * ratio(v, total));
  return out;
}

CoordSet coords_upto(int k) {
  std::vector<Coord> c(static_cast<std::size_t>(k));
  std::iota(c.begin(), c.end(), 0);
  return CoordSet(std::move(c));
}

}  // namespace

ProductSpace random_joint(Rng& rng, int coords, int max_atoms, std::size_t max_size) {
  while (true) {
    std::map<Coord, FiniteSpace> factors;
    for (int c = 0; c < coords; ++c) {
      factors.emplace(c, labeled("", static_cast<std::size_t>(uniform(rng, 1, max_atoms))));
    }
    ProductSpace out(factors);
    if (max_size == 0 || out.size() <= max_size) return out;
  }
}

Measure random_signed_measure(Rng& rng, const ProductSpace& space) {
  std::vector<Rational> w;
  for (std::size_t a = 0; a < space.size(); ++a) w.push_back(rational(rng, -4, 4));
  return Measure(space, std::move(w));
}

Measure random_positive_measure(Rng& rng, const ProductSpace& space, int zero_odds) {
  std::vector<Rational> w;
  for (std::size_t a = 0; a < space.size(); ++a) {
    bool zero = zero_odds > 0 && uniform(rng, 1, zero_odds) == 1;
    w.push_back(zero ? Rational(0) : rational(rng, 1, 4));
  }
  return Measure(space, std::move(w));
}

MarginalFamily marginals_of(const Measure& master, const std::vector<CoordSet>& sets) {
  std::vector<Member> members;
  for (const auto& s : sets) members.push_back(Member{s, marginalize(master, s)});
  return MarginalFamily(master.space(), std::move(members));
}

std::vector<CoordSet> random_sets(Rng& rng, const CoordSet& coords, std::size_t max_members) {
  const auto& c = coords.indices();
  long long masks = (1LL << c.size()) - 1;
  auto count = static_cast<std::size_t>(uniform(rng, 1, std::min<long long>(masks, max_members)));
  std::vector<long long> chosen;
  while (chosen.size() < count) {
    long long m = uniform(rng, 1, masks);
    if (std::find(chosen.begin(), chosen.end(), m) == chosen.end()) chosen.push_back(m);
  }
  std::vector<CoordSet> out;
  for (long long m : chosen) {
    std::vector<Coord> s;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (m >> i & 1) s.push_back(c[i]);
    }
    out.emplace_back(std::move(s));
  }
  return out;
}

MarginalFamily consistent_signed_family(Rng& rng) {
  int k = static_cast<int>(uniform(rng, 1, 4));
  ProductSpace joint = random_joint(rng, k, 4);
  return marginals_of(random_signed_measure(rng, joint), random_sets(rng, coords_upto(k), 5));
}

MarginalFamily random_positive_family(Rng& rng, std::size_t max_joint) {
  auto mode = uniform(rng, 0, 3);
  if (mode == 3 && max_joint >= 8) {
    // binary coordinates with uniform singletons and disagreement rate d_ij per
    // pair: consistent by construction, positively solvable only inside the cut polytope
    FiniteSpace binary("B", {"0", "1"});
    ProductSpace joint(std::map<Coord, FiniteSpace>{{0, binary}, {1, binary}, {2, binary}});
    Rational mass = rational(rng, 1, 4);
    std::vector<Member> members;
    for (CoordSet s : {CoordSet{0, 1}, CoordSet{1, 2}, CoordSet{0, 2}}) {
      Rational d = ratio(uniform(rng, 0, 4), 4);
      Rational same = mass * (1 - d) / 2;
      Rational differ = mass * d / 2;
      members.push_back(Member{s, Measure(joint.restrict(s), {same, differ, differ, same})});
    }
    return MarginalFamily(joint, std::move(members));
  }
  int k = static_cast<int>(uniform(rng, 2, 3));
  ProductSpace joint = random_joint(rng, k, k == 2 ? 4 : 2, max_joint);
  auto sets = random_sets(rng, coords_upto(k), 4);
  switch (mode) {
    case 0:
      return marginals_of(random_positive_measure(rng, joint), sets);
    case 1:
      for (int attempt = 0; attempt < 20; ++attempt) {
        Measure master = random_positive_measure(rng, joint) + random_signed_measure(rng, joint);
        MarginalFamily family = marginals_of(master, sets);
        bool positive = std::all_of(family.members().begin(), family.members().end(),
                                    [](const Member& m) { return m.measure.is_positive(); });
        if (positive) return family;
      }
      return marginals_of(random_positive_measure(rng, joint), sets);
    default: {
      std::vector<Member> members;
      for (const auto& s : sets) {
        Measure m = random_positive_measure(rng, joint.restrict(s), 0);
        m *= Rational(1) / m.total_mass();
        members.push_back(Member{s, std::move(m)});
      }
      return MarginalFamily(joint, std::move(members));
    }
  }
}

MarginalFamily decomposable_family(Rng& rng) {
  const int max_coords = static_cast<int>(uniform(rng, 2, 4));
  int next = 0;
  auto fresh = [&](int n) {
    std::vector<Coord> out;
    while (n-- > 0 && next < max_coords) out.push_back(next++);
    return out;
  };
  std::vector<CoordSet> sets{CoordSet(fresh(static_cast<int>(uniform(rng, 1, 2))))};
  auto target = static_cast<std::size_t>(uniform(rng, 1, 5));
  for (int attempt = 0; sets.size() < target && attempt < 20; ++attempt) {
    const CoordSet& parent = sets[static_cast<std::size_t>(uniform(rng, 0, static_cast<long long>(sets.size()) - 1))];
    std::vector<Coord> member;
    for (Coord c : parent) {
      if (uniform(rng, 0, 1)) member.push_back(c);
    }
    for (Coord c : fresh(static_cast<int>(uniform(rng, 0, 2)))) member.push_back(c);
    CoordSet candidate(std::move(member));
    if (candidate.empty() || std::find(sets.begin(), sets.end(), candidate) != sets.end()) continue;
    sets.push_back(std::move(candidate));
  }
  shuffle(rng, sets);
  ProductSpace joint = random_joint(rng, next, 3);
  return marginals_of(random_positive_measure(rng, joint), sets);
}

MarginalFamily anticorrelated_family() {
  FiniteSpace binary("B", {"0", "1"});
  ProductSpace joint(std::map<Coord, FiniteSpace>{{0, binary}, {1, binary}, {2, binary}});
  std::vector<Member> members;
  Rational half = ratio(1, 2);
  for (CoordSet s : {CoordSet{0, 1}, CoordSet{1, 2}, CoordSet{0, 2}}) {
    members.push_back(Member{s, Measure(joint.restrict(s), {0, half, half, 0})});
  }
  return MarginalFamily(joint, std::move(members));
}

MarginalFamily inconsistent_family(Rng& rng) {
  int k = static_cast<int>(uniform(rng, 2, 3));
  ProductSpace joint = random_joint(rng, k, 3);
  std::vector<Member> members;
  for (const auto& s : random_sets(rng, coords_upto(k), 4)) {
    Measure m = random_positive_measure(rng, joint.restrict(s), 0);
    m *= Rational(1) / m.total_mass();
    members.push_back(Member{s, std::move(m)});
  }
  return MarginalFamily(joint, std::move(members));
}

Cospan random_cospan(Rng& rng) {
  auto n0 = static_cast<std::size_t>(uniform(rng, 1, 3));
  FiniteSpace x0 = labeled("o", n0);
  Measure nu0 = random_positive_measure(rng, ProductSpace::single(0, x0), 5);

  auto fiber = [&](const std::string& prefix) {
    std::vector<std::size_t> sizes(n0, 1);
    auto extra = uniform(rng, 0, 6 - static_cast<long long>(n0));
    while (extra-- > 0) ++sizes[static_cast<std::size_t>(uniform(rng, 0, static_cast<long long>(n0) - 1))];
    std::vector<std::pair<std::size_t, Rational>> atoms;  // (image, mass)
    for (std::size_t a = 0; a < n0; ++a) {
      for (const auto& m : partition(rng, nu0[a], sizes[a], uniform(rng, 0, 3) != 0)) atoms.emplace_back(a, m);
    }
    shuffle(rng, atoms);
    FiniteSpace space = labeled(prefix, atoms.size());
    std::vector<std::size_t> image;
    std::vector<Rational> weights;
    for (const auto& [a, m] : atoms) {
      image.push_back(a);
      weights.push_back(m);
    }
    return std::pair{Measure::on(space, std::move(weights)), AtomMap(space, x0, std::move(image))};
  };
  auto [nu1, f1] = fiber("a");
  auto [nu2, f2] = fiber("b");
  return Cospan{nu0, nu1, nu2, f1, f2};
}

AtomicL1 random_lattice(Rng& rng, std::size_t max_atoms, const std::string& prefix) {
  auto n = static_cast<std::size_t>(uniform(rng, 1, static_cast<long long>(max_atoms)));
  std::vector<std::string> atoms;
  std::vector<Rational> weights;
  for (std::size_t i = 0; i < n; ++i) {
    atoms.push_back(prefix + std::to_string(i));
    weights.push_back(rational(rng, 1, 4));
  }
  return AtomicL1(std::move(atoms), std::move(weights), prefix);
}

LatticeMap random_embedding(Rng& rng, const AtomicL1& source, std::size_t max_atoms, const std::string& prefix) {
  if (source.dim() > max_atoms) throw DomainError("embedding target would exceed the atom cap");
  std::vector<std::size_t> pieces(source.dim(), 1);
  auto spare = static_cast<long long>(max_atoms - source.dim());
  auto split = uniform(rng, 0, spare);
  for (long long i = 0; i < split && source.dim() > 0; ++i) {
    ++pieces[static_cast<std::size_t>(uniform(rng, 0, static_cast<long long>(source.dim()) - 1))];
  }
  auto unused = uniform(rng, 0, spare - split);

  struct Row {
    std::optional<std::size_t> column;
    Rational entry;
    Rational weight;
  };
  std::vector<Row> rows;
  static const Rational entries[] = {Rational(1), Rational(2), ratio(1, 2), ratio(3, 2)};
  for (std::size_t a = 0; a < source.dim(); ++a) {
    for (const auto& part : partition(rng, source.weights()[a], pieces[a], true)) {
      const Rational& e = entries[uniform(rng, 0, 3)];
      rows.push_back(Row{a, e, part / e});
    }
  }
  for (long long i = 0; i < unused; ++i) rows.push_back(Row{std::nullopt, Rational(0), rational(rng, 1, 4)});
  shuffle(rng, rows);

  std::vector<std::string> atoms;
  std::vector<Rational> weights;
  RationalMatrix m(rows.size(), source.dim());
  for (std::size_t b = 0; b < rows.size(); ++b) {
    atoms.push_back(prefix + std::to_string(b));
    weights.push_back(rows[b].weight);
    if (rows[b].column) m.at(b, *rows[b].column) = rows[b].entry;
  }
  return LatticeMap(source, AtomicL1(std::move(atoms), std::move(weights), prefix), std::move(m));
}

LatticeMap random_contraction(Rng& rng, const AtomicL1& source, const AtomicL1& target) {
  RationalMatrix m(target.dim(), source.dim());
  bool zero_map = uniform(rng, 0, 9) == 0;
  for (std::size_t b = 0; b < target.dim() && !zero_map; ++b) {
    if (uniform(rng, 0, 3) == 0) continue;
    m.at(b, static_cast<std::size_t>(uniform(rng, 0, static_cast<long long>(source.dim()) - 1))) = rational(rng, 1, 4);
  }
  LatticeMap raw(source, target, m);
  Rational n = operator_norm(raw);
  if (sgn(n) == 0) return raw;
  Rational factor = uniform(rng, 0, 1) ? Rational(1) : rational(rng, 1, 4, 1) / 4;
  factor /= n;
  for (std::size_t b = 0; b < m.rows(); ++b) {
    for (std::size_t a = 0; a < m.cols(); ++a) m.at(b, a) *= factor;
  }
  return LatticeMap(source, target, std::move(m));
}

Vector random_witness(Rng& rng, const AtomicL1& space) {
  Vector x(space.dim());
  while (true) {
    for (auto& v : x) v = uniform(rng, 0, 2) == 0 ? Rational(0) : rational(rng, 1, 4);
    Rational n = norm(space, x);
    if (sgn(n) == 0) continue;
    for (auto& v : x) v /= n;
    return x;
  }
}

SquareInstance random_square(Rng& rng) {
  AtomicL1 x0 = random_lattice(rng, 3, "p");
  AtomicL1 x1 = random_lattice(rng, 5, "q");
  LatticeMap t2 = random_embedding(rng, x0, 6, "r");
  LatticeMap t1 = random_contraction(rng, x0, x1);
  return SquareInstance{std::move(t1), std::move(t2), random_witness(rng, x1)};
}

}  // namespace margo::gen
