#include "margo/amalgam.hpp"

#include "margo/error.hpp"
#include "margo/positive.hpp"
#include "margo/signed.hpp"

namespace margo {

namespace {

void require_positive(const Measure& m, const char* what) {
  if (!m.is_positive()) throw DomainError(std::string(what) + " is not a positive measure");
}

void require_preserving(const AtomMap& f, const Measure& source, const Measure& target, const char* what) {
  auto report = is_measure_preserving(f, source, target);
  if (!report) {
    throw PreconditionError(std::string(what) + " is not measure-preserving: preimage of \"" +
                            f.target().label(*report.witness) + "\" has mass " + to_string(report.actual) +
                            ", expected " + to_string(report.expected));
  }
}

}  // namespace

AmalgamResult amalgamate_maps(const Measure& nu0, const Measure& nu1, const Measure& nu2, const AtomMap& f1,
                              const AtomMap& f2) {
  require_positive(nu0, "nu0");
  require_positive(nu1, "nu1");
  require_positive(nu2, "nu2");
  const FiniteSpace& x0 = nu0.space().only_space();
  const FiniteSpace& x1 = nu1.space().only_space();
  const FiniteSpace& x2 = nu2.space().only_space();
  if (!(f1.source() == x1) || !(f1.target() == x0)) throw CoordinateMismatch("f1 must map X1 to X0");
  if (!(f2.source() == x2) || !(f2.target() == x0)) throw CoordinateMismatch("f2 must map X2 to X0");
  require_preserving(f1, nu1, nu0, "f1");
  require_preserving(f2, nu2, nu0, "f2");

  Measure m0 = Measure::on(x0, nu0.weights(), 0);
  Measure m1 = Measure::on(x1, nu1.weights(), 1);
  Measure m2 = Measure::on(x2, nu2.weights(), 2);
  ProductSpace joint(std::map<Coord, FiniteSpace>{{0, x0}, {1, x1}, {2, x2}});
  MarginalFamily family(joint, {
                                   Member{CoordSet{0}, m0},
                                   Member{CoordSet{1}, m1},
                                   Member{CoordSet{2}, m2},
                                   Member{CoordSet{0, 1}, graph_measure(f1, m1, 0)},
                                   Member{CoordSet{0, 2}, graph_measure(f2, m2, 0)},
                               });
  auto order = is_decomposable(family.coord_sets());
  if (!order) throw InvariantViolation("the cospan family has no running-intersection order");
  Measure glued = glue_decomposable(family, *order);

  std::vector<std::string> labels;
  std::vector<Rational> weights;
  std::vector<std::size_t> image1;
  std::vector<std::size_t> image2;
  for (std::size_t atom = 0; atom < joint.size(); ++atom) {
    auto t = joint.decode(atom);
    bool on_fiber = f1(t[1]) == t[0] && f2(t[2]) == t[0];
    if (!on_fiber) {
      if (sgn(glued[atom]) != 0) {
        throw InvariantViolation("glued measure charges the triple \"" + joint.label(atom) +
                                 "\" outside the fiber product");
      }
      continue;
    }
    labels.push_back(joint.label(atom));
    weights.push_back(glued[atom]);
    image1.push_back(t[1]);
    image2.push_back(t[2]);
  }
  FiniteSpace space3("X3", std::move(labels));
  AmalgamResult out{space3, Measure::on(space3, std::move(weights)), AtomMap(space3, x1, std::move(image1)),
                    AtomMap(space3, x2, std::move(image2)), std::move(glued)};

  if (!is_measure_preserving(out.g1, out.nu3, m1) || !is_measure_preserving(out.g2, out.nu3, m2)) {
    throw InvariantViolation("projections of the amalgam are not measure-preserving");
  }
  if (!(compose(f1, out.g1) == compose(f2, out.g2))) throw InvariantViolation("amalgam square does not commute");
  return out;
}

AtomMap extract_iwanik_map(const LatticeMap& u) {
  const auto& m = u.matrix();
  std::vector<std::size_t> image(m.rows());
  for (std::size_t b = 0; b < m.rows(); ++b) {
    std::optional<std::size_t> hit;
    for (std::size_t a = 0; a < m.cols(); ++a) {
      if (sgn(m.at(b, a)) == 0) continue;
      if (m.at(b, a) != 1) {
        throw NotCompositionOperator("entry " + to_string(m.at(b, a)) + " at row \"" + u.target().atoms().label(b) +
                                     "\" is neither 0 nor 1");
      }
      hit = a;
    }
    if (!hit) throw NotCompositionOperator("row \"" + u.target().atoms().label(b) + "\" has no nonzero entry");
    image[b] = *hit;
  }
  AtomMap f(u.target().atoms(), u.source().atoms(), std::move(image));
  require_preserving(f, u.target().measure(), u.source().measure(), "composition map");
  return f;
}

L1AmalgamResult amalgamate_l1(const LatticeMap& u1, const LatticeMap& u2) {
  if (!(u1.source() == u2.source())) throw CoordinateMismatch("u1 and u2 must share their source lattice");
  for (const LatticeMap* u : {&u1, &u2}) {
    if (auto check = is_isometric_embedding(*u); !check) {
      throw PreconditionError("not an isometric lattice embedding: " + check.reason);
    }
  }
  const AtomicL1& base = u1.source();
  Rational total = base.total_mass();
  Rational scale = sgn(total) > 0 ? Rational(1 / total) : Rational(1);

  std::vector<Rational> base_weights(base.weights());
  for (auto& w : base_weights) w *= scale;
  AtomicL1 scaled_base(base.atoms().atoms(), base_weights, base.name());

  // u_i(1), its support S_i, the tilted measure on S_i and the normalised
  // composition operator into it
  struct Side {
    std::vector<Rational> indicator;
    std::vector<std::size_t> support;
    AtomicL1 tilted;
    AtomMap f{FiniteSpace(), FiniteSpace(), {}};
  };
  auto build_side = [&](const LatticeMap& u) {
    Side side;
    const auto& m = u.matrix();
    side.indicator.assign(m.rows(), Rational(0));
    std::vector<std::string> labels;
    std::vector<Rational> weights;
    for (std::size_t b = 0; b < m.rows(); ++b) {
      for (std::size_t a = 0; a < m.cols(); ++a) side.indicator[b] += m.at(b, a);
      if (sgn(side.indicator[b]) == 0) continue;
      side.support.push_back(b);
      labels.push_back(u.target().atoms().label(b));
      weights.push_back(scale * side.indicator[b] * u.target().weights()[b]);
    }
    side.tilted = AtomicL1(std::move(labels), std::move(weights));
    RationalMatrix normalised(side.support.size(), m.cols());
    for (std::size_t k = 0; k < side.support.size(); ++k) {
      std::size_t b = side.support[k];
      for (std::size_t a = 0; a < m.cols(); ++a) normalised.at(k, a) = m.at(b, a) / side.indicator[b];
    }
    side.f = extract_iwanik_map(LatticeMap(scaled_base, side.tilted, std::move(normalised)));
    return side;
  };
  Side left = build_side(u1);
  Side right = build_side(u2);

  AmalgamResult glue = amalgamate_maps(scaled_base.measure(), left.tilted.measure(), right.tilted.measure(),
                                       left.f, right.f);

  // target = glued block (positive-mass triples) + X1 \ S1 + X2 \ S2
  std::vector<std::string> labels;
  std::vector<Rational> weights;
  std::vector<std::size_t> glued_atoms;
  for (std::size_t t = 0; t < glue.space3.size(); ++t) {
    if (sgn(glue.nu3[t]) == 0) continue;
    glued_atoms.push_back(t);
    labels.push_back("glue:" + glue.space3.label(t));
    weights.push_back(glue.nu3[t] / scale);
  }
  auto complement = [](const LatticeMap& u, const Side& side) {
    std::vector<std::size_t> out;
    std::size_t k = 0;
    for (std::size_t b = 0; b < u.target().dim(); ++b) {
      if (k < side.support.size() && side.support[k] == b) {
        ++k;
        continue;
      }
      out.push_back(b);
    }
    return out;
  };
  std::vector<std::size_t> left_rest = complement(u1, left);
  std::vector<std::size_t> right_rest = complement(u2, right);
  for (std::size_t b : left_rest) {
    labels.push_back("left:" + u1.target().atoms().label(b));
    weights.push_back(u1.target().weights()[b]);
  }
  for (std::size_t b : right_rest) {
    labels.push_back("right:" + u2.target().atoms().label(b));
    weights.push_back(u2.target().weights()[b]);
  }
  std::vector<Block> blocks{
      Block{"glued", 0, glued_atoms.size()},
      Block{"left", glued_atoms.size(), left_rest.size()},
      Block{"right", glued_atoms.size() + left_rest.size(), right_rest.size()},
  };
  AtomicL1 target(std::move(labels), std::move(weights), "X3");

  // v_i(h) = v~_i((h / 1_i)|S_i) on the glued block, h itself on the own complement block
  auto build_v = [&](const LatticeMap& u, const Side& side, const AtomMap& g, const std::vector<std::size_t>& rest,
                     const Block& own) {
    RationalMatrix v(target.dim(), u.target().dim());
    for (std::size_t k = 0; k < glued_atoms.size(); ++k) {
      std::size_t b = side.support[g(glued_atoms[k])];
      v.at(k, b) = 1 / side.indicator[b];
    }
    for (std::size_t k = 0; k < rest.size(); ++k) v.at(own.offset + k, rest[k]) = 1;
    return LatticeMap(u.target(), target, std::move(v));
  };
  LatticeMap v1 = build_v(u1, left, glue.g1, left_rest, blocks[1]);
  LatticeMap v2 = build_v(u2, right, glue.g2, right_rest, blocks[2]);

  for (const LatticeMap* v : {&v1, &v2}) {
    if (auto check = is_isometric_embedding(*v); !check) {
      throw InvariantViolation("amalgam embedding is not isometric: " + check.reason);
    }
  }
  if (!(v1.matrix() * u1.matrix() == v2.matrix() * u2.matrix())) {
    throw InvariantViolation("amalgam square does not commute");
  }
  return L1AmalgamResult{std::move(target), std::move(v1), std::move(v2), std::move(blocks), std::move(glue), scale};
}

}  // namespace margo
