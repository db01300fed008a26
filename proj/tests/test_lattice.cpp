#include "support.hpp"

#include "margo/error.hpp"
#include "margo/generate.hpp"
#include "margo/lattice.hpp"
#include "margo/square.hpp"

#include <doctest.h>

#include <vector>

using namespace margo;
using support::q;

namespace {

AtomicL1 lattice(std::vector<Rational> weights, const std::string& prefix = "a") {
  std::vector<std::string> atoms;
  for (std::size_t i = 0; i < weights.size(); ++i) atoms.push_back(prefix + std::to_string(i));
  return AtomicL1(atoms, weights);
}

RationalMatrix matrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries) {
  RationalMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = entries[r * cols + c];
  }
  return m;
}

Vector basis(std::size_t n, std::size_t i) {
  Vector e(n);
  e[i] = 1;
  return e;
}

}  // namespace

TEST_CASE("lattice spaces") {
  AtomicL1 x({"a", "b", "c"}, {q(1), q(0), q(2)});
  CHECK(x.dim() == 2);
  CHECK(x.atoms().atoms() == std::vector<std::string>{"a", "c"});
  CHECK(x.total_mass() == 3);
  CHECK_THROWS_AS(AtomicL1({"a"}, {q(-1)}), DomainError);
  CHECK_THROWS_AS(AtomicL1({"a"}, {}), CoordinateMismatch);
  AtomicL1 empty({}, {});
  CHECK(empty.dim() == 0);
  CHECK(norm(empty, {}) == 0);
}

TEST_CASE("lattice operations") {
  CHECK(abs(Vector{q(-1), q(2)}) == Vector{q(1), q(2)});
  CHECK(join(Vector{q(1), q(0)}, Vector{q(0), q(1)}) == Vector{q(1), q(1)});
  CHECK(meet(Vector{q(1), q(-3)}, Vector{q(0), q(1)}) == Vector{q(0), q(-3)});
  AtomicL1 x = lattice({q(1, 2), q(1, 3)});
  CHECK(norm(x, {q(2), q(-3)}) == 2);
  CHECK(integral(x, {q(2), q(-3)}) == 0);
  CHECK_THROWS_AS(join(Vector{q(1)}, Vector{q(1), q(2)}), CoordinateMismatch);
  CHECK_THROWS_AS(norm(x, {q(1)}), CoordinateMismatch);

  gen::Rng rng(53);
  for (int i = 0; i < 100; ++i) {
    AtomicL1 s = gen::random_lattice(rng, 5, "s");
    Vector a(s.dim()), b(s.dim());
    for (std::size_t k = 0; k < s.dim(); ++k) {
      a[k] = gen::rational(rng, -4, 4);
      b[k] = gen::rational(rng, -4, 4);
    }
    Vector sum(s.dim());
    for (std::size_t k = 0; k < s.dim(); ++k) sum[k] = abs(a[k]) + abs(b[k]);
    CHECK(norm(s, sum) == norm(s, a) + norm(s, b));
    CHECK(norm(s, a) == support::l1_norm(s, a));
  }
}

TEST_CASE("homomorphism and isometry checks") {
  CHECK(is_lattice_homomorphism(RationalMatrix::identity(3)));
  auto mixed = is_lattice_homomorphism(matrix(2, 2, {q(1), q(0), q(1), q(-1)}));
  CHECK_FALSE(mixed);
  REQUIRE(mixed.row);
  CHECK(*mixed.row == 1);
  auto spread = is_lattice_homomorphism(matrix(1, 2, {q(1), q(1)}));
  CHECK_FALSE(spread);
  CHECK(*spread.row == 0);

  AtomicL1 one = lattice({q(1)});
  AtomicL1 halves = lattice({q(1, 2), q(1, 2)}, "b");
  LatticeMap split(one, halves, matrix(2, 1, {q(1), q(1)}));
  CHECK(is_isometric_embedding(split));
  CHECK(support::isometric(split));
  CHECK(is_isometric_embedding(LatticeMap::identity(halves)));
  CHECK(operator_norm(split) == 1);

  LatticeMap heavy(one, halves, matrix(2, 1, {q(2), q(1)}));
  CHECK_FALSE(is_isometric_embedding(heavy));
  CHECK(operator_norm(heavy) == q(3, 2));

  LatticeMap zero_col(halves, one, matrix(1, 2, {q(1, 2), q(0)}));
  auto check = is_isometric_embedding(zero_col);
  CHECK_FALSE(check);
  REQUIRE(check.column);
  CHECK(*check.column == 1);

  CHECK_THROWS_AS(LatticeMap(one, halves, matrix(1, 1, {q(1)})), CoordinateMismatch);
  CHECK_THROWS_AS(LatticeMap(halves, halves, matrix(2, 2, {q(1), q(1), q(0), q(0)})), DomainError);

  LatticeMap merge(halves, one, matrix(1, 2, {q(0), q(1)}));
  CHECK(compose(merge, split).matrix() == matrix(1, 1, {q(1)}));
  CHECK_THROWS_AS(compose(split, split), CoordinateMismatch);
}

TEST_CASE("homomorphisms commute with the modulus") {
  gen::Rng rng(59);
  for (int i = 0; i < 150; ++i) {
    AtomicL1 s = gen::random_lattice(rng, 4, "s");
    AtomicL1 t = gen::random_lattice(rng, 5, "t");
    LatticeMap m = gen::random_contraction(rng, s, t);
    CHECK(is_lattice_homomorphism(m.matrix()));
    CHECK(operator_norm(m) <= 1);
    CHECK(operator_norm(m) == support::operator_norm(m));
    Vector x(s.dim()), y(s.dim());
    for (std::size_t k = 0; k < s.dim(); ++k) {
      x[k] = gen::rational(rng, -4, 4);
      y[k] = gen::rational(rng, -4, 4);
    }
    CHECK(m(abs(x)) == abs(m(x)));
    CHECK(m(join(x, y)) == join(m(x), m(y)));
    CHECK(m(meet(x, y)) == meet(m(x), m(y)));

    LatticeMap u = gen::random_embedding(rng, s, 8, "u");
    CHECK(is_isometric_embedding(u));
    CHECK(support::isometric(u));
    CHECK(norm(u.target(), u(x)) == norm(s, x));
  }
}

TEST_CASE("positive functionals") {
  AtomicL1 x = lattice({q(1, 2), q(1, 2)});
  CHECK_THROWS_AS(PositiveFunctional(x, {q(1), q(-1)}), DomainError);
  CHECK_THROWS_AS(PositiveFunctional(x, {q(1)}), CoordinateMismatch);
  PositiveFunctional f(x, {q(2), q(1)});
  CHECK(f.norm() == 2);
  CHECK(f({q(1), q(1)}) == q(3, 2));
  CHECK(PositiveFunctional(AtomicL1({}, {}), {}).norm() == 0);

  AtomicL1 one = lattice({q(1)}, "o");
  LatticeMap t(one, x, matrix(2, 1, {q(1), q(0)}));
  CHECK(pull_back(f, t).coeffs() == Vector{q(1)});
  CHECK_THROWS_AS(pull_back(PositiveFunctional(one, {q(1)}), t), CoordinateMismatch);
}

TEST_CASE("kakutani quotient") {
  AtomicL1 x = lattice({q(1, 2), q(1, 2)});
  auto full = kakutani_quotient(x, PositiveFunctional(x, {q(1), q(1)}));
  CHECK(full.space == x);
  CHECK(full.psi.matrix() == RationalMatrix::identity(2));

  auto first = kakutani_quotient(x, PositiveFunctional(x, {q(1), q(0)}));
  CHECK(first.space.dim() == 1);
  CHECK(first.support == std::vector<std::size_t>{0});
  CHECK(first.psi({q(5), q(7)}) == Vector{q(5)});

  PositiveFunctional f(x, {q(2), q(1)});
  auto k = kakutani_quotient(x, f);
  CHECK(k.space.weights() == std::vector<Rational>{q(1), q(1, 2)});
  CHECK(norm(k.space, k.psi({q(1), q(1)})) == q(3, 2));

  auto none = kakutani_quotient(x, PositiveFunctional(x, {q(0), q(0)}));
  CHECK(none.space.dim() == 0);
  CHECK(none.psi.matrix().rows() == 0);

  gen::Rng rng(61);
  for (int i = 0; i < 100; ++i) {
    AtomicL1 s = gen::random_lattice(rng, 5, "s");
    Vector coeffs(s.dim());
    for (auto& c : coeffs) c = gen::uniform(rng, 0, 2) == 0 ? Rational(0) : gen::rational(rng, 0, 3);
    PositiveFunctional g(s, coeffs);
    auto quotient = kakutani_quotient(s, g);
    Vector z(s.dim());
    for (auto& v : z) v = gen::rational(rng, -3, 3);
    CHECK(norm(quotient.space, quotient.psi(z)) == g(abs(z)));
    CHECK(integral(quotient.space, quotient.psi(z)) == g(z));
  }
}

TEST_CASE("norming functionals") {
  AtomicL1 x = lattice({q(1, 2), q(1, 2)});
  auto n = norming_functional(x, {q(1), q(1)});
  CHECK(n.functional.coeffs() == Vector{q(1), q(1)});
  CHECK(n.probability.weights() == std::vector<Rational>{q(1, 2), q(1, 2)});

  n = norming_functional(x, {q(2), q(0)});
  CHECK(n.functional.coeffs() == Vector{q(1), q(0)});
  CHECK(n.probability.weights() == std::vector<Rational>{q(1)});

  AtomicL1 y = lattice({q(3, 4), q(1, 4)});
  n = norming_functional(y, {q(1, 3), q(3)});
  CHECK(n.probability.weights() == std::vector<Rational>{q(1, 4), q(3, 4)});
  CHECK(n.functional({q(1, 3), q(3)}) == 1);
  CHECK(n.functional.norm() == 1);
  CHECK(n.psi({q(1, 3), q(3)}) == Vector{q(1), q(1)});

  CHECK_THROWS_AS(norming_functional(x, {q(1), q(0)}), PreconditionError);
  CHECK_THROWS_AS(norming_functional(x, {q(3), q(-1)}), PreconditionError);
  CHECK_THROWS_AS(norming_functional(x, {q(2)}), PreconditionError);

  gen::Rng rng(67);
  for (int i = 0; i < 100; ++i) {
    AtomicL1 s = gen::random_lattice(rng, 5, "s");
    Vector w = gen::random_witness(rng, s);
    auto m = norming_functional(s, w);
    CHECK(m.functional(w) == 1);
    CHECK(m.functional.norm() == 1);
    CHECK(m.probability.total_mass() == 1);
  }
}

TEST_CASE("functional extension") {
  AtomicL1 x = lattice({q(1, 2), q(1, 2)});
  PositiveFunctional f(x, {q(3), q(1, 2)});
  CHECK(extend_positive_functional(f, LatticeMap::identity(x)) == f);

  AtomicL1 one = lattice({q(1)}, "o");
  LatticeMap split(one, x, matrix(2, 1, {q(1), q(1)}));
  CHECK(extend_positive_functional(PositiveFunctional(one, {q(5, 3)}), split).coeffs() == Vector{q(5, 3), q(5, 3)});

  AtomicL1 three = lattice({q(1, 2), q(1, 2), q(1)}, "t");
  LatticeMap partial(one, three, matrix(3, 1, {q(1), q(1), q(0)}));
  auto ext = extend_positive_functional(PositiveFunctional(one, {q(2)}), partial);
  CHECK(ext.coeffs() == Vector{q(2), q(2), q(0)});
  CHECK(ext.norm() == 2);
  CHECK(ext(partial(Vector{q(1)})) == 2);

  LatticeMap heavy(one, x, matrix(2, 1, {q(2), q(1)}));
  CHECK_THROWS_AS(extend_positive_functional(PositiveFunctional(one, {q(1)}), heavy), PreconditionError);

  gen::Rng rng(71);
  for (int i = 0; i < 100; ++i) {
    AtomicL1 s = gen::random_lattice(rng, 4, "s");
    LatticeMap u = gen::random_embedding(rng, s, 8, "u");
    Vector coeffs(s.dim());
    for (auto& c : coeffs) c = gen::rational(rng, 0, 3);
    PositiveFunctional g(s, coeffs);
    auto e = extend_positive_functional(g, u);
    CHECK(e.norm() == g.norm());
    for (std::size_t a = 0; a < s.dim(); ++a) CHECK(e(u(basis(s.dim(), a))) == g(basis(s.dim(), a)));
  }
}

namespace {

void check_closure(const SquareClosure& c, const LatticeMap& t1, const LatticeMap& t2, const Vector& x1) {
  auto lhs = support::multiply(support::dense(c.s1.matrix()), support::dense(t1.matrix()), t1.target().dim(),
                               t1.source().dim());
  auto rhs = support::multiply(support::dense(c.s2.matrix()), support::dense(t2.matrix()), t2.target().dim(),
                               t2.source().dim());
  CHECK(lhs == rhs);
  CHECK(support::operator_norm(c.s1) <= 1);
  CHECK(support::operator_norm(c.s2) <= 1);
  CHECK(support::l1_norm(c.target, c.s1(x1)) == 1);
  CHECK(is_lattice_homomorphism(c.s1.matrix()));
  CHECK(is_lattice_homomorphism(c.s2.matrix()));
}

}  // namespace

TEST_CASE("close_square examples") {
  AtomicL1 x = lattice({q(1, 2), q(1, 2)});
  LatticeMap id = LatticeMap::identity(x);
  Vector w{q(3, 2), q(1, 2)};
  auto c = close_square(id, id, w);
  check_closure(c, id, id, w);
  CHECK_FALSE(c.degenerate);
  // both legs agree with the quotient map of the norming functional
  auto n = norming_functional(x, w);
  CHECK(c.s1.matrix() == c.s2.matrix());
  CHECK(c.x1 == n.functional);

  AtomicL1 pair = lattice({q(1, 4), q(3, 4)}, "p");
  AtomicL1 one = lattice({q(1)}, "o");
  LatticeMap drop(pair, one, matrix(1, 2, {q(1, 4), q(0)}));
  LatticeMap split(pair, lattice({q(1, 8), q(1, 8), q(3, 4), q(1, 2)}, "s"),
                   matrix(4, 2, {q(1), q(0), q(1), q(0), q(0), q(1), q(0), q(0)}));
  REQUIRE(is_isometric_embedding(split));
  REQUIRE(operator_norm(drop) == 1);
  c = close_square(drop, split, Vector{q(1)});
  check_closure(c, drop, split, Vector{q(1)});

  LatticeMap zero(pair, one, RationalMatrix(1, 2));
  c = close_square(zero, split, Vector{q(1)});
  CHECK(c.degenerate);
  check_closure(c, zero, split, Vector{q(1)});
}

TEST_CASE("close_square preconditions") {
  AtomicL1 x = lattice({q(1, 2), q(1, 2)});
  LatticeMap id = LatticeMap::identity(x);
  LatticeMap doubled(x, x, matrix(2, 2, {q(2), q(0), q(0), q(1)}));
  CHECK_THROWS_AS(close_square(doubled, id, Vector{q(1), q(1)}), PreconditionError);
  CHECK_THROWS_AS(close_square(id, doubled, Vector{q(1), q(1)}), PreconditionError);
  CHECK_THROWS_AS(close_square(id, id, Vector{q(1), q(0)}), PreconditionError);
  AtomicL1 other = lattice({q(1)}, "o");
  LatticeMap elsewhere = LatticeMap::identity(other);
  CHECK_THROWS_AS(close_square(id, elsewhere, Vector{q(1), q(1)}), CoordinateMismatch);
}

TEST_CASE("random squares close") {
  gen::Rng rng(73);
  int degenerate = 0;
  for (int i = 0; i < 150; ++i) {
    auto inst = gen::random_square(rng);
    CAPTURE(i);
    auto c = close_square(inst.t1, inst.t2, inst.x1);
    check_closure(c, inst.t1, inst.t2, inst.x1);
    if (c.degenerate) ++degenerate;
  }
  CHECK(degenerate > 0);
}
