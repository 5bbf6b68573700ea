#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "forge/expr.hpp"
#include "support.hpp"

using namespace forge;
using testing::random_polynomial;

namespace {

const std::vector<std::string> xy{"x", "y"};
const std::vector<std::string> phiz{"phi", "z"};

double at(const Expr& e, std::vector<double> p) { return e.evaluate(p); }

Expr random_tree(std::mt19937_64& rng, int n, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 6 : 1), var(0, n - 1), c(-3, 3);
  switch (pick(rng)) {
    case 0:
      return Expr(c(rng));
    case 1:
      return Expr::coordinate(var(rng));
    case 2:
      return random_tree(rng, n, depth - 1) + random_tree(rng, n, depth - 1);
    case 3:
      return random_tree(rng, n, depth - 1) * random_tree(rng, n, depth - 1);
    case 4:
      return sin(random_tree(rng, n, depth - 1));
    case 5:
      return cos(random_tree(rng, n, depth - 1));
    default:
      return pow(random_tree(rng, n, depth - 1), 2);
  }
}

}  // namespace

TEST_CASE("parse builds the expected trees") {
  Expr e = parse("z*sin(phi)", phiz);
  CHECK(e.kind() == NodeKind::Product);
  REQUIRE(e.children().size() == 2);
  CHECK(e.children()[0].kind() == NodeKind::Coordinate);
  CHECK(e.children()[0].coordinate_index() == 1);
  CHECK(e.children()[1].kind() == NodeKind::Sin);
  CHECK(e.children()[1].children()[0].coordinate_index() == 0);

  CHECK(at(parse("x^2 + 2*x*y", xy), {2, 1}) == doctest::Approx(8));
  CHECK(at(parse("-x^2", xy), {3, 0}) == doctest::Approx(-9));
  CHECK(at(parse("2^-1 * x", xy), {4, 0}) == doctest::Approx(2));
  CHECK(parse("0.25", xy).as_constant() == Rational(1, 4));
  CHECK(parse("3/6", xy).as_constant() == Rational(1, 2));
}

TEST_CASE("parse errors") {
  try {
    parse("q^(1/2)", {"q"});
    FAIL("expected error");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::NonIntegerExponent);
  }
  try {
    parse("x + w", xy);
    FAIL("expected error");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::UnknownIdentifier);
    CHECK(e.position() == 4);
  }
  CHECK_THROWS_AS(parse("x +", xy), ParseError);
  CHECK_THROWS_AS(parse("(x", xy), ParseError);
  CHECK_THROWS_AS(parse("x y", xy), ParseError);
}

TEST_CASE("round-trip through str") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 30; ++k) {
    Expr e = random_tree(rng, 2, 3);
    Expr back = parse(e.str(xy), xy);
    for (auto p : {std::vector<double>{0.3, -1.1}, std::vector<double>{1.7, 0.4}})
      CHECK(back.evaluate(p) == doctest::Approx(e.evaluate(p)).epsilon(1e-12));
  }
}

TEST_CASE("differentiation") {
  SampleDomain d = SampleDomain::box(2, -2, 2);
  CHECK(testing::same(parse("x^2*y", xy).diff(0), parse("2*x*y", xy), d));
  CHECK(testing::same(parse("z*sin(phi)", phiz).diff(1), parse("sin(phi)", phiz), d));
  CHECK(testing::same(parse("exp(phi)*z", phiz).diff(0), parse("exp(phi)*z", phiz), d));
  CHECK(testing::same(parse("1/x", xy).diff(0), parse("-1/x^2", xy), d));
}

TEST_CASE("derivative agrees with central differences") {
  std::mt19937_64 rng(11);
  SampleDomain d = SampleDomain::box(3, -2, 2);
  const double h = 1e-5;
  int checked = 0;
  for (int k = 0; k < 100; ++k) {
    Expr e = random_tree(rng, 3, 3);
    int var = k % 3;
    Expr de = e.diff(var);
    for (int s = 0; s < 10; ++s) {
      auto p = sample_point(d, static_cast<std::uint64_t>(k * 10 + s));
      auto pp = p, pm = p;
      pp[var] += h;
      pm[var] -= h;
      double fd = (e.evaluate(pp) - e.evaluate(pm)) / (2 * h);
      double exact = de.evaluate(p);
      CHECK(std::abs(fd - exact) <= 1e-6 * (1.0 + std::abs(exact)));
      ++checked;
    }
  }
  CHECK(checked == 1000);
}

TEST_CASE("evaluation") {
  CHECK(at(parse("(x+y)^2", xy), {1, 2}) == doctest::Approx(9));
  CHECK(at(parse("exp(phi)*z", phiz), {0, 3}) == doctest::Approx(3));
  std::vector<double> p{0.0, 1.0};
  Evaluation ev = parse("1/x", xy).evaluate_tracked(p);
  CHECK_FALSE(ev.finite);
}

TEST_CASE("zero test tiers") {
  SampleDomain d = SampleDomain::box(2, -2, 2);
  CHECK(is_identically_zero(parse("(x+y)^2 - x^2 - 2*x*y - y^2", xy), d).kind == ZeroKind::ExactZero);
  CHECK(is_identically_zero(parse("sin(x)^2 + cos(x)^2 - 1", xy), d).kind == ZeroKind::NumericallyZero);
  ZeroVerdict v = is_identically_zero(parse("x*y - 1", xy), d);
  REQUIRE(v.kind == ZeroKind::NonZero);
  REQUIRE(v.witness.size() == 2);
  CHECK(v.witness[0] * v.witness[1] - 1 == doctest::Approx(v.value));
}

TEST_CASE("zero test is deterministic and seed dependent") {
  SampleDomain a = SampleDomain::box(2, -2, 2), b = a;
  b.seed = 7;
  Expr e = parse("sin(x) - x", xy);
  auto v1 = is_identically_zero(e, a), v2 = is_identically_zero(e, a), v3 = is_identically_zero(e, b);
  CHECK(v1.witness == v2.witness);
  CHECK(v1.witness != v3.witness);
}

TEST_CASE("singular samples are rejected, exhaustion is reported") {
  SampleDomain d = SampleDomain::box(2, -2, 2);
  CHECK(is_identically_zero(parse("x/x - 1", xy), d).zero());
  SampleDomain pinned = d;
  pinned.intervals[0] = Interval{0.0, 0.0};
  CHECK_THROWS_AS(is_identically_zero(parse("sin(y)/x", xy), pinned), SamplingExhausted);
}

TEST_CASE("polynomial expansion is a ring homomorphism") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 50; ++k) {
    Expr a = random_polynomial(rng, 3, 3), b = random_polynomial(rng, 3, 3);
    REQUIRE(a.is_polynomial());
    REQUIRE(b.is_polynomial());
    Expr prod = Expr::raw_product({a, b});
    REQUIRE(prod.is_polynomial());
    CHECK(*prod.polynomial() == (*a.polynomial()) * (*b.polynomial()));
  }
}

TEST_CASE("nonzero polynomials never certify as exact zero") {
  std::mt19937_64 rng(9);
  SampleDomain d = SampleDomain::box(3, -2, 2);
  for (int k = 0; k < 50; ++k) {
    Expr a = random_polynomial(rng, 3, 3);
    Expr e = a * a + Expr(1);  // strictly positive
    ZeroVerdict v = is_identically_zero(e, d);
    CHECK(v.kind == ZeroKind::NonZero);
  }
}
