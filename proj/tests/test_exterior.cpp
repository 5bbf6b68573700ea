#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "forge/exterior.hpp"
#include "support.hpp"

using namespace forge;
using testing::same_field;
using testing::same_form;

namespace {

DifferentialForm coframe(int n, int i) { return DifferentialForm::coframe(n, i); }
DifferentialForm fn(int n, const Expr& f) { return DifferentialForm::scalar(n, f); }
Expr X(int i) { return Expr::coordinate(i); }

DifferentialForm random_form(std::mt19937_64& rng, int n, int p) {
  DifferentialForm out(n, p);
  for (Mask m = 0; m < (Mask{1} << n); ++m)
    if (popcount(m) == p) out.add(m, testing::random_polynomial(rng, n, 2));
  return out;
}

VectorField random_field(std::mt19937_64& rng, int n) {
  std::vector<Expr> c;
  for (int i = 0; i < n; ++i) c.push_back(testing::random_polynomial(rng, n, 2));
  return VectorField(c);
}

}  // namespace

TEST_CASE("wedge") {
  SampleDomain d = SampleDomain::box(3, -2, 2);
  CHECK(same_form(wedge(coframe(2, 0), coframe(2, 1)), -wedge(coframe(2, 1), coframe(2, 0)), d));
  DifferentialForm xdy = coframe(3, 1).scaled(X(0));
  DifferentialForm expect(3, 2);
  expect.add(0b110, X(0));
  CHECK(same_form(wedge(xdy, coframe(3, 2)), expect, d));
  // dφ ∧ (z dφ + dz) = dφ∧dz
  DifferentialForm g = coframe(2, 0).scaled(X(1)) + coframe(2, 1);
  CHECK(same_form(wedge(coframe(2, 0), g), wedge(coframe(2, 0), coframe(2, 1)), d));
  std::mt19937_64 rng(1);
  for (int k = 0; k < 10; ++k) {
    auto a = random_form(rng, 3, 1), b = random_form(rng, 3, 2), c = random_form(rng, 3, 1);
    CHECK(same_form(wedge(a, b), wedge(b, a), d));
    CHECK(same_form(wedge(a, c), -wedge(c, a), d));
  }
}

TEST_CASE("exterior derivative") {
  SampleDomain d = SampleDomain::box(2, -2, 2);
  // x dy − y dx ↦ 2 dx∧dy
  DifferentialForm g = coframe(2, 1).scaled(X(0)) - coframe(2, 0).scaled(X(1));
  DifferentialForm expect(2, 2);
  expect.add(0b11, Expr(2));
  CHECK(same_form(exterior_derivative(g), expect, d));
  CHECK(exterior_derivative(wedge(coframe(2, 0), coframe(2, 1))).coefficients().empty());
  DifferentialForm cyl = coframe(2, 0).scaled(X(1)) + coframe(2, 1);
  CHECK(same_form(exterior_derivative(cyl), -wedge(coframe(2, 0), coframe(2, 1)), d));
}

TEST_CASE("d squared and Leibniz on random forms") {
  std::mt19937_64 rng(2);
  SampleDomain d = SampleDomain::box(4, -2, 2);
  for (int p = 0; p <= 3; ++p)
    for (int k = 0; k < 50; ++k) {
      auto a = random_form(rng, 4, p);
      auto dd = exterior_derivative(exterior_derivative(a));
      CHECK(same_form(dd, DifferentialForm(4, p + 2), d));
    }
  for (int k = 0; k < 10; ++k) {
    auto a = random_form(rng, 4, 1), b = random_form(rng, 4, 2);
    auto lhs = exterior_derivative(wedge(a, b));
    auto rhs = wedge(exterior_derivative(a), b) - wedge(a, exterior_derivative(b));
    CHECK(same_form(lhs, rhs, d));
  }
}

TEST_CASE("interior product") {
  SampleDomain d = SampleDomain::box(2, -2, 2);
  DifferentialForm w = wedge(coframe(2, 0), coframe(2, 1));
  CHECK(same_form(interior(VectorField({Expr(1), Expr(0)}), w), coframe(2, 1), d));
  // ι_{∂φ − z∂z}(dφ∧dz) = dz + z dφ
  VectorField rho({Expr(1), -X(1)});
  CHECK(same_form(interior(rho, w), coframe(2, 1) + coframe(2, 0).scaled(X(1)), d));
  CHECK(interior(VectorField({Expr(0), Expr(1)}), coframe(2, 0).scaled(X(1))).coefficients().empty());
  std::mt19937_64 rng(3);
  SampleDomain d3 = SampleDomain::box(3, -2, 2);
  for (int k = 0; k < 10; ++k) {
    auto v = random_field(rng, 3);
    auto a = random_form(rng, 3, 2);
    CHECK(same_form(interior(v, interior(v, a)), DifferentialForm(3, 0), d3));
  }
}

TEST_CASE("Lie bracket") {
  SampleDomain d = SampleDomain::box(3, -2, 2);
  VectorField zeta({Expr(1), X(2), Expr(0)}), eta({Expr(0), Expr(0), Expr(1)});
  CHECK(same_field(lie_bracket(zeta, eta), VectorField({Expr(0), Expr(-1), Expr(0)}), d));
  CHECK(same_field(lie_bracket(VectorField({Expr(1), Expr(0)}), VectorField({Expr(0), Expr(1)})),
                   VectorField({Expr(0), Expr(0)}), d));
  CHECK(same_field(lie_bracket(VectorField({Expr(1), -X(1)}), VectorField({Expr(0), Expr(1)})),
                   VectorField({Expr(0), Expr(1)}), d));
  std::mt19937_64 rng(4);
  for (int k = 0; k < 10; ++k) {
    auto u = random_field(rng, 3), v = random_field(rng, 3), w = random_field(rng, 3);
    auto jac = lie_bracket(u, lie_bracket(v, w)) + lie_bracket(v, lie_bracket(w, u)) + lie_bracket(w, lie_bracket(u, v));
    CHECK(same_field(jac, VectorField(std::vector<Expr>(3)), d));
    CHECK(same_field(lie_bracket(u, v), VectorField(std::vector<Expr>(3)) - lie_bracket(v, u), d));
  }
}

TEST_CASE("Lie derivative") {
  SampleDomain d = SampleDomain::box(2, -2, 2);
  DifferentialForm w = wedge(coframe(2, 0), coframe(2, 1));
  VectorField euler({-X(0), -X(1)});
  CHECK(same_form(lie_derivative(euler, w), w.scaled(Expr(-2)), d));
  CHECK(same_form(lie_derivative(VectorField({Expr(1), Expr(0)}), w), DifferentialForm(2, 2), d));
  // ι_n ω = p dq + dp, with ω = dq∧dp: n = (1, −p)
  VectorField n({Expr(1), -X(1)});
  CHECK(same_form(interior(n, w), coframe(2, 0).scaled(X(1)) + coframe(2, 1), d));
  CHECK(same_form(lie_derivative(n, w) + w, DifferentialForm(2, 2), d));
}

TEST_CASE("Cartan identities on random inputs") {
  std::mt19937_64 rng(5);
  SampleDomain d = SampleDomain::box(3, -2, 2);
  for (int k = 0; k < 10; ++k) {
    auto v = random_field(rng, 3), w = random_field(rng, 3);
    auto a = random_form(rng, 3, 2);
    auto cartan = interior(v, exterior_derivative(a)) + exterior_derivative(interior(v, a));
    CHECK(same_form(lie_derivative(v, a), cartan, d));
    auto lhs = interior(lie_bracket(v, w), a);
    auto rhs = lie_derivative(v, interior(w, a)) - interior(w, lie_derivative(v, a));
    CHECK(same_form(lhs, rhs, d));
  }
}

TEST_CASE("forms print with coordinate names") {
  DifferentialForm g = coframe(2, 0).scaled(X(1)) + coframe(2, 1);
  std::string s = g.str(prefixed("d", {"phi", "z"}), {"phi", "z"});
  CHECK(s.find("dphi") != std::string::npos);
  CHECK(s.find("dz") != std::string::npos);
}
