#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "forge/catalog.hpp"
#include "forge/hamiltonian.hpp"
#include "forge/random_models.hpp"
#include "support.hpp"

using namespace forge;
using testing::same;
using testing::same_field;
using testing::same_form;

namespace {

Expr X(int i) { return Expr::coordinate(i); }

Chart plane() { return Chart({"x", "y"}, SampleDomain::box(2, -2, 2)); }

Section random_section(std::mt19937_64& rng, int n, int r) {
  std::vector<Expr> c;
  for (int i = 0; i < r; ++i) c.push_back(testing::random_polynomial(rng, n, 2));
  return Section(c);
}

AForm random_aform(std::mt19937_64& rng, int n, int r, int p) {
  AForm out(r, p);
  for (Mask m = 0; m < (Mask{1} << r); ++m)
    if (popcount(m) == p) out.add(m, testing::random_polynomial(rng, n, 2));
  return out;
}

// Twisted tangent algebroid: a_0 = ∂x, a_1 = f ∂x + ∂y, [a_0, a_1] = f_x a_0.
LieAlgebroid twisted(const Expr& f) {
  LieAlgebroid L(plane(), {VectorField({Expr(1), Expr(0)}), VectorField({f, Expr(1)})});
  L.set_structure(0, 1, 0, f.diff(0));
  return L;
}

}  // namespace

TEST_CASE("structure constants are antisymmetric") {
  LieAlgebroid L = twisted(X(0) * X(1));
  SampleDomain d = L.chart.domain;
  CHECK(same(L.structure(1, 0, 0), -X(1), d));
  CHECK(L.structure(0, 0, 0).is_zero());
}

TEST_CASE("bracket on frames and Leibniz rule") {
  LieAlgebroid L = twisted(X(0) * X(0) + X(1));
  SampleDomain d = L.chart.domain;
  Section b01 = algebroid_bracket(L, L.frame(0), L.frame(1));
  CHECK(same_field(b01, (Expr(2) * X(0)) * L.frame(0), d));
  std::mt19937_64 rng(7);
  for (int k = 0; k < 10; ++k) {
    Section a = random_section(rng, 2, 2), b = random_section(rng, 2, 2);
    Expr f = testing::random_polynomial(rng, 2, 2);
    Section lhs = algebroid_bracket(L, a, f * b);
    Section rhs = f * algebroid_bracket(L, a, b) + anchor_apply(L, a).apply(f) * b;
    CHECK(same_field(lhs, rhs, d));
    CHECK(same_field(algebroid_bracket(L, a, b), Expr(-1) * algebroid_bracket(L, b, a), d));
  }
}

TEST_CASE("axioms on valid algebroids") {
  SampleDomain d = SampleDomain::box(2, -2, 2);
  CHECK(check_axioms(tangent_algebroid(plane()), d).all_pass());
  CHECK(check_axioms(twisted(X(0) * X(1) * X(1) - X(0)), d).all_pass());
  for (const auto& rm : random_models(8, 3)) CHECK(check_axioms(rm.model.algebroid, d).all_pass());
  for (const auto& name : catalog_names()) {
    auto e = catalog_entry(name);
    CHECK_MESSAGE(check_axioms(e.model.algebroid, e.model.algebroid.chart.domain).all_pass() == (name != "example-2.11"),
                  name);
  }
}

TEST_CASE("anchor morphism failure") {
  // [∂x, x∂y] = ∂y but the bracket is declared abelian.
  LieAlgebroid L(plane(), {VectorField({Expr(1), Expr(0)}), VectorField({Expr(0), X(0)})});
  AxiomReport r = check_axioms(L, L.chart.domain);
  CHECK(r.anchor_morphism.failed());
  REQUIRE(r.anchor_morphism.witness);
}

TEST_CASE("Jacobi failure is reported with a witness") {
  AlgebroidModel m = jacobi_violating_model(0);
  AxiomReport r = check_axioms(m.algebroid, m.algebroid.chart.domain);
  CHECK(r.jacobi.failed());
  CHECK(r.anchor_morphism.passed());
  REQUIRE(r.jacobi.witness);
  CHECK(r.jacobi.witness->value != 0.0);
  CHECK(r.d_squared.failed());
}

TEST_CASE("algebroid differential squares to zero") {
  std::mt19937_64 rng(8);
  LieAlgebroid L = twisted(X(0) * X(1) + Expr(2));
  SampleDomain d = L.chart.domain;
  for (int p = 0; p <= 1; ++p)
    for (int k = 0; k < 10; ++k) {
      AForm nu = random_aform(rng, 2, 2, p);
      CHECK(same_form(algebroid_differential(L, algebroid_differential(L, nu)), AForm(2, p + 2), d));
    }
}

TEST_CASE("differential of a function and of a 1-form") {
  std::mt19937_64 rng(9);
  LieAlgebroid L = twisted(X(1) * X(1));
  SampleDomain d = L.chart.domain;
  for (int k = 0; k < 10; ++k) {
    Expr f = testing::random_polynomial(rng, 2, 3);
    AForm df = algebroid_differential(L, AForm::scalar(2, f));
    for (int i = 0; i < 2; ++i) CHECK(same(df.get(Mask{1} << i), L.anchor[i].apply(f), d));
    AForm mu = random_aform(rng, 2, 2, 1);
    Section a = L.frame(0), b = L.frame(1);
    Expr expect = anchor_apply(L, a).apply(pairing(mu, b)) - anchor_apply(L, b).apply(pairing(mu, a)) -
                  pairing(mu, algebroid_bracket(L, a, b));
    CHECK(same(algebroid_differential(L, mu).get(0b11), expect, d));
  }
}

TEST_CASE("anchor pullback") {
  LieAlgebroid T = tangent_algebroid(plane());
  SampleDomain d = T.chart.domain;
  DifferentialForm w = wedge(DifferentialForm::coframe(2, 0), DifferentialForm::coframe(2, 1)).scaled(X(0));
  AForm pw = anchor_pullback(T, w);
  CHECK(same(pw.get(0b11), X(0), d));
  AnchoredBundle radial(plane(), {VectorField({X(0), X(1)})});
  CHECK(anchor_pullback(radial, w).coefficients().empty());
  AForm p1 = anchor_pullback(radial, DifferentialForm::coframe(2, 1));
  CHECK(same(p1.get(0b1), X(1), d));
}

TEST_CASE("pairing") {
  AForm mu(2, 1);
  mu.add(0b01, X(0));
  mu.add(0b10, Expr(3));
  SampleDomain d = SampleDomain::box(2, -2, 2);
  CHECK(same(pairing(mu, Section({X(1), Expr(1)})), X(0) * X(1) + Expr(3), d));
}
