#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "forge/catalog.hpp"
#include "forge/hamiltonian.hpp"
#include "forge/random_models.hpp"
#include "support.hpp"

using namespace forge;
using testing::same;

namespace {

Expr X(int i) { return Expr::coordinate(i); }

const AlgebroidModel& model(const std::string& name) {
  static std::map<std::string, AlgebroidModel> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, catalog_entry(name).model).first;
  return it->second;
}

AForm one_form(std::vector<Expr> c) {
  AForm mu(static_cast<int>(c.size()), 1);
  for (std::size_t i = 0; i < c.size(); ++i) mu.add(Mask{1} << i, c[i]);
  return mu;
}

Verdict h2(const AlgebroidModel& m) {
  return check_H2(m.algebroid, *m.omega, *m.connection, *m.momentum, m.algebroid.chart.domain);
}
Verdict h3(const AlgebroidModel& m) { return check_H3(m.algebroid, *m.omega, *m.momentum, m.algebroid.chart.domain); }

FiniteLieAlgebra heisenberg() {
  FiniteLieAlgebra g(3);
  g.set_structure(0, 1, 2, Rational(1));
  return g;
}

RationalVector rv(std::initializer_list<int> v) {
  RationalVector out;
  for (int x : v) out.emplace_back(x);
  return out;
}

ExprVector ev(std::initializer_list<Expr> v) { return ExprVector(v); }

Chart plane(double q0 = -2, double q1 = 2) {
  SampleDomain d = SampleDomain::box(2, -2, 2);
  d.intervals[0] = Interval{q0, q1};
  return Chart({"q", "p"}, d);
}

PresymplecticStructure darboux() {
  DifferentialForm w(2, 2);
  w.add(0b11, Expr(1));
  return PresymplecticStructure(w);
}

}  // namespace

TEST_CASE("H2 examples") {
  CHECK(h2(model("cylinder")).passed());
  CHECK(h2(model("darboux-r2-noncompatible")).passed());
  AlgebroidModel zero = model("cylinder");
  zero.momentum = one_form({Expr(0)});
  CHECK(h2(zero).failed());
}

TEST_CASE("H3 examples") {
  CHECK(h3(model("cylinder")).passed());
  Verdict nc = h3(model("darboux-r2-noncompatible"));
  CHECK(nc.failed());
  REQUIRE(nc.witness);
  CHECK(nc.witness->value == doctest::Approx(-1.0));
  const auto& dar = model("darboux-r2-noncompatible");
  AForm res = h3_residual(dar.algebroid, *dar.omega, *dar.momentum);
  CHECK(same(res.get(0b11), Expr(-1), dar.algebroid.chart.domain));
  CHECK(h3(model("darboux-r2-compatible")).passed());
}

TEST_CASE("H3 right-hand side is antisymmetric") {
  for (const auto& name : catalog_names()) {
    const auto& m = model(name);
    if (!m.omega) continue;
    AForm p = anchor_pullback(m.algebroid, m.omega->omega);
    CHECK(p.degree() == 2);
  }
}

TEST_CASE("torsion criterion examples") {
  const auto& dar = model("darboux-r2-noncompatible");
  TorsionCriterion t = torsion_criterion(dar.algebroid, *dar.omega, *dar.connection, *dar.momentum,
                                         dar.algebroid.chart.domain);
  CHECK(t.precondition);
  CHECK(t.verdict.failed());
  const auto& cyl = model("cylinder");
  CHECK(torsion_criterion(cyl.algebroid, *cyl.omega, *cyl.connection, *cyl.momentum, cyl.algebroid.chart.domain)
            .verdict.passed());

  // Heisenberg bundle with ρ forced to zero and μ = θ^I.
  AlgebroidModel b = model("lie-algebra-bundle");
  b.momentum = one_form({Expr(0), Expr(0), Expr(1)});
  TorsionCriterion hb = torsion_criterion(b.algebroid, *b.omega, *b.connection, *b.momentum, b.algebroid.chart.domain);
  CHECK(hb.verdict.failed());
  REQUIRE(hb.verdict.witness);
  CHECK(std::abs(hb.verdict.witness->value) == doctest::Approx(1.0));

  // Without H2 the criterion reports the precondition distinctly.
  AlgebroidModel z = model("cylinder");
  z.momentum = one_form({Expr(0)});
  CHECK_FALSE(torsion_criterion(z.algebroid, *z.omega, *z.connection, *z.momentum, z.algebroid.chart.domain).precondition);
}

TEST_CASE("random models follow their construction") {
  for (const auto& rm : random_models(20, 0)) {
    CHECK_MESSAGE(h2(rm.model).passed() == rm.built_h2, rm.model.name);
    CHECK_MESSAGE(h3(rm.model).passed() == rm.built_h3, rm.model.name);
  }
}

TEST_CASE("torsion criterion agrees with H3 where H2 holds") {
  int compared = 0;
  auto compare = [&](const AlgebroidModel& m) {
    if (!m.omega || !m.connection || !m.momentum || !h2(m).passed()) return;
    if (!check_axioms(m.algebroid, m.algebroid.chart.domain).all_pass()) return;
    TorsionCriterion t = torsion_criterion(m.algebroid, *m.omega, *m.connection, *m.momentum, m.algebroid.chart.domain);
    CHECK_MESSAGE(t.verdict.status == h3(m).status, m.name);
    ++compared;
  };
  for (const auto& name : catalog_names()) compare(model(name));
  for (const auto& rm : random_models(20, 0)) compare(rm.model);
  CHECK(compared >= 15);
}

TEST_CASE("zero locus") {
  const auto& tr = model("translation");
  const auto& L = tr.algebroid;
  ZeroLocusReport z = zero_locus_report(L, *tr.omega, *tr.connection, *tr.momentum, {0.7, 0.0}, L.chart.domain);
  CHECK(z.on_locus);
  CHECK(z.clean);
  CHECK(z.tangent.cols() == 1);
  CHECK(z.equals_orthogonal);
  CHECK(z.coisotropic);
  CHECK(z.invariance.passed());
  CHECK_FALSE(zero_locus_report(L, *tr.omega, *tr.connection, *tr.momentum, {0.0, 1.0}, L.chart.domain).on_locus);

  const auto& dar = model("darboux-r2-noncompatible");
  ZeroLocusReport o = zero_locus_report(dar.algebroid, *dar.omega, *dar.connection, *dar.momentum, {0, 0},
                                        dar.algebroid.chart.domain);
  CHECK(o.on_locus);
  CHECK(o.tangent.cols() == 0);
  CHECK(o.orthogonal.cols() == 0);
  CHECK(o.equals_orthogonal);
  CHECK_FALSE(o.coisotropic);
}

TEST_CASE("invariance identity holds on hamiltonian models") {
  for (const auto& name : {"cylinder", "translation", "darboux-r2-compatible", "darboux-r4", "lie-algebra-bundle"}) {
    const auto& m = model(name);
    CHECK_MESSAGE(invariance_check(m.algebroid, *m.connection, *m.momentum, m.algebroid.chart.domain).passed(), name);
  }
  for (const auto& rm : random_models(20, 0))
    if (rm.built_h2 && rm.built_h3)
      CHECK(invariance_check(rm.model.algebroid, *rm.model.connection, *rm.model.momentum,
                             rm.model.algebroid.chart.domain)
                .passed());
}

TEST_CASE("tangent connection synthesis") {
  Chart c = plane();
  LieAlgebroid T = tangent_algebroid(c);
  PresymplecticStructure w = darboux();
  AForm mu = one_form({X(1), Expr(1)});
  SynthesisResult r = synthesize_tangent_connection(c, w, mu, VectorField({Expr(0), Expr(1)}));
  CHECK(r.h1.passed());
  CHECK(r.h2.passed());
  CHECK(check_H1(T, w, r.connection, c.domain).verdict.passed());
  CHECK(check_H2(T, w, r.connection, mu, c.domain).passed());
  CHECK(check_H3(T, w, mu, c.domain).passed());

  Chart away = plane(1, 2);
  LieAlgebroid Ta = tangent_algebroid(away);
  AForm rot = one_form({X(1), -X(0)});
  SynthesisResult r2 = synthesize_tangent_connection(away, w, rot, VectorField({Expr(0), Expr(-1)}));
  CHECK(r2.h1.passed());
  CHECK(r2.h2.passed());
  CHECK(check_H3(Ta, w, rot, away.domain).failed());
}

TEST_CASE("synthesis errors") {
  Chart c = plane();
  PresymplecticStructure w = darboux();
  auto kind = [&](const PresymplecticStructure& form, const AForm& mu, const VectorField& v) {
    try {
      synthesize_tangent_connection(c, form, mu, v);
    } catch (const SynthesisError& e) {
      return static_cast<int>(e.kind);
    }
    return -1;
  };
  CHECK(kind(w, one_form({X(1), Expr(0)}), VectorField({Expr(1), Expr(0)})) ==
        static_cast<int>(SynthesisError::Kind::VanishingMomentum));
  DifferentialForm qw(2, 2);
  qw.add(0b11, X(0));
  CHECK(kind(PresymplecticStructure(qw), one_form({X(1), Expr(1)}), VectorField({Expr(0), Expr(1)})) ==
        static_cast<int>(SynthesisError::Kind::NonConstantForm));
  CHECK(kind(PresymplecticStructure(DifferentialForm(2, 2)), one_form({X(1), Expr(1)}), VectorField({Expr(0), Expr(1)})) ==
        static_cast<int>(SynthesisError::Kind::Degenerate));
  CHECK(kind(w, one_form({X(1), Expr(1)}), VectorField({Expr(1), Expr(0)})) ==
        static_cast<int>(SynthesisError::Kind::VanishingPairing));
}

TEST_CASE("finite Lie algebras") {
  FiniteLieAlgebra g = heisenberg();
  CHECK(g.jacobi_violation().empty());
  CHECK(g.bracket(rv({1, 0, 0}), rv({0, 1, 0})) == rv({0, 0, 1}));
  CHECK(g.bracket(rv({0, 1, 0}), rv({1, 0, 0})) == rv({0, 0, -1}));
  FiniteLieAlgebra bad(3);
  bad.set_structure(0, 1, 2, Rational(1));
  bad.set_structure(0, 2, 0, Rational(1));
  CHECK_FALSE(bad.jacobi_violation().empty());
  CHECK_THROWS_AS(bad.certify(), std::invalid_argument);
}

TEST_CASE("rational linear algebra") {
  auto ns = rational_null_space({rv({1, 2, 3}), rv({2, 4, 6})}, 3);
  CHECK(ns.size() == 2);
  CHECK(rational_rank({rv({1, 2, 3}), rv({2, 4, 6}), rv({0, 0, 1})}, 3) == 2);
  auto both = subspace_intersection({rv({1, 0, 0}), rv({0, 1, 0})}, {rv({0, 1, 0}), rv({0, 0, 1})}, 3);
  REQUIRE(both.size() == 1);
  CHECK(both[0][0] == 0);
  CHECK(both[0][2] == 0);
}

TEST_CASE("quotient by isotropy: Heisenberg translations") {
  const auto& m = model("heisenberg-action");
  const auto& L = m.algebroid;
  QuotientReport q = quotient_by_isotropy(m.lie_algebra->algebra, L.anchor, *m.momentum, L.chart.domain);
  REQUIRE(q.kernel.size() == 1);
  CHECK(q.kernel[0][0] == 0);
  CHECK(q.kernel[0][1] == 0);
  CHECK(q.kernel[0][2] != 0);
  REQUIRE(q.kernel_values.size() == 1);
  CHECK(q.kernel_values[0] / q.kernel[0][2] == 1);
  CHECK(same(q.descended.get(0b100), Expr(0), L.chart.domain));
  CHECK(same(q.descended.get(0b001), X(0), L.chart.domain));
  CHECK(q.descended_annihilates.passed());
  REQUIRE(q.obstruction_space.size() == 1);
  REQUIRE(q.obstruction_values.size() == 1);
  CHECK(q.obstruction_values[0] != 0);
  CHECK_FALSE(q.descends_hamiltonian);
}

TEST_CASE("quotient by isotropy: abelian algebra") {
  FiniteLieAlgebra g(2);
  Chart c = plane();
  std::vector<VectorField> anchors{VectorField({Expr(1), Expr(0)}), VectorField({Expr(0), Expr(0)})};
  QuotientReport q = quotient_by_isotropy(g, anchors, one_form({X(1), Expr(3)}), c.domain);
  CHECK(q.kernel.size() == 1);
  CHECK(q.obstruction_space.empty());
  CHECK(q.descends_hamiltonian);
}

TEST_CASE("quotient rejects a non-constant kernel pairing") {
  FiniteLieAlgebra g(2);
  Chart c = plane();
  std::vector<VectorField> anchors{VectorField({Expr(1), Expr(0)}), VectorField({Expr(0), Expr(0)})};
  CHECK_THROWS_AS(quotient_by_isotropy(g, anchors, one_form({X(1), X(0)}), c.domain), QuotientError);
}

TEST_CASE("reduced bracket") {
  SampleDomain d = SampleDomain::box(1, -2, 2);
  FiniteLieAlgebra g = heisenberg();
  std::vector<ExprVector> zero(3, ExprVector(3));
  ReducedBracket qp = reduced_bracket(g, {rv({0, 0, 1})}, zero, ev({Expr(1), Expr(0), Expr(0)}),
                                      ev({Expr(0), Expr(1), Expr(0)}), d);
  for (const auto& e : qp.value) CHECK(same(e, Expr(0), d));
  CHECK(qp.well_defined.passed());
  CHECK(qp.antisymmetric.passed());

  // κ into the centre changes nothing mod 𝔥.
  std::vector<ExprVector> kappa(3, ExprVector(3));
  kappa[2][0] = X(0);
  kappa[2][1] = Expr(2);
  ReducedBracket k = reduced_bracket(g, {rv({0, 0, 1})}, kappa, ev({Expr(1), Expr(0), Expr(0)}),
                                     ev({Expr(0), Expr(1), Expr(0)}), d);
  for (const auto& e : k.value) CHECK(same(e, Expr(0), d));

  // [X, Y] = Y, 𝔥 = span{Y}, κ(X + 𝔥) = f Y.
  FiniteLieAlgebra aff(2);
  aff.set_structure(0, 1, 1, Rational(1));
  std::vector<ExprVector> kf(2, ExprVector(2));
  kf[1][0] = X(0) * X(0);
  ReducedBracket xx = reduced_bracket(aff, {rv({0, 1})}, kf, ev({Expr(1), Expr(0)}), ev({Expr(1), Expr(0)}), d);
  for (const auto& e : xx.value) CHECK(same(e, Expr(0), d));
  CHECK(xx.antisymmetric.passed());

  // Quotient by an ideal with κ = 0: the bracket of 𝔤/𝔥.
  FiniteLieAlgebra sum(3);
  sum.set_structure(0, 1, 1, Rational(1));
  ReducedBracket qa = reduced_bracket(sum, {rv({0, 0, 1})}, zero, ev({Expr(1), Expr(0), Expr(0)}),
                                      ev({Expr(0), Expr(1), Expr(0)}), d);
  CHECK(same(qa.value[1], Expr(1), d));
  CHECK(same(qa.value[0], Expr(0), d));

  CHECK_THROWS_AS(reduced_bracket(g, {rv({1, 0, 0}), rv({0, 1, 0})}, zero, ev({Expr(1), Expr(0), Expr(0)}),
                                  ev({Expr(0), Expr(1), Expr(0)}), d),
                  QuotientError);
}
