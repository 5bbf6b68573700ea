#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "forge/catalog.hpp"
#include "forge/hamiltonian.hpp"
#include "forge/random_models.hpp"
#include "forge/weil.hpp"
#include "support.hpp"

using namespace forge;
using testing::same_weil;

namespace {

Expr X(int i) { return Expr::coordinate(i); }

const AlgebroidModel& model(const std::string& name) {
  static std::map<std::string, AlgebroidModel> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, catalog_entry(name).model).first;
  return it->second;
}

struct Gen {
  int n, r;
  WeilElement f(const Expr& e) const { return WeilElement::scalar(n, r, e); }
  WeilElement xd(int a) const { return WeilElement::xdot(n, r, a); }
  WeilElement th(int i) const { return WeilElement::theta(n, r, i); }
  WeilElement td(int i) const { return WeilElement::thetadot(n, r, i); }
};

Gen gens(const LieAlgebroid& L) { return Gen{L.dim(), L.rank}; }

bool vanishes(const WeilElement& e, const SampleDomain& d) { return same_weil(e, WeilElement(e.dim(), e.rank()), d); }

bool same_derivation(const WeilDerivation& a, const WeilDerivation& b, const WeilNames& names, const SampleDomain& d) {
  return derivation_difference(a, b, names).test(d).passed();
}

}  // namespace

TEST_CASE("graded commutativity") {
  Gen g{2, 2};
  SampleDomain d = SampleDomain::box(2, -2, 2);
  CHECK(same_weil(g.th(0) * g.th(1), -(g.th(1) * g.th(0)), d));
  CHECK(vanishes(g.th(0) * g.th(0), d));
  CHECK(same_weil(g.td(0) * g.th(1), g.th(1) * g.td(0), d));
  CHECK(same_weil(g.td(0) * g.xd(1), g.xd(1) * g.td(0), d));
  CHECK(same_weil(g.xd(0) * g.th(1), -(g.th(1) * g.xd(0)), d));
  CHECK_FALSE(vanishes(g.td(1) * g.td(1), d));
  auto es = random_weil_elements(2, 2, 8, 3, true);
  for (std::size_t a = 0; a + 1 < es.size(); a += 2) {
    for (int p : {0, 1, 2})
      for (int q : {0, 1, 2}) {
        WeilElement u = es[a].component(p, q);
        for (int s : {0, 1, 2})
          for (int t : {0, 1, 2}) {
            WeilElement v = es[a + 1].component(s, t);
            int sign = ((p + q) * (s + t)) % 2 ? -1 : 1;
            CHECK(same_weil(u * v, (v * u).scaled(Expr(sign)), d));
          }
      }
  }
}

TEST_CASE("de Rham differential of W(A)") {
  const auto& cyl = model("cylinder");
  const auto& L = cyl.algebroid;
  Gen g = gens(L);
  SampleDomain d = L.chart.domain;
  WeilDerivation dd = weil_d(2, 1);
  CHECK(same_weil(dd.apply(g.f(X(1))), g.xd(1), d));
  CHECK(same_weil(dd.apply(g.th(0)), g.td(0), d));
  CHECK(vanishes(dd.apply(g.xd(0)), d));
  CHECK(vanishes(dd.apply(g.td(0)), d));
  for (const auto& e : random_weil_elements(2, 1, 10, 4, true)) CHECK(vanishes(dd.apply(dd.apply(e)), d));
}

TEST_CASE("iota_d and Lie_d on generators") {
  const auto& cyl = model("cylinder");
  const auto& L = cyl.algebroid;
  Gen g = gens(L);
  SampleDomain d = L.chart.domain;
  CHECK(same_weil(iota_d(L).apply(g.xd(1)), g.th(0).scaled(-X(1)), d));
  CHECK(same_weil(lie_d(L).apply(g.f(X(0))), g.th(0), d));
  CHECK(same_weil(lie_d(L).apply(g.f(X(1))), g.th(0).scaled(-X(1)), d));
  for (const auto& name : {"cylinder", "heisenberg-action", "lie-algebra-bundle", "darboux-r4"}) {
    const auto& M = model(name).algebroid;
    CHECK_MESSAGE(same_derivation(lie_d(M), lie_d_explicit(M), weil_names(M), M.chart.domain), name);
    WeilDerivation comm = commutator(weil_d(M.dim(), M.rank), lie_d(M));
    CHECK_MESSAGE(same_derivation(comm, WeilDerivation(M.dim(), M.rank, 0), weil_names(M), M.chart.domain), name);
  }
}

TEST_CASE("BRST square") {
  for (const auto& name : catalog_names()) {
    const auto& m = model(name);
    bool axioms = check_axioms(m.algebroid, m.algebroid.chart.domain).all_pass();
    CHECK_MESSAGE(brst_square_check(m.algebroid, m.algebroid.chart.domain).passed() == axioms, name);
  }
  AlgebroidModel bad = jacobi_violating_model(0);
  Verdict v = brst_square_check(bad.algebroid, bad.algebroid.chart.domain);
  CHECK(v.failed());
  REQUIRE(v.witness);
  CHECK_FALSE(v.witness->label.empty());
  for (const auto& rm : random_models(4, 2))
    CHECK(brst_square_check(rm.model.algebroid, rm.model.algebroid.chart.domain).passed());
}

TEST_CASE("pullbacks and eta") {
  const auto& cyl = model("cylinder");
  const auto& L = cyl.algebroid;
  const Connection& D = *cyl.connection;
  Gen g = gens(L);
  SampleDomain d = L.chart.domain;
  CHECK(same_weil(eta(D, 0), g.td(0) - g.xd(0) * g.th(0), d));
  CHECK(same_weil(eta(Connection::trivial(1, 2), 0), g.td(0), d));
  CHECK(same_weil(h_star(D, g.td(0)), g.xd(0) * g.th(0), d));
  CHECK(same_weil(hp_star(D, hp_star(D, g.td(0))), hp_star(D, g.td(0)), d));
  CHECK(vanishes(h_star(D, eta(D, 0)), d));
  for (const auto& e : random_weil_elements(2, 1, 10, 5, false)) CHECK(same_weil(h_star(D, p_star(e)), e, d));
  for (const auto& e : random_weil_elements(2, 1, 10, 6, true))
    CHECK(same_weil(hp_star(D, hp_star(D, e)), hp_star(D, e), d));
  CHECK_THROWS(p_star(g.td(0)));
}

TEST_CASE("hat iota") {
  const auto& cyl = model("cylinder");
  const auto& L = cyl.algebroid;
  const Connection& D = *cyl.connection;
  Gen g = gens(L);
  SampleDomain d = L.chart.domain;
  WeilDerivation i1 = hat_iota(D, L.frame(0));
  CHECK(same_weil(i1.apply(g.th(0)), g.f(Expr(1)), d));
  CHECK(vanishes(i1.apply(eta(D, 0)), d));
  CHECK(vanishes(i1.apply(g.xd(0) * g.xd(1)), d));
  const auto& h = model("heisenberg-action");
  Gen gh = gens(h.algebroid);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      WeilDerivation ii = hat_iota(*h.connection, h.algebroid.frame(i));
      CHECK(same_weil(ii.apply(gh.th(j)), gh.f(Expr(i == j ? 1 : 0)), h.algebroid.chart.domain));
      CHECK(vanishes(ii.apply(eta(*h.connection, j)), h.algebroid.chart.domain));
    }
}

TEST_CASE("basic elements") {
  const auto& dar = model("darboux-r2-compatible");
  Gen g = gens(dar.algebroid);
  BasicReport pw = is_basic(dar.algebroid, *dar.connection, g.xd(0) * g.xd(1), dar.algebroid.chart.domain);
  CHECK(pw.horizontal.passed());
  BasicReport th = is_basic(dar.algebroid, *dar.connection, g.th(0), dar.algebroid.chart.domain);
  CHECK(th.horizontal.failed());
  CHECK(th.basic.failed());

  for (const auto& name : {"cylinder", "darboux-r2-compatible", "translation"}) {
    const auto& m = model(name);
    WeilElement w = build_extension(*m.omega, *m.momentum, *m.connection);
    BasicReport b = is_basic(m.algebroid, *m.connection, w, m.algebroid.chart.domain);
    CHECK_MESSAGE(b.basic.passed(), name);
    CHECK_MESSAGE(b.frame_horizontal.passed(), name);
    CHECK_FALSE(b.generation_disagreement);
  }
}

TEST_CASE("extension of omega on the cylinder") {
  const auto& cyl = model("cylinder");
  const auto& L = cyl.algebroid;
  Gen g = gens(L);
  SampleDomain d = L.chart.domain;
  WeilElement w = build_extension(*cyl.omega, *cyl.momentum, *cyl.connection);
  WeilElement expect = g.xd(0) * g.xd(1) + (g.td(0) - g.xd(0) * g.th(0)).scaled(X(1));
  CHECK(same_weil(w, expect, d));
  CHECK(same_weil(w, build_extension_split(*cyl.omega, *cyl.momentum, *cyl.connection), d));
  CHECK(same_weil(h_star(*cyl.connection, w), encode_form(cyl.omega->omega, 1), d));
  CHECK(vanishes(brst_apply(L, w), d));
}

TEST_CASE("theorem check examples") {
  const auto& cyl = model("cylinder");
  TheoremReport t = theorem_check(cyl.algebroid, *cyl.omega, *cyl.connection, *cyl.momentum, cyl.algebroid.chart.domain);
  CHECK(t.closed.passed());
  CHECK(t.literal_agreement());

  const auto& nc = model("darboux-r2-noncompatible");
  TheoremReport n = theorem_check(nc.algebroid, *nc.omega, *nc.connection, *nc.momentum, nc.algebroid.chart.domain);
  CHECK(n.bidegree_30.passed());
  CHECK(n.bidegree_21.passed());
  CHECK(n.bidegree_12.failed());
  CHECK(n.classical_h3.failed());
  CHECK(n.closed.failed());
  CHECK(n.conditional_agreement());

  const auto& cm = model("darboux-r2-compatible");
  TheoremReport c = theorem_check(cm.algebroid, *cm.omega, *cm.connection, *cm.momentum, cm.algebroid.chart.domain);
  CHECK(c.closed.passed());
  CHECK(c.literal_agreement());
}

TEST_CASE("bidegree verdicts agree with classical checks") {
  int literal = 0, total = 0;
  auto run = [&](const AlgebroidModel& m) {
    if (!m.omega || !m.connection || !m.momentum) return;
    if (!check_axioms(m.algebroid, m.algebroid.chart.domain).all_pass()) return;
    TheoremReport t = theorem_check(m.algebroid, *m.omega, *m.connection, *m.momentum, m.algebroid.chart.domain);
    CHECK_MESSAGE(t.conditional_agreement(), m.name);
    CHECK_MESSAGE(t.extension_property.passed(), m.name);
    CHECK_MESSAGE(t.split_agreement.passed(), m.name);
    CHECK_MESSAGE(t.bidegree_30.status == t.classical_closed.status, m.name);
    CHECK_MESSAGE(t.bidegree_21.status == t.classical_h2.status, m.name);
    CHECK_MESSAGE(t.closed.passed() == (t.classical_closed.passed() && t.classical_h2.passed() && t.classical_h3.passed()),
                  m.name);
    literal += t.literal_agreement();
    ++total;
  };
  for (const auto& name : catalog_names()) run(model(name));
  for (const auto& rm : random_models(20, 0)) run(rm.model);
  CHECK(total >= 28);
  MESSAGE("literal agreement on " << literal << " of " << total << " models");
}

TEST_CASE("Cartan table") {
  for (const auto& name : {"cylinder", "heisenberg-action", "lie-algebra-bundle", "translation"}) {
    const auto& M = model(name).algebroid;
    for (const auto& rel : cartan_table(M, M.chart.domain)) CHECK_MESSAGE(rel.verdict.passed(), name << ": " << rel.relation);
    CHECK(cartan_table_check(M, M.chart.domain).passed());
  }
  const auto& cyl = model("cylinder").algebroid;
  Gen g = gens(cyl);
  WeilDerivation ii = lift_iota(algebroid_i(cyl, cyl.frame(0)));
  WeilDerivation c = commutator(ii, iota_d(cyl));
  CHECK(vanishes(c.apply(g.xd(0)), cyl.chart.domain));
  CHECK(vanishes(c.apply(g.xd(1)), cyl.chart.domain));
  AlgebroidModel bad = jacobi_violating_model(1);
  CHECK(cartan_table_check(bad.algebroid, bad.algebroid.chart.domain).failed());
}

TEST_CASE("parallel projection") {
  const auto& cyl = model("cylinder");
  const auto& L = cyl.algebroid;
  Gen g = gens(L);
  SampleDomain d = L.chart.domain;
  WeilDerivation Pd = parallel_projection(*cyl.connection, weil_d(2, 1));
  CHECK(same_weil(Pd.apply(g.th(0)), g.xd(0) * g.th(0), d));
  CHECK(same_weil(Pd.apply(g.th(0)), covariant_D(L, *cyl.connection).apply(g.th(0)), d));
  WeilDerivation PL = parallel_projection(*cyl.connection, lie_d(L));
  CHECK(same_weil(PL.apply(g.f(X(1))), g.th(0).scaled(-X(1)), d));
  for (const auto& name : catalog_names()) {
    const auto& m = model(name);
    if (!m.connection || !check_axioms(m.algebroid, m.algebroid.chart.domain).all_pass()) continue;
    CHECK_MESSAGE(parallel_projection_check(m.algebroid, *m.connection, m.algebroid.chart.domain).verdict.passed(), name);
  }
  LieAlgebroid T = tangent_algebroid(L.chart);
  WeilDerivation P0 = parallel_projection(Connection::trivial(2, 2), weil_d(2, 2));
  Gen gt = gens(T);
  CHECK(same_weil(P0.apply(gt.f(X(0) * X(1))), gt.xd(0).scaled(X(1)) + gt.xd(1).scaled(X(0)), d));
  CHECK(vanishes(P0.apply(gt.th(1)), d));
}

TEST_CASE("lemma on a non-closed two-form") {
  std::mt19937_64 rng(21);
  Chart c({"x", "y", "z"}, SampleDomain::box(3, -2, 2));
  LieAlgebroid L(c, {VectorField({Expr(1), Expr(0), Expr(0)}), VectorField({X(2), Expr(1), Expr(0)})});
  for (int k = 0; k < 3; ++k) {
    DifferentialForm w(3, 2);
    for (Mask m : {Mask{0b011}, Mask{0b101}, Mask{0b110}}) w.add(m, testing::random_polynomial(rng, 3, 2));
    // z³ dx∧dy has degree above the random terms, so dω ≠ 0.
    w.add(0b011, X(2) * X(2) * X(2));
    Connection D(2, 3);
    for (int j = 0; j < 2; ++j)
      for (int a = 0; a < 3; ++a)
        for (int i = 0; i < 2; ++i) D.set(j, a, i, testing::random_polynomial(rng, 3, 1));
    CHECK_FALSE(check_closed(w, c.domain).passed());
    CHECK(lemma916_check(L, D, w, c.domain).passed());
  }
}

TEST_CASE("curvature torsion identity") {
  for (const auto& name : {"cylinder", "darboux-r2-compatible", "darboux-r4", "translation", "heisenberg-action"}) {
    const auto& m = model(name);
    CurvatureTorsionReport r = prop917_check(m.algebroid, *m.connection, *m.momentum, m.algebroid.chart.domain);
    CHECK_MESSAGE(r.identity.passed(), name);
  }
  for (const auto& name : {"cylinder", "darboux-r2-compatible", "darboux-r4", "translation"}) {
    const auto& m = model(name);
    CurvatureTorsionReport r = prop917_check(m.algebroid, *m.connection, *m.momentum, m.algebroid.chart.domain);
    CHECK_MESSAGE(r.vanishing.passed(), name);
    CHECK_MESSAGE(r.torsion_term.passed(), name);
  }
  for (const auto& rm : random_models(20, 0)) {
    const auto& m = rm.model;
    CHECK(prop917_check(m.algebroid, *m.connection, *m.momentum, m.algebroid.chart.domain).identity.passed());
  }
}
