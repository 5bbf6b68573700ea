#include "forge/weil.hpp"

#include <stdexcept>

namespace forge {

namespace {

WeilElement th(int n, int r, int i) { return WeilElement::theta(n, r, i); }
WeilElement xd(int n, int r, int a) { return WeilElement::xdot(n, r, a); }

Verdict test_element(const std::string& label, const WeilElement& e, const WeilNames& names, const SampleDomain& d) {
  ResidualSet set;
  add_residuals(set, label, e, names);
  return set.test(d);
}

std::vector<Section> frame_of(const LieAlgebroid& L) {
  std::vector<Section> out;
  for (int i = 0; i < L.rank; ++i) out.push_back(L.frame(i));
  return out;
}

}  // namespace

WeilDerivation algebroid_d(const LieAlgebroid& L) {
  const int n = L.dim(), r = L.rank;
  WeilDerivation out(n, r, 1, std::make_pair(0, 1));
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < r; ++i)
      if (!L.rho(a, i).is_zero()) out.on_x(a) += L.rho(a, i) * th(n, r, i);
  for (int k = 0; k < r; ++k)
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j)
        if (!L.structure(i, j, k).is_zero()) out.on_theta(k) += (-L.structure(i, j, k)) * (th(n, r, i) * th(n, r, j));
  return out;
}

WeilDerivation algebroid_i(const LieAlgebroid& L, const Section& a) {
  const int n = L.dim(), r = L.rank;
  WeilDerivation out(n, r, 1, std::make_pair(0, -1));
  for (int k = 0; k < r; ++k) out.on_theta(k) = WeilElement::scalar(n, r, a[k]);
  return out;
}

WeilDerivation algebroid_L(const LieAlgebroid& L, const Section& a) {
  return commutator(algebroid_i(L, a), algebroid_d(L));
}

WeilDerivation lift_iota(const WeilDerivation& X) {
  const int n = X.dim(), r = X.rank();
  std::optional<std::pair<int, int>> bideg;
  if (X.bidegree()) bideg = std::make_pair(X.bidegree()->first - 1, X.bidegree()->second);
  WeilDerivation out(n, r, X.parity() + 1, bideg);
  for (int a = 0; a < n; ++a) out.on_xdot(a) = X.on_x(a);
  for (int i = 0; i < r; ++i) out.on_thetadot(i) = X.on_theta(i);
  return out;
}

WeilDerivation weil_d(int n, int r) {
  WeilDerivation out(n, r, 1, std::make_pair(1, 0));
  for (int a = 0; a < n; ++a) out.on_x(a) = xd(n, r, a);
  for (int i = 0; i < r; ++i) out.on_theta(i) = WeilElement::thetadot(n, r, i);
  return out;
}

WeilDerivation lift_lie(const WeilDerivation& X) { return commutator(lift_iota(X), weil_d(X.dim(), X.rank())); }

WeilDerivation iota_d(const LieAlgebroid& L) { return lift_iota(algebroid_d(L)); }

WeilDerivation lie_d(const LieAlgebroid& L) { return commutator(iota_d(L), weil_d(L.dim(), L.rank)); }

WeilDerivation lie_d_explicit(const LieAlgebroid& L) {
  const int n = L.dim(), r = L.rank;
  WeilDerivation out(n, r, 1, std::make_pair(0, 1));
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < r; ++i) {
      const Expr& rho = L.rho(a, i);
      if (rho.is_zero()) continue;
      out.on_x(a) += rho * th(n, r, i);
      out.on_xdot(a) += (-rho) * WeilElement::thetadot(n, r, i);
      for (int b = 0; b < n; ++b) {
        Expr drho = rho.diff(b);
        if (!drho.is_zero()) out.on_xdot(a) += (-drho) * (xd(n, r, b) * th(n, r, i));
      }
    }
  for (int k = 0; k < r; ++k)
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        const Expr& c = L.structure(i, j, k);
        if (c.is_zero()) continue;
        out.on_thetadot(k) += (-c) * (th(n, r, i) * WeilElement::thetadot(n, r, j));
        if (i >= j) continue;
        out.on_theta(k) += (-c) * (th(n, r, i) * th(n, r, j));
        for (int b = 0; b < n; ++b) {
          Expr dc = c.diff(b);
          if (!dc.is_zero()) out.on_thetadot(k) += dc * (xd(n, r, b) * th(n, r, i) * th(n, r, j));
        }
      }
  return out;
}

WeilDerivation brst(const LieAlgebroid& L) { return weil_d(L.dim(), L.rank) + lie_d(L); }

WeilElement brst_apply(const LieAlgebroid& L, const WeilElement& e) { return brst(L).apply(e); }

// ---- splitting ---------------------------------------------------------------

WeilElement h_star(const Connection& D, const WeilElement& e) {
  const int n = e.dim(), r = e.rank();
  std::vector<WeilElement> image(r, WeilElement(n, r));
  for (int i = 0; i < r; ++i)
    for (int a = 0; a < n; ++a)
      for (int j = 0; j < r; ++j) {
        const Expr& w = D.coefficient(i, a, j);
        if (!w.is_zero()) image[i] += (-w) * (xd(n, r, a) * th(n, r, j));
      }
  WeilElement out(n, r);
  for (const auto& [m, c] : e.terms()) {
    WeilMonomial head = m;
    head.thetadot = {};
    WeilElement term = WeilElement::monomial(n, r, head, c);
    for (int i = 0; i < r; ++i)
      for (int k = 0; k < m.thetadot[i]; ++k) term = term * image[i];
    out += term;
  }
  return out;
}

WeilElement p_star(const WeilElement& e) {
  if (e.has_thetadot()) throw std::invalid_argument("p* takes elements of the bigraded algebra without thetadot");
  return e;
}

WeilElement hp_star(const Connection& D, const WeilElement& e) { return p_star(h_star(D, e)); }

WeilElement eta(const Connection& D, int i) {
  const int n = D.dim(), r = D.rank();
  WeilElement out = WeilElement::thetadot(n, r, i);
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < r; ++j) {
      const Expr& w = D.coefficient(i, a, j);
      if (!w.is_zero()) out += w * (xd(n, r, a) * th(n, r, j));
    }
  return out;
}

WeilDerivation hat_iota(const Connection& D, const Section& a) {
  const int n = D.dim(), r = D.rank();
  WeilDerivation out(n, r, 1, std::make_pair(0, -1));
  for (int i = 0; i < r; ++i) out.on_theta(i) = WeilElement::scalar(n, r, a[i]);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < r; ++i) {
      if (a[i].is_zero()) continue;
      for (int al = 0; al < n; ++al) {
        const Expr& w = D.coefficient(j, al, i);
        if (!w.is_zero()) out.on_thetadot(j) += (a[i] * w) * xd(n, r, al);
      }
    }
  return out;
}

WeilDerivation hat_lie(const LieAlgebroid& L, const Connection& D, const Section& a) {
  return commutator(hat_iota(D, a), brst(L));
}

BasicReport is_basic(const LieAlgebroid& L, const Connection& D, const WeilElement& e, const SampleDomain& d) {
  BasicReport out;
  const WeilNames names = weil_names(L);
  const WeilDerivation differential = brst(L);
  ResidualSet hor_frame, inv_frame, hor_all, inv_all;
  auto probe = [&](const Section& a, const std::string& label, bool frame) {
    WeilElement ie = hat_iota(D, a).apply(e);
    WeilElement le = commutator(hat_iota(D, a), differential).apply(e);
    add_residuals(hor_all, "iota_hat " + label, ie, names);
    add_residuals(inv_all, "lie_hat " + label, le, names);
    if (frame) {
      add_residuals(hor_frame, "iota_hat " + label, ie, names);
      add_residuals(inv_frame, "lie_hat " + label, le, names);
    }
  };
  for (int i = 0; i < L.rank; ++i) {
    probe(L.frame(i), "a" + std::to_string(i), true);
    for (int al = 0; al < L.dim(); ++al)
      probe(Expr::coordinate(al) * L.frame(i), L.chart.names[al] + "*a" + std::to_string(i), false);
  }
  out.frame_horizontal = hor_frame.test(d);
  out.frame_invariant = inv_frame.test(d);
  out.horizontal = hor_all.test(d);
  out.invariant = inv_all.test(d);
  out.basic = out.horizontal;
  out.basic.merge(out.invariant);
  out.generation_disagreement = out.frame_horizontal.status != out.horizontal.status ||
                                out.frame_invariant.status != out.invariant.status;
  return out;
}

// ---- extension ---------------------------------------------------------------

WeilElement build_extension(const PresymplecticStructure& w, const AForm& mu, const Connection& D) {
  const int n = w.dim(), r = mu.dim();
  WeilElement out = encode_form(w.omega, r);
  for (int i = 0; i < r; ++i) {
    Expr m = mu.get(Mask{1} << i);
    if (!m.is_zero()) out += m * eta(D, i);
  }
  (void)n;
  return out;
}

WeilElement build_extension_split(const PresymplecticStructure& w, const AForm& mu, const Connection& D) {
  const int n = w.dim(), r = mu.dim();
  WeilElement pmu = encode_aform(mu, n);
  AStarValuedForm dmu = covariant_derivative(D, as_valued(mu, n));
  return encode_form(w.omega, r) + weil_d(n, r).apply(pmu) - encode_valued(dmu.components, r);
}

int TheoremReport::agreements() const {
  int k = 0;
  k += bidegree_30.status == classical_closed.status;
  k += bidegree_21.status == classical_h2.status;
  k += bidegree_12.status == classical_h3.status;
  return k;
}

bool TheoremReport::conditional_agreement() const {
  if (bidegree_30.status != classical_closed.status || bidegree_21.status != classical_h2.status) return false;
  if (!bidegree_30.passed() || !bidegree_21.passed()) return true;
  return bidegree_12.status == classical_h3.status;
}

TheoremReport theorem_check(const LieAlgebroid& L, const PresymplecticStructure& w, const Connection& D,
                            const AForm& mu, const SampleDomain& d) {
  TheoremReport out;
  const int n = L.dim(), r = L.rank;
  const WeilNames names = weil_names(L);
  out.extension = build_extension(w, mu, D);
  out.extension_property =
      test_element("h* of extension minus omega", h_star(D, out.extension) - encode_form(w.omega, r), names, d);
  out.split_agreement = test_element("extension assemblies differ",
                                     out.extension - build_extension_split(w, mu, D), names, d);
  out.differential = brst(L).apply(out.extension);
  out.closed = test_element("dhat of extension", out.differential, names, d);
  out.bidegree_30 = test_element("(3,0)", out.differential.component(3, 0), names, d);
  out.bidegree_21 = test_element("(2,1)", out.differential.component(2, 1), names, d);
  out.bidegree_12 = test_element("(1,2)", out.differential.component(1, 2), names, d);

  out.classical_closed = check_closed(w.omega, d);
  // Dμ + ι_ρω = 0 where ι_ρω = −γ, and Ďμ + ½ι_ρι_ρω = 0
  WeilElement pmu = encode_aform(mu, n);
  WeilElement iw = iota_rho(L).apply(encode_form(w.omega, r));
  out.classical_h2 = test_element("D mu + iota_rho omega", covariant_D(L, D).apply(pmu) + iw, names, d);
  WeilElement iiw = iota_rho(L).apply(iw);
  out.classical_h3 = test_element("Dcheck mu + 1/2 iota_rho iota_rho omega",
                                  opposite_D(L, D).apply(pmu) + iiw.scaled(Expr(Rational(1, 2))), names, d);
  return out;
}

// ---- identities --------------------------------------------------------------

std::vector<RelationResult> cartan_table(const LieAlgebroid& L, const SampleDomain& d, int probes,
                                         std::uint64_t seed) {
  const int n = L.dim(), r = L.rank;
  const WeilNames names = weil_names(L);
  const std::vector<WeilElement> basket = random_weil_elements(n, r, probes, seed, true);
  const WeilDerivation dd = weil_d(n, r);
  const WeilDerivation bd = algebroid_d(L);
  std::vector<RelationResult> out;

  auto relation = [&](const std::string& label, const WeilDerivation& lhs, const WeilDerivation& rhs) {
    out.push_back({label, derivation_difference(lhs, rhs, names, basket).test(d)});
  };
  auto vanishes = [&](const std::string& label, const WeilDerivation& lhs) {
    WeilDerivation z(n, r, lhs.parity());
    relation(label, lhs, z);
  };

  const auto frame = frame_of(L);
  std::vector<WeilDerivation> bi, bL, ii, iL, li, lL;
  for (const auto& a : frame) {
    bi.push_back(algebroid_i(L, a));
    bL.push_back(algebroid_L(L, a));
    ii.push_back(lift_iota(bi.back()));
    iL.push_back(lift_iota(bL.back()));
    li.push_back(lift_lie(bi.back()));
    lL.push_back(lift_lie(bL.back()));
  }
  const WeilDerivation id = lift_iota(bd);
  const WeilDerivation ld = lift_lie(bd);

  vanishes("[bd,bd] = 0", commutator(bd, bd));
  vanishes("[iota_d,iota_d] = 0", commutator(id, id));
  vanishes("[L_d,L_d] = 0", commutator(ld, ld));
  vanishes("[L_d,iota_d] = 0", commutator(ld, id));
  vanishes("[d,L_d] = 0", commutator(dd, ld));
  relation("[iota_d,d] = L_d (explicit)", commutator(id, dd), lie_d_explicit(L));

  for (int s = 0; s < r; ++s) {
    const std::string a = "a" + std::to_string(s);
    vanishes("[L_" + a + ",bd] = 0", commutator(bL[s], bd));
    vanishes("[iota_i" + a + ",iota_d] = 0", commutator(ii[s], id));
    vanishes("[iota_L" + a + ",iota_d] = 0", commutator(iL[s], id));
    relation("[L_i" + a + ",iota_d] = iota_L" + a, commutator(li[s], id), iL[s]);
    vanishes("[L_L" + a + ",iota_d] = 0", commutator(lL[s], id));
    relation("[L_d,iota_i" + a + "] = iota_L" + a, commutator(ld, ii[s]), iL[s]);
    vanishes("[L_d,iota_L" + a + "] = 0", commutator(ld, iL[s]));
    relation("[L_i" + a + ",L_d] = L_L" + a, commutator(li[s], ld), lL[s]);
    vanishes("[L_L" + a + ",L_d] = 0", commutator(lL[s], ld));
    vanishes("[d,L_i" + a + "] = 0", commutator(dd, li[s]));
    vanishes("[d,L_L" + a + "] = 0", commutator(dd, lL[s]));
    for (int t = 0; t < r; ++t) {
      const std::string b = "a" + std::to_string(t);
      const Section ab = algebroid_bracket(L, frame[s], frame[t]);
      const WeilDerivation i_ab = algebroid_i(L, ab);
      const WeilDerivation L_ab = algebroid_L(L, ab);
      const std::string tag = "[" + a + "," + b + "]";
      vanishes("[i_" + a + ",i_" + b + "] = 0", commutator(bi[s], bi[t]));
      relation("[L_" + a + ",i_" + b + "] = i_" + tag, commutator(bL[s], bi[t]), i_ab);
      relation("[L_" + a + ",L_" + b + "] = L_" + tag, commutator(bL[s], bL[t]), L_ab);
      vanishes("[iota_i" + a + ",iota_i" + b + "] = 0", commutator(ii[s], ii[t]));
      vanishes("[iota_i" + a + ",iota_L" + b + "] = 0", commutator(ii[s], iL[t]));
      vanishes("[iota_L" + a + ",iota_L" + b + "] = 0", commutator(iL[s], iL[t]));
      vanishes("[L_i" + a + ",L_i" + b + "] = 0", commutator(li[s], li[t]));
      relation("[L_L" + a + ",L_i" + b + "] = L_i" + tag, commutator(lL[s], li[t]), lift_lie(i_ab));
      relation("[L_L" + a + ",L_L" + b + "] = L_L" + tag, commutator(lL[s], lL[t]), lift_lie(L_ab));
      vanishes("[L_i" + a + ",iota_i" + b + "] = 0", commutator(li[s], ii[t]));
      relation("[L_i" + a + ",iota_L" + b + "] = iota_i" + tag, commutator(li[s], iL[t]), lift_iota(i_ab));
      relation("[L_L" + a + ",iota_i" + b + "] = iota_i" + tag, commutator(lL[s], ii[t]), lift_iota(i_ab));
      relation("[L_L" + a + ",iota_L" + b + "] = iota_L" + tag, commutator(lL[s], iL[t]), lift_iota(L_ab));
    }
  }
  return out;
}

Verdict cartan_table_check(const LieAlgebroid& L, const SampleDomain& d) {
  Verdict v;
  for (const auto& rel : cartan_table(L, d)) {
    Verdict one = rel.verdict;
    if (one.failed() && one.witness) one.witness->detail = rel.relation + "; " + one.witness->detail;
    if (one.failed() && one.reason.empty()) one.reason = rel.relation;
    v.merge(one);
  }
  return v;
}

WeilDerivation parallel_projection(const Connection& D, const WeilDerivation& X) {
  const int n = X.dim(), r = X.rank();
  WeilDerivation out(n, r, X.parity(), X.bidegree());
  for (int a = 0; a < n; ++a) {
    out.on_x(a) = h_star(D, X.on_x(a));
    out.on_xdot(a) = h_star(D, X.on_xdot(a));
  }
  for (int i = 0; i < r; ++i) out.on_theta(i) = h_star(D, X.on_theta(i));
  return out;
}

ProjectionReport parallel_projection_check(const LieAlgebroid& L, const Connection& D, const SampleDomain& d) {
  ProjectionReport out;
  const WeilNames names = weil_names(L);
  out.covariant = derivation_difference(parallel_projection(D, weil_d(L.dim(), L.rank)), covariant_D(L, D), names).test(d);
  out.opposite = derivation_difference(parallel_projection(D, lie_d(L)), opposite_D(L, D), names).test(d);
  out.verdict = out.covariant;
  out.verdict.merge(out.opposite);
  return out;
}

Verdict brst_square_check(const LieAlgebroid& L, const SampleDomain& d) {
  const WeilDerivation b = brst(L);
  WeilDerivation sq = commutator(b, b);
  WeilDerivation z(L.dim(), L.rank, 0);
  return derivation_difference(sq, z, weil_names(L)).test(d);
}

WeilElement lemma916_residual(const LieAlgebroid& L, const Connection& D, const DifferentialForm& w) {
  const int r = L.rank;
  const WeilDerivation ir = iota_rho(L);
  const WeilElement ew = encode_form(w, r);
  const WeilElement irw = ir.apply(ew);
  const Expr half(Rational(1, 2));
  return ir.apply(opposite_D(L, D).apply(ew)) + covariant_D(L, D).apply(ir.apply(irw)).scaled(half) -
         iota_torsion(L, D).apply(irw) - ir.apply(ir.apply(encode_form(exterior_derivative(w), r))).scaled(half);
}

Verdict lemma916_check(const LieAlgebroid& L, const Connection& D, const DifferentialForm& w,
                       const SampleDomain& d) {
  return test_element("lemma residual", lemma916_residual(L, D, w), weil_names(L), d);
}

CurvatureTorsionReport prop917_check(const LieAlgebroid& L, const Connection& D, const AForm& mu,
                                     const SampleDomain& d) {
  CurvatureTorsionReport out;
  const int n = L.dim(), r = L.rank;
  const WeilNames names = weil_names(L);
  const WeilElement pmu = encode_aform(mu, n);
  const WeilDerivation cov = covariant_D(L, D);
  const WeilDerivation opp = opposite_D(L, D);
  const WeilDerivation it = iota_torsion(L, D);

  WeilElement route_a = cov.apply(opp.apply(pmu)) + opp.apply(cov.apply(pmu));

  // D²μ = −μ_i R^i_j θ^j
  Curvature R = curvature(D);
  std::vector<DifferentialForm> d2(r, DifferentialForm(n, 2));
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < r; ++i) {
      Expr m = mu.get(Mask{1} << i);
      if (!m.is_zero()) d2[j] = d2[j] - R.form(i, j).scaled(m);
    }
  WeilElement route_b1 = iota_rho(L).apply(encode_valued(d2, r));
  WeilElement route_b2 = cov.apply(it.apply(pmu)) + it.apply(cov.apply(pmu));

  out.identity = test_element("[D,Dcheck]mu - iota_rho D^2 mu - [D,iota_T]mu", route_a - route_b1 - route_b2, names, d);
  out.vanishing = test_element("<mu, iota_rho R + DT>", route_b1 + route_b2, names, d);
  out.torsion_term = test_element("<mu, DT>", route_b2, names, d);
  return out;
}

}  // namespace forge
