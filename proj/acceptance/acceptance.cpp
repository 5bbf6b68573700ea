#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "forge/catalog.hpp"
#include "forge/hamiltonian.hpp"
#include "forge/random_models.hpp"
#include "forge/weil.hpp"

using namespace forge;

namespace {

constexpr int kSamples = 32;
constexpr std::uint64_t kSeed = 0;
constexpr double kTol = 1e-9;
constexpr double kTimeLimitSeconds = 10.0;
constexpr int kRandomModels = 20;
constexpr std::uint64_t kRandomSeed = 0;
constexpr std::uint64_t kJacobiSeed = 0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

Expr X(int i) { return Expr::coordinate(i); }

SampleDomain pinned(SampleDomain d) {
  d.samples = kSamples;
  d.seed = kSeed;
  d.tol = kTol;
  return d;
}

AlgebroidModel catalog_model(const std::string& name) {
  AlgebroidModel m = catalog_entry(name).model;
  m.algebroid.chart.domain = pinned(m.domain());
  return m;
}

std::vector<AlgebroidModel> oracle_models() {
  std::vector<AlgebroidModel> out;
  for (const auto& n : catalog_names()) out.push_back(catalog_model(n));
  for (auto& rm : random_models(kRandomModels, kRandomSeed)) {
    rm.model.algebroid.chart.domain = pinned(rm.model.domain());
    out.push_back(rm.model);
  }
  return out;
}

bool exact_zero(const Expr& e, const SampleDomain& d) { return is_identically_zero(e, d).kind == ZeroKind::ExactZero; }

bool within(const Verdict& v) { return v.passed() && (v.strength == ZeroKind::ExactZero || v.residual_max <= kTol); }

bool axioms_ok(const AlgebroidModel& m) { return check_axioms(m.algebroid, m.domain()).all_pass(); }

std::string run_forge(const std::string& bin, const std::string& args, int& status) {
  std::string cmd = bin + " " + args + " 2>/dev/null";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  int raw = pclose(pipe);
  status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return out;
}

Outcome cylinder_end_to_end() {
  AlgebroidModel m = catalog_model("cylinder");
  const auto& L = m.algebroid;
  H1Report h1 = check_H1(L, *m.omega, *m.connection, m.domain());
  Verdict h2 = check_H2(L, *m.omega, *m.connection, *m.momentum, m.domain());
  Verdict h3 = check_H3(L, *m.omega, *m.momentum, m.domain());
  TheoremReport t = theorem_check(L, *m.omega, *m.connection, *m.momentum, m.domain());
  bool ok = within(h1.verdict) && h1.paths_agree() && within(h2) && within(h3) && t.closed.passed() &&
            t.bidegree_30.passed() && t.bidegree_21.passed() && t.bidegree_12.passed();
  std::ostringstream os;
  os << "H1 " << to_string(h1.verdict.strength) << ", H2 " << to_string(h2.strength) << ", H3 "
     << to_string(h3.strength) << ", d-hat omega-bar " << to_string(t.closed.status);
  return {ok, os.str()};
}

Outcome example_2_5() {
  AlgebroidModel m = catalog_model("example-2.5");
  const auto& L = m.algebroid;
  DualizedAnchor g = dualized_anchor(L, *m.omega);
  Expr coeff = exterior_derivative(g.gamma[0]).get(0b11);
  bool coefficient_two = exact_zero(coeff - Expr(2), m.domain());
  C3Result origin = c3_pointwise(L, *m.omega, {0, 0}, kTol);
  C3Result off = c3_pointwise(L, *m.omega, {1, 0}, kTol);
  SampleDomain away = m.domain();
  away.intervals[0] = Interval{0.5, 2.0};
  C4Result c4 = c4_frame_check(L, *m.omega, {VectorField({X(0), X(1)})}, away);
  bool ok = coefficient_two && origin.verdict.failed() && std::abs(std::abs(origin.max_residual) - 2.0) <= kTol &&
            off.verdict.passed() && c4.verdict.passed();
  std::ostringstream os;
  os << "d gamma = (" << coeff.str(L.chart.names) << ") dx^dy, C3 residual at 0 = " << origin.max_residual
     << ", C3 at (1,0) " << to_string(off.verdict.status) << ", C4 " << to_string(c4.outcome);
  return {ok, os.str()};
}

Outcome example_2_6() {
  AlgebroidModel m = catalog_model("example-2.6");
  const auto& L = m.algebroid;
  const int n = 2;
  DifferentialForm dxf = DifferentialForm::coframe(n, 0), dyf = DifferentialForm::coframe(n, 1);
  DualizedAnchor g = dualized_anchor(L, *m.omega);
  DifferentialForm dg = exterior_derivative(g.gamma[0]);
  auto residual = [&](const Rational& c) {
    DifferentialForm alpha = (dxf.scaled(X(1)) - dyf.scaled(X(0))).scaled(Expr(c));
    return (dg - wedge(alpha, g.gamma[0])).get(0b11);
  };
  Expr printed = residual(Rational(-8));
  Expr corrected = residual(Rational(-4));
  bool ok = exact_zero(printed, m.domain());
  std::ostringstream os;
  os << "with alpha = -8(y dx - x dy) the residual is (" << printed.str(L.chart.names) << ") dx^dy; alpha = -4(y dx - x dy) gives "
     << (exact_zero(corrected, m.domain()) ? "an exact zero" : corrected.str(L.chart.names));
  return {ok, os.str()};
}

Outcome contact_examples() {
  AlgebroidModel a = catalog_model("example-2.10");
  AlgebroidModel b = catalog_model("example-2.11");
  C4Result ra = c4_frame_check(a.algebroid, *a.omega, a.orthogonal_frames[0], a.domain());
  C4Result rb = c4_frame_check(b.algebroid, *b.omega, b.orthogonal_frames[0], b.domain());
  auto is_minus_dy = [](const C4Result& r, const SampleDomain& d) {
    for (int k = 0; k < r.bracket.size(); ++k)
      if (!exact_zero(r.bracket[k] - Expr(k == 1 ? -1 : 0), d)) return false;
    return true;
  };
  bool ok = ra.outcome == C4Result::Outcome::NotInvolutive && is_minus_dy(ra, a.domain()) &&
            rb.outcome == C4Result::Outcome::NotInvolutive && is_minus_dy(rb, b.domain());
  std::ostringstream os;
  os << "example-2.10 " << to_string(ra.outcome) << ", example-2.11 " << to_string(rb.outcome)
     << ", bracket witness -d/dy in both: " << (ok ? "yes" : "no");
  return {ok, os.str()};
}

Outcome darboux_pair() {
  AlgebroidModel nc = catalog_model("darboux-r2-noncompatible");
  const auto& L = nc.algebroid;
  Verdict h2 = check_H2(L, *nc.omega, *nc.connection, *nc.momentum, nc.domain());
  Verdict h3 = check_H3(L, *nc.omega, *nc.momentum, nc.domain());
  AForm res = h3_residual(L, *nc.omega, *nc.momentum);
  AForm minus_omega = anchor_pullback(L, nc.omega->omega).scaled(Expr(-1));
  bool exactly_minus_omega = exact_zero((res - minus_omega).get(0b11), nc.domain());
  bool ok = h2.passed() && h3.failed() && exactly_minus_omega;

  int certified = 0;
  for (int n : {2, 4}) {
    std::vector<std::string> names;
    for (int k = 0; k < n / 2; ++k) names.push_back("q" + std::to_string(k + 1));
    for (int k = 0; k < n / 2; ++k) names.push_back("p" + std::to_string(k + 1));
    Chart c(names, pinned(SampleDomain::box(n, -2, 2)));
    DifferentialForm w(n, 2);
    for (int k = 0; k < n / 2; ++k) w.add((Mask{1} << k) | (Mask{1} << (k + n / 2)), Expr(1));
    PresymplecticStructure ps(w);
    // μ = p^i dq_i + dp_1
    AForm mu(n, 1);
    for (int k = 0; k < n / 2; ++k) mu.add(Mask{1} << k, X(k + n / 2));
    mu.add(Mask{1} << (n / 2), Expr(1));
    std::vector<Expr> vref(n, Expr(0));
    vref[n / 2] = Expr(1);
    SynthesisResult s = synthesize_tangent_connection(c, ps, mu, VectorField(vref));
    LieAlgebroid T = tangent_algebroid(c);
    bool all = check_H1(T, ps, s.connection, c.domain).verdict.passed() &&
               check_H2(T, ps, s.connection, mu, c.domain).passed() && check_H3(T, ps, mu, c.domain).passed();
    certified += all;
  }
  ok = ok && certified == 2;
  std::ostringstream os;
  os << "p dq - q dp: H2 " << to_string(h2.status) << ", H3 " << to_string(h3.status)
     << ", residual = -omega " << (exactly_minus_omega ? "exactly" : "NO") << "; p dq + dp certified in " << certified
     << "/2 dimensions";
  return {ok, os.str()};
}

Outcome oracle_equivalence() {
  int total = 0, conditional = 0, literal = 0;
  std::string first_mismatch;
  for (const auto& m : oracle_models()) {
    if (!m.omega || !m.connection || !m.momentum || !axioms_ok(m)) continue;
    TheoremReport t = theorem_check(m.algebroid, *m.omega, *m.connection, *m.momentum, m.domain());
    ++total;
    conditional += t.conditional_agreement();
    literal += t.literal_agreement();
    if (!t.literal_agreement() && first_mismatch.empty())
      first_mismatch = m.name + " (H2 " + to_string(t.classical_h2.status) + ", H3 " +
                       to_string(t.classical_h3.status) + ", (1,2) " + to_string(t.bidegree_12.status) + ")";
  }
  std::ostringstream os;
  os << "literal agreement on " << literal << "/" << total << " models";
  if (!first_mismatch.empty()) os << ", first mismatch " << first_mismatch;
  os << "; agreement with (1,2) compared only where H2 holds: " << conditional << "/" << total;
  return {total > 0 && literal == total, os.str()};
}

Outcome torsion_equivalence() {
  int compared = 0, agree = 0;
  for (const auto& m : oracle_models()) {
    if (!m.omega || !m.connection || !m.momentum || !axioms_ok(m)) continue;
    if (!check_H2(m.algebroid, *m.omega, *m.connection, *m.momentum, m.domain()).passed()) continue;
    TorsionCriterion t = torsion_criterion(m.algebroid, *m.omega, *m.connection, *m.momentum, m.domain());
    Verdict h3 = check_H3(m.algebroid, *m.omega, *m.momentum, m.domain());
    ++compared;
    agree += t.precondition && t.verdict.status == h3.status;
  }
  std::ostringstream os;
  os << agree << "/" << compared << " models with H2 agree";
  return {compared > 0 && agree == compared, os.str()};
}

Outcome operator_identities() {
  int valid = 0, ok_models = 0;
  std::string first_failure;
  for (const auto& name : catalog_names()) {
    AlgebroidModel m = catalog_model(name);
    if (!axioms_ok(m)) continue;
    ++valid;
    const auto& L = m.algebroid;
    const auto& D = *m.connection;
    std::vector<std::pair<std::string, Verdict>> vs;
    vs.emplace_back("commutation", check_commirhoD(L, D, m.domain()));
    vs.emplace_back("cartan table", cartan_table_check(L, m.domain()));
    vs.emplace_back("parallel projection", parallel_projection_check(L, D, m.domain()).verdict);
    if (m.omega) vs.emplace_back("lemma", lemma916_check(L, D, m.omega->omega, m.domain()));
    if (m.momentum) {
      CurvatureTorsionReport p = prop917_check(L, D, *m.momentum, m.domain());
      vs.emplace_back("curvature-torsion identity", p.identity);
      bool hamiltonian = m.omega && check_H1(L, *m.omega, D, m.domain()).verdict.passed() &&
                         check_H2(L, *m.omega, D, *m.momentum, m.domain()).passed() &&
                         check_H3(L, *m.omega, *m.momentum, m.domain()).passed();
      if (hamiltonian) {
        vs.emplace_back("<mu, iota_rho R + DT>", p.vanishing);
        vs.emplace_back("<mu, DT>", p.torsion_term);
      }
    }
    bool all = true;
    for (const auto& [label, v] : vs)
      if (!v.passed()) {
        all = false;
        if (first_failure.empty()) first_failure = name + ": " + label;
      }
    ok_models += all;
  }
  std::ostringstream os;
  os << ok_models << "/" << valid << " catalog Lie algebroids verify every identity";
  if (!first_failure.empty()) os << "; first failure " << first_failure;
  return {valid > 0 && ok_models == valid, os.str()};
}

Outcome brst_square() {
  int valid = 0, pass = 0;
  for (const auto& name : catalog_names()) {
    AlgebroidModel m = catalog_model(name);
    if (!axioms_ok(m)) continue;
    ++valid;
    pass += brst_square_check(m.algebroid, m.domain()).passed();
  }
  AlgebroidModel bad = jacobi_violating_model(kJacobiSeed);
  bad.algebroid.chart.domain = pinned(bad.domain());
  Verdict v = brst_square_check(bad.algebroid, bad.domain());
  bool detected = v.failed() && v.witness && !v.witness->label.empty();
  std::ostringstream os;
  os << pass << "/" << valid << " valid models have d-hat^2 = 0; Jacobi-violating model witness: "
     << (detected ? v.witness->label : std::string("none"));
  return {valid > 0 && pass == valid && detected, os.str()};
}

Outcome coisotropy() {
  AlgebroidModel tr = catalog_model("translation");
  int good = 0;
  for (const auto& p : tr.points) {
    ZeroLocusReport z = zero_locus_report(tr.algebroid, *tr.omega, *tr.connection, *tr.momentum, p, tr.domain());
    good += z.on_locus && z.equals_orthogonal && z.coisotropic;
  }
  AlgebroidModel nc = catalog_model("darboux-r2-noncompatible");
  ZeroLocusReport o = zero_locus_report(nc.algebroid, *nc.omega, *nc.connection, *nc.momentum, {0, 0}, nc.domain());
  bool ok = tr.points.size() == 5 && good == 5 && o.on_locus && !o.coisotropic;
  std::ostringstream os;
  os << "translation: " << good << "/" << tr.points.size() << " locus samples with T Z = rho(A)^perp and coisotropic; "
     << "p dq - q dp at origin " << (o.coisotropic ? "coisotropic" : "not coisotropic");
  return {ok, os.str()};
}

Outcome quotient_suite() {
  AlgebroidModel h = catalog_model("heisenberg-action");
  const auto& g = h.lie_algebra->algebra;
  QuotientReport q = quotient_by_isotropy(g, h.algebroid.anchor, *h.momentum, h.domain());
  bool kernel_is_I = q.kernel.size() == 1 && q.kernel[0][0] == 0 && q.kernel[0][1] == 0 && q.kernel[0][2] != 0;
  Rational value = q.obstruction_values.empty() || !kernel_is_I ? Rational(0) : q.obstruction_values[0] / q.kernel[0][2];
  bool ok = kernel_is_I && q.descended_annihilates.passed() && q.obstruction_values.size() == 1 && value == 1 &&
            !q.descends_hamiltonian;
  std::ostringstream os;
  os << "ker rho = span{I}: " << (kernel_is_I ? "yes" : "no") << ", mu' annihilates it: "
     << to_string(q.descended_annihilates.status) << ", obstruction <mu, I> = " << value.get_str()
     << ", descends_hamiltonian = " << (q.descends_hamiltonian ? "true" : "false");
  return {ok, os.str()};
}

Outcome determinism(const std::string& bin) {
  if (bin.empty()) return {false, "no forge binary given"};
  int s1 = -1, s2 = -1;
  std::string a = run_forge(bin, "catalog run", s1);
  std::string b = run_forge(bin, "catalog run", s2);
  bool ok = s1 == 0 && s2 == 0 && !a.empty() && a == b;
  std::ostringstream os;
  os << "two runs, " << a.size() << " and " << b.size() << " bytes, " << (a == b ? "identical" : "different")
     << ", exit " << s1 << "/" << s2;
  return {ok, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string bin = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"cylinder end-to-end", cylinder_end_to_end},
      {"example 2.5 ideal and frame conditions", example_2_5},
      {"example 2.6 printed alpha", example_2_6},
      {"examples 2.10 and 2.11 non-involutive", contact_examples},
      {"Darboux pair and tangent synthesis", darboux_pair},
      {"bidegree oracle equivalence", oracle_equivalence},
      {"torsion criterion equivalence", torsion_equivalence},
      {"operator identities", operator_identities},
      {"d-hat squared detection", brst_square},
      {"zero locus coisotropy", coisotropy},
      {"Heisenberg quotient", quotient_suite},
      {"catalog determinism", [&] { return determinism(bin); }},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > kTimeLimitSeconds) {
      o.pass = false;
      o.detail += "; exceeded time limit";
    }
    failures += !o.pass;
    char head[96];
    std::snprintf(head, sizeof head, "%s %2zu  %-40s", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str());
    std::printf("%s %s (%.2f s)\n", head, o.detail.c_str(), secs);
  }
  std::printf("%d/%zu criteria pass\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
