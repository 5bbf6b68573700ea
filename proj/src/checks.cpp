#include "forge/checks.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"
#include "forge/weil.hpp"

namespace forge {

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{
      "closed_omega", "axioms",      "c3_pointwise",   "c4_frame",   "H1",         "H2",
      "H3",           "torsion_criterion", "commirhoD", "zero_locus", "weil_theorem", "cartan_table",
      "parallel_projection", "quotient", "lemma916", "prop917"};
  return names;
}

bool CheckReport::any_failed() const {
  return std::any_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.verdict.failed(); });
}

const CheckResult* CheckReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::vector<std::string> CheckReport::names() const {
  std::vector<std::string> out;
  for (const auto& c : checks) out.push_back(c.name);
  return out;
}

std::vector<std::string> parse_check_list(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  const auto& known = check_names();
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    if (std::find(known.begin(), known.end(), item) == known.end()) throw UnknownCheck("unknown check: " + item);
    out.push_back(item);
  }
  return out;
}

namespace {

Verdict fail_with(const std::string& label, const std::string& why, double value = 1.0,
                  std::vector<double> point = {}) {
  return Verdict::failure(Witness{label, std::move(point), value, {}}, why);
}

std::string rational_list(const std::vector<Rational>& v) {
  std::string s;
  for (const auto& x : v) {
    if (!s.empty()) s += ", ";
    s += x.get_str();
  }
  return "[" + s + "]";
}

class Runner {
 public:
  explicit Runner(const AlgebroidModel& m) : m_(m), L_(m.algebroid), d_(m.domain()) {}

  const Verdict& get(const std::string& name) {
    auto it = done_.find(name);
    if (it != done_.end()) return it->second;
    Verdict v = compute(name);
    return done_.emplace(name, std::move(v)).first->second;
  }

 private:
  const AlgebroidModel& m_;
  const LieAlgebroid& L_;
  const SampleDomain& d_;
  std::map<std::string, Verdict> done_;

  std::optional<Verdict> needs(const std::string& dep) {
    const Verdict& v = get(dep);
    if (v.passed()) return std::nullopt;
    return Verdict::skipped("requires " + dep + " to pass (" + to_string(v.status) + ")");
  }

  std::vector<std::vector<double>> probe_points() const {
    std::vector<std::vector<double>> pts = m_.points;
    for (int k = 0; k < d_.samples; ++k) pts.push_back(sample_point(d_, static_cast<std::uint64_t>(k)));
    return pts;
  }

  Verdict compute(const std::string& name) {
    const bool has_w = m_.omega.has_value(), has_D = m_.connection.has_value(), has_mu = m_.momentum.has_value();
    auto missing = [](const char* what) { return Verdict::skipped(std::string("model has no ") + what); };

    if (name == "closed_omega") {
      if (!has_w) return missing("omega");
      return check_closed(m_.omega->omega, d_);
    }
    if (name == "axioms") {
      AxiomReport a = check_axioms(L_, d_);
      Verdict v = a.anchor_morphism;
      v.merge(a.jacobi).merge(a.d_squared);
      return v;
    }
    if (name == "c3_pointwise") {
      if (!has_w) return missing("omega");
      Verdict v;
      for (const auto& p : probe_points()) v.merge(c3_pointwise(L_, *m_.omega, p, d_.tol).verdict);
      return v;
    }
    if (name == "c4_frame") {
      if (!has_w) return missing("omega");
      if (m_.orthogonal_frames.empty()) return missing("orthogonal frame");
      Verdict v;
      for (const auto& f : m_.orthogonal_frames) {
        C4Result c = c4_frame_check(L_, *m_.omega, f, d_);
        Verdict part = c.verdict;
        if (part.failed() && part.witness) part.witness->detail = to_string(c.outcome);
        v.merge(part);
      }
      return v;
    }
    if (name == "H1") {
      if (!has_w) return missing("omega");
      if (!has_D) return missing("connection");
      if (auto s = needs("closed_omega")) return *s;
      H1Report h = check_H1(L_, *m_.omega, *m_.connection, d_);
      if (!h.paths_agree())
        return fail_with("H1 paths", "D gamma and Dcheck omega disagree");
      return h.verdict;
    }
    if (name == "H2") {
      if (!has_w) return missing("omega");
      if (!has_D) return missing("connection");
      if (!has_mu) return missing("momentum");
      if (auto s = needs("closed_omega")) return *s;
      return check_H2(L_, *m_.omega, *m_.connection, *m_.momentum, d_);
    }
    if (name == "H3") {
      if (!has_w) return missing("omega");
      if (!has_mu) return missing("momentum");
      if (auto s = needs("axioms")) return *s;
      if (auto s = needs("closed_omega")) return *s;
      return check_H3(L_, *m_.omega, *m_.momentum, d_);
    }
    if (name == "torsion_criterion") {
      if (!has_w) return missing("omega");
      if (!has_D) return missing("connection");
      if (!has_mu) return missing("momentum");
      if (auto s = needs("axioms")) return *s;
      if (auto s = needs("H2")) return *s;
      TorsionCriterion t = torsion_criterion(L_, *m_.omega, *m_.connection, *m_.momentum, d_);
      if (!t.precondition) return Verdict::skipped("mu is not a D-momentum section");
      return t.verdict;
    }
    if (name == "commirhoD") {
      if (!has_D) return missing("connection");
      if (auto s = needs("axioms")) return *s;
      return check_commirhoD(L_, *m_.connection, d_);
    }
    if (name == "zero_locus") {
      if (!has_w) return missing("omega");
      if (!has_D) return missing("connection");
      if (!has_mu) return missing("momentum");
      if (auto s = needs("closed_omega")) return *s;
      if (auto s = needs("axioms")) return *s;
      Verdict v;
      int on_locus = 0;
      for (const auto& p : m_.points) {
        ZeroLocusReport z = zero_locus_report(L_, *m_.omega, *m_.connection, *m_.momentum, p, d_);
        if (!z.on_locus) continue;
        ++on_locus;
        const char* problem = !z.clean               ? "zero locus not clean"
                              : !z.equals_orthogonal ? "tangent of Z differs from rho(A)^perp"
                              : !z.coisotropic       ? "zero locus not coisotropic"
                                                     : nullptr;
        if (problem) v.merge(fail_with("zero locus", problem, 1.0, p));
      }
      if (on_locus == 0) return Verdict::skipped("no model point lies on the zero locus");
      return v.merge(invariance_check(L_, *m_.connection, *m_.momentum, d_));
    }
    if (name == "weil_theorem") {
      if (!has_w) return missing("omega");
      if (!has_D) return missing("connection");
      if (!has_mu) return missing("momentum");
      if (auto s = needs("axioms")) return *s;
      if (auto s = needs("closed_omega")) return *s;
      TheoremReport t = theorem_check(L_, *m_.omega, *m_.connection, *m_.momentum, d_);
      Verdict v = t.extension_property;
      v.merge(t.split_agreement);
      if (!t.conditional_agreement())
        v.merge(fail_with("bidegree verdicts", "d-hat of the extension disagrees with the classical conditions"));
      v.merge(t.closed);
      return v;
    }
    if (name == "cartan_table") {
      Verdict v = brst_square_check(L_, d_);
      if (v.failed()) return v;
      v.merge(cartan_table_check(L_, d_));
      return v;
    }
    if (name == "parallel_projection") {
      if (!has_D) return missing("connection");
      if (auto s = needs("axioms")) return *s;
      return parallel_projection_check(L_, *m_.connection, d_).verdict;
    }
    if (name == "quotient") {
      if (!m_.lie_algebra) return missing("finite Lie algebra");
      if (!has_mu) return missing("momentum");
      if (m_.lie_algebra->algebra.dim() != L_.rank) return Verdict::skipped("Lie algebra dimension differs from rank");
      try {
        QuotientReport q = quotient_by_isotropy(m_.lie_algebra->algebra, L_.anchor, *m_.momentum, d_);
        Verdict v = q.descended_annihilates;
        if (!q.descends_hamiltonian) {
          double value = 0.0;
          for (const auto& x : q.obstruction_values) value = std::max(value, std::abs(x.get_d()));
          Verdict obstruction = fail_with("<mu, [g,g] cap ker rho>", "momentum does not descend as hamiltonian", value);
          obstruction.witness->detail = "obstruction values " + rational_list(q.obstruction_values);
          v.merge(obstruction);
        }
        return v;
      } catch (const QuotientError& e) {
        return fail_with("quotient", e.what());
      }
    }
    if (name == "lemma916") {
      if (!has_w) return missing("omega");
      if (!has_D) return missing("connection");
      if (auto s = needs("axioms")) return *s;
      return lemma916_check(L_, *m_.connection, m_.omega->omega, d_);
    }
    if (name == "prop917") {
      if (!has_D) return missing("connection");
      if (!has_mu) return missing("momentum");
      if (auto s = needs("axioms")) return *s;
      CurvatureTorsionReport c = prop917_check(L_, *m_.connection, *m_.momentum, d_);
      Verdict v = c.identity;
      // The vanishing statement only holds for hamiltonian data.
      if (has_w && get("H1").passed() && get("H2").passed() && get("H3").passed()) v.merge(c.vanishing);
      return v;
    }
    throw UnknownCheck("unknown check: " + name);
  }
};

}  // namespace

CheckReport run_checks(const AlgebroidModel& model, const std::vector<std::string>& selection) {
  CheckReport report;
  report.model = model.name;
  report.seed = model.domain().seed;
  report.samples = model.domain().samples;
  report.tol = model.domain().tol;
  for (const auto& s : selection)
    if (std::find(check_names().begin(), check_names().end(), s) == check_names().end())
      throw UnknownCheck("unknown check: " + s);
  Runner runner(model);
  for (const auto& name : check_names()) {
    if (!selection.empty() && std::find(selection.begin(), selection.end(), name) == selection.end()) continue;
    report.checks.push_back({name, runner.get(name)});
  }
  return report;
}

std::string report_json(const CheckReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["model"] = r.model;
  j["seed"] = r.seed;
  j["samples"] = r.samples;
  j["tol"] = r.tol;
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.checks) {
    ordered_json cj;
    cj["name"] = c.name;
    cj["verdict"] = to_string(c.verdict.status);
    cj["residual_max"] = c.verdict.residual_max;
    if (c.verdict.failed() && c.verdict.witness) {
      const Witness& w = *c.verdict.witness;
      ordered_json wj;
      wj["label"] = w.label;
      wj["point"] = w.point;
      wj["value"] = w.value;
      if (!w.detail.empty()) wj["detail"] = w.detail;
      if (!c.verdict.reason.empty()) wj["reason"] = c.verdict.reason;
      cj["witness"] = wj;
    }
    if (c.verdict.status == Status::Skipped) cj["skipped_reason"] = c.verdict.reason;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  // Wall time is omitted to keep reports reproducible.
  j["elapsed_ms"] = 0;
  return j.dump(2);
}

std::string report_text(const CheckReport& r) {
  std::ostringstream os;
  os << "model " << r.model << "  seed " << r.seed << "  samples " << r.samples << "  tol " << r.tol << "\n";
  for (const auto& c : r.checks) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-20s %-8s", c.name.c_str(), to_string(c.verdict.status).c_str());
    os << buf;
    if (c.verdict.passed()) {
      os << " " << to_string(c.verdict.strength);
      if (c.verdict.residual_max > 0) os << " residual " << c.verdict.residual_max;
    } else if (c.verdict.failed()) {
      if (c.verdict.witness) {
        os << " " << c.verdict.witness->label << " = " << c.verdict.witness->value;
        if (!c.verdict.witness->point.empty()) {
          os << " at (";
          for (std::size_t k = 0; k < c.verdict.witness->point.size(); ++k)
            os << (k ? ", " : "") << c.verdict.witness->point[k];
          os << ")";
        }
        if (!c.verdict.witness->detail.empty()) os << " [" << c.verdict.witness->detail << "]";
      }
      if (!c.verdict.reason.empty()) os << ": " << c.verdict.reason;
    } else {
      os << " " << c.verdict.reason;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace forge
