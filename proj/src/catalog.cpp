#include "forge/catalog.hpp"

#include <sstream>

#include "json.hpp"

namespace forge {

namespace {

struct Source {
  const char* name;
  const char* description;
  const char* json;
  // One letter per check in canonical order: P pass, F fail, S skipped.
  const char* expected;
  // Non-empty: replace the connection by the synthesized tangent connection for this v_ref.
  std::vector<const char*> synth_vref;
};

const std::vector<Source>& sources() {
  static const std::vector<Source> s{
      {"example-2.5", "radial anchor on the symplectic plane; frame condition holds, ideal condition fails at 0",
       R"J({"chart":{"coordinates":["x","y"],"domain":[[-2,2],[-2,2]]},"rank":1,
           "anchor":[["x","y"]],"omega":{"0,1":"1"},"connection":{},
           "frames":{"orthogonal":[[["x","y"]]]},"points":[[0,0],[1,0]]})J",
       "PPFPFSSSPSSPPSPS", {}},
      {"example-2.6", "spiral anchor on the plane with the induced connection",
       R"J({"chart":{"coordinates":["x","y"],"domain":[[-2,2],[-2,2]]},"rank":1,
           "anchor":[["y - x*(x^2 + y^2)","-x - y*(x^2 + y^2)"]],"omega":{"0,1":"1"},
           "connection":{"0,0,0":"-4*y","0,1,0":"4*x"},
           "frames":{"orthogonal":[[["y - x*(x^2 + y^2)","-x - y*(x^2 + y^2)"]]]},"points":[[0,0]]})J",
       "PPPPPSSSPSSPPSPS", {}},
      {"cylinder", "contracting spiral on the symplectic cylinder with a flat nontrivial connection",
       R"J({"chart":{"coordinates":["phi","z"],"domain":[[-3,3],[-2,2]]},"rank":1,
           "anchor":[["1","-z"]],"omega":{"0,1":"1"},"connection":{"0,0,0":"-1"},"momentum":["z"],
           "frames":{"orthogonal":[[["1","-z"]]]},"points":[[0,0],[1,0],[-2,0]]})J",
       "PPPPPPPPPPPPPSPP", {}},
      {"example-2.10", "line bundle over a presymplectic 3-space whose orthogonal is a contact distribution",
       R"J({"chart":{"coordinates":["x","y","z"],"domain":[[-2,2],[-2,2],[-2,2]]},"rank":1,
           "anchor":[["1","z","0"]],"omega":{"0,1":"1"},"connection":{},
           "frames":{"orthogonal":[[["1","z","0"],["0","0","1"]]]}})J",
       "PPFFFSSSPSSPPSPS", {}},
      {"example-2.11", "lagrangian but non-involutive anchored plane bundle over a symplectic 4-space",
       R"J({"chart":{"coordinates":["x","y","z","w"],"domain":[[-2,2],[-2,2],[-2,2],[-2,2]]},"rank":2,
           "anchor":[["1","z","0","0"],["0","0","1","0"]],"omega":{"0,1":"1","2,3":"1"},"connection":{},
           "frames":{"orthogonal":[[["1","z","0","0"],["0","0","1","0"]]]}})J",
       "PFFFFSSSSSSFSSSS", {}},
      {"lie-algebra-bundle", "Heisenberg fibres with zero anchor and a constant momentum",
       R"J({"chart":{"coordinates":["x","y"],"domain":[[-2,2],[-2,2]]},"rank":3,
           "anchor":[["0","0"],["0","0"],["0","0"]],"structure":{"0,1,2":"1"},"omega":{"0,1":"1"},
           "connection":{},"momentum":["1","0","0"],"frames":{"orthogonal":[[["1","0"],["0","1"]]]}})J",
       "PPPPPPPPPSPPPSPP", {}},
      {"darboux-r2-noncompatible", "tangent algebroid of the plane, trivial connection, mu = p dq - q dp",
       R"J({"chart":{"coordinates":["q","p"],"domain":[[-2,2],[-2,2]]},"rank":2,
           "anchor":[["1","0"],["0","1"]],"omega":{"0,1":"1"},"connection":{},
           "momentum":["p","-q"],"points":[[0,0]]})J",
       "PPPSPPFFPFFPPSPP", {}},
      {"darboux-r2-compatible", "tangent algebroid of the plane, mu = p dq + dp with the synthesized connection",
       R"J({"chart":{"coordinates":["q","p"],"domain":[[-2,2],[-2,2]]},"rank":2,
           "anchor":[["1","0"],["0","1"]],"omega":{"0,1":"1"},"momentum":["p","1"]})J",
       "PPPSPPPPPSPPPSPP", {"0", "1"}},
      {"darboux-r4", "tangent algebroid of R^4, mu = p1 dq1 + p2 dq2 + dp1 with the synthesized connection",
       R"J({"chart":{"coordinates":["q1","q2","p1","p2"],"domain":[[-2,2],[-2,2],[-2,2],[-2,2]]},"rank":4,
           "anchor":[["1","0","0","0"],["0","1","0","0"],["0","0","1","0"],["0","0","0","1"]],
           "omega":{"0,2":"1","1,3":"1"},"momentum":["p1","p2","1","0"]})J",
       "PPPSPPPPPSPPPSPP", {"0", "0", "1", "0"}},
      {"heisenberg-action", "Heisenberg algebra acting by translations on the plane, <mu, I> = 1",
       R"J({"chart":{"coordinates":["q","p"],"domain":[[-2,2],[-2,2]]},"rank":3,
           "anchor":[["0","-1"],["1","0"],["0","0"]],"structure":{"0,1,2":"1"},"omega":{"0,1":"1"},
           "connection":{},"momentum":["q","p","1"],
           "finite_lie_algebra":{"dimension":3,"structure":{"0,1,2":"1"},"subalgebra":[["0","0","1"]]}})J",
       "PPPSPPFFPSFPPFPP", {}},
      {"heisenberg-action-compatible", "Heisenberg translation action with the bracket-compatible value <mu, I> = -1",
       R"J({"chart":{"coordinates":["q","p"],"domain":[[-2,2],[-2,2]]},"rank":3,
           "anchor":[["0","-1"],["1","0"],["0","0"]],"structure":{"0,1,2":"1"},"omega":{"0,1":"1"},
           "connection":{},"momentum":["q","p","-1"],
           "finite_lie_algebra":{"dimension":3,"structure":{"0,1,2":"1"},"subalgebra":[["0","0","1"]]}})J",
       "PPPSPPPPPSPPPFPP", {}},
      {"translation", "translation along q with momentum p; zero locus is the q-axis",
       R"J({"chart":{"coordinates":["q","p"],"domain":[[-2,2],[-2,2]]},"rank":1,
           "anchor":[["1","0"]],"omega":{"0,1":"1"},"connection":{},"momentum":["p"],
           "frames":{"orthogonal":[[["1","0"]]]},
           "points":[[-1,0],[-0.5,0],[0,0],[0.5,0],[1,0]]})J",
       "PPPPPPPPPPPPPSPP", {}},
  };
  return s;
}

Status status_of(char c) {
  switch (c) {
    case 'P':
      return Status::Pass;
    case 'F':
      return Status::Fail;
    default:
      return Status::Skipped;
  }
}

CatalogEntry build(const Source& s) {
  CatalogEntry e;
  e.name = s.name;
  e.description = s.description;
  e.model = parse_model(s.json);
  e.model.name = s.name;
  if (!s.synth_vref.empty()) {
    std::vector<Expr> comps;
    for (const char* c : s.synth_vref) comps.push_back(e.model.chart().parse(c));
    SynthesisResult r =
        synthesize_tangent_connection(e.model.chart(), *e.model.omega, *e.model.momentum, VectorField(comps));
    e.model.connection = r.connection;
  }
  const auto& names = check_names();
  for (std::size_t k = 0; k < names.size(); ++k) e.expected[names[k]] = status_of(s.expected[k]);
  return e;
}

}  // namespace

std::vector<std::string> catalog_names() {
  std::vector<std::string> out;
  for (const auto& s : sources()) out.emplace_back(s.name);
  return out;
}

CatalogEntry catalog_entry(const std::string& name) {
  for (const auto& s : sources())
    if (name == s.name) return build(s);
  throw CatalogError("unknown catalog model: " + name);
}

CatalogRun run_catalog_entry(const CatalogEntry& e) {
  CatalogRun run{e, run_checks(e.model), {}};
  for (const auto& c : run.report.checks) {
    auto it = e.expected.find(c.name);
    if (it == e.expected.end()) continue;
    if (it->second != c.verdict.status)
      run.mismatches.push_back(c.name + ": expected " + to_string(it->second) + ", got " +
                               to_string(c.verdict.status));
  }
  return run;
}

std::vector<CatalogRun> run_catalog(const std::vector<std::string>& names) {
  std::vector<CatalogRun> out;
  for (const auto& n : names.empty() ? catalog_names() : names) out.push_back(run_catalog_entry(catalog_entry(n)));
  return out;
}

std::string catalog_json(const std::vector<CatalogRun>& runs) {
  using nlohmann::ordered_json;
  ordered_json arr = ordered_json::array();
  bool all = true;
  for (const auto& r : runs) {
    ordered_json j;
    j["model"] = r.entry.name;
    j["matches_expected"] = r.matches();
    j["mismatches"] = r.mismatches;
    j["report"] = ordered_json::parse(report_json(r.report));
    arr.push_back(j);
    all = all && r.matches();
  }
  ordered_json out;
  out["catalog"] = arr;
  out["all_match"] = all;
  return out.dump(2);
}

std::string catalog_text(const std::vector<CatalogRun>& runs) {
  std::ostringstream os;
  for (const auto& r : runs) {
    os << (r.matches() ? "ok    " : "FAIL  ") << r.entry.name << "\n";
    for (const auto& m : r.mismatches) os << "      " << m << "\n";
  }
  return os.str();
}

}  // namespace forge
