#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "forge/catalog.hpp"
#include "forge/weil.hpp"

using namespace forge;

namespace {

enum Exit { Ok = 0, Failed = 1, Malformed = 2 };

std::vector<std::string> split_vector(std::string text) {
  for (char& c : text)
    if (c == '[' || c == ']' || c == '(' || c == ')') c = ' ';
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

int run_check(const std::string& path, const std::string& list, std::optional<int> samples,
              std::optional<std::uint64_t> seed, std::optional<double> tol, const std::string& format) {
  AlgebroidModel m = load_model(path);
  SampleDomain& d = m.algebroid.chart.domain;
  if (samples) d.samples = *samples;
  if (seed) d.seed = *seed;
  if (tol) d.tol = *tol;
  try {
    d.validate();
  } catch (const std::invalid_argument& e) {
    throw ModelError(e.what());
  }
  CheckReport r = run_checks(m, parse_check_list(list));
  std::cout << (format == "text" ? report_text(r) : report_json(r) + "\n");
  return r.any_failed() ? Failed : Ok;
}

int run_weil(const std::string& path) {
  AlgebroidModel m = load_model(path);
  if (!m.omega || !m.connection || !m.momentum) throw ModelError("weil needs omega, connection and momentum");
  const auto& L = m.algebroid;
  const WeilNames names = weil_names(L);
  TheoremReport t = theorem_check(L, *m.omega, *m.connection, *m.momentum, m.domain());
  std::cout << "extension      " << t.extension.str(names) << "\n";
  std::cout << "d-hat          " << t.differential.str(names) << "\n";
  auto line = [](const char* label, const Verdict& v) {
    std::cout << label << to_string(v.status);
    if (v.failed() && v.witness) std::cout << "  (" << v.witness->label << ")";
    std::cout << "\n";
  };
  line("extension prop ", t.extension_property);
  line("split assembly ", t.split_agreement);
  line("closed         ", t.closed);
  line("bidegree (3,0) ", t.bidegree_30);
  line("bidegree (2,1) ", t.bidegree_21);
  line("bidegree (1,2) ", t.bidegree_12);
  line("d omega = 0    ", t.classical_closed);
  line("H2             ", t.classical_h2);
  line("H3             ", t.classical_h3);
  std::cout << "agreement      " << t.agreements() << "/3 literal, "
            << (t.conditional_agreement() ? "conditional ok" : "conditional MISMATCH") << "\n";
  BasicReport b = is_basic(L, *m.connection, t.extension, m.domain());
  line("basic          ", b.basic);
  if (b.generation_disagreement) std::cout << "note           frame-level and function-level basic verdicts differ\n";
  return t.closed.passed() ? Ok : Failed;
}

int run_synth(const std::string& path, const std::string& vref) {
  AlgebroidModel m = load_model(path);
  if (!m.omega || !m.momentum) throw ModelError("synth needs omega and momentum");
  const int n = m.chart().dim();
  if (m.algebroid.rank != n) throw ModelError("synth expects the tangent algebroid (rank = dimension)");
  auto parts = split_vector(vref);
  if (static_cast<int>(parts.size()) != n) throw ModelError("--vref needs " + std::to_string(n) + " components");
  std::vector<Expr> comps;
  for (const auto& p : parts) {
    try {
      comps.push_back(m.chart().parse(p));
    } catch (const ParseError& e) {
      throw ModelError(std::string("--vref: ") + e.what());
    }
  }
  try {
    SynthesisResult r = synthesize_tangent_connection(m.chart(), *m.omega, *m.momentum, VectorField(comps));
    m.algebroid = tangent_algebroid(m.chart());
    m.connection = r.connection;
    std::cout << dump_model(m) << "\n";
    std::cerr << "H1 " << to_string(r.h1.status) << ", H2 " << to_string(r.h2.status) << "\n";
    return r.h1.passed() && r.h2.passed() ? Ok : Failed;
  } catch (const SynthesisError& e) {
    std::cerr << "forge: synthesis refused: " << e.what() << "\n";
    return Failed;
  }
}

int run_catalog_cmd(const std::string& action, const std::string& name, const std::string& format) {
  if (action == "list") {
    for (const auto& n : catalog_names()) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%-30s", n.c_str());
      std::cout << buf << catalog_entry(n).description << "\n";
    }
    return Ok;
  }
  std::vector<std::string> names;
  if (!name.empty()) names.push_back(name);
  auto runs = run_catalog(names);
  std::cout << (format == "text" ? catalog_text(runs) : catalog_json(runs) + "\n");
  for (const auto& r : runs)
    if (!r.matches()) return Failed;
  return Ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forge: verification engine for hamiltonian Lie algebroids"};
  app.require_subcommand(1);

  std::string model_path, checks, format = "json", vref, action, name;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;

  auto* check = app.add_subcommand("check", "run checks on a model file");
  check->add_option("model", model_path, "model JSON")->required();
  check->add_option("--checks", checks, "comma-separated check names");
  check->add_option("--samples", samples, "sample count");
  check->add_option("--seed", seed, "sampling seed");
  check->add_option("--tol", tol, "zero tolerance");
  check->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* weil = app.add_subcommand("weil", "build the Weil extension of omega and test d-hat");
  weil->add_option("model", model_path, "model JSON")->required();

  auto* synth = app.add_subcommand("synth", "synthesize a tangent connection for a momentum 1-form");
  synth->add_option("model", model_path, "model JSON")->required();
  synth->add_option("--vref", vref, "reference vector field, e.g. \"[0, 1]\"")->required();

  auto* cat = app.add_subcommand("catalog", "built-in example models");
  cat->add_option("action", action, "list or run")->required()->check(CLI::IsMember({"list", "run"}));
  cat->add_option("name", name, "catalog model");
  cat->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? Ok : Malformed;
  }

  try {
    if (*check) return run_check(model_path, checks, samples, seed, tol, format);
    if (*weil) return run_weil(model_path);
    if (*synth) return run_synth(model_path, vref);
    if (*cat) return run_catalog_cmd(action, name, format);
  } catch (const ModelError& e) {
    std::cerr << "forge: malformed model: " << e.what() << "\n";
    return Malformed;
  } catch (const UnknownCheck& e) {
    std::cerr << "forge: " << e.what() << "\n";
    return Malformed;
  } catch (const CatalogError& e) {
    std::cerr << "forge: " << e.what() << "\n";
    return Malformed;
  } catch (const SamplingExhausted& e) {
    std::cerr << "forge: " << e.what() << "\n";
    return Malformed;
  }
  return Ok;
}
