#include "forge/model.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace forge {

using nlohmann::json;

namespace {

std::vector<int> split_key(const std::string& key, std::size_t expected, const std::string& field) {
  std::vector<int> out;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      int v = std::stoi(part, &used);
      if (used != part.size() || v < 0) throw std::invalid_argument(part);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ModelError(field + ": bad index key \"" + key + "\"");
    }
  }
  if (out.size() != expected) throw ModelError(field + ": key \"" + key + "\" needs " + std::to_string(expected) + " indices");
  return out;
}

Expr expression(const json& j, const std::vector<std::string>& names, const std::string& where) {
  std::string text;
  if (j.is_string()) {
    text = j.get<std::string>();
  } else if (j.is_number_integer()) {
    text = std::to_string(j.get<long long>());
  } else if (j.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << j.get<double>();
    text = os.str();
  } else {
    throw ModelError(where + ": expected an expression string");
  }
  try {
    return parse(text, names);
  } catch (const ParseError& e) {
    throw ModelError(where + ": " + e.what());
  }
}

Rational rational(const json& j, const std::string& where) {
  Expr e = expression(j, {}, where);
  auto c = e.as_constant();
  if (!c) throw ModelError(where + ": expected a rational constant");
  return *c;
}

void check_bound(int v, int limit, const std::string& where) {
  if (v >= limit) throw ModelError(where + ": index " + std::to_string(v) + " out of range");
}

const json& require(const json& j, const char* key) {
  if (!j.contains(key)) throw ModelError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::vector<Expr> expression_row(const json& j, std::size_t n, const std::vector<std::string>& names,
                                 const std::string& where) {
  if (!j.is_array() || j.size() != n) throw ModelError(where + ": expected " + std::to_string(n) + " entries");
  std::vector<Expr> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(expression(j[k], names, where));
  return out;
}

AlgebroidModel build(const json& j) {
  if (!j.is_object()) throw ModelError("model must be a JSON object");
  AlgebroidModel m;
  m.name = j.value("name", std::string("model"));

  const json& chart = require(j, "chart");
  const auto names = require(chart, "coordinates").get<std::vector<std::string>>();
  const int n = static_cast<int>(names.size());
  SampleDomain dom = SampleDomain::box(n, -2.0, 2.0);
  if (chart.contains("domain")) {
    const json& d = chart.at("domain");
    if (!d.is_array() || static_cast<int>(d.size()) != n) throw ModelError("chart.domain needs one interval per coordinate");
    for (int k = 0; k < n; ++k) {
      if (!d[k].is_array() || d[k].size() != 2) throw ModelError("chart.domain: interval must be [lower, upper]");
      dom.intervals[k] = Interval{d[k][0].get<double>(), d[k][1].get<double>()};
    }
  }
  if (j.contains("sampling")) {
    const json& s = j.at("sampling");
    dom.samples = s.value("n", dom.samples);
    dom.seed = s.value("seed", dom.seed);
    dom.tol = s.value("tol", dom.tol);
  }
  try {
    dom.validate();
  } catch (const std::invalid_argument& e) {
    throw ModelError(std::string("sampling: ") + e.what());
  }
  Chart c;
  try {
    c = Chart(names, dom);
  } catch (const std::invalid_argument& e) {
    throw ModelError(std::string("chart: ") + e.what());
  }

  const int r = require(j, "rank").get<int>();
  if (r < 1 || r > kMaxWeilRank) throw ModelError("rank must be between 1 and " + std::to_string(kMaxWeilRank));
  const json& anchor = require(j, "anchor");
  if (!anchor.is_array() || static_cast<int>(anchor.size()) != r) throw ModelError("anchor needs one row per frame section");
  std::vector<VectorField> rho;
  for (int i = 0; i < r; ++i) rho.emplace_back(expression_row(anchor[i], n, names, "anchor row " + std::to_string(i)));
  m.algebroid = LieAlgebroid(c, rho);

  if (j.contains("structure"))
    for (const auto& [key, val] : j.at("structure").items()) {
      auto ix = split_key(key, 3, "structure");
      for (int v : ix) check_bound(v, r, "structure");
      if (ix[0] >= ix[1]) throw ModelError("structure: keys must have i < j");
      m.algebroid.set_structure(ix[0], ix[1], ix[2], expression(val, names, "structure " + key));
    }

  if (j.contains("omega")) {
    DifferentialForm w(n, 2);
    for (const auto& [key, val] : j.at("omega").items()) {
      auto ix = split_key(key, 2, "omega");
      for (int v : ix) check_bound(v, n, "omega");
      if (ix[0] >= ix[1]) throw ModelError("omega: keys must have alpha < beta");
      w.add((Mask{1} << ix[0]) | (Mask{1} << ix[1]), expression(val, names, "omega " + key));
    }
    m.omega = PresymplecticStructure(w);
  }

  if (j.contains("connection")) {
    Connection D(r, n);
    for (const auto& [key, val] : j.at("connection").items()) {
      auto ix = split_key(key, 3, "connection");
      check_bound(ix[0], r, "connection");
      check_bound(ix[1], n, "connection");
      check_bound(ix[2], r, "connection");
      D.set(ix[0], ix[1], ix[2], expression(val, names, "connection " + key));
    }
    m.connection = D;
  }

  if (j.contains("momentum")) {
    auto comps = expression_row(j.at("momentum"), r, names, "momentum");
    AForm mu(r, 1);
    for (int i = 0; i < r; ++i) mu.add(Mask{1} << i, comps[i]);
    m.momentum = mu;
  }

  if (j.contains("frames") && j.at("frames").contains("orthogonal"))
    for (const auto& frame : j.at("frames").at("orthogonal")) {
      std::vector<VectorField> fields;
      for (const auto& v : frame) fields.emplace_back(expression_row(v, n, names, "frames.orthogonal"));
      m.orthogonal_frames.push_back(std::move(fields));
    }

  if (j.contains("points"))
    for (const auto& p : j.at("points")) {
      auto pt = p.get<std::vector<double>>();
      if (static_cast<int>(pt.size()) != n) throw ModelError("points: wrong dimension");
      m.points.push_back(std::move(pt));
    }

  if (j.contains("finite_lie_algebra")) {
    const json& g = j.at("finite_lie_algebra");
    const int dim = require(g, "dimension").get<int>();
    if (dim < 1) throw ModelError("finite_lie_algebra.dimension must be positive");
    LieAlgebraData data{FiniteLieAlgebra(dim), {}};
    if (g.contains("structure"))
      for (const auto& [key, val] : g.at("structure").items()) {
        auto ix = split_key(key, 3, "finite_lie_algebra.structure");
        for (int v : ix) check_bound(v, dim, "finite_lie_algebra.structure");
        if (ix[0] >= ix[1]) throw ModelError("finite_lie_algebra.structure: keys must have i < j");
        data.algebra.set_structure(ix[0], ix[1], ix[2], rational(val, "finite_lie_algebra.structure"));
      }
    try {
      data.algebra.certify();
    } catch (const std::invalid_argument& e) {
      throw ModelError(std::string("finite_lie_algebra: ") + e.what());
    }
    if (g.contains("subalgebra"))
      for (const auto& v : g.at("subalgebra")) {
        if (!v.is_array() || static_cast<int>(v.size()) != dim) throw ModelError("subalgebra vector has wrong length");
        RationalVector x;
        for (const auto& e : v) x.push_back(rational(e, "subalgebra"));
        data.subalgebra.push_back(std::move(x));
      }
    m.lie_algebra = std::move(data);
  }
  return m;
}

std::string key_of(std::initializer_list<int> ix) {
  std::string s;
  for (int v : ix) {
    if (!s.empty()) s += ",";
    s += std::to_string(v);
  }
  return s;
}

}  // namespace

AlgebroidModel parse_model(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("invalid JSON: ") + e.what());
  }
  try {
    return build(j);
  } catch (const json::exception& e) {
    throw ModelError(std::string("schema: ") + e.what());
  }
}

AlgebroidModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

std::string dump_model(const AlgebroidModel& m) {
  const auto& L = m.algebroid;
  const auto& names = L.chart.names;
  const int n = L.dim(), r = L.rank;
  json j;
  j["name"] = m.name;
  json dom = json::array();
  for (const auto& iv : L.chart.domain.intervals) dom.push_back({iv.lower, iv.upper});
  j["chart"] = {{"coordinates", names}, {"domain", dom}};
  j["rank"] = r;
  json anchor = json::array();
  for (int i = 0; i < r; ++i) {
    json row = json::array();
    for (int a = 0; a < n; ++a) row.push_back(L.rho(a, i).str(names));
    anchor.push_back(row);
  }
  j["anchor"] = anchor;
  json st = json::object();
  for (int i = 0; i < r; ++i)
    for (int k = i + 1; k < r; ++k)
      for (int l = 0; l < r; ++l)
        if (!L.structure(i, k, l).is_zero()) st[key_of({i, k, l})] = L.structure(i, k, l).str(names);
  j["structure"] = st;
  if (m.omega) {
    json w = json::object();
    for (const auto& [mask, e] : m.omega->omega.coefficients()) {
      auto ix = mask_indices(mask);
      if (!e.is_zero()) w[key_of({ix[0], ix[1]})] = e.str(names);
    }
    j["omega"] = w;
  }
  if (m.connection) {
    json c = json::object();
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < n; ++b)
        for (int i = 0; i < r; ++i)
          if (!m.connection->coefficient(a, b, i).is_zero())
            c[key_of({a, b, i})] = m.connection->coefficient(a, b, i).str(names);
    j["connection"] = c;
  }
  if (m.momentum) {
    json mu = json::array();
    for (int i = 0; i < r; ++i) mu.push_back(m.momentum->get(Mask{1} << i).str(names));
    j["momentum"] = mu;
  }
  if (!m.orthogonal_frames.empty()) {
    json frames = json::array();
    for (const auto& f : m.orthogonal_frames) {
      json fj = json::array();
      for (const auto& v : f) {
        json vj = json::array();
        for (int a = 0; a < n; ++a) vj.push_back(v[a].str(names));
        fj.push_back(vj);
      }
      frames.push_back(fj);
    }
    j["frames"] = {{"orthogonal", frames}};
  }
  if (!m.points.empty()) j["points"] = m.points;
  if (m.lie_algebra) {
    const auto& g = m.lie_algebra->algebra;
    json s = json::object();
    for (int a = 0; a < g.dim(); ++a)
      for (int b = a + 1; b < g.dim(); ++b)
        for (int c = 0; c < g.dim(); ++c)
          if (g.structure(a, b, c) != 0) s[key_of({a, b, c})] = g.structure(a, b, c).get_str();
    json sub = json::array();
    for (const auto& v : m.lie_algebra->subalgebra) {
      json vj = json::array();
      for (const auto& x : v) vj.push_back(x.get_str());
      sub.push_back(vj);
    }
    j["finite_lie_algebra"] = {{"dimension", g.dim()}, {"structure", s}, {"subalgebra", sub}};
  }
  const auto& d = L.chart.domain;
  j["sampling"] = {{"n", d.samples}, {"seed", d.seed}, {"tol", d.tol}};
  return j.dump(2);
}

}  // namespace forge
