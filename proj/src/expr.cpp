#include "forge/expr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace forge {

// ---- Monomial / Polynomial ----------------------------------------------

int Monomial::degree() const {
  int d = 0;
  for (auto e : exps) d += e;
  return d;
}

bool Monomial::is_one() const {
  return std::all_of(exps.begin(), exps.end(), [](auto e) { return e == 0; });
}

Polynomial Polynomial::constant(const Rational& c) {
  Polynomial p;
  if (c != 0) p.terms_.push_back({Monomial{}, c});
  return p;
}

Polynomial Polynomial::coordinate(int index) {
  if (index < 0 || index >= kMaxCoordinates)
    throw std::out_of_range("coordinate index out of range");
  Polynomial p;
  Monomial m;
  m.exps[index] = 1;
  p.terms_.push_back({m, Rational(1)});
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one());
}

Rational Polynomial::constant_term() const {
  if (!terms_.empty() && terms_[0].first.is_one()) return terms_[0].second;
  return Rational(0);
}

int Polynomial::max_coordinate() const {
  int best = -1;
  for (const auto& [m, c] : terms_)
    for (int i = kMaxCoordinates - 1; i > best; --i)
      if (m.exps[i] != 0) {
        best = i;
        break;
      }
  return best;
}

Polynomial Polynomial::from_unsorted(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.first < b.first; });
  Polynomial p;
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().first == t.first) {
      p.terms_.back().second += t.second;
    } else {
      if (!p.terms_.empty() && p.terms_.back().second == 0) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && p.terms_.back().second == 0) p.terms_.pop_back();
  return p;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r;
  r.terms_.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j == o.terms_.size() || (i < terms_.size() && terms_[i].first < o.terms_[j].first)) {
      r.terms_.push_back(terms_[i++]);
    } else if (i == terms_.size() || o.terms_[j].first < terms_[i].first) {
      r.terms_.push_back(o.terms_[j++]);
    } else {
      Rational c = terms_[i].second + o.terms_[j].second;
      if (c != 0) r.terms_.push_back({terms_[i].first, c});
      ++i;
      ++j;
    }
  }
  return r;
}

Polynomial Polynomial::operator-() const { return scaled(Rational(-1)); }

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::scaled(const Rational& c) const {
  if (c == 0) return {};
  Polynomial r = *this;
  for (auto& t : r.terms_) t.second *= c;
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (is_zero() || o.is_zero()) return {};
  std::vector<Term> out;
  out.reserve(terms_.size() * o.terms_.size());
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      Monomial m;
      for (int k = 0; k < kMaxCoordinates; ++k) {
        int e = ma.exps[k] + mb.exps[k];
        if (e > 255) throw std::overflow_error("monomial exponent overflow");
        m.exps[k] = static_cast<std::uint8_t>(e);
      }
      out.push_back({m, ca * cb});
    }
  }
  return from_unsorted(std::move(out));
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial result = constant(Rational(1));
  Polynomial base = *this;
  while (k > 0) {
    if (k & 1u) result = result * base;
    k >>= 1u;
    if (k > 0) base = base * base;
  }
  return result;
}

Polynomial Polynomial::derivative(int index) const {
  std::vector<Term> out;
  for (const auto& [m, c] : terms_) {
    if (m.exps[index] == 0) continue;
    Monomial dm = m;
    dm.exps[index] -= 1;
    out.push_back({dm, c * static_cast<long>(m.exps[index])});
  }
  return from_unsorted(std::move(out));
}

// ---- Node ----------------------------------------------------------------

struct Node {
  NodeKind kind = NodeKind::Polynomial;
  Rational value;
  int index = 0;
  std::vector<Expr> children;
  std::optional<Polynomial> poly;
  std::vector<double> dcoef;
  int max_coord = -1;
};

struct NodeBuilder {
  static Expr make(Node n) {
    if (n.kind == NodeKind::Polynomial) {
      for (const auto& t : n.poly->terms()) n.dcoef.push_back(t.second.get_d());
      n.max_coord = n.poly->max_coordinate();
    } else {
      for (const auto& c : n.children) n.max_coord = std::max(n.max_coord, c.max_coordinate());
      if (n.kind == NodeKind::Coordinate) n.max_coord = n.index;
    }
    return Expr(std::make_shared<const Node>(std::move(n)));
  }

  static Expr poly(Polynomial p) {
    Node n;
    n.kind = NodeKind::Polynomial;
    n.poly = std::move(p);
    return make(std::move(n));
  }
};

namespace {

const Expr& zero_expr() {
  static const Expr z = NodeBuilder::poly(Polynomial{});
  return z;
}

Expr tree(NodeKind kind, std::vector<Expr> children, std::optional<Polynomial> poly,
          int index = 0) {
  Node n;
  n.kind = kind;
  n.children = std::move(children);
  n.poly = std::move(poly);
  n.index = index;
  return NodeBuilder::make(std::move(n));
}

}  // namespace

Expr::Expr() : Expr(zero_expr()) {}
Expr::Expr(long v) : Expr(NodeBuilder::poly(Polynomial::constant(Rational(v)))) {}
Expr::Expr(const Rational& v) : Expr(NodeBuilder::poly(Polynomial::constant(v))) {}
Expr::Expr(const Polynomial& p) : Expr(NodeBuilder::poly(p)) {}

Expr Expr::coordinate(int index) {
  Node n;
  n.kind = NodeKind::Coordinate;
  n.index = index;
  n.poly = Polynomial::coordinate(index);
  return NodeBuilder::make(std::move(n));
}

Expr Expr::raw_constant(const Rational& v) {
  Node n;
  n.kind = NodeKind::Constant;
  n.value = v;
  n.poly = Polynomial::constant(v);
  return NodeBuilder::make(std::move(n));
}

Expr Expr::raw_sum(std::vector<Expr> terms) {
  std::optional<Polynomial> p = Polynomial{};
  for (const auto& t : terms) {
    if (!t.is_polynomial()) {
      p.reset();
      break;
    }
    *p = *p + *t.polynomial();
  }
  return tree(NodeKind::Sum, std::move(terms), std::move(p));
}

Expr Expr::raw_product(std::vector<Expr> factors) {
  std::optional<Polynomial> p = Polynomial::constant(Rational(1));
  for (const auto& f : factors) {
    if (!f.is_polynomial()) {
      p.reset();
      break;
    }
    *p = *p * *f.polynomial();
  }
  return tree(NodeKind::Product, std::move(factors), std::move(p));
}

Expr Expr::raw_power(Expr base, int exponent) {
  if (exponent < 0) return raw_quotient(Expr(1), raw_power(std::move(base), -exponent));
  std::optional<Polynomial> p;
  if (base.is_polynomial()) p = base.polynomial()->pow(static_cast<unsigned>(exponent));
  return tree(NodeKind::Power, {std::move(base)}, std::move(p), exponent);
}

Expr Expr::raw_negation(Expr e) {
  std::optional<Polynomial> p;
  if (e.is_polynomial()) p = -*e.polynomial();
  return tree(NodeKind::Negation, {std::move(e)}, std::move(p));
}

Expr Expr::raw_quotient(Expr num, Expr den) {
  // Division by a nonzero rational constant stays polynomial.
  std::optional<Polynomial> p;
  if (num.is_polynomial())
    if (auto c = den.as_constant(); c && *c != 0) p = num.polynomial()->scaled(Rational(1) / *c);
  return tree(NodeKind::Quotient, {std::move(num), std::move(den)}, std::move(p));
}

Expr Expr::raw_unary(NodeKind fn, Expr arg) {
  if (fn != NodeKind::Sin && fn != NodeKind::Cos && fn != NodeKind::Exp)
    throw std::invalid_argument("raw_unary expects sin, cos or exp");
  return tree(fn, {std::move(arg)}, std::nullopt);
}

NodeKind Expr::kind() const { return node_->kind; }
const std::vector<Expr>& Expr::children() const { return node_->children; }
const Rational& Expr::constant_value() const { return node_->value; }
int Expr::coordinate_index() const { return node_->index; }
int Expr::exponent() const { return node_->index; }
const std::optional<Polynomial>& Expr::polynomial() const { return node_->poly; }
int Expr::max_coordinate() const { return node_->max_coord; }

bool Expr::is_zero() const { return node_->poly && node_->poly->is_zero(); }

bool Expr::is_constant() const { return node_->poly && node_->poly->is_constant(); }

std::optional<Rational> Expr::as_constant() const {
  if (!is_constant()) return std::nullopt;
  return node_->poly->constant_term();
}

// ---- simplifying arithmetic ----------------------------------------------

namespace {

// Splits e into (polynomial part, non-polynomial summands).
void collect_sum(const Expr& e, Polynomial& p, std::vector<Expr>& rest) {
  if (e.is_polynomial()) {
    p = p + *e.polynomial();
  } else if (e.kind() == NodeKind::Sum) {
    for (const auto& c : e.children()) collect_sum(c, p, rest);
  } else {
    rest.push_back(e);
  }
}

void collect_product(const Expr& e, Polynomial& p, std::vector<Expr>& rest) {
  if (e.is_polynomial()) {
    p = p * *e.polynomial();
  } else if (e.kind() == NodeKind::Product) {
    for (const auto& c : e.children()) collect_product(c, p, rest);
  } else {
    rest.push_back(e);
  }
}

}  // namespace

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_polynomial() && b.is_polynomial())
    return Expr(*a.polynomial() + *b.polynomial());
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  Polynomial p;
  std::vector<Expr> rest;
  collect_sum(a, p, rest);
  collect_sum(b, p, rest);
  std::vector<Expr> terms;
  if (!p.is_zero()) terms.push_back(Expr(p));
  for (auto& r : rest) terms.push_back(std::move(r));
  if (terms.size() == 1) return terms[0];
  return tree(NodeKind::Sum, std::move(terms), std::nullopt);
}

Expr operator-(const Expr& a) {
  if (a.is_polynomial()) return Expr(-*a.polynomial());
  return Expr(-1) * a;
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_polynomial() && b.is_polynomial())
    return Expr(*a.polynomial() * *b.polynomial());
  if (a.is_zero() || b.is_zero()) return Expr();
  Polynomial p = Polynomial::constant(Rational(1));
  std::vector<Expr> rest;
  collect_product(a, p, rest);
  collect_product(b, p, rest);
  if (p.is_zero()) return Expr();
  // Distribute a polynomial factor over a single non-polynomial sum so that
  // like terms can cancel.
  if (rest.size() == 1 && rest[0].kind() == NodeKind::Sum && !p.is_constant()) {
    Expr acc;
    for (const auto& t : rest[0].children()) acc = acc + Expr(p) * t;
    return acc;
  }
  std::vector<Expr> factors;
  if (!(p.is_constant() && p.constant_term() == 1)) factors.push_back(Expr(p));
  for (auto& r : rest) factors.push_back(std::move(r));
  if (factors.size() == 1) return factors[0];
  return tree(NodeKind::Product, std::move(factors), std::nullopt);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (auto c = b.as_constant()) {
    if (*c == 0) return Expr::raw_quotient(a, b);
    return a * Expr(Rational(1) / *c);
  }
  if (a.is_zero()) return Expr();
  return Expr::raw_quotient(a, b);
}

Expr pow(const Expr& base, int exponent) {
  if (exponent == 0) return Expr(1);
  if (exponent < 0) return Expr(1) / pow(base, -exponent);
  if (base.is_polynomial()) return Expr(base.polynomial()->pow(static_cast<unsigned>(exponent)));
  if (exponent == 1) return base;
  return tree(NodeKind::Power, {base}, std::nullopt, exponent);
}

Expr sin(const Expr& e) {
  if (e.is_zero()) return Expr();
  return Expr::raw_unary(NodeKind::Sin, e);
}

Expr cos(const Expr& e) {
  if (e.is_zero()) return Expr(1);
  return Expr::raw_unary(NodeKind::Cos, e);
}

Expr exp(const Expr& e) {
  if (e.is_zero()) return Expr(1);
  return Expr::raw_unary(NodeKind::Exp, e);
}

// ---- differentiation -----------------------------------------------------

Expr Expr::diff(int index) const {
  if (is_polynomial()) return Expr(polynomial()->derivative(index));
  const auto& ch = children();
  switch (kind()) {
    case NodeKind::Sum: {
      Expr acc;
      for (const auto& c : ch) acc = acc + c.diff(index);
      return acc;
    }
    case NodeKind::Product: {
      Expr acc;
      for (std::size_t i = 0; i < ch.size(); ++i) {
        Expr d = ch[i].diff(index);
        if (d.is_zero()) continue;
        Expr term = d;
        for (std::size_t j = 0; j < ch.size(); ++j)
          if (j != i) term = term * ch[j];
        acc = acc + term;
      }
      return acc;
    }
    case NodeKind::Power: {
      int k = exponent();
      return Expr(static_cast<long>(k)) * pow(ch[0], k - 1) * ch[0].diff(index);
    }
    case NodeKind::Negation:
      return -ch[0].diff(index);
    case NodeKind::Quotient: {
      const Expr& u = ch[0];
      const Expr& v = ch[1];
      Expr du = u.diff(index);
      Expr dv = v.diff(index);
      if (dv.is_zero()) return du / v;
      return (du * v - u * dv) / pow(v, 2);
    }
    case NodeKind::Sin:
      return cos(ch[0]) * ch[0].diff(index);
    case NodeKind::Cos:
      return -(sin(ch[0]) * ch[0].diff(index));
    case NodeKind::Exp:
      return *this * ch[0].diff(index);
    default:
      return Expr();
  }
}

// ---- evaluation ----------------------------------------------------------

namespace {

double coord_value(std::span<const double> p, int i) {
  if (i >= static_cast<int>(p.size())) throw std::out_of_range("sample point too short");
  return p[i];
}

Evaluation eval_node(const Node& n, std::span<const double> p) {
  Evaluation r;
  auto absorb = [&r](const Evaluation& c) {
    r.max_magnitude = std::max(r.max_magnitude, c.max_magnitude);
    r.finite = r.finite && c.finite;
  };
  switch (n.kind) {
    case NodeKind::Polynomial: {
      const auto& terms = n.poly->terms();
      double sum = 0.0;
      for (std::size_t t = 0; t < terms.size(); ++t) {
        double v = n.dcoef[t];
        const auto& m = terms[t].first;
        for (int k = 0; k <= n.max_coord; ++k)
          for (int e = 0; e < m.exps[k]; ++e) v *= coord_value(p, k);
        r.max_magnitude = std::max(r.max_magnitude, std::abs(v));
        sum += v;
      }
      r.value = sum;
      break;
    }
    case NodeKind::Constant:
      r.value = n.value.get_d();
      break;
    case NodeKind::Coordinate:
      r.value = coord_value(p, n.index);
      break;
    case NodeKind::Sum: {
      double s = 0.0;
      for (const auto& c : n.children) {
        Evaluation e = eval_node(*c.node(), p);
        absorb(e);
        s += e.value;
      }
      r.value = s;
      break;
    }
    case NodeKind::Product: {
      double s = 1.0;
      for (const auto& c : n.children) {
        Evaluation e = eval_node(*c.node(), p);
        absorb(e);
        s *= e.value;
      }
      r.value = s;
      break;
    }
    case NodeKind::Power: {
      Evaluation e = eval_node(*n.children[0].node(), p);
      absorb(e);
      r.value = std::pow(e.value, n.index);
      break;
    }
    case NodeKind::Negation: {
      Evaluation e = eval_node(*n.children[0].node(), p);
      absorb(e);
      r.value = -e.value;
      break;
    }
    case NodeKind::Quotient: {
      Evaluation a = eval_node(*n.children[0].node(), p);
      Evaluation b = eval_node(*n.children[1].node(), p);
      absorb(a);
      absorb(b);
      r.value = a.value / b.value;
      break;
    }
    case NodeKind::Sin:
    case NodeKind::Cos:
    case NodeKind::Exp: {
      Evaluation e = eval_node(*n.children[0].node(), p);
      absorb(e);
      r.value = n.kind == NodeKind::Sin   ? std::sin(e.value)
                : n.kind == NodeKind::Cos ? std::cos(e.value)
                                          : std::exp(e.value);
      break;
    }
  }
  r.max_magnitude = std::max(r.max_magnitude, std::abs(r.value));
  r.finite = r.finite && std::isfinite(r.value);
  return r;
}

}  // namespace

double Expr::evaluate(std::span<const double> point) const {
  return eval_node(*node_, point).value;
}

Evaluation Expr::evaluate_tracked(std::span<const double> point) const {
  return eval_node(*node_, point);
}

// ---- printing ------------------------------------------------------------

namespace {

std::string coord_name(const std::vector<std::string>& names, int i) {
  if (i < static_cast<int>(names.size())) return names[i];
  return "x" + std::to_string(i);
}

std::string poly_str(const Polynomial& p, const std::vector<std::string>& names) {
  if (p.is_zero()) return "0";
  std::string out;
  const auto& terms = p.terms();
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    const auto& [m, c] = *it;
    Rational mag = abs(c);
    bool negative = c < 0;
    if (out.empty()) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    std::string mono;
    for (int k = 0; k < kMaxCoordinates; ++k) {
      if (m.exps[k] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += coord_name(names, k);
      if (m.exps[k] > 1) mono += "^" + std::to_string(m.exps[k]);
    }
    if (mono.empty()) {
      out += mag.get_str();
    } else if (mag == 1) {
      out += mono;
    } else {
      out += mag.get_str() + "*" + mono;
    }
  }
  return out;
}

bool is_atomic(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Coordinate:
    case NodeKind::Sin:
    case NodeKind::Cos:
    case NodeKind::Exp:
      return true;
    case NodeKind::Constant:
      return e.constant_value() >= 0 && e.constant_value().get_den() == 1;
    case NodeKind::Polynomial: {
      const auto& t = e.polynomial()->terms();
      if (t.empty()) return true;
      if (t.size() != 1) return false;
      if (t[0].second == 1) return t[0].first.degree() == 1;
      return t[0].first.is_one() && t[0].second > 0 && t[0].second.get_den() == 1;
    }
    default:
      return false;
  }
}

std::string wrap(const Expr& e, const std::vector<std::string>& names) {
  std::string s = e.str(names);
  return is_atomic(e) ? s : "(" + s + ")";
}

}  // namespace

std::string Expr::str(const std::vector<std::string>& names) const {
  const auto& ch = children();
  switch (kind()) {
    case NodeKind::Polynomial:
      return poly_str(*polynomial(), names);
    case NodeKind::Constant:
      return constant_value().get_str();
    case NodeKind::Coordinate:
      return coord_name(names, coordinate_index());
    case NodeKind::Sum: {
      std::string out;
      for (std::size_t i = 0; i < ch.size(); ++i) {
        if (i > 0) out += " + ";
        out += ch[i].str(names);
      }
      return out;
    }
    case NodeKind::Product: {
      std::string out;
      for (std::size_t i = 0; i < ch.size(); ++i) {
        if (i > 0) out += "*";
        out += wrap(ch[i], names);
      }
      return out;
    }
    case NodeKind::Power:
      return wrap(ch[0], names) + "^" + std::to_string(exponent());
    case NodeKind::Negation:
      return "-" + wrap(ch[0], names);
    case NodeKind::Quotient:
      return wrap(ch[0], names) + "/" + wrap(ch[1], names);
    case NodeKind::Sin:
      return "sin(" + ch[0].str(names) + ")";
    case NodeKind::Cos:
      return "cos(" + ch[0].str(names) + ")";
    case NodeKind::Exp:
      return "exp(" + ch[0].str(names) + ")";
  }
  return "?";
}

// ---- zero test -----------------------------------------------------------

SampleDomain SampleDomain::box(int dim, double lower, double upper) {
  SampleDomain d;
  d.intervals.assign(dim, Interval{lower, upper});
  return d;
}

void SampleDomain::validate() const {
  if (samples < 1) throw std::invalid_argument("sample count must be at least 1");
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  for (const auto& iv : intervals)
    if (!(iv.lower <= iv.upper)) throw std::invalid_argument("interval lower bound exceeds upper");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

std::vector<double> sample_point(const SampleDomain& d, std::uint64_t index) {
  std::vector<double> p(d.intervals.size());
  std::uint64_t key = splitmix64(d.seed) ^ splitmix64(index * 0xD1B54A32D192ED03ull + 1);
  for (std::size_t c = 0; c < p.size(); ++c) {
    std::uint64_t bits = splitmix64(key + c * 0x632BE59BD9B4E019ull);
    double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
    const auto& iv = d.intervals[c];
    p[c] = iv.lower + u * (iv.upper - iv.lower);
  }
  return p;
}

ZeroVerdict is_identically_zero(const Expr& e, const SampleDomain& d) {
  ZeroVerdict v;
  if (e.is_zero()) return v;
  if (e.max_coordinate() >= d.dimension())
    throw std::invalid_argument("expression references a coordinate outside the sample domain");
  int accepted = 0;
  const std::uint64_t budget = 11ull * static_cast<std::uint64_t>(d.samples);
  for (std::uint64_t k = 0; k < budget && accepted < d.samples; ++k) {
    std::vector<double> p = sample_point(d, k);
    Evaluation ev = e.evaluate_tracked(p);
    if (!ev.finite) continue;
    ++accepted;
    if (std::abs(ev.value) > d.tol * (1.0 + ev.max_magnitude)) {
      v.kind = ZeroKind::NonZero;
      v.witness = std::move(p);
      v.value = ev.value;
      return v;
    }
  }
  if (accepted == 0)
    throw SamplingExhausted("every resample hit a singularity of the expression");
  v.kind = ZeroKind::NumericallyZero;
  return v;
}

std::string to_string(ZeroKind k) {
  switch (k) {
    case ZeroKind::ExactZero:
      return "ExactZero";
    case ZeroKind::NumericallyZero:
      return "NumericallyZero";
    case ZeroKind::NonZero:
      return "NonZero";
  }
  return "?";
}

}  // namespace forge
