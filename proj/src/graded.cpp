#include "forge/graded.hpp"

#include <random>
#include <stdexcept>

namespace forge {

int WeilMonomial::thetadot_degree() const {
  int d = 0;
  for (auto e : thetadot) d += e;
  return d;
}

std::pair<int, int> WeilMonomial::bidegree() const {
  int t = thetadot_degree();
  return {popcount(xdot) + t, popcount(theta) + t};
}

int WeilMonomial::parity() const { return (popcount(xdot) + popcount(theta)) % 2; }

std::string WeilNames::monomial(const WeilMonomial& m) const {
  std::string out;
  auto append = [&out](const std::string& s) {
    if (!out.empty()) out += "*";
    out += s;
  };
  for (int a : mask_indices(m.xdot))
    append("d" + (a < static_cast<int>(coordinates.size()) ? coordinates[a] : "x" + std::to_string(a)));
  for (int i : mask_indices(m.theta)) append("th" + std::to_string(i));
  for (int i = 0; i < kMaxWeilRank; ++i)
    if (m.thetadot[i] > 0) {
      std::string s = "dth" + std::to_string(i);
      if (m.thetadot[i] > 1) s += "^" + std::to_string(m.thetadot[i]);
      append(s);
    }
  return out.empty() ? "1" : out;
}

// ---- WeilElement ---------------------------------------------------------

namespace {

void check_dims(int n, int r) {
  if (n < 0 || n > kMaxCoordinates) throw std::invalid_argument("chart dimension out of range");
  if (r < 0 || r > kMaxWeilRank) throw std::invalid_argument("rank out of range for the Weil algebra");
}

// Product of canonical monomials; sign 0 when an odd generator repeats.
int monomial_product(const WeilMonomial& a, const WeilMonomial& b, WeilMonomial& out) {
  int sx = merge_sign(a.xdot, b.xdot);
  int st = merge_sign(a.theta, b.theta);
  if (sx == 0 || st == 0) return 0;
  int sign = sx * st;
  if ((popcount(a.theta) * popcount(b.xdot)) % 2) sign = -sign;
  out.xdot = a.xdot | b.xdot;
  out.theta = a.theta | b.theta;
  for (int i = 0; i < kMaxWeilRank; ++i) {
    int e = a.thetadot[i] + b.thetadot[i];
    if (e > 255) throw std::overflow_error("thetadot exponent overflow");
    out.thetadot[i] = static_cast<std::uint8_t>(e);
  }
  return sign;
}

}  // namespace

WeilElement WeilElement::scalar(int n, int r, const Expr& f) {
  check_dims(n, r);
  WeilElement e(n, r);
  e.add(WeilMonomial{}, f);
  return e;
}

WeilElement WeilElement::xdot(int n, int r, int alpha) {
  WeilMonomial m;
  m.xdot = Mask{1} << alpha;
  return monomial(n, r, m, Expr(1));
}

WeilElement WeilElement::theta(int n, int r, int i) {
  WeilMonomial m;
  m.theta = Mask{1} << i;
  return monomial(n, r, m, Expr(1));
}

WeilElement WeilElement::thetadot(int n, int r, int i) {
  WeilMonomial m;
  m.thetadot[i] = 1;
  return monomial(n, r, m, Expr(1));
}

WeilElement WeilElement::monomial(int n, int r, const WeilMonomial& m, const Expr& c) {
  check_dims(n, r);
  WeilElement e(n, r);
  e.add(m, c);
  return e;
}

void WeilElement::add(const WeilMonomial& m, const Expr& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Expr WeilElement::coefficient(const WeilMonomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Expr() : it->second;
}

void WeilElement::check_shape(const WeilElement& o) const {
  if (o.n_ != n_ || o.r_ != r_) throw std::invalid_argument("Weil elements from different models");
}

WeilElement WeilElement::operator+(const WeilElement& o) const {
  if (terms_.empty() && n_ == 0) return o;
  if (o.terms_.empty() && o.n_ == 0) return *this;
  check_shape(o);
  WeilElement r = *this;
  for (const auto& [m, c] : o.terms_) r.add(m, c);
  return r;
}

WeilElement WeilElement::operator-() const {
  WeilElement r(n_, r_);
  for (const auto& [m, c] : terms_) r.add(m, -c);
  return r;
}

WeilElement WeilElement::operator-(const WeilElement& o) const { return *this + (-o); }

WeilElement WeilElement::operator*(const WeilElement& o) const {
  if (n_ == 0 && terms_.empty()) return WeilElement(o.n_, o.r_);
  if (o.n_ == 0 && o.terms_.empty()) return WeilElement(n_, r_);
  check_shape(o);
  WeilElement r(n_, r_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) {
      WeilMonomial m;
      int s = monomial_product(ma, mb, m);
      if (s == 0) continue;
      Expr c = ca * cb;
      r.add(m, s > 0 ? c : -c);
    }
  return r;
}

WeilElement WeilElement::scaled(const Expr& f) const {
  WeilElement r(n_, r_);
  if (f.is_zero()) return r;
  for (const auto& [m, c] : terms_) r.add(m, f * c);
  return r;
}

WeilElement operator*(const Expr& f, const WeilElement& e) { return e.scaled(f); }

WeilElement WeilElement::component(int p, int q) const {
  WeilElement r(n_, r_);
  for (const auto& [m, c] : terms_)
    if (m.bidegree() == std::make_pair(p, q)) r.add(m, c);
  return r;
}

bool WeilElement::has_thetadot() const {
  for (const auto& [m, c] : terms_)
    if (m.thetadot_degree() > 0) return true;
  return false;
}

std::string WeilElement::str(const WeilNames& names) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += "(" + c.str(names.coordinates) + ")";
    if (m != WeilMonomial{}) out += "*" + names.monomial(m);
  }
  return out;
}

void add_residuals(ResidualSet& set, const std::string& prefix, const WeilElement& e, const WeilNames& names) {
  for (const auto& [m, c] : e.terms()) set.add(prefix + " @ " + names.monomial(m), c);
}

WeilElement encode_form(const DifferentialForm& tau, int r) {
  WeilElement e(tau.dim(), r);
  for (const auto& [mask, c] : tau.coefficients()) {
    WeilMonomial m;
    m.xdot = mask;
    e.add(m, c);
  }
  return e;
}

WeilElement encode_aform(const AForm& nu, int n) {
  WeilElement e(n, nu.dim());
  for (const auto& [mask, c] : nu.coefficients()) {
    WeilMonomial m;
    m.theta = mask;
    e.add(m, c);
  }
  return e;
}

WeilElement encode_valued(const std::vector<DifferentialForm>& components, int r) {
  if (components.empty()) throw std::invalid_argument("empty valued form");
  const int n = components[0].dim();
  WeilElement e(n, r);
  for (int i = 0; i < static_cast<int>(components.size()); ++i)
    e += encode_form(components[i], r) * WeilElement::theta(n, r, i);
  return e;
}

// ---- WeilDerivation ------------------------------------------------------

WeilDerivation::WeilDerivation(int n, int r, int parity, std::optional<std::pair<int, int>> bidegree)
    : n_(n), r_(r), parity_(parity % 2), bidegree_(bidegree) {
  check_dims(n, r);
  x_.assign(n, WeilElement(n, r));
  xdot_.assign(n, WeilElement(n, r));
  theta_.assign(r, WeilElement(n, r));
  thetadot_.assign(r, WeilElement(n, r));
}

WeilElement WeilDerivation::apply_function(const Expr& f) const {
  WeilElement out(n_, r_);
  for (int a = 0; a < n_; ++a) {
    if (x_[a].is_structurally_zero()) continue;
    Expr df = f.diff(a);
    if (df.is_zero()) continue;
    out += x_[a].scaled(df);
  }
  return out;
}

WeilElement WeilDerivation::apply(const WeilElement& e) const {
  if (e.dim() != n_ || e.rank() != r_) {
    if (e.is_structurally_zero()) return WeilElement(n_, r_);
    throw std::invalid_argument("derivation applied to an element of another model");
  }
  WeilElement out(n_, r_);
  for (const auto& [m, c] : e.terms()) {
    WeilElement whole = WeilElement::monomial(n_, r_, m, Expr(1));
    WeilElement dc = apply_function(c);
    if (!dc.is_structurally_zero()) out += dc * whole;

    std::vector<std::pair<bool, int>> odd;  // (is_xdot, index) in canonical order
    for (int a : mask_indices(m.xdot)) odd.push_back({true, a});
    for (int i : mask_indices(m.theta)) odd.push_back({false, i});
    for (std::size_t j = 0; j < odd.size(); ++j) {
      const auto [is_xdot, idx] = odd[j];
      const WeilElement& image = is_xdot ? xdot_[idx] : theta_[idx];
      if (image.is_structurally_zero()) continue;
      WeilMonomial prefix, suffix;
      for (std::size_t k = 0; k < odd.size(); ++k) {
        WeilMonomial& target = k < j ? prefix : suffix;
        if (k == j) continue;
        if (odd[k].first) {
          target.xdot |= Mask{1} << odd[k].second;
        } else {
          target.theta |= Mask{1} << odd[k].second;
        }
      }
      suffix.thetadot = m.thetadot;
      Expr coeff = (parity_ && (j % 2)) ? -c : c;
      out += WeilElement::monomial(n_, r_, prefix, coeff) * image * WeilElement::monomial(n_, r_, suffix, Expr(1));
    }
    for (int i = 0; i < r_; ++i) {
      if (m.thetadot[i] == 0 || thetadot_[i].is_structurally_zero()) continue;
      WeilMonomial head, rest;
      head.xdot = m.xdot;
      head.theta = m.theta;
      rest.thetadot = m.thetadot;
      rest.thetadot[i] -= 1;
      Expr coeff = c * Expr(static_cast<long>(m.thetadot[i]));
      if (parity_ && (odd.size() % 2)) coeff = -coeff;
      out += WeilElement::monomial(n_, r_, head, coeff) * thetadot_[i] * WeilElement::monomial(n_, r_, rest, Expr(1));
    }
  }
  return out;
}

WeilDerivation WeilDerivation::operator+(const WeilDerivation& o) const {
  if (o.parity_ != parity_) throw std::invalid_argument("adding derivations of different parity");
  WeilDerivation r(n_, r_, parity_, bidegree_ == o.bidegree_ ? bidegree_ : std::nullopt);
  for (int a = 0; a < n_; ++a) {
    r.x_[a] = x_[a] + o.x_[a];
    r.xdot_[a] = xdot_[a] + o.xdot_[a];
  }
  for (int i = 0; i < r_; ++i) {
    r.theta_[i] = theta_[i] + o.theta_[i];
    r.thetadot_[i] = thetadot_[i] + o.thetadot_[i];
  }
  return r;
}

WeilDerivation WeilDerivation::scaled(const Rational& c) const {
  WeilDerivation r = *this;
  Expr f(c);
  for (auto* family : {&r.x_, &r.xdot_, &r.theta_, &r.thetadot_})
    for (auto& img : *family) img = img.scaled(f);
  return r;
}

WeilDerivation WeilDerivation::operator-(const WeilDerivation& o) const { return *this + o.scaled(Rational(-1)); }

std::vector<std::pair<std::string, WeilElement>> WeilDerivation::generator_images(const WeilNames& names) const {
  std::vector<std::pair<std::string, WeilElement>> out;
  for (int a = 0; a < n_; ++a) out.push_back({names.coordinates[a], x_[a]});
  for (int a = 0; a < n_; ++a) out.push_back({"d" + names.coordinates[a], xdot_[a]});
  for (int i = 0; i < r_; ++i) out.push_back({"th" + std::to_string(i), theta_[i]});
  for (int i = 0; i < r_; ++i) out.push_back({"dth" + std::to_string(i), thetadot_[i]});
  return out;
}

WeilDerivation commutator(const WeilDerivation& a, const WeilDerivation& b) {
  if (a.dim() != b.dim() || a.rank() != b.rank()) throw std::invalid_argument("commutator across models");
  const int n = a.dim(), r = a.rank();
  std::optional<std::pair<int, int>> bideg;
  if (a.bidegree() && b.bidegree())
    bideg = std::make_pair(a.bidegree()->first + b.bidegree()->first, a.bidegree()->second + b.bidegree()->second);
  WeilDerivation out(n, r, a.parity() + b.parity(), bideg);
  const bool minus = !(a.parity() && b.parity());
  auto combine = [&](const WeilElement& g) {
    WeilElement ab = a.apply(b.apply(g));
    WeilElement ba = b.apply(a.apply(g));
    return minus ? ab - ba : ab + ba;
  };
  for (int al = 0; al < n; ++al) {
    out.on_x(al) = combine(WeilElement::scalar(n, r, Expr::coordinate(al)));
    out.on_xdot(al) = combine(WeilElement::xdot(n, r, al));
  }
  for (int i = 0; i < r; ++i) {
    out.on_theta(i) = combine(WeilElement::theta(n, r, i));
    out.on_thetadot(i) = combine(WeilElement::thetadot(n, r, i));
  }
  return out;
}

ResidualSet derivation_difference(const WeilDerivation& a, const WeilDerivation& b, const WeilNames& names,
                                  const std::vector<WeilElement>& probes) {
  ResidualSet set;
  WeilDerivation diff = a - b;
  for (const auto& [label, img] : diff.generator_images(names)) add_residuals(set, "on " + label, img, names);
  for (std::size_t k = 0; k < probes.size(); ++k)
    add_residuals(set, "on probe " + std::to_string(k), diff.apply(probes[k]), names);
  return set;
}

std::vector<std::pair<std::string, WeilElement>> weil_generators(const WeilNames& names, bool with_thetadot) {
  const int n = static_cast<int>(names.coordinates.size());
  const int r = names.rank;
  std::vector<std::pair<std::string, WeilElement>> out;
  for (int a = 0; a < n; ++a) out.push_back({names.coordinates[a], WeilElement::scalar(n, r, Expr::coordinate(a))});
  for (int a = 0; a < n; ++a) out.push_back({"d" + names.coordinates[a], WeilElement::xdot(n, r, a)});
  for (int i = 0; i < r; ++i) out.push_back({"th" + std::to_string(i), WeilElement::theta(n, r, i)});
  if (with_thetadot)
    for (int i = 0; i < r; ++i) out.push_back({"dth" + std::to_string(i), WeilElement::thetadot(n, r, i)});
  return out;
}

std::vector<WeilElement> random_weil_elements(int n, int r, int count, std::uint64_t seed, bool with_thetadot) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> small(-3, 3);
  auto random_coefficient = [&]() {
    Expr c(static_cast<long>(small(rng)));
    for (int a = 0; a < n; ++a) c += Expr(static_cast<long>(small(rng))) * Expr::coordinate(a);
    return c;
  };
  auto random_generator = [&](bool allow_thetadot) {
    int families = allow_thetadot && with_thetadot ? 3 : 2;
    int f = std::uniform_int_distribution<int>(0, families - 1)(rng);
    WeilMonomial m;
    if (f == 0) m.xdot = Mask{1} << std::uniform_int_distribution<int>(0, n - 1)(rng);
    if (f == 1) m.theta = Mask{1} << std::uniform_int_distribution<int>(0, r - 1)(rng);
    if (f == 2) m.thetadot[std::uniform_int_distribution<int>(0, r - 1)(rng)] = 1;
    return m;
  };
  std::vector<WeilElement> out;
  for (int k = 0; k < count; ++k) {
    WeilElement e(n, r);
    for (int t = 0; t < 3; ++t) {
      int shape = std::uniform_int_distribution<int>(0, 2)(rng);
      WeilElement term = WeilElement::scalar(n, r, random_coefficient());
      WeilMonomial first = random_generator(true);
      if (shape >= 1) term = term * WeilElement::monomial(n, r, first, Expr(1));
      if (shape == 2 && first.thetadot_degree() == 0)
        term = term * WeilElement::monomial(n, r, random_generator(false), Expr(1));
      e += term;
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace forge
