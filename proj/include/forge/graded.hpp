#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "forge/exterior.hpp"
#include "forge/verdict.hpp"

namespace forge {

inline constexpr int kMaxWeilRank = 8;

// Monomial ẋ^{X} θ^{T} θ̇^{E}: odd generators as bitmasks in ascending
// order, θ̇ (even) as an exponent vector.
struct WeilMonomial {
  Mask xdot = 0;
  Mask theta = 0;
  std::array<std::uint8_t, kMaxWeilRank> thetadot{};

  int thetadot_degree() const;
  std::pair<int, int> bidegree() const;
  // Parity of the total degree.
  int parity() const;
  auto operator<=>(const WeilMonomial&) const = default;
};

struct WeilNames {
  std::vector<std::string> coordinates;
  int rank = 0;

  std::string monomial(const WeilMonomial& m) const;
};

// Element of the bigraded algebra generated by x, ẋ, θ, θ̇ over a chart of
// dimension n and a bundle of rank r. Ω(M,A) is the θ̇-free part.
class WeilElement {
 public:
  WeilElement() = default;
  WeilElement(int n, int r) : n_(n), r_(r) {}

  static WeilElement scalar(int n, int r, const Expr& f);
  static WeilElement xdot(int n, int r, int alpha);
  static WeilElement theta(int n, int r, int i);
  static WeilElement thetadot(int n, int r, int i);
  static WeilElement monomial(int n, int r, const WeilMonomial& m, const Expr& c);

  int dim() const { return n_; }
  int rank() const { return r_; }
  const std::map<WeilMonomial, Expr>& terms() const { return terms_; }
  bool is_structurally_zero() const { return terms_.empty(); }

  void add(const WeilMonomial& m, const Expr& c);
  Expr coefficient(const WeilMonomial& m) const;

  WeilElement operator+(const WeilElement& o) const;
  WeilElement operator-(const WeilElement& o) const;
  WeilElement operator-() const;
  WeilElement operator*(const WeilElement& o) const;
  WeilElement scaled(const Expr& f) const;
  WeilElement& operator+=(const WeilElement& o) { return *this = *this + o; }

  // Homogeneous component of the given bidegree.
  WeilElement component(int p, int q) const;
  bool has_thetadot() const;
  std::string str(const WeilNames& names) const;

 private:
  void check_shape(const WeilElement& o) const;
  int n_ = 0;
  int r_ = 0;
  std::map<WeilMonomial, Expr> terms_;
};

WeilElement operator*(const Expr& f, const WeilElement& e);

// Adds every coefficient of e as a residual labelled by its monomial.
void add_residuals(ResidualSet& set, const std::string& prefix, const WeilElement& e, const WeilNames& names);

// Encodings of forms into Ω(M,A): dx^α ↦ ẋ^α, θ^i ↦ θ^i, σ_i ⊗ θ^i ↦ σ_i θ^i.
WeilElement encode_form(const DifferentialForm& tau, int r);
WeilElement encode_aform(const AForm& nu, int n);
WeilElement encode_valued(const std::vector<DifferentialForm>& components, int r);

// Derivation of the bigraded algebra, fixed by its images of the generators
// and extended by the graded Leibniz rule with Koszul signs of total degree.
class WeilDerivation {
 public:
  WeilDerivation() = default;
  WeilDerivation(int n, int r, int parity, std::optional<std::pair<int, int>> bidegree = std::nullopt);

  int dim() const { return n_; }
  int rank() const { return r_; }
  int parity() const { return parity_; }
  const std::optional<std::pair<int, int>>& bidegree() const { return bidegree_; }

  WeilElement& on_x(int alpha) { return x_[alpha]; }
  WeilElement& on_xdot(int alpha) { return xdot_[alpha]; }
  WeilElement& on_theta(int i) { return theta_[i]; }
  WeilElement& on_thetadot(int i) { return thetadot_[i]; }
  const WeilElement& on_x(int alpha) const { return x_[alpha]; }
  const WeilElement& on_xdot(int alpha) const { return xdot_[alpha]; }
  const WeilElement& on_theta(int i) const { return theta_[i]; }
  const WeilElement& on_thetadot(int i) const { return thetadot_[i]; }

  WeilElement apply(const WeilElement& e) const;
  WeilElement apply_function(const Expr& f) const;

  WeilDerivation operator+(const WeilDerivation& o) const;
  WeilDerivation operator-(const WeilDerivation& o) const;
  WeilDerivation scaled(const Rational& c) const;

  // Images of all generators, labelled, for residual testing.
  std::vector<std::pair<std::string, WeilElement>> generator_images(const WeilNames& names) const;

 private:
  int n_ = 0;
  int r_ = 0;
  int parity_ = 0;
  std::optional<std::pair<int, int>> bidegree_;
  std::vector<WeilElement> x_, xdot_, theta_, thetadot_;
};

// Graded commutator [a, b] = ab − (−1)^{|a||b|} ba, computed on generators.
WeilDerivation commutator(const WeilDerivation& a, const WeilDerivation& b);

// Residuals of a − b on every generator and on each of the probe elements.
ResidualSet derivation_difference(const WeilDerivation& a, const WeilDerivation& b, const WeilNames& names,
                                  const std::vector<WeilElement>& probes = {});

// Every generator x^α, ẋ^α, θ^i, θ̇^i, as elements (x^α as a coefficient).
std::vector<std::pair<std::string, WeilElement>> weil_generators(const WeilNames& names, bool with_thetadot);

// Seeded random elements of total degree ≤ 2 with small polynomial coefficients.
std::vector<WeilElement> random_weil_elements(int n, int r, int count, std::uint64_t seed, bool with_thetadot);

}  // namespace forge
