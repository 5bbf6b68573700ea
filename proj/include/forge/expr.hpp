#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace forge {

using Rational = mpq_class;

inline constexpr int kMaxCoordinates = 12;

// Exponent vector of a monomial in the chart coordinates.
struct Monomial {
  std::array<std::uint8_t, kMaxCoordinates> exps{};

  int degree() const;
  bool is_one() const;
  auto operator<=>(const Monomial&) const = default;
};

// Sparse multivariate polynomial with exact rational coefficients, kept in
// canonical form: terms sorted by monomial, no zero coefficients.
class Polynomial {
 public:
  using Term = std::pair<Monomial, Rational>;

  Polynomial() = default;
  static Polynomial constant(const Rational& c);
  static Polynomial coordinate(int index);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  int max_coordinate() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial scaled(const Rational& c) const;
  Polynomial pow(unsigned k) const;
  Polynomial derivative(int index) const;

  bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }

 private:
  static Polynomial from_unsorted(std::vector<Term> terms);
  std::vector<Term> terms_;
};

enum class NodeKind {
  Constant,
  Coordinate,
  Sum,
  Product,
  Power,
  Negation,
  Quotient,
  Sin,
  Cos,
  Exp,
  Polynomial,
};

struct Node;

struct Evaluation {
  double value = 0.0;
  double max_magnitude = 0.0;
  bool finite = true;
};

// Immutable expression handle. Arithmetic operators simplify (polynomial
// subtrees collapse to canonical polynomials); the raw_* factories build
// trees verbatim and are what the parser uses.
class Expr {
 public:
  Expr();
  Expr(long v);  // NOLINT(google-explicit-constructor)
  explicit Expr(const Rational& v);
  explicit Expr(const Polynomial& p);

  static Expr coordinate(int index);
  static Expr raw_constant(const Rational& v);
  static Expr raw_sum(std::vector<Expr> terms);
  static Expr raw_product(std::vector<Expr> factors);
  static Expr raw_power(Expr base, int exponent);
  static Expr raw_negation(Expr e);
  static Expr raw_quotient(Expr num, Expr den);
  static Expr raw_unary(NodeKind fn, Expr arg);

  NodeKind kind() const;
  const std::vector<Expr>& children() const;
  const Rational& constant_value() const;
  int coordinate_index() const;
  int exponent() const;

  // Expanded canonical form, present iff the tree has no Sin/Cos/Exp/Quotient.
  const std::optional<Polynomial>& polynomial() const;
  bool is_polynomial() const { return polynomial().has_value(); }
  bool is_zero() const;  // structurally the zero polynomial
  bool is_constant() const;
  std::optional<Rational> as_constant() const;
  int max_coordinate() const;

  Expr diff(int index) const;
  double evaluate(std::span<const double> point) const;
  Evaluation evaluate_tracked(std::span<const double> point) const;
  std::string str(const std::vector<std::string>& names) const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }

  const Node* node() const { return node_.get(); }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
  friend struct NodeBuilder;
};

Expr pow(const Expr& base, int exponent);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr exp(const Expr& e);

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UnknownIdentifier, NonIntegerExponent };
  ParseError(Kind kind, std::size_t position, const std::string& what);
  Kind kind() const { return kind_; }
  std::size_t position() const { return position_; }

 private:
  Kind kind_;
  std::size_t position_;
};

Expr parse(const std::string& text, const std::vector<std::string>& chart);

// ---- zero testing -------------------------------------------------------

struct Interval {
  double lower = -1.0;
  double upper = 1.0;
};

struct SampleDomain {
  std::vector<Interval> intervals;
  int samples = 32;
  std::uint64_t seed = 0;
  double tol = 1e-9;

  static SampleDomain box(int dim, double lower, double upper);
  int dimension() const { return static_cast<int>(intervals.size()); }
  void validate() const;
};

// Counter-based draw: the k-th candidate point depends only on (seed, k).
std::vector<double> sample_point(const SampleDomain& d, std::uint64_t index);

class SamplingExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ZeroKind { ExactZero, NumericallyZero, NonZero };

struct ZeroVerdict {
  ZeroKind kind = ZeroKind::ExactZero;
  std::vector<double> witness;
  double value = 0.0;

  bool zero() const { return kind != ZeroKind::NonZero; }
};

ZeroVerdict is_identically_zero(const Expr& e, const SampleDomain& d);

std::string to_string(ZeroKind k);

}  // namespace forge
