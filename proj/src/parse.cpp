#include <cctype>

#include "forge/expr.hpp"

namespace forge {

ParseError::ParseError(Kind kind, std::size_t position, const std::string& what)
    : std::runtime_error(what + " at position " + std::to_string(position)),
      kind_(kind),
      position_(position) {}

namespace {

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& chart)
      : s_(text), chart_(chart) {}

  Expr run() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, ParseError::Kind k = ParseError::Kind::Syntax) {
    throw ParseError(k, pos_, msg);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expr() {
    std::vector<Expr> terms{term()};
    for (;;) {
      if (accept('+')) {
        terms.push_back(term());
      } else if (accept('-')) {
        terms.push_back(Expr::raw_negation(term()));
      } else {
        break;
      }
    }
    return terms.size() == 1 ? terms[0] : Expr::raw_sum(std::move(terms));
  }

  Expr term() {
    std::vector<Expr> factors{factor()};
    for (;;) {
      if (accept('*')) {
        factors.push_back(factor());
      } else if (accept('/')) {
        Expr den = factor();
        Expr num = factors.size() == 1 ? factors[0] : Expr::raw_product(std::move(factors));
        factors = {Expr::raw_quotient(std::move(num), std::move(den))};
      } else {
        break;
      }
    }
    return factors.size() == 1 ? factors[0] : Expr::raw_product(std::move(factors));
  }

  Expr factor() {
    Expr b = base();
    if (accept('^')) return Expr::raw_power(std::move(b), integer_exponent());
    return b;
  }

  int integer_exponent() {
    skip();
    std::size_t start = pos_;
    if (accept('(')) {
      Expr inner = expr();
      expect(')');
      auto c = inner.as_constant();
      if (!inner.is_polynomial() || !c || c->get_den() != 1)
        throw ParseError(ParseError::Kind::NonIntegerExponent, start, "non-integer exponent");
      return static_cast<int>(c->get_num().get_si());
    }
    bool negative = accept('-');
    skip();
    std::size_t digits = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (digits == pos_) fail("expected integer exponent");
    if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E'))
      throw ParseError(ParseError::Kind::NonIntegerExponent, start, "non-integer exponent");
    int k = std::stoi(s_.substr(digits, pos_ - digits));
    return negative ? -k : k;
  }

  Expr base() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (c == '-') {
      ++pos_;
      return Expr::raw_negation(factor());
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  Expr number() {
    std::size_t start = pos_;
    std::string whole, frac;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) whole += s_[pos_++];
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) frac += s_[pos_++];
    }
    if (whole.empty() && frac.empty()) {
      pos_ = start;
      fail("malformed number");
    }
    mpz_class num(whole.empty() ? "0" : whole);
    mpz_class den = 1;
    for (char d : frac) {
      num = num * 10 + (d - '0');
      den *= 10;
    }
    long exp10 = 0;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
      bool neg = false;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) neg = s_[pos_++] == '-';
      std::size_t d0 = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (d0 == pos_) fail("malformed exponent in number");
      exp10 = std::stol(s_.substr(d0, pos_ - d0));
      if (neg) exp10 = -exp10;
    }
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    if (exp10 >= 0) {
      num *= scale;
    } else {
      den *= scale;
    }
    Rational r(num, den);
    r.canonicalize();
    return Expr::raw_constant(r);
  }

  Expr identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    std::string name = s_.substr(start, pos_ - start);
    if (name == "sin" || name == "cos" || name == "exp") {
      skip();
      if (pos_ < s_.size() && s_[pos_] == '(') {
        ++pos_;
        Expr arg = expr();
        expect(')');
        NodeKind k = name == "sin" ? NodeKind::Sin : name == "cos" ? NodeKind::Cos : NodeKind::Exp;
        return Expr::raw_unary(k, std::move(arg));
      }
    }
    for (std::size_t i = 0; i < chart_.size(); ++i)
      if (chart_[i] == name) return Expr::coordinate(static_cast<int>(i));
    throw ParseError(ParseError::Kind::UnknownIdentifier, start, "unknown identifier '" + name + "'");
  }

  const std::string& s_;
  const std::vector<std::string>& chart_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(const std::string& text, const std::vector<std::string>& chart) {
  if (static_cast<int>(chart.size()) > kMaxCoordinates)
    throw std::invalid_argument("chart has too many coordinates");
  return Parser(text, chart).run();
}

}  // namespace forge
