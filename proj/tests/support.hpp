#pragma once

#include <random>
#include <string>
#include <vector>

#include "forge/graded.hpp"

namespace testing {

using namespace forge;

inline bool is_zero(const Expr& e, const SampleDomain& d) { return is_identically_zero(e, d).zero(); }

inline bool same(const Expr& a, const Expr& b, const SampleDomain& d) { return is_zero(a - b, d); }

template <class Form>
bool same_form(const Form& a, const Form& b, const SampleDomain& d) {
  Form diff = a - b;
  for (const auto& [m, e] : diff.coefficients())
    if (!is_zero(e, d)) return false;
  return true;
}

inline bool same_weil(const WeilElement& a, const WeilElement& b, const SampleDomain& d) {
  ResidualSet r;
  WeilNames names{std::vector<std::string>(a.dim(), "x"), a.rank()};
  add_residuals(r, "", a - b, names);
  return r.test(d).passed();
}

inline bool same_field(const Components& a, const Components& b, const SampleDomain& d) {
  if (a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i)
    if (!same(a[i], b[i], d)) return false;
  return true;
}

// Small random polynomial in n variables with integer coefficients.
inline Expr random_polynomial(std::mt19937_64& rng, int n, int degree) {
  std::uniform_int_distribution<int> coef(-3, 3), var(0, n - 1), deg(0, degree);
  Expr out;
  for (int t = 0; t < 4; ++t) {
    Expr m(coef(rng));
    int k = deg(rng);
    for (int j = 0; j < k; ++j) m *= Expr::coordinate(var(rng));
    out += m;
  }
  return out;
}

}  // namespace testing
