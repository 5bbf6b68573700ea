#include "forge/algebroid.hpp"

#include <stdexcept>

namespace forge {

Section operator+(const Section& a, const Section& b) {
  Section r(a.size());
  for (int i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Section operator-(const Section& a, const Section& b) {
  Section r(a.size());
  for (int i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Section operator*(const Expr& f, const Section& a) {
  Section r(a.size());
  for (int i = 0; i < a.size(); ++i) r[i] = f * a[i];
  return r;
}

AnchoredBundle::AnchoredBundle(Chart c, std::vector<VectorField> rho)
    : chart(std::move(c)), rank(static_cast<int>(rho.size())), anchor(std::move(rho)) {
  if (rank < 1) throw std::invalid_argument("bundle rank must be positive");
  if (rank > 31) throw std::invalid_argument("bundle rank too large");
  for (const auto& v : anchor)
    if (v.size() != chart.dim()) throw std::invalid_argument("anchor row has wrong length");
}

LieAlgebroid::LieAlgebroid(Chart c, std::vector<VectorField> rho)
    : AnchoredBundle(std::move(c), std::move(rho)),
      c_(static_cast<std::size_t>(rank) * rank * rank) {}

const Expr& LieAlgebroid::structure(int i, int j, int k) const {
  return c_[(static_cast<std::size_t>(i) * rank + j) * rank + k];
}

void LieAlgebroid::set_structure(int i, int j, int k, const Expr& e) {
  if (i == j) {
    if (!e.is_zero()) throw std::invalid_argument("structure functions are antisymmetric");
    return;
  }
  c_[(static_cast<std::size_t>(i) * rank + j) * rank + k] = e;
  c_[(static_cast<std::size_t>(j) * rank + i) * rank + k] = -e;
}

VectorField anchor_apply(const AnchoredBundle& A, const Section& a) {
  VectorField v(A.dim());
  for (int i = 0; i < A.rank; ++i) {
    if (a[i].is_zero()) continue;
    for (int al = 0; al < A.dim(); ++al) v[al] += a[i] * A.rho(al, i);
  }
  return v;
}

Section algebroid_bracket(const LieAlgebroid& L, const Section& a, const Section& b) {
  Section r(L.rank);
  VectorField ra = anchor_apply(L, a);
  VectorField rb = anchor_apply(L, b);
  for (int k = 0; k < L.rank; ++k) {
    Expr acc = ra.apply(b[k]) - rb.apply(a[k]);
    for (int i = 0; i < L.rank; ++i) {
      if (a[i].is_zero()) continue;
      for (int j = 0; j < L.rank; ++j) {
        if (b[j].is_zero() || L.structure(i, j, k).is_zero()) continue;
        acc += a[i] * b[j] * L.structure(i, j, k);
      }
    }
    r[k] = acc;
  }
  return r;
}

namespace {

// 𝐝θ^k = −½ c^k_{ij} θ^iθ^j
AForm d_theta(const LieAlgebroid& L, int k) {
  AForm r(L.rank, 2);
  for (int i = 0; i < L.rank; ++i)
    for (int j = i + 1; j < L.rank; ++j)
      r.add((Mask{1} << i) | (Mask{1} << j), -L.structure(i, j, k));
  return r;
}

AForm d_function(const LieAlgebroid& L, const Expr& f) {
  AForm r(L.rank, 1);
  for (int i = 0; i < L.rank; ++i) r.add(Mask{1} << i, L.anchor[i].apply(f));
  return r;
}

// 𝐝 of the monomial θ^{k_0} ∧ ... ∧ θ^{k_{q-1}} over indices starting at `from`.
AForm d_monomial(const LieAlgebroid& L, const std::vector<int>& ks, std::size_t from) {
  if (from == ks.size()) return AForm(L.rank, 1);
  AForm rest = AForm::scalar(L.rank, Expr(1));
  for (std::size_t m = from + 1; m < ks.size(); ++m) rest = wedge(rest, AForm::coframe(L.rank, ks[m]));
  AForm head = AForm::coframe(L.rank, ks[from]);
  AForm out = wedge(d_theta(L, ks[from]), rest);
  if (from + 1 < ks.size()) out = out - wedge(head, d_monomial(L, ks, from + 1));
  return out;
}

}  // namespace

AForm algebroid_differential(const LieAlgebroid& L, const AForm& nu) {
  if (nu.dim() != L.rank) throw std::invalid_argument("A-form rank mismatch");
  AForm r(L.rank, nu.degree() + 1);
  if (nu.degree() >= L.rank) return r;
  for (const auto& [m, f] : nu.coefficients()) {
    AForm basis = AForm(L.rank, nu.degree());
    basis.add(m, Expr(1));
    r = r + wedge(d_function(L, f), basis);
    if (nu.degree() > 0) r = r + d_monomial(L, mask_indices(m), 0).scaled(f);
  }
  return r;
}

AForm anchor_pullback(const AnchoredBundle& A, const DifferentialForm& tau) {
  AForm r(A.rank, tau.degree());
  for (Mask m = 0; m < (Mask{1} << A.rank); ++m) {
    if (popcount(m) != tau.degree()) continue;
    std::vector<Components> args;
    for (int i : mask_indices(m)) args.push_back(A.anchor[i]);
    r.add(m, evaluate_on(tau, args));
  }
  return r;
}

Expr pairing(const AForm& mu, const Section& a) {
  if (mu.degree() != 1) throw std::invalid_argument("pairing expects a degree-1 A-form");
  Expr acc;
  for (int i = 0; i < a.size(); ++i) acc += mu.get(Mask{1} << i) * a[i];
  return acc;
}

AxiomReport check_axioms(const LieAlgebroid& L, const SampleDomain& d) {
  const int r = L.rank;
  ResidualSet morphism, jacobi, dsq;
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j) {
      VectorField lhs = anchor_apply(L, algebroid_bracket(L, L.frame(i), L.frame(j)));
      VectorField rhs = lie_bracket(L.anchor[i], L.anchor[j]);
      for (int al = 0; al < L.dim(); ++al)
        morphism.add("rho[a" + std::to_string(i) + ",a" + std::to_string(j) + "]^" + L.chart.names[al],
                     lhs[al] - rhs[al]);
    }
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j)
      for (int k = j + 1; k < r; ++k) {
        Section ai = L.frame(i), aj = L.frame(j), ak = L.frame(k);
        Section s = algebroid_bracket(L, ai, algebroid_bracket(L, aj, ak)) +
                    algebroid_bracket(L, aj, algebroid_bracket(L, ak, ai)) +
                    algebroid_bracket(L, ak, algebroid_bracket(L, ai, aj));
        for (int m = 0; m < r; ++m)
          jacobi.add("jacobi(" + std::to_string(i) + "," + std::to_string(j) + "," +
                         std::to_string(k) + ")^" + std::to_string(m),
                     s[m]);
      }
  for (int k = 0; k < r; ++k) {
    AForm dd = algebroid_differential(L, algebroid_differential(L, AForm::coframe(r, k)));
    for (const auto& [m, e] : dd.coefficients()) dsq.add("dd theta" + std::to_string(k), e);
  }
  for (int al = 0; al < L.dim(); ++al) {
    AForm dd = algebroid_differential(L, algebroid_differential(L, AForm::scalar(r, L.chart.coord(al))));
    for (const auto& [m, e] : dd.coefficients()) dsq.add("dd " + L.chart.names[al], e);
  }
  return {morphism.test(d), jacobi.test(d), dsq.test(d)};
}

}  // namespace forge
