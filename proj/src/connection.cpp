#include "forge/connection.hpp"

#include <stdexcept>

namespace forge {

Connection::Connection(int rank, int dim) : rank_(rank), dim_(dim), omega_(static_cast<std::size_t>(rank * rank * dim)) {
  if (rank < 1 || dim < 1) throw std::invalid_argument("connection needs positive rank and dimension");
}

const Expr& Connection::coefficient(int j, int alpha, int i) const {
  return omega_[static_cast<std::size_t>((j * dim_ + alpha) * rank_ + i)];
}

void Connection::set(int j, int alpha, int i, const Expr& e) {
  if (j < 0 || j >= rank_ || i < 0 || i >= rank_ || alpha < 0 || alpha >= dim_)
    throw std::out_of_range("connection index out of range");
  omega_[static_cast<std::size_t>((j * dim_ + alpha) * rank_ + i)] = e;
}

DifferentialForm Connection::one_form(int j, int i) const {
  DifferentialForm f(dim_, 1);
  for (int a = 0; a < dim_; ++a) f.add(Mask{1} << a, coefficient(j, a, i));
  return f;
}

bool Connection::is_trivial() const {
  for (const auto& e : omega_)
    if (!e.is_zero()) return false;
  return true;
}

std::vector<Expr> AStarValuedForm::coefficient_list() const {
  std::vector<Expr> out;
  for (const auto& c : components) {
    auto l = c.coefficient_list();
    out.insert(out.end(), l.begin(), l.end());
  }
  return out;
}

AStarValuedForm as_valued(const AForm& mu, int dim) {
  if (mu.degree() != 1) throw std::invalid_argument("momentum section must be an A*-form of degree 1");
  AStarValuedForm s;
  for (int i = 0; i < mu.dim(); ++i) s.components.push_back(DifferentialForm::scalar(dim, mu.get(Mask{1} << i)));
  return s;
}

AStarValuedForm as_valued(const DualizedAnchor& gamma) {
  AStarValuedForm s;
  s.degree = 1;
  s.components = gamma.gamma;
  return s;
}

AStarValuedForm covariant_derivative(const Connection& D, const AStarValuedForm& sigma) {
  if (sigma.rank() != D.rank()) throw std::invalid_argument("rank mismatch in covariant derivative");
  const int r = D.rank();
  AStarValuedForm out;
  out.degree = sigma.degree + 1;
  for (int j = 0; j < r; ++j) {
    DifferentialForm acc = exterior_derivative(sigma.components[j]);
    for (int i = 0; i < r; ++i) {
      DifferentialForm term = wedge(sigma.components[i], D.one_form(i, j));
      acc = sigma.degree % 2 ? acc + term : acc - term;
    }
    out.components.push_back(std::move(acc));
  }
  return out;
}

Section covariant_along(const Connection& D, const VectorField& v, const Section& a) {
  const int r = D.rank();
  Section out(r);
  for (int j = 0; j < r; ++j) {
    Expr acc = v.apply(a[j]);
    for (int i = 0; i < r; ++i) {
      if (a[i].is_zero()) continue;
      for (int al = 0; al < D.dim(); ++al) {
        const Expr& w = D.coefficient(j, al, i);
        if (w.is_zero() || v[al].is_zero()) continue;
        acc += a[i] * w * v[al];
      }
    }
    out[j] = acc;
  }
  return out;
}

std::vector<DifferentialForm> covariant_of_section(const Connection& D, const Section& a) {
  std::vector<DifferentialForm> out;
  for (int j = 0; j < D.rank(); ++j) {
    DifferentialForm acc = exterior_derivative(DifferentialForm::scalar(D.dim(), a[j]));
    for (int i = 0; i < D.rank(); ++i)
      if (!a[i].is_zero()) acc = acc + D.one_form(j, i).scaled(a[i]);
    out.push_back(std::move(acc));
  }
  return out;
}

Curvature curvature(const Connection& D) {
  const int r = D.rank();
  Curvature R(r, D.dim());
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < r; ++i) {
      DifferentialForm acc = exterior_derivative(D.one_form(j, i));
      for (int k = 0; k < r; ++k) acc = acc + wedge(D.one_form(j, k), D.one_form(k, i));
      R.form(j, i) = std::move(acc);
    }
  return R;
}

Section torsion(const LieAlgebroid& L, const Connection& D, const Section& a, const Section& b) {
  return covariant_along(D, anchor_apply(L, a), b) - covariant_along(D, anchor_apply(L, b), a) -
         algebroid_bracket(L, a, b);
}

VectorField opposite_connection_apply(const LieAlgebroid& L, const Connection& D, const Section& a,
                                      const VectorField& v) {
  return lie_bracket(anchor_apply(L, a), v) + anchor_apply(L, covariant_along(D, v, a));
}

// ---- derivations of Ω(M,A) -------------------------------------------------

WeilNames weil_names(const AnchoredBundle& A) { return WeilNames{A.chart.names, A.rank}; }

WeilDerivation iota_rho(const AnchoredBundle& A) {
  const int n = A.dim(), r = A.rank;
  WeilDerivation out(n, r, 0, std::make_pair(-1, 1));
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < r; ++i)
      if (!A.rho(a, i).is_zero()) out.on_xdot(a) += A.rho(a, i) * WeilElement::theta(n, r, i);
  return out;
}

WeilDerivation covariant_D(const AnchoredBundle& A, const Connection& D) {
  const int n = A.dim(), r = A.rank;
  WeilDerivation out(n, r, 1, std::make_pair(1, 0));
  for (int a = 0; a < n; ++a) out.on_x(a) = WeilElement::xdot(n, r, a);
  for (int i = 0; i < r; ++i)
    for (int a = 0; a < n; ++a)
      for (int j = 0; j < r; ++j) {
        const Expr& w = D.coefficient(i, a, j);
        if (w.is_zero()) continue;
        out.on_theta(i) += (-w) * (WeilElement::xdot(n, r, a) * WeilElement::theta(n, r, j));
      }
  return out;
}

WeilDerivation opposite_D(const LieAlgebroid& L, const Connection& D) {
  const int n = L.dim(), r = L.rank;
  WeilDerivation out(n, r, 1, std::make_pair(0, 1));
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < r; ++i)
      if (!L.rho(a, i).is_zero()) out.on_x(a) += L.rho(a, i) * WeilElement::theta(n, r, i);
  for (int k = 0; k < r; ++k)
    out.on_theta(k) = encode_aform(algebroid_differential(L, AForm::coframe(r, k)), n);
  for (int i = 0; i < r; ++i)
    for (int b = 0; b < n; ++b) {
      VectorField v = opposite_connection_apply(L, D, L.frame(i), VectorField(Components::basis(n, b)));
      for (int a = 0; a < n; ++a)
        if (!v[a].is_zero())
          out.on_xdot(a) += v[a] * (WeilElement::xdot(n, r, b) * WeilElement::theta(n, r, i));
    }
  return out;
}

WeilDerivation iota_torsion(const LieAlgebroid& L, const Connection& D) {
  const int n = L.dim(), r = L.rank;
  WeilDerivation out(n, r, 1, std::make_pair(0, 1));
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j) {
      Section t = torsion(L, D, L.frame(i), L.frame(j));
      WeilElement tt = WeilElement::theta(n, r, i) * WeilElement::theta(n, r, j);
      for (int k = 0; k < r; ++k)
        if (!t[k].is_zero()) out.on_theta(k) += t[k] * tt;
    }
  return out;
}

H1Report check_H1(const LieAlgebroid& L, const PresymplecticStructure& w, const Connection& D,
                  const SampleDomain& d) {
  H1Report out;
  out.d_gamma = covariant_derivative(D, as_valued(dualized_anchor(L, w)));
  ResidualSet first;
  for (int j = 0; j < out.d_gamma.rank(); ++j)
    for (const auto& [m, e] : out.d_gamma.components[j].coefficients()) {
      auto ix = mask_indices(m);
      first.add("(D gamma)_" + std::to_string(j) + " on " + L.chart.names[ix[0]] + "," + L.chart.names[ix[1]], e);
    }
  out.verdict = first.test(d);

  // (Ď_a ω)(u,v) = ρa·ω(u,v) − ω(Ď_a u, v) − ω(u, Ď_a v)
  const int n = L.dim();
  std::vector<VectorField> basis;
  for (int b = 0; b < n; ++b) basis.emplace_back(Components::basis(n, b));
  ResidualSet second;
  for (int i = 0; i < L.rank; ++i) {
    VectorField ra = anchor_apply(L, L.frame(i));
    std::vector<VectorField> moved;
    for (int b = 0; b < n; ++b) moved.push_back(opposite_connection_apply(L, D, L.frame(i), basis[b]));
    for (int b = 0; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        Expr res = ra.apply(w.entry(b, c)) - evaluate_on(w.omega, {moved[b], basis[c]}) -
                   evaluate_on(w.omega, {basis[b], moved[c]});
        second.add("(Dcheck_a" + std::to_string(i) + " omega) on " + L.chart.names[b] + "," + L.chart.names[c], res);
      }
  }
  out.dcheck_omega = second.test(d);
  return out;
}

Verdict check_commirhoD(const LieAlgebroid& L, const Connection& D, const SampleDomain& d) {
  WeilDerivation rhs = commutator(iota_rho(L), covariant_D(L, D)) + iota_torsion(L, D);
  return derivation_difference(opposite_D(L, D), rhs, weil_names(L)).test(d);
}

}  // namespace forge
