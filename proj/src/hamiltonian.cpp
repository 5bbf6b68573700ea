#include "forge/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace forge {

Verdict check_H2(const AnchoredBundle& A, const PresymplecticStructure& w, const Connection& D, const AForm& mu,
                 const SampleDomain& d) {
  AStarValuedForm dmu = covariant_derivative(D, as_valued(mu, A.dim()));
  DualizedAnchor g = dualized_anchor(A, w);
  ResidualSet set;
  for (int i = 0; i < A.rank; ++i)
    for (int b = 0; b < A.dim(); ++b)
      set.add("(D mu - gamma)_" + std::to_string(i) + " on d" + A.chart.names[b],
              dmu.components[i].get(Mask{1} << b) - g.entry(i, b));
  return set.test(d);
}

AForm h3_residual(const LieAlgebroid& L, const PresymplecticStructure& w, const AForm& mu) {
  return algebroid_differential(L, mu) + anchor_pullback(L, w.omega);
}

Verdict check_H3(const LieAlgebroid& L, const PresymplecticStructure& w, const AForm& mu, const SampleDomain& d) {
  AForm res = h3_residual(L, w, mu);
  ResidualSet set;
  for (int i = 0; i < L.rank; ++i)
    for (int j = i + 1; j < L.rank; ++j)
      set.add("(d mu + rho* omega)(a" + std::to_string(i) + ",a" + std::to_string(j) + ")",
              res.get((Mask{1} << i) | (Mask{1} << j)));
  return set.test(d);
}

TorsionCriterion torsion_criterion(const LieAlgebroid& L, const PresymplecticStructure& w, const Connection& D,
                                   const AForm& mu, const SampleDomain& d) {
  TorsionCriterion out;
  out.precondition = check_H2(L, w, D, mu, d).passed();
  if (!out.precondition) {
    out.verdict = Verdict::skipped("precondition: mu is not a D-momentum section");
    return out;
  }
  ResidualSet set;
  for (int i = 0; i < L.rank; ++i)
    for (int j = i + 1; j < L.rank; ++j) {
      Section t = torsion(L, D, L.frame(i), L.frame(j));
      Expr rhs = evaluate_on(w.omega, {anchor_apply(L, L.frame(i)), anchor_apply(L, L.frame(j))});
      set.add("<mu,T(a" + std::to_string(i) + ",a" + std::to_string(j) + ")> - omega(rho a, rho b)",
              pairing(mu, t) - rhs);
    }
  out.verdict = set.test(d);
  return out;
}

Verdict invariance_check(const LieAlgebroid& L, const Connection& D, const AForm& mu, const SampleDomain& d) {
  ResidualSet set;
  for (int i = 0; i < L.rank; ++i) {
    VectorField ri = anchor_apply(L, L.frame(i));
    for (int j = 0; j < L.rank; ++j) {
      VectorField rj = anchor_apply(L, L.frame(j));
      Section s = algebroid_bracket(L, L.frame(i), L.frame(j)) + covariant_along(D, rj, L.frame(i));
      set.add("invariance a" + std::to_string(i) + ",a" + std::to_string(j),
              ri.apply(mu.get(Mask{1} << j)) - pairing(mu, s));
    }
  }
  return set.test(d);
}

namespace {

Eigen::MatrixXd jacobian_at(const AForm& mu, int n, const std::vector<double>& p) {
  Eigen::MatrixXd J(mu.dim(), n);
  for (int i = 0; i < mu.dim(); ++i) {
    Expr m = mu.get(Mask{1} << i);
    for (int a = 0; a < n; ++a) {
      double v = m.diff(a).evaluate(p);
      if (!std::isfinite(v)) throw std::domain_error("non-finite Jacobian entry of the momentum section");
      J(i, a) = v;
    }
  }
  return J;
}

}  // namespace

ZeroLocusReport zero_locus_report(const LieAlgebroid& L, const PresymplecticStructure& w, const Connection& D,
                                  const AForm& mu, const std::vector<double>& p, const SampleDomain& d) {
  ZeroLocusReport out;
  const int n = L.dim();
  out.invariance = invariance_check(L, D, mu, d);
  double largest = 0.0;
  for (int i = 0; i < L.rank; ++i) largest = std::max(largest, std::abs(mu.get(Mask{1} << i).evaluate(p)));
  out.on_locus = largest <= d.tol;
  if (!out.on_locus) return out;

  Eigen::MatrixXd J = jacobian_at(mu, n, p);
  out.tangent = null_space(J, d.tol);
  constexpr double step = 1e-3;
  std::vector<std::vector<double>> stencil{p};
  for (int k = 0; k < 2; ++k)
    for (double s : {step, -step}) {
      auto q = p;
      q[k % n] += s;
      stencil.push_back(q);
    }
  for (const auto& q : stencil) out.stencil_ranks.push_back(numerical_rank(jacobian_at(mu, n, q), d.tol));
  out.clean = std::all_of(out.stencil_ranks.begin(), out.stencil_ranks.end(),
                          [&](int r) { return r == out.stencil_ranks.front(); });

  PointwiseSymplectic ps(w, p, d.tol);
  out.orthogonal = ps.orthogonal(evaluate_fields(L.anchor, p));
  out.equals_orthogonal = out.tangent.cols() == out.orthogonal.cols() &&
                          subspace_contains(out.tangent, out.orthogonal, d.tol) &&
                          subspace_contains(out.orthogonal, out.tangent, d.tol);
  out.coisotropic = ps.is_coisotropic(out.tangent);
  return out;
}

// ---- rational linear algebra ------------------------------------------------------

namespace {

// Row-reduces in place; returns pivot columns.
std::vector<int> row_reduce(std::vector<RationalVector>& m, int cols) {
  std::vector<int> pivots;
  std::size_t row = 0;
  for (int c = 0; c < cols && row < m.size(); ++c) {
    std::size_t piv = row;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[row], m[piv]);
    Rational inv = 1 / m[row][c];
    for (auto& v : m[row]) v *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][c] == 0) continue;
      Rational f = m[r][c];
      for (int k = 0; k < cols; ++k) m[r][k] -= f * m[row][k];
    }
    pivots.push_back(c);
    ++row;
  }
  m.resize(row);
  return pivots;
}

// Solves M x = b for square invertible M.
RationalVector rational_solve(const std::vector<RationalVector>& M, const RationalVector& b) {
  const int n = static_cast<int>(M.size());
  std::vector<RationalVector> aug(M);
  for (int i = 0; i < n; ++i) aug[i].push_back(b[i]);
  auto piv = row_reduce(aug, n);
  if (static_cast<int>(piv.size()) != n) throw std::invalid_argument("singular rational system");
  RationalVector x(n);
  for (int i = 0; i < n; ++i) x[i] = aug[i][n];
  return x;
}

std::vector<RationalVector> transpose(const std::vector<RationalVector>& m, int cols) {
  std::vector<RationalVector> t(cols, RationalVector(m.size()));
  for (std::size_t r = 0; r < m.size(); ++r)
    for (int c = 0; c < cols; ++c) t[c][r] = m[r][c];
  return t;
}

std::vector<RationalVector> inverse(const std::vector<RationalVector>& M) {
  const int n = static_cast<int>(M.size());
  std::vector<RationalVector> cols;
  for (int k = 0; k < n; ++k) {
    RationalVector e(n);
    e[k] = 1;
    cols.push_back(rational_solve(M, e));
  }
  return transpose(cols, n);
}

// Independent basis of the span of vs.
std::vector<RationalVector> span_basis(std::vector<RationalVector> vs, int dim) {
  row_reduce(vs, dim);
  return vs;
}

// Extends an independent set by standard vectors to a basis of ℚ^dim.
std::vector<RationalVector> complement(const std::vector<RationalVector>& basis, int dim) {
  std::vector<RationalVector> current = basis, extra;
  for (int k = 0; k < dim; ++k) {
    RationalVector e(dim);
    e[k] = 1;
    auto trial = current;
    trial.push_back(e);
    if (rational_rank(trial, dim) > static_cast<int>(current.size())) {
      current.push_back(e);
      extra.push_back(e);
    }
  }
  return extra;
}

Rational constant_of(const Expr& e, const SampleDomain& d) {
  if (auto c = e.as_constant()) return *c;
  return Rational(e.evaluate(sample_point(d, 0)));
}

}  // namespace

std::vector<RationalVector> rational_null_space(std::vector<RationalVector> rows, int cols) {
  auto piv = row_reduce(rows, cols);
  std::vector<bool> is_pivot(cols, false);
  for (int c : piv) is_pivot[c] = true;
  std::vector<RationalVector> out;
  for (int f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    RationalVector v(cols);
    v[f] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -rows[r][f];
    out.push_back(std::move(v));
  }
  return out;
}

int rational_rank(std::vector<RationalVector> rows, int cols) {
  return static_cast<int>(row_reduce(rows, cols).size());
}

std::vector<RationalVector> subspace_intersection(const std::vector<RationalVector>& a,
                                                  const std::vector<RationalVector>& b, int dim) {
  if (a.empty() || b.empty()) return {};
  const int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
  std::vector<RationalVector> rows(dim, RationalVector(na + nb));
  for (int k = 0; k < dim; ++k) {
    for (int s = 0; s < na; ++s) rows[k][s] = a[s][k];
    for (int t = 0; t < nb; ++t) rows[k][na + t] = -b[t][k];
  }
  std::vector<RationalVector> out;
  for (const auto& coeffs : rational_null_space(rows, na + nb)) {
    RationalVector v(dim);
    for (int s = 0; s < na; ++s)
      for (int k = 0; k < dim; ++k) v[k] += coeffs[s] * a[s][k];
    out.push_back(std::move(v));
  }
  return span_basis(out, dim);
}

// ---- synthesis ----------------------------------------------------------------------

LieAlgebroid tangent_algebroid(const Chart& chart) {
  std::vector<VectorField> rho;
  for (int a = 0; a < chart.dim(); ++a) rho.emplace_back(Components::basis(chart.dim(), a));
  return LieAlgebroid(chart, rho);
}

SynthesisResult synthesize_tangent_connection(const Chart& chart, const PresymplecticStructure& w, const AForm& mu,
                                              const VectorField& v_ref) {
  const int n = chart.dim();
  const SampleDomain& d = chart.domain;
  if (mu.dim() != n || v_ref.size() != n) throw std::invalid_argument("synthesis expects a 1-form and field on the chart");
  std::vector<RationalVector> W(n, RationalVector(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      auto c = w.entry(a, b).as_constant();
      if (!c)
        throw SynthesisError(SynthesisError::Kind::NonConstantForm,
                             "omega is not constant-coefficient; the trivial base connection is not presymplectic");
      W[a][b] = *c;
    }
  if (rational_rank(W, n) != n) throw SynthesisError(SynthesisError::Kind::Degenerate, "omega is not symplectic");
  const auto Winv = inverse(W);

  std::vector<Expr> m(n);
  for (int b = 0; b < n; ++b) m[b] = mu.get(Mask{1} << b);
  Expr pair;
  for (int b = 0; b < n; ++b) pair += m[b] * v_ref[b];

  // Sampled certificates; a sign change of a continuous function on the box forces a zero.
  std::vector<int> live;
  for (int b = 0; b < n; ++b)
    if (!m[b].is_zero()) live.push_back(b);
  if (live.empty()) throw SynthesisError(SynthesisError::Kind::VanishingMomentum, "vanishing momentum candidate");
  bool pos = false, neg = false, single_pos = false, single_neg = false;
  for (int s = 0; s < d.samples; ++s) {
    auto p = sample_point(d, static_cast<std::uint64_t>(s));
    double norm = 0.0;
    for (int b : live) norm = std::max(norm, std::abs(m[b].evaluate(p)));
    if (!(norm > d.tol))
      throw SynthesisError(SynthesisError::Kind::VanishingMomentum, "vanishing momentum candidate at " +
                                                                        format_point(p, chart.names));
    if (live.size() == 1) {
      double v = m[live[0]].evaluate(p);
      single_pos |= v > 0;
      single_neg |= v < 0;
    }
    double pv = pair.evaluate(p);
    if (!(std::abs(pv) > d.tol))
      throw SynthesisError(SynthesisError::Kind::VanishingPairing,
                           "<mu, v_ref> vanishes at " + format_point(p, chart.names));
    pos |= pv > 0;
    neg |= pv < 0;
  }
  if (single_pos && single_neg)
    throw SynthesisError(SynthesisError::Kind::VanishingMomentum,
                         "vanishing momentum candidate: its only component changes sign on the domain");
  if (pos && neg)
    throw SynthesisError(SynthesisError::Kind::VanishingPairing, "<mu, v_ref> changes sign on the domain");

  // ι_n ω = μ  ⇔  Wᵀ n = μ
  std::vector<Expr> nv(n), nbar(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (Winv[b][a] != 0) nv[a] += Expr(Winv[b][a]) * m[b];
  for (int a = 0; a < n; ++a) nbar[a] = v_ref[a] / pair;

  auto om = [&](const std::vector<Expr>& x, const std::vector<Expr>& y) {
    Expr acc;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (W[a][b] != 0 && !x[a].is_zero() && !y[b].is_zero()) acc += x[a] * Expr(W[a][b]) * y[b];
    return acc;
  };
  auto unit = [&](int a) { return Components::basis(n, a).c; };
  // D_{∂_b} n + ∂_b, and D_n n + n
  std::vector<std::vector<Expr>> shifted(n, std::vector<Expr>(n));
  std::vector<Expr> along_n(n);
  for (int b = 0; b < n; ++b)
    for (int a = 0; a < n; ++a) shifted[b][a] = nv[a].diff(b) + (a == b ? Expr(1) : Expr());
  for (int a = 0; a < n; ++a) {
    Expr acc = nv[a];
    for (int b = 0; b < n; ++b)
      if (!nv[b].is_zero()) acc += nv[b] * nv[a].diff(b);
    along_n[a] = acc;
  }
  std::vector<Expr> u_nbar(n);
  for (int a = 0; a < n; ++a) u_nbar[a] = om(unit(a), nbar);

  Connection D(n, n);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c) {
      std::vector<Expr> C3(n);
      for (int a = 0; a < n; ++a)
        C3[a] = u_nbar[a] * om(shifted[b], unit(c)) + u_nbar[b] * om(shifted[a], unit(c)) -
                u_nbar[a] * u_nbar[b] * om(along_n, unit(c));
      for (int j = 0; j < n; ++j) {
        Expr g;
        for (int a = 0; a < n; ++a)
          if (Winv[j][a] != 0 && !C3[a].is_zero()) g += Expr(Winv[j][a]) * C3[a];
        D.set(j, b, c, g);
      }
    }

  SynthesisResult out{D, {}, {}};
  LieAlgebroid T = tangent_algebroid(chart);
  out.h1 = check_H1(T, w, D, d).verdict;
  out.h2 = check_H2(T, w, D, mu, d);
  return out;
}

// ---- Lie algebras ---------------------------------------------------------------

FiniteLieAlgebra::FiniteLieAlgebra(int dim) : dim_(dim), c_(static_cast<std::size_t>(dim * dim * dim)) {
  if (dim < 1) throw std::invalid_argument("Lie algebra dimension must be positive");
}

void FiniteLieAlgebra::set_structure(int i, int j, int k, const Rational& v) {
  if (i == j && v != 0) throw std::invalid_argument("structure constants must be antisymmetric");
  c_[(i * dim_ + j) * dim_ + k] = v;
  c_[(j * dim_ + i) * dim_ + k] = -v;
}

RationalVector FiniteLieAlgebra::bracket(const RationalVector& x, const RationalVector& y) const {
  RationalVector out(dim_);
  for (int i = 0; i < dim_; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < dim_; ++j) {
      if (y[j] == 0) continue;
      for (int k = 0; k < dim_; ++k) out[k] += x[i] * y[j] * structure(i, j, k);
    }
  }
  return out;
}

std::vector<int> FiniteLieAlgebra::jacobi_violation() const {
  auto e = [&](int i) {
    RationalVector v(dim_);
    v[i] = 1;
    return v;
  };
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j)
      for (int k = j + 1; k < dim_; ++k) {
        RationalVector s = bracket(e(i), bracket(e(j), e(k)));
        RationalVector t = bracket(e(j), bracket(e(k), e(i)));
        RationalVector u = bracket(e(k), bracket(e(i), e(j)));
        for (int l = 0; l < dim_; ++l)
          if (s[l] + t[l] + u[l] != 0) return {i, j, k};
      }
  return {};
}

void FiniteLieAlgebra::certify() const {
  auto v = jacobi_violation();
  if (!v.empty())
    throw std::invalid_argument("Jacobi identity fails for basis triple " + std::to_string(v[0]) + "," +
                                std::to_string(v[1]) + "," + std::to_string(v[2]));
}

QuotientReport quotient_by_isotropy(const FiniteLieAlgebra& g, const std::vector<VectorField>& anchors,
                                    const AForm& mu, const SampleDomain& d) {
  const int dim = g.dim();
  if (static_cast<int>(anchors.size()) != dim || mu.dim() != dim)
    throw std::invalid_argument("action and momentum must match the Lie algebra dimension");
  g.certify();

  // ρ(X) ≡ 0 as linear conditions on X, one per (component, monomial).
  std::map<std::pair<int, Monomial>, RationalVector> conditions;
  for (int i = 0; i < dim; ++i)
    for (int a = 0; a < anchors[i].size(); ++a) {
      const auto& poly = anchors[i][a].polynomial();
      if (!poly) throw QuotientError("the action must be polynomial to compute its kernel exactly");
      for (const auto& [mono, c] : poly->terms()) {
        auto& row = conditions[{a, mono}];
        if (row.empty()) row.assign(dim, Rational(0));
        row[i] = c;
      }
    }
  std::vector<RationalVector> rows;
  for (auto& [key, row] : conditions) rows.push_back(row);
  QuotientReport out;
  out.kernel = rational_null_space(rows, dim);

  auto pair_with = [&](const AForm& m, const RationalVector& x) {
    Expr acc;
    for (int i = 0; i < dim; ++i)
      if (x[i] != 0) acc += Expr(x[i]) * m.get(Mask{1} << i);
    return acc;
  };
  const int n = anchors.empty() ? 0 : anchors[0].size();
  for (const auto& x : out.kernel) {
    Expr f = pair_with(mu, x);
    for (int a = 0; a < n; ++a)
      if (!is_identically_zero(f.diff(a), d).zero())
        throw QuotientError("<mu, X> is not constant on the kernel of the action; mu is not a momentum map");
    out.kernel_values.push_back(constant_of(f, d));
  }

  // ν: equals μ on ker ρ, zero on a complement of standard vectors.
  std::vector<RationalVector> basis = out.kernel;
  std::vector<RationalVector> extra = complement(out.kernel, dim);
  basis.insert(basis.end(), extra.begin(), extra.end());
  RationalVector rhs(dim);
  for (std::size_t s = 0; s < out.kernel.size(); ++s) rhs[s] = out.kernel_values[s];
  RationalVector nu = rational_solve(basis, rhs);

  out.descended = AForm(dim, 1);
  for (int i = 0; i < dim; ++i) out.descended.add(Mask{1} << i, mu.get(Mask{1} << i) - Expr(nu[i]));
  ResidualSet res;
  for (std::size_t s = 0; s < out.kernel.size(); ++s)
    res.add("<mu', k" + std::to_string(s) + ">", pair_with(out.descended, out.kernel[s]));
  out.descended_annihilates = res.test(d);

  std::vector<RationalVector> derived;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      RationalVector v(dim);
      for (int k = 0; k < dim; ++k) v[k] = g.structure(i, j, k);
      derived.push_back(v);
    }
  derived = span_basis(derived, dim);
  out.obstruction_space = subspace_intersection(derived, out.kernel, dim);
  out.descends_hamiltonian = true;
  for (const auto& x : out.obstruction_space) {
    Rational v = constant_of(pair_with(mu, x), d);
    out.obstruction_values.push_back(v);
    if (v != 0) out.descends_hamiltonian = false;
  }
  return out;
}

ReducedBracket reduced_bracket(const FiniteLieAlgebra& g, const std::vector<RationalVector>& h,
                               const std::vector<ExprVector>& kappa, const ExprVector& x, const ExprVector& y,
                               const SampleDomain& d) {
  const int dim = g.dim();
  const auto hb = span_basis(h, dim);
  for (const auto& u : hb)
    for (const auto& v : hb) {
      auto trial = hb;
      trial.push_back(g.bracket(u, v));
      if (rational_rank(trial, dim) > static_cast<int>(hb.size())) throw QuotientError("h is not a subalgebra");
    }
  std::vector<RationalVector> basis = hb;
  const auto extra = complement(hb, dim);
  basis.insert(basis.end(), extra.begin(), extra.end());
  // columns of `basis`; coordinates c = B⁻¹ v
  const auto Binv = inverse(transpose(basis, dim));

  auto reduce = [&](const ExprVector& v) {
    ExprVector out(dim);
    for (std::size_t e = 0; e < extra.size(); ++e) {
      const std::size_t row = hb.size() + e;
      Expr coord;
      for (int k = 0; k < dim; ++k)
        if (Binv[row][k] != 0 && !v[k].is_zero()) coord += Expr(Binv[row][k]) * v[k];
      for (int k = 0; k < dim; ++k)
        if (extra[e][k] != 0) out[k] += coord * Expr(extra[e][k]);
    }
    return out;
  };
  auto lift = [&](const ExprVector& v) {
    ExprVector out = v;
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c)
        if (!kappa[r][c].is_zero() && !v[c].is_zero()) out[r] += kappa[r][c] * v[c];
    return out;
  };
  auto br = [&](const ExprVector& u, const ExprVector& v) {
    ExprVector out(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        if (u[i].is_zero() || v[j].is_zero()) continue;
        for (int k = 0; k < dim; ++k)
          if (g.structure(i, j, k) != 0) out[k] += Expr(g.structure(i, j, k)) * u[i] * v[j];
      }
    return out;
  };
  auto compute = [&](const ExprVector& a, const ExprVector& b) { return reduce(br(lift(a), lift(b))); };

  ReducedBracket out;
  out.value = compute(x, y);
  ResidualSet wd, anti;
  for (std::size_t s = 0; s < hb.size(); ++s) {
    ExprVector xs = x, ys = y;
    for (int k = 0; k < dim; ++k) {
      xs[k] += Expr(hb[s][k]);
      ys[k] += Expr(hb[s][k]);
    }
    ExprVector r1 = compute(xs, y), r2 = compute(x, ys);
    for (int k = 0; k < dim; ++k) {
      wd.add("shift X by h" + std::to_string(s), r1[k] - out.value[k]);
      wd.add("shift Y by h" + std::to_string(s), r2[k] - out.value[k]);
    }
  }
  ExprVector swapped = compute(y, x);
  for (int k = 0; k < dim; ++k) anti.add("antisymmetry", swapped[k] + out.value[k]);
  out.well_defined = wd.test(d);
  out.antisymmetric = anti.test(d);
  return out;
}

}  // namespace forge
