#include "forge/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace forge {

PresymplecticStructure::PresymplecticStructure(DifferentialForm w) : omega(std::move(w)) {
  if (omega.degree() != 2) throw std::invalid_argument("presymplectic form must have degree 2");
}

Eigen::MatrixXd PresymplecticStructure::at(const std::vector<double>& p) const {
  const int n = dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [mask, e] : omega.coefficients()) {
    auto ix = mask_indices(mask);
    double v = e.evaluate(p);
    if (!std::isfinite(v)) throw std::domain_error("non-finite presymplectic form entry");
    m(ix[0], ix[1]) = v;
    m(ix[1], ix[0]) = -v;
  }
  return m;
}

Verdict check_closed(const DifferentialForm& omega, const SampleDomain& d) {
  ResidualSet r;
  DifferentialForm dw = exterior_derivative(omega);
  for (const auto& [m, e] : dw.coefficients()) r.add("d omega", e);
  return r.test(d);
}

Eigen::MatrixXd DualizedAnchor::at(const std::vector<double>& p) const {
  const int r = rank();
  const int n = r ? gamma[0].dim() : 0;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(r, n);
  for (int i = 0; i < r; ++i)
    for (const auto& [m, e] : gamma[i].coefficients()) {
      double v = e.evaluate(p);
      if (!std::isfinite(v)) throw std::domain_error("non-finite dualized anchor entry");
      g(i, mask_indices(m)[0]) = v;
    }
  return g;
}

DualizedAnchor dualized_anchor(const AnchoredBundle& A, const PresymplecticStructure& w) {
  if (w.dim() != A.dim()) throw std::invalid_argument("chart mismatch between anchor and form");
  DualizedAnchor g;
  for (int i = 0; i < A.rank; ++i) {
    DifferentialForm gi(A.dim(), 1);
    for (int beta = 0; beta < A.dim(); ++beta) {
      Expr acc;
      for (int alpha = 0; alpha < A.dim(); ++alpha) {
        if (A.rho(alpha, i).is_zero()) continue;
        acc += A.rho(alpha, i) * w.entry(alpha, beta);
      }
      gi.add(Mask{1} << beta, acc);
    }
    g.gamma.push_back(std::move(gi));
  }
  return g;
}

// ---- numerics ------------------------------------------------------------

namespace {

Eigen::JacobiSVD<Eigen::MatrixXd> svd_of(const Eigen::MatrixXd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

int rank_from(const Eigen::VectorXd& s, double tol) {
  if (s.size() == 0) return 0;
  double top = s(0);
  if (!(top > 0)) return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol * top) ++r;
  return r;
}

}  // namespace

int numerical_rank(const Eigen::MatrixXd& m, double tol) {
  if (m.size() == 0) return 0;
  return rank_from(svd_of(m).singularValues(), tol);
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double tol) {
  const int n = static_cast<int>(m.cols());
  if (m.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
  auto svd = svd_of(m);
  int r = rank_from(svd.singularValues(), tol);
  return svd.matrixV().rightCols(n - r);
}

Eigen::MatrixXd column_span(const Eigen::MatrixXd& m, double tol) {
  if (m.cols() == 0) return Eigen::MatrixXd(m.rows(), 0);
  auto svd = svd_of(m);
  int r = rank_from(svd.singularValues(), tol);
  return svd.matrixU().leftCols(r);
}

double span_residual(const Eigen::MatrixXd& basis, const Eigen::VectorXd& u) {
  if (basis.cols() == 0) return u.norm();
  Eigen::VectorXd proj = basis * (basis.transpose() * u);
  return (u - proj).norm();
}

bool subspace_contains(const Eigen::MatrixXd& w, const Eigen::MatrixXd& u, double tol) {
  Eigen::MatrixXd basis = column_span(w, tol);
  for (int k = 0; k < u.cols(); ++k) {
    Eigen::VectorXd col = u.col(k);
    if (span_residual(basis, col) > tol * (1.0 + col.norm())) return false;
  }
  return true;
}

Eigen::MatrixXd evaluate_fields(const std::vector<VectorField>& fields, const std::vector<double>& p) {
  const int n = static_cast<int>(p.size());
  Eigen::MatrixXd m(n, static_cast<int>(fields.size()));
  for (std::size_t k = 0; k < fields.size(); ++k)
    for (int a = 0; a < n; ++a) m(a, static_cast<int>(k)) = fields[k][a].evaluate(p);
  return m;
}

PointwiseSymplectic::PointwiseSymplectic(const PresymplecticStructure& w, const std::vector<double>& p,
                                         double tol)
    : w_(w.at(p)), tol_(tol) {}

int PointwiseSymplectic::rank() const { return numerical_rank(w_, tol_); }

Eigen::MatrixXd PointwiseSymplectic::orthogonal(const Eigen::MatrixXd& v) const {
  // rows: ω(v_k, e_β) = (v_k)^α ω_{αβ}
  Eigen::MatrixXd m = v.transpose() * w_;
  return null_space(m, tol_);
}

Eigen::MatrixXd PointwiseSymplectic::kernel() const { return null_space(w_, tol_); }

bool PointwiseSymplectic::is_isotropic(const Eigen::MatrixXd& v) const {
  return subspace_contains(orthogonal(v), v, tol_);
}

bool PointwiseSymplectic::is_coisotropic(const Eigen::MatrixXd& v) const {
  return subspace_contains(v, orthogonal(v), tol_);
}

C3Result c3_pointwise(const AnchoredBundle& A, const PresymplecticStructure& w, const std::vector<double>& p,
                      double tol) {
  C3Result out;
  DualizedAnchor g = dualized_anchor(A, w);
  Eigen::MatrixXd k = null_space(g.at(p), tol);
  out.kernel_dimension = static_cast<int>(k.cols());
  for (int i = 0; i < g.rank(); ++i) {
    DifferentialForm dg = exterior_derivative(g.gamma[i]);
    PresymplecticStructure as_two_form(dg);
    Eigen::MatrixXd m = as_two_form.at(p);
    double scale = m.cwiseAbs().maxCoeff();
    for (int a = 0; a < k.cols(); ++a)
      for (int b = a + 1; b < k.cols(); ++b) {
        double v = k.col(a).dot(m * k.col(b));
        out.max_residual = std::max(out.max_residual, std::abs(v));
        if (std::abs(v) > tol * (1.0 + scale) && out.verdict.passed())
          out.verdict = Verdict::failure(
              Witness{"d gamma" + std::to_string(i) + " on ker gamma", p, v,
                      "kernel dimension " + std::to_string(k.cols())},
              "d gamma does not vanish on the kernel of gamma");
      }
  }
  if (out.verdict.failed()) out.verdict.residual_max = out.max_residual;
  return out;
}

std::string to_string(C4Result::Outcome o) {
  switch (o) {
    case C4Result::Outcome::Involutive:
      return "involutive";
    case C4Result::Outcome::NotInOrthogonal:
      return "frame not inside the orthogonal";
    case C4Result::Outcome::NotSpanning:
      return "frame does not span the orthogonal";
    case C4Result::Outcome::Irregular:
      return "irregular";
    case C4Result::Outcome::NotInvolutive:
      return "not involutive";
  }
  return "?";
}

C4Result c4_frame_check(const AnchoredBundle& A, const PresymplecticStructure& w,
                        const std::vector<VectorField>& frame, const SampleDomain& d) {
  C4Result out;
  DualizedAnchor g = dualized_anchor(A, w);
  const int nf = static_cast<int>(frame.size());
  std::vector<std::vector<VectorField>> brackets(nf, std::vector<VectorField>(nf));
  for (int k = 0; k < nf; ++k)
    for (int l = k + 1; l < nf; ++l) brackets[k][l] = lie_bracket(frame[k], frame[l]);

  auto fail = [&](C4Result::Outcome o, const std::vector<double>& p, double value, std::string detail) {
    out.outcome = o;
    out.verdict = Verdict::failure(Witness{to_string(o), p, value, std::move(detail)}, to_string(o));
  };

  int expected_dim = -1;
  int accepted = 0;
  for (std::uint64_t s = 0; accepted < d.samples && s < 11ull * d.samples; ++s) {
    std::vector<double> p = sample_point(d, s);
    Eigen::MatrixXd f = evaluate_fields(frame, p);
    Eigen::MatrixXd gm = g.at(p);
    if (!f.allFinite() || !gm.allFinite()) continue;
    ++accepted;
    Eigen::MatrixXd member = gm * f;
    double scale = 1.0 + gm.cwiseAbs().maxCoeff() * (f.size() ? f.cwiseAbs().maxCoeff() : 0.0);
    for (int i = 0; i < member.rows(); ++i)
      for (int k = 0; k < member.cols(); ++k)
        if (std::abs(member(i, k)) > d.tol * scale) {
          fail(C4Result::Outcome::NotInOrthogonal, p, member(i, k),
               "gamma" + std::to_string(i) + " on frame field " + std::to_string(k));
          out.first_field = k;
          return out;
        }
    int dim = numerical_rank(f, d.tol);
    int orth_dim = static_cast<int>(null_space(gm, d.tol).cols());
    if (expected_dim < 0) expected_dim = dim;
    if (dim != expected_dim) {
      fail(C4Result::Outcome::Irregular, p, dim, "frame rank changes across samples");
      return out;
    }
    if (dim != orth_dim) {
      fail(C4Result::Outcome::NotSpanning, p, orth_dim - dim,
           "frame rank " + std::to_string(dim) + " vs orthogonal dimension " + std::to_string(orth_dim));
      return out;
    }
    Eigen::MatrixXd basis = column_span(f, d.tol);
    for (int k = 0; k < nf; ++k)
      for (int l = k + 1; l < nf; ++l) {
        Eigen::VectorXd b(A.dim());
        for (int a = 0; a < A.dim(); ++a) b(a) = brackets[k][l][a].evaluate(p);
        double res = span_residual(basis, b);
        if (res > d.tol * (1.0 + b.norm())) {
          fail(C4Result::Outcome::NotInvolutive, p, res,
               "[X" + std::to_string(k) + ",X" + std::to_string(l) + "] = " +
                   brackets[k][l].str(A.chart.names));
          out.first_field = k;
          out.second_field = l;
          out.bracket = brackets[k][l];
          return out;
        }
      }
  }
  if (accepted == 0) throw SamplingExhausted("no finite sample for the frame check");
  return out;
}

}  // namespace forge
