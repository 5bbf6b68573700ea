#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "forge/algebroid.hpp"

namespace forge {

struct PresymplecticStructure {
  DifferentialForm omega;

  PresymplecticStructure() = default;
  explicit PresymplecticStructure(DifferentialForm w);

  int dim() const { return omega.dim(); }
  // ω_{αβ}, antisymmetric.
  Expr entry(int alpha, int beta) const { return omega.component({alpha, beta}); }
  Eigen::MatrixXd at(const std::vector<double>& p) const;
};

Verdict check_closed(const DifferentialForm& omega, const SampleDomain& d);

// gamma[i] = ι_{ρ a_i} ω, (γ_i)_β = ρ^α_i ω_{αβ}
struct DualizedAnchor {
  std::vector<DifferentialForm> gamma;

  int rank() const { return static_cast<int>(gamma.size()); }
  Expr entry(int i, int beta) const { return gamma[i].get(Mask{1} << beta); }
  Eigen::MatrixXd at(const std::vector<double>& p) const;
};

DualizedAnchor dualized_anchor(const AnchoredBundle& A, const PresymplecticStructure& w);

// ---- pointwise linear algebra --------------------------------------------

int numerical_rank(const Eigen::MatrixXd& m, double tol);
// Orthonormal basis (columns) of the null space of m.
Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double tol);
// Orthonormal basis of the column span of m.
Eigen::MatrixXd column_span(const Eigen::MatrixXd& m, double tol);
// Residual of the component of u orthogonal to span(basis).
double span_residual(const Eigen::MatrixXd& basis, const Eigen::VectorXd& u);
// span(u) ⊆ span(w), both given by columns.
bool subspace_contains(const Eigen::MatrixXd& w, const Eigen::MatrixXd& u, double tol);

Eigen::MatrixXd evaluate_fields(const std::vector<VectorField>& fields, const std::vector<double>& p);

class PointwiseSymplectic {
 public:
  PointwiseSymplectic(const PresymplecticStructure& w, const std::vector<double>& p, double tol = 1e-9);

  int rank() const;
  // V given by columns; result is an orthonormal basis of V^⊥.
  Eigen::MatrixXd orthogonal(const Eigen::MatrixXd& v) const;
  Eigen::MatrixXd kernel() const;
  bool is_isotropic(const Eigen::MatrixXd& v) const;
  bool is_coisotropic(const Eigen::MatrixXd& v) const;
  const Eigen::MatrixXd& matrix() const { return w_; }

 private:
  Eigen::MatrixXd w_;
  double tol_;
};

struct C3Result {
  Verdict verdict;
  int kernel_dimension = 0;
  // max |(dγ_i)_p(v,w)| over orthonormal kernel pairs
  double max_residual = 0.0;
};

C3Result c3_pointwise(const AnchoredBundle& A, const PresymplecticStructure& w,
                      const std::vector<double>& p, double tol = 1e-9);

struct C4Result {
  enum class Outcome { Involutive, NotInOrthogonal, NotSpanning, Irregular, NotInvolutive };
  Outcome outcome = Outcome::Involutive;
  Verdict verdict;
  int first_field = -1, second_field = -1;
  VectorField bracket;
};

std::string to_string(C4Result::Outcome o);

C4Result c4_frame_check(const AnchoredBundle& A, const PresymplecticStructure& w,
                        const std::vector<VectorField>& frame, const SampleDomain& d);

}  // namespace forge
