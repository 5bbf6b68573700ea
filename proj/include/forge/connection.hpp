#pragma once

#include <vector>

#include "forge/algebroid.hpp"
#include "forge/geometry.hpp"
#include "forge/graded.hpp"

namespace forge {

// D a_i = Ω^j_{αi} dx^α ⊗ a_j
class Connection {
 public:
  Connection() = default;
  Connection(int rank, int dim);

  static Connection trivial(int rank, int dim) { return Connection(rank, dim); }

  int rank() const { return rank_; }
  int dim() const { return dim_; }
  const Expr& coefficient(int j, int alpha, int i) const;
  void set(int j, int alpha, int i, const Expr& e);

  // Connection 1-form Ω^j_i = Ω^j_{αi} dx^α.
  DifferentialForm one_form(int j, int i) const;
  bool is_trivial() const;

 private:
  int rank_ = 0;
  int dim_ = 0;
  std::vector<Expr> omega_;
};

// σ = Σ_i σ_i ⊗ θ^i with σ_i differential p-forms.
struct AStarValuedForm {
  int degree = 0;
  std::vector<DifferentialForm> components;

  int rank() const { return static_cast<int>(components.size()); }
  std::vector<Expr> coefficient_list() const;
};

AStarValuedForm as_valued(const AForm& mu, int dim);
AStarValuedForm as_valued(const DualizedAnchor& gamma);

AStarValuedForm covariant_derivative(const Connection& D, const AStarValuedForm& sigma);

// (D_v a)^j = v(a^j) + a^i Ω^j_{αi} v^α
Section covariant_along(const Connection& D, const VectorField& v, const Section& a);
// Section-valued 1-form Da, as r differential 1-forms.
std::vector<DifferentialForm> covariant_of_section(const Connection& D, const Section& a);

// R^j_{αβi}, the coefficient of dx^α∧dx^β (α<β) in dΩ^j_i + Ω^j_k ∧ Ω^k_i.
class Curvature {
 public:
  Curvature(int rank, int dim) : rank_(rank), dim_(dim), forms_(rank * rank, DifferentialForm(dim, 2)) {}
  const DifferentialForm& form(int j, int i) const { return forms_[j * rank_ + i]; }
  DifferentialForm& form(int j, int i) { return forms_[j * rank_ + i]; }
  Expr component(int j, int alpha, int beta, int i) const { return form(j, i).component({alpha, beta}); }
  int rank() const { return rank_; }
  int dim() const { return dim_; }

 private:
  int rank_, dim_;
  std::vector<DifferentialForm> forms_;
};

Curvature curvature(const Connection& D);

Section torsion(const LieAlgebroid& L, const Connection& D, const Section& a, const Section& b);

// Ď_a v = [ρa, v] + ρ(D_v a)
VectorField opposite_connection_apply(const LieAlgebroid& L, const Connection& D, const Section& a,
                                      const VectorField& v);

// ---- derivations of Ω(M,A) -------------------------------------------------

WeilNames weil_names(const AnchoredBundle& A);
// ι_ρ: ẋ^α ↦ ρ^α_i θ^i
WeilDerivation iota_rho(const AnchoredBundle& A);
// D: x ↦ ẋ, θ^i ↦ −Ω^i_{αj} ẋ^α θ^j
WeilDerivation covariant_D(const AnchoredBundle& A, const Connection& D);
// Ď built from opposite_connection_apply and the algebroid differential.
WeilDerivation opposite_D(const LieAlgebroid& L, const Connection& D);
// ι_T: θ^k ↦ ½ T^k_{ij} θ^i θ^j
WeilDerivation iota_torsion(const LieAlgebroid& L, const Connection& D);

struct H1Report {
  Verdict verdict;       // Dγ = 0
  Verdict dcheck_omega;  // Ďω = 0 via the A-connection on TM
  bool paths_agree() const { return verdict.status == dcheck_omega.status; }
  AStarValuedForm d_gamma;
};

H1Report check_H1(const LieAlgebroid& L, const PresymplecticStructure& w, const Connection& D,
                  const SampleDomain& d);

Verdict check_commirhoD(const LieAlgebroid& L, const Connection& D, const SampleDomain& d);

}  // namespace forge
