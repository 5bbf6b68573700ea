#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "forge/connection.hpp"

namespace forge {

Verdict check_H2(const AnchoredBundle& A, const PresymplecticStructure& w, const Connection& D, const AForm& mu,
                 const SampleDomain& d);

// 𝐝μ + ρ*ω = 0
Verdict check_H3(const LieAlgebroid& L, const PresymplecticStructure& w, const AForm& mu, const SampleDomain& d);
AForm h3_residual(const LieAlgebroid& L, const PresymplecticStructure& w, const AForm& mu);

struct TorsionCriterion {
  bool precondition = false;  // μ is a D-momentum section
  Verdict verdict;
};

// ⟨μ, T(a_i,a_j)⟩ − ω(ρa_i, ρa_j) = 0, meaningful only when H2 holds.
TorsionCriterion torsion_criterion(const LieAlgebroid& L, const PresymplecticStructure& w, const Connection& D,
                                   const AForm& mu, const SampleDomain& d);

// ℒ_{ρa_i}⟨μ,a_j⟩ − ⟨μ, [a_i,a_j] + D_{ρa_j}a_i⟩ = 0 for all frame pairs.
Verdict invariance_check(const LieAlgebroid& L, const Connection& D, const AForm& mu, const SampleDomain& d);

struct ZeroLocusReport {
  bool on_locus = false;
  bool clean = false;
  Eigen::MatrixXd tangent;     // columns: basis of ker dμ at p
  Eigen::MatrixXd orthogonal;  // columns: basis of ρ(A_p)^⊥
  bool equals_orthogonal = false;
  bool coisotropic = false;
  std::vector<int> stencil_ranks;
  Verdict invariance;
};

ZeroLocusReport zero_locus_report(const LieAlgebroid& L, const PresymplecticStructure& w, const Connection& D,
                                  const AForm& mu, const std::vector<double>& p, const SampleDomain& d);

class SynthesisError : public std::runtime_error {
 public:
  enum class Kind { NonConstantForm, Degenerate, VanishingMomentum, VanishingPairing };
  SynthesisError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
  Kind kind;
};

struct SynthesisResult {
  Connection connection;
  Verdict h1;
  Verdict h2;
};

// Tangent algebroid over a constant symplectic ω: D' = D₀ + Γ with ω(u,Γ(v,w)) = C₃(u,v,w).
SynthesisResult synthesize_tangent_connection(const Chart& chart, const PresymplecticStructure& w, const AForm& mu,
                                              const VectorField& v_ref);

LieAlgebroid tangent_algebroid(const Chart& chart);

// ---- finite-dimensional Lie algebras ------------------------------------------

using RationalVector = std::vector<Rational>;

class FiniteLieAlgebra {
 public:
  FiniteLieAlgebra() = default;
  explicit FiniteLieAlgebra(int dim);

  int dim() const { return dim_; }
  const Rational& structure(int i, int j, int k) const { return c_[(i * dim_ + j) * dim_ + k]; }
  void set_structure(int i, int j, int k, const Rational& v);
  RationalVector bracket(const RationalVector& x, const RationalVector& y) const;
  // First Jacobi violation as (i,j,k), or empty.
  std::vector<int> jacobi_violation() const;
  // Throws std::invalid_argument if Jacobi fails.
  void certify() const;

 private:
  int dim_ = 0;
  std::vector<Rational> c_;
};

struct QuotientReport {
  std::vector<RationalVector> kernel;     // rational basis of ker ρ
  std::vector<Rational> kernel_values;    // ⟨μ, X⟩ on the kernel basis
  AForm descended;                        // μ' = μ − ν
  Verdict descended_annihilates;          // ⟨μ', ker ρ⟩ = 0
  std::vector<RationalVector> obstruction_space;  // [𝔤,𝔤] ∩ ker ρ
  std::vector<Rational> obstruction_values;
  bool descends_hamiltonian = false;
};

class QuotientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// anchors[i] = ρ(e_i); μ has one component per basis element.
QuotientReport quotient_by_isotropy(const FiniteLieAlgebra& g, const std::vector<VectorField>& anchors,
                                    const AForm& mu, const SampleDomain& d);

using ExprVector = std::vector<Expr>;

struct ReducedBracket {
  ExprVector value;  // representative in the complement of 𝔥
  Verdict well_defined;
  Verdict antisymmetric;
};

// κ is given as a dim×dim matrix acting on representatives, kappa[row][col].
ReducedBracket reduced_bracket(const FiniteLieAlgebra& g, const std::vector<RationalVector>& h,
                               const std::vector<ExprVector>& kappa, const ExprVector& x, const ExprVector& y,
                               const SampleDomain& d);

// Linear algebra over the rationals.
std::vector<RationalVector> rational_null_space(std::vector<RationalVector> rows, int cols);
int rational_rank(std::vector<RationalVector> rows, int cols);
std::vector<RationalVector> subspace_intersection(const std::vector<RationalVector>& a,
                                                  const std::vector<RationalVector>& b, int dim);

}  // namespace forge
