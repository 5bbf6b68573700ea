#pragma once

#include <string>
#include <vector>

#include "forge/connection.hpp"

namespace forge {

// ---- vector fields on A[1] and their de Rham lifts ---------------------------

// 𝐝 = ρ^α_i θ^i ∂_α − ½ c^k_{ij} θ^i θ^j ∂_{θ^k}
WeilDerivation algebroid_d(const LieAlgebroid& L);
// 𝐢_a = a^k ∂_{θ^k}
WeilDerivation algebroid_i(const LieAlgebroid& L, const Section& a);
// 𝐋_a = [𝐢_a, 𝐝]
WeilDerivation algebroid_L(const LieAlgebroid& L, const Section& a);

// ι_X: ẋ^α ↦ X(x^α), θ̇^i ↦ X(θ^i)
WeilDerivation lift_iota(const WeilDerivation& X);
// ℒ_X = [ι_X, d]
WeilDerivation lift_lie(const WeilDerivation& X);

// de Rham differential of W(A): x ↦ ẋ, θ ↦ θ̇
WeilDerivation weil_d(int n, int r);
WeilDerivation iota_d(const LieAlgebroid& L);
WeilDerivation lie_d(const LieAlgebroid& L);
// ℒ_𝐝 from the explicit coordinate expansion, independent of the commutator.
WeilDerivation lie_d_explicit(const LieAlgebroid& L);
// d̂ = d + ℒ_𝐝
WeilDerivation brst(const LieAlgebroid& L);

WeilElement brst_apply(const LieAlgebroid& L, const WeilElement& e);

// ---- splitting by a connection ----------------------------------------------

// Algebra morphism W(A) → Ω(M,A): θ̇^i ↦ −Ω^i_{αj} ẋ^α θ^j.
WeilElement h_star(const Connection& D, const WeilElement& e);
// Inclusion Ω(M,A) → W(A); rejects θ̇.
WeilElement p_star(const WeilElement& e);
WeilElement hp_star(const Connection& D, const WeilElement& e);
// η^i = θ̇^i + Ω^i_{αj} ẋ^α θ^j
WeilElement eta(const Connection& D, int i);

// ι̂_a: θ^i ↦ a^i, θ̇^j ↦ a^i Ω^j_{αi} ẋ^α
WeilDerivation hat_iota(const Connection& D, const Section& a);
WeilDerivation hat_lie(const LieAlgebroid& L, const Connection& D, const Section& a);

struct BasicReport {
  Verdict horizontal;
  Verdict invariant;
  Verdict basic;
  // Verdicts restricted to the frame sections alone.
  Verdict frame_horizontal;
  Verdict frame_invariant;
  bool generation_disagreement = false;
};

BasicReport is_basic(const LieAlgebroid& L, const Connection& D, const WeilElement& e, const SampleDomain& d);

// ---- extension of ω ----------------------------------------------------------

// ω̄ = Σ_{α<β} ω_{αβ} ẋ^α ẋ^β + μ_i η^i
WeilElement build_extension(const PresymplecticStructure& w, const AForm& mu, const Connection& D);
// p*ω + d p*μ − p*Dμ, assembled from the covariant derivative.
WeilElement build_extension_split(const PresymplecticStructure& w, const AForm& mu, const Connection& D);

struct TheoremReport {
  Verdict extension_property;  // h*ω̄ equals the encoding of ω
  Verdict split_agreement;     // both assemblies of ω̄ coincide
  Verdict closed;              // d̂ω̄ = 0
  Verdict bidegree_30, bidegree_21, bidegree_12;
  Verdict classical_closed, classical_h2, classical_h3;
  int agreements() const;
  bool literal_agreement() const { return agreements() == 3; }
  // (1,2) against H3 is only meaningful once (3,0) and (2,1) vanish.
  bool conditional_agreement() const;
  WeilElement extension;
  WeilElement differential;
};

TheoremReport theorem_check(const LieAlgebroid& L, const PresymplecticStructure& w, const Connection& D,
                            const AForm& mu, const SampleDomain& d);

// ---- operator identities -----------------------------------------------------

struct RelationResult {
  std::string relation;
  Verdict verdict;
};

std::vector<RelationResult> cartan_table(const LieAlgebroid& L, const SampleDomain& d, int probes = 10,
                                         std::uint64_t seed = 0);
Verdict cartan_table_check(const LieAlgebroid& L, const SampleDomain& d);

// h*∘X∘p* as a derivation of Ω(M,A).
WeilDerivation parallel_projection(const Connection& D, const WeilDerivation& X);

struct ProjectionReport {
  Verdict covariant;  // P(d) = D
  Verdict opposite;   // P(ℒ_𝐝) = Ď
  Verdict verdict;
};

ProjectionReport parallel_projection_check(const LieAlgebroid& L, const Connection& D, const SampleDomain& d);

// Verdict on [d̂, d̂] = 0; the witness label names the offending monomial.
Verdict brst_square_check(const LieAlgebroid& L, const SampleDomain& d);

// ι_ρĎω + ½Dι_ρι_ρω − ι_Tι_ρω − ½ι_ρι_ρdω for any 2-form ω.
WeilElement lemma916_residual(const LieAlgebroid& L, const Connection& D, const DifferentialForm& w);
Verdict lemma916_check(const LieAlgebroid& L, const Connection& D, const DifferentialForm& w, const SampleDomain& d);

struct CurvatureTorsionReport {
  Verdict identity;       // [D,Ď]μ − ι_ρ(D²μ) − [D,ι_T]μ = 0
  Verdict vanishing;      // ⟨μ, ι_ρR + DT⟩ = 0
  Verdict torsion_term;   // ⟨μ, DT⟩ = 0
};

CurvatureTorsionReport prop917_check(const LieAlgebroid& L, const Connection& D, const AForm& mu,
                                     const SampleDomain& d);

}  // namespace forge
