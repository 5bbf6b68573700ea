#pragma once

#include <vector>

#include "forge/exterior.hpp"
#include "forge/verdict.hpp"

namespace forge {

struct Section : Components {
  using Components::Components;
  explicit Section(Components base) : Components(std::move(base)) {}
};

Section operator+(const Section& a, const Section& b);
Section operator-(const Section& a, const Section& b);
Section operator*(const Expr& f, const Section& a);

struct AnchoredBundle {
  Chart chart;
  int rank = 0;
  // anchor[i] = ρ(a_i)
  std::vector<VectorField> anchor;

  AnchoredBundle() = default;
  AnchoredBundle(Chart c, std::vector<VectorField> rho);

  int dim() const { return chart.dim(); }
  const Expr& rho(int alpha, int i) const { return anchor[i][alpha]; }
  Section frame(int i) const { return Section(Components::basis(rank, i)); }
};

class LieAlgebroid : public AnchoredBundle {
 public:
  LieAlgebroid() = default;
  LieAlgebroid(Chart c, std::vector<VectorField> rho);

  // c^k_{ij}; set(i, j, k, e) also fixes c^k_{ji} = -e.
  const Expr& structure(int i, int j, int k) const;
  void set_structure(int i, int j, int k, const Expr& e);

 private:
  std::vector<Expr> c_;
};

VectorField anchor_apply(const AnchoredBundle& A, const Section& a);
Section algebroid_bracket(const LieAlgebroid& L, const Section& a, const Section& b);
AForm algebroid_differential(const LieAlgebroid& L, const AForm& nu);

// ρ*(τ) for a differential form τ: (ρ*τ)(a_1..a_p) = τ(ρa_1..ρa_p).
AForm anchor_pullback(const AnchoredBundle& A, const DifferentialForm& tau);

Expr pairing(const AForm& mu, const Section& a);

struct AxiomReport {
  Verdict anchor_morphism;
  Verdict jacobi;
  Verdict d_squared;

  bool all_pass() const {
    return anchor_morphism.passed() && jacobi.passed() && d_squared.passed();
  }
};

AxiomReport check_axioms(const LieAlgebroid& L, const SampleDomain& d);

}  // namespace forge
