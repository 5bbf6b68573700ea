#include "forge/random_models.hpp"

#include <random>

namespace forge {

namespace {

class PolynomialDraw {
 public:
  explicit PolynomialDraw(std::uint64_t seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  // Random polynomial in (x, y) of total degree ≤ deg; with antiderivative in x when requested.
  Expr poly(int deg, Expr* x_antiderivative = nullptr) {
    Expr out, anti;
    for (int a = 0; a <= deg; ++a)
      for (int b = 0; a + b <= deg; ++b) {
        if (integer(0, 1) == 0) continue;
        int c = integer(-2, 2);
        if (c == 0) continue;
        out += Expr(c) * pow(Expr::coordinate(0), a) * pow(Expr::coordinate(1), b);
        anti += Expr(Rational(c, a + 1)) * pow(Expr::coordinate(0), a + 1) * pow(Expr::coordinate(1), b);
      }
    if (x_antiderivative) *x_antiderivative = anti;
    return out;
  }

 private:
  std::mt19937_64 rng_;
};

Chart plane() { return Chart({"x", "y"}, SampleDomain::box(2, -2.0, 2.0)); }

// Solves (Dμ)_{βj} = target_{jβ} for Ω^0, given μ_0 = 1 and Ω^1 already set.
void solve_connection(Connection& D, const AForm& mu, const std::vector<std::vector<Expr>>& target) {
  const Expr mu1 = mu.get(Mask{1} << 1);
  for (int beta = 0; beta < 2; ++beta)
    for (int j = 0; j < 2; ++j) {
      Expr mj = mu.get(Mask{1} << j);
      D.set(0, beta, j, mj.diff(beta) - target[j][beta] - mu1 * D.coefficient(1, beta, j));
    }
}

}  // namespace

RandomModel random_model(std::uint64_t seed, int index) {
  PolynomialDraw draw(seed * 1000003ULL + static_cast<std::uint64_t>(index));
  const bool twisted = (index % 8) < 4;
  RandomModel out;
  out.built_h2 = index % 2 == 1;
  out.built_h3 = (index / 2) % 2 == 1;

  const Chart chart = plane();
  const Expr x = Expr::coordinate(0), y = Expr::coordinate(1);
  Expr G;
  Expr g = Expr(1) + draw.poly(2, &G);
  G = x + G;  // ∂_x G = g
  DifferentialForm w(2, 2);
  w.add(0b11, g);
  PresymplecticStructure omega(w);

  AForm mu(2, 1);
  mu.add(0b01, Expr(1));
  LieAlgebroid L;
  if (twisted) {
    Expr f = draw.poly(2);
    L = LieAlgebroid(chart, {VectorField({Expr(1), Expr(0)}), VectorField({f, Expr(1)})});
    // ρ⁻¹[∂x, f∂x + ∂y] = f_x a_0
    L.set_structure(0, 1, 0, f.diff(0));
    // μ = ρ*ν with ν = dx + (k'(y) − G) dy, so dν = −ω.
    Expr kprime = draw.poly(1).diff(0) + Expr(draw.integer(-2, 2)) * y;
    Expr mu1 = f + kprime - G;
    // The H3 residual is ∂_x of the perturbation, whose constant term is s ≠ 0.
    if (!out.built_h3) mu1 += Expr(draw.integer(1, 2)) * x + x * x * draw.poly(1);
    mu.add(0b10, mu1);
  } else {
    std::vector<VectorField> zero(2, VectorField({Expr(0), Expr(0)}));
    L = LieAlgebroid(chart, zero);
    Expr h = Expr(1) + draw.poly(2);
    int m = draw.integer(-2, 2);
    L.set_structure(0, 1, 1, h);
    L.set_structure(0, 1, 0, Expr(-m) * h);
    if (out.built_h3)
      mu.add(0b10, Expr(m));
    else
      mu.add(0b10, Expr(m) + Expr(1) + draw.poly(2) * x);
  }

  Connection D(2, 2);
  for (int beta = 0; beta < 2; ++beta)
    for (int j = 0; j < 2; ++j) D.set(1, beta, j, draw.poly(1));
  if (out.built_h2) {
    DualizedAnchor gamma = dualized_anchor(L, omega);
    std::vector<std::vector<Expr>> target(2, std::vector<Expr>(2));
    for (int j = 0; j < 2; ++j)
      for (int beta = 0; beta < 2; ++beta) target[j][beta] = gamma.entry(j, beta);
    solve_connection(D, mu, target);
  } else {
    for (int beta = 0; beta < 2; ++beta)
      for (int j = 0; j < 2; ++j) D.set(0, beta, j, Expr(1) + draw.poly(1));
  }

  out.model.name = std::string("random-") + (twisted ? "twisted-" : "bundle-") + std::to_string(index);
  out.model.algebroid = L;
  out.model.omega = omega;
  out.model.connection = D;
  out.model.momentum = mu;
  return out;
}

std::vector<RandomModel> random_models(int count, std::uint64_t seed) {
  std::vector<RandomModel> out;
  for (int k = 0; k < count; ++k) out.push_back(random_model(seed, k));
  return out;
}

AlgebroidModel jacobi_violating_model(std::uint64_t seed) {
  PolynomialDraw draw(seed);
  int k = draw.integer(1, 3) * (draw.integer(0, 1) ? 1 : -1);
  const Chart chart = plane();
  std::vector<VectorField> zero(3, VectorField({Expr(0), Expr(0)}));
  LieAlgebroid L(chart, zero);
  // Heisenberg bracket plus [a_0, a_2] = k a_0, which breaks Jacobi.
  L.set_structure(0, 1, 2, Expr(1));
  L.set_structure(0, 2, 0, Expr(k));
  AlgebroidModel m;
  m.name = "jacobi-violating";
  m.algebroid = L;
  DifferentialForm w(2, 2);
  w.add(0b11, Expr(1));
  m.omega = PresymplecticStructure(w);
  m.connection = Connection(3, 2);
  AForm mu(3, 1);
  m.momentum = mu;
  return m;
}

}  // namespace forge
