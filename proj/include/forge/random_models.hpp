#pragma once

#include <cstdint>
#include <vector>

#include "forge/model.hpp"

namespace forge {

struct RandomModel {
  AlgebroidModel model;
  // Which hamiltonian conditions the construction was solved for.
  bool built_h2 = false;
  bool built_h3 = false;
};

// Rank-2 polynomial models over the plane. Index k cycles through the anchor kinds
// (twisted tangent, zero anchor) and the four H2/H3 construction combinations.
RandomModel random_model(std::uint64_t seed, int index);
std::vector<RandomModel> random_models(int count, std::uint64_t seed);

// Rank-3 bundle whose structure constants violate Jacobi.
AlgebroidModel jacobi_violating_model(std::uint64_t seed);

}  // namespace forge
