#pragma once

#include <cstdint>

#include "parnet/dataset.hpp"

namespace parnet {

struct SynthConfig {
  std::size_t n = 1000;
  double fraud_fraction = 0.1;
  double noise_sd = 0.25;       // residual scale around the planted structure
  double break_strength = 2.0;  // rotation angle (radians) applied to fraud records
  std::uint64_t seed = 0;

  void validate() const;
};

// Seeded synthetic dataset in the transaction schema. Licit records are
// affine images of two shared latent Gaussians, so every feature pair is
// linearly correlated; fraud records rotate the loading vectors of a random
// feature subset by break_strength radians, which breaks the pairwise
// correlations while leaving each marginal distribution unchanged.
Dataset generate(const SynthConfig& cfg);

}  // namespace parnet
