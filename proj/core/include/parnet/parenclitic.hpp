#pragma once

#include <string>
#include <vector>

#include "parnet/baseline.hpp"

namespace parnet {

// Symmetric non-negative weight matrix with zero diagonal; one per
// transaction, entry (i,j) = distance of (t_i, t_j) from the fitted line.
struct WeightedNetwork {
  int k = 0;
  std::vector<double> w;  // k*k, row major

  double at(int i, int j) const { return w[static_cast<std::size_t>(i) * k + j]; }
};

struct BinaryNetwork {
  int k = 0;
  std::vector<std::uint8_t> adj;  // k*k, row major, symmetric, zero diagonal

  bool has_edge(int i, int j) const {
    return adj[static_cast<std::size_t>(i) * k + j] != 0;
  }
  int edge_count() const;
};

// alpha is the (1 - density) quantile of the pooled training edge weights:
// the smallest pooled weight v such that the fraction of weights >= v first
// reaches density. density 0 keeps no edges (alpha = +inf sentinel).
struct DensityThreshold {
  double density = 0.0;
  double alpha = 0.0;
};

WeightedNetwork build_weighted(const std::array<double, kFeatureCount>& features,
                               const BaselineModel& model);

DensityThreshold calibrate_alpha(const std::vector<WeightedNetwork>& training_networks,
                                 double density);

BinaryNetwork binarize(const WeightedNetwork& wn, const DensityThreshold& thr);

// Edge-list dump: header "k density alpha", then one "i j weight" line per edge.
void write_edge_list(const WeightedNetwork& wn, const BinaryNetwork& bn,
                     const DensityThreshold& thr, const std::string& path);

}  // namespace parnet
