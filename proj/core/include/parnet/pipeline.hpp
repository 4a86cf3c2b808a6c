#pragma once

#include <string>
#include <vector>

#include "parnet/baseline.hpp"
#include "parnet/parenclitic.hpp"
#include "parnet/topo.hpp"

namespace parnet {

enum class FeatureSet { kRaw, kParenclitic, kCombined };

FeatureSet feature_set_from_string(const std::string& s);
std::string to_string(FeatureSet set);

// Classifier input matrix: z-scored raw features and/or structural metrics.
struct FeatureMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
};

// Normalization + pairwise regressions fitted on the licit records of the
// raw (unnormalized) training set.
BaselineModel fit_pipeline_baseline(const Dataset& raw_training);

// One weighted network per record, built on z-scored features.
std::vector<WeightedNetwork> build_networks(const Dataset& raw_ds,
                                            const BaselineModel& model);

DensityThreshold calibrate_on_licit(const std::vector<WeightedNetwork>& nets,
                                    const std::vector<int>& labels, double density);

FeatureMatrix build_features(const Dataset& raw_ds, const BaselineModel& model,
                             const DensityThreshold& thr, FeatureSet set);

void write_features_csv(const FeatureMatrix& fm, const std::string& path);
FeatureMatrix read_features_csv(const std::string& path);

}  // namespace parnet
