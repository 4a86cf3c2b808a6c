#pragma once

#include <optional>
#include <vector>

#include "parnet/dataset.hpp"
#include "parnet/mlp.hpp"

namespace parnet {

struct Confusion {
  long tp = 0;
  long fp = 0;
  long tn = 0;
  long fn = 0;

  double error_rate() const {
    return static_cast<double>(fp + fn) / static_cast<double>(tp + fp + tn + fn);
  }
};

Confusion confusion(const std::vector<double>& scores, const std::vector<int>& labels,
                    double threshold);

// (FPR, TPR) points from threshold above every score down to the minimum
// score, tied scores grouped; AUC by the trapezoidal rule, which equals the
// concordance probability with ties counted 1/2.
struct RocCurve {
  std::vector<double> thresholds;  // one per point; +inf sentinel first
  std::vector<double> fpr;
  std::vector<double> tpr;
  double auc = 0.0;
};

RocCurve roc(const std::vector<double>& scores, const std::vector<int>& labels);

struct SweepConfig {
  TrainConfig train;
  std::uint64_t seed = 0;   // balanced subsampling seed
  bool balanced_eval = true;
};

struct SweepResult {
  std::vector<double> densities;
  std::vector<double> error_raw;          // constant across densities
  std::vector<double> error_parenclitic;
  std::vector<double> error_combined;
  double best_density = 0.0;              // argmin of error_combined
};

// Full pipeline at each density: fit normalization and pairwise baselines on
// the licit training records, calibrate alpha, extract structural features,
// train one perceptron per feature set on the balanced training subset, and
// report misclassification at threshold 0.5 on the (balanced) test set.
SweepResult density_sweep(const Dataset& train_ds, const Dataset& test_ds,
                          const std::vector<double>& densities, const SweepConfig& cfg);

// One ROC per size cutoff over the test records with transaction_size above
// the cutoff; strata missing a class yield nullopt instead of an error.
std::vector<std::optional<RocCurve>> stratify_by_size(
    const std::vector<double>& transaction_sizes, const std::vector<double>& scores,
    const std::vector<int>& labels, const std::vector<double>& size_cutoffs);

}  // namespace parnet
