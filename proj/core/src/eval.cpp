#include "parnet/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "parnet/pipeline.hpp"

namespace parnet {

Confusion confusion(const std::vector<double>& scores, const std::vector<int>& labels,
                    double threshold) {
  if (scores.size() != labels.size()) {
    throw std::invalid_argument("confusion: scores/labels length mismatch");
  }
  Confusion c;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    bool pos = scores[i] >= threshold;
    if (labels[i] == 1) {
      pos ? ++c.tp : ++c.fn;
    } else {
      pos ? ++c.fp : ++c.tn;
    }
  }
  return c;
}

RocCurve roc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) {
    throw std::invalid_argument("roc: scores/labels length mismatch");
  }
  long p = std::count(labels.begin(), labels.end(), 1);
  long n = static_cast<long>(labels.size()) - p;
  if (p == 0 || n == 0) {
    throw std::runtime_error("roc: both classes must be present");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.thresholds.push_back(std::numeric_limits<double>::infinity());
  curve.fpr.push_back(0.0);
  curve.tpr.push_back(0.0);

  long tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      labels[order[i]] == 1 ? ++tp : ++fp;
      ++i;
    }
    curve.thresholds.push_back(s);
    curve.fpr.push_back(static_cast<double>(fp) / n);
    curve.tpr.push_back(static_cast<double>(tp) / p);
  }

  double auc = 0.0;
  for (std::size_t j = 1; j < curve.fpr.size(); ++j) {
    auc += (curve.fpr[j] - curve.fpr[j - 1]) * (curve.tpr[j] + curve.tpr[j - 1]) / 2.0;
  }
  curve.auc = auc;
  return curve;
}

namespace {

FeatureMatrix select_rows(const FeatureMatrix& fm, const std::vector<std::size_t>& idx) {
  FeatureMatrix out;
  out.names = fm.names;
  for (auto i : idx) {
    out.rows.push_back(fm.rows[i]);
    out.labels.push_back(fm.labels[i]);
  }
  return out;
}

double train_and_error(const FeatureMatrix& train_fm, const FeatureMatrix& test_fm,
                       const TrainConfig& cfg) {
  auto model = init_mlp(static_cast<int>(train_fm.names.size()), cfg);
  auto result = train(model, train_fm.rows, train_fm.labels, cfg);
  std::vector<double> scores;
  scores.reserve(test_fm.rows.size());
  for (const auto& row : test_fm.rows) scores.push_back(forward(result.model, row));
  return confusion(scores, test_fm.labels, 0.5).error_rate();
}

}  // namespace

SweepResult density_sweep(const Dataset& train_ds, const Dataset& test_ds,
                          const std::vector<double>& densities, const SweepConfig& cfg) {
  if (densities.empty()) throw std::invalid_argument("density_sweep: empty density list");
  for (double d : densities) {
    if (d < 0.0 || d > 1.0) {
      throw std::invalid_argument("density_sweep: density must be in [0,1]");
    }
  }

  BaselineModel model = fit_pipeline_baseline(train_ds);
  auto train_nets = build_networks(train_ds, model);
  auto train_labels = train_ds.labels();
  auto test_labels = test_ds.labels();

  auto train_idx = balance_indices(train_labels, cfg.seed);
  std::vector<std::size_t> test_idx;
  if (cfg.balanced_eval) {
    test_idx = balance_indices(test_labels, cfg.seed + 1);
  } else {
    test_idx.resize(test_labels.size());
    std::iota(test_idx.begin(), test_idx.end(), 0);
  }

  // Raw features do not depend on the threshold: one training run suffices.
  DensityThreshold dummy{0.0, std::numeric_limits<double>::infinity()};
  auto raw_train = select_rows(build_features(train_ds, model, dummy, FeatureSet::kRaw),
                               train_idx);
  auto raw_test =
      select_rows(build_features(test_ds, model, dummy, FeatureSet::kRaw), test_idx);
  double raw_error = train_and_error(raw_train, raw_test, cfg.train);

  SweepResult result;
  result.densities = densities;
  double best_error = std::numeric_limits<double>::infinity();
  for (double density : densities) {
    auto thr = calibrate_on_licit(train_nets, train_labels, density);
    for (FeatureSet set : {FeatureSet::kParenclitic, FeatureSet::kCombined}) {
      auto tr = select_rows(build_features(train_ds, model, thr, set), train_idx);
      auto te = select_rows(build_features(test_ds, model, thr, set), test_idx);
      double err = train_and_error(tr, te, cfg.train);
      if (set == FeatureSet::kParenclitic) {
        result.error_parenclitic.push_back(err);
      } else {
        result.error_combined.push_back(err);
        if (err < best_error) {
          best_error = err;
          result.best_density = density;
        }
      }
    }
    result.error_raw.push_back(raw_error);
  }
  return result;
}

std::vector<std::optional<RocCurve>> stratify_by_size(
    const std::vector<double>& transaction_sizes, const std::vector<double>& scores,
    const std::vector<int>& labels, const std::vector<double>& size_cutoffs) {
  if (transaction_sizes.size() != scores.size() || scores.size() != labels.size()) {
    throw std::invalid_argument("stratify_by_size: length mismatch");
  }
  for (std::size_t i = 1; i < size_cutoffs.size(); ++i) {
    if (size_cutoffs[i] < size_cutoffs[i - 1]) {
      throw std::invalid_argument("stratify_by_size: cutoffs must be non-decreasing");
    }
  }
  std::vector<std::optional<RocCurve>> out;
  for (double cutoff : size_cutoffs) {
    std::vector<double> s;
    std::vector<int> l;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (transaction_sizes[i] > cutoff || (cutoff == 0.0 && transaction_sizes[i] >= 0.0)) {
        s.push_back(scores[i]);
        l.push_back(labels[i]);
      }
    }
    bool has_pos = std::find(l.begin(), l.end(), 1) != l.end();
    bool has_neg = std::find(l.begin(), l.end(), 0) != l.end();
    if (!has_pos || !has_neg) {
      out.push_back(std::nullopt);
    } else {
      out.push_back(roc(s, l));
    }
  }
  return out;
}

}  // namespace parnet
