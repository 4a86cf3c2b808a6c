#include "parnet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace parnet {

void SynthConfig::validate() const {
  if (n < 10) throw std::invalid_argument("synth: n must be >= 10");
  if (!(fraud_fraction > 0.0 && fraud_fraction < 1.0)) {
    throw std::invalid_argument("synth: fraud_fraction must be in (0,1)");
  }
  if (noise_sd < 0.0) throw std::invalid_argument("synth: noise_sd must be >= 0");
  if (break_strength < 0.0) {
    throw std::invalid_argument("synth: break_strength must be >= 0");
  }
}

namespace {

// Loading angles for the 8 features, golden-angle spaced so no two loading
// vectors are parallel. cos/sin of these give unit vectors in latent space;
// the latent part of every feature is therefore exactly N(0,1).
constexpr double kGolden = 2.399963229728653;

struct Loading {
  double c1, c2;
};

Loading loading_for(int feature, double extra_angle) {
  double phi = kGolden * (feature + 1) + extra_angle;
  return {std::cos(phi), std::sin(phi)};
}

}  // namespace

Dataset generate(const SynthConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto n_fraud = static_cast<std::size_t>(std::lround(cfg.n * cfg.fraud_fraction));
  n_fraud = std::clamp<std::size_t>(n_fraud, 1, cfg.n - 1);

  std::vector<int> labels(cfg.n, 0);
  std::fill(labels.begin(), labels.begin() + n_fraud, 1);
  std::shuffle(labels.begin(), labels.end(), rng);

  double denom = std::sqrt(1.0 + cfg.noise_sd * cfg.noise_sd);

  Dataset ds;
  ds.records.reserve(cfg.n);
  for (std::size_t row = 0; row < cfg.n; ++row) {
    double z1 = gauss(rng);
    double z2 = gauss(rng);

    std::array<double, kFeatureCount> angle{};
    if (labels[row] == 1) {
      // Rotate a random non-empty subset of loadings, random direction each.
      std::array<bool, kFeatureCount> pick{};
      bool any = false;
      for (int i = 0; i < kFeatureCount; ++i) {
        pick[i] = unit(rng) < 0.5;
        any = any || pick[i];
      }
      if (!any) pick[static_cast<int>(unit(rng) * kFeatureCount) % kFeatureCount] = true;
      for (int i = 0; i < kFeatureCount; ++i) {
        double sign = unit(rng) < 0.5 ? 1.0 : -1.0;
        if (pick[i]) angle[i] = sign * cfg.break_strength;
      }
    }

    std::array<double, kFeatureCount> u{};
    for (int i = 0; i < kFeatureCount; ++i) {
      auto l = loading_for(i, angle[i]);
      u[i] = (l.c1 * z1 + l.c2 * z2 + cfg.noise_sd * gauss(rng)) / denom;
    }

    TransactionRecord r;
    r.fraud = labels[row];
    r.features[kTransactionSize] = std::max(0.0, 120.0 + 60.0 * u[0]);
    r.features[kTimeSinceLast] = std::max(0.0, 40000.0 + 18000.0 * u[1]);
    r.features[kLastTransactionSize] = std::max(0.0, 110.0 + 55.0 * u[2]);
    r.features[kAvgTransactionSize] = std::max(0.0, 100.0 + 35.0 * u[3]);
    r.features[kAvgTimeBetween] = std::max(0.0, 50000.0 + 16000.0 * u[4]);
    r.features[kSameShop] = u[5] > 0.0 ? 1.0 : 0.0;
    r.features[kHourOfDay] =
        std::clamp(std::round(12.5 + 4.0 * u[6]), 1.0, 24.0);
    r.features[kFraudRate] = std::clamp(0.02 + 0.008 * u[7], 0.0, 1.0);
    ds.records.push_back(r);
  }
  return ds;
}

}  // namespace parnet
