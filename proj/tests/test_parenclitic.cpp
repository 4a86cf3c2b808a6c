#include <algorithm>
#include <cmath>
#include <random>

#include <doctest.h>

#include "parnet/parenclitic.hpp"
#include "parnet/pipeline.hpp"
#include "parnet/synth.hpp"

using namespace parnet;

namespace {

WeightedNetwork net_from_pool(const std::vector<double>& upper) {
  // fills the strict upper triangle row by row; requires k(k-1)/2 values
  int k = kFeatureCount;
  WeightedNetwork wn;
  wn.k = k;
  wn.w.assign(static_cast<std::size_t>(k) * k, 0.0);
  std::size_t idx = 0;
  for (int i = 0; i < k && idx < upper.size(); ++i) {
    for (int j = i + 1; j < k && idx < upper.size(); ++j) {
      wn.w[static_cast<std::size_t>(i) * k + j] = upper[idx];
      wn.w[static_cast<std::size_t>(j) * k + i] = upper[idx];
      ++idx;
    }
  }
  return wn;
}

BaselineModel identity_lines_model() {
  BaselineModel model;
  model.feature_names.assign(feature_names().begin(), feature_names().end());
  for (int i = 0; i < kFeatureCount; ++i) {
    for (int j = i + 1; j < kFeatureCount; ++j) {
      model.lines.push_back({i, j, 1.0, 0.0, false});  // y = x for every pair
    }
  }
  return model;
}

}  // namespace

TEST_CASE("build_weighted on points lying on every line") {
  auto model = identity_lines_model();
  std::array<double, kFeatureCount> t;
  t.fill(0.7);  // (x, x) is on y = x for every pair
  auto wn = build_weighted(t, model);
  for (double w : wn.w) CHECK(w == 0.0);
}

TEST_CASE("build_weighted per-pair distances") {
  auto model = identity_lines_model();
  std::array<double, kFeatureCount> t{};
  t[1] = 1.0;  // (t0,t1)=(0,1) and (t1,t2)=(1,0) are off y=x by 1/sqrt(2)
  auto wn = build_weighted(t, model);
  CHECK(wn.at(0, 1) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(wn.at(0, 2) == 0.0);
  CHECK(wn.at(1, 2) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("build_weighted output is symmetric with zero diagonal") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  auto model = identity_lines_model();
  for (int trial = 0; trial < 20; ++trial) {
    std::array<double, kFeatureCount> t;
    for (auto& v : t) v = u(rng);
    auto wn = build_weighted(t, model);
    for (int i = 0; i < wn.k; ++i) {
      CHECK(wn.at(i, i) == 0.0);
      for (int j = 0; j < wn.k; ++j) CHECK(wn.at(i, j) == wn.at(j, i));
    }
  }
}

TEST_CASE("calibrate_alpha sort-and-count oracle") {
  // k=5 network: its C(5,2)=10 pair weights are exactly 1..10
  WeightedNetwork wn;
  wn.k = 5;
  wn.w.assign(25, 0.0);
  double next = 1.0;
  for (int i = 0; i < 5; ++i) {
    for (int j = i + 1; j < 5; ++j) {
      wn.w[static_cast<std::size_t>(i) * 5 + j] = next;
      wn.w[static_cast<std::size_t>(j) * 5 + i] = next;
      next += 1.0;
    }
  }
  auto thr = calibrate_alpha({wn}, 0.6);
  CHECK(thr.alpha == 5.0);  // six of ten weights are >= 5
}

TEST_CASE("calibrate_alpha edge densities") {
  auto wn = net_from_pool({0.3, 0.7, 0.1, 0.9, 0.5});
  SUBCASE("density 1 keeps every edge") {
    auto thr = calibrate_alpha({wn}, 1.0);
    CHECK(thr.alpha == 0.0);  // the untouched pairs pool zeros too
    auto bn = binarize(wn, thr);
    CHECK(bn.edge_count() == kFeatureCount * (kFeatureCount - 1) / 2);
  }
  SUBCASE("density 0 removes every edge") {
    auto thr = calibrate_alpha({wn}, 0.0);
    auto bn = binarize(wn, thr);
    CHECK(bn.edge_count() == 0);
  }
  SUBCASE("empty collection errors") {
    CHECK_THROWS_AS(calibrate_alpha({}, 0.5), std::invalid_argument);
  }
}

TEST_CASE("binarize boundary is inclusive") {
  auto wn = net_from_pool({0.1, 0.5, 0.9});
  DensityThreshold thr{0.0, 0.5};
  auto bn = binarize(wn, thr);
  CHECK(bn.edge_count() == 2);
  CHECK(bn.has_edge(0, 2));  // 0.5 survives
  CHECK(bn.has_edge(0, 3));  // 0.9 survives
  CHECK_FALSE(bn.has_edge(0, 1));
}

TEST_CASE("edge sets are nested across decreasing density") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<WeightedNetwork> nets;
  for (int t = 0; t < 10; ++t) {
    std::vector<double> pool(kFeatureCount * (kFeatureCount - 1) / 2);
    for (auto& w : pool) w = u(rng);
    nets.push_back(net_from_pool(pool));
  }
  std::vector<double> densities = {0.9, 0.7, 0.5, 0.3, 0.1};
  for (const auto& wn : nets) {
    BinaryNetwork prev;
    bool first = true;
    for (double d : densities) {
      auto bn = binarize(wn, calibrate_alpha(nets, d));
      if (!first) {
        // lower density implies a subset of the previous edge set
        for (int i = 0; i < bn.k; ++i) {
          for (int j = i + 1; j < bn.k; ++j) {
            if (bn.has_edge(i, j)) CHECK(prev.has_edge(i, j));
          }
        }
      }
      prev = bn;
      first = false;
    }
  }
}

TEST_CASE("realized mean density matches the request") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<WeightedNetwork> nets;
  for (int t = 0; t < 40; ++t) {
    std::vector<double> pool(kFeatureCount * (kFeatureCount - 1) / 2);
    for (auto& w : pool) w = u(rng);
    nets.push_back(net_from_pool(pool));
  }
  double pool_size = 40.0 * kFeatureCount * (kFeatureCount - 1) / 2;
  for (double density : {0.2, 0.5, 0.8}) {
    auto thr = calibrate_alpha(nets, density);
    long edges = 0;
    for (const auto& wn : nets) edges += binarize(wn, thr).edge_count();
    double realized = edges / pool_size;
    CHECK(std::abs(realized - density) <= 1.0 / pool_size + 1e-12);
  }
}

TEST_CASE("fraud networks have more edges at density 0.6") {
  SynthConfig cfg;
  cfg.n = 1200;
  cfg.fraud_fraction = 0.15;
  cfg.break_strength = 2.5;
  cfg.noise_sd = 0.1;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    cfg.seed = seed;
    auto ds = generate(cfg);
    auto [train_part, test_part] = split(ds, 0.8, seed);
    auto model = fit_pipeline_baseline(train_part);
    auto train_nets = build_networks(train_part, model);
    auto thr = calibrate_on_licit(train_nets, train_part.labels(), 0.6);

    auto test_nets = build_networks(test_part, model);
    double licit_edges = 0, fraud_edges = 0;
    long licit_n = 0, fraud_n = 0;
    for (std::size_t i = 0; i < test_nets.size(); ++i) {
      int e = binarize(test_nets[i], thr).edge_count();
      if (test_part.records[i].fraud) {
        fraud_edges += e;
        ++fraud_n;
      } else {
        licit_edges += e;
        ++licit_n;
      }
    }
    CHECK(fraud_edges / fraud_n > licit_edges / licit_n);
  }
}
