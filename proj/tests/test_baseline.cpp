#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <doctest.h>

#include "parnet/baseline.hpp"
#include "parnet/synth.hpp"

using namespace parnet;

namespace {

Dataset from_pairs(int i, int j, const std::vector<std::pair<double, double>>& pts) {
  Dataset ds;
  for (const auto& [x, y] : pts) {
    TransactionRecord r;
    r.features[i] = x;
    r.features[j] = y;
    ds.records.push_back(r);
  }
  return ds;
}

// Brute-force oracle: minimum distance from p to sampled points of the line.
double grid_min_distance(double a, double b, double px, double py) {
  double best = 1e300;
  for (double x = -200.0; x <= 200.0; x += 1e-3) {
    double dx = x - px, dy = a * x + b - py;
    best = std::min(best, std::sqrt(dx * dx + dy * dy));
  }
  return best;
}

}  // namespace

TEST_CASE("fit recovers an exact linear relation") {
  auto ds = from_pairs(0, 1, {{0, 1}, {1, 3}, {2, 5}, {3, 7}});
  auto model = fit_baseline(ds, false);
  const auto& line = model.line(0, 1);
  CHECK(line.a == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(line.b == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& r : ds.records) {
    CHECK(std::abs(line.a * r.features[0] + line.b - r.features[1]) < 1e-9);
  }
}

TEST_CASE("constant predictor gives a degenerate line") {
  auto ds = from_pairs(0, 1, {{5, 1}, {5, 2}, {5, 3}});
  auto model = fit_baseline(ds, false);
  const auto& line = model.line(0, 1);
  CHECK(line.degenerate);
  CHECK(line.a == 0.0);
  CHECK(line.b == doctest::Approx(2.0));
}

TEST_CASE("closed-form OLS on three points") {
  // (0,0),(1,1),(2,2.5): Sxy/Sxx = 2.5/2, b = ybar - a*xbar = 7/6 - 1.25
  auto ds = from_pairs(0, 1, {{0, 0}, {1, 1}, {2, 2.5}});
  auto model = fit_baseline(ds, false);
  const auto& line = model.line(0, 1);
  CHECK(line.a == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(line.b == doctest::Approx(7.0 / 6.0 - 1.25).epsilon(1e-9));
}

TEST_CASE("fit covers every unordered pair exactly once") {
  SynthConfig cfg;
  cfg.n = 100;
  cfg.seed = 9;
  auto model = fit_baseline(generate(cfg), true);
  REQUIRE(model.lines.size() == kFeatureCount * (kFeatureCount - 1) / 2);
  for (std::size_t idx = 0; idx < model.lines.size(); ++idx) {
    CHECK(model.lines[idx].i < model.lines[idx].j);
  }
}

TEST_CASE("OLS residual sum is a local minimum") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  auto ds = from_pairs(0, 1, {});
  for (int i = 0; i < 50; ++i) {
    TransactionRecord r;
    double x = g(rng);
    r.features[0] = x;
    r.features[1] = 0.7 * x - 0.3 + 0.2 * g(rng);
    ds.records.push_back(r);
  }
  auto model = fit_baseline(ds, false);
  const auto& line = model.line(0, 1);
  auto ssr = [&](double a, double b) {
    double s = 0;
    for (const auto& r : ds.records) {
      double e = a * r.features[0] + b - r.features[1];
      s += e * e;
    }
    return s;
  };
  double base = ssr(line.a, line.b);
  for (double da : {-1e-3, 0.0, 1e-3}) {
    for (double db : {-1e-3, 0.0, 1e-3}) {
      CHECK(ssr(line.a + da, line.b + db) >= base - 1e-12);
    }
  }
}

TEST_CASE("point_line_distance canonical cases") {
  PairLine y_eq_x{0, 1, 1.0, 0.0, false};
  CHECK(point_line_distance(0, 0, y_eq_x) == 0.0);

  PairLine y_eq_0{0, 1, 0.0, 0.0, false};
  CHECK(point_line_distance(3, 4, y_eq_0) == doctest::Approx(4.0));

  PairLine steep{0, 1, 2.0, 1.0, false};
  CHECK(point_line_distance(1, 0, steep) == doctest::Approx(3.0 / std::sqrt(5.0)));
}

TEST_CASE("point_line_distance matches brute-force minimization") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 25; ++trial) {
    PairLine line{0, 1, u(rng), u(rng), false};
    double px = u(rng), py = u(rng);
    double got = point_line_distance(px, py, line);
    CHECK(got == doctest::Approx(grid_min_distance(line.a, line.b, px, py)).epsilon(1e-4));
  }
}

TEST_CASE("distance invariant under translation along the line") {
  PairLine line{0, 1, -1.7, 0.4, false};
  double px = 2.0, py = -1.0;
  double d0 = point_line_distance(px, py, line);
  // direction (1, a) is parallel to the line
  for (double t : {-5.0, -0.3, 1.0, 12.0}) {
    double d = point_line_distance(px + t, py + t * line.a, line);
    CHECK(std::abs(d - d0) < 1e-9);
  }
}

TEST_CASE("degenerate line distance is vertical") {
  PairLine line{0, 1, 0.0, 2.5, true};
  CHECK(point_line_distance(100.0, 4.0, line) == doctest::Approx(1.5));
}

TEST_CASE("baseline save/load round trip") {
  SynthConfig cfg;
  cfg.n = 80;
  cfg.seed = 3;
  auto ds = generate(cfg);
  auto stats = fit_norm_stats(ds, true);
  auto model = fit_baseline(normalize(ds, stats), true);
  model.norm_stats = stats;

  auto path = (std::filesystem::temp_directory_path() / "parnet_baseline.json").string();
  save_baseline(model, path);
  auto loaded = load_baseline(path);
  REQUIRE(loaded.lines.size() == model.lines.size());
  for (std::size_t i = 0; i < model.lines.size(); ++i) {
    CHECK(loaded.lines[i].a == model.lines[i].a);
    CHECK(loaded.lines[i].b == model.lines[i].b);
    CHECK(loaded.lines[i].degenerate == model.lines[i].degenerate);
  }
  for (int i = 0; i < kFeatureCount; ++i) {
    CHECK(loaded.norm_stats.mean[i] == model.norm_stats.mean[i]);
    CHECK(loaded.norm_stats.sd[i] == model.norm_stats.sd[i]);
  }
}

TEST_CASE("load rejects truncated or mismatched files") {
  namespace fs = std::filesystem;
  auto path = (fs::temp_directory_path() / "parnet_trunc.json").string();
  {
    std::ofstream out(path);
    out << "{\"schema_version\": 1, \"feature_na";
  }
  CHECK_THROWS_AS(load_baseline(path), std::runtime_error);

  {
    std::ofstream out(path);
    out << R"({"schema_version": 1, "feature_names": ["a","b"],)"
        << R"( "norm_stats": {"mean": [], "sd": [], "degenerate": []}, "lines": []})";
  }
  CHECK_THROWS_WITH_AS(load_baseline(path), doctest::Contains("features"),
                       std::runtime_error);
}

TEST_CASE("fit on noisy planted lines recovers the slopes") {
  // slope recovered within 3 standard errors across seeds
  std::normal_distribution<double> g(0.0, 1.0);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    std::mt19937_64 rng(seed);
    Dataset ds;
    const double a = 1.4, b = -0.5, noise = 0.3;
    const int n = 400;
    for (int i = 0; i < n; ++i) {
      TransactionRecord r;
      double x = g(rng);
      r.features[0] = x;
      r.features[1] = a * x + b + noise * g(rng);
      ds.records.push_back(r);
    }
    auto model = fit_baseline(ds, false);
    const auto& line = model.line(0, 1);
    double sxx = 0, mx = 0;
    for (const auto& r : ds.records) mx += r.features[0];
    mx /= n;
    for (const auto& r : ds.records) {
      sxx += (r.features[0] - mx) * (r.features[0] - mx);
    }
    double se = noise / std::sqrt(sxx);
    CHECK(std::abs(line.a - a) < 3 * se);
  }
}
