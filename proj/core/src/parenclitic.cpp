#include "parnet/parenclitic.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace parnet {

int BinaryNetwork::edge_count() const {
  int n = 0;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      if (has_edge(i, j)) ++n;
    }
  }
  return n;
}

WeightedNetwork build_weighted(const std::array<double, kFeatureCount>& features,
                               const BaselineModel& model) {
  if (model.feature_names.size() != kFeatureCount) {
    throw std::invalid_argument("build_weighted: model feature count mismatch");
  }
  WeightedNetwork wn;
  wn.k = kFeatureCount;
  wn.w.assign(static_cast<std::size_t>(wn.k) * wn.k, 0.0);
  for (const auto& line : model.lines) {
    double d = point_line_distance(features[line.i], features[line.j], line);
    wn.w[static_cast<std::size_t>(line.i) * wn.k + line.j] = d;
    wn.w[static_cast<std::size_t>(line.j) * wn.k + line.i] = d;
  }
  return wn;
}

DensityThreshold calibrate_alpha(const std::vector<WeightedNetwork>& training_networks,
                                 double density) {
  if (training_networks.empty()) {
    throw std::invalid_argument("calibrate_alpha: empty training collection");
  }
  if (density < 0.0 || density > 1.0) {
    throw std::invalid_argument("calibrate_alpha: density must be in [0,1]");
  }
  std::vector<double> pool;
  for (const auto& wn : training_networks) {
    for (int i = 0; i < wn.k; ++i) {
      for (int j = i + 1; j < wn.k; ++j) pool.push_back(wn.at(i, j));
    }
  }
  DensityThreshold thr;
  thr.density = density;
  if (density <= 0.0) {
    thr.alpha = std::numeric_limits<double>::infinity();
    return thr;
  }
  std::sort(pool.begin(), pool.end(), std::greater<>());
  auto m = static_cast<std::size_t>(
      std::ceil(density * static_cast<double>(pool.size()) - 1e-9));
  m = std::clamp<std::size_t>(m, 1, pool.size());
  thr.alpha = pool[m - 1];
  return thr;
}

BinaryNetwork binarize(const WeightedNetwork& wn, const DensityThreshold& thr) {
  BinaryNetwork bn;
  bn.k = wn.k;
  bn.adj.assign(static_cast<std::size_t>(bn.k) * bn.k, 0);
  for (int i = 0; i < wn.k; ++i) {
    for (int j = i + 1; j < wn.k; ++j) {
      if (wn.at(i, j) >= thr.alpha) {
        bn.adj[static_cast<std::size_t>(i) * bn.k + j] = 1;
        bn.adj[static_cast<std::size_t>(j) * bn.k + i] = 1;
      }
    }
  }
  return bn;
}

void write_edge_list(const WeightedNetwork& wn, const BinaryNetwork& bn,
                     const DensityThreshold& thr, const std::string& path) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << bn.k << ' ' << format_double(thr.density) << ' '
        << format_double(thr.alpha) << '\n';
    for (int i = 0; i < bn.k; ++i) {
      for (int j = i + 1; j < bn.k; ++j) {
        if (bn.has_edge(i, j)) {
          out << i << ' ' << j << ' ' << format_double(wn.at(i, j)) << '\n';
        }
      }
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace parnet
