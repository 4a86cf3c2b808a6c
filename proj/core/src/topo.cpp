#include "parnet/topo.hpp"

#include <cmath>
#include <map>
#include <queue>
#include <stdexcept>
#include <vector>

namespace parnet {

const std::array<std::string, kTopoCount>& topo_names() {
  static const std::array<std::string, kTopoCount> names = {
      "max_degree", "degree_entropy", "assortativity",      "clustering",
      "geodesic",   "efficiency",     "information_content"};
  return names;
}

std::array<double, kTopoCount> TopoFeatures::as_array() const {
  return {static_cast<double>(max_degree),
          degree_entropy,
          assortativity,
          clustering,
          geodesic,
          efficiency,
          information_content};
}

namespace {

std::vector<int> degrees(const BinaryNetwork& g) {
  std::vector<int> deg(g.k, 0);
  for (int i = 0; i < g.k; ++i) {
    for (int j = 0; j < g.k; ++j) {
      if (i != j && g.has_edge(i, j)) ++deg[i];
    }
  }
  return deg;
}

// Single-source shortest paths by BFS; -1 for unreachable.
std::vector<int> bfs_distances(const BinaryNetwork& g, int src) {
  std::vector<int> dist(g.k, -1);
  dist[src] = 0;
  std::queue<int> q;
  q.push(src);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v = 0; v < g.k; ++v) {
      if (v != u && g.has_edge(u, v) && dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
    }
  }
  return dist;
}

double binary_entropy_bits(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

}  // namespace

int max_degree(const BinaryNetwork& g) {
  int m = 0;
  for (int d : degrees(g)) m = std::max(m, d);
  return m;
}

double degree_entropy(const BinaryNetwork& g) {
  if (g.k == 0) return 0.0;
  std::map<int, int> hist;
  for (int d : degrees(g)) ++hist[d];
  double e = 0.0;
  for (const auto& [d, c] : hist) {
    double p = static_cast<double>(c) / g.k;
    e -= p * std::log(p);
  }
  return e;
}

double assortativity(const BinaryNetwork& g) {
  auto deg = degrees(g);
  // Each edge contributes both orientations, so both marginals coincide.
  double sx = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int i = 0; i < g.k; ++i) {
    for (int j = 0; j < g.k; ++j) {
      if (i != j && g.has_edge(i, j)) {
        sx += deg[i];
        sxx += static_cast<double>(deg[i]) * deg[i];
        sxy += static_cast<double>(deg[i]) * deg[j];
        ++m;
      }
    }
  }
  if (m == 0) return 0.0;
  double mean = sx / m;
  double var = sxx / m - mean * mean;
  if (var < 1e-12) return 0.0;
  double cov = sxy / m - mean * mean;
  return cov / var;
}

double clustering(const BinaryNetwork& g) {
  auto deg = degrees(g);
  long triplets = 0;
  for (int d : deg) triplets += static_cast<long>(d) * (d - 1) / 2;
  if (triplets == 0) return 0.0;
  long triangles = 0;
  for (int i = 0; i < g.k; ++i) {
    for (int j = i + 1; j < g.k; ++j) {
      if (!g.has_edge(i, j)) continue;
      for (int l = j + 1; l < g.k; ++l) {
        if (g.has_edge(i, l) && g.has_edge(j, l)) ++triangles;
      }
    }
  }
  return 3.0 * triangles / static_cast<double>(triplets);
}

double geodesic(const BinaryNetwork& g) {
  double total = 0.0;
  long pairs = 0;
  for (int i = 0; i < g.k; ++i) {
    auto dist = bfs_distances(g, i);
    for (int j = i + 1; j < g.k; ++j) {
      if (dist[j] > 0) {
        total += dist[j];
        ++pairs;
      }
    }
  }
  return pairs == 0 ? 0.0 : total / pairs;
}

double efficiency(const BinaryNetwork& g) {
  if (g.k < 2) return 0.0;
  double total = 0.0;
  for (int i = 0; i < g.k; ++i) {
    auto dist = bfs_distances(g, i);
    for (int j = i + 1; j < g.k; ++j) {
      if (dist[j] > 0) total += 1.0 / dist[j];
    }
  }
  return 2.0 * total / (static_cast<double>(g.k) * (g.k - 1));
}

double information_content(const BinaryNetwork& g) {
  if (g.k < 2) throw std::invalid_argument("information_content: need k >= 2");
  int k = g.k;
  std::vector<std::vector<std::uint8_t>> rows(k, std::vector<std::uint8_t>(k, 0));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) rows[i][j] = (i != j && g.has_edge(i, j)) ? 1 : 0;
  }

  double total = 0.0;
  while (k > 1) {
    int best_u = 0, best_v = 1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int u = 0; u < k; ++u) {
      for (int v = u + 1; v < k; ++v) {
        int L = k - 2;
        int mismatch = 0;
        for (int p = 0; p < k; ++p) {
          if (p != u && p != v && rows[u][p] != rows[v][p]) ++mismatch;
        }
        double cost =
            L == 0 ? 0.0 : L * binary_entropy_bits(static_cast<double>(mismatch) / L);
        if (cost < best_cost) {
          best_cost = cost;
          best_u = u;
          best_v = v;
        }
      }
    }
    total += best_cost;

    // Merge best_v into best_u: elementwise OR, drop position best_v.
    for (int p = 0; p < k; ++p) {
      rows[best_u][p] = rows[best_u][p] | rows[best_v][p];
      rows[p][best_u] = rows[p][best_u] | rows[p][best_v];
    }
    rows[best_u][best_u] = 0;
    rows.erase(rows.begin() + best_v);
    for (auto& row : rows) row.erase(row.begin() + best_v);
    --k;
  }
  return total;
}

TopoFeatures extract_all(const BinaryNetwork& g) {
  TopoFeatures f;
  f.max_degree = max_degree(g);
  f.degree_entropy = degree_entropy(g);
  f.assortativity = assortativity(g);
  f.clustering = clustering(g);
  f.geodesic = geodesic(g);
  f.efficiency = efficiency(g);
  f.information_content = information_content(g);
  return f;
}

}  // namespace parnet
