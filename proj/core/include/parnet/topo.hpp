#pragma once

#include <array>
#include <string>

#include "parnet/parenclitic.hpp"

namespace parnet {

inline constexpr int kTopoCount = 7;

const std::array<std::string, kTopoCount>& topo_names();

struct TopoFeatures {
  int max_degree = 0;
  double degree_entropy = 0.0;   // nats
  double assortativity = 0.0;    // 0 when a degree marginal has zero variance
  double clustering = 0.0;       // global transitivity
  double geodesic = 0.0;         // mean over mutually reachable pairs
  double efficiency = 0.0;
  double information_content = 0.0;  // bits

  std::array<double, kTopoCount> as_array() const;
};

int max_degree(const BinaryNetwork& g);
double degree_entropy(const BinaryNetwork& g);
double assortativity(const BinaryNetwork& g);
double clustering(const BinaryNetwork& g);
double geodesic(const BinaryNetwork& g);
double efficiency(const BinaryNetwork& g);

// Greedy node-merging cost. Repeatedly merges the pair (u,v) minimizing
// L * H(p), where L counts the positions outside {u,v}, p is the fraction
// of those positions where the adjacency rows of u and v disagree, and H is
// binary entropy in bits. Merged rows combine by elementwise OR; ties go to
// the lexicographically smallest pair. Returns the accumulated cost.
double information_content(const BinaryNetwork& g);

TopoFeatures extract_all(const BinaryNetwork& g);

}  // namespace parnet
