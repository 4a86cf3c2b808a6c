#pragma once

#include <string>
#include <vector>

#include "parnet/dataset.hpp"

namespace parnet {

// Least-squares line x_j = a*x_i + b for one unordered feature pair, fitted
// on licit records. A predictor with (population) variance below eps_var
// gives a degenerate line: a = 0, b = mean of x_j.
struct PairLine {
  int i = 0;
  int j = 0;
  double a = 0.0;
  double b = 0.0;
  bool degenerate = false;
};

struct BaselineModel {
  std::vector<PairLine> lines;  // all C(k,2) pairs, ascending (i,j)
  NormStats norm_stats;
  std::vector<std::string> feature_names;

  const PairLine& line(int i, int j) const;
};

BaselineModel fit_baseline(const Dataset& normalized_training, bool licit_only);

// Euclidean distance from (x_i, x_j) to the line; |x_j - b| when degenerate.
double point_line_distance(double x_i, double x_j, const PairLine& line);

void save_baseline(const BaselineModel& model, const std::string& path);
BaselineModel load_baseline(const std::string& path);

}  // namespace parnet
