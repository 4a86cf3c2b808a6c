#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace parnet {

struct TrainConfig {
  double learning_rate = 0.1;
  int epochs = 200;
  int batch_size = 32;
  std::uint64_t seed = 0;
  double init_range = 0.5;

  void validate() const;
};

// Three-layer perceptron: sigmoid hidden layer, single sigmoid output.
struct MlpModel {
  int input_dim = 0;
  int hidden_dim = 10;
  std::vector<double> w_hidden;  // hidden_dim x input_dim, row major
  std::vector<double> b_hidden;  // hidden_dim
  std::vector<double> w_out;     // hidden_dim
  double b_out = 0.0;

  std::size_t parameter_count() const;
};

// Parameter-shaped gradient of the squared error (score - label)^2.
struct MlpGradient {
  std::vector<double> w_hidden;
  std::vector<double> b_hidden;
  std::vector<double> w_out;
  double b_out = 0.0;
};

MlpModel init_mlp(int input_dim, const TrainConfig& cfg);

double forward(const MlpModel& m, const std::vector<double>& x);

MlpGradient gradient(const MlpModel& m, const std::vector<double>& x, double y);

struct TrainResult {
  MlpModel model;
  double final_loss = 0.0;
};

// Mini-batch gradient descent on mean squared error, fixed shuffling
// schedule under cfg.seed.
TrainResult train(const MlpModel& m, const std::vector<std::vector<double>>& inputs,
                  const std::vector<int>& labels, const TrainConfig& cfg);

struct Prediction {
  int label = 0;
  double score = 0.0;
};

// label = 1 iff score >= threshold.
Prediction predict(const MlpModel& m, const std::vector<double>& x, double threshold);

// The training config is echoed into the file for provenance only.
void save_mlp(const MlpModel& m, const TrainConfig& cfg, const std::string& path);
MlpModel load_mlp(const std::string& path);

}  // namespace parnet
