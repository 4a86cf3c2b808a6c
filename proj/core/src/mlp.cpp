#include "parnet/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace parnet {

namespace {

constexpr int kSchemaVersion = 1;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::vector<double> hidden_activations(const MlpModel& m, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != m.input_dim) {
    throw std::invalid_argument("mlp: input has " + std::to_string(x.size()) +
                                " values, model expects " + std::to_string(m.input_dim));
  }
  std::vector<double> h(m.hidden_dim);
  for (int j = 0; j < m.hidden_dim; ++j) {
    double z = m.b_hidden[j];
    const double* w = &m.w_hidden[static_cast<std::size_t>(j) * m.input_dim];
    for (int i = 0; i < m.input_dim; ++i) z += w[i] * x[i];
    h[j] = sigmoid(z);
  }
  return h;
}

}  // namespace

void TrainConfig::validate() const {
  if (learning_rate < 0.0) throw std::invalid_argument("learning_rate must be >= 0");
  if (epochs <= 0) throw std::invalid_argument("epochs must be > 0");
  if (batch_size <= 0) throw std::invalid_argument("batch_size must be > 0");
  if (init_range < 0.0) throw std::invalid_argument("init_range must be >= 0");
}

std::size_t MlpModel::parameter_count() const {
  return w_hidden.size() + b_hidden.size() + w_out.size() + 1;
}

MlpModel init_mlp(int input_dim, const TrainConfig& cfg) {
  if (input_dim < 1) throw std::invalid_argument("init_mlp: input_dim must be >= 1");
  cfg.validate();
  MlpModel m;
  m.input_dim = input_dim;
  m.hidden_dim = 10;
  m.w_hidden.resize(static_cast<std::size_t>(m.hidden_dim) * input_dim);
  m.b_hidden.resize(m.hidden_dim);
  m.w_out.resize(m.hidden_dim);

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(-cfg.init_range, cfg.init_range);
  auto draw = [&] { return cfg.init_range == 0.0 ? 0.0 : u(rng); };
  for (auto& w : m.w_hidden) w = draw();
  for (auto& b : m.b_hidden) b = draw();
  for (auto& w : m.w_out) w = draw();
  m.b_out = draw();
  return m;
}

double forward(const MlpModel& m, const std::vector<double>& x) {
  auto h = hidden_activations(m, x);
  double z = m.b_out;
  for (int j = 0; j < m.hidden_dim; ++j) z += m.w_out[j] * h[j];
  return sigmoid(z);
}

MlpGradient gradient(const MlpModel& m, const std::vector<double>& x, double y) {
  auto h = hidden_activations(m, x);
  double z = m.b_out;
  for (int j = 0; j < m.hidden_dim; ++j) z += m.w_out[j] * h[j];
  double s = sigmoid(z);

  // d/dz of (s - y)^2 with s = sigmoid(z)
  double delta_out = 2.0 * (s - y) * s * (1.0 - s);

  MlpGradient g;
  g.w_hidden.assign(m.w_hidden.size(), 0.0);
  g.b_hidden.assign(m.b_hidden.size(), 0.0);
  g.w_out.assign(m.w_out.size(), 0.0);
  g.b_out = delta_out;
  for (int j = 0; j < m.hidden_dim; ++j) {
    g.w_out[j] = delta_out * h[j];
    double delta_h = delta_out * m.w_out[j] * h[j] * (1.0 - h[j]);
    g.b_hidden[j] = delta_h;
    double* gw = &g.w_hidden[static_cast<std::size_t>(j) * m.input_dim];
    for (int i = 0; i < m.input_dim; ++i) gw[i] = delta_h * x[i];
  }
  return g;
}

TrainResult train(const MlpModel& m, const std::vector<std::vector<double>>& inputs,
                  const std::vector<int>& labels, const TrainConfig& cfg) {
  cfg.validate();
  if (inputs.empty()) throw std::invalid_argument("train: empty data");
  if (inputs.size() != labels.size()) {
    throw std::invalid_argument("train: inputs/labels length mismatch");
  }
  for (int y : labels) {
    if (y != 0 && y != 1) throw std::invalid_argument("train: labels must be 0/1");
  }

  MlpModel model = m;
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(inputs.size());
  std::iota(order.begin(), order.end(), 0);

  double loss = 0.0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      double inv = 1.0 / static_cast<double>(end - start);

      MlpGradient acc;
      acc.w_hidden.assign(model.w_hidden.size(), 0.0);
      acc.b_hidden.assign(model.b_hidden.size(), 0.0);
      acc.w_out.assign(model.w_out.size(), 0.0);
      for (std::size_t p = start; p < end; ++p) {
        auto g = gradient(model, inputs[order[p]], labels[order[p]]);
        for (std::size_t i = 0; i < acc.w_hidden.size(); ++i) acc.w_hidden[i] += g.w_hidden[i];
        for (std::size_t i = 0; i < acc.b_hidden.size(); ++i) acc.b_hidden[i] += g.b_hidden[i];
        for (std::size_t i = 0; i < acc.w_out.size(); ++i) acc.w_out[i] += g.w_out[i];
        acc.b_out += g.b_out;
      }
      double step = cfg.learning_rate * inv;
      for (std::size_t i = 0; i < model.w_hidden.size(); ++i)
        model.w_hidden[i] -= step * acc.w_hidden[i];
      for (std::size_t i = 0; i < model.b_hidden.size(); ++i)
        model.b_hidden[i] -= step * acc.b_hidden[i];
      for (std::size_t i = 0; i < model.w_out.size(); ++i)
        model.w_out[i] -= step * acc.w_out[i];
      model.b_out -= step * acc.b_out;
    }

    loss = 0.0;
    for (std::size_t p = 0; p < inputs.size(); ++p) {
      double e = forward(model, inputs[p]) - labels[p];
      loss += e * e;
    }
    loss /= static_cast<double>(inputs.size());
    if (!std::isfinite(loss)) {
      throw std::runtime_error("train: loss is not finite at epoch " +
                               std::to_string(epoch));
    }
  }
  return {std::move(model), loss};
}

Prediction predict(const MlpModel& m, const std::vector<double>& x, double threshold) {
  if (threshold < 0.0 || threshold > 1.0) {
    throw std::invalid_argument("predict: threshold must be in [0,1]");
  }
  Prediction p;
  p.score = forward(m, x);
  p.label = p.score >= threshold ? 1 : 0;
  return p;
}

void save_mlp(const MlpModel& m, const TrainConfig& cfg, const std::string& path) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["input_dim"] = m.input_dim;
  j["hidden_dim"] = m.hidden_dim;
  j["w_hidden"] = m.w_hidden;
  j["b_hidden"] = m.b_hidden;
  j["w_out"] = m.w_out;
  j["b_out"] = m.b_out;
  j["train_config"] = {{"learning_rate", cfg.learning_rate},
                       {"epochs", cfg.epochs},
                       {"batch_size", cfg.batch_size},
                       {"seed", cfg.seed},
                       {"init_range", cfg.init_range}};
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << j.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

MlpModel load_mlp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": malformed model file: " + e.what());
  }
  if (!j.contains("schema_version") || j["schema_version"].get<int>() != kSchemaVersion) {
    throw std::runtime_error(path + ": unsupported model schema version");
  }
  MlpModel m;
  m.input_dim = j.at("input_dim").get<int>();
  m.hidden_dim = j.at("hidden_dim").get<int>();
  m.w_hidden = j.at("w_hidden").get<std::vector<double>>();
  m.b_hidden = j.at("b_hidden").get<std::vector<double>>();
  m.w_out = j.at("w_out").get<std::vector<double>>();
  m.b_out = j.at("b_out").get<double>();
  if (m.w_hidden.size() != static_cast<std::size_t>(m.hidden_dim) * m.input_dim ||
      m.b_hidden.size() != static_cast<std::size_t>(m.hidden_dim) ||
      m.w_out.size() != static_cast<std::size_t>(m.hidden_dim)) {
    throw std::runtime_error(path + ": inconsistent model dimensions");
  }
  return m;
}

}  // namespace parnet
