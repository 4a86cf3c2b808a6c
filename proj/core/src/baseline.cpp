#include "parnet/baseline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace parnet {

namespace {
constexpr int kSchemaVersion = 1;
}

const PairLine& BaselineModel::line(int i, int j) const {
  for (const auto& l : lines) {
    if (l.i == i && l.j == j) return l;
  }
  throw std::out_of_range("no line for pair (" + std::to_string(i) + "," +
                          std::to_string(j) + ")");
}

BaselineModel fit_baseline(const Dataset& normalized_training, bool licit_only) {
  std::vector<const TransactionRecord*> sel;
  for (const auto& r : normalized_training.records) {
    if (!licit_only || r.fraud == 0) sel.push_back(&r);
  }
  if (sel.size() < 2) {
    throw std::runtime_error("fit_baseline: need at least 2 licit records, have " +
                             std::to_string(sel.size()));
  }
  double n = static_cast<double>(sel.size());

  BaselineModel model;
  model.norm_stats = {};  // filled in by the caller when known
  model.feature_names.assign(feature_names().begin(), feature_names().end());

  for (int i = 0; i < kFeatureCount; ++i) {
    for (int j = i + 1; j < kFeatureCount; ++j) {
      double sx = 0, sy = 0;
      for (const auto* r : sel) {
        sx += r->features[i];
        sy += r->features[j];
      }
      double mx = sx / n, my = sy / n;
      double sxx = 0, sxy = 0;
      for (const auto* r : sel) {
        double dx = r->features[i] - mx;
        sxx += dx * dx;
        sxy += dx * (r->features[j] - my);
      }
      PairLine line;
      line.i = i;
      line.j = j;
      if (sxx / n < NormStats::kEpsVar) {
        line.degenerate = true;
        line.a = 0.0;
        line.b = my;
      } else {
        line.a = sxy / sxx;
        line.b = my - line.a * mx;
      }
      model.lines.push_back(line);
    }
  }
  return model;
}

double point_line_distance(double x_i, double x_j, const PairLine& line) {
  if (line.degenerate) return std::abs(x_j - line.b);
  return std::abs(line.a * x_i - x_j + line.b) / std::sqrt(line.a * line.a + 1.0);
}

void save_baseline(const BaselineModel& model, const std::string& path) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["feature_names"] = model.feature_names;
  j["norm_stats"]["mean"] = model.norm_stats.mean;
  j["norm_stats"]["sd"] = model.norm_stats.sd;
  j["norm_stats"]["degenerate"] = model.norm_stats.degenerate;
  auto& lines = j["lines"] = nlohmann::json::array();
  for (const auto& l : model.lines) {
    lines.push_back({{"i", l.i}, {"j", l.j}, {"a", l.a}, {"b", l.b},
                     {"degenerate", l.degenerate}});
  }
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << j.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

BaselineModel load_baseline(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": malformed baseline file: " + e.what());
  }
  if (!j.contains("schema_version") || j["schema_version"].get<int>() != kSchemaVersion) {
    throw std::runtime_error(path + ": unsupported baseline schema version");
  }
  BaselineModel model;
  model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  if (model.feature_names.size() != kFeatureCount) {
    throw std::runtime_error(path + ": baseline has " +
                             std::to_string(model.feature_names.size()) +
                             " features, expected " + std::to_string(kFeatureCount));
  }
  const auto& ns = j.at("norm_stats");
  for (int i = 0; i < kFeatureCount; ++i) {
    model.norm_stats.mean[i] = ns.at("mean").at(i).get<double>();
    model.norm_stats.sd[i] = ns.at("sd").at(i).get<double>();
    model.norm_stats.degenerate[i] = ns.at("degenerate").at(i).get<bool>();
  }
  for (const auto& lj : j.at("lines")) {
    PairLine l;
    l.i = lj.at("i").get<int>();
    l.j = lj.at("j").get<int>();
    l.a = lj.at("a").get<double>();
    l.b = lj.at("b").get<double>();
    l.degenerate = lj.at("degenerate").get<bool>();
    model.lines.push_back(l);
  }
  if (model.lines.size() != kFeatureCount * (kFeatureCount - 1) / 2) {
    throw std::runtime_error(path + ": baseline has " +
                             std::to_string(model.lines.size()) + " lines, expected " +
                             std::to_string(kFeatureCount * (kFeatureCount - 1) / 2));
  }
  return model;
}

}  // namespace parnet
