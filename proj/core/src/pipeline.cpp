#include "parnet/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace parnet {

FeatureSet feature_set_from_string(const std::string& s) {
  if (s == "raw") return FeatureSet::kRaw;
  if (s == "parenclitic") return FeatureSet::kParenclitic;
  if (s == "combined") return FeatureSet::kCombined;
  throw std::invalid_argument("unknown feature set '" + s +
                              "' (expected raw, parenclitic or combined)");
}

std::string to_string(FeatureSet set) {
  switch (set) {
    case FeatureSet::kRaw: return "raw";
    case FeatureSet::kParenclitic: return "parenclitic";
    case FeatureSet::kCombined: return "combined";
  }
  return "?";
}

BaselineModel fit_pipeline_baseline(const Dataset& raw_training) {
  NormStats stats = fit_norm_stats(raw_training, /*licit_only=*/true);
  Dataset normed = normalize(raw_training, stats);
  BaselineModel model = fit_baseline(normed, /*licit_only=*/true);
  model.norm_stats = stats;
  return model;
}

std::vector<WeightedNetwork> build_networks(const Dataset& raw_ds,
                                            const BaselineModel& model) {
  Dataset normed = normalize(raw_ds, model.norm_stats);
  std::vector<WeightedNetwork> nets;
  nets.reserve(normed.records.size());
  for (const auto& r : normed.records) nets.push_back(build_weighted(r.features, model));
  return nets;
}

DensityThreshold calibrate_on_licit(const std::vector<WeightedNetwork>& nets,
                                    const std::vector<int>& labels, double density) {
  if (nets.size() != labels.size()) {
    throw std::invalid_argument("calibrate_on_licit: nets/labels length mismatch");
  }
  std::vector<WeightedNetwork> licit;
  for (std::size_t i = 0; i < nets.size(); ++i) {
    if (labels[i] == 0) licit.push_back(nets[i]);
  }
  return calibrate_alpha(licit, density);
}

FeatureMatrix build_features(const Dataset& raw_ds, const BaselineModel& model,
                             const DensityThreshold& thr, FeatureSet set) {
  FeatureMatrix fm;
  bool want_raw = set != FeatureSet::kParenclitic;
  bool want_topo = set != FeatureSet::kRaw;

  if (want_raw) {
    fm.names.assign(feature_names().begin(), feature_names().end());
  }
  if (want_topo) {
    fm.names.insert(fm.names.end(), topo_names().begin(), topo_names().end());
  }

  Dataset normed = normalize(raw_ds, model.norm_stats);
  for (std::size_t idx = 0; idx < raw_ds.records.size(); ++idx) {
    std::vector<double> row;
    row.reserve(fm.names.size());
    if (want_raw) {
      const auto& f = normed.records[idx].features;
      row.insert(row.end(), f.begin(), f.end());
    }
    if (want_topo) {
      auto wn = build_weighted(normed.records[idx].features, model);
      auto topo = extract_all(binarize(wn, thr)).as_array();
      row.insert(row.end(), topo.begin(), topo.end());
    }
    fm.rows.push_back(std::move(row));
    fm.labels.push_back(raw_ds.records[idx].fraud);
  }
  return fm;
}

void write_features_csv(const FeatureMatrix& fm, const std::string& path) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    for (const auto& n : fm.names) out << n << ',';
    out << "fraud\n";
    for (std::size_t r = 0; r < fm.rows.size(); ++r) {
      for (double v : fm.rows[r]) out << format_double(v) << ',';
      out << fm.labels[r] << '\n';
    }
  }
  std::filesystem::rename(tmp, path);
}

FeatureMatrix read_features_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");

  FeatureMatrix fm;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      fm.names.push_back(cell);
    }
  }
  if (fm.names.empty() || fm.names.back() != "fraud") {
    throw std::runtime_error(path + ": last column must be 'fraud'");
  }
  fm.names.pop_back();

  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error(path + ": row " + std::to_string(row_no) +
                                 ": cannot parse '" + cell + "'");
      }
    }
    if (vals.size() != fm.names.size() + 1) {
      throw std::runtime_error(path + ": row " + std::to_string(row_no) +
                               ": expected " + std::to_string(fm.names.size() + 1) +
                               " cells, got " + std::to_string(vals.size()));
    }
    fm.labels.push_back(static_cast<int>(vals.back()));
    vals.pop_back();
    fm.rows.push_back(std::move(vals));
  }
  return fm;
}

}  // namespace parnet
