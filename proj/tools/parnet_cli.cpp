// Command-line driver: generate | fit | features | train | sweep | roc | score.
// Every command is a deterministic function of its input files, flags and
// seed; artifacts land in --workdir under fixed names so commands compose.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "parnet/eval.hpp"
#include "parnet/pipeline.hpp"
#include "parnet/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace parnet;

namespace {

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  json j;
  in >> j;
  if (!j.is_object()) throw std::runtime_error(path + ": config must be a JSON object");
  return j;
}

// Flags win over config values; config wins over defaults.
template <typename T>
void apply_config(const json& cfg, const CLI::Option* opt, const char* key, T& value) {
  if (opt->count() == 0 && cfg.contains(key)) value = cfg.at(key).get<T>();
}

std::string workdir_file(const std::string& workdir, const std::string& name) {
  return (fs::path(workdir) / name).string();
}

void save_threshold(const DensityThreshold& thr, const std::string& path) {
  json j;
  j["density"] = thr.density;
  if (std::isfinite(thr.alpha)) {
    j["alpha"] = thr.alpha;
  } else {
    j["alpha"] = nullptr;  // density 0: no edge survives
  }
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << j.dump(2) << '\n';
  }
  fs::rename(tmp, path);
}

DensityThreshold load_threshold(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path + " (run 'features' first)");
  json j;
  in >> j;
  DensityThreshold thr;
  thr.density = j.at("density").get<double>();
  thr.alpha = j.at("alpha").is_null() ? std::numeric_limits<double>::infinity()
                                      : j.at("alpha").get<double>();
  return thr;
}

void write_roc_csv(const std::optional<RocCurve>& curve, const std::string& path) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << "threshold,fpr,tpr\n";
    if (!curve) {
      out << "# undefined: stratum has a single class\n";
    } else {
      for (std::size_t i = 0; i < curve->fpr.size(); ++i) {
        out << format_double(curve->thresholds[i]) << ',' << format_double(curve->fpr[i])
            << ',' << format_double(curve->tpr[i]) << '\n';
      }
    }
  }
  fs::rename(tmp, path);
}

int expected_dim(FeatureSet set) {
  switch (set) {
    case FeatureSet::kRaw: return kFeatureCount;
    case FeatureSet::kParenclitic: return kTopoCount;
    case FeatureSet::kCombined: return kFeatureCount + kTopoCount;
  }
  return 0;
}

struct PipelineOpts {
  std::string workdir = ".";
  std::string dataset;  // defaults to workdir/dataset.csv
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  double density = 0.6;
  TrainConfig train_cfg;

  std::string dataset_path() const {
    return dataset.empty() ? workdir_file(workdir, "dataset.csv") : dataset;
  }
};

// Trained models and balanced-test scores for one feature set at one density.
struct FitScores {
  std::vector<double> scores;
  std::vector<int> labels;
  std::vector<double> sizes;  // raw transaction sizes of the scored records
};

FitScores score_feature_set(const Dataset& train_part, const Dataset& test_part,
                            const BaselineModel& model, const DensityThreshold& thr,
                            FeatureSet set, const PipelineOpts& opt, bool balanced_eval,
                            MlpModel* trained_out = nullptr) {
  auto train_fm = build_features(train_part, model, thr, set);
  auto test_fm = build_features(test_part, model, thr, set);

  auto bal = balance_indices(train_fm.labels, opt.seed);
  std::vector<std::vector<double>> bx;
  std::vector<int> by;
  for (auto i : bal) {
    bx.push_back(train_fm.rows[i]);
    by.push_back(train_fm.labels[i]);
  }
  auto trained = train(init_mlp(static_cast<int>(train_fm.names.size()), opt.train_cfg),
                       bx, by, opt.train_cfg);
  if (trained_out) *trained_out = trained.model;

  std::vector<std::size_t> eval_idx;
  if (balanced_eval) {
    eval_idx = balance_indices(test_fm.labels, opt.seed + 1);
  } else {
    eval_idx.resize(test_fm.labels.size());
    std::iota(eval_idx.begin(), eval_idx.end(), 0);
  }
  FitScores out;
  for (auto i : eval_idx) {
    out.scores.push_back(forward(trained.model, test_fm.rows[i]));
    out.labels.push_back(test_fm.labels[i]);
    out.sizes.push_back(test_part.records[i].features[kTransactionSize]);
  }
  return out;
}

int cmd_generate(const SynthConfig& cfg, const std::string& out_path) {
  Dataset ds = generate(cfg);
  write_csv(ds, out_path);
  long fraud = std::count_if(ds.records.begin(), ds.records.end(),
                             [](const auto& r) { return r.fraud == 1; });
  std::cout << "wrote " << out_path << ": " << ds.size() << " records ("
            << ds.size() - fraud << " licit, " << fraud << " fraud)\n";
  return 0;
}

int cmd_fit(const PipelineOpts& opt) {
  Dataset ds = parse_csv(opt.dataset_path());
  auto [train_part, test_part] = split(ds, opt.train_fraction, opt.seed);
  (void)test_part;
  BaselineModel model = fit_pipeline_baseline(train_part);
  std::string out = workdir_file(opt.workdir, "baseline.json");
  save_baseline(model, out);
  std::cout << "wrote " << out << ": " << model.lines.size() << " pair lines fitted on "
            << train_part.size() << " training records\n";
  return 0;
}

int cmd_features(const PipelineOpts& opt, const std::vector<std::string>& sets) {
  Dataset ds = parse_csv(opt.dataset_path());
  BaselineModel model = load_baseline(workdir_file(opt.workdir, "baseline.json"));
  auto idx = split_indices(ds.labels(), opt.train_fraction, opt.seed);

  Dataset train_part;
  for (auto i : idx.train) train_part.records.push_back(ds.records[i]);
  auto train_nets = build_networks(train_part, model);
  auto thr = calibrate_on_licit(train_nets, train_part.labels(), opt.density);
  save_threshold(thr, workdir_file(opt.workdir, "threshold.json"));

  for (const auto& name : sets) {
    FeatureSet set = feature_set_from_string(name);
    auto fm = build_features(ds, model, thr, set);
    std::string out = workdir_file(opt.workdir, "features_" + name + ".csv");
    write_features_csv(fm, out);
    std::cout << "wrote " << out << ": " << fm.rows.size() << " rows x "
              << fm.names.size() << " features (alpha=" << format_double(thr.alpha)
              << ")\n";
  }
  return 0;
}

int cmd_train(const PipelineOpts& opt, const std::string& set_name) {
  FeatureSet set = feature_set_from_string(set_name);
  std::string feat_path = workdir_file(opt.workdir, "features_" + set_name + ".csv");
  auto fm = read_features_csv(feat_path);
  if (static_cast<int>(fm.names.size()) != expected_dim(set)) {
    throw std::runtime_error(feat_path + ": has " + std::to_string(fm.names.size()) +
                             " feature columns, selector '" + set_name + "' expects " +
                             std::to_string(expected_dim(set)));
  }
  auto idx = split_indices(fm.labels, opt.train_fraction, opt.seed);

  std::vector<int> train_labels;
  for (auto i : idx.train) train_labels.push_back(fm.labels[i]);
  auto bal = balance_indices(train_labels, opt.seed);
  std::vector<std::vector<double>> bx;
  std::vector<int> by;
  for (auto b : bal) {
    bx.push_back(fm.rows[idx.train[b]]);
    by.push_back(fm.labels[idx.train[b]]);
  }
  auto trained =
      train(init_mlp(static_cast<int>(fm.names.size()), opt.train_cfg), bx, by,
            opt.train_cfg);

  std::string out = workdir_file(opt.workdir, "model_" + set_name + ".json");
  save_mlp(trained.model, opt.train_cfg, out);

  auto eval_on = [&](const std::vector<std::size_t>& rows, std::uint64_t bseed) {
    std::vector<int> labels;
    for (auto i : rows) labels.push_back(fm.labels[i]);
    auto b = balance_indices(labels, bseed);
    std::vector<double> scores;
    std::vector<int> lab;
    for (auto i : b) {
      scores.push_back(forward(trained.model, fm.rows[rows[i]]));
      lab.push_back(fm.labels[rows[i]]);
    }
    return confusion(scores, lab, 0.5).error_rate();
  };
  std::cout << "wrote " << out << ": final loss " << trained.final_loss
            << ", balanced train error " << eval_on(idx.train, opt.seed)
            << ", balanced test error " << eval_on(idx.test, opt.seed + 1) << "\n";
  return 0;
}

int cmd_sweep(const PipelineOpts& opt, const std::vector<double>& densities) {
  Dataset ds = parse_csv(opt.dataset_path());
  auto [train_part, test_part] = split(ds, opt.train_fraction, opt.seed);

  SweepConfig scfg;
  scfg.train = opt.train_cfg;
  scfg.seed = opt.seed;
  auto result = density_sweep(train_part, test_part, densities, scfg);

  std::string out = workdir_file(opt.workdir, "sweep.csv");
  std::string tmp = out + ".tmp";
  {
    std::ofstream f(tmp);
    if (!f) throw std::runtime_error("cannot write " + tmp);
    f << "density,error_raw,error_parenclitic,error_combined\n";
    for (std::size_t i = 0; i < result.densities.size(); ++i) {
      f << format_double(result.densities[i]) << ',' << format_double(result.error_raw[i])
        << ',' << format_double(result.error_parenclitic[i]) << ','
        << format_double(result.error_combined[i]) << '\n';
    }
  }
  fs::rename(tmp, out);
  std::cout << "wrote " << out << ": best combined density "
            << format_double(result.best_density) << "\n";
  return 0;
}

int cmd_roc(const PipelineOpts& opt, const std::vector<double>& size_cutoffs,
            bool balanced_eval) {
  Dataset ds = parse_csv(opt.dataset_path());
  auto [train_part, test_part] = split(ds, opt.train_fraction, opt.seed);

  BaselineModel model = fit_pipeline_baseline(train_part);
  auto train_nets = build_networks(train_part, model);
  auto thr = calibrate_on_licit(train_nets, train_part.labels(), opt.density);

  for (FeatureSet set :
       {FeatureSet::kRaw, FeatureSet::kParenclitic, FeatureSet::kCombined}) {
    auto fit = score_feature_set(train_part, test_part, model, thr, set, opt,
                                 balanced_eval);
    std::string out = workdir_file(opt.workdir, "roc_" + to_string(set) + ".csv");
    bool has_pos = std::count(fit.labels.begin(), fit.labels.end(), 1) > 0;
    bool has_neg = std::count(fit.labels.begin(), fit.labels.end(), 0) > 0;
    std::optional<RocCurve> curve;
    if (has_pos && has_neg) curve = roc(fit.scores, fit.labels);
    write_roc_csv(curve, out);
    std::cout << "wrote " << out;
    if (curve) std::cout << ": AUC " << format_double(curve->auc);
    std::cout << "\n";

    if (set == FeatureSet::kCombined && !size_cutoffs.empty()) {
      auto strata = stratify_by_size(fit.sizes, fit.scores, fit.labels, size_cutoffs);
      for (std::size_t c = 0; c < size_cutoffs.size(); ++c) {
        std::string spath = workdir_file(
            opt.workdir, "roc_combined_above_" + format_double(size_cutoffs[c]) + ".csv");
        write_roc_csv(strata[c], spath);
        std::cout << "wrote " << spath;
        if (strata[c]) {
          std::cout << ": AUC " << format_double(strata[c]->auc);
        } else {
          std::cout << ": undefined (single-class stratum)";
        }
        std::cout << "\n";
      }
    }
  }
  return 0;
}

int cmd_score(const PipelineOpts& opt, const std::string& set_name,
              const std::string& input, const std::string& output) {
  FeatureSet set = feature_set_from_string(set_name);
  BaselineModel model = load_baseline(workdir_file(opt.workdir, "baseline.json"));
  DensityThreshold thr = load_threshold(workdir_file(opt.workdir, "threshold.json"));
  MlpModel mlp = load_mlp(workdir_file(opt.workdir, "model_" + set_name + ".json"));
  if (mlp.input_dim != expected_dim(set)) {
    throw std::runtime_error("model input dim " + std::to_string(mlp.input_dim) +
                             " does not match selector '" + set_name + "'");
  }

  Dataset ds = parse_csv(input);
  auto fm = build_features(ds, model, thr, set);

  std::string tmp = output + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    for (int i = 0; i < kFeatureCount; ++i) out << feature_names()[i] << ',';
    out << "fraud,score\n";
    for (std::size_t r = 0; r < ds.records.size(); ++r) {
      for (int i = 0; i < kFeatureCount; ++i) {
        out << format_double(ds.records[r].features[i]) << ',';
      }
      out << ds.records[r].fraud << ','
          << format_double(forward(mlp, fm.rows[r])) << '\n';
    }
  }
  fs::rename(tmp, output);
  std::cout << "wrote " << output << ": " << ds.size() << " scored records\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transaction anomaly detection via per-record deviation networks"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file; flags override its values")
      ->expected(1);

  PipelineOpts opt;
  SynthConfig synth_cfg;
  std::vector<double> densities;
  std::vector<double> size_cutoffs;
  std::vector<std::string> feature_sets;
  std::string feature_set = "combined";
  std::string input, output;
  bool unbalanced_eval = false;

  auto add_common = [&](CLI::App* sub) {
    struct Opts {
      CLI::Option *workdir, *seed;
    } o;
    o.workdir = sub->add_option("--workdir", opt.workdir, "artifact directory");
    o.seed = sub->add_option("--seed", opt.seed, "master seed");
    return o;
  };
  auto add_pipeline = [&](CLI::App* sub) {
    struct Opts {
      CLI::Option *dataset, *train_fraction, *density, *lr, *epochs, *batch, *init;
    } o;
    o.dataset = sub->add_option("--dataset", opt.dataset, "dataset CSV path");
    o.train_fraction =
        sub->add_option("--train-fraction", opt.train_fraction, "training split fraction")
            ->check(CLI::Range(std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0)));
    o.density = sub->add_option("--density", opt.density, "target link density")
                    ->check(CLI::Range(0.0, 1.0));
    o.lr = sub->add_option("--learning-rate", opt.train_cfg.learning_rate, "");
    o.epochs = sub->add_option("--epochs", opt.train_cfg.epochs, "");
    o.batch = sub->add_option("--batch-size", opt.train_cfg.batch_size, "");
    o.init = sub->add_option("--init-range", opt.train_cfg.init_range, "");
    return o;
  };

  auto* gen = app.add_subcommand("generate", "write a synthetic dataset CSV");
  auto gen_common = add_common(gen);
  auto* gen_n = gen->add_option("--n", synth_cfg.n, "record count");
  auto* gen_ff = gen->add_option("--fraud-fraction", synth_cfg.fraud_fraction, "")
                     ->check(CLI::Range(std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0)));
  auto* gen_noise = gen->add_option("--noise-sd", synth_cfg.noise_sd, "");
  auto* gen_break = gen->add_option("--break-strength", synth_cfg.break_strength, "");

  auto* fit = app.add_subcommand("fit", "fit pairwise baselines on licit training data");
  auto fit_common = add_common(fit);
  auto fit_pipe = add_pipeline(fit);

  auto* feats = app.add_subcommand("features", "export feature matrices");
  auto feats_common = add_common(feats);
  auto feats_pipe = add_pipeline(feats);
  auto* feats_sets = feats->add_option("--feature-set", feature_sets,
                                       "raw|parenclitic|combined (default: all three)");

  auto* tr = app.add_subcommand("train", "train the classifier on a feature matrix");
  auto tr_common = add_common(tr);
  auto tr_pipe = add_pipeline(tr);
  auto* tr_set = tr->add_option("--feature-set", feature_set, "raw|parenclitic|combined");

  auto* sw = app.add_subcommand("sweep", "classification error across link densities");
  auto sw_common = add_common(sw);
  auto sw_pipe = add_pipeline(sw);
  auto* sw_d = sw->add_option("--densities", densities, "density grid");

  auto* rc = app.add_subcommand("roc", "ROC curves per feature set and size stratum");
  auto rc_common = add_common(rc);
  auto rc_pipe = add_pipeline(rc);
  auto* rc_cut = rc->add_option("--size-cutoffs", size_cutoffs, "euro cutoffs");
  rc->add_flag("--unbalanced-eval", unbalanced_eval, "score the full test split");

  auto* sc = app.add_subcommand("score", "append model scores to a CSV");
  auto sc_common = add_common(sc);
  auto* sc_set = sc->add_option("--feature-set", feature_set, "raw|parenclitic|combined");
  auto* sc_in = sc->add_option("--input", input, "input CSV")->required();
  auto* sc_out = sc->add_option("--output", output, "output CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    json cfg = load_config(config_path);
    auto merge_common = [&](const auto& o) {
      apply_config(cfg, o.workdir, "workdir", opt.workdir);
      apply_config(cfg, o.seed, "seed", opt.seed);
    };
    auto merge_pipeline = [&](const auto& o) {
      apply_config(cfg, o.dataset, "dataset", opt.dataset);
      apply_config(cfg, o.train_fraction, "train_fraction", opt.train_fraction);
      apply_config(cfg, o.density, "density", opt.density);
      apply_config(cfg, o.lr, "learning_rate", opt.train_cfg.learning_rate);
      apply_config(cfg, o.epochs, "epochs", opt.train_cfg.epochs);
      apply_config(cfg, o.batch, "batch_size", opt.train_cfg.batch_size);
      apply_config(cfg, o.init, "init_range", opt.train_cfg.init_range);
    };

    if (gen->parsed()) {
      merge_common(gen_common);
      apply_config(cfg, gen_n, "n", synth_cfg.n);
      apply_config(cfg, gen_ff, "fraud_fraction", synth_cfg.fraud_fraction);
      apply_config(cfg, gen_noise, "noise_sd", synth_cfg.noise_sd);
      apply_config(cfg, gen_break, "break_strength", synth_cfg.break_strength);
      synth_cfg.seed = opt.seed;
      fs::create_directories(opt.workdir);
      return cmd_generate(synth_cfg, workdir_file(opt.workdir, "dataset.csv"));
    }
    if (fit->parsed()) {
      merge_common(fit_common);
      merge_pipeline(fit_pipe);
      return cmd_fit(opt);
    }
    if (feats->parsed()) {
      merge_common(feats_common);
      merge_pipeline(feats_pipe);
      apply_config(cfg, feats_sets, "feature_set", feature_sets);
      if (feature_sets.empty()) feature_sets = {"raw", "parenclitic", "combined"};
      opt.train_cfg.seed = opt.seed;
      return cmd_features(opt, feature_sets);
    }
    if (tr->parsed()) {
      merge_common(tr_common);
      merge_pipeline(tr_pipe);
      apply_config(cfg, tr_set, "feature_set", feature_set);
      opt.train_cfg.seed = opt.seed;
      return cmd_train(opt, feature_set);
    }
    if (sw->parsed()) {
      merge_common(sw_common);
      merge_pipeline(sw_pipe);
      apply_config(cfg, sw_d, "densities", densities);
      if (densities.empty()) densities = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
      opt.train_cfg.seed = opt.seed;
      return cmd_sweep(opt, densities);
    }
    if (rc->parsed()) {
      merge_common(rc_common);
      merge_pipeline(rc_pipe);
      apply_config(cfg, rc_cut, "size_cutoffs", size_cutoffs);
      opt.train_cfg.seed = opt.seed;
      return cmd_roc(opt, size_cutoffs, !unbalanced_eval);
    }
    if (sc->parsed()) {
      merge_common(sc_common);
      apply_config(cfg, sc_set, "feature_set", feature_set);
      apply_config(cfg, sc_in, "input", input);
      apply_config(cfg, sc_out, "output", output);
      return cmd_score(opt, feature_set, input, output);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
