#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace parnet {

inline constexpr int kFeatureCount = 8;

enum FeatureIndex : int {
  kTransactionSize = 0,
  kTimeSinceLast = 1,
  kLastTransactionSize = 2,
  kAvgTransactionSize = 3,
  kAvgTimeBetween = 4,
  kSameShop = 5,
  kHourOfDay = 6,
  kFraudRate = 7,
};

const std::array<std::string, kFeatureCount>& feature_names();

// One card operation. The 8 entries of `features` follow the order of
// FeatureIndex. `fraud_suspectness` is an external score carried through
// I/O but never fed to any model.
struct TransactionRecord {
  std::array<double, kFeatureCount> features{};
  std::optional<int> fraud_suspectness;
  int fraud = 0;
};

struct Dataset {
  std::vector<TransactionRecord> records;

  std::size_t size() const { return records.size(); }
  std::vector<int> labels() const;
};

// Per-feature mean and population standard deviation. Features whose sd
// falls below eps_var are flagged degenerate and only centered.
struct NormStats {
  std::array<double, kFeatureCount> mean{};
  std::array<double, kFeatureCount> sd{};
  std::array<bool, kFeatureCount> degenerate{};

  static constexpr double kEpsVar = 1e-9;
};

Dataset parse_csv(const std::string& path);
void write_csv(const Dataset& ds, const std::string& path);

NormStats fit_norm_stats(const Dataset& ds, bool licit_only);
Dataset normalize(const Dataset& ds, const NormStats& stats);

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Stratified shuffled split of label vector positions; deterministic under
// seed. A present class with fewer than 2 members is an error.
SplitIndices split_indices(const std::vector<int>& labels, double train_fraction,
                           std::uint64_t seed);
std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction,
                                  std::uint64_t seed);

// Positions of a balanced subsample: majority class downsampled without
// replacement to the minority count, output in ascending input order.
std::vector<std::size_t> balance_indices(const std::vector<int>& labels,
                                         std::uint64_t seed);
Dataset balance(const Dataset& ds, std::uint64_t seed);

// Shortest round-trip decimal formatting, shared by all CSV writers.
std::string format_double(double v);

}  // namespace parnet
