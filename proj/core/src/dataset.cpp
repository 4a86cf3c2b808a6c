#include "parnet/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace parnet {

const std::array<std::string, kFeatureCount>& feature_names() {
  static const std::array<std::string, kFeatureCount> names = {
      "transaction_size",     "time_since_last", "last_transaction_size",
      "avg_transaction_size", "avg_time_between", "same_shop",
      "hour_of_day",          "fraud_rate"};
  return names;
}

std::vector<int> Dataset::labels() const {
  std::vector<int> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.fraud);
  return out;
}

std::string format_double(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0f", v);
    return buf;
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string to_lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

double parse_number(const std::string& cell, std::size_t row, const std::string& col) {
  try {
    std::size_t pos = 0;
    double v = std::stod(cell, &pos);
    while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
    if (pos != cell.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("row " + std::to_string(row) + ": cannot parse '" + cell +
                             "' in column " + col);
  }
}

void check_record(const TransactionRecord& r, std::size_t row) {
  auto fail = [row](const std::string& msg) {
    throw std::runtime_error("row " + std::to_string(row) + ": " + msg);
  };
  const auto& f = r.features;
  double hour = f[kHourOfDay];
  if (hour < 1.0 || hour > 24.0) fail("hour_of_day outside [1,24]");
  double shop = f[kSameShop];
  if (shop != 0.0 && shop != 1.0) fail("same_shop must be 0 or 1");
  if (r.fraud != 0 && r.fraud != 1) fail("fraud must be 0 or 1");
  if (f[kFraudRate] < 0.0 || f[kFraudRate] > 1.0) fail("fraud_rate outside [0,1]");
  for (int i : {kTransactionSize, kTimeSinceLast, kLastTransactionSize,
                kAvgTransactionSize, kAvgTimeBetween}) {
    if (f[i] < 0.0) fail("negative value in column " + feature_names()[i]);
  }
  if (r.fraud_suspectness &&
      (*r.fraud_suspectness < 0 || *r.fraud_suspectness > 100)) {
    fail("fraud_suspectness outside [0,100]");
  }
}

}  // namespace

Dataset parse_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  auto header = split_line(line);
  for (auto& h : header) h = to_lower(h);

  std::array<int, kFeatureCount> feat_col;
  feat_col.fill(-1);
  int fraud_col = -1;
  int susp_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    for (int i = 0; i < kFeatureCount; ++i) {
      if (header[c] == feature_names()[i]) feat_col[i] = static_cast<int>(c);
    }
    if (header[c] == "fraud") fraud_col = static_cast<int>(c);
    if (header[c] == "fraud_suspectness") susp_col = static_cast<int>(c);
  }
  for (int i = 0; i < kFeatureCount; ++i) {
    if (feat_col[i] < 0)
      throw std::runtime_error(path + ": missing required column " + feature_names()[i]);
  }
  if (fraud_col < 0) throw std::runtime_error(path + ": missing required column fraud");

  Dataset ds;
  std::size_t row = 1;  // header is row 1
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    auto cells = split_line(line);
    if (cells.size() != header.size()) {
      throw std::runtime_error("row " + std::to_string(row) + ": expected " +
                               std::to_string(header.size()) + " cells, got " +
                               std::to_string(cells.size()));
    }
    TransactionRecord r;
    for (int i = 0; i < kFeatureCount; ++i) {
      r.features[i] = parse_number(cells[feat_col[i]], row, feature_names()[i]);
    }
    r.fraud = static_cast<int>(parse_number(cells[fraud_col], row, "fraud"));
    if (susp_col >= 0 && !cells[susp_col].empty()) {
      r.fraud_suspectness =
          static_cast<int>(parse_number(cells[susp_col], row, "fraud_suspectness"));
    }
    check_record(r, row);
    ds.records.push_back(r);
  }
  if (ds.records.empty()) throw std::runtime_error(path + ": no data rows");
  return ds;
}

void write_csv(const Dataset& ds, const std::string& path) {
  bool any_susp = std::any_of(ds.records.begin(), ds.records.end(),
                              [](const auto& r) { return r.fraud_suspectness.has_value(); });
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    for (int i = 0; i < kFeatureCount; ++i) out << feature_names()[i] << ',';
    if (any_susp) out << "fraud_suspectness,";
    out << "fraud\n";
    for (const auto& r : ds.records) {
      for (int i = 0; i < kFeatureCount; ++i) out << format_double(r.features[i]) << ',';
      if (any_susp) {
        if (r.fraud_suspectness) out << *r.fraud_suspectness;
        out << ',';
      }
      out << r.fraud << '\n';
    }
  }
  std::filesystem::rename(tmp, path);
}

NormStats fit_norm_stats(const Dataset& ds, bool licit_only) {
  std::vector<const TransactionRecord*> sel;
  for (const auto& r : ds.records) {
    if (!licit_only || r.fraud == 0) sel.push_back(&r);
  }
  if (sel.size() < 2) {
    throw std::runtime_error("fit_norm_stats: need at least 2 records, have " +
                             std::to_string(sel.size()));
  }
  NormStats st;
  double n = static_cast<double>(sel.size());
  for (int i = 0; i < kFeatureCount; ++i) {
    double sum = 0;
    for (const auto* r : sel) sum += r->features[i];
    st.mean[i] = sum / n;
    double ss = 0;
    for (const auto* r : sel) {
      double d = r->features[i] - st.mean[i];
      ss += d * d;
    }
    st.sd[i] = std::sqrt(ss / n);
    st.degenerate[i] = st.sd[i] < NormStats::kEpsVar;
  }
  return st;
}

Dataset normalize(const Dataset& ds, const NormStats& stats) {
  Dataset out = ds;
  for (auto& r : out.records) {
    for (int i = 0; i < kFeatureCount; ++i) {
      double s = stats.degenerate[i] ? 1.0 : stats.sd[i];
      r.features[i] = (r.features[i] - stats.mean[i]) / s;
    }
  }
  return out;
}

SplitIndices split_indices(const std::vector<int>& labels, double train_fraction,
                           std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train_fraction must be in (0,1)");
  }
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i] ? 1 : 0].push_back(i);

  std::mt19937_64 rng(seed);
  SplitIndices out;
  for (int c = 0; c < 2; ++c) {
    auto& idx = by_class[c];
    if (idx.empty()) continue;
    if (idx.size() < 2) {
      throw std::runtime_error("split: class " + std::to_string(c) + " has " +
                               std::to_string(idx.size()) +
                               " record(s), cannot stratify");
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    auto n_train = static_cast<std::size_t>(std::lround(train_fraction * idx.size()));
    n_train = std::clamp<std::size_t>(n_train, 1, idx.size() - 1);
    out.train.insert(out.train.end(), idx.begin(), idx.begin() + n_train);
    out.test.insert(out.test.end(), idx.begin() + n_train, idx.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction,
                                  std::uint64_t seed) {
  auto idx = split_indices(ds.labels(), train_fraction, seed);
  Dataset train, test;
  for (auto i : idx.train) train.records.push_back(ds.records[i]);
  for (auto i : idx.test) test.records.push_back(ds.records[i]);
  return {std::move(train), std::move(test)};
}

std::vector<std::size_t> balance_indices(const std::vector<int>& labels,
                                         std::uint64_t seed) {
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i] ? 1 : 0].push_back(i);
  if (by_class[0].empty() || by_class[1].empty()) {
    throw std::runtime_error("balance: both classes must be present");
  }
  std::size_t target = std::min(by_class[0].size(), by_class[1].size());
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> out;
  for (int c = 0; c < 2; ++c) {
    auto& idx = by_class[c];
    std::shuffle(idx.begin(), idx.end(), rng);
    out.insert(out.end(), idx.begin(), idx.begin() + target);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Dataset balance(const Dataset& ds, std::uint64_t seed) {
  auto idx = balance_indices(ds.labels(), seed);
  Dataset out;
  for (auto i : idx) out.records.push_back(ds.records[i]);
  return out;
}

}  // namespace parnet
