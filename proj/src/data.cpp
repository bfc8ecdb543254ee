#include "wwopt/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "wwopt/errors.hpp"
#include "wwopt/rng.hpp"

namespace wwopt::data {

std::size_t Dataset::positives() const {
  std::size_t count = 0;
  for (int y : labels) count += static_cast<std::size_t>(y);
  return count;
}

double Dataset::prevalence() const {
  return rows == 0 ? 0.0
                   : static_cast<double>(positives()) /
                         static_cast<double>(rows);
}

namespace {

// Splits one CSV record into fields; supports double-quoted fields with ""
// escapes. Fields may not contain line breaks.
std::vector<std::string> split_fields(const std::string& line,
                                      std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  if (quoted)
    throw DataError(DataError::Kind::BadCell,
                    "unterminated quote on line " + std::to_string(line_no),
                    line_no);
  fields.push_back(std::move(field));
  return fields;
}

double parse_feature(const std::string& cell, std::size_t row_no,
                     std::size_t col_no, const std::string& col_name) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  double value = std::strtod(begin, &end);
  if (cell.empty() || end != begin + cell.size() || !std::isfinite(value))
    throw DataError(DataError::Kind::BadCell,
                    "cannot parse cell \"" + cell + "\" at data row " +
                        std::to_string(row_no) + ", column \"" + col_name +
                        "\" as a finite number",
                    row_no, col_no);
  return value;
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& label_column,
                 const std::string& positive_label) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw DataError(DataError::Kind::MissingFile,
                    "cannot open \"" + path + "\"");

  std::string line;
  if (!std::getline(in, line))
    throw DataError(DataError::Kind::EmptyBody,
                    "\"" + path + "\" has no header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const std::vector<std::string> header = split_fields(line, 1);
  std::size_t label_idx = header.size();
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == label_column) label_idx = j;
  if (label_idx == header.size())
    throw DataError(DataError::Kind::MissingColumn,
                    "label column \"" + label_column + "\" not in header");

  Dataset ds;
  ds.cols = header.size() - 1;
  for (std::size_t j = 0; j < header.size(); ++j)
    if (j != label_idx) ds.feature_names.push_back(header[j]);

  std::size_t line_no = 1;
  std::size_t data_row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++data_row;
    const std::vector<std::string> fields = split_fields(line, line_no);
    if (fields.size() != header.size())
      throw DataError(DataError::Kind::RaggedRow,
                      "data row " + std::to_string(data_row) + " has " +
                          std::to_string(fields.size()) + " fields, expected " +
                          std::to_string(header.size()),
                      data_row);
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (j == label_idx) {
        ds.labels.push_back(fields[j] == positive_label ? 1 : 0);
      } else {
        ds.features.push_back(
            parse_feature(fields[j], data_row, j + 1, header[j]));
      }
    }
    ++ds.rows;
  }

  if (ds.rows == 0)
    throw DataError(DataError::Kind::EmptyBody,
                    "\"" + path + "\" has a header but no data rows");
  return ds;
}

StandardizationStats compute_standardization(const Dataset& train) {
  if (train.rows == 0) throw DomainError("cannot standardize an empty dataset");
  StandardizationStats stats;
  stats.mean.assign(train.cols, 0.0);
  stats.stddev.assign(train.cols, 0.0);
  const double inv_n = 1.0 / static_cast<double>(train.rows);
  for (std::size_t i = 0; i < train.rows; ++i)
    for (std::size_t j = 0; j < train.cols; ++j)
      stats.mean[j] += train.at(i, j);
  for (std::size_t j = 0; j < train.cols; ++j) stats.mean[j] *= inv_n;
  for (std::size_t i = 0; i < train.rows; ++i)
    for (std::size_t j = 0; j < train.cols; ++j) {
      const double delta = train.at(i, j) - stats.mean[j];
      stats.stddev[j] += delta * delta;
    }
  for (std::size_t j = 0; j < train.cols; ++j)
    stats.stddev[j] = std::max(std::sqrt(stats.stddev[j] * inv_n), kStdFloor);
  return stats;
}

void apply_standardization(const StandardizationStats& stats, Dataset& ds) {
  if (stats.mean.size() != ds.cols)
    throw DimensionError("standardization statistics dimension mismatch");
  for (std::size_t i = 0; i < ds.rows; ++i)
    for (std::size_t j = 0; j < ds.cols; ++j)
      ds.features[i * ds.cols + j] =
          (ds.features[i * ds.cols + j] - stats.mean[j]) / stats.stddev[j];
}

StandardizationStats standardize(Dataset& train,
                                 std::span<Dataset* const> others) {
  StandardizationStats stats = compute_standardization(train);
  apply_standardization(stats, train);
  for (Dataset* other : others) apply_standardization(stats, *other);
  return stats;
}

namespace {

Dataset take_rows(const Dataset& ds, const std::vector<std::size_t>& indices) {
  Dataset out;
  out.rows = indices.size();
  out.cols = ds.cols;
  out.feature_names = ds.feature_names;
  out.features.reserve(out.rows * out.cols);
  out.labels.reserve(out.rows);
  for (std::size_t i : indices) {
    const auto row = ds.row(i);
    out.features.insert(out.features.end(), row.begin(), row.end());
    out.labels.push_back(ds.labels[i]);
  }
  return out;
}

}  // namespace

std::pair<Dataset, Dataset> stratified_split(const Dataset& ds,
                                             double test_fraction,
                                             std::uint64_t seed) {
  if (!(test_fraction > 0.0) || !(test_fraction < 1.0))
    throw ConfigError("test fraction must lie in (0, 1)");

  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < ds.rows; ++i)
    by_class[ds.labels[i] ? 1 : 0].push_back(i);
  for (int c = 0; c < 2; ++c)
    if (by_class[c].size() < 2)
      throw DomainError("stratified split needs >= 2 samples of class " +
                        std::to_string(c));

  SplitMix64 rng(seed);
  std::vector<std::size_t> test_idx;
  std::vector<std::size_t> train_idx;
  for (int c = 0; c < 2; ++c) {
    auto& idx = by_class[c];
    // Fisher-Yates with the specified generator
    for (std::size_t i = idx.size() - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(rng.next_below(i + 1));
      std::swap(idx[i], idx[j]);
    }
    const double want =
        static_cast<double>(idx.size()) * test_fraction;
    std::size_t n_test = static_cast<std::size_t>(std::llround(want));
    n_test = std::clamp<std::size_t>(n_test, 1, idx.size() - 1);
    test_idx.insert(test_idx.end(), idx.begin(), idx.begin() + n_test);
    train_idx.insert(train_idx.end(), idx.begin() + n_test, idx.end());
  }
  std::sort(test_idx.begin(), test_idx.end());
  std::sort(train_idx.begin(), train_idx.end());
  return {take_rows(ds, train_idx), take_rows(ds, test_idx)};
}

Dataset synth_imbalanced(std::size_t n, std::size_t d, double positive_rate,
                         double separation, std::uint64_t seed) {
  if (n < 1 || d < 1) throw ConfigError("synthetic dataset needs n, d >= 1");
  if (!(positive_rate > 0.0) || !(positive_rate < 0.5))
    throw ConfigError("positive rate must lie in (0, 0.5)");
  if (!(separation >= 0.0)) throw ConfigError("separation must be >= 0");
  const double expected_pos = static_cast<double>(n) * positive_rate;
  if (expected_pos < 10.0)
    throw ConfigError("n * positive_rate must be >= 10 to evaluate PR-AUC");

  const std::size_t n_pos = static_cast<std::size_t>(std::llround(expected_pos));
  const double shift = separation / std::sqrt(static_cast<double>(d));

  Dataset ds;
  ds.rows = n;
  ds.cols = d;
  ds.features.resize(n * d);
  ds.labels.resize(n);
  ds.feature_names.reserve(d);
  for (std::size_t j = 0; j < d; ++j)
    ds.feature_names.push_back("f" + std::to_string(j));

  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const bool positive = i < n_pos;
    ds.labels[i] = positive ? 1 : 0;
    double* row = ds.features.data() + i * d;
    for (std::size_t j = 0; j < d; ++j)
      row[j] = rng.next_gaussian() + (positive ? shift : 0.0);
  }
  return ds;
}

}  // namespace wwopt::data
