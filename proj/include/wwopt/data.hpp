#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

// Dataset ingestion and preprocessing: CSV loading, train-stats
// standardization, stratified splitting, and a synthetic extreme-imbalance
// generator. All operations are deterministic given their inputs and seed.

namespace wwopt::data {

struct Dataset {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> features;  // row-major, rows * cols
  std::vector<int> labels;       // 0/1
  std::vector<std::string> feature_names;

  double at(std::size_t i, std::size_t j) const {
    return features[i * cols + j];
  }
  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * cols, cols};
  }
  std::size_t positives() const;
  double prevalence() const;
};

/// Parses an RFC-4180-style CSV (header row, comma delimiter, '.' decimal
/// point). Every non-label column becomes a feature; label cells equal to
/// positive_label map to 1, everything else to 0. Row order is preserved.
Dataset load_csv(const std::string& path, const std::string& label_column,
                 const std::string& positive_label);

struct StandardizationStats {
  std::vector<double> mean;
  std::vector<double> stddev;  // population std, floored at kStdFloor
};

inline constexpr double kStdFloor = 1e-12;

/// Per-feature mean and population standard deviation of the training set.
StandardizationStats compute_standardization(const Dataset& train);

/// z-scores the dataset in place with the given (training) statistics.
void apply_standardization(const StandardizationStats& stats, Dataset& ds);

/// Fits on train, transforms train and every dataset in others.
StandardizationStats standardize(Dataset& train, std::span<Dataset* const> others = {});

/// Per-class shuffled split. Each class contributes round(count * fraction)
/// rows to the test side, at least one row per class on each side. Row order
/// inside each output follows the original dataset.
std::pair<Dataset, Dataset> stratified_split(const Dataset& ds,
                                             double test_fraction,
                                             std::uint64_t seed);

/// Synthetic imbalanced binary task: negatives are standard Gaussians in d
/// dimensions, positives share the covariance but are shifted by
/// (separation / sqrt(d)) along every axis. Exactly round(n * positive_rate)
/// positives (they occupy the leading rows); deterministic in the seed.
Dataset synth_imbalanced(std::size_t n, std::size_t d, double positive_rate,
                         double separation, std::uint64_t seed);

}  // namespace wwopt::data
