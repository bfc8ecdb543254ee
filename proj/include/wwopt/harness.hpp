#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wwopt/data.hpp"
#include "wwopt/metrics.hpp"
#include "wwopt/model.hpp"
#include "wwopt/optim.hpp"

// Config-driven experiment runner behind the `wwopt` CLI. Three commands:
//
//   compare  — train every configured optimizer on identical splits, one
//              output directory per seed with report.json + trace/PR CSVs.
//   ablation — sweep the fractional order over a grid, plus a classical
//              baseline, and aggregate per-alpha medians into ablation.csv.
//   bench    — time optimizer steps directly on a synthetic gradient stream
//              and write per-step wall times to bench.csv.
//
// Everything numeric in the outputs is deterministic for a given config and
// seed list; only wall-time fields vary between runs.

namespace wwopt::harness {

struct DatasetSpec {
  enum class Source { Csv, Synthetic };

  Source source = Source::Synthetic;

  // source == Csv
  std::string path;
  std::string label_column;
  std::string positive_label = "1";

  // source == Synthetic
  std::size_t n = 20000;
  std::size_t d = 10;
  double positive_rate = 0.005;
  double separation = 2.0;
};

struct OptimizerSpec {
  std::string name;  // file-name tag; defaults to the kind
  std::string kind;  // "classical" or "weyl"
  optim::WeylConfig weyl;  // used when kind == "weyl" (carries learning_rate)
  double learning_rate = 0.1;  // used when kind == "classical"

  double lr() const {
    return kind == "weyl" ? weyl.learning_rate : learning_rate;
  }
};

struct BenchSpec {
  std::vector<std::size_t> windows = {8, 64};
  std::size_t dimension = 31;  // parameter-vector length being stepped
  std::size_t steps_factor = 12;  // each window L runs steps 1..factor*L
  double learning_rate = 0.1;
};

struct ExperimentConfig {
  DatasetSpec dataset;
  std::vector<OptimizerSpec> optimizers;  // default: classical + weyl
  std::size_t epochs = 500;
  double test_fraction = 0.2;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  double gradient_noise_std = 0.0;
  std::vector<double> alpha_grid = {0.1,  0.25, 0.4, 0.5, 0.6,
                                    0.7,  0.8,  0.9, 0.99};
  std::string out_dir = "runs";
  BenchSpec bench;

  ExperimentConfig();  // materializes the default optimizer pair

  /// Parses the JSON text of a config file. Missing keys take the defaults
  /// above; unknown keys are rejected so typos cannot silently change runs.
  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_json_file(const std::string& path);

  /// Fully resolved echo (defaults materialized) as a JSON object string;
  /// embedded verbatim in every report.json.
  std::string to_json_text() const;

  void validate() const;
};

struct OptimizerRunResult {
  std::string name;
  std::string kind;
  LossTrace trace;
  metrics::PRCurve pr;
  double final_train_loss = 0.0;
  double final_test_loss = 0.0;
  double test_pr_auc = 0.0;
  double train_trace_tv = 0.0;
  double seconds_per_step = 0.0;  // wall time; excluded from determinism
};

struct RunReport {
  std::uint64_t seed = 0;
  std::size_t features = 0;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  std::size_t train_positives = 0;
  std::size_t test_positives = 0;
  std::vector<OptimizerRunResult> optimizers;
};

struct AblationRow {
  std::string optimizer;  // "classical" or the weyl spec name
  double alpha = 0.0;     // NaN for the classical baseline
  std::uint64_t seed = 0;
  double final_train_loss = 0.0;
  double final_test_loss = 0.0;
  double test_pr_auc = 0.0;
};

struct AblationMedian {
  std::string optimizer;
  double alpha = 0.0;  // NaN for the classical baseline
  double median_final_test_loss = 0.0;
  double median_test_pr_auc = 0.0;
};

struct AblationResult {
  std::vector<AblationRow> rows;        // per (optimizer, alpha, seed)
  std::vector<AblationMedian> medians;  // classical, then grid order
};

struct BenchRow {
  std::string optimizer;
  std::size_t window = 0;  // 0 for the classical baseline
  std::size_t dimension = 0;
  std::size_t step = 0;    // 1-based step index
  double seconds = 0.0;
};

struct BenchResult {
  std::vector<BenchRow> rows;
};

/// Trains every optimizer spec per seed on identical splits and writes
/// <out>/seed_<seed>/{report.json, loss_<name>.csv, pr_<name>.csv}.
std::vector<RunReport> cmd_compare(const ExperimentConfig& cfg);

/// Runs the first weyl spec across alpha_grid plus a classical baseline on
/// the same per-seed splits and writes <out>/ablation.csv (per-seed rows
/// followed by per-alpha median rows, seed column "median").
AblationResult cmd_ablation(const ExperimentConfig& cfg,
                            std::span<const double> alpha_grid);

/// Times bare optimizer steps on a synthetic gradient stream for each
/// configured window plus a classical baseline; writes <out>/bench.csv.
BenchResult cmd_bench(const ExperimentConfig& cfg);

}  // namespace wwopt::harness
