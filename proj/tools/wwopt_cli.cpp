// Command-line front end for the experiment harness.
//
//   wwopt compare  --config cfg.json --out runs/compare
//   wwopt ablation --config cfg.json --alpha 0.1,0.5,0.9
//   wwopt bench    --out runs/bench
//
// Every flag is optional: without --config the documented defaults run, and
// --out/--seed/--alpha override the corresponding config fields.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wwopt/csvio.hpp"
#include "wwopt/harness.hpp"

namespace {

using wwopt::harness::BenchResult;
using wwopt::harness::ExperimentConfig;

double median_of(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

void print_bench_summary(const ExperimentConfig& cfg, const BenchResult& res) {
  // Steady-state medians: ignore the warm-up steps below 2*window (the
  // classical baseline, window 0, has no warm-up to skip).
  struct Key {
    std::string optimizer;
    std::size_t window;
  };
  std::vector<Key> keys;
  for (const auto& row : res.rows) {
    bool seen = false;
    for (const Key& k : keys)
      seen = seen || (k.optimizer == row.optimizer && k.window == row.window);
    if (!seen) keys.push_back({row.optimizer, row.window});
  }
  for (const Key& k : keys) {
    std::vector<double> seconds;
    for (const auto& row : res.rows) {
      if (row.optimizer == k.optimizer && row.window == k.window &&
          row.step >= 2 * k.window)
        seconds.push_back(row.seconds);
    }
    std::printf("%s window=%zu: median step %s s over %zu steady-state steps\n",
                k.optimizer.c_str(), k.window,
                wwopt::full_precision(median_of(seconds)).c_str(),
                seconds.size());
  }
  std::printf("wrote %s/bench.csv\n", cfg.out_dir.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted Weyl optimizer experiment runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::vector<std::uint64_t> seeds;
  std::vector<double> alphas;

  CLI::App* compare = app.add_subcommand(
      "compare", "Train every configured optimizer on identical splits");
  CLI::App* ablation = app.add_subcommand(
      "ablation", "Sweep the fractional order over a grid plus a baseline");
  CLI::App* bench = app.add_subcommand(
      "bench", "Time bare optimizer steps for each configured window");

  for (CLI::App* cmd : {compare, ablation, bench}) {
    cmd->add_option("--config", config_path,
                    "JSON config file; defaults apply when omitted");
    cmd->add_option("--out", out_dir, "output directory (overrides config)");
    cmd->add_option("--seed", seeds, "comma-separated seed list override")
        ->delimiter(',');
  }
  ablation
      ->add_option("--alpha", alphas, "comma-separated alpha grid override")
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = config_path.empty()
                               ? ExperimentConfig{}
                               : ExperimentConfig::from_json_file(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!seeds.empty()) cfg.seeds = seeds;
    if (!alphas.empty()) cfg.alpha_grid = alphas;
    cfg.validate();

    if (app.got_subcommand(compare)) {
      const auto reports = wwopt::harness::cmd_compare(cfg);
      for (const auto& report : reports) {
        for (const auto& opt : report.optimizers) {
          std::printf(
              "seed %llu %-10s train_loss=%.6f test_loss=%.6f pr_auc=%.6f\n",
              static_cast<unsigned long long>(report.seed), opt.name.c_str(),
              opt.final_train_loss, opt.final_test_loss, opt.test_pr_auc);
        }
      }
      std::printf("wrote %zu run directories under %s\n", reports.size(),
                  cfg.out_dir.c_str());
    } else if (app.got_subcommand(ablation)) {
      const auto result = wwopt::harness::cmd_ablation(cfg, cfg.alpha_grid);
      for (const auto& m : result.medians) {
        if (m.alpha == m.alpha) {  // finite alpha: a weyl grid point
          std::printf("alpha=%.4g median pr_auc=%.6f median test_loss=%.6f\n",
                      m.alpha, m.median_test_pr_auc,
                      m.median_final_test_loss);
        } else {
          std::printf("%s median pr_auc=%.6f median test_loss=%.6f\n",
                      m.optimizer.c_str(), m.median_test_pr_auc,
                      m.median_final_test_loss);
        }
      }
      std::printf("wrote %s/ablation.csv\n", cfg.out_dir.c_str());
    } else {
      print_bench_summary(cfg, wwopt::harness::cmd_bench(cfg));
    }
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
