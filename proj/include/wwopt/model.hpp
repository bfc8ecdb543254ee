#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wwopt/data.hpp"
#include "wwopt/optim.hpp"

// Binary logistic regression trained by full-batch gradient descent. The
// model is deliberately minimal — a weight vector and a bias — because the
// experiments isolate the optimizer, not the architecture.

namespace wwopt {

using data::Dataset;

struct LogisticModel {
  std::vector<double> weights;
  double bias = 0.0;

  static LogisticModel zeros(std::size_t dim);

  std::size_t dim() const { return weights.size(); }

  /// Parameter count including the bias; the flat layout is [weights..., bias].
  std::size_t parameter_count() const { return weights.size() + 1; }

  /// Copies parameters into / out of the flat [weights..., bias] layout used
  /// by the optimizers.
  void pack(std::span<double> theta) const;
  void unpack(std::span<const double> theta);
};

/// sigma(w.x + b) for a single feature vector.
double predict_proba(const LogisticModel& model, std::span<const double> x);

/// Probability for every row of the dataset; out.size() must equal ds.rows.
void predict_proba(const LogisticModel& model, const Dataset& ds,
                   std::span<double> out);

/// Mean binary cross-entropy over the dataset, probabilities clamped to
/// [1e-12, 1 - 1e-12] so saturated predictions keep the loss finite.
double bce_loss(const LogisticModel& model, const Dataset& ds);

struct Gradient {
  std::vector<double> weights;
  double bias = 0.0;
};

/// Exact gradient of bce_loss: grad_w = (1/n) X^T (p - y), grad_b = mean(p - y).
Gradient bce_gradient(const LogisticModel& model, const Dataset& ds);

struct TracePoint {
  std::size_t step = 0;  // number of parameter updates applied so far
  double train_loss = 0.0;
  std::optional<double> eval_loss;
};

using LossTrace = std::vector<TracePoint>;

struct TrainOptions {
  std::size_t epochs = 500;

  /// When > 0, adds seeded zero-mean gaussian noise (this standard deviation,
  /// i.i.d. per coordinate) to each full-batch gradient before the optimizer
  /// sees it. This emulates mini-batch gradient scatter while keeping the
  /// run exactly reproducible.
  double gradient_noise_std = 0.0;
  std::uint64_t noise_seed = 0;

  /// Optional held-out set; when present each trace point also records its
  /// loss under the current parameters.
  const Dataset* eval_data = nullptr;
};

struct TrainResult {
  LogisticModel model;
  LossTrace trace;  // entry at step 0 plus one per update: epochs + 1 points
  double seconds = 0.0;  // wall time spent in the epoch loop
};

/// Full-batch training loop: gradient -> optimizer step -> loss, repeated for
/// opts.epochs updates. Throws DivergenceError (carrying the step index) as
/// soon as a recorded training loss is non-finite. Given identical inputs the
/// numeric results are bit-identical across runs and thread counts.
TrainResult train(LogisticModel model, const Dataset& ds, optim::Optimizer& opt,
                  const TrainOptions& opts);

}  // namespace wwopt
