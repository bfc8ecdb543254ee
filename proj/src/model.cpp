#include "wwopt/model.hpp"

#include <chrono>
#include <cmath>
#include <cstring>

#include "wwopt/errors.hpp"
#include "wwopt/kernels.hpp"
#include "wwopt/rng.hpp"

namespace wwopt {

namespace {

void check_dataset(const LogisticModel& model, const Dataset& ds) {
  if (ds.rows == 0) throw DomainError("dataset is empty");
  if (model.dim() != ds.cols)
    throw DimensionError("model has " + std::to_string(model.dim()) +
                         " weights but dataset has " + std::to_string(ds.cols) +
                         " features");
  if (ds.labels.size() != ds.rows)
    throw DimensionError("label count does not match row count");
  for (std::size_t i = 0; i < ds.labels.size(); ++i) {
    if (ds.labels[i] != 0 && ds.labels[i] != 1)
      throw DomainError("label at row " + std::to_string(i + 1) +
                        " is not 0 or 1");
  }
}

// Reusable buffers for the loss/gradient pipeline, so the training loop does
// not allocate per epoch.
struct Workspace {
  std::vector<double> probs;
  std::vector<double> terms;
  std::vector<double> resid;

  void resize(std::size_t n) {
    probs.resize(n);
    terms.resize(n);
    resid.resize(n);
  }
};

// margins -> probabilities for all rows, written into ws.probs.
void forward(const LogisticModel& model, const Dataset& ds, Workspace& ws) {
  ws.resize(ds.rows);
  kernels::matvec_rows(ds.features.data(), ds.rows, ds.cols, model.weights,
                       model.bias, ws.probs);
  kernels::logistic_probs(ws.probs, ws.probs);
}

double loss_from_probs(const Dataset& ds, Workspace& ws) {
  kernels::bce_terms(ws.probs, ds.labels, ws.terms);
  return kernels::block_sum(ws.terms) / static_cast<double>(ds.rows);
}

// Fills grad (flat [weights..., bias] layout, size d + 1) from ws.probs.
void gradient_from_probs(const Dataset& ds, Workspace& ws,
                         std::span<double> grad) {
  kernels::residual(ws.probs, ds.labels, ws.resid);
  const double inv_n = 1.0 / static_cast<double>(ds.rows);
  kernels::matvec_cols(ds.features.data(), ds.rows, ds.cols, ws.resid,
                       grad.subspan(0, ds.cols));
  kernels::scale(grad.subspan(0, ds.cols), inv_n);
  grad[ds.cols] = kernels::block_sum(ws.resid) * inv_n;
}

}  // namespace

LogisticModel LogisticModel::zeros(std::size_t dim) {
  LogisticModel m;
  m.weights.assign(dim, 0.0);
  m.bias = 0.0;
  return m;
}

void LogisticModel::pack(std::span<double> theta) const {
  if (theta.size() != parameter_count())
    throw DimensionError("pack buffer has the wrong size");
  std::memcpy(theta.data(), weights.data(), weights.size() * sizeof(double));
  theta[weights.size()] = bias;
}

void LogisticModel::unpack(std::span<const double> theta) {
  if (theta.size() != parameter_count())
    throw DimensionError("unpack buffer has the wrong size");
  std::memcpy(weights.data(), theta.data(), weights.size() * sizeof(double));
  bias = theta[weights.size()];
}

double predict_proba(const LogisticModel& model, std::span<const double> x) {
  if (x.size() != model.dim())
    throw DimensionError("feature vector has " + std::to_string(x.size()) +
                         " entries but the model expects " +
                         std::to_string(model.dim()));
  double margin = model.bias;
  for (std::size_t j = 0; j < x.size(); ++j) margin += model.weights[j] * x[j];
  return kernels::stable_sigmoid(margin);
}

void predict_proba(const LogisticModel& model, const Dataset& ds,
                   std::span<double> out) {
  if (model.dim() != ds.cols)
    throw DimensionError("model/dataset feature dimensions differ");
  if (out.size() != ds.rows)
    throw DimensionError("output span does not match row count");
  kernels::matvec_rows(ds.features.data(), ds.rows, ds.cols, model.weights,
                       model.bias, out);
  kernels::logistic_probs(out, out);
}

double bce_loss(const LogisticModel& model, const Dataset& ds) {
  check_dataset(model, ds);
  Workspace ws;
  forward(model, ds, ws);
  return loss_from_probs(ds, ws);
}

Gradient bce_gradient(const LogisticModel& model, const Dataset& ds) {
  check_dataset(model, ds);
  Workspace ws;
  forward(model, ds, ws);
  std::vector<double> flat(ds.cols + 1, 0.0);
  gradient_from_probs(ds, ws, flat);
  Gradient g;
  g.weights.assign(flat.begin(), flat.begin() + static_cast<long>(ds.cols));
  g.bias = flat[ds.cols];
  return g;
}

TrainResult train(LogisticModel model, const Dataset& ds,
                  optim::Optimizer& opt, const TrainOptions& opts) {
  if (opts.epochs == 0) throw ConfigError("epochs must be >= 1");
  check_dataset(model, ds);
  if (opts.eval_data != nullptr) check_dataset(model, *opts.eval_data);
  if (!(opts.gradient_noise_std >= 0.0) ||
      !std::isfinite(opts.gradient_noise_std))
    throw ConfigError("gradient_noise_std must be finite and >= 0");

  const std::size_t n_params = model.parameter_count();
  std::vector<double> theta(n_params, 0.0);
  std::vector<double> grad(n_params, 0.0);
  model.pack(theta);

  Workspace train_ws;
  Workspace eval_ws;
  SplitMix64 noise(opts.noise_seed);

  TrainResult result;
  result.trace.reserve(opts.epochs + 1);

  auto record = [&](std::size_t step) {
    forward(model, ds, train_ws);
    TracePoint point;
    point.step = step;
    point.train_loss = loss_from_probs(ds, train_ws);
    if (opts.eval_data != nullptr) {
      forward(model, *opts.eval_data, eval_ws);
      point.eval_loss = loss_from_probs(*opts.eval_data, eval_ws);
    }
    result.trace.push_back(point);
    if (!std::isfinite(point.train_loss) ||
        (point.eval_loss && !std::isfinite(*point.eval_loss)))
      throw DivergenceError(
          "non-finite loss at step " + std::to_string(step), step);
  };

  const auto started = std::chrono::steady_clock::now();
  record(0);
  for (std::size_t step = 1; step <= opts.epochs; ++step) {
    // record() above left train_ws.probs holding the current predictions.
    gradient_from_probs(ds, train_ws, grad);
    if (opts.gradient_noise_std > 0.0) {
      for (double& g : grad) g += opts.gradient_noise_std * noise.next_gaussian();
    }
    opt.step(theta, grad);
    model.unpack(theta);
    record(step);
  }
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();

  result.model = std::move(model);
  return result;
}

}  // namespace wwopt
