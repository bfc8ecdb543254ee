#include "wwopt/optim.hpp"

#include <algorithm>
#include <cstring>

#include "wwopt/errors.hpp"
#include "wwopt/kernels.hpp"

namespace wwopt::optim {

void WeylConfig::validate() const {
  if (!(alpha > 0.0) || !(alpha <= 1.0))
    throw ConfigError("alpha must lie in (0, 1]");
  if (window < 1) throw ConfigError("window length must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");
}

GradientHistory::GradientHistory(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ < 1) throw ConfigError("history capacity must be >= 1");
}

void GradientHistory::push(std::span<const double> gradient) {
  if (dim_ == 0) {
    dim_ = gradient.size();
    if (dim_ == 0) throw DimensionError("gradient dimension must be >= 1");
    storage_.assign(capacity_ * dim_, 0.0);
  } else if (gradient.size() != dim_) {
    throw DimensionError("gradient dimension does not match history");
  }
  head_ = (head_ + capacity_ - 1) % capacity_;
  std::memcpy(storage_.data() + head_ * dim_, gradient.data(),
              dim_ * sizeof(double));
  count_ = std::min(count_ + 1, capacity_);
}

std::span<const double> GradientHistory::entry(std::size_t age) const {
  if (age >= count_) throw DomainError("history entry age out of range");
  const std::size_t slot = (head_ + age) % capacity_;
  return {storage_.data() + slot * dim_, dim_};
}

void GradientHistory::clear() {
  count_ = 0;
  head_ = 0;
  dim_ = 0;
  storage_.clear();
}

void classical_step(std::span<double> params, std::span<const double> gradient,
                    double learning_rate) {
  if (params.size() != gradient.size())
    throw DimensionError("parameter and gradient dimensions differ");
  kernels::axpy(params, -learning_rate, gradient);
}

namespace {

void combine_history(const GradientHistory& history,
                     const fracmem::KernelCoefficients& k,
                     std::vector<const double*>& rows, std::span<double> out) {
  if (history.empty())
    throw DomainError("effective gradient of an empty history");
  if (out.size() != history.dimension())
    throw DimensionError("output dimension does not match history");

  const std::size_t len = std::min(history.size(), k.window);
  rows.clear();
  for (std::size_t age = 0; age < len; ++age)
    rows.push_back(history.entry(age).data());

  std::span<const double> weights(k.coeffs.data(), len);
  kernels::weighted_sum_rows(rows, weights, out);

  if (k.normalized) {
    // renormalize over the present entries; at a full window this divides by
    // the (unit) total and keeps warm-up steps scaled like the steady state
    double present = 0.0;
    for (std::size_t age = 0; age < len; ++age) present += k.coeffs[age];
    kernels::scale(out, 1.0 / present);
  }
}

}  // namespace

void effective_gradient_into(const GradientHistory& history,
                             const fracmem::KernelCoefficients& k,
                             std::span<double> out) {
  std::vector<const double*> rows;
  combine_history(history, k, rows, out);
}

std::vector<double> effective_gradient(const GradientHistory& history,
                                       const fracmem::KernelCoefficients& k) {
  std::vector<double> out(history.dimension(), 0.0);
  effective_gradient_into(history, k, out);
  return out;
}

ClassicalGd::ClassicalGd(double learning_rate) : lr_(learning_rate) {
  if (!(lr_ > 0.0)) throw ConfigError("learning rate must be > 0");
}

void ClassicalGd::step(std::span<double> params,
                       std::span<const double> gradient) {
  classical_step(params, gradient, lr_);
  ++steps_;
}

std::unique_ptr<Optimizer> ClassicalGd::clone_fresh() const {
  return std::make_unique<ClassicalGd>(lr_);
}

namespace {

WeylConfig validated(WeylConfig config) {
  config.validate();
  return config;
}

}  // namespace

WeylOptimizer::WeylOptimizer(const WeylConfig& config)
    : config_(validated(config)),
      coeffs_(fracmem::kernel_coefficients(config.alpha, config.scale,
                                           config.weight, config.window,
                                           config.normalize)),
      history_(config.window) {}

void WeylOptimizer::step(std::span<double> params,
                         std::span<const double> gradient) {
  if (params.size() != gradient.size())
    throw DimensionError("parameter and gradient dimensions differ");
  history_.push(gradient);
  scratch_.resize(history_.dimension());
  combine_history(history_, coeffs_, rows_, scratch_);
  kernels::axpy(params, -config_.learning_rate, scratch_);
  ++steps_;
}

void WeylOptimizer::reset() {
  history_.clear();
  steps_ = 0;
}

std::unique_ptr<Optimizer> WeylOptimizer::clone_fresh() const {
  return std::make_unique<WeylOptimizer>(config_);
}

}  // namespace wwopt::optim
