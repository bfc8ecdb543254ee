#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "wwopt/fracmem.hpp"

// Stateful optimizers: the classical Markovian update and the Weighted Weyl
// Optimizer, which replaces the instantaneous gradient with a power-law
// weighted consensus of the truncated gradient history.

namespace wwopt::optim {

struct WeylConfig {
  double alpha = 0.6;
  std::size_t window = 64;
  fracmem::ScaleKind scale = fracmem::ScaleKind::logarithmic();
  fracmem::WeightKind weight = fracmem::WeightKind::rational(0.1);
  bool normalize = true;
  double learning_rate = 0.1;

  void validate() const;
};

/// Fixed-capacity, age-ordered buffer of past gradient vectors. Age 0 is the
/// most recent entry; pushing at capacity evicts the oldest. The element
/// dimension is locked by the first push.
class GradientHistory {
 public:
  explicit GradientHistory(std::size_t capacity);

  void push(std::span<const double> gradient);
  std::span<const double> entry(std::size_t age) const;

  std::size_t size() const { return count_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t dimension() const { return dim_; }
  bool empty() const { return count_ == 0; }
  void clear();

 private:
  std::size_t capacity_;
  std::size_t dim_ = 0;
  std::size_t count_ = 0;
  std::size_t head_ = 0;  // slot holding age 0
  std::vector<double> storage_;
};

/// params -= lr * g, elementwise.
void classical_step(std::span<double> params, std::span<const double> gradient,
                    double learning_rate);

/// Kernel-weighted combination of the stored history:
///   G = sum_{a < min(len, L)} c_a * g(age a).
/// Entries that have not been pushed yet contribute zero; under normalized
/// coefficients the sum is renormalized over the present entries only, so the
/// warm-up steps are scaled like the steady state.
std::vector<double> effective_gradient(const GradientHistory& history,
                                       const fracmem::KernelCoefficients& k);

/// In-place variant; out.size() must equal history.dimension().
void effective_gradient_into(const GradientHistory& history,
                             const fracmem::KernelCoefficients& k,
                             std::span<double> out);

class Optimizer {
 public:
  virtual ~Optimizer() = default;
  virtual void step(std::span<double> params,
                    std::span<const double> gradient) = 0;
  virtual void reset() = 0;
  virtual std::size_t step_count() const = 0;
  virtual double learning_rate() const = 0;
  virtual std::string_view kind() const = 0;
  /// Fresh instance with the same configuration and zeroed state.
  virtual std::unique_ptr<Optimizer> clone_fresh() const = 0;
};

class ClassicalGd final : public Optimizer {
 public:
  explicit ClassicalGd(double learning_rate);

  void step(std::span<double> params, std::span<const double> gradient) override;
  void reset() override { steps_ = 0; }
  std::size_t step_count() const override { return steps_; }
  double learning_rate() const override { return lr_; }
  std::string_view kind() const override { return "classical"; }
  std::unique_ptr<Optimizer> clone_fresh() const override;

 private:
  double lr_;
  std::size_t steps_ = 0;
};

class WeylOptimizer final : public Optimizer {
 public:
  explicit WeylOptimizer(const WeylConfig& config);

  /// Pushes the gradient into the history, forms the effective gradient and
  /// descends along it. O(L*d) per call, independent of step_count.
  void step(std::span<double> params, std::span<const double> gradient) override;
  void reset() override;
  std::size_t step_count() const override { return steps_; }
  double learning_rate() const override { return config_.learning_rate; }
  std::string_view kind() const override { return "weyl"; }
  std::unique_ptr<Optimizer> clone_fresh() const override;

  const WeylConfig& config() const { return config_; }
  const fracmem::KernelCoefficients& coefficients() const { return coeffs_; }
  const GradientHistory& history() const { return history_; }

 private:
  WeylConfig config_;
  fracmem::KernelCoefficients coeffs_;
  GradientHistory history_;
  std::size_t steps_ = 0;
  std::vector<double> scratch_;
  std::vector<const double*> rows_;
};

}  // namespace wwopt::optim
