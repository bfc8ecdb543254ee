#pragma once

#include <cmath>
#include <cstddef>
#include <span>

// Data-parallel primitives behind the optimizers and the logistic model.
//
// Every kernel exists twice: a serial reference implementation and an OpenMP
// variant. Both accumulate each output element in the same fixed order, so
// they produce bit-identical results for any thread count; scalar reductions
// use a fixed block decomposition (kBlockSize) whose combine order never
// depends on the schedule. The dispatching entry points at the bottom pick
// the parallel path only when it is enabled and the work is large enough to
// pay for a fork — the choice never changes the numbers.

namespace wwopt::kernels {

/// Block length of the deterministic scalar reduction. Part of the numeric
/// contract: block_sum(x) = sum over blocks, each block summed left to right.
inline constexpr std::size_t kBlockSize = 4096;

bool parallel_enabled();
void set_parallel(bool enabled);
int max_threads();

/// Branch-by-sign logistic sigmoid: never exponentiates a positive argument,
/// so it cannot overflow. Single-sample and batch paths share this function.
inline double stable_sigmoid(double m) {
  if (m >= 0.0) {
    return 1.0 / (1.0 + std::exp(-m));
  }
  const double e = std::exp(m);
  return e / (1.0 + e);
}

namespace serial {

double block_sum(std::span<const double> xs);

/// y += a * x
void axpy(std::span<double> y, double a, std::span<const double> x);

/// xs *= a
void scale(std::span<double> xs, double a);

/// out[j] = sum_a weights[a] * rows[a][j], ages accumulated in order.
void weighted_sum_rows(std::span<const double* const> rows,
                       std::span<const double> weights, std::span<double> out);

/// out[i] = bias + sum_j x[i*d + j] * w[j]   (row-major x, n rows, d cols)
void matvec_rows(const double* x, std::size_t n, std::size_t d,
                 std::span<const double> w, double bias, std::span<double> out);

/// out[j] = sum_i x[i*d + j] * r[i]
void matvec_cols(const double* x, std::size_t n, std::size_t d,
                 std::span<const double> r, std::span<double> out);

/// out[i] = sigmoid(margins[i]), branch-by-sign form.
void logistic_probs(std::span<const double> margins, std::span<double> out);

/// out[i] = -(y_i ln p_i + (1-y_i) ln(1-p_i)), p clamped to [eps, 1-eps].
void bce_terms(std::span<const double> probs, std::span<const int> labels,
               std::span<double> out);

/// out[i] = probs[i] - labels[i]
void residual(std::span<const double> probs, std::span<const int> labels,
              std::span<double> out);

}  // namespace serial

namespace omp {

double block_sum(std::span<const double> xs);
void axpy(std::span<double> y, double a, std::span<const double> x);
void scale(std::span<double> xs, double a);
void weighted_sum_rows(std::span<const double* const> rows,
                       std::span<const double> weights, std::span<double> out);
void matvec_rows(const double* x, std::size_t n, std::size_t d,
                 std::span<const double> w, double bias, std::span<double> out);
void matvec_cols(const double* x, std::size_t n, std::size_t d,
                 std::span<const double> r, std::span<double> out);
void logistic_probs(std::span<const double> margins, std::span<double> out);
void bce_terms(std::span<const double> probs, std::span<const int> labels,
               std::span<double> out);
void residual(std::span<const double> probs, std::span<const int> labels,
              std::span<double> out);

}  // namespace omp

double block_sum(std::span<const double> xs);
void axpy(std::span<double> y, double a, std::span<const double> x);
void scale(std::span<double> xs, double a);
void weighted_sum_rows(std::span<const double* const> rows,
                       std::span<const double> weights, std::span<double> out);
void matvec_rows(const double* x, std::size_t n, std::size_t d,
                 std::span<const double> w, double bias, std::span<double> out);
void matvec_cols(const double* x, std::size_t n, std::size_t d,
                 std::span<const double> r, std::span<double> out);
void logistic_probs(std::span<const double> margins, std::span<double> out);
void bce_terms(std::span<const double> probs, std::span<const int> labels,
               std::span<double> out);
void residual(std::span<const double> probs, std::span<const int> labels,
              std::span<double> out);

/// Probability clamp used by bce_terms.
inline constexpr double kProbEpsilon = 1e-12;

}  // namespace wwopt::kernels
