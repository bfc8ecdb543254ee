#include "wwopt/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <vector>

#include "wwopt/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wwopt::kernels {

namespace {

std::atomic<bool> g_parallel{true};

// Minimum number of scalar operations before a parallel region pays off.
constexpr std::size_t kMinParallelWork = 16384;

inline void check_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw DimensionError("kernel operand sizes differ");
}

inline double bce_term(double p, int label) {
  double pc = std::clamp(p, kProbEpsilon, 1.0 - kProbEpsilon);
  return label ? -std::log(pc) : -std::log(1.0 - pc);
}

}  // namespace

bool parallel_enabled() { return g_parallel.load(std::memory_order_relaxed); }

void set_parallel(bool enabled) {
  g_parallel.store(enabled, std::memory_order_relaxed);
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace serial {

double block_sum(std::span<const double> xs) {
  double total = 0.0;
  for (std::size_t begin = 0; begin < xs.size(); begin += kBlockSize) {
    const std::size_t end = std::min(begin + kBlockSize, xs.size());
    double partial = 0.0;
    for (std::size_t i = begin; i < end; ++i) partial += xs[i];
    total += partial;
  }
  return total;
}

void axpy(std::span<double> y, double a, std::span<const double> x) {
  check_same_size(y.size(), x.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

void scale(std::span<double> xs, double a) {
  for (double& v : xs) v *= a;
}

void weighted_sum_rows(std::span<const double* const> rows,
                       std::span<const double> weights,
                       std::span<double> out) {
  check_same_size(rows.size(), weights.size());
  const std::size_t n_rows = rows.size();
  for (std::size_t j = 0; j < out.size(); ++j) {
    double acc = 0.0;
    for (std::size_t a = 0; a < n_rows; ++a) acc += weights[a] * rows[a][j];
    out[j] = acc;
  }
}

void matvec_rows(const double* x, std::size_t n, std::size_t d,
                 std::span<const double> w, double bias,
                 std::span<double> out) {
  check_same_size(w.size(), d);
  check_same_size(out.size(), n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = x + i * d;
    double acc = bias;
    for (std::size_t j = 0; j < d; ++j) acc += row[j] * w[j];
    out[i] = acc;
  }
}

void matvec_cols(const double* x, std::size_t n, std::size_t d,
                 std::span<const double> r, std::span<double> out) {
  check_same_size(r.size(), n);
  check_same_size(out.size(), d);
  for (std::size_t j = 0; j < d; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i * d + j] * r[i];
    out[j] = acc;
  }
}

void logistic_probs(std::span<const double> margins, std::span<double> out) {
  check_same_size(out.size(), margins.size());
  for (std::size_t i = 0; i < margins.size(); ++i)
    out[i] = stable_sigmoid(margins[i]);
}

void bce_terms(std::span<const double> probs, std::span<const int> labels,
               std::span<double> out) {
  check_same_size(probs.size(), labels.size());
  check_same_size(out.size(), probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i)
    out[i] = bce_term(probs[i], labels[i]);
}

void residual(std::span<const double> probs, std::span<const int> labels,
              std::span<double> out) {
  check_same_size(probs.size(), labels.size());
  check_same_size(out.size(), probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i)
    out[i] = probs[i] - static_cast<double>(labels[i]);
}

}  // namespace serial

namespace omp {

#ifdef _OPENMP

double block_sum(std::span<const double> xs) {
  const std::size_t n_blocks = (xs.size() + kBlockSize - 1) / kBlockSize;
  if (n_blocks < 2) return serial::block_sum(xs);
  std::vector<double> partials(n_blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (long long b = 0; b < static_cast<long long>(n_blocks); ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kBlockSize;
    const std::size_t end = std::min(begin + kBlockSize, xs.size());
    double partial = 0.0;
    for (std::size_t i = begin; i < end; ++i) partial += xs[i];
    partials[static_cast<std::size_t>(b)] = partial;
  }
  double total = 0.0;
  for (double p : partials) total += p;  // fixed block order
  return total;
}

void axpy(std::span<double> y, double a, std::span<const double> x) {
  check_same_size(y.size(), x.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(y.size()); ++i)
    y[static_cast<std::size_t>(i)] += a * x[static_cast<std::size_t>(i)];
}

void scale(std::span<double> xs, double a) {
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(xs.size()); ++i)
    xs[static_cast<std::size_t>(i)] *= a;
}

void weighted_sum_rows(std::span<const double* const> rows,
                       std::span<const double> weights,
                       std::span<double> out) {
  check_same_size(rows.size(), weights.size());
  const std::size_t n_rows = rows.size();
#pragma omp parallel for schedule(static)
  for (long long j = 0; j < static_cast<long long>(out.size()); ++j) {
    double acc = 0.0;
    for (std::size_t a = 0; a < n_rows; ++a)
      acc += weights[a] * rows[a][static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(j)] = acc;
  }
}

void matvec_rows(const double* x, std::size_t n, std::size_t d,
                 std::span<const double> w, double bias,
                 std::span<double> out) {
  check_same_size(w.size(), d);
  check_same_size(out.size(), n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    const double* row = x + static_cast<std::size_t>(i) * d;
    double acc = bias;
    for (std::size_t j = 0; j < d; ++j) acc += row[j] * w[j];
    out[static_cast<std::size_t>(i)] = acc;
  }
}

void matvec_cols(const double* x, std::size_t n, std::size_t d,
                 std::span<const double> r, std::span<double> out) {
  check_same_size(r.size(), n);
  check_same_size(out.size(), d);
#pragma omp parallel for schedule(static)
  for (long long j = 0; j < static_cast<long long>(d); ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      acc += x[i * d + static_cast<std::size_t>(j)] * r[i];
    out[static_cast<std::size_t>(j)] = acc;
  }
}

void logistic_probs(std::span<const double> margins, std::span<double> out) {
  check_same_size(out.size(), margins.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(margins.size()); ++i)
    out[static_cast<std::size_t>(i)] =
        stable_sigmoid(margins[static_cast<std::size_t>(i)]);
}

void bce_terms(std::span<const double> probs, std::span<const int> labels,
               std::span<double> out) {
  check_same_size(probs.size(), labels.size());
  check_same_size(out.size(), probs.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(probs.size()); ++i)
    out[static_cast<std::size_t>(i)] =
        bce_term(probs[static_cast<std::size_t>(i)],
                 labels[static_cast<std::size_t>(i)]);
}

void residual(std::span<const double> probs, std::span<const int> labels,
              std::span<double> out) {
  check_same_size(probs.size(), labels.size());
  check_same_size(out.size(), probs.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(probs.size()); ++i)
    out[static_cast<std::size_t>(i)] =
        probs[static_cast<std::size_t>(i)] -
        static_cast<double>(labels[static_cast<std::size_t>(i)]);
}

#else  // !_OPENMP: the "parallel" variants are the reference ones.

double block_sum(std::span<const double> xs) { return serial::block_sum(xs); }
void axpy(std::span<double> y, double a, std::span<const double> x) {
  serial::axpy(y, a, x);
}
void scale(std::span<double> xs, double a) { serial::scale(xs, a); }
void weighted_sum_rows(std::span<const double* const> rows,
                       std::span<const double> weights,
                       std::span<double> out) {
  serial::weighted_sum_rows(rows, weights, out);
}
void matvec_rows(const double* x, std::size_t n, std::size_t d,
                 std::span<const double> w, double bias,
                 std::span<double> out) {
  serial::matvec_rows(x, n, d, w, bias, out);
}
void matvec_cols(const double* x, std::size_t n, std::size_t d,
                 std::span<const double> r, std::span<double> out) {
  serial::matvec_cols(x, n, d, r, out);
}
void logistic_probs(std::span<const double> margins, std::span<double> out) {
  serial::logistic_probs(margins, out);
}
void bce_terms(std::span<const double> probs, std::span<const int> labels,
               std::span<double> out) {
  serial::bce_terms(probs, labels, out);
}
void residual(std::span<const double> probs, std::span<const int> labels,
              std::span<double> out) {
  serial::residual(probs, labels, out);
}

#endif

}  // namespace omp

namespace {

inline bool go_parallel(std::size_t work) {
  return parallel_enabled() && work >= kMinParallelWork && max_threads() > 1;
}

}  // namespace

double block_sum(std::span<const double> xs) {
  return go_parallel(xs.size()) ? omp::block_sum(xs) : serial::block_sum(xs);
}

void axpy(std::span<double> y, double a, std::span<const double> x) {
  go_parallel(y.size()) ? omp::axpy(y, a, x) : serial::axpy(y, a, x);
}

void scale(std::span<double> xs, double a) {
  go_parallel(xs.size()) ? omp::scale(xs, a) : serial::scale(xs, a);
}

void weighted_sum_rows(std::span<const double* const> rows,
                       std::span<const double> weights,
                       std::span<double> out) {
  go_parallel(rows.size() * out.size())
      ? omp::weighted_sum_rows(rows, weights, out)
      : serial::weighted_sum_rows(rows, weights, out);
}

void matvec_rows(const double* x, std::size_t n, std::size_t d,
                 std::span<const double> w, double bias,
                 std::span<double> out) {
  go_parallel(n * d) ? omp::matvec_rows(x, n, d, w, bias, out)
                     : serial::matvec_rows(x, n, d, w, bias, out);
}

void matvec_cols(const double* x, std::size_t n, std::size_t d,
                 std::span<const double> r, std::span<double> out) {
  go_parallel(n * d) ? omp::matvec_cols(x, n, d, r, out)
                     : serial::matvec_cols(x, n, d, r, out);
}

void logistic_probs(std::span<const double> margins, std::span<double> out) {
  go_parallel(margins.size()) ? omp::logistic_probs(margins, out)
                              : serial::logistic_probs(margins, out);
}

void bce_terms(std::span<const double> probs, std::span<const int> labels,
               std::span<double> out) {
  go_parallel(probs.size()) ? omp::bce_terms(probs, labels, out)
                            : serial::bce_terms(probs, labels, out);
}

void residual(std::span<const double> probs, std::span<const int> labels,
              std::span<double> out) {
  go_parallel(probs.size()) ? omp::residual(probs, labels, out)
                            : serial::residual(probs, labels, out);
}

}  // namespace wwopt::kernels
