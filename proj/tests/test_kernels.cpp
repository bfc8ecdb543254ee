#include <cmath>
#include <cstring>
#include <vector>

#include "doctest.h"
#include "wwopt/errors.hpp"
#include "wwopt/kernels.hpp"
#include "wwopt/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kn = wwopt::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  wwopt::SplitMix64 rng(seed);
  std::vector<double> out(n);
  for (double& v : out) v = rng.next_gaussian();
  return out;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// More threads than cores is fine for a correctness check; the point is to
// force real parallel decomposition even on a small machine.
void force_threads() {
#ifdef _OPENMP
  omp_set_num_threads(4);
#endif
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("block_sum matches the fixed-block contract") {
  // 2.5 blocks, so the block boundaries actually matter.
  const std::size_t n = kn::kBlockSize * 5 / 2;
  const std::vector<double> xs = random_vec(n, 1);

  double expect = 0.0;
  for (std::size_t begin = 0; begin < n; begin += kn::kBlockSize) {
    double partial = 0.0;
    for (std::size_t i = begin; i < std::min(begin + kn::kBlockSize, n); ++i)
      partial += xs[i];
    expect += partial;
  }
  CHECK(kn::serial::block_sum(xs) == expect);

  force_threads();
  CHECK(kn::omp::block_sum(xs) == expect);
  CHECK(kn::block_sum(xs) == expect);
}

TEST_CASE("serial and omp paths are bit-identical") {
  force_threads();
  const std::size_t n = 50000;  // above the parallel dispatch threshold
  const std::vector<double> xs = random_vec(n, 2);

  SUBCASE("block_sum") {
    const double a = kn::serial::block_sum(xs);
    const double b = kn::omp::block_sum(xs);
    CHECK(std::memcmp(&a, &b, sizeof(double)) == 0);
  }
  SUBCASE("axpy and scale") {
    std::vector<double> y1 = random_vec(n, 3);
    std::vector<double> y2 = y1;
    kn::serial::axpy(y1, 0.37, xs);
    kn::omp::axpy(y2, 0.37, xs);
    CHECK(bitwise_equal(y1, y2));
    kn::serial::scale(y1, -1.75);
    kn::omp::scale(y2, -1.75);
    CHECK(bitwise_equal(y1, y2));
  }
  SUBCASE("matvec_rows and matvec_cols") {
    const std::size_t rows = 700;
    const std::size_t cols = 73;
    const std::vector<double> x = random_vec(rows * cols, 4);
    const std::vector<double> w = random_vec(cols, 5);
    const std::vector<double> r = random_vec(rows, 6);
    std::vector<double> out1(rows);
    std::vector<double> out2(rows);
    kn::serial::matvec_rows(x.data(), rows, cols, w, 0.5, out1);
    kn::omp::matvec_rows(x.data(), rows, cols, w, 0.5, out2);
    CHECK(bitwise_equal(out1, out2));
    std::vector<double> c1(cols);
    std::vector<double> c2(cols);
    kn::serial::matvec_cols(x.data(), rows, cols, r, c1);
    kn::omp::matvec_cols(x.data(), rows, cols, r, c2);
    CHECK(bitwise_equal(c1, c2));
  }
  SUBCASE("weighted_sum_rows") {
    const std::size_t n_rows = 33;
    const std::size_t dim = 4097;
    std::vector<std::vector<double>> storage;
    std::vector<const double*> rows;
    for (std::size_t a = 0; a < n_rows; ++a) {
      storage.push_back(random_vec(dim, 50 + a));
      rows.push_back(storage.back().data());
    }
    const std::vector<double> weights = random_vec(n_rows, 7);
    std::vector<double> out1(dim);
    std::vector<double> out2(dim);
    kn::serial::weighted_sum_rows(rows, weights, out1);
    kn::omp::weighted_sum_rows(rows, weights, out2);
    CHECK(bitwise_equal(out1, out2));
  }
  SUBCASE("logistic_probs, bce_terms, residual") {
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = (i * 7 % 3) == 0 ? 1 : 0;
    std::vector<double> p1(n);
    std::vector<double> p2(n);
    kn::serial::logistic_probs(xs, p1);
    kn::omp::logistic_probs(xs, p2);
    CHECK(bitwise_equal(p1, p2));
    std::vector<double> t1(n);
    std::vector<double> t2(n);
    kn::serial::bce_terms(p1, labels, t1);
    kn::omp::bce_terms(p2, labels, t2);
    CHECK(bitwise_equal(t1, t2));
    kn::serial::residual(p1, labels, t1);
    kn::omp::residual(p2, labels, t2);
    CHECK(bitwise_equal(t1, t2));
  }
}

TEST_CASE("dispatcher setting never changes results") {
  const std::size_t n = 100000;
  const std::vector<double> xs = random_vec(n, 8);
  std::vector<double> y1 = random_vec(n, 9);
  std::vector<double> y2 = y1;

  kn::set_parallel(true);
  const double s1 = kn::block_sum(xs);
  kn::axpy(y1, 1.0 / 3.0, xs);
  kn::set_parallel(false);
  const double s2 = kn::block_sum(xs);
  kn::axpy(y2, 1.0 / 3.0, xs);
  kn::set_parallel(true);

  CHECK(std::memcmp(&s1, &s2, sizeof(double)) == 0);
  CHECK(bitwise_equal(y1, y2));
}

TEST_CASE("matvec semantics") {
  // 2x3 matrix, worked by hand.
  const std::vector<double> x = {1, 2, 3, 4, 5, 6};
  const std::vector<double> w = {1, 0, -1};
  std::vector<double> out(2);
  kn::serial::matvec_rows(x.data(), 2, 3, w, 10.0, out);
  CHECK(out[0] == doctest::Approx(10.0 + 1 - 3));
  CHECK(out[1] == doctest::Approx(10.0 + 4 - 6));

  const std::vector<double> r = {2, -1};
  std::vector<double> cols(3);
  kn::serial::matvec_cols(x.data(), 2, 3, r, cols);
  CHECK(cols[0] == doctest::Approx(2 - 4));
  CHECK(cols[1] == doctest::Approx(4 - 5));
  CHECK(cols[2] == doctest::Approx(6 - 6));
}

TEST_CASE("stable sigmoid endpoints") {
  CHECK(kn::stable_sigmoid(0.0) == 0.5);
  CHECK(kn::stable_sigmoid(50.0) >= 1.0 - 1e-20);
  CHECK(kn::stable_sigmoid(-50.0) <= 1e-20);
  CHECK(kn::stable_sigmoid(-745.0) >= 0.0);  // no underflow surprises
  CHECK(std::isfinite(kn::stable_sigmoid(745.0)));
}

TEST_CASE("bce_terms clamps saturated probabilities") {
  const std::vector<double> probs = {0.0, 1.0};
  const std::vector<int> labels = {1, 0};
  std::vector<double> terms(2);
  kn::serial::bce_terms(probs, labels, terms);
  CHECK(terms[0] == doctest::Approx(-std::log(1e-12)));
  CHECK(terms[1] == doctest::Approx(-std::log(1e-12)));
  CHECK(std::isfinite(terms[0]));
}

TEST_CASE("size mismatches are rejected") {
  std::vector<double> a(3);
  std::vector<double> b(4);
  CHECK_THROWS_AS(kn::serial::axpy(a, 1.0, b), wwopt::DimensionError);
  std::vector<int> labels(3);
  std::vector<double> out(4);
  CHECK_THROWS_AS(kn::serial::residual(a, labels, out),
                  wwopt::DimensionError);
}

}  // TEST_SUITE
