#include <cmath>
#include <cstring>
#include <vector>

#include "doctest.h"
#include "support/finite_diff.hpp"
#include "wwopt/errors.hpp"
#include "wwopt/model.hpp"
#include "wwopt/optim.hpp"
#include "wwopt/rng.hpp"

using namespace wwopt;

namespace {

data::Dataset make_dataset(std::size_t rows, std::size_t cols,
                     std::vector<double> features, std::vector<int> labels) {
  data::Dataset ds;
  ds.rows = rows;
  ds.cols = cols;
  ds.features = std::move(features);
  ds.labels = std::move(labels);
  for (std::size_t j = 0; j < cols; ++j)
    ds.feature_names.push_back("f" + std::to_string(j));
  return ds;
}

data::Dataset random_dataset(std::size_t rows, std::size_t cols,
                       std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> x(rows * cols);
  for (double& v : x) v = rng.next_gaussian();
  std::vector<int> y(rows);
  bool has_pos = false;
  bool has_neg = false;
  for (std::size_t i = 0; i < rows; ++i) {
    y[i] = rng.next_double() < 0.5 ? 0 : 1;
    has_pos = has_pos || y[i] == 1;
    has_neg = has_neg || y[i] == 0;
  }
  if (!has_pos) y[0] = 1;
  if (!has_neg) y[rows > 1 ? 1 : 0] = 0;
  return make_dataset(rows, cols, std::move(x), std::move(y));
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("predictions from the zero model are one half") {
  const LogisticModel m = LogisticModel::zeros(3);
  CHECK(predict_proba(m, std::vector<double>{1.0, -2.0, 3.0}) == 0.5);
}

TEST_CASE("saturated margins stay inside (0, 1) without overflow") {
  LogisticModel m = LogisticModel::zeros(1);
  m.weights[0] = 50.0;
  const double hi = predict_proba(m, std::vector<double>{1.0});
  CHECK(hi >= 1.0 - 1e-20);
  CHECK(hi <= 1.0);
  const double lo = predict_proba(m, std::vector<double>{-1.0});
  CHECK(lo <= 1e-20);
  CHECK(lo >= 0.0);
}

TEST_CASE("hand-computed probability") {
  LogisticModel m = LogisticModel::zeros(2);
  m.weights = {1.0, -1.0};
  m.bias = 0.5;
  // margin = 2 - 1 + 0.5 = 1.5
  CHECK(predict_proba(m, std::vector<double>{2.0, 1.0}) ==
        doctest::Approx(0.81757447619364365).epsilon(1e-12));
}

TEST_CASE("dimension mismatches are rejected") {
  const LogisticModel m = LogisticModel::zeros(2);
  CHECK_THROWS_AS(predict_proba(m, std::vector<double>{1.0}), DimensionError);
  const data::Dataset ds = random_dataset(4, 3, 1);
  CHECK_THROWS_AS(bce_loss(m, ds), DimensionError);
}

TEST_CASE("zero model loss is ln 2") {
  const data::Dataset ds = random_dataset(17, 4, 2);
  const LogisticModel m = LogisticModel::zeros(4);
  CHECK(bce_loss(m, ds) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("single-sample losses match direct evaluation") {
  // margin ln(4) gives p = 0.8 exactly in real arithmetic
  LogisticModel m = LogisticModel::zeros(1);
  m.weights[0] = std::log(4.0);
  const data::Dataset ds = make_dataset(1, 1, {1.0}, {1});
  CHECK(bce_loss(m, ds) == doctest::Approx(-std::log(0.8)).epsilon(1e-12));
}

TEST_CASE("separated data with a saturated model has negligible loss") {
  LogisticModel m = LogisticModel::zeros(1);
  m.weights[0] = 60.0;
  const data::Dataset ds = make_dataset(4, 1, {2.0, 1.5, -2.0, -1.0}, {1, 1, 0, 0});
  CHECK(bce_loss(m, ds) <= 1e-10);
}

TEST_CASE("degenerate datasets are rejected") {
  const LogisticModel m = LogisticModel::zeros(1);
  const data::Dataset empty = make_dataset(0, 1, {}, {});
  CHECK_THROWS_AS(bce_loss(m, empty), DomainError);
  const data::Dataset bad_label = make_dataset(1, 1, {1.0}, {2});
  CHECK_THROWS_AS(bce_loss(m, bad_label), DomainError);
  CHECK_THROWS_AS(bce_gradient(m, bad_label), DomainError);
}

TEST_CASE("balanced symmetric data gives a zero bias gradient") {
  const data::Dataset ds = make_dataset(4, 1, {1.0, 1.0, -1.0, -1.0}, {1, 0, 1, 0});
  const Gradient g = bce_gradient(LogisticModel::zeros(1), ds);
  CHECK(g.bias == 0.0);
  CHECK(g.weights[0] == 0.0);  // the +-0.5 residuals cancel exactly
}

TEST_CASE("analytic gradient matches central finite differences") {
  SplitMix64 rng(42);
  for (int instance = 0; instance < 50; ++instance) {
    const std::size_t rows = 2 + rng.next_below(19);
    const std::size_t cols = 1 + rng.next_below(5);
    const data::Dataset ds = random_dataset(rows, cols, 500 + instance);
    LogisticModel m = LogisticModel::zeros(cols);
    for (double& w : m.weights) w = 0.5 * rng.next_gaussian();
    m.bias = 0.5 * rng.next_gaussian();

    const Gradient g = bce_gradient(m, ds);
    const std::vector<double> fd = testsupport::fd_bce_gradient(m, ds, 1e-6);
    for (std::size_t j = 0; j <= cols; ++j) {
      const double analytic = j < cols ? g.weights[j] : g.bias;
      // components near zero are compared absolutely: central differences
      // carry ~1e-10 of cancellation error regardless of the true magnitude
      const double denom = std::max(std::abs(fd[j]), 1e-3);
      CHECK(std::abs(analytic - fd[j]) / denom <= 1e-6);
    }
  }
}

TEST_CASE("one classical epoch equals one classical step") {
  const data::Dataset ds = random_dataset(30, 3, 7);
  const LogisticModel m0 = LogisticModel::zeros(3);

  const Gradient g = bce_gradient(m0, ds);
  std::vector<double> expect = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t j = 0; j < 3; ++j) expect[j] = -0.1 * g.weights[j];
  expect[3] = -0.1 * g.bias;

  optim::ClassicalGd opt(0.1);
  TrainOptions topt;
  topt.epochs = 1;
  const TrainResult res = train(m0, ds, opt, topt);
  for (std::size_t j = 0; j < 3; ++j)
    CHECK(res.model.weights[j] == doctest::Approx(expect[j]).epsilon(1e-15));
  CHECK(res.model.bias == doctest::Approx(expect[3]).epsilon(1e-15));
  CHECK(res.trace.size() == 2);
  CHECK(res.trace[0].step == 0);
  CHECK(res.trace[1].step == 1);
}

TEST_CASE("a saturated model on agreeable labels stays put") {
  LogisticModel m = LogisticModel::zeros(1);
  m.weights[0] = 50.0;
  const data::Dataset ds = make_dataset(2, 1, {3.0, -3.0}, {1, 0});
  optim::ClassicalGd opt(0.1);
  TrainOptions topt;
  topt.epochs = 5;
  const TrainResult res = train(m, ds, opt, topt);
  CHECK(std::abs(res.model.weights[0] - 50.0) <= 1e-15);
}

TEST_CASE("weyl with a window of one matches classical training") {
  const data::Dataset ds = random_dataset(100, 5, 99);

  optim::ClassicalGd classical(0.1);
  TrainOptions topt;
  topt.epochs = 200;
  const TrainResult rc = train(LogisticModel::zeros(5), ds, classical, topt);

  optim::WeylConfig cfg;
  cfg.window = 1;
  cfg.alpha = 0.6;
  cfg.learning_rate = 0.1;
  optim::WeylOptimizer weyl(cfg);
  const TrainResult rw = train(LogisticModel::zeros(5), ds, weyl, topt);

  REQUIRE(rc.trace.size() == rw.trace.size());
  for (std::size_t i = 0; i < rc.trace.size(); ++i)
    CHECK(std::abs(rc.trace[i].train_loss - rw.trace[i].train_loss) <= 1e-12);
}

TEST_CASE("losses decrease under a conservative step size") {
  const data::Dataset ds = random_dataset(60, 4, 11);
  optim::ClassicalGd opt(0.05);  // well under 1/(4 lambda_max) for unit-scale data
  TrainOptions topt;
  topt.epochs = 100;
  const TrainResult res = train(LogisticModel::zeros(4), ds, opt, topt);
  for (std::size_t i = 1; i < res.trace.size(); ++i)
    CHECK(res.trace[i].train_loss <= res.trace[i - 1].train_loss + 1e-15);
}

TEST_CASE("training twice is bit-identical") {
  const data::Dataset ds = random_dataset(50, 3, 21);
  TrainOptions topt;
  topt.epochs = 50;
  topt.gradient_noise_std = 0.05;
  topt.noise_seed = 777;

  auto run = [&] {
    optim::WeylOptimizer opt(optim::WeylConfig{});
    return train(LogisticModel::zeros(3), ds, opt, topt);
  };
  const TrainResult a = run();
  const TrainResult b = run();
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(std::memcmp(&a.trace[i].train_loss, &b.trace[i].train_loss,
                      sizeof(double)) == 0);
  }
  CHECK(std::memcmp(a.model.weights.data(), b.model.weights.data(),
                    3 * sizeof(double)) == 0);

  TrainOptions other = topt;
  other.noise_seed = 778;
  optim::WeylOptimizer opt(optim::WeylConfig{});
  const TrainResult c = train(LogisticModel::zeros(3), ds, opt, other);
  CHECK(c.trace.back().train_loss != a.trace.back().train_loss);
}

TEST_CASE("evaluation losses ride along when requested") {
  const data::Dataset train_ds = random_dataset(40, 3, 31);
  const data::Dataset eval_ds = random_dataset(20, 3, 32);
  optim::ClassicalGd opt(0.1);
  TrainOptions topt;
  topt.epochs = 10;
  topt.eval_data = &eval_ds;
  const TrainResult res = train(LogisticModel::zeros(3), train_ds, opt, topt);
  CHECK(res.trace.size() == 11);
  for (const TracePoint& p : res.trace) {
    REQUIRE(p.eval_loss.has_value());
    CHECK(std::isfinite(*p.eval_loss));
    CHECK(*p.eval_loss >= 0.0);
  }
}

TEST_CASE("exploding updates raise a divergence error with the step") {
  // the first update overflows the weights to [+inf, -inf]; the second row's
  // margin is then inf - inf = NaN, which must surface as a divergence
  const data::Dataset ds =
      make_dataset(2, 2, {1e10, -1e10, 1.0, 1.0}, {1, 0});
  optim::ClassicalGd opt(1e308);
  TrainOptions topt;
  topt.epochs = 100;
  try {
    train(LogisticModel::zeros(2), ds, opt, topt);
    FAIL("expected a DivergenceError");
  } catch (const DivergenceError& e) {
    CHECK(e.step() >= 1);
    CHECK(e.step() <= 100);
  }
}

TEST_CASE("invalid training options are rejected") {
  const data::Dataset ds = random_dataset(10, 2, 51);
  optim::ClassicalGd opt(0.1);
  TrainOptions topt;
  topt.epochs = 0;
  CHECK_THROWS_AS(train(LogisticModel::zeros(2), ds, opt, topt), ConfigError);
  topt.epochs = 1;
  topt.gradient_noise_std = -1.0;
  CHECK_THROWS_AS(train(LogisticModel::zeros(2), ds, opt, topt), ConfigError);
}

}  // TEST_SUITE
