#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "support/pr_oracle.hpp"
#include "wwopt/errors.hpp"
#include "wwopt/metrics.hpp"
#include "wwopt/rng.hpp"

using namespace wwopt;

TEST_SUITE("metrics") {

TEST_CASE("four-point example") {
  const std::vector<double> scores = {0.9, 0.7, 0.4, 0.2};
  const std::vector<int> labels = {1, 0, 1, 0};
  const metrics::PRCurve c = metrics::pr_curve(scores, labels);
  // threshold 0.9: P=1, R=1/2 -> area 1/2
  // threshold 0.4: P=2/3, R=1 -> area (1/2) * (2/3)
  CHECK(c.auc == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  REQUIRE(c.points.size() == 4);
  CHECK(c.points.front().threshold == 0.2);
  CHECK(c.points.back().threshold == 0.9);
  CHECK(c.points.back().precision == 1.0);
  CHECK(c.points.back().recall == 0.5);
}

TEST_CASE("perfect ranking scores unit area") {
  const std::vector<double> scores = {0.8, 0.7, 0.3, 0.2, 0.1};
  const std::vector<int> labels = {1, 1, 0, 0, 0};
  CHECK(metrics::pr_curve(scores, labels).auc == 1.0);
}

TEST_CASE("fully tied scores collapse to prevalence") {
  const std::vector<double> scores = {0.5, 0.5, 0.5, 0.5};
  const std::vector<int> labels = {1, 0, 0, 0};
  const metrics::PRCurve c = metrics::pr_curve(scores, labels);
  REQUIRE(c.points.size() == 1);
  CHECK(c.points[0].precision == 0.25);
  CHECK(c.points[0].recall == 1.0);
  CHECK(c.auc == 0.25);
}

TEST_CASE("area depends only on the ranking") {
  SplitMix64 rng(314);
  std::vector<double> scores(200);
  std::vector<int> labels(200);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = rng.next_gaussian();
    labels[i] = rng.next_double() < 0.3 ? 1 : 0;
  }
  labels[0] = 1;
  labels[1] = 0;
  std::vector<double> warped(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i)
    warped[i] = std::exp(0.5 * scores[i]);  // strictly increasing map
  const double a = metrics::pr_curve(scores, labels).auc;
  const double b = metrics::pr_curve(warped, labels).auc;
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("curve points are ordered and anchored") {
  const std::vector<double> scores = {0.1, 0.9, 0.5, 0.3, 0.7, 0.7};
  const std::vector<int> labels = {0, 1, 1, 0, 0, 1};
  const metrics::PRCurve c = metrics::pr_curve(scores, labels);
  REQUIRE(!c.points.empty());
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    CHECK(c.points[i].threshold > c.points[i - 1].threshold);
    CHECK(c.points[i].recall <= c.points[i - 1].recall);
  }
  CHECK(c.points.front().recall == 1.0);  // lowest threshold keeps everything
  for (const metrics::PRPoint& p : c.points) {
    CHECK(p.precision > 0.0);
    CHECK(p.precision <= 1.0);
  }
}

TEST_CASE("random instances agree with the quadratic recomputation") {
  SplitMix64 rng(2718);
  for (int instance = 0; instance < 200; ++instance) {
    const std::size_t n = 2 + rng.next_below(120);
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      // coarse score grid so ties are common
      scores[i] = static_cast<double>(rng.next_below(16)) / 16.0;
      labels[i] = rng.next_double() < 0.4 ? 1 : 0;
    }
    labels[0] = 1;
    labels[n - 1] = 0;
    const double fast = metrics::pr_curve(scores, labels).auc;
    const double slow = testsupport::pr_auc_oracle(scores, labels);
    CHECK(std::abs(fast - slow) <= 1e-12);
  }
}

TEST_CASE("degenerate inputs are rejected") {
  const std::vector<double> s1 = {0.5, 0.4};
  CHECK_THROWS_AS(metrics::pr_curve(s1, std::vector<int>{1}), DimensionError);
  CHECK_THROWS_AS(metrics::pr_curve(s1, std::vector<int>{1, 2}), DomainError);
  CHECK_THROWS_AS(metrics::pr_curve(s1, std::vector<int>{1, 1}), DomainError);
  CHECK_THROWS_AS(metrics::pr_curve(s1, std::vector<int>{0, 0}), DomainError);
  const std::vector<double> nan_scores = {0.5, std::nan("")};
  CHECK_THROWS_AS(metrics::pr_curve(nan_scores, std::vector<int>{1, 0}),
                  DomainError);
  CHECK_THROWS_AS(metrics::pr_curve(std::vector<double>{}, std::vector<int>{}),
                  DomainError);
}

TEST_CASE("total variation") {
  CHECK(metrics::total_variation(std::vector<double>{1.0, 3.0, 2.0}) == 3.0);
  CHECK(metrics::total_variation(std::vector<double>{5.0, 5.0, 5.0}) == 0.0);
  // monotone sequences: TV telescopes to |first - last|
  CHECK(metrics::total_variation(std::vector<double>{9.0, 4.0, 2.0, 1.0}) ==
        8.0);
  CHECK_THROWS_AS(metrics::total_variation(std::vector<double>{1.0}),
                  DomainError);
}

TEST_CASE("csv serialization carries full precision") {
  const std::vector<double> scores = {0.9, 0.7, 0.4, 0.2};
  const std::vector<int> labels = {1, 0, 1, 0};
  const metrics::PRCurve c = metrics::pr_curve(scores, labels);
  std::ostringstream out;
  metrics::write_csv(c, out);
  const std::string text = out.str();
  CHECK(text.rfind("threshold,precision,recall\n", 0) == 0);
  CHECK(text.find("0.66666666666666663") != std::string::npos);
  CHECK(text.find(',') != std::string::npos);
  // four data lines plus the header
  std::size_t lines = 0;
  for (char ch : text)
    if (ch == '\n') ++lines;
  CHECK(lines == 5);
}

}  // TEST_SUITE
