#include "wwopt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <ostream>

#include "wwopt/csvio.hpp"
#include "wwopt/errors.hpp"

namespace wwopt::metrics {

PRCurve pr_curve(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size())
    throw DimensionError("scores and labels have different lengths");

  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1)
      throw DomainError("label at index " + std::to_string(i) +
                        " is not 0 or 1");
    if (!std::isfinite(scores[i]))
      throw DomainError("score at index " + std::to_string(i) +
                        " is not finite");
    n_pos += static_cast<std::size_t>(labels[i]);
  }
  if (n_pos == 0) throw DomainError("pr_curve needs at least one positive");
  if (n_pos == labels.size())
    throw DomainError("pr_curve needs at least one negative");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  PRCurve curve;
  const double total_pos = static_cast<double>(n_pos);
  std::size_t tp = 0;
  double auc = 0.0;
  double prev_recall = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = scores[order[i]];
    // Everything tied at this score crosses the threshold as one group.
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == threshold) {
      tp += static_cast<std::size_t>(labels[order[j]]);
      ++j;
    }
    // j = number of samples scored at or above this threshold.
    const double recall = static_cast<double>(tp) / total_pos;
    const double precision = static_cast<double>(tp) / static_cast<double>(j);
    auc += (recall - prev_recall) * precision;
    prev_recall = recall;
    curve.points.push_back({threshold, precision, recall});
    i = j;
  }
  curve.auc = auc;
  // Stored by ascending threshold; the sweep above ran high-to-low.
  std::reverse(curve.points.begin(), curve.points.end());
  return curve;
}

double total_variation(std::span<const double> xs) {
  if (xs.size() < 2)
    throw DomainError("total_variation needs at least two samples");
  double tv = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) tv += std::abs(xs[i] - xs[i - 1]);
  return tv;
}

void write_csv(const PRCurve& curve, std::ostream& out) {
  out << "threshold,precision,recall\n";
  for (const PRPoint& p : curve.points) {
    out << full_precision(p.threshold) << ',' << full_precision(p.precision)
        << ',' << full_precision(p.recall) << '\n';
  }
}

}  // namespace wwopt::metrics
