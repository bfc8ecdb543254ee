#pragma once

#include <iosfwd>
#include <span>
#include <vector>

// Evaluation metrics: precision-recall curves with average-precision area,
// and total variation as the smoothness measure for loss traces.

namespace wwopt::metrics {

struct PRPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

/// Points are ordered by ascending threshold, one per distinct score; recall
/// is non-increasing in threshold and reaches 1 at the lowest threshold.
struct PRCurve {
  std::vector<PRPoint> points;
  double auc = 0.0;
};

/// Sweeps a decision threshold down through the distinct score values. Tied
/// scores cross the threshold together. The area is average precision,
/// sum over threshold steps of (recall_k - recall_{k-1}) * precision_k —
/// a right-step integral, never linear interpolation in PR space (that is
/// known to overestimate the area).
PRCurve pr_curve(std::span<const double> scores, std::span<const int> labels);

/// Sum of |x_{k+1} - x_k|; requires at least two samples.
double total_variation(std::span<const double> xs);

/// "threshold,precision,recall" header plus one full-precision row per point.
void write_csv(const PRCurve& curve, std::ostream& out);

}  // namespace wwopt::metrics
