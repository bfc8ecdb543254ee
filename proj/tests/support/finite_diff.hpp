#pragma once

#include <vector>

#include "wwopt/data.hpp"
#include "wwopt/model.hpp"

namespace wwopt::testsupport {

/// Central-difference gradient of bce_loss in the flat [weights..., bias]
/// layout: (loss(theta + h e_j) - loss(theta - h e_j)) / (2h) per component.
std::vector<double> fd_bce_gradient(const LogisticModel& model,
                                    const Dataset& ds, double h);

}  // namespace wwopt::testsupport
