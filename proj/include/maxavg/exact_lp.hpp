#pragma once

#include "maxavg/rational.hpp"

#include <optional>
#include <vector>

namespace maxavg {

// Finds lambda >= 0 with sum(lambda) = 1 and sum(lambda_v * points[v]) = target.
// Phase-one simplex over exact rationals with Bland's rule, so it always terminates.
std::optional<std::vector<Rational>> convex_weights(const std::vector<std::vector<Rational>>& points,
                                                    const std::vector<Rational>& target);

}  // namespace maxavg
