#pragma once

#include <vector>

#include "cxmetric/domain.hpp"

namespace cxmetric {

/// Interior samples for sup estimates and admissibility checks: 60% uniform
/// in the domain, 30% close to the boundary along rays from the center, 10%
/// within a few multiples of focus_scale of the focus points.
std::vector<CVec> sample_mixed(const ConvexDomain& domain, std::size_t count, Rng& rng,
                               const std::vector<CVec>& focus = {}, double focus_scale = 0.0);

}  // namespace cxmetric
