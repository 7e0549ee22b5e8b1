#include "cxmetric/sampling.hpp"

#include <cmath>

namespace cxmetric {
namespace {

CVec near_boundary(const ConvexDomain& domain, Rng& rng) {
  std::uniform_real_distribution<double> depth(-6.0, -1.0);
  const CVec dir = random_unit_vector(domain.dimension(), rng);
  const double exit = ray_exit_distance(domain, domain.center(), dir);
  return domain.center() + exit * (1.0 - std::pow(10.0, depth(rng))) * dir;
}

}  // namespace

std::vector<CVec> sample_mixed(const ConvexDomain& domain, std::size_t count, Rng& rng,
                               const std::vector<CVec>& focus, double focus_scale) {
  const bool use_focus = !focus.empty() && focus_scale > 0.0;
  const std::size_t n_focus = use_focus ? count / 10 : 0;
  const std::size_t n_boundary = (3 * count) / 10;
  const std::size_t n_uniform = count - n_focus - n_boundary;

  std::vector<CVec> out = sample_interior(domain, n_uniform, rng);
  out.reserve(count);
  for (std::size_t k = 0; k < n_boundary; ++k) out.push_back(near_boundary(domain, rng));

  std::uniform_real_distribution<double> spread(-2.0, 0.6);
  for (std::size_t k = 0; k < n_focus; ++k) {
    const CVec& anchor = focus[k % focus.size()];
    bool placed = false;
    for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
      CVec z = anchor + (focus_scale * std::pow(10.0, spread(rng))) *
                            random_unit_vector(domain.dimension(), rng);
      if (domain.contains(z)) {
        out.push_back(std::move(z));
        placed = true;
      }
    }
    if (!placed) out.push_back(near_boundary(domain, rng));
  }
  return out;
}

}  // namespace cxmetric
