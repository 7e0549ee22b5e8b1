#pragma once

#include <nlohmann/json.hpp>

#include "cxmetric/line_geometry.hpp"

namespace cxmetric {

enum class DiscKind { affine, recentered };

/// phi(zeta) = center + radius zeta direction + normal_shift zeta^2 normal.
/// Affine discs have normal_shift = 0.
struct DiscFamily {
  DiscKind kind = DiscKind::affine;
  CVec center;
  CVec direction;
  CVec normal;
  double radius = 0.0;
  Complex normal_shift{0.0, 0.0};

  [[nodiscard]] CVec operator()(Complex zeta) const;
  [[nodiscard]] nlohmann::json to_json() const;
};

inline constexpr int kDiscAngles = 64;
inline constexpr int kDiscRings = 8;
inline constexpr double kDiscSlack = 1e-10;

/// rho(phi(zeta)) < 1e-10 on 64 boundary angles x 8 radii of the closed
/// unit disc.
bool disc_contained_sampled(const ConvexDomain& domain, const DiscFamily& disc);

struct DiscBound {
  double value = 0.0;  // |xi| / r
  DiscFamily disc;
  int evaluations = 0;
  bool improved = false;  // recentered search beat the affine disc
  bool fallback = false;  // search failed and the affine disc was returned
};

/// Largest round disc P_delta + zeta r xi/|xi| inside the domain, certified by
/// convexity: F(P_delta, xi) <= |xi| / r.
DiscBound affine_disc_bound(const ConvexDomain& domain, const CVec& center, const CVec& xi,
                            const RadialProbe& probe = {});

struct RecenteredOptions {
  int budget = 200;  // line searches over r
  /// Hold d at zero (reproduces the affine bound).
  bool freeze_shift = false;
};

/// Coordinate descent over the normal shift d (two real parameters), with a
/// line search for the largest admissible r at each d. Never worse than the
/// affine disc.
DiscBound recentered_disc_bound(const ConvexDomain& domain, const CVec& center, const CVec& xi,
                                const CVec& normal, const RecenteredOptions& options = {},
                                const RadialProbe& probe = {});

/// Poincare metric |xi| / (1 - |z|^2) of the unit disc.
double poincare(Complex z, Complex xi);

/// Invariant metric of the unit ball of C^n:
/// sqrt(|xi|^2 (1 - |z|^2) + |<z, xi>|^2) / (1 - |z|^2).
double ball_metric_oracle(const CVec& z, const CVec& xi);

}  // namespace cxmetric
