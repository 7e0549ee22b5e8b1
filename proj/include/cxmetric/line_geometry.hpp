#pragma once

#include <limits>
#include <string>
#include <vector>

#include "cxmetric/domain.hpp"

namespace cxmetric {

inline constexpr double kTypeTolerance = 1e-7;
inline constexpr int kInfiniteType = std::numeric_limits<int>::max();

struct RadialProbe {
  int theta_samples = 256;
  double bracket_tol = 1e-12;
};

/// Largest (or smallest) boundary distance from a center along the circle
/// of directions e^{i theta} xi.
struct ContactPoint {
  CVec Q;
  double R = 0.0;
  double theta_star = 0.0;
};

/// Distance r with rho(center + r e^{i theta} xi) = 0, |xi| = 1.
double boundary_radius(const ConvexDomain& domain, const CVec& center, const CVec& xi, double theta,
                       double bracket_tol = 1e-12);

/// R_xi = sup over theta of boundary_radius: theta grid, then golden-section
/// refinement around the grid argmax.
ContactPoint max_radius(const ConvexDomain& domain, const CVec& center, const CVec& xi,
                        const RadialProbe& probe = {});

/// Radius of the largest round disc center + zeta xi, |zeta| < r, inside the
/// domain (same search, minimizing).
ContactPoint min_radius(const ConvexDomain& domain, const CVec& center, const CVec& xi,
                        const RadialProbe& probe = {});

enum class TypeMethod { taylor, regression };

struct LineTypeEstimate {
  int m = kInfiniteType;
  TypeMethod method = TypeMethod::taylor;
  bool exact = false;  // taylor method with exact term inspection
  /// Magnitude of the homogeneous part of order k, k = 0..order_cap.
  std::vector<double> coefficient_table;
  double fit_r2 = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> diagnostics;

  [[nodiscard]] bool finite() const { return m != kInfiniteType; }
};

struct LineTypeOptions {
  int order_cap = 8;
  /// Use the numerical moment route even when an exact line restriction exists.
  bool force_numeric = false;
  /// Circle radii for the moment route, largest first, each half the last.
  std::vector<double> radii = {1e-1, 5e-2, 2.5e-2};
};

/// Vanishing order at zeta = 0 of zeta -> rho(P + zeta xi). Throws
/// TypeExceedsCap when nothing up to order_cap is nonzero.
LineTypeEstimate line_type(const ConvexDomain& domain, const CVec& p, const CVec& xi,
                           const LineTypeOptions& options = {});

/// Log-spaced grid of count points in [lo, hi].
std::vector<double> log_grid(double lo, double hi, int count);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares of log(values) against log(xs).
LinearFit loglog_fit(const std::vector<double>& xs, const std::vector<double>& values);

enum class RadiusKind {
  automatic,  // maximal for complex-tangential xi, inscribed otherwise
  maximal,
  inscribed,
};

struct RadiusScaling {
  LinearFit fit;
  std::vector<double> deltas;
  std::vector<double> radii;
  bool monotone = true;
};

/// Slope of log R_xi(delta) against log delta over a log-spaced grid (>= 8
/// points).
RadiusScaling radius_scaling_exponent(const ConvexDomain& domain, const CVec& p, const CVec& xi,
                                      const std::vector<double>& delta_grid,
                                      RadiusKind kind = RadiusKind::automatic,
                                      const RadialProbe& probe = {});

/// Line type from round(1 / slope) of the radius law.
LineTypeEstimate line_type_by_regression(const ConvexDomain& domain, const CVec& p, const CVec& xi,
                                         const std::vector<double>& delta_grid,
                                         const RadialProbe& probe = {});

/// |<d rho(Q), e^{i theta*} xi>| delta^{1/m - 1}.
double gradient_ratio(const ConvexDomain& domain, const ContactPoint& contact, const CVec& xi,
                      double delta, int m);

}  // namespace cxmetric
