#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cxmetric/kobayashi.hpp"
#include "cxmetric/sibony.hpp"

namespace cxmetric {

using RealFn = std::function<double(const CVec&)>;
using DiscFn = std::function<double(Complex)>;

/// Five-point complex-line stencil
/// (u(z+h xi) + u(z-h xi) + u(z+ih xi) + u(z-ih xi) - 4u(z)) / (4h^2).
double levi_form(const RealFn& u, const CVec& z, const CVec& xi, double h);
double levi_form(const DiscFn& u, Complex z, Complex xi, double h);

struct LeviProbe {
  /// Stencil step relative to the candidate length scale.
  double h = 1e-4;
  /// Empty: coordinate directions plus random_directions random ones.
  std::vector<CVec> directions;
  int random_directions = 8;
  double tolerance = 1e-8;
  std::uint64_t seed = 0;
};

/// Directions used by a probe in dimension n (all unit, at least 3).
std::vector<CVec> probe_directions(const LeviProbe& probe, int n);

inline constexpr double kLogFloor = 1e-300;
inline constexpr int kCirclePoints = 32;

struct CandidateReport {
  std::size_t samples = 0;
  std::size_t excluded = 0;  // samples within 1e-3 length scales of the base
  double base_value = 0.0;
  double min_value = std::numeric_limits<double>::infinity();
  double max_value = -std::numeric_limits<double>::infinity();
  /// Smallest circle-mean margin of log u (max over the three test radii).
  double min_log_margin = std::numeric_limits<double>::infinity();
  /// Smallest margin / r^2 at the largest radius, a Levi-form estimate.
  double min_levi_estimate = std::numeric_limits<double>::infinity();
  /// Largest |stencil Levi form at the base - levi_at_base|, relative.
  double levi_consistency = 0.0;
  bool base_ok = false;
  bool range_ok = false;
  bool log_psh_ok = false;
  bool levi_ok = false;
  std::vector<std::string> failures;

  [[nodiscard]] bool passed() const { return base_ok && range_ok && log_psh_ok && levi_ok; }
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Sampled admissibility: u(base) = 0, 0 <= u <= 1, log u plurisubharmonic
/// (circle means of log(u + 1e-300) over 32 points on radii 0.1, 0.05 and
/// 0.025 length scales along each probe direction), and agreement of the
/// stencil Levi form at the base with levi_at_base.
CandidateReport verify_candidate(const ScalarCandidate& u, const ConvexDomain& domain,
                                 std::size_t sample_count, const LeviProbe& probe = {});

/// f(x) = sum_{k=2}^m a_k x^k on [0, r]; coefficients[k] holds a_k
/// (entries 0 and 1 are ignored).
struct BNWSample {
  std::vector<double> coefficients;
  double r = 1.0;
  int grid = 1000;

  [[nodiscard]] double value(double x) const;
  [[nodiscard]] double second_derivative(double x) const;
  [[nodiscard]] double majorant(double x) const;  // sum |a_k| x^k
};

/// min over the grid of (0, r] of f(x) / sum |a_k| x^k; +infinity when every
/// coefficient vanishes. NotAdmissible when f'' < -1e-12 on the grid.
double bnw_constant(const BNWSample& sample);

/// Rejection sample of C(m, r): a_2 in (0, 1], a_3..a_m in [-1, 1], f'' >= 0.
BNWSample random_bnw_sample(int m, double r, Rng& rng, int grid = 1000);

struct SubharmonicReport {
  std::size_t checked = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  bool passed = true;
};

/// Circle average (64 points) minus the center value for every (center,
/// radius) pair whose closed disc lies inside the unit disc.
SubharmonicReport subharmonic_check(const DiscFn& g, const std::vector<Complex>& centers,
                                    const std::vector<double>& radii, double tol = 1e-10);

/// Checks u(0) = 0, 0 <= u <= 1 and subharmonicity of u/|z|^2 (extended at
/// 0 by its mean over a circle of radius 1e-4) on grids, then returns the
/// stencil Levi form of u at 0 (h = 1e-5). PreconditionFailed names the
/// violated condition.
double disc_hessian_bound_check(const DiscFn& u);

/// u = |z|^2 h with h a random harmonic polynomial of the given degree,
/// rescaled into [0.005, 0.995] on the circle. levi_at_zero = h(0).
struct DiscTestFunction {
  DiscFn u;
  double levi_at_zero = 0.0;
};
DiscTestFunction random_disc_test_function(Rng& rng, int degree = 6);

/// Plurisubharmonic metric of the unit disc at 0; equals poincare(0, xi).
double psh_metric_unit_disc(Complex xi);

struct InvarianceReport {
  double lower = 0.0;
  double lower_mapped = 0.0;
  double upper = 0.0;
  double upper_mapped = 0.0;
  double lower_error = 0.0;  // relative
  double upper_error = 0.0;  // relative
  bool passed = false;

  [[nodiscard]] nlohmann::json to_json() const;
};

/// Compares the Sibony lower bound and the affine disc upper bound at
/// P_delta for (Omega, P, xi) and (U Omega + c, U P + c, U xi).
InvarianceReport unitary_invariance_check(const ConvexDomain& domain, const CVec& p, const CVec& xi,
                                          double delta, const CMat& unitary, const CVec& offset,
                                          double tol = 1e-6, const TangentialOptions& options = {});

}  // namespace cxmetric
