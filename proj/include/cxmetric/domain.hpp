#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cxmetric/polynomial.hpp"
#include "cxmetric/types.hpp"

namespace cxmetric {

inline constexpr double kBoundaryTolerance = 1e-8;
inline constexpr double kGradientFloor = 1e-10;

/// Defining function rho of a domain {rho < 0} in C^n together with its
/// Wirtinger gradient (d rho / d z_j). Corpus domains carry analytic
/// gradients and exact line restrictions; anything else falls back to
/// central differences and numerical moments.
class DefiningFunction {
 public:
  using ValueFn = std::function<double(const CVec&)>;
  using GradientFn = std::function<CVec(const CVec&)>;
  using LineFn = std::function<LinePolynomial(const CVec&, const CVec&)>;

  DefiningFunction(int dimension, ValueFn value, std::string name, GradientFn gradient = {},
                   LineFn line = {});

  static DefiningFunction from_polynomial(HermitianPolynomial poly, std::string name);

  [[nodiscard]] int dimension() const { return n_; }
  [[nodiscard]] const std::string& name() const { return name_; }

  double operator()(const CVec& z) const { return value_(z); }
  [[nodiscard]] double evaluate(const CVec& z) const { return value_(z); }

  [[nodiscard]] CVec wirtinger_gradient(const CVec& z) const;
  /// Central differences, h = 1e-5 (1 + |z|).
  [[nodiscard]] CVec finite_difference_gradient(const CVec& z) const;
  [[nodiscard]] bool has_analytic_gradient() const { return static_cast<bool>(gradient_); }

  [[nodiscard]] bool has_exact_restriction() const { return static_cast<bool>(line_); }
  /// Exact expansion of zeta -> rho(p + zeta xi) when available.
  [[nodiscard]] std::optional<LinePolynomial> restrict_to_line(const CVec& p, const CVec& xi) const;

  /// z -> rho(U^* z), i.e. the defining function of U(Omega).
  [[nodiscard]] DefiningFunction rotated(const CMat& unitary) const;
  /// z -> rho(z - c), i.e. the defining function of Omega + c.
  [[nodiscard]] DefiningFunction shifted(const CVec& offset) const;

 private:
  int n_;
  ValueFn value_;
  std::string name_;
  GradientFn gradient_;
  LineFn line_;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Exact invariant metric F(z, xi) where a closed form is known.
using MetricOracle = std::function<double(const CVec&, const CVec&)>;

class ConvexDomain {
 public:
  /// box lists 2n real intervals in the order Re z_1, Im z_1, Re z_2, ...
  ConvexDomain(DefiningFunction rho, std::vector<Interval> box, CVec center, std::string id);

  [[nodiscard]] const DefiningFunction& rho() const { return rho_; }
  [[nodiscard]] int dimension() const { return rho_.dimension(); }
  [[nodiscard]] const std::vector<Interval>& bounding_box() const { return box_; }
  /// An interior reference point (the symmetry center for corpus domains).
  [[nodiscard]] const CVec& center() const { return center_; }
  [[nodiscard]] const std::string& id() const { return id_; }
  /// Length of the bounding-box diagonal.
  [[nodiscard]] double diameter() const;

  [[nodiscard]] double evaluate(const CVec& z) const { return rho_(z); }
  [[nodiscard]] bool contains(const CVec& z) const { return rho_(z) < 0.0; }

  void set_metric_oracle(MetricOracle oracle) { oracle_ = std::move(oracle); }
  [[nodiscard]] const std::optional<MetricOracle>& metric_oracle() const { return oracle_; }

  /// U(Omega); the box is replaced by the box of the ball circumscribing the
  /// original box.
  [[nodiscard]] ConvexDomain rotated(const CMat& unitary, std::string id) const;
  [[nodiscard]] ConvexDomain shifted(const CVec& offset, std::string id) const;

  int sample_budget = 10000;

 private:
  DefiningFunction rho_;
  std::vector<Interval> box_;
  CVec center_;
  std::string id_;
  std::optional<MetricOracle> oracle_;
};

ConvexDomain make_ball(int n);
ConvexDomain make_complex_ellipsoid(const std::vector<int>& exponents);
/// Polynomial domain; box and center are estimated by radial probing from
/// `center` (the origin when absent) unless the document supplies "box".
ConvexDomain make_polynomial_domain(const HermitianPolynomial& poly, std::string id,
                                    std::optional<CVec> center = std::nullopt,
                                    std::optional<std::vector<Interval>> box = std::nullopt);

/// Resolve "ball:n", "cxellipsoid:m1,...,mn", "shifted:<id>:<offset>",
/// "rotated:<id>:<seed>" or a path to a JSON polynomial document.
ConvexDomain load_domain(const std::string& spec);

/// Parse a comma separated complex vector: entries like 0.5, -1e-3, 2i,
/// 0.3-0.1i.
CVec parse_complex_vector(const std::string& text);

// ---------------------------------------------------------------------------
// Sampling and sanity checks

std::vector<CVec> sample_interior(const ConvexDomain& domain, std::size_t count, Rng& rng);

struct ConvexityReport {
  std::size_t pairs = 0;
  std::size_t violations = 0;
  double worst = -std::numeric_limits<double>::infinity();
};
ConvexityReport check_midpoint_convexity(const ConvexDomain& domain, std::size_t pairs, Rng& rng);

/// rho > 0 at the 2 * 2n face centers of the bounding box scaled by 2.
bool check_bounded(const ConvexDomain& domain);

/// Largest relative discrepancy between analytic and finite-difference
/// gradients over random points of the bounding box.
double gradient_discrepancy(const ConvexDomain& domain, std::size_t points, Rng& rng);

// ---------------------------------------------------------------------------
// Boundary geometry

/// Distance t > 0 to the boundary along the real ray origin + t dir
/// (origin must be interior). Doubling bracket from initial_step followed
/// by bisection to tol.
double ray_exit_distance(const ConvexDomain& domain, const CVec& origin, const CVec& dir,
                         double tol = 1e-12, double initial_step = 0.0);

/// One Newton correction along the normal; requires |rho(P)| <= 1e-8.
CVec project_to_boundary(const ConvexDomain& domain, const CVec& p);

/// nu = grad rho / |grad rho| as a vector of C^n, i.e. conj(d rho)/|d rho|.
CVec outward_normal(const ConvexDomain& domain, const CVec& p);

/// P_delta = P - delta nu; OutsideDomain if it is not interior.
CVec base_point(const ConvexDomain& domain, const CVec& p, const CVec& nu, double delta);

/// xi - <xi, nu> nu; ZeroProjection below 1e-12.
CVec complex_tangent_project(const CVec& nu, const CVec& xi);

CVec normalized(const CVec& v);

/// Unitary frame w = U (z - P) in which the boundary point sits at the
/// origin, the outward normal is e_n and the domain lies in Re w_n < 0.
struct BoundaryFrame {
  CVec point;
  CVec normal;
  CMat unitary;
  /// rho(from_frame(w)) = scale * Re w_n + O(|w|^2); scale = |grad rho(P)|.
  double scale = 0.0;

  [[nodiscard]] CVec to_frame(const CVec& z) const { return unitary * (z - point); }
  [[nodiscard]] CVec from_frame(const CVec& w) const { return unitary.adjoint() * w + point; }
};

/// When first_axis is given (a unit complex-tangential vector) it becomes
/// the w_1 axis; otherwise the remaining axes come from Gram-Schmidt on the
/// standard basis.
BoundaryFrame normalize_frame(const ConvexDomain& domain, const CVec& p,
                              const std::optional<CVec>& first_axis = std::nullopt);

}  // namespace cxmetric
