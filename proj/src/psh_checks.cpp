#include "cxmetric/psh_checks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "cxmetric/error.hpp"
#include "cxmetric/sampling.hpp"

namespace cxmetric {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double log_guarded(double v) { return std::log(std::max(v, 0.0) + kLogFloor); }

double circle_mean(const RealFn& g, const CVec& z, const CVec& X, double r) {
  double acc = 0.0;
  for (int k = 0; k < kCirclePoints; ++k) {
    acc += g(z + std::polar(r, kTwoPi * k / kCirclePoints) * X);
  }
  return acc / kCirclePoints;
}

double relative_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

double levi_form(const RealFn& u, const CVec& z, const CVec& xi, double h) {
  const Complex ih(0.0, h);
  return (u(z + h * xi) + u(z - h * xi) + u(z + ih * xi) + u(z - ih * xi) - 4.0 * u(z)) / (4.0 * h * h);
}

double levi_form(const DiscFn& u, Complex z, Complex xi, double h) {
  const Complex ih(0.0, h);
  return (u(z + h * xi) + u(z - h * xi) + u(z + ih * xi) + u(z - ih * xi) - 4.0 * u(z)) / (4.0 * h * h);
}

std::vector<CVec> probe_directions(const LeviProbe& probe, int n) {
  if (!probe.directions.empty()) {
    if (probe.directions.size() < 3) throw Error(ErrorKind::ConfigInvalid, "a Levi probe needs >= 3 directions");
    std::vector<CVec> out;
    for (const auto& d : probe.directions) out.push_back(normalized(d));
    return out;
  }
  std::vector<CVec> out;
  for (int j = 0; j < n; ++j) out.push_back(unit_vector(n, j));
  Rng rng(derive_seed(probe.seed, 11));
  for (int k = 0; k < probe.random_directions; ++k) out.push_back(random_unit_vector(n, rng));
  if (out.size() < 3) throw Error(ErrorKind::ConfigInvalid, "a Levi probe needs >= 3 directions");
  return out;
}

nlohmann::json CandidateReport::to_json() const {
  return {{"samples", samples},
          {"excluded", excluded},
          {"base_value", base_value},
          {"min_value", min_value},
          {"max_value", max_value},
          {"min_log_margin", min_log_margin},
          {"min_levi_estimate", min_levi_estimate},
          {"levi_consistency", levi_consistency},
          {"checks", {{"base", base_ok}, {"range", range_ok}, {"log_psh", log_psh_ok}, {"levi", levi_ok}}},
          {"failures", failures},
          {"passed", passed()}};
}

CandidateReport verify_candidate(const ScalarCandidate& u, const ConvexDomain& domain,
                                 std::size_t sample_count, const LeviProbe& probe) {
  if (!(probe.h > 0.0)) throw Error(ErrorKind::ConfigInvalid, "probe step must be positive");
  const double tol = probe.tolerance;
  const double L = u.length_scale;
  const auto directions = probe_directions(probe, domain.dimension());
  CandidateReport report;

  report.base_value = u(u.base_point);
  report.base_ok = std::abs(report.base_value) <= tol;
  if (!report.base_ok) report.failures.push_back("u(base) = " + std::to_string(report.base_value));

  Rng rng(derive_seed(probe.seed, 12));
  const auto points = sample_mixed(domain, sample_count, rng, u.focus_points, L);
  report.samples = points.size();

  const auto log_u = [&u](const CVec& z) { return log_guarded(u(z)); };
  const std::array<double, 3> radii = {0.1 * L, 0.05 * L, 0.025 * L};
  for (const auto& z : points) {
    const double value = u(z);
    report.min_value = std::min(report.min_value, value);
    report.max_value = std::max(report.max_value, value);
    if ((z - u.base_point).norm() < 1e-3 * L) {
      ++report.excluded;
      continue;
    }
    const double center = log_guarded(value);
    for (const auto& X : directions) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < radii.size(); ++k) {
        const double margin = circle_mean(log_u, z, X, radii[k]) - center;
        if (k == 0) {
          report.min_levi_estimate = std::min(report.min_levi_estimate, margin / (radii[0] * radii[0]));
        }
        best = std::max(best, margin);
        if (best >= -tol) break;
      }
      report.min_log_margin = std::min(report.min_log_margin, best);
    }
  }
  report.range_ok = report.min_value >= -tol && report.max_value <= 1.0 + tol;
  if (!report.range_ok) {
    report.failures.push_back("range [" + std::to_string(report.min_value) + ", " +
                              std::to_string(report.max_value) + "]");
  }
  report.log_psh_ok = report.min_log_margin >= -tol;
  if (!report.log_psh_ok) {
    report.failures.push_back("log u circle-mean margin " + std::to_string(report.min_log_margin));
  }

  double levi_scale = 0.0;
  for (const auto& X : directions) levi_scale = std::max(levi_scale, std::abs(u.levi_at_base(X)));
  bool negative = false;
  for (const auto& X : directions) {
    const double exact = u.levi_at_base(X);
    negative = negative || exact < -1e-10;
    const double stencil = levi_form(u.evaluate, u.base_point, X, probe.h * L);
    const double err = std::abs(stencil - exact) / std::max(levi_scale, 1e-300);
    report.levi_consistency = std::max(report.levi_consistency, err);
  }
  report.levi_ok = !negative && report.levi_consistency <= 1e-3;
  if (!report.levi_ok) {
    report.failures.push_back("Levi form at base inconsistent (" + std::to_string(report.levi_consistency) + ")");
  }
  return report;
}

double BNWSample::value(double x) const {
  double acc = 0.0;
  for (std::size_t k = 2; k < coefficients.size(); ++k) acc += coefficients[k] * std::pow(x, static_cast<double>(k));
  return acc;
}

double BNWSample::second_derivative(double x) const {
  double acc = 0.0;
  for (std::size_t k = 2; k < coefficients.size(); ++k) {
    acc += static_cast<double>(k * (k - 1)) * coefficients[k] * std::pow(x, static_cast<double>(k) - 2.0);
  }
  return acc;
}

double BNWSample::majorant(double x) const {
  double acc = 0.0;
  for (std::size_t k = 2; k < coefficients.size(); ++k) acc += std::abs(coefficients[k]) * std::pow(x, static_cast<double>(k));
  return acc;
}

double bnw_constant(const BNWSample& sample) {
  if (!(sample.r > 0.0) || sample.grid < 2) throw Error(ErrorKind::ConfigInvalid, "BNW sample needs r > 0 and grid >= 2");
  for (int i = 0; i <= sample.grid; ++i) {
    const double x = sample.r * i / sample.grid;
    if (sample.second_derivative(x) < -1e-12) {
      throw Error(ErrorKind::NotAdmissible, "f'' < 0 at x = " + std::to_string(x));
    }
  }
  double out = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= sample.grid; ++i) {
    const double x = sample.r * i / sample.grid;
    const double denom = sample.majorant(x);
    if (denom > 0.0) out = std::min(out, sample.value(x) / denom);
  }
  return out;
}

BNWSample random_bnw_sample(int m, double r, Rng& rng, int grid) {
  if (m < 2) throw Error(ErrorKind::ConfigInvalid, "BNW degree must be >= 2");
  std::uniform_real_distribution<double> lead(0.0, 1.0);
  std::uniform_real_distribution<double> other(-1.0, 1.0);
  BNWSample s;
  s.r = r;
  s.grid = grid;
  s.coefficients.assign(static_cast<std::size_t>(m) + 1, 0.0);
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    s.coefficients[2] = 1.0 - lead(rng);  // (0, 1]
    for (int k = 3; k <= m; ++k) s.coefficients[static_cast<std::size_t>(k)] = other(rng);
    bool ok = true;
    for (int i = 0; i <= grid && ok; ++i) ok = s.second_derivative(r * i / grid) >= -1e-12;
    if (ok) return s;
  }
  throw Error(ErrorKind::NotAdmissible, "no admissible BNW sample found");
}

SubharmonicReport subharmonic_check(const DiscFn& g, const std::vector<Complex>& centers,
                                    const std::vector<double>& radii, double tol) {
  SubharmonicReport report;
  for (const Complex c : centers) {
    for (const double r : radii) {
      if (!(std::abs(c) + r < 1.0)) continue;
      double acc = 0.0;
      for (int k = 0; k < 64; ++k) acc += g(c + std::polar(r, kTwoPi * k / 64));
      const double margin = acc / 64.0 - g(c);
      report.min_margin = std::min(report.min_margin, margin);
      ++report.checked;
    }
  }
  report.passed = report.min_margin >= -tol;
  return report;
}

double disc_hessian_bound_check(const DiscFn& u) {
  if (std::abs(u(Complex(0.0, 0.0))) > 1e-12) {
    throw Error(ErrorKind::PreconditionFailed, "u(0) = 0 violated");
  }
  std::vector<Complex> grid;
  for (int i = 1; i <= 20; ++i) {
    for (int k = 0; k < 48; ++k) grid.push_back(std::polar(0.999 * i / 20.0, kTwoPi * k / 48));
  }
  for (const Complex z : grid) {
    const double v = u(z);
    if (v < -1e-9 || v > 1.0 + 1e-9) throw Error(ErrorKind::PreconditionFailed, "0 <= u <= 1 violated");
  }
  const DiscFn g = [&u](Complex z) {
    if (std::abs(z) > 0.0) return u(z) / std::norm(z);
    double mean = 0.0;
    for (int k = 0; k < 64; ++k) {
      const Complex w = std::polar(1e-4, kTwoPi * k / 64);
      mean += u(w) / std::norm(w);
    }
    return mean / 64.0;
  };
  std::vector<Complex> centers = {Complex(0.0, 0.0)};
  for (int i = 1; i <= 4; ++i) {
    for (int k = 0; k < 8; ++k) centers.push_back(std::polar(0.2 * i, kTwoPi * k / 8));
  }
  const auto report = subharmonic_check(g, centers, {0.05, 0.15, 0.5, 0.9}, 1e-7);
  if (!report.passed) throw Error(ErrorKind::PreconditionFailed, "u/|z|^2 subharmonic violated");
  const double value = levi_form(u, Complex(0.0, 0.0), Complex(1.0, 0.0), 1e-5);
  if (value > 1.0 + 1e-6) {
    throw Error(ErrorKind::PreconditionFailed, "Levi form at 0 exceeds 1 for an admissible u");
  }
  return value;
}

DiscTestFunction random_disc_test_function(Rng& rng, int degree) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Complex> c(static_cast<std::size_t>(degree) + 1);
  for (auto& ck : c) ck = Complex(gauss(rng), gauss(rng));
  const auto h = [c](Complex z) {
    Complex acc(0.0, 0.0);
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
    return acc.real();
  };
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int k = 0; k < 4096; ++k) {
    const double v = h(std::polar(1.0, kTwoPi * k / 4096));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double a = 0.99 / (hi - lo);
  const double b = 0.005 - a * lo;
  DiscTestFunction out;
  out.u = [h, a, b](Complex z) { return std::norm(z) * (a * h(z) + b); };
  out.levi_at_zero = a * h(Complex(0.0, 0.0)) + b;
  return out;
}

double psh_metric_unit_disc(Complex xi) { return std::abs(xi); }

nlohmann::json InvarianceReport::to_json() const {
  return {{"lower", lower},
          {"lower_mapped", lower_mapped},
          {"upper", upper},
          {"upper_mapped", upper_mapped},
          {"lower_error", lower_error},
          {"upper_error", upper_error},
          {"passed", passed}};
}

InvarianceReport unitary_invariance_check(const ConvexDomain& domain, const CVec& p, const CVec& xi,
                                          double delta, const CMat& unitary, const CVec& offset,
                                          double tol, const TangentialOptions& options) {
  const ConvexDomain mapped = domain.rotated(unitary, domain.id() + "+rotated").shifted(offset, domain.id() + "+mapped");
  const CVec p2 = unitary * p + offset;
  const CVec xi2 = unitary * xi;

  InvarianceReport report;
  report.lower = sibony_bound(domain, p, xi, delta, options).value;
  report.lower_mapped = sibony_bound(mapped, p2, xi2, delta, options).value;
  const CVec nu = outward_normal(domain, p);
  const CVec nu2 = outward_normal(mapped, p2);
  report.upper = affine_disc_bound(domain, base_point(domain, p, nu, delta), xi).value;
  report.upper_mapped = affine_disc_bound(mapped, base_point(mapped, p2, nu2, delta), xi2).value;
  report.lower_error = relative_error(report.lower, report.lower_mapped);
  report.upper_error = relative_error(report.upper, report.upper_mapped);
  report.passed = report.lower_error <= tol && report.upper_error <= tol;
  return report;
}

}  // namespace cxmetric
