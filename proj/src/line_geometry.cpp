#include "cxmetric/line_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cxmetric/error.hpp"

namespace cxmetric {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_unit(const CVec& xi) {
  if (std::abs(xi.norm() - 1.0) > 1e-8) {
    throw Error(ErrorKind::PreconditionFailed, "direction must be a unit vector");
  }
}

// Golden-section search for the extremum of f on [a, b]; sign = +1 finds the
// maximum, -1 the minimum.
template <typename F>
std::pair<double, double> golden_section(F&& f, double a, double b, double sign) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = sign * f(x1);
  double f2 = sign * f(x2);
  for (int it = 0; it < 60 && (b - a) > 1e-10; ++it) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = sign * f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = sign * f(x2);
    }
  }
  return f1 > f2 ? std::pair{x1, sign * f1} : std::pair{x2, sign * f2};
}

ContactPoint extremal_radius(const ConvexDomain& domain, const CVec& center, const CVec& xi,
                             const RadialProbe& probe, double sign) {
  require_unit(xi);
  if (probe.theta_samples < 8) throw Error(ErrorKind::ConfigInvalid, "theta_samples must be >= 8");
  if (!(probe.bracket_tol > 0.0)) throw Error(ErrorKind::ConfigInvalid, "bracket_tol must be positive");
  if (!domain.contains(center)) throw Error(ErrorKind::CenterOutside, "center is not inside the domain");

  const int samples = probe.theta_samples;
  const double step = kTwoPi / samples;
  auto radius_at = [&](double theta) {
    return boundary_radius(domain, center, xi, theta, probe.bracket_tol);
  };
  int best_k = 0;
  double best = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double r = radius_at(k * step);
    if (k == 0 || sign * r > sign * best) {
      best = r;
      best_k = k;
    }
  }
  double theta = best_k * step;
  const auto [refined_theta, refined] =
      golden_section(radius_at, theta - step, theta + step, sign);
  if (sign * refined > sign * best) {
    best = refined;
    theta = refined_theta;
  }
  theta = std::fmod(theta, kTwoPi);
  if (theta < 0.0) theta += kTwoPi;
  ContactPoint out;
  out.R = best;
  out.theta_star = theta;
  out.Q = center + best * std::polar(1.0, theta) * xi;
  return out;
}

LineTypeEstimate finish_estimate(LineTypeEstimate est, int order_cap) {
  double scale = 0.0;
  for (int k = 1; k <= order_cap; ++k) scale = std::max(scale, est.coefficient_table[static_cast<std::size_t>(k)]);
  const double threshold = kTypeTolerance * std::max(1.0, scale);
  for (int k = 1; k <= order_cap; ++k) {
    if (est.coefficient_table[static_cast<std::size_t>(k)] > threshold) {
      est.m = k;
      break;
    }
  }
  if (!est.finite()) {
    throw Error(ErrorKind::TypeExceedsCap,
                "all coefficients up to order " + std::to_string(order_cap) + " vanish");
  }
  if (est.m % 2 != 0) {
    est.diagnostics.push_back("odd leading order " + std::to_string(est.m) +
                              "; a complex-tangential direction on a convex domain has even type");
  }
  return est;
}

LineTypeEstimate numeric_line_type(const ConvexDomain& domain, const CVec& p, const CVec& xi,
                                   const LineTypeOptions& options) {
  const int cap = options.order_cap;
  const int points = 4 * cap;
  const double g0 = domain.evaluate(p);
  const double value_scale = std::max(1.0, std::abs(domain.evaluate(domain.center())));
  const double noise = 1e-12 * value_scale;

  const std::size_t nr = options.radii.size();
  // moments[r][j + cap] = (1/N) sum_k g(h_r e^{i phi_k}) e^{-i j phi_k}
  std::vector<std::vector<Complex>> moments(nr, std::vector<Complex>(static_cast<std::size_t>(2 * cap + 1)));
  for (std::size_t r = 0; r < nr; ++r) {
    const double h = options.radii[r];
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) {
      const double phi = kTwoPi * k / points;
      g[static_cast<std::size_t>(k)] = domain.evaluate(p + h * std::polar(1.0, phi) * xi) - g0;
    }
    for (int j = -cap; j <= cap; ++j) {
      Complex acc(0.0, 0.0);
      for (int k = 0; k < points; ++k) {
        acc += g[static_cast<std::size_t>(k)] * std::polar(1.0, -kTwoPi * j * k / points);
      }
      moments[r][static_cast<std::size_t>(j + cap)] = acc / static_cast<double>(points);
    }
  }

  LineTypeEstimate est;
  est.method = TypeMethod::taylor;
  est.exact = false;
  std::vector<double> sq(static_cast<std::size_t>(cap) + 1, 0.0);
  for (int j = -cap; j <= cap; ++j) {
    std::vector<double> mags;
    for (std::size_t r = 0; r < nr; ++r) mags.push_back(std::abs(moments[r][static_cast<std::size_t>(j + cap)]));
    if (mags[0] <= noise) continue;
    // successive halving ratios give 2^order; the last usable pair is the
    // least contaminated by higher orders
    std::vector<double> orders;
    std::size_t last = 0;
    for (std::size_t r = 1; r < nr && mags[r] > noise; ++r) {
      orders.push_back(std::log(mags[r - 1] / mags[r]) /
                       std::log(options.radii[r - 1] / options.radii[r]));
      last = r;
    }
    if (orders.empty()) {
      est.diagnostics.push_back("mode " + std::to_string(j) + " only visible at the largest radius; ignored");
      continue;
    }
    double order = orders.back();
    if (orders.size() >= 2) {
      const double prev = orders[orders.size() - 2];
      if (std::abs(order - prev) > 0.5) {
        est.diagnostics.push_back("Richardson check failed for mode " + std::to_string(j));
      }
      order = (4.0 * order - prev) / 3.0;
    }
    int k = static_cast<int>(std::lround(order));
    if (k < std::abs(j) || (k - j) % 2 != 0) {
      est.diagnostics.push_back("inconsistent order estimate for mode " + std::to_string(j));
      k = std::max(std::abs(j), k + ((k - j) % 2 != 0 ? 1 : 0));
    }
    if (k < 1 || k > cap) continue;
    const double coeff = mags[last] / std::pow(options.radii[last], k);
    sq[static_cast<std::size_t>(k)] += coeff * coeff;
  }
  for (auto& v : sq) v = std::sqrt(v);
  est.coefficient_table = std::move(sq);
  return finish_estimate(std::move(est), cap);
}

}  // namespace

double boundary_radius(const ConvexDomain& domain, const CVec& center, const CVec& xi, double theta,
                       double bracket_tol) {
  require_unit(xi);
  return ray_exit_distance(domain, center, std::polar(1.0, theta) * xi, bracket_tol);
}

ContactPoint max_radius(const ConvexDomain& domain, const CVec& center, const CVec& xi,
                        const RadialProbe& probe) {
  return extremal_radius(domain, center, xi, probe, 1.0);
}

ContactPoint min_radius(const ConvexDomain& domain, const CVec& center, const CVec& xi,
                        const RadialProbe& probe) {
  return extremal_radius(domain, center, xi, probe, -1.0);
}

LineTypeEstimate line_type(const ConvexDomain& domain, const CVec& p, const CVec& xi,
                           const LineTypeOptions& options) {
  if (options.order_cap < 1 || options.order_cap > 12) {
    throw Error(ErrorKind::ConfigInvalid, "order_cap must be in [1, 12]");
  }
  if (std::abs(domain.evaluate(p)) > kBoundaryTolerance) {
    throw Error(ErrorKind::NotOnBoundary, "line type is computed at boundary points");
  }
  require_unit(xi);
  if (!options.force_numeric) {
    if (auto line = domain.rho().restrict_to_line(p, xi)) {
      LineTypeEstimate est;
      est.method = TypeMethod::taylor;
      est.exact = true;
      est.coefficient_table = line->order_magnitudes(options.order_cap);
      return finish_estimate(std::move(est), options.order_cap);
    }
  }
  if (options.radii.size() < 2) throw Error(ErrorKind::ConfigInvalid, "need at least two moment radii");
  return numeric_line_type(domain, p, xi, options);
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    throw Error(ErrorKind::ConfigInvalid, "log grid needs 0 < lo < hi and count >= 2");
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = std::exp(a + (b - a) * k / (count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

LinearFit loglog_fit(const std::vector<double>& xs, const std::vector<double>& values) {
  if (xs.size() != values.size()) throw Error(ErrorKind::DegenerateFit, "size mismatch");
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (!(xs[k] > 0.0) || !(values[k] > 0.0)) {
      throw Error(ErrorKind::DegenerateFit, "log-log fit needs positive values");
    }
    lx.push_back(std::log(xs[k]));
    ly.push_back(std::log(values[k]));
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
    syy += (ly[k] - my) * (ly[k] - my);
  }
  if (!(sxx > 1e-300)) throw Error(ErrorKind::DegenerateFit, "fewer than two distinct abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

RadiusScaling radius_scaling_exponent(const ConvexDomain& domain, const CVec& p, const CVec& xi,
                                      const std::vector<double>& delta_grid, RadiusKind kind,
                                      const RadialProbe& probe) {
  if (delta_grid.size() < 8) throw Error(ErrorKind::ConfigInvalid, "delta grid needs at least 8 points");
  const CVec nu = outward_normal(domain, p);
  const CVec dir = normalized(xi);
  if (kind == RadiusKind::automatic) {
    kind = std::abs(hermitian(dir, nu)) < 1e-8 ? RadiusKind::maximal : RadiusKind::inscribed;
  }
  RadiusScaling out;
  out.deltas = delta_grid;
  for (double delta : delta_grid) {
    const CVec center = base_point(domain, p, nu, delta);
    const auto contact = (kind == RadiusKind::maximal) ? max_radius(domain, center, dir, probe)
                                                       : min_radius(domain, center, dir, probe);
    out.radii.push_back(contact.R);
  }
  std::vector<std::size_t> order(delta_grid.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return delta_grid[a] < delta_grid[b]; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (out.radii[order[k]] < out.radii[order[k - 1]] - 1e-12) out.monotone = false;
  }
  out.fit = loglog_fit(out.deltas, out.radii);
  return out;
}

LineTypeEstimate line_type_by_regression(const ConvexDomain& domain, const CVec& p, const CVec& xi,
                                         const std::vector<double>& delta_grid, const RadialProbe& probe) {
  const auto scaling = radius_scaling_exponent(domain, p, xi, delta_grid, RadiusKind::maximal, probe);
  LineTypeEstimate est;
  est.method = TypeMethod::regression;
  est.fit_r2 = scaling.fit.r2;
  if (!(scaling.fit.slope > 0.0)) throw Error(ErrorKind::DegenerateFit, "radius does not grow with delta");
  est.m = static_cast<int>(std::lround(1.0 / scaling.fit.slope));
  if (!scaling.monotone) est.diagnostics.push_back("radius is not monotone in delta");
  return est;
}

double gradient_ratio(const ConvexDomain& domain, const ContactPoint& contact, const CVec& xi,
                      double delta, int m) {
  if (m < 2) throw Error(ErrorKind::PreconditionFailed, "gradient ratio needs m >= 2");
  if (!(delta > 0.0)) throw Error(ErrorKind::PreconditionFailed, "delta must be positive");
  const CVec grad = domain.rho().wirtinger_gradient(contact.Q);
  const Complex along = contract(grad, std::polar(1.0, contact.theta_star) * xi);
  return std::abs(along) * std::pow(delta, 1.0 / m - 1.0);
}

}  // namespace cxmetric
