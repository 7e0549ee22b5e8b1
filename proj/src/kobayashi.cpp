#include "cxmetric/kobayashi.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "cxmetric/error.hpp"
#include "cxmetric/serialize.hpp"

namespace cxmetric {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Angles used for the final check of the recentered disc.
constexpr int kCertifyAngles = 1024;

// Largest rho over the sampled disc image; the rings are the radii k/rings.
double sampled_max(const ConvexDomain& domain, const DiscFamily& disc, int angles, int rings) {
  double worst = -std::numeric_limits<double>::infinity();
  for (int ring = rings; ring >= 1; --ring) {
    const double s = static_cast<double>(ring) / rings;
    for (int k = 0; k < angles; ++k) {
      worst = std::max(worst, domain.evaluate(disc(std::polar(s, kTwoPi * k / angles))));
    }
  }
  return worst;
}

bool contained(const ConvexDomain& domain, const DiscFamily& disc, int angles, int rings) {
  return sampled_max(domain, disc, angles, rings) < kDiscSlack;
}

// Largest r with the disc of shift d contained, by bisection. The feasible set
// in (r, d) is convex, so for fixed d it is an interval starting at 0.
double largest_radius(const ConvexDomain& domain, DiscFamily disc, double hi, int angles, int rings) {
  disc.radius = 0.0;
  if (!contained(domain, disc, angles, rings)) return 0.0;
  double lo = 0.0;
  while (true) {
    disc.radius = hi;
    if (!contained(domain, disc, angles, rings)) break;
    lo = hi;
    hi *= 2.0;
    if (hi > 4.0 * domain.diameter()) throw Error(ErrorKind::RayUnbounded, "disc radius unbounded");
  }
  while (hi - lo > 1e-13 * std::max(1.0, hi)) {
    disc.radius = 0.5 * (lo + hi);
    if (contained(domain, disc, angles, rings)) {
      lo = disc.radius;
    } else {
      hi = disc.radius;
    }
  }
  return lo;
}

}  // namespace

CVec DiscFamily::operator()(Complex zeta) const {
  CVec out = center + (radius * zeta) * direction;
  if (normal_shift != Complex(0.0, 0.0)) out += (normal_shift * zeta * zeta) * normal;
  return out;
}

nlohmann::json DiscFamily::to_json() const {
  return {{"kind", kind == DiscKind::affine ? "affine" : "recentered"},
          {"center", vector_to_json(center)},
          {"direction", vector_to_json(direction)},
          {"normal", vector_to_json(normal)},
          {"radius", radius},
          {"normal_shift", {normal_shift.real(), normal_shift.imag()}},
          {"containment", {{"angles", kDiscAngles}, {"rings", kDiscRings}, {"slack", kDiscSlack}}}};
}

bool disc_contained_sampled(const ConvexDomain& domain, const DiscFamily& disc) {
  return contained(domain, disc, kDiscAngles, kDiscRings);
}

DiscBound affine_disc_bound(const ConvexDomain& domain, const CVec& center, const CVec& xi,
                            const RadialProbe& probe) {
  const double size = xi.norm();
  if (!(size > 0.0)) throw Error(ErrorKind::PreconditionFailed, "direction must be nonzero");
  const CVec unit = xi / size;
  const ContactPoint contact = min_radius(domain, center, unit, probe);
  DiscBound out;
  out.disc.kind = DiscKind::affine;
  out.disc.center = center;
  out.disc.direction = unit;
  out.disc.normal = CVec::Zero(unit.size());
  out.disc.radius = contact.R;
  out.value = size / contact.R;
  out.evaluations = 1;
  return out;
}

DiscBound recentered_disc_bound(const ConvexDomain& domain, const CVec& center, const CVec& xi,
                                const CVec& normal, const RecenteredOptions& options,
                                const RadialProbe& probe) {
  DiscBound affine = affine_disc_bound(domain, center, xi, probe);
  affine.disc.normal = normal;
  if (options.freeze_shift || options.budget < 1) return affine;

  const double size = xi.norm();
  DiscFamily disc = affine.disc;
  disc.kind = DiscKind::recentered;
  const double r0 = affine.disc.radius;
  int evaluations = 0;
  auto radius_for = [&](Complex d) {
    DiscFamily trial = disc;
    trial.normal_shift = d;
    ++evaluations;
    return largest_radius(domain, trial, std::max(r0, 1e-300), kDiscAngles, kDiscRings);
  };

  Complex best_d(0.0, 0.0);
  double best_r = radius_for(best_d);
  double step = 0.5 * r0;
  const std::array<Complex, 4> moves = {Complex(1.0, 0.0), Complex(-1.0, 0.0), Complex(0.0, 1.0),
                                        Complex(0.0, -1.0)};
  while (evaluations < options.budget && step > 1e-6 * r0) {
    bool moved = false;
    for (const Complex& move : moves) {
      if (evaluations >= options.budget) break;
      const Complex d = best_d + step * move;
      const double r = radius_for(d);
      if (r > best_r) {
        best_r = r;
        best_d = d;
        moved = true;
      }
    }
    if (!moved) step *= 0.5;
  }

  DiscBound out = affine;
  out.evaluations = evaluations + 1;
  if (best_d == Complex(0.0, 0.0)) return out;
  disc.normal_shift = best_d;
  // certify on a finer boundary circle; rho o phi is subharmonic, so the
  // boundary circle controls the closed disc
  const double certified = largest_radius(domain, disc, best_r, kCertifyAngles, 1);
  disc.radius = std::min(certified, best_r);
  if (!(disc.radius > r0) || !disc_contained_sampled(domain, disc)) {
    out.fallback = !(disc.radius > 0.0);
    return out;
  }
  out.disc = disc;
  out.value = size / disc.radius;
  out.improved = true;
  return out;
}

double poincare(Complex z, Complex xi) {
  const double s = std::norm(z);
  if (!(s < 1.0)) throw Error(ErrorKind::OutsideDisc, "poincare metric needs |z| < 1");
  return std::abs(xi) / (1.0 - s);
}

double ball_metric_oracle(const CVec& z, const CVec& xi) {
  const double s = z.squaredNorm();
  if (!(s < 1.0)) throw Error(ErrorKind::OutsideDomain, "ball metric needs |z| < 1");
  const double w = 1.0 - s;
  return std::sqrt(xi.squaredNorm() * w + std::norm(hermitian(z, xi))) / w;
}

}  // namespace cxmetric
