#pragma once

// Independent closed forms used as test oracles. Nothing here calls into the
// library.

#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

// |z_1|^2 + (1 - delta)^2 = 1
inline double ball_tangent_radius(double delta) { return std::sqrt(2.0 * delta - delta * delta); }

// |z_1|^{2k} + (1 - delta)^2 = 1
inline double ellipsoid_tangent_radius(int k, double delta) {
  return std::pow(2.0 * delta - delta * delta, 1.0 / (2.0 * k));
}

// sqrt(|xi|^2 (1 - |z|^2) + |<z, xi>|^2) / (1 - |z|^2), written out by components
inline double ball_metric(const std::vector<std::complex<double>>& z,
                          const std::vector<std::complex<double>>& xi) {
  double zz = 0.0;
  double xx = 0.0;
  std::complex<double> inner(0.0, 0.0);
  for (std::size_t j = 0; j < z.size(); ++j) {
    zz += std::norm(z[j]);
    xx += std::norm(xi[j]);
    inner += z[j] * std::conj(xi[j]);
  }
  const double w = 1.0 - zz;
  return std::sqrt(xx * w + std::norm(inner)) / w;
}

// Tangential Sibony bound at the north pole of sum |z_1|^{2k} + |z_2|^2 < 1
// along e_1: |g| = k R^{2k-1}, Re f(Q) = R |g| / delta, and
// bound = |g| / (delta sqrt(M)) with M = (e^{Re f(Q)} + headroom)^2.
inline double ellipsoid_tangential_bound(int k, double delta, double headroom = 1.0) {
  const double R = ellipsoid_tangent_radius(k, delta);
  const double g = k * std::pow(R, 2 * k - 1);
  const double M = std::max(1.0, std::pow(std::exp(R * g / delta) + headroom, 2));
  return g / (delta * std::sqrt(M));
}

// Smallest N >= 1 with sum_{k > N} S^k / k! < 1, by direct summation in long
// double.
inline int truncation_order(double S) {
  for (int N = 1; N < 600; ++N) {
    long double tail = 0.0L;
    long double term = 1.0L;
    for (int k = 1; k <= N; ++k) term *= static_cast<long double>(S) / k;
    for (int k = N + 1; k < N + 2000; ++k) {
      term *= static_cast<long double>(S) / k;
      tail += term;
      if (term < 1e-30L * tail) break;
    }
    if (tail < 1.0L) return N;
  }
  return -1;
}

}  // namespace oracle
