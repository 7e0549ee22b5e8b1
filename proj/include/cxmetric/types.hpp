#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace cxmetric {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// All seeded sampling in the library goes through this engine so that a
/// fixed seed reproduces results bit for bit on a given platform.
using Rng = std::mt19937_64;

/// Hermitian inner product <a, b> = sum a_j conj(b_j).
inline Complex hermitian(const CVec& a, const CVec& b) { return b.dot(a); }

/// Bilinear pairing sum g_j v_j, used to apply a Wirtinger gradient
/// (the (1,0)-part of d rho) to a complex direction.
inline Complex contract(const CVec& grad, const CVec& v) {
  return (grad.array() * v.array()).sum();
}

/// Real Euclidean inner product of the underlying R^{2n} vectors.
inline double real_dot(const CVec& a, const CVec& b) {
  return hermitian(a, b).real();
}

inline CVec unit_vector(int n, int index) {
  CVec e = CVec::Zero(n);
  e(index) = 1.0;
  return e;
}

/// Standard complex Gaussian vector normalized to the unit sphere.
CVec random_unit_vector(int n, Rng& rng);

/// Haar-distributed unitary matrix (QR of a complex Ginibre matrix with
/// the phase correction of the diagonal of R).
CMat random_unitary(int n, Rng& rng);

/// Derive an independent stream from a base seed and a stream index.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace cxmetric
