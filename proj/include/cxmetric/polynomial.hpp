#pragma once

#include <map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cxmetric/types.hpp"

namespace cxmetric {

/// Polynomial in (zeta, conj zeta): coefficient of zeta^a conj(zeta)^b keyed
/// by (a, b). This is the restriction of a defining function to a complex
/// line, the object whose vanishing order is the line type.
class LinePolynomial {
 public:
  using Key = std::pair<int, int>;

  void add(int a, int b, Complex c) { coeffs_[{a, b}] += c; }
  [[nodiscard]] const std::map<Key, Complex>& coefficients() const { return coeffs_; }

  /// Magnitude of the homogeneous part of each total order k = a + b,
  /// measured as the l2 norm of its coefficients; entries 0..max_order.
  [[nodiscard]] std::vector<double> order_magnitudes(int max_order) const;

  [[nodiscard]] Complex evaluate(Complex zeta) const;

  LinePolynomial& operator*=(const LinePolynomial& other);

 private:
  std::map<Key, Complex> coeffs_;
};

/// One term coeff * prod_j z_j^{p_j} conj(z_j)^{q_j}.
struct HermitianTerm {
  double coeff = 0.0;
  std::vector<std::pair<int, int>> powers;
};

/// Real-valued polynomial in z and conj z. The term list must be closed under
/// conjugation ((p, q) -> (q, p) with the same real coefficient) so that the
/// sum is real everywhere.
class HermitianPolynomial {
 public:
  HermitianPolynomial(int dimension, std::vector<HermitianTerm> terms);

  /// Parse {"n": int, "rho": [{"coeff": x, "powers": [[p, q], ...]}, ...]}.
  static HermitianPolynomial from_json(const nlohmann::json& doc);
  [[nodiscard]] nlohmann::json to_json() const;

  /// sum_j |z_j|^2 - 1
  static HermitianPolynomial unit_ball(int n);
  /// sum_j |z_j|^{2 m_j} - 1
  static HermitianPolynomial complex_ellipsoid(const std::vector<int>& exponents);

  [[nodiscard]] int dimension() const { return n_; }
  [[nodiscard]] const std::vector<HermitianTerm>& terms() const { return terms_; }

  [[nodiscard]] double evaluate(const CVec& z) const;
  /// (d rho / d z_j)_j
  [[nodiscard]] CVec wirtinger_gradient(const CVec& z) const;
  /// Exact expansion of zeta -> rho(p + zeta xi).
  [[nodiscard]] LinePolynomial restrict_to_line(const CVec& p, const CVec& xi) const;
  [[nodiscard]] int degree() const;

 private:
  int n_;
  std::vector<HermitianTerm> terms_;
};

}  // namespace cxmetric
