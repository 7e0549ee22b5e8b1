#include "cxmetric/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "cxmetric/error.hpp"

namespace cxmetric {
namespace {

Complex ipow(Complex base, int exponent) {
  Complex out(1.0, 0.0);
  for (int k = 0; k < exponent; ++k) out *= base;
  return out;
}

double binomial(int n, int k) {
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

// (c + zeta d)^p expanded in zeta, or in conj(zeta) when conjugate is set.
LinePolynomial binomial_factor(Complex c, Complex d, int p, bool conjugate) {
  LinePolynomial out;
  for (int a = 0; a <= p; ++a) {
    const Complex coeff = binomial(p, a) * ipow(c, p - a) * ipow(d, a);
    if (conjugate) {
      out.add(0, a, coeff);
    } else {
      out.add(a, 0, coeff);
    }
  }
  return out;
}

}  // namespace

std::vector<double> LinePolynomial::order_magnitudes(int max_order) const {
  std::vector<double> sq(static_cast<std::size_t>(max_order) + 1, 0.0);
  for (const auto& [key, c] : coeffs_) {
    const int order = key.first + key.second;
    if (order <= max_order) sq[static_cast<std::size_t>(order)] += std::norm(c);
  }
  for (auto& v : sq) v = std::sqrt(v);
  return sq;
}

Complex LinePolynomial::evaluate(Complex zeta) const {
  Complex sum(0.0, 0.0);
  for (const auto& [key, c] : coeffs_) {
    sum += c * ipow(zeta, key.first) * ipow(std::conj(zeta), key.second);
  }
  return sum;
}

LinePolynomial& LinePolynomial::operator*=(const LinePolynomial& other) {
  std::map<Key, Complex> product;
  for (const auto& [ka, ca] : coeffs_) {
    for (const auto& [kb, cb] : other.coeffs_) {
      product[{ka.first + kb.first, ka.second + kb.second}] += ca * cb;
    }
  }
  coeffs_ = std::move(product);
  return *this;
}

HermitianPolynomial::HermitianPolynomial(int dimension, std::vector<HermitianTerm> terms)
    : n_(dimension), terms_(std::move(terms)) {
  if (n_ < 1) throw Error(ErrorKind::ConfigInvalid, "polynomial dimension must be positive");
  using Signature = std::tuple<double, std::vector<std::pair<int, int>>>;
  std::vector<Signature> forward;
  std::vector<Signature> conjugated;
  for (auto& term : terms_) {
    if (static_cast<int>(term.powers.size()) != n_) {
      throw Error(ErrorKind::ConfigInvalid, "term has wrong number of [p, q] pairs");
    }
    auto swapped = term.powers;
    for (auto& [p, q] : swapped) {
      if (p < 0 || q < 0) throw Error(ErrorKind::ConfigInvalid, "negative exponent in term");
      std::swap(p, q);
    }
    forward.emplace_back(term.coeff, term.powers);
    conjugated.emplace_back(term.coeff, std::move(swapped));
  }
  std::sort(forward.begin(), forward.end());
  std::sort(conjugated.begin(), conjugated.end());
  if (forward != conjugated) {
    throw Error(ErrorKind::ConfigInvalid,
                "term list is not closed under conjugation; rho would not be real");
  }
}

HermitianPolynomial HermitianPolynomial::from_json(const nlohmann::json& doc) {
  if (!doc.contains("n") || !doc.contains("rho")) {
    throw Error(ErrorKind::ConfigInvalid, "domain document needs \"n\" and \"rho\"");
  }
  const int n = doc.at("n").get<int>();
  std::vector<HermitianTerm> terms;
  for (const auto& item : doc.at("rho")) {
    HermitianTerm term;
    term.coeff = item.at("coeff").get<double>();
    for (const auto& pq : item.at("powers")) {
      if (pq.size() != 2) throw Error(ErrorKind::ConfigInvalid, "powers entries are [p, q]");
      term.powers.emplace_back(pq.at(0).get<int>(), pq.at(1).get<int>());
    }
    terms.push_back(std::move(term));
  }
  return HermitianPolynomial(n, std::move(terms));
}

nlohmann::json HermitianPolynomial::to_json() const {
  nlohmann::json rho = nlohmann::json::array();
  for (const auto& term : terms_) {
    nlohmann::json powers = nlohmann::json::array();
    for (const auto& [p, q] : term.powers) powers.push_back({p, q});
    rho.push_back({{"coeff", term.coeff}, {"powers", powers}});
  }
  return {{"n", n_}, {"rho", rho}};
}

HermitianPolynomial HermitianPolynomial::unit_ball(int n) {
  return complex_ellipsoid(std::vector<int>(static_cast<std::size_t>(n), 1));
}

HermitianPolynomial HermitianPolynomial::complex_ellipsoid(const std::vector<int>& exponents) {
  const int n = static_cast<int>(exponents.size());
  std::vector<HermitianTerm> terms;
  for (int j = 0; j < n; ++j) {
    if (exponents[j] < 1) throw Error(ErrorKind::ConfigInvalid, "ellipsoid exponents must be >= 1");
    HermitianTerm term{1.0, std::vector<std::pair<int, int>>(exponents.size(), {0, 0})};
    term.powers[j] = {exponents[j], exponents[j]};
    terms.push_back(std::move(term));
  }
  terms.push_back({-1.0, std::vector<std::pair<int, int>>(exponents.size(), {0, 0})});
  return HermitianPolynomial(n, std::move(terms));
}

double HermitianPolynomial::evaluate(const CVec& z) const {
  double sum = 0.0;
  for (const auto& term : terms_) {
    Complex prod(term.coeff, 0.0);
    for (int j = 0; j < n_; ++j) {
      const auto [p, q] = term.powers[j];
      if (p == q) {
        prod *= std::pow(std::norm(z(j)), p);
      } else {
        prod *= ipow(z(j), p) * ipow(std::conj(z(j)), q);
      }
    }
    sum += prod.real();
  }
  return sum;
}

CVec HermitianPolynomial::wirtinger_gradient(const CVec& z) const {
  CVec grad = CVec::Zero(n_);
  for (const auto& term : terms_) {
    for (int k = 0; k < n_; ++k) {
      const auto [pk, qk] = term.powers[k];
      if (pk == 0) continue;
      Complex prod(term.coeff * pk, 0.0);
      for (int j = 0; j < n_; ++j) {
        const auto [p, q] = term.powers[j];
        if (j == k) {
          prod *= ipow(z(j), p - 1) * ipow(std::conj(z(j)), q);
        } else {
          prod *= ipow(z(j), p) * ipow(std::conj(z(j)), q);
        }
      }
      grad(k) += prod;
    }
  }
  return grad;
}

LinePolynomial HermitianPolynomial::restrict_to_line(const CVec& p, const CVec& xi) const {
  LinePolynomial out;
  for (const auto& term : terms_) {
    LinePolynomial product;
    product.add(0, 0, term.coeff);
    for (int j = 0; j < n_; ++j) {
      const auto [pj, qj] = term.powers[j];
      if (pj > 0) product *= binomial_factor(p(j), xi(j), pj, false);
      if (qj > 0) product *= binomial_factor(std::conj(p(j)), std::conj(xi(j)), qj, true);
    }
    for (const auto& [key, c] : product.coefficients()) out.add(key.first, key.second, c);
  }
  return out;
}

int HermitianPolynomial::degree() const {
  int deg = 0;
  for (const auto& term : terms_) {
    int total = 0;
    for (const auto& [p, q] : term.powers) total += p + q;
    deg = std::max(deg, total);
  }
  return deg;
}

}  // namespace cxmetric
