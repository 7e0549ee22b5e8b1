#include "cxmetric/sibony.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "cxmetric/error.hpp"
#include "cxmetric/sampling.hpp"
#include "cxmetric/serialize.hpp"

namespace cxmetric {
namespace {

// e^f - 1 without cancellation for small |f|.
Complex expm1(Complex f) {
  const double x = f.real();
  const double y = f.imag();
  const double s = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

// sum_{k=1}^N f^k / k!. Direct summation loses about e^{|f| - Re f} ulps, so
// for |f| well below N it is evaluated as (e^f - 1) minus the tail
// f^{N+1}/(N+1)! * sum_j f^j (N+1)!/(N+1+j)!, whose series has no cancellation.
Complex truncated_expm1(Complex f, int N) {
  const double a = std::abs(f);
  if (a == 0.0) return {0.0, 0.0};
  if (a < 0.5 * (N + 2)) {
    Complex series(1.0, 0.0);
    Complex term(1.0, 0.0);
    for (int j = 1; j < 4 * N + 64; ++j) {
      term *= f / static_cast<double>(N + 1 + j);
      series += term;
      if (std::abs(term) < 1e-18 * std::abs(series)) break;
    }
    const Complex lead = std::exp(static_cast<double>(N + 1) * std::log(f) - std::lgamma(N + 2.0));
    return expm1(f) - lead * series;
  }
  std::complex<long double> term(1.0L, 0.0L);
  std::complex<long double> sum(0.0L, 0.0L);
  const std::complex<long double> fl(f.real(), f.imag());
  for (int k = 1; k <= N; ++k) {
    term *= fl / static_cast<long double>(k);
    sum += term;
  }
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

double sup_of(const std::vector<CVec>& points, const std::function<double(const CVec&)>& g) {
  double out = 0.0;
  for (const auto& z : points) out = std::max(out, g(z));
  return out;
}

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::normal: return "normal";
    case Provenance::tangential_truncated: return "tangential_truncated";
    case Provenance::tangential_exp: return "tangential_exp";
    case Provenance::user: return "user";
  }
  return "user";
}

nlohmann::json ScalarCandidate::to_json() const {
  return {{"provenance", to_string(provenance)},
          {"base_point", vector_to_json(base_point)},
          {"length_scale", length_scale},
          {"parameters", parameters}};
}

ScalarCandidate normal_candidate(const BoundaryFrame& frame, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorKind::PreconditionFailed, "delta must be positive");
  const CVec P = frame.point;
  const CVec nu = frame.normal;
  ScalarCandidate u;
  u.provenance = Provenance::normal;
  u.base_point = P - delta * nu;
  u.length_scale = delta;
  u.focus_points = {u.base_point};
  u.evaluate = [P, nu, delta](const CVec& z) {
    const Complex w = nu.dot(z - P);  // last frame coordinate
    return std::norm(w + delta) / (9.0 * std::norm(w - delta));
  };
  u.levi_at_base = [nu, delta](const CVec& X) {
    return std::norm(nu.dot(X)) / (36.0 * delta * delta);
  };
  u.parameters = {{"delta", delta}, {"point", vector_to_json(P)}, {"normal", vector_to_json(nu)}};
  return u;
}

Complex TangentialCandidateParams::f(const CVec& z) const {
  return contract(ambient_coeffs, z - base_point);
}

nlohmann::json TangentialCandidateParams::to_json() const {
  return {{"delta", delta},
          {"N", N},
          {"M", M},
          {"R", contact.R},
          {"theta_star", contact.theta_star},
          {"Q", vector_to_json(contact.Q)},
          {"f_coeffs", vector_to_json(f_coeffs)},
          {"ambient_coeffs", vector_to_json(ambient_coeffs)}};
}

CVec linear_functional(const ConvexDomain& domain, const BoundaryFrame& frame,
                       const ContactPoint& contact, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorKind::PreconditionFailed, "delta must be positive");
  const int n = domain.dimension();
  CVec expected = CVec::Zero(n);
  expected(0) = contact.R;
  expected(n - 1) = -delta;
  const CVec w = frame.to_frame(contact.Q);
  if ((w - expected).norm() > 1e-8 * (contact.R + delta)) {
    throw Error(ErrorKind::FrameMisaligned,
                "contact point must sit on the positive first axis of the frame");
  }
  const CVec g = domain.rho().wirtinger_gradient(contact.Q);
  // d/dw of rho(U^* w + P) is conj(U) times the ambient gradient
  return (frame.unitary.conjugate() * g) / delta;
}

TruncationOrder truncation_order(double S) {
  TruncationOrder out;
  if (!(S > 0.0)) return out;
  if (S > 600.0) {
    out.N = kMaxTruncation;
    out.tail = std::numeric_limits<double>::infinity();
    out.capped = true;
    return out;
  }
  const int kmax = std::max(2 * static_cast<int>(std::ceil(S)), kMaxTruncation) + 100;
  std::vector<double> terms(static_cast<std::size_t>(kmax) + 1, 0.0);
  for (int k = 1; k <= kmax; ++k) {
    terms[static_cast<std::size_t>(k)] = std::exp(k * std::log(S) - std::lgamma(k + 1.0));
  }
  // tails[N] = sum_{k > N} terms[k], accumulated from the small end
  std::vector<double> tails(static_cast<std::size_t>(kmax) + 1, 0.0);
  for (int k = kmax - 1; k >= 0; --k) {
    tails[static_cast<std::size_t>(k)] = tails[static_cast<std::size_t>(k) + 1] + terms[static_cast<std::size_t>(k) + 1];
  }
  for (int N = 1; N <= kMaxTruncation; ++N) {
    if (tails[static_cast<std::size_t>(N)] < 1.0) {
      out.N = N;
      out.tail = tails[static_cast<std::size_t>(N)];
      return out;
    }
  }
  out.N = kMaxTruncation;
  out.tail = tails[kMaxTruncation];
  out.capped = true;
  return out;
}

TruncationChoice choose_truncation_N(const TangentialCandidateParams& params,
                                     const ConvexDomain& domain, std::size_t samples, Rng& rng) {
  TruncationChoice out;
  const double g_norm = params.ambient_coeffs.norm();
  const double scale = g_norm > 0.0 ? 1.0 / g_norm : domain.diameter();
  const auto points = sample_mixed(domain, samples, rng, {params.base_point, params.contact.Q}, scale);
  double sup = sup_of(points, [&](const CVec& z) { return std::abs(params.f(z)); });
  if (g_norm > 0.0) {
    // |f| is maximal on the boundary along the directions e^{i phi} conj(g)
    const CVec dir = params.ambient_coeffs.conjugate() / g_norm;
    for (int k = 0; k < 64; ++k) {
      const CVec d = std::polar(1.0, 2.0 * std::numbers::pi * k / 64) * dir;
      const double t = ray_exit_distance(domain, domain.center(), d);
      sup = std::max(sup, std::abs(params.f(domain.center() + t * d)));
    }
  }
  out.S = 1.05 * sup;
  out.order = truncation_order(out.S);
  if (out.order.capped) out.diagnostics.push_back("TruncationCapped: N limited to 512");
  return out;
}

TangentialCandidate tangential_candidate(const ConvexDomain& domain, const CVec& p, const CVec& xi,
                                         double delta, const TangentialOptions& options) {
  if (!(delta > 0.0)) throw Error(ErrorKind::PreconditionFailed, "delta must be positive");
  if (std::abs(xi.norm() - 1.0) > 1e-8) {
    throw Error(ErrorKind::PreconditionFailed, "tangential direction must be a unit vector");
  }
  const CVec nu = outward_normal(domain, p);
  if (std::abs(hermitian(xi, nu)) > 1e-8) {
    throw Error(ErrorKind::PreconditionFailed, "direction must be complex-tangential");
  }
  const CVec base = base_point(domain, p, nu, delta);

  TangentialCandidate out;
  auto& params = out.params;
  params.delta = delta;
  params.base_point = base;
  params.contact = max_radius(domain, base, xi, options.probe);
  params.frame = normalize_frame(domain, p, CVec(std::polar(1.0, params.contact.theta_star) * xi));
  params.f_coeffs = linear_functional(domain, params.frame, params.contact, delta);
  params.ambient_coeffs = domain.rho().wirtinger_gradient(params.contact.Q) / delta;

  const double re_fq = params.f(params.contact.Q).real();
  const double headroom = options.closed_form ? 1.0 : 2.0;
  params.M = std::max(1.0, std::pow(std::exp(re_fq) + headroom, 2));

  auto& u = out.candidate;
  u.base_point = base;
  const double g_norm = params.ambient_coeffs.norm();
  u.length_scale = g_norm > 0.0 ? 1.0 / g_norm : delta;
  u.focus_points = {base, params.contact.Q};

  if (options.closed_form) {
    params.N = 0;
    u.provenance = Provenance::tangential_exp;
  } else {
    Rng rng(derive_seed(options.seed, 1));
    auto choice = choose_truncation_N(params, domain, options.samples, rng);
    params.N = choice.order.N;
    u.provenance = Provenance::tangential_truncated;
    for (auto& d : choice.diagnostics) u.diagnostics.push_back(std::move(d));
    u.parameters["S"] = choice.S;
    u.parameters["tail"] = choice.order.tail;
  }

  const auto shared = std::make_shared<const TangentialCandidateParams>(params);
  const int N = params.N;
  const double M = params.M;
  auto G = [shared, N](const CVec& z) {
    const Complex f = shared->f(z);
    return std::norm(N == 0 ? expm1(f) : truncated_expm1(f, N));
  };
  u.evaluate = [G, M](const CVec& z) { return G(z) / M; };
  u.levi_at_base = [shared, M](const CVec& X) {
    return std::norm(contract(shared->ambient_coeffs, X)) / M;
  };

  Rng rng_a(derive_seed(options.seed, 2));
  Rng rng_b(derive_seed(options.seed, 3));
  out.sampled_sup_a = sup_of(sample_mixed(domain, options.samples, rng_a, u.focus_points, u.length_scale), G);
  out.sampled_sup_b = sup_of(sample_mixed(domain, options.samples, rng_b, u.focus_points, u.length_scale), G);
  const double sampled = std::max(out.sampled_sup_a, out.sampled_sup_b);
  if (sampled > M * (1.0 + 1e-9)) {
    throw Error(ErrorKind::NormalizationUnstable, "sampled |F|^2 exceeds the normalization bound");
  }
  const double low = std::min(out.sampled_sup_a, out.sampled_sup_b);
  if (low > 0.0 && sampled / low > 1.2) {
    u.diagnostics.push_back("sampled sup of |F|^2 differs by more than 20% between sample sets");
  }

  const auto extra = u.parameters;
  u.parameters = params.to_json();
  u.parameters.update(extra);
  u.parameters["sampled_sup"] = {out.sampled_sup_a, out.sampled_sup_b};
  return out;
}

double sibony_lower_bound(const ScalarCandidate& candidate, const CVec& xi) {
  const double levi = candidate.levi_at_base(xi);
  if (levi < -1e-10) throw Error(ErrorKind::NegativeLevi, "candidate has negative Levi form at its base");
  return std::sqrt(std::max(0.0, levi));
}

double mixed_lower_bound(double a, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorKind::PreconditionFailed, "delta must be positive");
  return std::abs(a) / (6.0 * delta);
}

SibonyBound sibony_bound(const ConvexDomain& domain, const CVec& p, const CVec& X, double delta,
                         const TangentialOptions& options) {
  SibonyBound out;
  const BoundaryFrame frame = normalize_frame(domain, p);
  out.normal_part = sibony_lower_bound(normal_candidate(frame, delta), X);
  const CVec T = X - hermitian(X, frame.normal) * frame.normal;
  if (T.norm() > 1e-12 * std::max(1.0, X.norm())) {
    auto tangential = tangential_candidate(domain, p, T / T.norm(), delta, options);
    out.tangential_part = sibony_lower_bound(tangential.candidate, X);
    out.diagnostics = tangential.candidate.diagnostics;
  }
  out.value = std::max(out.normal_part, out.tangential_part);
  return out;
}

}  // namespace cxmetric
