#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cxmetric/line_geometry.hpp"

namespace cxmetric {

enum class Provenance { normal, tangential_truncated, tangential_exp, user };

std::string to_string(Provenance p);

/// Candidate u for the Sibony lower bound at base_point: u(base) = 0,
/// 0 <= u <= 1 on the domain and log u plurisubharmonic.
struct ScalarCandidate {
  CVec base_point;
  std::function<double(const CVec&)> evaluate;
  /// Levi form of u at base_point along a direction.
  std::function<double(const CVec&)> levi_at_base;
  Provenance provenance = Provenance::user;
  /// Distance over which u varies by O(1) near the base point.
  double length_scale = 1.0;
  /// Points near which admissibility sampling is concentrated.
  std::vector<CVec> focus_points;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<std::string> diagnostics;

  double operator()(const CVec& z) const { return evaluate(z); }
  [[nodiscard]] nlohmann::json to_json() const;
};

/// u = (1/9) |(w_n + delta) / (w_n - delta)|^2 with w = frame.to_frame(z).
/// Levi form at P_delta along X is |<X, nu>|^2 / (36 delta^2).
ScalarCandidate normal_candidate(const BoundaryFrame& frame, double delta);

/// Frame whose first axis is e^{i theta*} xi and the linear functional
/// f(z) = (1/delta) sum_k d rho/d z_k(Q) (z - P_delta)_k built from it.
struct TangentialCandidateParams {
  BoundaryFrame frame;
  ContactPoint contact;
  double delta = 0.0;
  int N = 0;  // 0: closed form e^f - 1
  double M = 1.0;
  /// Coefficients of f in frame coordinates: f = sum_{j<n} c_j w_j + c_n (w_n + delta).
  CVec f_coeffs;
  /// Same functional in ambient coordinates: f = sum_k g_k (z - P_delta)_k.
  CVec ambient_coeffs;
  CVec base_point;

  [[nodiscard]] Complex f(const CVec& z) const;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Requires frame.to_frame(Q) = (R, 0, ..., 0, -delta) up to 1e-8 (relative),
/// i.e. a frame built with first axis e^{i theta*} xi; FrameMisaligned
/// otherwise.
CVec linear_functional(const ConvexDomain& domain, const BoundaryFrame& frame,
                       const ContactPoint& contact, double delta);

struct TruncationOrder {
  int N = 0;
  double tail = 0.0;  // sum_{k > N} S^k / k!
  bool capped = false;
};

inline constexpr int kMaxTruncation = 512;

/// Smallest N with sum_{k > N} S^k / k! < 1 (0 for S = 0), capped at 512.
TruncationOrder truncation_order(double S);

/// S = 1.05 x sampled sup of |f| over the domain (mixed samples plus boundary
/// points along the directions that maximize |f|), then truncation_order(S).
struct TruncationChoice {
  TruncationOrder order;
  double S = 0.0;
  std::vector<std::string> diagnostics;
};
TruncationChoice choose_truncation_N(const TangentialCandidateParams& params,
                                     const ConvexDomain& domain, std::size_t samples, Rng& rng);

struct TangentialOptions {
  bool closed_form = true;
  /// Size of each of the two sample sets for the sup diagnostics.
  std::size_t samples = 2000;
  std::uint64_t seed = 0;
  RadialProbe probe;
};

struct TangentialCandidate {
  ScalarCandidate candidate;
  TangentialCandidateParams params;
  /// Largest sampled G = |F|^2 on each sample set.
  double sampled_sup_a = 0.0;
  double sampled_sup_b = 0.0;
};

/// u = |F|^2 / M with F = e^f - 1 (closed form) or F_N = sum_{k=1}^N f^k/k!.
/// M = max(1, (e^{Re f(Q)} + 1)^2) (closed form) or max(1, (e^{Re f(Q)} + 2)^2)
/// (truncated); both dominate |F|^2 on the domain since Re f <= Re f(Q) there.
/// Throws NormalizationUnstable when a sampled value of |F|^2 exceeds M.
TangentialCandidate tangential_candidate(const ConvexDomain& domain, const CVec& p, const CVec& xi,
                                         double delta, const TangentialOptions& options = {});

/// sqrt of the Levi form of the candidate at its base point along xi;
/// NegativeLevi below -1e-10.
double sibony_lower_bound(const ScalarCandidate& candidate, const CVec& xi);

/// |a| / (6 delta) for X = a nu + b T.
double mixed_lower_bound(double a, double delta);

struct SibonyBound {
  double value = 0.0;
  double normal_part = 0.0;      // from the normal candidate
  double tangential_part = 0.0;  // from the tangential candidate (0 if xi is normal)
  std::vector<std::string> diagnostics;
};

/// Best of the normal and tangential candidates at P_delta = P - delta nu for
/// an arbitrary direction X.
SibonyBound sibony_bound(const ConvexDomain& domain, const CVec& p, const CVec& X, double delta,
                         const TangentialOptions& options = {});

}  // namespace cxmetric
