#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cxmetric/line_geometry.hpp"

namespace cxmetric {

enum class Method { sibony, disc, recentered, oracle };

std::string to_string(Method m);
/// Comma separated subset of sibony, disc, recentered, oracle.
std::vector<Method> parse_methods(const std::string& text);

struct SweepConfig {
  std::string domain_id = "ball:2";
  /// "north" or a boundary point as a complex vector.
  std::string point = "north";
  /// "normal", "tangent:j" (1-based) or a complex vector projected onto the
  /// complex tangent space.
  std::string direction = "tangent:1";
  double delta_min = 1e-4;
  double delta_max = 1e-1;
  int count = 16;
  std::vector<Method> methods = {Method::sibony, Method::disc, Method::oracle};
  std::uint64_t seed = 0;
  RadialProbe probe;
  bool closed_form = true;
  int recentered_budget = 200;
  /// 0: hardware concurrency.
  int threads = 0;

  /// ConfigInvalid on 0 < min < max, count >= 8 or empty methods violations.
  void validate() const;
  [[nodiscard]] bool wants(Method m) const;
  [[nodiscard]] nlohmann::ordered_json to_json() const;
};

/// "north": the exit point of the ray from the domain center along +Re z_n.
CVec resolve_point(const ConvexDomain& domain, const std::string& spec);

struct ResolvedDirection {
  CVec xi;
  bool normal = false;
};
ResolvedDirection resolve_direction(const ConvexDomain& domain, const CVec& p, const std::string& spec);

struct BoundRecord {
  double delta = 0.0;
  std::optional<double> lower;
  std::optional<double> upper;
  std::optional<double> oracle;
  int m_used = 0;
  std::optional<double> theta_star;
  std::optional<double> R_xi;
  std::optional<double> grad_ratio;
  std::optional<double> upper_affine;
  std::optional<double> upper_recentered;
  std::vector<std::string> diagnostics;

  /// lower <= upper + 1e-9 and lower <= oracle <= upper + 1e-9 where present
  /// (slack relative to max(1, value)).
  [[nodiscard]] std::vector<std::string> violations() const;
};

enum class RecordField { lower, upper, oracle, R_xi };

struct ExponentFit {
  double slope = 0.0;
  double r2 = 0.0;
};

/// Least squares of log(field) against log(delta) over records carrying the
/// field; needs >= 8 such records (PreconditionFailed) and two distinct
/// deltas (DegenerateFit).
ExponentFit fit_exponent(const std::vector<BoundRecord>& records, RecordField field);

struct Sandwich {
  double c = 0.0;  // min lower * delta^{1/m}
  double C = 0.0;  // max upper * delta^{1/m}
  double ratio = 0.0;
  bool monotone = true;  // upper/lower monotone in delta
};

Sandwich sandwich_constants(const std::vector<BoundRecord>& records, int m);

struct ScalingReport {
  SweepConfig config;
  std::vector<BoundRecord> records;
  std::optional<ExponentFit> exponent_lower;
  std::optional<ExponentFit> exponent_upper;
  std::optional<Sandwich> sandwich;
  LineTypeEstimate type_estimate;
  bool normal_direction = false;
  CVec point;
  CVec direction;
  std::vector<std::string> diagnostics;
  std::size_t violations = 0;

  [[nodiscard]] std::string to_csv() const;
  [[nodiscard]] nlohmann::ordered_json to_json() const;
};

ScalingReport sweep(const SweepConfig& config);

/// Writes CSV for a .csv path and JSON otherwise.
void write_report(const ScalingReport& report, const std::string& path);

}  // namespace cxmetric
