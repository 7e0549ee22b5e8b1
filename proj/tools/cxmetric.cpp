// Command line front end: type | radius | bounds | sweep | verify | bnw.
// Exit codes: 0 all invariants held, 1 invariant violation, 2 configuration error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cxmetric/error.hpp"
#include "cxmetric/kobayashi.hpp"
#include "cxmetric/psh_checks.hpp"
#include "cxmetric/scaling.hpp"
#include "cxmetric/serialize.hpp"
#include "cxmetric/sibony.hpp"

namespace {

using cxmetric::Error;
using cxmetric::ErrorKind;
using json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kConfig = 2;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigInvalid:
    case ErrorKind::NotOnBoundary:
    case ErrorKind::OutsideDomain:
    case ErrorKind::ZeroProjection:
    case ErrorKind::CenterOutside:
    case ErrorKind::PreconditionFailed:
    case ErrorKind::NotAdmissible:
    case ErrorKind::OutsideDisc:
    case ErrorKind::GradientVanishes:
      return kConfig;
    default:
      return kViolation;
  }
}

struct Common {
  std::string domain;
  std::string point = "north";
  std::string dir = "tangent:1";
  std::uint64_t seed = 0;
  std::string out;
  int theta_samples = 256;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--domain", c.domain, "corpus id (ball:n, cxellipsoid:m1,...,mn, shifted:..., rotated:...) or JSON path")
      ->required();
  app->add_option("--point", c.point, "'north' or a boundary point, e.g. 0,1")->capture_default_str();
  app->add_option("--dir", c.dir, "'normal', 'tangent:j' or a complex vector")->capture_default_str();
  app->add_option("--seed", c.seed, "sampling seed")->capture_default_str();
  app->add_option("--out", c.out, "output path (.csv or .json); stdout when absent");
  app->add_option("--theta-samples", c.theta_samples, "angular grid for radius searches")->capture_default_str();
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ConfigInvalid, "cannot open '" + path + "' for writing");
  out << text;
}

json vec(const cxmetric::CVec& v) { return json::parse(cxmetric::vector_to_json(v).dump()); }

json type_json(const cxmetric::LineTypeEstimate& t) {
  json j;
  j["m"] = t.finite() ? json(t.m) : json(nullptr);
  j["method"] = t.method == cxmetric::TypeMethod::taylor ? "taylor" : "regression";
  j["exact"] = t.exact;
  j["coefficient_table"] = t.coefficient_table;
  j["diagnostics"] = t.diagnostics;
  return j;
}

int run_type(const Common& c) {
  const auto domain = cxmetric::load_domain(c.domain);
  const auto p = cxmetric::resolve_point(domain, c.point);
  const auto dir = cxmetric::resolve_direction(domain, p, c.dir);
  json j;
  j["point"] = vec(p);
  j["direction"] = vec(dir.xi);
  j["taylor"] = type_json(cxmetric::line_type(domain, p, dir.xi));
  cxmetric::LineTypeOptions numeric;
  numeric.force_numeric = true;
  j["numeric"] = type_json(cxmetric::line_type(domain, p, dir.xi, numeric));
  emit(j.dump(2) + "\n", c.out);
  return kOk;
}

int run_radius(const Common& c, double lo, double hi, int count) {
  const auto domain = cxmetric::load_domain(c.domain);
  const auto p = cxmetric::resolve_point(domain, c.point);
  const auto dir = cxmetric::resolve_direction(domain, p, c.dir);
  cxmetric::RadialProbe probe;
  probe.theta_samples = c.theta_samples;
  const auto scaling =
      cxmetric::radius_scaling_exponent(domain, p, dir.xi, cxmetric::log_grid(lo, hi, count),
                                        cxmetric::RadiusKind::automatic, probe);
  json j;
  j["slope"] = scaling.fit.slope;
  j["r2"] = scaling.fit.r2;
  j["monotone"] = scaling.monotone;
  j["deltas"] = scaling.deltas;
  j["radii"] = scaling.radii;
  emit(j.dump(2) + "\n", c.out);
  return kOk;
}

int run_bounds(const Common& c, double delta, bool want_upper, bool want_lower, bool truncated, int budget) {
  if (!want_upper && !want_lower) want_upper = want_lower = true;
  const auto domain = cxmetric::load_domain(c.domain);
  const auto p = cxmetric::resolve_point(domain, c.point);
  const auto dir = cxmetric::resolve_direction(domain, p, c.dir);
  const auto nu = cxmetric::outward_normal(domain, p);
  const auto base = cxmetric::base_point(domain, p, nu, delta);
  cxmetric::RadialProbe probe;
  probe.theta_samples = c.theta_samples;

  json j;
  j["delta"] = delta;
  j["base_point"] = vec(base);
  j["direction"] = vec(dir.xi);
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  if (want_lower) {
    cxmetric::ScalarCandidate cand;
    if (dir.normal) {
      cand = cxmetric::normal_candidate(cxmetric::normalize_frame(domain, p), delta);
    } else {
      cxmetric::TangentialOptions opts;
      opts.closed_form = !truncated;
      opts.seed = c.seed;
      opts.probe = probe;
      cand = cxmetric::tangential_candidate(domain, p, dir.xi, delta, opts).candidate;
    }
    lower = cxmetric::sibony_lower_bound(cand, dir.xi);
    j["lower"] = lower;
    j["candidate"] = json::parse(cand.to_json().dump());
    j["candidate_diagnostics"] = cand.diagnostics;
  }
  if (want_upper) {
    const auto affine = cxmetric::affine_disc_bound(domain, base, dir.xi, probe);
    cxmetric::RecenteredOptions opts;
    opts.budget = budget;
    const auto recentered = cxmetric::recentered_disc_bound(domain, base, dir.xi, nu, opts, probe);
    upper = std::min(affine.value, recentered.value);
    j["upper"] = upper;
    j["upper_affine"] = affine.value;
    j["upper_recentered"] = recentered.value;
    j["disc"] = json::parse(recentered.disc.to_json().dump());
  }
  if (domain.metric_oracle()) j["oracle"] = (*domain.metric_oracle())(base, dir.xi);
  const bool crossed = want_lower && want_upper && lower > upper + 1e-9 * std::max(1.0, upper);
  j["violation"] = crossed;
  emit(j.dump(2) + "\n", c.out);
  return crossed ? kViolation : kOk;
}

int run_sweep(const Common& c, cxmetric::SweepConfig config, const std::string& methods) {
  config.domain_id = c.domain;
  config.point = c.point;
  config.direction = c.dir;
  config.seed = c.seed;
  config.probe.theta_samples = c.theta_samples;
  config.methods = cxmetric::parse_methods(methods);
  const auto report = cxmetric::sweep(config);
  if (c.out.empty()) {
    std::cout << report.to_csv();
  } else {
    cxmetric::write_report(report, c.out);
  }
  for (const auto& d : report.diagnostics) std::cerr << "diagnostic: " << d << "\n";
  return report.violations == 0 ? kOk : kViolation;
}

int run_verify(const Common& c, double delta, const std::string& kind, std::size_t samples) {
  const auto domain = cxmetric::load_domain(c.domain);
  const auto p = cxmetric::resolve_point(domain, c.point);
  cxmetric::ScalarCandidate cand;
  if (kind == "normal") {
    cand = cxmetric::normal_candidate(cxmetric::normalize_frame(domain, p), delta);
  } else if (kind == "tangential" || kind == "truncated") {
    const auto dir = cxmetric::resolve_direction(domain, p, c.dir);
    if (dir.normal) throw Error(ErrorKind::ConfigInvalid, "tangential candidates need a tangential --dir");
    cxmetric::TangentialOptions opts;
    opts.closed_form = kind == "tangential";
    opts.seed = c.seed;
    opts.probe.theta_samples = c.theta_samples;
    cand = cxmetric::tangential_candidate(domain, p, dir.xi, delta, opts).candidate;
  } else {
    throw Error(ErrorKind::ConfigInvalid, "unknown candidate '" + kind + "'");
  }
  cxmetric::LeviProbe probe;
  probe.seed = c.seed;
  const auto report = cxmetric::verify_candidate(cand, domain, samples, probe);
  json j;
  j["candidate"] = json::parse(cand.to_json().dump());
  j["report"] = json::parse(report.to_json().dump());
  emit(j.dump(2) + "\n", c.out);
  return report.passed() ? kOk : kViolation;
}

int run_bnw(const std::string& coeffs, double r, int grid, int random_count, int degree,
            std::uint64_t seed, const std::string& out) {
  json j;
  j["r"] = r;
  if (!coeffs.empty()) {
    cxmetric::BNWSample s;
    s.r = r;
    s.grid = grid;
    s.coefficients = {0.0, 0.0};
    std::stringstream ss(coeffs);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        s.coefficients.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw Error(ErrorKind::ConfigInvalid, "bad coefficient '" + item + "'");
      }
    }
    const double constant = cxmetric::bnw_constant(s);
    j["coefficients"] = std::vector<double>(s.coefficients.begin() + 2, s.coefficients.end());
    j["constant"] = constant;
    emit(j.dump(2) + "\n", out);
    return constant > 0.0 ? kOk : kViolation;
  }
  if (random_count <= 0) throw Error(ErrorKind::ConfigInvalid, "give --coeffs or --random-count");
  cxmetric::Rng rng(seed);
  double lo = std::numeric_limits<double>::infinity();
  int nonpositive = 0;
  for (int k = 0; k < random_count; ++k) {
    const double c = cxmetric::bnw_constant(cxmetric::random_bnw_sample(degree, r, rng, grid));
    lo = std::min(lo, c);
    if (!(c > 0.0)) ++nonpositive;
  }
  j["degree"] = degree;
  j["count"] = random_count;
  j["min_constant"] = lo;
  j["nonpositive"] = nonpositive;
  emit(j.dump(2) + "\n", out);
  return nonpositive == 0 ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-sided estimates of invariant metrics near boundaries of convex domains"};
  app.require_subcommand(1);

  Common type_c;
  auto* type_cmd = app.add_subcommand("type", "line type of the boundary along a direction");
  add_common(type_cmd, type_c);

  Common radius_c;
  double radius_lo = 1e-4;
  double radius_hi = 1e-2;
  int radius_count = 16;
  auto* radius_cmd = app.add_subcommand("radius", "radius law R(delta) and its fitted exponent");
  add_common(radius_cmd, radius_c);
  radius_cmd->add_option("--delta-min", radius_lo)->capture_default_str();
  radius_cmd->add_option("--delta-max", radius_hi)->capture_default_str();
  radius_cmd->add_option("--count", radius_count)->capture_default_str();

  Common bounds_c;
  double bounds_delta = 1e-2;
  bool bounds_upper = false;
  bool bounds_lower = false;
  bool bounds_truncated = false;
  int bounds_budget = 200;
  auto* bounds_cmd = app.add_subcommand("bounds", "lower and upper bounds at one delta");
  add_common(bounds_cmd, bounds_c);
  bounds_cmd->add_option("--delta", bounds_delta)->capture_default_str();
  bounds_cmd->add_flag("--upper", bounds_upper, "disc upper bounds only");
  bounds_cmd->add_flag("--lower", bounds_lower, "Sibony lower bound only");
  bounds_cmd->add_flag("--truncated", bounds_truncated, "use the finite-N tangential candidate");
  bounds_cmd->add_option("--budget", bounds_budget, "recentered disc search budget")->capture_default_str();

  Common sweep_c;
  cxmetric::SweepConfig sweep_config;
  std::string sweep_methods = "sibony,disc,oracle";
  bool sweep_truncated = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "delta sweep with exponent fits and sandwich constants");
  add_common(sweep_cmd, sweep_c);
  sweep_cmd->add_option("--delta-min", sweep_config.delta_min)->capture_default_str();
  sweep_cmd->add_option("--delta-max", sweep_config.delta_max)->capture_default_str();
  sweep_cmd->add_option("--count", sweep_config.count)->capture_default_str();
  sweep_cmd->add_option("--methods", sweep_methods, "subset of sibony,disc,recentered,oracle")->capture_default_str();
  sweep_cmd->add_option("--threads", sweep_config.threads, "worker threads (0: all cores)")->capture_default_str();
  sweep_cmd->add_option("--budget", sweep_config.recentered_budget, "recentered disc search budget")
      ->capture_default_str();
  sweep_cmd->add_flag("--truncated", sweep_truncated, "use the finite-N tangential candidate");

  Common verify_c;
  double verify_delta = 1e-2;
  std::string verify_kind = "normal";
  std::size_t verify_samples = 10000;
  auto* verify_cmd = app.add_subcommand("verify", "sampled admissibility of a Sibony candidate");
  add_common(verify_cmd, verify_c);
  verify_cmd->add_option("--delta", verify_delta)->capture_default_str();
  verify_cmd->add_option("--candidate", verify_kind, "normal | tangential | truncated")->capture_default_str();
  verify_cmd->add_option("--samples", verify_samples)->capture_default_str();

  std::string bnw_coeffs;
  double bnw_r = 1.0;
  int bnw_grid = 1000;
  int bnw_random = 0;
  int bnw_degree = 6;
  std::uint64_t bnw_seed = 0;
  std::string bnw_out;
  auto* bnw_cmd = app.add_subcommand("bnw", "ratio constant of convex polynomials on [0, r]");
  bnw_cmd->add_option("--coeffs", bnw_coeffs, "a_2,a_3,...,a_m");
  bnw_cmd->add_option("--r", bnw_r)->capture_default_str();
  bnw_cmd->add_option("--grid", bnw_grid)->capture_default_str();
  bnw_cmd->add_option("--random-count", bnw_random)->capture_default_str();
  bnw_cmd->add_option("--degree", bnw_degree)->capture_default_str();
  bnw_cmd->add_option("--seed", bnw_seed)->capture_default_str();
  bnw_cmd->add_option("--out", bnw_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*type_cmd) return run_type(type_c);
    if (*radius_cmd) return run_radius(radius_c, radius_lo, radius_hi, radius_count);
    if (*bounds_cmd) {
      return run_bounds(bounds_c, bounds_delta, bounds_upper, bounds_lower, bounds_truncated, bounds_budget);
    }
    if (*sweep_cmd) {
      sweep_config.closed_form = !sweep_truncated;
      return run_sweep(sweep_c, sweep_config, sweep_methods);
    }
    if (*verify_cmd) return run_verify(verify_c, verify_delta, verify_kind, verify_samples);
    if (*bnw_cmd) return run_bnw(bnw_coeffs, bnw_r, bnw_grid, bnw_random, bnw_degree, bnw_seed, bnw_out);
  } catch (const Error& e) {
    std::cerr << "error (" << cxmetric::to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kConfig;
}
