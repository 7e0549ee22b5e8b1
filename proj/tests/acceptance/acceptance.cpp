// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Usage: acceptance [--cli <path to cxmetric>]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cxmetric/error.hpp"
#include "cxmetric/kobayashi.hpp"
#include "cxmetric/psh_checks.hpp"
#include "cxmetric/scaling.hpp"
#include "cxmetric/sibony.hpp"

using namespace cxmetric;

namespace {

const std::vector<std::string> kCorpus = {"ball:2", "cxellipsoid:2,1", "cxellipsoid:3,1"};

struct Outcome {
  bool passed = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      notes.push_back(what);
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)); }

CVec north_base(const ConvexDomain& d, double delta) {
  const CVec p = resolve_point(d, "north");
  return base_point(d, p, outward_normal(d, p), delta);
}

int expected_type(const std::string& id) {
  if (id == "ball:2") return 2;
  if (id == "cxellipsoid:2,1") return 4;
  return 6;
}

SweepConfig tangential_config(const std::string& id, std::vector<Method> methods) {
  SweepConfig cfg;
  cfg.domain_id = id;
  cfg.delta_min = 1e-4;
  cfg.delta_max = 1e-2;
  cfg.count = 16;
  cfg.methods = std::move(methods);
  return cfg;
}

Outcome criterion1() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  for (const char* id : {"ball:2", "cxellipsoid:2,1"}) {
    const auto d = load_domain(id);
    const CVec p = resolve_point(d, "north");
    const auto frame = normalize_frame(d, p);
    for (double delta : {1e-1, 1e-2, 1e-3, 1e-4}) {
      const double lower = sibony_lower_bound(normal_candidate(frame, delta), frame.normal);
      const double exact = 1.0 / (6.0 * delta);
      out.require(rel_close(lower, exact, 1e-10), std::string(id) + " delta " + num(delta) + ": " + num(lower));
      if (std::string(id) == "ball:2") {
        const CVec base = north_base(d, delta);
        const double oracle = ball_metric_oracle(base, frame.normal);
        const double upper = affine_disc_bound(d, base, frame.normal).value;
        out.require(exact <= oracle && oracle <= upper * (1 + 1e-12), "ball sandwich at " + num(delta));
      }
    }
  }
  const double t = seconds_since(t0);
  out.require(t < 1.0, "took " + num(t) + " s");
  out.notes.push_back("time " + num(t) + " s");
  return out;
}

Outcome criterion2() {
  Outcome out;
  const std::vector<std::pair<double, double>> ranges = {{-0.55, -0.45}, {-0.30, -0.20}, {-0.22, -0.12}};
  for (std::size_t k = 0; k < kCorpus.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto report = sweep(tangential_config(kCorpus[k], {Method::sibony, Method::disc}));
    const double t = seconds_since(t0);
    const auto [lo, hi] = ranges[k];
    const auto& fl = report.exponent_lower;
    const auto& fu = report.exponent_upper;
    if (!fl || !fu) {
      out.require(false, kCorpus[k] + ": missing fit");
      continue;
    }
    out.require(fl->slope >= lo && fl->slope <= hi, kCorpus[k] + " lower slope " + num(fl->slope));
    out.require(fu->slope >= lo && fu->slope <= hi, kCorpus[k] + " upper slope " + num(fu->slope));
    out.require(fl->r2 >= 0.99 && fu->r2 >= 0.99, kCorpus[k] + " R^2 " + num(fl->r2) + "/" + num(fu->r2));
    out.require(t < 30.0, kCorpus[k] + " took " + num(t) + " s");
    out.notes.push_back(kCorpus[k] + ": " + num(fl->slope) + " / " + num(fu->slope) + " in " + num(t) + " s");
  }
  return out;
}

Outcome criterion3() {
  Outcome out;
  for (const auto& id : kCorpus) {
    SweepConfig cfg;
    cfg.domain_id = id;
    cfg.direction = "normal";
    cfg.methods = {Method::sibony, Method::disc, Method::recentered};
    const auto report = sweep(cfg);
    if (!report.exponent_lower || !report.exponent_upper) {
      out.require(false, id + ": missing fit");
      continue;
    }
    const double su = report.exponent_upper->slope;
    const double sl = report.exponent_lower->slope;
    out.require(su >= -1.05 && su <= -0.95, id + " upper slope " + num(su));
    out.require(std::abs(sl + 1.0) <= 1e-9, id + " lower slope " + num(sl));
    out.notes.push_back(id + ": upper " + num(su));
  }
  return out;
}

Outcome criterion4() {
  Outcome out;
  const auto grid = log_grid(1e-4, 1e-2, 16);
  for (const auto& id : kCorpus) {
    const auto d = load_domain(id);
    const CVec p = resolve_point(d, "north");
    const CVec nu = outward_normal(d, p);
    const CVec xi = resolve_direction(d, p, "tangent:1").xi;
    const auto scaling = radius_scaling_exponent(d, p, xi, grid);
    const int m = expected_type(id);
    out.require(std::abs(scaling.fit.slope - 1.0 / m) <= 0.03, id + " radius slope " + num(scaling.fit.slope));
    double lo = INFINITY;
    double hi = 0.0;
    for (double delta : grid) {
      const double v = max_radius(d, base_point(d, p, nu, delta), xi).R * std::pow(delta, -1.0 / m);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    out.require(hi / lo <= 2.0, id + " radius sandwich " + num(hi / lo));
    out.notes.push_back(id + ": slope " + num(scaling.fit.slope) + ", C/c " + num(hi / lo));
  }
  return out;
}

Outcome criterion5() {
  Outcome out;
  const auto grid = log_grid(1e-4, 1e-2, 16);
  for (const char* id : {"ball:2", "cxellipsoid:2,1"}) {
    const auto d = load_domain(id);
    const CVec p = resolve_point(d, "north");
    const CVec nu = outward_normal(d, p);
    const CVec xi = resolve_direction(d, p, "tangent:1").xi;
    const int m = expected_type(id);
    double lo = INFINITY;
    double hi = 0.0;
    for (double delta : grid) {
      const auto c = max_radius(d, base_point(d, p, nu, delta), xi);
      const double r = gradient_ratio(d, c, xi, delta, m);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    const bool ball = std::string(id) == "ball:2";
    if (ball) out.require(lo >= 1.2 && hi <= 1.6, "ball grad ratio range [" + num(lo) + ", " + num(hi) + "]");
    out.require(hi / lo <= (ball ? 1.10 : 1.25), std::string(id) + " spread " + num(hi / lo));
    out.notes.push_back(std::string(id) + ": [" + num(lo) + ", " + num(hi) + "]");
  }
  return out;
}

Outcome criterion6() {
  Outcome out;
  std::size_t records = 0;
  for (const char* dir : {"tangent:1", "normal"}) {
    SweepConfig cfg;
    cfg.direction = dir;
    cfg.methods = {Method::sibony, Method::disc, Method::recentered, Method::oracle};
    const auto report = sweep(cfg);
    out.require(report.violations == 0, std::string(dir) + ": " + std::to_string(report.violations) + " violations");
    for (const auto& r : report.records) {
      ++records;
      out.require(r.violations().empty(), std::string(dir) + " record violation at " + num(r.delta));
      if (std::string(dir) == "tangent:1") {
        out.require(rel_close(*r.upper_affine, *r.oracle, 1e-6), "affine vs oracle at " + num(r.delta));
      }
    }
  }
  out.notes.push_back(std::to_string(records) + " records");
  return out;
}

Outcome criterion7() {
  Outcome out;
  const auto ball = make_ball(2);
  const CVec p = unit_vector(2, 1);
  const CVec X = unit_vector(2, 1) + unit_vector(2, 0);
  for (double delta : log_grid(1e-4, 1e-1, 16)) {
    const double mixed = mixed_lower_bound(1.0, delta);
    const CVec base = base_point(ball, p, p, delta);
    const double oracle = ball_metric_oracle(base, X);
    const double sib = sibony_bound(ball, p, X, delta).value;
    const double upper = affine_disc_bound(ball, base, X).value;
    out.require(rel_close(mixed, 1.0 / (6.0 * delta), 1e-12), "mixed formula at " + num(delta));
    out.require(mixed <= oracle, "mixed > oracle at " + num(delta));
    out.require(sib <= oracle * (1 + 1e-9) && oracle <= upper * (1 + 1e-9), "sandwich at " + num(delta));
  }
  return out;
}

Outcome criterion8() {
  Outcome out;
  int configs = 0;
  double slowest = 0.0;
  auto run = [&](const std::string& label, const ScalarCandidate& u, const ConvexDomain& d) {
    const auto t0 = std::chrono::steady_clock::now();
    LeviProbe probe;
    probe.tolerance = 1e-8;
    const auto report = verify_candidate(u, d, 10000, probe);
    const double t = seconds_since(t0);
    slowest = std::max(slowest, t);
    ++configs;
    std::string why;
    for (const auto& f : report.failures) why += " " + f;
    out.require(report.passed(), label + ":" + why);
    out.require(t < 10.0, label + " took " + num(t) + " s");
  };
  for (const auto& id : kCorpus) {
    const auto d = load_domain(id);
    const CVec p = resolve_point(d, "north");
    const CVec xi = resolve_direction(d, p, "tangent:1").xi;
    const auto frame = normalize_frame(d, p);
    for (double delta : {1e-1, 1e-2, 1e-3, 1e-4}) {
      run(id + " normal " + num(delta), normal_candidate(frame, delta), d);
      try {
        run(id + " tangential " + num(delta), tangential_candidate(d, p, xi, delta).candidate, d);
      } catch (const Error& e) {
        out.require(false, id + " tangential " + num(delta) + ": " + e.what());
      }
    }
    for (double delta : {1e-1, 5e-2}) {
      TangentialOptions opts;
      opts.closed_form = false;
      try {
        run(id + " truncated " + num(delta), tangential_candidate(d, p, xi, delta, opts).candidate, d);
      } catch (const Error& e) {
        out.require(false, id + " truncated " + num(delta) + ": " + e.what());
      }
    }
  }
  out.notes.push_back(std::to_string(configs) + " configurations, slowest " + num(slowest) + " s");
  return out;
}

Outcome criterion9() {
  Outcome out;
  out.require(std::abs(bnw_constant({{0, 0, 1.0}, 1.0, 1000}) - 1.0) <= 1e-6, "x^2");
  out.require(std::abs(bnw_constant({{0, 0, 1.0, -0.2}, 1.0, 1000}) - 2.0 / 3.0) <= 1e-6, "x^2 - 0.2x^3");
  Rng rng(2024);
  for (int m = 3; m <= 6; ++m) {
    double lo = INFINITY;
    for (int k = 0; k < 1000; ++k) lo = std::min(lo, bnw_constant(random_bnw_sample(m, 1.0, rng)));
    out.require(lo > 0.0, "m = " + std::to_string(m) + " min " + num(lo));
    out.notes.push_back("m=" + std::to_string(m) + " min " + num(lo));
  }
  return out;
}

Outcome criterion10() {
  Outcome out;
  for (Complex xi : {Complex(1, 0), Complex(2, 0), Complex(0, 1), Complex(0.3, -0.4)}) {
    out.require(psh_metric_unit_disc(xi) == std::abs(xi), "psh metric at " + num(std::abs(xi)));
  }
  out.require(std::abs(disc_hessian_bound_check([](Complex z) { return std::norm(z); }) - 1.0) <= 1e-8, "|z|^2");
  Rng rng(77);
  double worst = 0.0;
  for (int k = 0; k < 500; ++k) {
    const auto t = random_disc_test_function(rng);
    try {
      worst = std::max(worst, disc_hessian_bound_check(t.u));
    } catch (const Error& e) {
      out.require(false, std::string("sample rejected: ") + e.what());
    }
  }
  out.require(worst <= 1.0 + 1e-6, "max " + num(worst));
  out.notes.push_back("max over 500 samples " + num(worst));
  return out;
}

Outcome criterion11() {
  Outcome out;
  Rng rng(11);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  double worst = 0.0;
  for (const auto& id : kCorpus) {
    const auto d = load_domain(id);
    const CVec p = resolve_point(d, "north");
    const CVec nu = outward_normal(d, p);
    const CVec xi = resolve_direction(d, p, "tangent:1").xi;
    for (int k = 0; k < 20; ++k) {
      const CMat U = random_unitary(d.dimension(), rng);
      CVec c(d.dimension());
      for (auto& v : c) v = Complex(unif(rng), unif(rng));
      for (const CVec& dir : {xi, nu}) {
        const auto r = unitary_invariance_check(d, p, dir, 0.01, U, c, 1e-6);
        worst = std::max({worst, r.lower_error, r.upper_error});
        out.require(r.passed, id + " map " + std::to_string(k) + ": " + r.to_json().dump());
      }
    }
  }
  out.notes.push_back("worst relative error " + num(worst));
  return out;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome criterion12(const std::string& cli) {
  Outcome out;
  if (cli.empty()) {
    SweepConfig cfg;
    cfg.seed = 7;
    cfg.methods = {Method::sibony, Method::disc, Method::recentered, Method::oracle};
    const auto a = sweep(cfg);
    const auto b = sweep(cfg);
    out.require(a.to_csv() == b.to_csv(), "CSV differs");
    out.require(a.to_json().dump(2) == b.to_json().dump(2), "JSON differs");
    out.notes.push_back("library only (no --cli given)");
    return out;
  }
  const auto dir = std::filesystem::temp_directory_path() / "cxmetric_acceptance";
  std::filesystem::create_directories(dir);
  for (const char* ext : {"csv", "json"}) {
    std::vector<std::string> bodies;
    for (int run = 0; run < 2; ++run) {
      const auto path = dir / ("sweep" + std::to_string(run) + "." + ext);
      const std::string cmd = "\"" + cli + "\" sweep --domain cxellipsoid:2,1 --seed 7 --methods sibony,disc,recentered --out \"" +
                              path.string() + "\" > /dev/null";
      const int status = std::system(cmd.c_str());
      out.require(status == 0, std::string(ext) + " run " + std::to_string(run) + " exit status " + std::to_string(status));
      bodies.push_back(slurp(path));
    }
    out.require(!bodies[0].empty() && bodies[0] == bodies[1], std::string(ext) + " outputs differ");
  }
  std::filesystem::remove_all(dir);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--cli" && i + 1 < argc) cli = argv[++i];
  }
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"normal-direction constant", criterion1},
      {"tangential exponent", criterion2},
      {"normal exponent", criterion3},
      {"radius law", criterion4},
      {"gradient estimate", criterion5},
      {"ball oracle sandwich", criterion6},
      {"mixed directions", criterion7},
      {"candidate admissibility", criterion8},
      {"BNW constant", criterion9},
      {"unit-disc suite", criterion10},
      {"unitary invariance", criterion11},
      {"determinism", [&] { return criterion12(cli); }},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.passed = false;
      o.notes.push_back(std::string("exception: ") + e.what());
    }
    if (!o.passed) ++failed;
    std::string detail;
    for (const auto& n : o.notes) detail += (detail.empty() ? "" : "; ") + n;
    std::printf("[%s] %2zu %s%s%s\n", o.passed ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                detail.empty() ? "" : " :: ", detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
