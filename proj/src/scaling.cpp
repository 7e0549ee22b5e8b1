#include "cxmetric/scaling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "cxmetric/error.hpp"
#include "cxmetric/kobayashi.hpp"
#include "cxmetric/serialize.hpp"
#include "cxmetric/sibony.hpp"

namespace cxmetric {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::string number(double v) { return fmt::format("{:.17g}", v); }

std::string optional_number(const std::optional<double>& v) { return v ? number(*v) : std::string(); }

nlohmann::ordered_json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json type_json(const LineTypeEstimate& t) {
  nlohmann::ordered_json j;
  j["m"] = t.finite() ? nlohmann::ordered_json(t.m) : nlohmann::ordered_json(nullptr);
  j["method"] = t.method == TypeMethod::taylor ? "taylor" : "regression";
  j["exact"] = t.exact;
  j["coefficient_table"] = t.coefficient_table;
  j["diagnostics"] = t.diagnostics;
  return j;
}

std::optional<double> field_of(const BoundRecord& r, RecordField f) {
  switch (f) {
    case RecordField::lower: return r.lower;
    case RecordField::upper: return r.upper;
    case RecordField::oracle: return r.oracle;
    case RecordField::R_xi: return r.R_xi;
  }
  return std::nullopt;
}

struct SweepContext {
  const SweepConfig& config;
  const ConvexDomain& domain;
  CVec p;
  CVec nu;
  CVec xi;
  bool normal = false;
  int m = 0;
};

BoundRecord compute_record(const SweepContext& ctx, double delta, std::size_t index) {
  BoundRecord rec;
  rec.delta = delta;
  rec.m_used = ctx.m;
  const auto& domain = ctx.domain;
  const CVec base = base_point(domain, ctx.p, ctx.nu, delta);

  std::optional<ContactPoint> contact;
  if (ctx.config.wants(Method::sibony)) {
    if (ctx.normal) {
      rec.lower = sibony_lower_bound(normal_candidate(normalize_frame(domain, ctx.p), delta), ctx.xi);
    } else {
      TangentialOptions opts;
      opts.closed_form = ctx.config.closed_form;
      opts.seed = derive_seed(ctx.config.seed, index);
      opts.probe = ctx.config.probe;
      auto cand = tangential_candidate(domain, ctx.p, ctx.xi, delta, opts);
      rec.lower = sibony_lower_bound(cand.candidate, ctx.xi);
      contact = cand.params.contact;
      for (auto& d : cand.candidate.diagnostics) rec.diagnostics.push_back(std::move(d));
    }
  }
  if (ctx.config.wants(Method::disc)) {
    rec.upper_affine = affine_disc_bound(domain, base, ctx.xi, ctx.config.probe).value;
  }
  if (ctx.config.wants(Method::recentered)) {
    RecenteredOptions opts;
    opts.budget = ctx.config.recentered_budget;
    const auto bound = recentered_disc_bound(domain, base, ctx.xi, ctx.nu, opts, ctx.config.probe);
    rec.upper_recentered = bound.value;
    if (bound.fallback) rec.diagnostics.push_back("recentered search fell back to the affine disc");
  }
  if (rec.upper_affine || rec.upper_recentered) {
    rec.upper = std::min(rec.upper_affine.value_or(INFINITY), rec.upper_recentered.value_or(INFINITY));
  }
  if (ctx.config.wants(Method::oracle) && domain.metric_oracle()) {
    rec.oracle = (*domain.metric_oracle())(base, ctx.xi);
  }
  if (!ctx.normal) {
    if (!contact) contact = max_radius(domain, base, ctx.xi, ctx.config.probe);
    rec.theta_star = contact->theta_star;
    rec.R_xi = contact->R;
    if (ctx.m >= 2 && ctx.m != kInfiniteType) {
      rec.grad_ratio = gradient_ratio(domain, *contact, ctx.xi, delta, ctx.m);
    }
  }
  return rec;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::sibony: return "sibony";
    case Method::disc: return "disc";
    case Method::recentered: return "recentered";
    case Method::oracle: return "oracle";
  }
  return "disc";
}

std::vector<Method> parse_methods(const std::string& text) {
  std::vector<Method> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    Method m;
    if (item == "sibony") {
      m = Method::sibony;
    } else if (item == "disc") {
      m = Method::disc;
    } else if (item == "recentered") {
      m = Method::recentered;
    } else if (item == "oracle") {
      m = Method::oracle;
    } else {
      throw Error(ErrorKind::ConfigInvalid, "unknown method '" + item + "'");
    }
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  if (out.empty()) throw Error(ErrorKind::ConfigInvalid, "no methods given");
  return out;
}

void SweepConfig::validate() const {
  if (!(delta_min > 0.0) || !(delta_max > delta_min)) {
    throw Error(ErrorKind::ConfigInvalid, "delta grid needs 0 < min < max");
  }
  if (count < 8) throw Error(ErrorKind::ConfigInvalid, "delta grid needs at least 8 points");
  if (methods.empty()) throw Error(ErrorKind::ConfigInvalid, "no methods requested");
  if (threads < 0) throw Error(ErrorKind::ConfigInvalid, "threads must be >= 0");
}

bool SweepConfig::wants(Method m) const {
  return std::find(methods.begin(), methods.end(), m) != methods.end();
}

nlohmann::ordered_json SweepConfig::to_json() const {
  nlohmann::ordered_json j;
  j["domain"] = domain_id;
  j["point"] = point;
  j["direction"] = direction;
  j["delta_grid"] = {{"min", delta_min}, {"max", delta_max}, {"count", count}, {"spacing", "log"}};
  auto ms = nlohmann::ordered_json::array();
  for (const auto m : methods) ms.push_back(to_string(m));
  j["methods"] = ms;
  j["seed"] = seed;
  j["theta_samples"] = probe.theta_samples;
  j["closed_form"] = closed_form;
  j["recentered_budget"] = recentered_budget;
  return j;
}

CVec resolve_point(const ConvexDomain& domain, const std::string& spec) {
  const std::string s = trim(spec);
  if (s == "north") {
    const int n = domain.dimension();
    const CVec e = unit_vector(n, n - 1);
    const double t = ray_exit_distance(domain, domain.center(), e);
    return project_to_boundary(domain, domain.center() + t * e);
  }
  const CVec p = parse_complex_vector(s);
  if (p.size() != domain.dimension()) throw Error(ErrorKind::ConfigInvalid, "point has the wrong dimension");
  return project_to_boundary(domain, p);
}

ResolvedDirection resolve_direction(const ConvexDomain& domain, const CVec& p, const std::string& spec) {
  const std::string s = trim(spec);
  const CVec nu = outward_normal(domain, p);
  const int n = domain.dimension();
  if (s == "normal") return {nu, true};
  CVec raw;
  if (s.rfind("tangent:", 0) == 0) {
    int j = 0;
    try {
      j = std::stoi(s.substr(8));
    } catch (const std::exception&) {
      throw Error(ErrorKind::ConfigInvalid, "bad tangent index in '" + s + "'");
    }
    if (j < 1 || j > n) throw Error(ErrorKind::ConfigInvalid, "tangent index out of range");
    raw = unit_vector(n, j - 1);
  } else {
    raw = parse_complex_vector(s);
    if (raw.size() != n) throw Error(ErrorKind::ConfigInvalid, "direction has the wrong dimension");
  }
  return {normalized(complex_tangent_project(nu, raw)), false};
}

std::vector<std::string> BoundRecord::violations() const {
  std::vector<std::string> out;
  auto slack = [](double v) { return 1e-9 * std::max(1.0, std::abs(v)); };
  if (lower && upper && *lower > *upper + slack(*upper)) {
    out.push_back(fmt::format("delta={}: lower {} > upper {}", number(delta), number(*lower), number(*upper)));
  }
  if (lower && oracle && *lower > *oracle + slack(*oracle)) {
    out.push_back(fmt::format("delta={}: lower {} > oracle {}", number(delta), number(*lower), number(*oracle)));
  }
  if (oracle && upper && *oracle > *upper + slack(*upper)) {
    out.push_back(fmt::format("delta={}: oracle {} > upper {}", number(delta), number(*oracle), number(*upper)));
  }
  return out;
}

ExponentFit fit_exponent(const std::vector<BoundRecord>& records, RecordField field) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& r : records) {
    if (auto v = field_of(r, field)) {
      xs.push_back(r.delta);
      ys.push_back(*v);
    }
  }
  if (xs.size() < 8) throw Error(ErrorKind::PreconditionFailed, "exponent fit needs at least 8 records");
  const auto fit = loglog_fit(xs, ys);
  return {fit.slope, fit.r2};
}

Sandwich sandwich_constants(const std::vector<BoundRecord>& records, int m) {
  if (records.empty() || m < 1) throw Error(ErrorKind::PreconditionFailed, "sandwich needs records and m >= 1");
  Sandwich s;
  s.c = INFINITY;
  s.C = 0.0;
  std::vector<std::pair<double, double>> ratios;
  for (const auto& r : records) {
    const double w = std::pow(r.delta, 1.0 / m);
    if (r.lower) s.c = std::min(s.c, *r.lower * w);
    if (r.upper) s.C = std::max(s.C, *r.upper * w);
    if (r.lower && r.upper && *r.lower > 0.0) ratios.emplace_back(r.delta, *r.upper / *r.lower);
  }
  s.ratio = s.C / s.c;
  std::sort(ratios.begin(), ratios.end());
  bool up = true;
  bool down = true;
  for (std::size_t k = 1; k < ratios.size(); ++k) {
    const double d = ratios[k].second - ratios[k - 1].second;
    const double eps = 1e-9 * std::max(1.0, ratios[k].second);
    up = up && d >= -eps;
    down = down && d <= eps;
  }
  s.monotone = up || down;
  return s;
}

ScalingReport sweep(const SweepConfig& config) {
  config.validate();
  const ConvexDomain domain = load_domain(config.domain_id);
  ScalingReport report;
  report.config = config;
  report.point = resolve_point(domain, config.point);
  const auto dir = resolve_direction(domain, report.point, config.direction);
  report.direction = dir.xi;
  report.normal_direction = dir.normal;
  report.type_estimate = line_type(domain, report.point, dir.xi);

  SweepContext ctx{config, domain, report.point, outward_normal(domain, report.point), dir.xi, dir.normal,
                   report.type_estimate.m};
  const auto deltas = log_grid(config.delta_min, config.delta_max, config.count);
  std::vector<BoundRecord> records(deltas.size());
  std::vector<std::string> errors(deltas.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t k = next++; k < deltas.size(); k = next++) {
      try {
        records[k] = compute_record(ctx, deltas[k], k);
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t nthreads =
      std::min<std::size_t>(deltas.size(), config.threads > 0 ? static_cast<std::size_t>(config.threads) : hw);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t k = 0; k < deltas.size(); ++k) {
    if (!errors[k].empty()) {
      report.diagnostics.push_back("delta=" + number(deltas[k]) + " failed: " + errors[k]);
      continue;
    }
    for (const auto& d : records[k].diagnostics) report.diagnostics.push_back("delta=" + number(deltas[k]) + ": " + d);
    for (const auto& v : records[k].violations()) {
      report.diagnostics.push_back("violation " + v);
      ++report.violations;
    }
    report.records.push_back(std::move(records[k]));
  }

  auto try_fit = [&](RecordField f, const char* name) -> std::optional<ExponentFit> {
    try {
      auto fit = fit_exponent(report.records, f);
      if (fit.r2 < 0.99) report.diagnostics.push_back(fmt::format("{} fit has R^2 = {} < 0.99", name, number(fit.r2)));
      return fit;
    } catch (const Error& e) {
      report.diagnostics.push_back(std::string(name) + " fit skipped: " + e.what());
      return std::nullopt;
    }
  };
  if (config.wants(Method::sibony)) report.exponent_lower = try_fit(RecordField::lower, "lower");
  if (config.wants(Method::disc) || config.wants(Method::recentered)) {
    report.exponent_upper = try_fit(RecordField::upper, "upper");
  }
  if (!report.records.empty() && report.type_estimate.finite()) {
    report.sandwich = sandwich_constants(report.records, report.type_estimate.m);
    if (!(report.sandwich->c > 0.0) && config.wants(Method::sibony)) report.diagnostics.push_back("sandwich constant c is not positive");
    if (!report.sandwich->monotone) report.diagnostics.push_back("sandwich ratio upper/lower is not monotone in delta");
  }
  return report;
}

std::string ScalingReport::to_csv() const {
  std::string out = "delta,lower,upper,oracle,m_used,theta_star,R_xi,grad_ratio\n";
  for (const auto& r : records) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", number(r.delta), optional_number(r.lower),
                       optional_number(r.upper), optional_number(r.oracle), r.m_used,
                       optional_number(r.theta_star), optional_number(r.R_xi), optional_number(r.grad_ratio));
  }
  return out;
}

nlohmann::ordered_json ScalingReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = "v1";
  j["config"] = config.to_json();
  j["point"] = vector_to_json(point);
  j["direction"] = vector_to_json(direction);
  j["normal_direction"] = normal_direction;
  j["type_estimate"] = type_json(type_estimate);
  auto recs = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json x;
    x["delta"] = r.delta;
    x["lower"] = optional_json(r.lower);
    x["upper"] = optional_json(r.upper);
    x["oracle"] = optional_json(r.oracle);
    x["m_used"] = r.m_used;
    x["theta_star"] = optional_json(r.theta_star);
    x["R_xi"] = optional_json(r.R_xi);
    x["grad_ratio"] = optional_json(r.grad_ratio);
    x["upper_affine"] = optional_json(r.upper_affine);
    x["upper_recentered"] = optional_json(r.upper_recentered);
    recs.push_back(std::move(x));
  }
  j["records"] = recs;
  auto fit_json = [](const std::optional<ExponentFit>& f) {
    return f ? nlohmann::ordered_json{{"slope", f->slope}, {"r2", f->r2}} : nlohmann::ordered_json(nullptr);
  };
  j["exponent_lower"] = fit_json(exponent_lower);
  j["exponent_upper"] = fit_json(exponent_upper);
  if (sandwich) {
    j["sandwich"] = {{"c", sandwich->c}, {"C", sandwich->C}, {"ratio", sandwich->ratio}, {"monotone", sandwich->monotone}};
  } else {
    j["sandwich"] = nullptr;
  }
  j["violations"] = violations;
  j["diagnostics"] = diagnostics;
  return j;
}

void write_report(const ScalingReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ConfigInvalid, "cannot open '" + path + "' for writing");
  const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  out << (csv ? report.to_csv() : report.to_json().dump(2) + "\n");
}

}  // namespace cxmetric
