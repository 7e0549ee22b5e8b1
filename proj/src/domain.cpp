#include "cxmetric/domain.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cxmetric/error.hpp"
#include "cxmetric/kobayashi.hpp"

namespace cxmetric {

// ---------------------------------------------------------------------------
// DefiningFunction

DefiningFunction::DefiningFunction(int dimension, ValueFn value, std::string name,
                                   GradientFn gradient, LineFn line)
    : n_(dimension),
      value_(std::move(value)),
      name_(std::move(name)),
      gradient_(std::move(gradient)),
      line_(std::move(line)) {
  if (n_ < 1) throw Error(ErrorKind::ConfigInvalid, "dimension must be positive");
  if (!value_) throw Error(ErrorKind::ConfigInvalid, "defining function needs an evaluator");
}

DefiningFunction DefiningFunction::from_polynomial(HermitianPolynomial poly, std::string name) {
  auto shared = std::make_shared<const HermitianPolynomial>(std::move(poly));
  return DefiningFunction(
      shared->dimension(), [shared](const CVec& z) { return shared->evaluate(z); },
      std::move(name), [shared](const CVec& z) { return shared->wirtinger_gradient(z); },
      [shared](const CVec& p, const CVec& xi) { return shared->restrict_to_line(p, xi); });
}

CVec DefiningFunction::wirtinger_gradient(const CVec& z) const {
  if (gradient_) return gradient_(z);
  return finite_difference_gradient(z);
}

CVec DefiningFunction::finite_difference_gradient(const CVec& z) const {
  const double h = 1e-5 * (1.0 + z.norm());
  CVec grad(n_);
  CVec probe = z;
  for (int j = 0; j < n_; ++j) {
    const Complex orig = probe(j);
    probe(j) = orig + h;
    const double xp = value_(probe);
    probe(j) = orig - h;
    const double xm = value_(probe);
    probe(j) = orig + Complex(0.0, h);
    const double yp = value_(probe);
    probe(j) = orig - Complex(0.0, h);
    const double ym = value_(probe);
    probe(j) = orig;
    const double dx = (xp - xm) / (2.0 * h);
    const double dy = (yp - ym) / (2.0 * h);
    grad(j) = 0.5 * Complex(dx, -dy);
  }
  return grad;
}

std::optional<LinePolynomial> DefiningFunction::restrict_to_line(const CVec& p,
                                                                 const CVec& xi) const {
  if (!line_) return std::nullopt;
  return line_(p, xi);
}

DefiningFunction DefiningFunction::rotated(const CMat& unitary) const {
  const CMat adj = unitary.adjoint();
  const CMat conj_u = unitary.conjugate();
  auto value = [v = value_, adj](const CVec& z) { return v(adj * z); };
  GradientFn grad;
  if (gradient_) {
    grad = [g = gradient_, adj, conj_u](const CVec& z) -> CVec { return conj_u * g(adj * z); };
  }
  LineFn line;
  if (line_) {
    line = [l = line_, adj](const CVec& p, const CVec& xi) { return l(adj * p, adj * xi); };
  }
  return DefiningFunction(n_, std::move(value), "rotated(" + name_ + ")", std::move(grad),
                          std::move(line));
}

DefiningFunction DefiningFunction::shifted(const CVec& offset) const {
  auto value = [v = value_, offset](const CVec& z) { return v(z - offset); };
  GradientFn grad;
  if (gradient_) grad = [g = gradient_, offset](const CVec& z) -> CVec { return g(z - offset); };
  LineFn line;
  if (line_) {
    line = [l = line_, offset](const CVec& p, const CVec& xi) { return l(p - offset, xi); };
  }
  return DefiningFunction(n_, std::move(value), "shifted(" + name_ + ")", std::move(grad),
                          std::move(line));
}

// ---------------------------------------------------------------------------
// ConvexDomain

ConvexDomain::ConvexDomain(DefiningFunction rho, std::vector<Interval> box, CVec center,
                           std::string id)
    : rho_(std::move(rho)), box_(std::move(box)), center_(std::move(center)), id_(std::move(id)) {
  if (static_cast<int>(box_.size()) != 2 * rho_.dimension()) {
    throw Error(ErrorKind::ConfigInvalid, "bounding box needs 2n intervals");
  }
  if (center_.size() != rho_.dimension()) {
    throw Error(ErrorKind::ConfigInvalid, "center has the wrong dimension");
  }
  for (const auto& iv : box_) {
    if (!(iv.lo < iv.hi)) throw Error(ErrorKind::ConfigInvalid, "empty bounding-box interval");
  }
}

double ConvexDomain::diameter() const {
  double sq = 0.0;
  for (const auto& iv : box_) sq += (iv.hi - iv.lo) * (iv.hi - iv.lo);
  return std::sqrt(sq);
}

namespace {

CVec box_center(const std::vector<Interval>& box) {
  const int n = static_cast<int>(box.size()) / 2;
  CVec c(n);
  for (int j = 0; j < n; ++j) {
    c(j) = Complex(0.5 * (box[2 * j].lo + box[2 * j].hi), 0.5 * (box[2 * j + 1].lo + box[2 * j + 1].hi));
  }
  return c;
}

}  // namespace

ConvexDomain ConvexDomain::rotated(const CMat& unitary, std::string id) const {
  const CVec c = box_center(box_);
  const double radius = 0.5 * diameter();
  const CVec rc = unitary * c;
  std::vector<Interval> box;
  for (int j = 0; j < dimension(); ++j) {
    box.push_back({rc(j).real() - radius, rc(j).real() + radius});
    box.push_back({rc(j).imag() - radius, rc(j).imag() + radius});
  }
  ConvexDomain out(rho_.rotated(unitary), std::move(box), unitary * center_, std::move(id));
  out.sample_budget = sample_budget;
  if (oracle_) {
    const CMat adj = unitary.adjoint();
    out.set_metric_oracle(
        [o = *oracle_, adj](const CVec& z, const CVec& xi) { return o(adj * z, adj * xi); });
  }
  return out;
}

ConvexDomain ConvexDomain::shifted(const CVec& offset, std::string id) const {
  if (offset.size() != dimension()) throw Error(ErrorKind::ConfigInvalid, "offset dimension mismatch");
  std::vector<Interval> box = box_;
  for (int j = 0; j < dimension(); ++j) {
    box[2 * j].lo += offset(j).real();
    box[2 * j].hi += offset(j).real();
    box[2 * j + 1].lo += offset(j).imag();
    box[2 * j + 1].hi += offset(j).imag();
  }
  ConvexDomain out(rho_.shifted(offset), std::move(box), center_ + offset, std::move(id));
  out.sample_budget = sample_budget;
  if (oracle_) {
    out.set_metric_oracle(
        [o = *oracle_, offset](const CVec& z, const CVec& xi) { return o(z - offset, xi); });
  }
  return out;
}

ConvexDomain make_ball(int n) {
  std::vector<Interval> box(static_cast<std::size_t>(2 * n), Interval{-1.0, 1.0});
  ConvexDomain ball(DefiningFunction::from_polynomial(HermitianPolynomial::unit_ball(n), "ball"),
                    std::move(box), CVec::Zero(n), "ball:" + std::to_string(n));
  ball.set_metric_oracle([](const CVec& z, const CVec& xi) { return ball_metric_oracle(z, xi); });
  return ball;
}

ConvexDomain make_complex_ellipsoid(const std::vector<int>& exponents) {
  const int n = static_cast<int>(exponents.size());
  if (n < 1) throw Error(ErrorKind::ConfigInvalid, "ellipsoid needs at least one exponent");
  std::string id = "cxellipsoid:";
  for (std::size_t j = 0; j < exponents.size(); ++j) {
    id += (j ? "," : "") + std::to_string(exponents[j]);
  }
  std::vector<Interval> box(static_cast<std::size_t>(2 * n), Interval{-1.0, 1.0});
  ConvexDomain out(
      DefiningFunction::from_polynomial(HermitianPolynomial::complex_ellipsoid(exponents), "cxellipsoid"),
      std::move(box), CVec::Zero(n), id);
  if (std::all_of(exponents.begin(), exponents.end(), [](int m) { return m == 1; })) {
    out.set_metric_oracle([](const CVec& z, const CVec& xi) { return ball_metric_oracle(z, xi); });
  }
  return out;
}

ConvexDomain make_polynomial_domain(const HermitianPolynomial& poly, std::string id,
                                    std::optional<CVec> center,
                                    std::optional<std::vector<Interval>> box) {
  const int n = poly.dimension();
  const CVec c = center.value_or(CVec::Zero(n));
  auto rho = DefiningFunction::from_polynomial(poly, id);
  if (!(rho(c) < 0.0)) {
    throw Error(ErrorKind::ConfigInvalid, "reference center is not inside the domain");
  }
  if (box) return ConvexDomain(std::move(rho), std::move(*box), c, std::move(id));

  // Radial probing from the center; the hull of the probed boundary points
  // is enlarged by a quarter of its extent on every side.
  std::vector<Interval> provisional(static_cast<std::size_t>(2 * n), Interval{-1e6, 1e6});
  for (int j = 0; j < n; ++j) {
    provisional[2 * j] = {c(j).real() - 1e6, c(j).real() + 1e6};
    provisional[2 * j + 1] = {c(j).imag() - 1e6, c(j).imag() + 1e6};
  }
  ConvexDomain probe(rho, provisional, c, id);
  Rng rng(0x5eedULL);
  std::vector<Interval> hull(static_cast<std::size_t>(2 * n),
                             Interval{std::numeric_limits<double>::infinity(),
                                      -std::numeric_limits<double>::infinity()});
  auto absorb = [&](const CVec& z) {
    for (int j = 0; j < n; ++j) {
      hull[2 * j].lo = std::min(hull[2 * j].lo, z(j).real());
      hull[2 * j].hi = std::max(hull[2 * j].hi, z(j).real());
      hull[2 * j + 1].lo = std::min(hull[2 * j + 1].lo, z(j).imag());
      hull[2 * j + 1].hi = std::max(hull[2 * j + 1].hi, z(j).imag());
    }
  };
  for (int k = 0; k < 2 * n; ++k) {
    for (double sign : {1.0, -1.0}) {
      CVec dir = CVec::Zero(n);
      dir(k / 2) = (k % 2 == 0) ? Complex(sign, 0.0) : Complex(0.0, sign);
      absorb(c + ray_exit_distance(probe, c, dir, 1e-9) * dir);
    }
  }
  for (int k = 0; k < 4000; ++k) {
    const CVec dir = random_unit_vector(n, rng);
    absorb(c + ray_exit_distance(probe, c, dir, 1e-9) * dir);
  }
  for (auto& iv : hull) {
    const double pad = 0.25 * (iv.hi - iv.lo) + 1e-9;
    iv.lo -= pad;
    iv.hi += pad;
  }
  ConvexDomain out(std::move(rho), std::move(hull), c, std::move(id));
  if (!check_bounded(out)) {
    throw Error(ErrorKind::ConfigInvalid, "domain does not look bounded inside the probed box");
  }
  return out;
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::ConfigInvalid, "cannot parse number '" + text + "'");
  }
  if (used != text.size()) throw Error(ErrorKind::ConfigInvalid, "cannot parse number '" + text + "'");
  return v;
}

Complex parse_complex(std::string text) {
  text.erase(std::remove_if(text.begin(), text.end(), [](unsigned char ch) { return std::isspace(ch); }),
             text.end());
  if (text.empty()) throw Error(ErrorKind::ConfigInvalid, "empty complex entry");
  if (text.back() != 'i') return {parse_double(text), 0.0};
  text.pop_back();
  std::size_t split_at = std::string::npos;
  for (std::size_t k = text.size(); k-- > 1;) {
    if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E') {
      split_at = k;
      break;
    }
  }
  auto imag_of = [](const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_double(s);
  };
  if (split_at == std::string::npos) return {0.0, imag_of(text)};
  return {parse_double(text.substr(0, split_at)), imag_of(text.substr(split_at))};
}

std::vector<Interval> parse_box(const nlohmann::json& doc) {
  std::vector<Interval> box;
  for (const auto& item : doc) box.push_back({item.at(0).get<double>(), item.at(1).get<double>()});
  return box;
}

CVec parse_json_point(const nlohmann::json& doc) {
  CVec z(static_cast<Eigen::Index>(doc.size()));
  for (std::size_t j = 0; j < doc.size(); ++j) {
    const auto& e = doc[j];
    z(static_cast<Eigen::Index>(j)) =
        e.is_array() ? Complex(e.at(0).get<double>(), e.at(1).get<double>()) : Complex(e.get<double>(), 0.0);
  }
  return z;
}

}  // namespace

CVec parse_complex_vector(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.empty()) throw Error(ErrorKind::ConfigInvalid, "empty vector");
  CVec v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t j = 0; j < parts.size(); ++j) v(static_cast<Eigen::Index>(j)) = parse_complex(parts[j]);
  return v;
}

ConvexDomain load_domain(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  if (colon != std::string::npos) {
    const std::string rest = spec.substr(colon + 1);
    if (head == "ball") {
      const int n = static_cast<int>(parse_double(rest));
      if (n < 1 || std::to_string(n) != rest) throw Error(ErrorKind::ConfigInvalid, "ball:n needs n >= 1");
      auto out = make_ball(n);
      return out;
    }
    if (head == "cxellipsoid") {
      std::vector<int> exps;
      for (const auto& part : split(rest, ',')) {
        const double v = parse_double(part);
        if (v != std::floor(v) || v < 1) throw Error(ErrorKind::ConfigInvalid, "exponents are integers >= 1");
        exps.push_back(static_cast<int>(v));
      }
      return make_complex_ellipsoid(exps);
    }
    if (head == "shifted" || head == "rotated") {
      const auto last = rest.rfind(':');
      if (last == std::string::npos) throw Error(ErrorKind::ConfigInvalid, head + " needs <id>:<arg>");
      const ConvexDomain inner = load_domain(rest.substr(0, last));
      const std::string arg = rest.substr(last + 1);
      if (head == "shifted") {
        const CVec offset = parse_complex_vector(arg);
        return inner.shifted(offset, spec);
      }
      const double seed = parse_double(arg);
      if (seed < 0 || seed != std::floor(seed)) throw Error(ErrorKind::ConfigInvalid, "rotation seed must be a non-negative integer");
      Rng rng(static_cast<std::uint64_t>(seed));
      return inner.rotated(random_unitary(inner.dimension(), rng), spec);
    }
  }
  if (std::filesystem::is_regular_file(spec)) {
    std::ifstream in(spec);
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::ConfigInvalid, std::string("bad domain JSON: ") + e.what());
    }
    try {
      auto poly = HermitianPolynomial::from_json(doc);
      std::optional<CVec> center;
      std::optional<std::vector<Interval>> box;
      if (doc.contains("center")) center = parse_json_point(doc.at("center"));
      if (doc.contains("box")) box = parse_box(doc.at("box"));
      const std::string id = doc.value("name", std::filesystem::path(spec).stem().string());
      return make_polynomial_domain(poly, id, center, box);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::ConfigInvalid, std::string("bad domain JSON: ") + e.what());
    }
  }
  throw Error(ErrorKind::ConfigInvalid, "unknown domain '" + spec + "'");
}

// ---------------------------------------------------------------------------
// Sampling and checks

namespace {

CVec uniform_box_point(const std::vector<Interval>& box, Rng& rng) {
  const int n = static_cast<int>(box.size()) / 2;
  CVec z(n);
  for (int j = 0; j < n; ++j) {
    std::uniform_real_distribution<double> re(box[2 * j].lo, box[2 * j].hi);
    std::uniform_real_distribution<double> im(box[2 * j + 1].lo, box[2 * j + 1].hi);
    const double x = re(rng);
    z(j) = Complex(x, im(rng));
  }
  return z;
}

}  // namespace

std::vector<CVec> sample_interior(const ConvexDomain& domain, std::size_t count, Rng& rng) {
  std::vector<CVec> out;
  out.reserve(count);
  std::size_t attempts = 0;
  const std::size_t max_attempts = 1000 * count + 100000;
  while (out.size() < count) {
    if (++attempts > max_attempts) {
      throw Error(ErrorKind::ConfigInvalid, "rejection sampling failed; bounding box too loose");
    }
    CVec z = uniform_box_point(domain.bounding_box(), rng);
    if (domain.contains(z)) out.push_back(std::move(z));
  }
  return out;
}

ConvexityReport check_midpoint_convexity(const ConvexDomain& domain, std::size_t pairs, Rng& rng) {
  ConvexityReport report;
  const auto pts = sample_interior(domain, 2 * pairs, rng);
  for (std::size_t k = 0; k < pairs; ++k) {
    const double v = domain.evaluate(0.5 * (pts[2 * k] + pts[2 * k + 1]));
    report.worst = std::max(report.worst, v);
    if (v >= 1e-12) ++report.violations;
  }
  report.pairs = pairs;
  return report;
}

bool check_bounded(const ConvexDomain& domain) {
  const auto& box = domain.bounding_box();
  const int n = domain.dimension();
  CVec c(n);
  for (int j = 0; j < n; ++j) {
    c(j) = Complex(0.5 * (box[2 * j].lo + box[2 * j].hi), 0.5 * (box[2 * j + 1].lo + box[2 * j + 1].hi));
  }
  for (int k = 0; k < 2 * n; ++k) {
    const double half = box[static_cast<std::size_t>(k)].hi - box[static_cast<std::size_t>(k)].lo;
    for (double sign : {1.0, -1.0}) {
      CVec z = c;
      const Complex step = (k % 2 == 0) ? Complex(sign * half, 0.0) : Complex(0.0, sign * half);
      z(k / 2) += step;
      if (!(domain.evaluate(z) > 0.0)) return false;
    }
  }
  return true;
}

double gradient_discrepancy(const ConvexDomain& domain, std::size_t points, Rng& rng) {
  double worst = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    const CVec z = uniform_box_point(domain.bounding_box(), rng);
    const CVec analytic = domain.rho().wirtinger_gradient(z);
    const CVec fd = domain.rho().finite_difference_gradient(z);
    const double denom = std::max(analytic.norm(), 1e-300);
    worst = std::max(worst, (analytic - fd).norm() / denom);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Boundary geometry

double ray_exit_distance(const ConvexDomain& domain, const CVec& origin, const CVec& dir, double tol,
                         double initial_step) {
  const double r0 = domain.evaluate(origin);
  if (!(r0 < 0.0)) throw Error(ErrorKind::CenterOutside, "ray origin is not inside the domain");
  const double diam = domain.diameter();
  const double dir_norm = dir.norm();
  double t = initial_step;
  if (!(t > 0.0)) {
    const double g = domain.rho().wirtinger_gradient(origin).norm();
    t = (g > 1e-300) ? -r0 / (2.0 * g * dir_norm) : 0.1 * diam;
  }
  t = std::clamp(t, 1e-14 * diam, diam);
  double lo = 0.0;
  double hi = t;
  while (domain.evaluate(origin + hi * dir) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi * dir_norm > 4.0 * diam) {
      throw Error(ErrorKind::RayUnbounded, "no sign change of rho within the bounding box");
    }
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (domain.evaluate(origin + mid * dir) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

CVec outward_normal(const ConvexDomain& domain, const CVec& p) {
  if (std::abs(domain.evaluate(p)) > kBoundaryTolerance) {
    throw Error(ErrorKind::NotOnBoundary, "|rho(P)| exceeds 1e-8");
  }
  const CVec grad = domain.rho().wirtinger_gradient(p);
  const double g = grad.norm();
  if (2.0 * g < kGradientFloor) throw Error(ErrorKind::GradientVanishes, "|grad rho(P)| < 1e-10");
  return grad.conjugate() / g;
}

CVec project_to_boundary(const ConvexDomain& domain, const CVec& p) {
  const double value = domain.evaluate(p);
  if (std::abs(value) > kBoundaryTolerance) {
    throw Error(ErrorKind::NotOnBoundary, "|rho(P)| exceeds 1e-8");
  }
  const CVec grad = domain.rho().wirtinger_gradient(p);
  const double g = grad.norm();
  if (2.0 * g < kGradientFloor) throw Error(ErrorKind::GradientVanishes, "|grad rho(P)| < 1e-10");
  const CVec nu = grad.conjugate() / g;
  // directional derivative of rho along the unit real vector nu is 2|d rho|
  return p - (value / (2.0 * g)) * nu;
}

CVec base_point(const ConvexDomain& domain, const CVec& p, const CVec& nu, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorKind::ConfigInvalid, "delta must be positive");
  CVec out = p - delta * nu;
  if (!domain.contains(out)) {
    throw Error(ErrorKind::OutsideDomain, "P - delta nu is not inside the domain (delta too large)");
  }
  return out;
}

CVec complex_tangent_project(const CVec& nu, const CVec& xi) {
  CVec out = xi - hermitian(xi, nu) * nu;
  if (out.norm() < 1e-12) {
    throw Error(ErrorKind::ZeroProjection, "direction is parallel to the complex normal");
  }
  return out;
}

CVec normalized(const CVec& v) {
  const double norm = v.norm();
  if (!(norm > 0.0)) throw Error(ErrorKind::ZeroProjection, "cannot normalize a zero vector");
  return v / norm;
}

BoundaryFrame normalize_frame(const ConvexDomain& domain, const CVec& p,
                              const std::optional<CVec>& first_axis) {
  const int n = domain.dimension();
  BoundaryFrame frame;
  frame.point = p;
  frame.normal = outward_normal(domain, p);
  frame.scale = 2.0 * domain.rho().wirtinger_gradient(p).norm();

  std::vector<CVec> basis;
  if (first_axis) {
    if (std::abs(hermitian(*first_axis, frame.normal)) > 1e-8 ||
        std::abs(first_axis->norm() - 1.0) > 1e-8) {
      throw Error(ErrorKind::FrameMisaligned, "first axis must be a unit complex-tangential vector");
    }
    basis.push_back(*first_axis - hermitian(*first_axis, frame.normal) * frame.normal);
    basis.back().normalize();
  }
  auto residual = [&](CVec v) {
    v -= hermitian(v, frame.normal) * frame.normal;
    for (const auto& b : basis) v -= hermitian(v, b) * b;
    return v;
  };
  while (static_cast<int>(basis.size()) < n - 1) {
    CVec best;
    double best_norm = -1.0;
    for (int j = 0; j < n; ++j) {
      CVec r = residual(unit_vector(n, j));
      if (r.norm() > best_norm + 1e-12) {
        best_norm = r.norm();
        best = std::move(r);
      }
    }
    // a second pass removes the rounding left by a single Gram-Schmidt sweep
    best = residual(best / best_norm);
    basis.push_back(best / best.norm());
  }
  CMat columns(n, n);
  for (int j = 0; j < n - 1; ++j) columns.col(j) = basis[static_cast<std::size_t>(j)];
  columns.col(n - 1) = frame.normal;
  frame.unitary = columns.adjoint();
  return frame;
}

}  // namespace cxmetric
