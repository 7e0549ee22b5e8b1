#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cxmetric/error.hpp"
#include "cxmetric/kobayashi.hpp"
#include "cxmetric/psh_checks.hpp"
#include "cxmetric/scaling.hpp"
#include "cxmetric/sibony.hpp"

namespace py = pybind11;
using namespace cxmetric;

namespace {

// JSON crosses the boundary as text; the Python side decodes it.
std::string verify_json(const ConvexDomain& domain, const CVec& p, const std::string& direction, double delta,
                        const std::string& candidate, std::size_t samples, std::uint64_t seed) {
  TangentialOptions opts;
  opts.seed = seed;
  ScalarCandidate u;
  if (candidate == "normal") {
    u = normal_candidate(normalize_frame(domain, p), delta);
  } else if (candidate == "tangential" || candidate == "truncated") {
    opts.closed_form = candidate == "tangential";
    u = tangential_candidate(domain, p, resolve_direction(domain, p, direction).xi, delta, opts).candidate;
  } else {
    throw Error(ErrorKind::ConfigInvalid, "unknown candidate '" + candidate + "'");
  }
  LeviProbe probe;
  probe.seed = seed;
  nlohmann::json j;
  j["candidate"] = u.to_json();
  j["report"] = verify_candidate(u, domain, samples, probe).to_json();
  return j.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-sided estimates of invariant metrics near the boundary of convex domains";

  static py::exception<Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object kind = py::str(std::string(to_string(e.kind())));
      PyErr_SetObject(error.ptr(), py::make_tuple(py::str(e.what()), kind).ptr());
    }
  });

  py::class_<ConvexDomain>(m, "Domain")
      .def_property_readonly("id", &ConvexDomain::id)
      .def_property_readonly("dimension", &ConvexDomain::dimension)
      .def_property_readonly("center", &ConvexDomain::center)
      .def("evaluate", &ConvexDomain::evaluate, py::arg("z"))
      .def("contains", &ConvexDomain::contains, py::arg("z"))
      .def("__repr__", [](const ConvexDomain& d) { return "<cxmetric.Domain " + d.id() + ">"; });

  m.def("load_domain", &load_domain, py::arg("spec"), "Corpus identifier or path to a JSON document.");
  m.def("resolve_point", &resolve_point, py::arg("domain"), py::arg("spec") = "north");
  m.def("resolve_direction", [](const ConvexDomain& d, const CVec& p, const std::string& spec) {
    return resolve_direction(d, p, spec).xi;
  }, py::arg("domain"), py::arg("point"), py::arg("spec"));
  m.def("outward_normal", &outward_normal, py::arg("domain"), py::arg("point"));
  m.def("base_point", &base_point, py::arg("domain"), py::arg("point"), py::arg("normal"), py::arg("delta"));

  m.def("line_type", [](const ConvexDomain& d, const CVec& p, const CVec& xi) {
    const auto t = line_type(d, p, xi);
    return py::make_tuple(t.finite() ? py::object(py::int_(t.m)) : py::object(py::none()), t.exact);
  }, py::arg("domain"), py::arg("point"), py::arg("xi"), "Returns (m, exact); m is None for infinite type.");
  m.def("max_radius", [](const ConvexDomain& d, const CVec& center, const CVec& xi) {
    const auto c = max_radius(d, center, xi);
    return py::make_tuple(c.R, c.theta_star, c.Q);
  }, py::arg("domain"), py::arg("center"), py::arg("xi"), "Returns (R, theta_star, Q).");

  m.def("sibony_bound", [](const ConvexDomain& d, const CVec& p, const CVec& X, double delta, bool closed_form,
                           std::uint64_t seed) {
    TangentialOptions opts;
    opts.closed_form = closed_form;
    opts.seed = seed;
    const auto b = sibony_bound(d, p, X, delta, opts);
    py::dict out;
    out["value"] = b.value;
    out["normal_part"] = b.normal_part;
    out["tangential_part"] = b.tangential_part;
    out["diagnostics"] = b.diagnostics;
    return out;
  }, py::arg("domain"), py::arg("point"), py::arg("X"), py::arg("delta"), py::arg("closed_form") = true,
        py::arg("seed") = 0);
  m.def("mixed_lower_bound", &mixed_lower_bound, py::arg("a"), py::arg("delta"));
  m.def("truncation_order", [](double S) { return truncation_order(S).N; }, py::arg("S"));

  m.def("affine_disc_bound", [](const ConvexDomain& d, const CVec& center, const CVec& xi) {
    return affine_disc_bound(d, center, xi).value;
  }, py::arg("domain"), py::arg("center"), py::arg("xi"));
  m.def("recentered_disc_bound", [](const ConvexDomain& d, const CVec& center, const CVec& xi, const CVec& normal,
                                    int budget) {
    RecenteredOptions opts;
    opts.budget = budget;
    return recentered_disc_bound(d, center, xi, normal, opts).value;
  }, py::arg("domain"), py::arg("center"), py::arg("xi"), py::arg("normal"), py::arg("budget") = 200);
  m.def("poincare", &poincare, py::arg("z"), py::arg("xi"));
  m.def("ball_metric_oracle", &ball_metric_oracle, py::arg("z"), py::arg("xi"));

  m.def("_verify", &verify_json, py::arg("domain"), py::arg("point"), py::arg("direction"), py::arg("delta"),
        py::arg("candidate"), py::arg("samples"), py::arg("seed"));

  m.def("bnw_constant", [](const std::vector<double>& coeffs, double r, int grid) {
    BNWSample s;
    s.coefficients = {0.0, 0.0};
    s.coefficients.insert(s.coefficients.end(), coeffs.begin(), coeffs.end());
    s.r = r;
    s.grid = grid;
    return bnw_constant(s);
  }, py::arg("coefficients"), py::arg("r") = 1.0, py::arg("grid") = 1000,
        "coefficients[0] multiplies x^2, coefficients[1] x^3, and so on.");
  m.def("disc_hessian_bound_check", [](const std::function<double(Complex)>& u) {
    py::gil_scoped_release release;
    return disc_hessian_bound_check(u);
  }, py::arg("u"));
  m.def("psh_metric_unit_disc", &psh_metric_unit_disc, py::arg("xi"));

  m.def("_sweep", [](const std::string& domain, const std::string& point, const std::string& direction,
                     double delta_min, double delta_max, int count, const std::string& methods, std::uint64_t seed,
                     bool closed_form, int threads) {
    SweepConfig cfg;
    cfg.domain_id = domain;
    cfg.point = point;
    cfg.direction = direction;
    cfg.delta_min = delta_min;
    cfg.delta_max = delta_max;
    cfg.count = count;
    cfg.methods = parse_methods(methods);
    cfg.seed = seed;
    cfg.closed_form = closed_form;
    cfg.threads = threads;
    ScalingReport report;
    {
      py::gil_scoped_release release;
      report = sweep(cfg);
    }
    return py::make_tuple(report.to_csv(), report.to_json().dump(2) + "\n");
  }, py::arg("domain"), py::arg("point"), py::arg("direction"), py::arg("delta_min"), py::arg("delta_max"),
        py::arg("count"), py::arg("methods"), py::arg("seed"), py::arg("closed_form"), py::arg("threads"));
}
