#include <doctest.h>

#include <numbers>

#include "cxmetric/error.hpp"
#include "cxmetric/line_geometry.hpp"
#include "cxmetric/scaling.hpp"
#include "oracles.hpp"

using namespace cxmetric;

namespace {

CVec vec2(Complex a, Complex b) {
  CVec v(2);
  v << a, b;
  return v;
}

// |z|^2 + Re(z_1^2)/2 - 1: convex, not circular in z_1.
ConvexDomain anisotropic() {
  HermitianPolynomial poly(2, {{1.0, {{1, 1}, {0, 0}}},
                               {1.0, {{0, 0}, {1, 1}}},
                               {0.25, {{2, 0}, {0, 0}}},
                               {0.25, {{0, 2}, {0, 0}}},
                               {-1.0, {{0, 0}, {0, 0}}}});
  return make_polynomial_domain(poly, "anisotropic", CVec::Zero(2));
}

}  // namespace

TEST_CASE("boundary radius") {
  const auto ball = make_ball(2);
  const CVec e1 = unit_vector(2, 0);
  for (double theta : {0.0, 0.7, 2.0, 5.5}) {
    CHECK(boundary_radius(ball, vec2(0.0, 0.99), e1, theta) ==
          doctest::Approx(oracle::ball_tangent_radius(0.01)).epsilon(1e-10));
  }
  CHECK(boundary_radius(ball, CVec::Zero(2), e1, 0.0) == doctest::Approx(1.0).epsilon(1e-11));
  const auto ell = make_complex_ellipsoid({2, 1});
  CHECK(boundary_radius(ell, vec2(0.0, 0.99), e1, 0.3) ==
        doctest::Approx(oracle::ellipsoid_tangent_radius(2, 0.01)).epsilon(1e-10));
  CHECK(oracle::ellipsoid_tangent_radius(2, 0.01) == doctest::Approx(0.3755893).epsilon(1e-6));

  try {
    (void)boundary_radius(ball, vec2(2.0, 0.0), e1, 0.0);
    FAIL("expected CenterOutside");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CenterOutside);
  }
}

TEST_CASE("max radius and contact point") {
  const auto ball = make_ball(2);
  const CVec e1 = unit_vector(2, 0);
  const CVec center = vec2(0.0, 0.99);
  const auto c = max_radius(ball, center, e1);
  CHECK(c.R == doctest::Approx(0.1410674).epsilon(1e-6));
  CHECK(std::abs(ball.evaluate(c.Q)) <= 1e-8);
  CHECK((c.Q - (center + c.R * std::polar(1.0, c.theta_star) * e1)).norm() < 1e-15);

  const auto ell = make_complex_ellipsoid({2, 1});
  CHECK(max_radius(ell, center, e1).R == doctest::Approx(0.37560).epsilon(1e-4));

  // the anisotropic section is longer along the imaginary axis of z_1
  const auto an = anisotropic();
  const CVec p = resolve_point(an, "north");
  const CVec base = p - 0.01 * unit_vector(2, 1);
  CHECK(boundary_radius(an, base, e1, std::numbers::pi / 2) > boundary_radius(an, base, e1, 0.0));
  const auto contact = max_radius(an, base, e1);
  CHECK(std::abs(std::sin(contact.theta_star)) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(contact.R == doctest::Approx(std::sqrt(2.0 * (2 * 0.01 - 0.0001))).epsilon(1e-8));
}

TEST_CASE("line type, exact route") {
  CHECK(line_type(make_ball(2), unit_vector(2, 1), unit_vector(2, 0)).m == 2);
  CHECK(line_type(make_complex_ellipsoid({2, 1}), unit_vector(2, 1), unit_vector(2, 0)).m == 4);
  const auto six = line_type(make_complex_ellipsoid({3, 1}), unit_vector(2, 1), unit_vector(2, 0));
  CHECK(six.m == 6);
  CHECK(six.exact);
  CHECK(six.coefficient_table[6] == doctest::Approx(1.0));
  CHECK(six.coefficient_table[2] == 0.0);
  // the normal line is transversal
  CHECK(line_type(make_ball(2), unit_vector(2, 1), unit_vector(2, 1)).m == 1);
}

TEST_CASE("line type, numerical moments agree with exact inspection") {
  LineTypeOptions numeric;
  numeric.force_numeric = true;
  CHECK(line_type(make_ball(2), unit_vector(2, 1), unit_vector(2, 0), numeric).m == 2);
  CHECK(line_type(make_complex_ellipsoid({2, 1}), unit_vector(2, 1), unit_vector(2, 0), numeric).m == 4);
  CHECK(line_type(make_complex_ellipsoid({3, 1}), unit_vector(2, 1), unit_vector(2, 0), numeric).m == 6);
  // rotated domain: the numeric route still finds the type
  const auto rot = load_domain("rotated:cxellipsoid:2,1:9");
  Rng rng(9);
  const CMat U = random_unitary(2, rng);
  const auto est = line_type(rot, U * unit_vector(2, 1), U * unit_vector(2, 0), numeric);
  CHECK(est.m == 4);
}

TEST_CASE("line type cap") {
  LineTypeOptions opts;
  opts.order_cap = 3;
  try {
    (void)line_type(make_complex_ellipsoid({2, 1}), unit_vector(2, 1), unit_vector(2, 0), opts);
    FAIL("expected TypeExceedsCap");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TypeExceedsCap);
  }
}

TEST_CASE("radius scaling exponent") {
  const auto grid = log_grid(1e-4, 1e-1, 16);
  const CVec north = unit_vector(2, 1);
  const auto ball = radius_scaling_exponent(make_ball(2), north, unit_vector(2, 0), grid);
  CHECK(ball.fit.slope == doctest::Approx(0.5).epsilon(0.04));
  CHECK(ball.monotone);
  const auto ell = radius_scaling_exponent(make_complex_ellipsoid({2, 1}), north, unit_vector(2, 0), grid);
  CHECK(std::abs(ell.fit.slope - 0.25) <= 0.02);
  const auto normal = radius_scaling_exponent(make_ball(2), north, north, grid);
  CHECK(std::abs(normal.fit.slope - 1.0) <= 0.02);

  CHECK(line_type_by_regression(make_complex_ellipsoid({3, 1}), north, unit_vector(2, 0), grid).m == 6);
  CHECK_THROWS_AS(radius_scaling_exponent(make_ball(2), north, unit_vector(2, 0), log_grid(1e-3, 1e-2, 4)), Error);
}

TEST_CASE("rotation invariance of line type and maximal radius") {
  Rng rng(21);
  const auto base = make_complex_ellipsoid({2, 1});
  for (int k = 0; k < 5; ++k) {
    const CMat U = random_unitary(2, rng);
    const auto rot = base.rotated(U, "r");
    const CVec p = U * unit_vector(2, 1);
    const CVec xi = U * unit_vector(2, 0);
    CHECK(line_type(rot, p, xi).m == 4);
    const double R0 = max_radius(base, vec2(0.0, 0.99), unit_vector(2, 0)).R;
    const double R1 = max_radius(rot, p - 0.01 * U * unit_vector(2, 1), xi).R;
    CHECK(std::abs(R0 - R1) <= 1e-8);
  }
}

TEST_CASE("gradient ratio") {
  const auto ball = make_ball(2);
  const CVec e1 = unit_vector(2, 0);
  auto ratio = [&](const ConvexDomain& d, double delta, int m) {
    const auto c = max_radius(d, vec2(0.0, 1.0 - delta), e1);
    return gradient_ratio(d, c, e1, delta, m);
  };
  CHECK(ratio(ball, 0.01, 2) == doctest::Approx(1.4106736).epsilon(1e-6));
  // closed form sqrt(2 - delta): halving delta changes it by < 5%
  CHECK(std::abs(ratio(ball, 0.005, 2) / ratio(ball, 0.01, 2) - 1.0) < 0.05);
  // 2 R^3 delta^{-3/4} = 2 (2 - delta)^{3/4}
  const auto ell = make_complex_ellipsoid({2, 1});
  CHECK(ratio(ell, 0.01, 4) == doctest::Approx(2.0 * std::pow(1.99, 0.75)).epsilon(1e-8));
  CHECK(ratio(ell, 0.01, 4) == doctest::Approx(3.350964).epsilon(1e-6));
}

TEST_CASE("log-log fit") {
  const auto xs = log_grid(1e-3, 1.0, 10);
  std::vector<double> ys;
  for (double x : xs) ys.push_back(3.0 * std::sqrt(x));
  const auto fit = loglog_fit(xs, ys);
  CHECK(fit.slope == doctest::Approx(0.5));
  CHECK(fit.r2 == doctest::Approx(1.0));
  CHECK_THROWS_AS(loglog_fit({1.0, 1.0}, {2.0, 3.0}), Error);
}
