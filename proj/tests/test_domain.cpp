#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "cxmetric/domain.hpp"
#include "cxmetric/error.hpp"

using namespace cxmetric;

namespace {

CVec vec2(Complex a, Complex b) {
  CVec v(2);
  v << a, b;
  return v;
}

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an exception");
  return ErrorKind::ConfigInvalid;
}

}  // namespace

TEST_CASE("outward normal of the ball and the complex ellipsoid") {
  const auto ball = make_ball(3);
  CHECK((outward_normal(ball, unit_vector(3, 2)) - unit_vector(3, 2)).norm() < 1e-14);

  const auto ell = make_complex_ellipsoid({2, 1});
  const CVec p = vec2(0.0, 1.0);
  CHECK((outward_normal(ell, p) - unit_vector(2, 1)).norm() < 1e-14);
  // outwardness
  CHECK(ell.evaluate(p + 1e-4 * outward_normal(ell, p)) > 0.0);
}

TEST_CASE("outward normal of a rotated ball follows the rotation") {
  Rng rng(7);
  const CMat U = random_unitary(2, rng);
  const auto ball = make_ball(2).rotated(U, "rotated");
  const CVec p = U * unit_vector(2, 1);
  CHECK((outward_normal(ball, p) - U * unit_vector(2, 1)).norm() < 1e-12);
  // finite differences agree with the chain-rule gradient
  const CVec fd = ball.rho().finite_difference_gradient(p);
  CHECK((fd - ball.rho().wirtinger_gradient(p)).norm() < 1e-8);
}

TEST_CASE("normal errors") {
  const auto ball = make_ball(2);
  CHECK(kind_of([&] { (void)outward_normal(ball, vec2(0.5, 0.0)); }) == ErrorKind::NotOnBoundary);
  // |z_1|^4 + |z_2|^4 - 1 scaled so the gradient is tiny at a boundary point
  HermitianPolynomial flat(1, {{1e-12, {{1, 1}}}, {-1e-12, {{0, 0}}}});
  const auto d = make_polynomial_domain(flat, "flat", CVec::Zero(1));
  CVec p(1);
  p << 1.0;
  CHECK(kind_of([&] { (void)outward_normal(d, p); }) == ErrorKind::GradientVanishes);
}

TEST_CASE("base point") {
  const auto ball = make_ball(2);
  const CVec p = unit_vector(2, 1);
  const CVec nu = outward_normal(ball, p);
  CHECK((base_point(ball, p, nu, 0.01) - vec2(0.0, 0.99)).norm() < 1e-15);
  CHECK(kind_of([&] { (void)base_point(ball, p, nu, 2.0); }) == ErrorKind::OutsideDomain);

  const auto ell = make_complex_ellipsoid({2, 1});
  const CVec q = base_point(ell, p, unit_vector(2, 1), 0.1);
  CHECK((q - vec2(0.0, 0.9)).norm() < 1e-15);
  CHECK(ell.evaluate(q) == doctest::Approx(-0.19).epsilon(1e-14));
}

TEST_CASE("contains and evaluate") {
  const auto ball = make_ball(2);
  CHECK(ball.contains(CVec::Zero(2)));
  CHECK_FALSE(ball.contains(vec2(2.0, 0.0)));
  const auto ell = make_complex_ellipsoid({2, 1});
  CHECK(ell.contains(vec2(0.0, 0.9)));
  CHECK(ell.evaluate(vec2(0.0, 0.9)) == doctest::Approx(-0.19));
}

TEST_CASE("complex tangent projection") {
  const CVec nu = unit_vector(2, 1);
  CHECK((complex_tangent_project(nu, unit_vector(2, 0)) - unit_vector(2, 0)).norm() < 1e-15);
  CHECK(kind_of([&] { (void)complex_tangent_project(nu, nu); }) == ErrorKind::ZeroProjection);
  const CVec mixed = vec2(1.0, 1.0) / std::sqrt(2.0);
  const CVec t = complex_tangent_project(nu, mixed);
  CHECK((t - unit_vector(2, 0) / std::sqrt(2.0)).norm() < 1e-15);
  CHECK((normalized(t) - unit_vector(2, 0)).norm() < 1e-15);

  // idempotence and orthogonality on random data
  Rng rng(3);
  for (int k = 0; k < 100; ++k) {
    const CVec n = random_unit_vector(3, rng);
    const CVec x = random_unit_vector(3, rng);
    const CVec once = complex_tangent_project(n, x);
    CHECK((complex_tangent_project(n, once) - once).norm() < 1e-12);
    CHECK(std::abs(hermitian(once, n)) < 1e-12);
  }
}

TEST_CASE("normalized frame") {
  const auto ball = make_ball(2);
  SUBCASE("north pole: identity up to phase") {
    const auto frame = normalize_frame(ball, unit_vector(2, 1));
    CHECK((frame.unitary * frame.unitary.adjoint() - CMat::Identity(2, 2)).norm() < 1e-12);
    CHECK(std::abs(std::abs(frame.unitary(0, 0)) - 1.0) < 1e-12);
    CHECK(std::abs(std::abs(frame.unitary(1, 1)) - 1.0) < 1e-12);
    CHECK(frame.to_frame(unit_vector(2, 1)).norm() < 1e-15);
  }
  SUBCASE("east pole: coordinates 1 and n swap") {
    const auto frame = normalize_frame(ball, unit_vector(2, 0));
    const CVec w = frame.to_frame(unit_vector(2, 0) - 0.1 * unit_vector(2, 0));
    CHECK(std::abs(w(1) - Complex(-0.1, 0.0)) < 1e-15);
    CHECK(std::abs(w(0)) < 1e-15);
  }
  SUBCASE("translated ball has the translated frame") {
    const CVec c = vec2(Complex(0.3, -0.2), Complex(1.0, 0.5));
    const auto moved = ball.shifted(c, "moved");
    const auto f0 = normalize_frame(ball, unit_vector(2, 1));
    const auto f1 = normalize_frame(moved, unit_vector(2, 1) + c);
    CHECK((f0.unitary - f1.unitary).norm() < 1e-12);
    CHECK((f1.to_frame(c + vec2(0.1, 0.2)) - f0.to_frame(vec2(0.1, 0.2))).norm() < 1e-12);
  }
}

TEST_CASE("frame invariants on corpus domains") {
  Rng rng(11);
  for (const char* id : {"ball:2", "cxellipsoid:2,1", "cxellipsoid:3,1", "ball:3"}) {
    CAPTURE(id);
    const auto d = load_domain(id);
    for (int trial = 0; trial < 3; ++trial) {
      const CVec dir = random_unit_vector(d.dimension(), rng);
      const CVec p = project_to_boundary(d, d.center() + ray_exit_distance(d, d.center(), dir) * dir);
      const auto frame = normalize_frame(d, p);
      CHECK((frame.unitary * frame.unitary.adjoint() - CMat::Identity(d.dimension(), d.dimension())).norm() < 1e-12);
      CHECK((frame.from_frame(frame.to_frame(dir)) - dir).norm() < 1e-12);
      // rho(from_frame(w)) = c Re w_n + O(|w|^2), c = frame.scale
      const int n = d.dimension();
      const double h = 1e-6;
      const double slope = (d.evaluate(frame.from_frame(h * unit_vector(n, n - 1))) -
                            d.evaluate(frame.from_frame(-h * unit_vector(n, n - 1)))) / (2.0 * h);
      CHECK(slope == doctest::Approx(frame.scale).epsilon(1e-6));
      CHECK(slope > 0.0);
      // convexity: the domain lies in Re w_n < 0
      for (const auto& z : sample_interior(d, 2000, rng)) CHECK_UNARY(frame.to_frame(z)(n - 1).real() < 0.0);
    }
  }
}

TEST_CASE("gradient cross-check, convexity and boundedness on the corpus") {
  Rng rng(5);
  for (const char* id : {"ball:2", "cxellipsoid:2,1", "cxellipsoid:3,1"}) {
    CAPTURE(id);
    const auto d = load_domain(id);
    CHECK(gradient_discrepancy(d, 100, rng) <= 1e-6);
    const auto conv = check_midpoint_convexity(d, 10000, rng);
    CHECK(conv.violations == 0);
    CHECK(check_bounded(d));
  }
}

TEST_CASE("corpus identifiers and JSON documents") {
  const auto shifted = load_domain("shifted:ball:2:1,2i");
  CHECK(shifted.contains(vec2(1.0, Complex(0.0, 2.0))));
  CHECK_FALSE(shifted.contains(CVec::Zero(2)));

  const auto rotated = load_domain("rotated:cxellipsoid:2,1:42");
  CHECK(rotated.contains(CVec::Zero(2)));

  const auto path = std::filesystem::temp_directory_path() / "cxmetric_test_domain.json";
  {
    std::ofstream out(path);
    out << R"({"n": 2, "rho": [{"coeff": 1, "powers": [[1,1],[0,0]]},
                               {"coeff": 1, "powers": [[0,0],[1,1]]},
                               {"coeff": 0.25, "powers": [[2,0],[0,0]]},
                               {"coeff": 0.25, "powers": [[0,2],[0,0]]},
                               {"coeff": -1, "powers": [[0,0],[0,0]]}]})";
  }
  const auto custom = load_domain(path.string());
  CHECK(custom.dimension() == 2);
  // |z|^2 + Re(z_1^2)/2 - 1 at z = (0.5, 0)
  CHECK(custom.evaluate(vec2(0.5, 0.0)) == doctest::Approx(0.25 + 0.125 - 1.0));
  std::filesystem::remove(path);

  CHECK(kind_of([] { (void)load_domain("nonsense:3"); }) == ErrorKind::ConfigInvalid);
}

TEST_CASE("conjugation closure is enforced") {
  CHECK(kind_of([] { HermitianPolynomial(1, {{1.0, {{2, 0}}}}); }) == ErrorKind::ConfigInvalid);
}

TEST_CASE("complex vector parsing") {
  const CVec v = parse_complex_vector("0.5, -1e-3, 2i, 0.3-0.1i");
  REQUIRE(v.size() == 4);
  CHECK(v(0) == Complex(0.5, 0.0));
  CHECK(v(1) == Complex(-1e-3, 0.0));
  CHECK(v(2) == Complex(0.0, 2.0));
  CHECK(std::abs(v(3) - Complex(0.3, -0.1)) < 1e-15);
}
