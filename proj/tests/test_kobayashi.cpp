#include <doctest.h>

#include "cxmetric/error.hpp"
#include "cxmetric/kobayashi.hpp"
#include "oracles.hpp"

using namespace cxmetric;

namespace {

CVec vec2(Complex a, Complex b) {
  CVec v(2);
  v << a, b;
  return v;
}

// |z|^2 - 4
ConvexDomain ball_of_radius_two() {
  HermitianPolynomial poly(2, {{1.0, {{1, 1}, {0, 0}}}, {1.0, {{0, 0}, {1, 1}}}, {-4.0, {{0, 0}, {0, 0}}}});
  return make_polynomial_domain(poly, "ball2", CVec::Zero(2));
}

}  // namespace

TEST_CASE("poincare metric") {
  CHECK(poincare(0.0, 1.0) == 1.0);
  CHECK(poincare(0.5, 1.0) == doctest::Approx(4.0 / 3.0));
  CHECK(poincare(0.0, Complex(0.0, 2.0)) == 2.0);
  CHECK_THROWS_AS(poincare(1.0, 1.0), Error);
}

TEST_CASE("ball metric oracle") {
  CHECK(ball_metric_oracle(CVec::Zero(2), vec2(0.6, Complex(0.0, 0.8))) == doctest::Approx(1.0));
  const CVec z = vec2(0.0, 0.99);
  CHECK(ball_metric_oracle(z, unit_vector(2, 1)) == doctest::Approx(1.0 / 0.0199).epsilon(1e-12));
  CHECK(ball_metric_oracle(z, unit_vector(2, 1)) == doctest::Approx(poincare(0.99, 1.0)).epsilon(1e-12));
  CHECK(ball_metric_oracle(z, unit_vector(2, 0)) == doctest::Approx(1.0 / std::sqrt(0.0199)).epsilon(1e-12));
  CHECK(ball_metric_oracle(z, unit_vector(2, 0)) == doctest::Approx(7.0888121).epsilon(1e-7));
  try {
    (void)ball_metric_oracle(vec2(1.0, 0.0), unit_vector(2, 0));
    FAIL("expected OutsideDomain");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutsideDomain);
  }
  Rng rng(4);
  for (int k = 0; k < 50; ++k) {
    const CVec p = 0.9 * random_unit_vector(3, rng) * std::sqrt(std::uniform_real_distribution<double>(0, 1)(rng));
    const CVec x = random_unit_vector(3, rng);
    std::vector<Complex> pz(p.data(), p.data() + 3);
    std::vector<Complex> px(x.data(), x.data() + 3);
    CHECK(ball_metric_oracle(p, x) == doctest::Approx(oracle::ball_metric(pz, px)).epsilon(1e-12));
  }
}

TEST_CASE("affine disc bound") {
  const auto ball = make_ball(2);
  const CVec base = vec2(0.0, 0.99);
  const auto tangential = affine_disc_bound(ball, base, unit_vector(2, 0));
  CHECK(tangential.value == doctest::Approx(1.0 / std::sqrt(0.0199)).epsilon(1e-8));
  CHECK(tangential.value == doctest::Approx(ball_metric_oracle(base, unit_vector(2, 0))).epsilon(1e-8));
  const auto normal = affine_disc_bound(ball, base, unit_vector(2, 1));
  CHECK(normal.value == doctest::Approx(100.0).epsilon(1e-8));
  CHECK(normal.value >= ball_metric_oracle(base, unit_vector(2, 1)));
  CHECK(normal.value <= 2.0 * ball_metric_oracle(base, unit_vector(2, 1)));
  CHECK(disc_contained_sampled(ball, tangential.disc));
  CHECK(tangential.disc(0.0) == base);

  // unit disc at its center: Poincare value
  CHECK(affine_disc_bound(make_ball(1), CVec::Zero(1), CVec::Ones(1)).value == doctest::Approx(1.0).epsilon(1e-10));

  // homogeneity
  CHECK(affine_disc_bound(ball, base, 3.0 * unit_vector(2, 0)).value ==
        doctest::Approx(3.0 * tangential.value).epsilon(1e-12));
}

TEST_CASE("monotonicity under inclusion") {
  const auto small = make_ball(2);
  const auto large = ball_of_radius_two();
  Rng rng(8);
  for (int k = 0; k < 10; ++k) {
    const CVec base = 0.95 * random_unit_vector(2, rng);
    const CVec xi = random_unit_vector(2, rng);
    CHECK(affine_disc_bound(large, base, xi).value <= affine_disc_bound(small, base, xi).value + 1e-12);
  }
}

TEST_CASE("recentered disc bound") {
  const auto ball = make_ball(2);
  const CVec base = vec2(0.0, 0.99);
  const CVec nu = unit_vector(2, 1);
  SUBCASE("normal direction improves on the affine disc") {
    const auto b = recentered_disc_bound(ball, base, nu, nu);
    const double oracle = ball_metric_oracle(base, nu);
    CHECK(b.value <= 100.0 + 1e-9);
    CHECK(b.value >= oracle);
    CHECK(b.value <= 75.0);
    CHECK(b.improved);
    CHECK(b.evaluations <= 201);
    CHECK(disc_contained_sampled(ball, b.disc));
    CHECK(b.disc(0.0) == base);
  }
  SUBCASE("tangential directions: affine is already optimal on the ball") {
    const auto affine = affine_disc_bound(ball, base, unit_vector(2, 0));
    const auto b = recentered_disc_bound(ball, base, unit_vector(2, 0), nu);
    CHECK(b.value <= affine.value);
    CHECK(b.value >= affine.value * (1.0 - 1e-6));
  }
  SUBCASE("frozen shift reproduces the affine bound") {
    RecenteredOptions opts;
    opts.freeze_shift = true;
    const auto affine = affine_disc_bound(ball, base, nu);
    CHECK(recentered_disc_bound(ball, base, nu, nu, opts).value == affine.value);
  }
}

TEST_CASE("disc JSON export") {
  const auto b = affine_disc_bound(make_ball(2), vec2(0.0, 0.99), unit_vector(2, 0));
  const auto j = b.disc.to_json();
  CHECK(j.at("kind") == "affine");
  CHECK(j.at("radius").get<double>() == b.disc.radius);
  CHECK(j.at("containment").at("angles") == 64);
}
