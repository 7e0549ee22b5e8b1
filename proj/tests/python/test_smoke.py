import math

import numpy as np
import pytest

import cxmetric


def test_ball_oracle_and_disc_bound():
    ball = cxmetric.load_domain("ball:2")
    assert ball.dimension == 2
    base = np.array([0, 0.99], dtype=complex)
    e1 = np.array([1, 0], dtype=complex)
    exact = cxmetric.ball_metric_oracle(base, e1)
    assert exact == pytest.approx(1 / math.sqrt(0.0199), rel=1e-12)
    assert cxmetric.affine_disc_bound(ball, base, e1) == pytest.approx(exact, rel=1e-8)
    assert cxmetric.poincare(0.5, 1) == pytest.approx(4 / 3)


def test_sibony_bounds():
    ball = cxmetric.load_domain("ball:2")
    p = cxmetric.resolve_point(ball)
    nu = cxmetric.outward_normal(ball, p)
    assert cxmetric.sibony_bound(ball, p, nu, 0.1)["value"] == pytest.approx(1 / 0.6, rel=1e-10)
    e1 = cxmetric.resolve_direction(ball, p, "tangent:1")
    b = cxmetric.sibony_bound(ball, p, e1, 0.01)
    assert 0 < b["value"] <= cxmetric.ball_metric_oracle(p - 0.01 * nu, e1)
    assert cxmetric.mixed_lower_bound(1.0, 0.1) == pytest.approx(1 / 0.6)


def test_line_type_and_radius():
    ell = cxmetric.load_domain("cxellipsoid:2,1")
    p = cxmetric.resolve_point(ell)
    e1 = np.array([1, 0], dtype=complex)
    assert cxmetric.line_type(ell, p, e1) == (4, True)
    R, _, _ = cxmetric.max_radius(ell, np.array([0, 0.99], dtype=complex), e1)
    assert R == pytest.approx(0.0199 ** 0.25, rel=1e-8)


def test_sweep_is_deterministic():
    csv_a, rep_a = cxmetric.sweep(count=8, seed=3, threads=2)
    csv_b, rep_b = cxmetric.sweep(count=8, seed=3, threads=1)
    assert csv_a == csv_b
    assert rep_a == rep_b
    assert rep_a["schema"] == "v1"
    assert csv_a.splitlines()[0].startswith("delta,lower,upper,oracle")
    assert len(rep_a["records"]) == 8


def test_verify_and_unit_disc():
    report = cxmetric.verify("ball:2", 0.01, samples=2000)["report"]
    assert report["passed"]
    assert cxmetric.bnw_constant([1.0, -0.2]) == pytest.approx(2 / 3, abs=1e-6)
    assert cxmetric.disc_hessian_bound_check(lambda z: abs(z) ** 2) == pytest.approx(1.0, abs=1e-8)
    assert cxmetric.psh_metric_unit_disc(2j) == 2.0
    assert cxmetric.truncation_order(5.0) == 11


def test_errors_carry_their_kind():
    with pytest.raises(cxmetric.Error) as info:
        cxmetric.load_domain("nonsense:2")
    assert info.value.args[1] == "ConfigInvalid"
