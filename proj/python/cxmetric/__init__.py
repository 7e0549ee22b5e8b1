"""Two-sided estimates of invariant metrics near the boundary of convex domains.

Complex vectors are numpy arrays of dtype complex128.
"""

import json

from ._core import (
    Domain,
    Error,
    affine_disc_bound,
    ball_metric_oracle,
    base_point,
    bnw_constant,
    disc_hessian_bound_check,
    line_type,
    load_domain,
    max_radius,
    mixed_lower_bound,
    outward_normal,
    poincare,
    psh_metric_unit_disc,
    recentered_disc_bound,
    resolve_direction,
    resolve_point,
    sibony_bound,
    truncation_order,
)
from . import _core

__all__ = [
    "Domain",
    "Error",
    "affine_disc_bound",
    "ball_metric_oracle",
    "base_point",
    "bnw_constant",
    "disc_hessian_bound_check",
    "line_type",
    "load_domain",
    "max_radius",
    "mixed_lower_bound",
    "outward_normal",
    "poincare",
    "psh_metric_unit_disc",
    "recentered_disc_bound",
    "resolve_direction",
    "resolve_point",
    "sibony_bound",
    "sweep",
    "truncation_order",
    "verify",
]


def sweep(domain="ball:2", point="north", direction="tangent:1", delta_min=1e-4, delta_max=1e-1,
          count=16, methods="sibony,disc,oracle", seed=0, closed_form=True, threads=0):
    """Runs a delta sweep. Returns (csv_text, report_dict)."""
    if not isinstance(methods, str):
        methods = ",".join(methods)
    csv, text = _core._sweep(domain, point, direction, delta_min, delta_max, count, methods, seed,
                             closed_form, threads)
    return csv, json.loads(text)


def verify(domain, delta, candidate="normal", point="north", direction="tangent:1", samples=10000, seed=0):
    """Admissibility report for a normal, tangential or truncated candidate."""
    if isinstance(domain, str):
        domain = load_domain(domain)
    p = resolve_point(domain, point) if isinstance(point, str) else point
    return json.loads(_core._verify(domain, p, direction, delta, candidate, samples, seed))
