"""Diffeomorphisms of (0,1) witnessing failure of the exponential map.

The family c_t(x) = x + phi(t, x) (t >= 0, mirrored for t < 0) with
phi(t, x) = P(x) t / ((1 - P(x)) t + P(x)) and P(x) = (x - x^2)/2 is a C^1
path of increasing diffeomorphisms of the open unit interval fixing the
boundary limits, with d/dt c_t = 1 at t = 0.  Yet the left ODE
dg/dt o g^{-1} = 1 admits only the translations g_t(x) = x + t, which leave
the group for every t > 0 because the boundary limit at 1 becomes 1 + t.
All claims are checked numerically on dense grids.
"""

from __future__ import annotations

import numpy as np


def p_poly(x):
    return (x - x * x) / 2.0


def p_prime(x):
    return (1.0 - 2.0 * x) / 2.0


def phi(t, x):
    """Homographic bump, defined for t >= 0 and x in (0, 1)."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(t < 0):
        raise ValueError("phi is defined for t >= 0")
    p = p_poly(x)
    return p * t / ((1.0 - p) * t + p)


def c(t, x):
    """The path value c_t(x); t in (-1, 1), x in (0, 1)."""
    x = np.asarray(x, dtype=float)
    if np.any((x <= 0) | (x >= 1)):
        raise ValueError("x must lie in the open unit interval")
    if not -1 < t < 1:
        raise ValueError("t must lie in (-1, 1)")
    if t >= 0:
        return x + phi(t, x)
    return x - phi(-t, x)


def dc_dx(t, x):
    """Exact space derivative: 1 +/- t^2 P'(x) / (t + P(x)(1 - t))^2."""
    x = np.asarray(x, dtype=float)
    u = abs(t)
    p = p_poly(x)
    dphi = (u * u * p_prime(x)) / (u + p * (1.0 - u)) ** 2 if u > 0 \
        else np.zeros_like(x)
    return 1.0 + dphi if t >= 0 else 1.0 - dphi


def dc_dt(t, x):
    """Exact time derivative (P(x) / ((1 - P(x)) t + P(x)))^2 for t >= 0,
    mirrored for t < 0; equal to 1 everywhere at t = 0."""
    x = np.asarray(x, dtype=float)
    u = abs(t)
    p = p_poly(x)
    return (p / ((1.0 - p) * u + p)) ** 2


def check_membership(t, grid_size=1_000_000, fd_step=1e-5, fd_tol=1e-8):
    """Verify the diffeomorphism bounds on a uniform grid.

    Checks x - P(x) < c_t(x) < x + P(x) and |d/dx c_t - 1| <= |P'(x)| (the
    latter with sup |P'| = 1/2 < 1, so c_t is strictly increasing), and
    cross-checks the exact space derivative against central finite
    differences.  Returns a report dict with the worst slacks.
    """
    x = np.linspace(0.0, 1.0, grid_size + 2)[1:-1]
    ct = c(t, x)
    p = p_poly(x)
    lower_slack = float(np.min(ct - (x - p)))
    upper_slack = float(np.min((x + p) - ct))
    deriv = dc_dx(t, x)
    deriv_bound_slack = float(np.min(np.abs(p_prime(x)) - np.abs(deriv - 1.0)))
    inner = x[(x > fd_step) & (x < 1.0 - fd_step)]
    fd = (c(t, inner + fd_step) - c(t, inner - fd_step)) / (2.0 * fd_step)
    fd_err = float(np.max(np.abs(fd - dc_dx(t, inner))))
    report = {
        "t": t,
        "grid_size": grid_size,
        "lower_slack": lower_slack,
        "upper_slack": upper_slack,
        "derivative_bound_slack": deriv_bound_slack,
        "derivative_min": float(np.min(deriv)),
        "fd_cross_check": fd_err,
        "sup_p_prime": 0.5,
        "pass": (lower_slack > 0 and upper_slack > 0
                 and deriv_bound_slack >= -1e-15
                 and np.min(deriv) > 0 and fd_err <= fd_tol),
    }
    return report


def derivative_at_zero(x, fd_step=1e-4):
    """Closed-form d/dt c_t at t = 0 (identically 1) and its forward
    finite-difference approximation (c_h - c_0)/h with O(h) error."""
    x = np.asarray(x, dtype=float)
    closed = dc_dt(0.0, x)
    fd = (c(fd_step, x) - c(0.0, x)) / fd_step
    return closed, fd


def ode_escape_check(t) -> bool:
    """The candidate solution of dg/dt o g^{-1} = 1 is g_t(x) = x + t; it
    escapes the group exactly when t > 0 (boundary limit 1 + t > 1)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    boundary_limit = 1.0 + t
    return boundary_limit > 1.0


def seminorm_drift(t, n, grid_size=10_001) -> float:
    """sup over [1/(n+1), n/(n+1)] of |c_t(x) - x|; bounded by sup P < 1/8."""
    x = np.linspace(1.0 / (n + 1), n / (n + 1), grid_size)
    return float(np.max(np.abs(c(t, x) - x)))


def boundary_limits(t, eps=1e-9):
    """c_t values next to 0 and 1 (the path fixes both boundary limits)."""
    return float(c(t, np.array([eps]))[0]), float(c(t, np.array([1.0 - eps]))[0])


def full_report(ts=(0.1, -0.1, 0.5, -0.5, 0.9, -0.9), grid_size=1_000_000):
    """Membership, derivative, seminorm, and escape checks for several t."""
    rows = []
    for t in ts:
        row = check_membership(t, grid_size=grid_size)
        closed, fd = derivative_at_zero(np.array([0.25, 0.5, 0.75]))
        row["dt_closed_residual"] = float(np.max(np.abs(closed - 1.0)))
        row["dt_fd_residual"] = float(np.max(np.abs(fd - 1.0)))
        near0, near1 = boundary_limits(t)
        row["limit_at_0"] = near0
        row["limit_at_1"] = near1
        row["seminorm_n10"] = seminorm_drift(t, 10)
        row["escape_for_positive_t"] = ode_escape_check(abs(t)) if t != 0 else False
        row["pass"] = bool(row["pass"]
                           and row["dt_closed_residual"] == 0.0
                           and row["dt_fd_residual"] <= 1e-3
                           and abs(near0) <= 1e-6 and abs(near1 - 1.0) <= 1e-6
                           and row["seminorm_n10"] < 0.125)
        rows.append(row)
    return rows
