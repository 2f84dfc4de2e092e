"""Elementary spherical functions φ_λ(t) = φ_{2λ}^{(α,β)}(t/2), the
Plancherel density, and pointwise audits of φ_λ."""

from __future__ import annotations

import math
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from . import jacobi
from .params import DRParams
from .report import CheckReport, decide

BOUND_SLACK = 1e-10
LOWER_BOUND_FLOOR = 1e-6


class SphericalEval(NamedTuple):
    lam: float
    t: float
    value: float
    method: str  # "series" or "ode_continuation"
    est_error: float


class PlancherelDensity(NamedTuple):
    lam: float
    density: float


class LowerBoundError(ArithmeticError):
    pass


def spherical_phi_matrix(params: DRParams, lams, ts, *, return_error=False):
    """φ_λ(t) for every (λ, t) pair, shape (len(lams), len(ts))."""
    a, b = params.indices
    v, e = jacobi.jacobi_phi_grid(a, b, 2 * np.atleast_1d(np.asarray(lams, float)), np.atleast_1d(np.asarray(ts, float)) / 2)
    return (v, e) if return_error else v


def spherical_phi(params: DRParams, lam: float, t: float) -> float:
    if t < 0:
        raise ValueError("t must be nonnegative")
    a, b = params.indices
    return jacobi.jacobi_phi(a, b, 2 * lam, t / 2)


def spherical_eval(params: DRParams, lam: float, t: float) -> SphericalEval:
    v, e = spherical_phi_matrix(params, [lam], [t], return_error=True)
    r = t / 2
    series = r <= min(jacobi.R_SWITCH, jacobi.KAPPA / max(2 * abs(lam), 1e-300))
    return SphericalEval(float(lam), float(t), float(v[0, 0]), "series" if series else "ode_continuation", float(e[0, 0]))


def raw_density(params: DRParams, lam):
    """|c(λ)|^{-2} before calibration (spectral variable 2λ)."""
    lam = np.asarray(lam, dtype=float)
    if np.any(lam < 0):
        raise ValueError("the Plancherel density is defined for lambda >= 0")
    a, b = params.indices
    return jacobi.c_inverse_square(a, b, 2 * lam, floor=2 * jacobi.LAMBDA_FLOOR)


def plancherel_density(params: DRParams, lam):
    """Calibrated Plancherel density.  Below λ = 1e-8 the λ² regime is used
    in place of the Γ(iμ) pole; the value at 0 is 0."""
    if params.plancherel_C is None:
        raise ValueError("params are not calibrated; use derive_params(m, k)")
    return params.plancherel_C * raw_density(params, lam)


def density_sample(params: DRParams, lam: float) -> PlancherelDensity:
    if not lam > 0:
        raise ValueError("lambda must be positive")
    return PlancherelDensity(float(lam), float(plancherel_density(params, lam)))


@lru_cache(maxsize=None)
def density_limits(params: DRParams) -> tuple[float, float]:
    """lim density/λ² at 0 and lim density/λ^{d-1} at ∞."""
    lo = float(plancherel_density(params, 1e-7) / 1e-14)
    big = 1e9
    hi = float(plancherel_density(params, big) / big ** (params.d - 1))
    return lo, hi


@lru_cache(maxsize=None)
def density_comparison(params: DRParams, lam_lo: float = 1.0) -> tuple[float, float]:
    """(c_low, c_high) with c_low λ^{d-1} ≤ density(λ) ≤ c_high λ^{d-1} on
    [lam_lo, ∞), measured on a log grid that reaches the asymptotic regime."""
    lam = np.geomspace(lam_lo, 1e9, 400)
    r = plancherel_density(params, lam) / lam ** (params.d - 1)
    r = np.append(r, density_limits(params)[1])
    return float(r.min()), float(r.max())


def quadratic_bound(params: DRParams, lam, t):
    """(t²/2)(4λ² + Q²/4)."""
    Q = float(params.Q)
    return np.asarray(t) ** 2 / 2 * (4 * np.asarray(lam) ** 2 + Q * Q / 4)


def phi_bounds_audit(params: DRParams, lambda_grid, t_grid, mode: str = "bounds", *, slack=BOUND_SLACK) -> CheckReport:
    """Pointwise audit of φ_λ on a grid.

    mode "bounds": |φ| ≤ 1, the quadratic bound on |1 − φ| and a positive
    lower bound on |1 − φ| where λt ≥ 1.  One report row per t; lhs is the
    worst |1 − φ| relative to the quadratic bound.

    mode "eigen": finite-difference eigen-residual, relative to 1e-4(1+λ²).
    """
    lams = np.asarray(lambda_grid, dtype=float)
    ts = np.asarray(t_grid, dtype=float)
    if np.any(~np.isfinite(lams)) or np.any(~np.isfinite(ts)) or np.any(ts <= 0) or np.any(lams < 0):
        raise ValueError("grids must be finite with t > 0 and lambda >= 0")
    if mode == "eigen":
        a, b = params.indices
        res, h = jacobi.eigen_residual_study(params.m, params.k, a, b, lams, ts)
        scaled = np.abs(res) / (1 + lams[:, None] ** 2)
        lhs = scaled.max(axis=0)
        tol = 1e-4
        rhs = np.full(ts.size, tol)
        ok = bool(np.all(lhs <= tol))
        ratios = lhs / tol
        return CheckReport(
            "phi_eigen_residual", params, ts.tolist(), lhs.tolist(), rhs.tolist(),
            float(ratios.max()), float(ratios.min()), [], "pass" if ok else "fail",
            {"residual": tol}, {"fd_step": h, "worst_residual": float(np.abs(res).max())},
        )
    if mode != "bounds":
        raise ValueError(f"unknown audit mode {mode!r}")
    P = spherical_phi_matrix(params, lams, ts)
    s1 = 1 - np.abs(P)
    bound = quadratic_bound(params, lams[:, None], ts[None, :])
    dev = np.abs(1 - P)
    s2 = bound - dev
    far = lams[:, None] * ts[None, :] >= 1
    low = float(dev[far].min()) if far.any() else math.nan
    rel = dev / bound
    lhs = rel.max(axis=0)
    rhs = np.ones(ts.size)
    w1 = float(s1.min())
    w2 = float(s2.min())
    ok = w1 >= -slack and w2 >= -slack and (math.isnan(low) or low > LOWER_BOUND_FLOOR)
    extras = {
        "worst_slack_abs_phi": w1,
        "worst_slack_quadratic": w2,
        "violations_abs_phi": int(np.sum(s1 < -slack)),
        "violations_quadratic": int(np.sum(s2 < -slack)),
        "inf_one_minus_phi_far": low,
    }
    return CheckReport(
        "phi_bounds", params, ts.tolist(), lhs.tolist(), rhs.tolist(),
        float(lhs.max()), float(lhs.min()), [], decide([], ok, float(lhs.max())),
        {"slack": slack, "lower_bound_floor": LOWER_BOUND_FLOOR}, extras,
    )


def lower_bound_constant(
    params: DRParams,
    lambda_max: float,
    t_max: float,
    *,
    t_min: float | None = None,
    n: int = 97,
    product_max: float = 64.0,
) -> float:
    """Empirical inf of |1 − φ_λ(t)| over λt ≥ 1 on a grid.

    The grid is parametrized by t and p = λt ∈ [1, product_max] (beyond that
    |φ| is small and 1 − φ stays near 1), log-spaced with extra points just
    above p = 1 where the infimum sits.  Grids with 2n − 1 points contain
    the n-point ones, so refining can only lower the result.
    """
    if lambda_max < 1 or t_max < 1 and t_min is None:
        raise ValueError("need lambda_max >= 1 and t_max >= 1")
    t_lo = t_min if t_min is not None else 1.0 / lambda_max
    ts = np.geomspace(t_lo, t_max, n)
    ps = np.union1d(np.geomspace(1.0, product_max, n), 1 + np.geomspace(1e-6, 0.05, 8))
    lam = (ps[:, None] / ts[None, :]).ravel()
    tt = np.broadcast_to(ts[None, :], (ps.size, ts.size)).ravel()
    keep = lam <= lambda_max * (1 + 1e-12)
    lam, tt = lam[keep], tt[keep]
    order = np.argsort(lam, kind="stable")
    lam, tt = lam[order], tt[order]
    worst = math.inf
    lo = 0
    while lo < lam.size:
        hi = int(np.searchsorted(lam, 2 * lam[lo], side="right"))
        tsub = np.unique(tt[lo:hi])
        P = spherical_phi_matrix(params, lam[lo:hi], tsub)
        col = np.searchsorted(tsub, tt[lo:hi])
        vals = np.abs(1 - P[np.arange(hi - lo), col])
        worst = min(worst, float(vals.min()))
        lo = hi
    if not worst >= LOWER_BOUND_FLOOR:
        raise LowerBoundError(f"lower bound {worst:.3e} below {LOWER_BOUND_FLOOR:g}; spherical function evaluation is suspect")
    return worst
