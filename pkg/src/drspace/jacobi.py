"""Jacobi functions φ_μ^{(α,β)}(r) and the Jacobi c-function.

Two evaluation regimes:

* a Gauss hypergeometric series.  The textbook form is 2F1 in −sinh²r,
  which only converges for r < asinh(1); we sum its Pfaff transform in
  tanh²r instead, which converges for every r and agrees with the textbook
  series where both converge.
* continuation of the Jacobi ODE with DOP853 for larger r.  The integrated
  quantity is ψ = cosh(r)^ρ φ, whose equation has no exponentially growing
  mode, so relative tolerances stay meaningful out to large r.

The series loses roughly μ·tanh(r)/ln(10) digits to cancellation, so the
switch point is μ-dependent: min(r_switch, kappa/μ).
"""

from __future__ import annotations

import logging

import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import loggamma

log = logging.getLogger(__name__)

R_SWITCH = 1.0
KAPPA = 4.0
ODE_RTOL = 1e-12
ODE_ATOL = 1e-13
LAMBDA_FLOOR = 1e-8

_EPS = np.finfo(float).eps


class SeriesConvergenceError(ArithmeticError):
    def __init__(self, message, partial_sums):
        super().__init__(message)
        self.partial_sums = partial_sums


class OdeContinuationError(ArithmeticError):
    pass


def _check_indices(alpha, beta):
    if not alpha > -0.5 or not beta > -0.5:
        raise ValueError(f"Jacobi indices must exceed -1/2, got ({alpha}, {beta})")


def series_psi(alpha, beta, mu, r, *, tol=1e-17, max_terms=20000):
    """ψ(r) = cosh(r)^ρ φ_μ(r), its r-derivative, and an error estimate.

    Broadcasts over `mu` and `r`.
    """
    alpha = float(alpha)
    beta = float(beta)
    mu, r = np.broadcast_arrays(np.asarray(mu, dtype=float), np.asarray(r, dtype=float))
    rho = alpha + beta + 1
    A = (rho + 1j * mu) / 2
    B = (alpha - beta + 1 + 1j * mu) / 2
    C = alpha + 1
    th = np.tanh(r)
    z = th * th
    term = np.ones(mu.shape, dtype=complex)
    s = term.copy()
    ds = np.zeros_like(s)  # d s / d z
    peak = np.ones(mu.shape)
    history = []
    n = 0
    for n in range(max_terms):
        ratio = (A + n) * (B + n) / (C + n)
        ds = ds + term * ratio
        step = ratio / (n + 1) * z
        term = term * step
        s = s + term
        a = np.abs(term)
        peak = np.maximum(peak, a)
        if n >= max_terms - 4:
            history.append(s.copy())
        # terms shrinking geometrically and below tolerance
        if n > 4 and np.all((a == 0) | ((a <= tol * np.abs(s)) & (np.abs(step) < 0.9))):
            break
    else:
        bad = np.abs(term) > tol * np.abs(s)
        raise SeriesConvergenceError(
            f"hypergeometric series did not converge in {max_terms} terms "
            f"(worst tanh^2 r = {np.max(z[bad]):.6g}, worst |mu| = {np.max(np.abs(mu[bad])):.6g})",
            [h[bad] for h in history],
        )
    logc = np.log(np.cosh(r))
    ph = np.exp(-1j * mu * logc)
    sech2 = 1.0 / np.cosh(r) ** 2
    psi = (ph * s).real
    dpsi = (ph * (-1j * mu * th * s + ds * 2 * th * sech2)).real
    err = _EPS * peak * np.sqrt(n + 1) * 4 + np.abs(term) / (1 - z)
    return psi, dpsi, err


def _psi_rhs(alpha, beta, mu2):
    rho = alpha + beta + 1
    q = rho * (alpha - beta + 1)
    c1 = 2 * (2 * alpha + 1)
    n = mu2.size

    def rhs(r, y):
        p = y[:n]
        dp = y[n:]
        return np.concatenate([dp, -c1 / np.sinh(2 * r) * dp - (mu2 - q / np.cosh(r) ** 2) * p])

    return rhs


def ode_phi(alpha, beta, mus, r0, rs, *, rtol=ODE_RTOL, atol=ODE_ATOL):
    """Continue φ_μ from r0 to every r in `rs` (all ≥ r0) for a batch of μ.

    Returns (values, est_error) of shape (len(mus), len(rs)).
    """
    alpha = float(alpha)
    beta = float(beta)
    mus = np.asarray(mus, dtype=float)
    rs = np.asarray(rs, dtype=float)
    rho = alpha + beta + 1
    p0, dp0, e0 = series_psi(alpha, beta, mus, r0)
    r_end = float(rs.max())
    if r_end <= r0:
        p, _, e = series_psi(alpha, beta, mus[:, None], rs[None, :])
        return p / np.cosh(rs) ** rho, e / np.cosh(rs) ** rho
    sol = solve_ivp(
        _psi_rhs(alpha, beta, mus**2),
        (r0, r_end),
        np.concatenate([p0, dp0]),
        method="DOP853",
        rtol=rtol,
        atol=atol,
        dense_output=True,
    )
    if sol.status != 0:
        raise OdeContinuationError(
            f"Jacobi ODE continuation failed between r={r0:.6g} and r={r_end:.6g}: {sol.message}"
        )
    psi = sol.sol(rs)[: mus.size]
    scale = np.cosh(rs) ** -rho
    span = np.maximum(rs - r0, 0.0)
    err = (e0[:, None] + 10 * rtol * (1 + np.abs(mus)[:, None] * span[None, :]) * np.maximum(np.abs(psi), 1)) * scale
    return psi * scale, err


def jacobi_phi_grid(alpha, beta, mus, rs, *, method="auto", r_switch=R_SWITCH, kappa=KAPPA):
    """Matrix of φ_μ^{(α,β)}(r) over `mus` × `rs`, plus error estimates.

    method: "auto" (series near the origin, ODE beyond), "series" or "ode".
    """
    _check_indices(alpha, beta)
    alpha = float(alpha)
    beta = float(beta)
    mus = np.atleast_1d(np.asarray(mus, dtype=float))
    rs = np.atleast_1d(np.asarray(rs, dtype=float))
    if np.any(rs < 0) or not np.all(np.isfinite(rs)):
        raise ValueError("r must be finite and nonnegative")
    if not np.all(np.isfinite(mus)):
        raise ValueError("spectral parameter must be finite")
    rho = alpha + beta + 1
    out = np.empty((mus.size, rs.size))
    err = np.zeros_like(out)
    if method == "series":
        p, _, e = series_psi(alpha, beta, mus[:, None], rs[None, :])
        scale = np.cosh(rs) ** -rho
        out[:] = p * scale
        err[:] = e * scale
        out[:, rs == 0] = 1.0
        return out, err
    if method not in ("auto", "ode"):
        raise ValueError(f"unknown method {method!r}")
    amu = np.abs(mus)
    order = np.argsort(amu, kind="stable")
    sorted_mu = amu[order]
    lo = 0
    while lo < mus.size:
        top = max(2 * sorted_mu[lo], kappa / r_switch)
        hi = int(np.searchsorted(sorted_mu, top, side="right"))
        idx = order[lo:hi]
        mu_max = max(sorted_mu[hi - 1], 1e-300)
        r0 = min(r_switch, kappa / mu_max)
        if method == "ode":
            r0 = min(r0, 0.05)
        near = rs <= r0
        if near.any():
            cols = np.flatnonzero(near)
            p, _, e = series_psi(alpha, beta, mus[idx][:, None], rs[near][None, :])
            scale = np.cosh(rs[near]) ** -rho
            out[np.ix_(idx, cols)] = p * scale
            err[np.ix_(idx, cols)] = e * scale
        if (~near).any():
            cols = np.flatnonzero(~near)
            v, e = ode_phi(alpha, beta, mus[idx], r0, rs[~near])
            out[np.ix_(idx, cols)] = v
            err[np.ix_(idx, cols)] = e
        lo = hi
    out[:, rs == 0] = 1.0
    err[:, rs == 0] = 0.0
    return out, err


def jacobi_phi(alpha, beta, lam, r, *, method="auto", r_switch=R_SWITCH) -> float:
    """φ_lam^{(α,β)}(r): even eigenfunction of the Jacobi operator with
    φ(0) = 1 and eigenvalue −(lam² + (α+β+1)²)."""
    if not alpha > beta:
        raise ValueError(f"need alpha > beta, got ({alpha}, {beta})")
    if r < 0:
        raise ValueError("r must be nonnegative")
    v, _ = jacobi_phi_grid(alpha, beta, [lam], [r], method=method, r_switch=r_switch)
    return float(v[0, 0])


def _re_lgamma_diff(x, xp, y):
    """Re[lnΓ(x+iy) − lnΓ(x'+iy)] without cancellation at large y."""
    y = np.asarray(y, dtype=float)
    out = np.empty(y.shape)
    small = y < 50
    if np.any(small):
        ys = y[small]
        out[small] = loggamma(x + 1j * ys).real - loggamma(xp + 1j * ys).real
    if np.any(~small):
        yl = y[~small]
        z = x + 1j * yl
        zp = xp + 1j * yl
        dx = x - xp
        # Stirling: (z-1/2)ln z - z + 1/(12z) - 1/(360z^3) + 1/(1260z^5), differenced
        val = dx * np.log(z) + (zp - 0.5) * np.log1p(dx / zp) - dx
        val += (1 / z - 1 / zp) / 12 - (z**-3 - zp**-3) / 360 + (z**-5 - zp**-5) / 1260
        out[~small] = val.real
    return out


def log_abs_c(alpha, beta, mu):
    """log |c(μ)| for the Jacobi c-function with ρ = α+β+1.

    c(μ) = 2^{ρ−iμ} Γ(α+1) Γ(iμ) / (Γ((ρ+iμ)/2) Γ((α−β+1+iμ)/2))

    Γ(iμ) is split by the duplication formula so that only differences of
    log-gammas at equal imaginary part appear; those stay accurate for
    huge μ, where the individual terms are of size μ.
    """
    alpha = float(alpha)
    beta = float(beta)
    mu = np.abs(np.asarray(mu, dtype=float))
    rho = alpha + beta + 1
    y = mu / 2
    return (
        (rho - 1) * np.log(2.0)
        - 0.5 * np.log(np.pi)
        + loggamma(alpha + 1).real
        + _re_lgamma_diff(0.0, rho / 2, y)
        + _re_lgamma_diff(0.5, (alpha - beta + 1) / 2, y)
    )


def c_inverse_square(alpha, beta, mu, *, floor=LAMBDA_FLOOR):
    """|c(μ)|^{-2}, continued by its μ² behaviour below `floor` (Γ(iμ) has
    a pole at 0); exactly 0 at μ = 0."""
    mu = np.abs(np.asarray(mu, dtype=float))
    safe = np.maximum(mu, floor)
    val = np.exp(-2 * log_abs_c(alpha, beta, safe))
    return np.where(mu < floor, val * (mu / floor) ** 2, val)


def radial_eigen_residual(m, k, alpha, beta, lams, ts, h):
    """rad Δ φ_λ + (λ² + Q²/4) φ_λ by 5-point central differences, with φ_λ
    evaluated as φ_{2λ}^{(α,β)}(t/2).  Shape (len(lams), len(ts))."""
    Q = m / 2 + k
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    off = np.arange(-2, 3) * h
    T = (ts[:, None] + off[None, :]).ravel()
    v, _ = jacobi_phi_grid(alpha, beta, 2 * lams, T / 2)
    v = v.reshape(lams.size, ts.size, 5)
    d1 = (v[..., 0] - 8 * v[..., 1] + 8 * v[..., 3] - v[..., 4]) / (12 * h)
    d2 = (-v[..., 0] + 16 * v[..., 1] - 30 * v[..., 2] + 16 * v[..., 3] - v[..., 4]) / (12 * h * h)
    drift = (m + k) / 2 / np.tanh(ts / 2) + k / 2 * np.tanh(ts / 2)
    return d2 + drift * d1 + (lams[:, None] ** 2 + Q * Q / 4) * v[..., 2]


def eigen_residual_study(m, k, alpha, beta, lams, ts, steps=(0.02, 0.01, 0.005, 0.0025)):
    """Step-halving study for the finite-difference residual.

    Picks the step whose residual changes least when halved (truncation
    error gone, roundoff not yet dominant).  Returns (residual, h).
    """
    res = [radial_eigen_residual(m, k, alpha, beta, lams, ts, h) for h in steps]
    changes = [np.max(np.abs(a - b)) for a, b in zip(res[:-1], res[1:])]
    i = int(np.argmin(changes))
    return res[i + 1], steps[i + 1]
