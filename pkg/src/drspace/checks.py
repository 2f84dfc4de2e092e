"""Numerical audits of Titchmarsh-type inequalities for radial functions.

Each check measures both sides of an inequality on a grid of small t (or
on truncation levels), reports the implied constants, and traces the
constant chain of the corresponding argument through empirically measured
ingredients: the lower bound on |1 − φ_λ(t)|, the density comparison
constants, monotonicity constants of the modulus, and so on.

"Small t" means the log-spaced grid [1e-3, 1e-1] with 32 points unless a
grid is passed in.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate

from . import moduli
from .moduli import Modulus, dyadic_sum_bound, mo_lower_index, standard_modulus, zygmund_z0, zygmund_zk
from .params import DRParams
from .profiles import power_profile
from .report import CheckReport, Hypothesis, decide, sup_inf
from .spherical import density_comparison, lower_bound_constant
from .transform import (
    RadialFunction,
    SpectralFunction,
    WEIGHTS,
    lip_deviation_interval,
    lip_pieces,
    weighted_integral,
    weighted_tail,
)

log = logging.getLogger(__name__)

REL_SLACK = 1e-9
STABLE_INCREMENT = 1e-3
DYADIC_DEPTH = 40  # extra halvings used to probe t/2^i below the grid


def default_t_grid(n: int = 32, lo: float = 1e-3, hi: float = 1e-1) -> np.ndarray:
    return np.geomspace(lo, hi, n)


def _grid(t_grid):
    ts = default_t_grid() if t_grid is None else np.asarray(t_grid, dtype=float)
    if ts.ndim != 1 or ts.size == 0 or np.any(ts <= 0) or np.any(ts >= 1):
        raise ValueError("t_grid must be a nonempty list of points in (0, 1)")
    return ts


def tail_energy(fhat: SpectralFunction, s: float, weight: str = "flat") -> float:
    """∫_s^∞ |f̂(λ)|² w(λ) dλ with w = 1, λ^{d-1} or the Plancherel density."""
    if weight not in WEIGHTS:
        raise ValueError(f"weight must be one of {WEIGHTS}")
    if weight == "flat":
        return weighted_tail(fhat, s)
    if weight == "power_dminus1":
        return weighted_tail(fhat, s, power=fhat.params.d - 1)
    return weighted_tail(fhat, s, plancherel=True)


def stabilization_index(values, tol: float = STABLE_INCREMENT) -> int | None:
    """First index i with two consecutive relative increments below tol
    (values[i-1]→values[i] and values[i]→values[i+1]); None if none."""
    v = np.asarray(values, dtype=float)
    small = []
    for a, b in zip(v[:-1], v[1:]):
        small.append(b == a or (b != 0 and abs(b - a) <= tol * abs(b)))
    for i in range(len(small) - 1):
        if small[i] and small[i + 1]:
            return i + 1
    return None


# ------------------------------------------------------------------ forward


def forward_titchmarsh(params: DRParams, f: RadialFunction | None, fhat: SpectralFunction, w: Modulus, t_grid=None, *, rel_slack: float = REL_SLACK) -> CheckReport:
    """Lip(ω) ⇒ ∫_{1/t}^∞ |f̂|² dλ ≤ κ L² t^{d-1} ω(t)².

    L = sup ‖M_t f − f‖₂ / ω(t) (upper end of the modeled-tail bracket);
    κ = 1 / (c_low C₁²), with C₁ the measured lower bound on |1 − φ_λ(t)|
    for λt ≥ 1 and c_low the lower density comparison constant on [1, ∞).
    """
    ts = _grid(t_grid)
    d = params.d
    lhs = [tail_energy(fhat, 1 / t) for t in ts]
    om = np.asarray(w(ts), dtype=float)
    rhs = (ts ** (d - 1) * om**2).tolist()
    lips = np.array([lip_deviation_interval(params, fhat, t).upper for t in ts])
    L = float(np.max(lips / om))
    c1 = lower_bound_constant(params, lambda_max=64 / ts.min(), t_max=ts.max(), t_min=ts.min(), n=33)
    c_low, _ = density_comparison(params)
    kappa = 1.0 / (c_low * c1 * c1)
    rsup, rinf = sup_inf(lhs, rhs)
    bound = kappa * L * L
    ok = rsup <= bound * (1 + rel_slack)
    return CheckReport(
        "thm-forward", params, ts.tolist(), lhs, rhs, rsup, rinf, [], decide([], ok, rsup),
        {"rel_slack": rel_slack},
        {"L": L, "kappa": kappa, "C1": c1, "c_low": c_low, "bound": bound, "ratio_sup_over_L2": rsup / (L * L) if L else 0.0},
    )


# ------------------------------------------------------------------- dyadic


def _mo_hypotheses(w: Modulus):
    z0 = zygmund_z0(w)
    try:
        m = mo_lower_index(w).value
    except moduli.IndexEstimateError:
        m = math.nan
    return [Hypothesis("zygmund_z0", z0.member, z0.C), Hypothesis("mo_index_positive", m > 0, m)], m


def dyadic_shell_equiv(fhat: SpectralFunction, w: Modulus, t_grid=None, *, mu: float | None = None, rel_slack: float = REL_SLACK) -> CheckReport:
    """Dyadic shells control the full weighted tail.

    shell(t) = ∫_{1/t}^{2/t} |f̂|² λ^{d-1},  tail(t) = ∫_{1/t}^∞ |f̂|² λ^{d-1}.
    With B = sup_{t' ≤ t} shell(t')/ω(t')² (probed on t/2^i), the argument
    gives tail(t) ≤ B Σ_i ω(t/2^i)² ≤ B C_μ² ω(t)² / (1 − 2^{-2μ}).
    Rows: lhs = tail(t), rhs = that bound.
    """
    params = fhat.params
    ts = _grid(t_grid)
    hyps, m = _mo_hypotheses(w)
    if not all(h.passed for h in hyps):
        return CheckReport("lem-dyadic", params, [], [], [], 0.0, 0.0, hyps, "inconclusive", {}, {})
    mu = 0.9 * m if mu is None else mu
    p = params.d - 1
    ext = (ts[:, None] * 2.0 ** -np.arange(DYADIC_DEPTH + 1)[None, :]).ravel()
    shell_ext = np.array([weighted_integral(fhat, 1 / s, 2 / s, power=p) for s in ext])
    B = float(np.max(shell_ext / np.asarray(w(ext)) ** 2))
    tail = np.array([weighted_tail(fhat, 1 / t, power=p) for t in ts])
    shell = shell_ext.reshape(ts.size, -1)[:, 0]
    sums = [dyadic_sum_bound(w, t, mu) for t in ts]
    om2 = np.asarray(w(ts)) ** 2
    rhs = np.array([B * s.bound for s in sums])
    inclusion = float(np.min(tail - shell + 1e-12 * tail))
    emp_c = tail / (B * om2) if B > 0 else np.zeros(ts.size)
    proof_c = np.array([s.bound for s in sums]) / om2
    ok = inclusion >= 0 and bool(np.all(tail <= rhs * (1 + rel_slack)))
    rsup, rinf = sup_inf(tail.tolist(), rhs.tolist())
    with np.errstate(divide="ignore", invalid="ignore"):
        ts_ratio = np.where(shell > 0, tail / shell, np.nan)
    extras = {
        "mu": mu,
        "B_shell_sup": B,
        "C_mu_squared": max(s.constant for s in sums),
        "empirical_C_max": float(emp_c.max()),
        "proof_C_min": float(proof_c.min()),
        "tail_over_shell_max": float(np.nanmax(ts_ratio)) if np.any(np.isfinite(ts_ratio)) else math.nan,
        "tail_over_shell_min": float(np.nanmin(ts_ratio)) if np.any(np.isfinite(ts_ratio)) else math.nan,
        "inclusion_slack_min": inclusion,
    }
    return CheckReport(
        "lem-dyadic", params, ts.tolist(), tail.tolist(), rhs.tolist(), rsup, rinf, hyps,
        decide(hyps, ok, rsup), {"rel_slack": rel_slack, "inclusion_abs": 1e-12}, extras,
    )


# ----------------------------------------------------------------- converse


def _tail_checks(w: Modulus):
    """(inf of ω on [δ₀, ∞), ∫_{δ₀}^∞ ω²/t⁵ dt)."""
    d0 = w.delta0
    if w.tail in ("constant_extension", "bounded_below"):
        c = float(w(2 * d0))
        return c, c * c / (4 * d0**4)
    probe = np.geomspace(d0, d0 * 1e6, 400)
    low = float(np.min(w(probe)))
    val, _ = integrate.quad(lambda t: float(w(t)) ** 2 / t**5, d0, np.inf, limit=200)
    return low, val


def converse_hypotheses(w: Modulus) -> CheckReport:
    """The five standing assumptions of the converse direction."""
    z0 = zygmund_z0(w)
    zk = zygmund_zk(w)
    low, l1 = _tail_checks(w)
    hyps = [
        Hypothesis("order_at_most_2", w.order_k <= 2, w.order_k),
        Hypothesis("zygmund_z0", z0.member, z0.C),
        Hypothesis("zygmund_zk", zk.member, zk.C),
        Hypothesis("tail_bounded_below", low > 0, low),
        Hypothesis("tail_l1_omega2_t5", math.isfinite(l1), l1),
    ]
    verdict = "pass" if all(h.passed for h in hyps) else "fail"
    return CheckReport("converse_hypotheses", None, [], [], [], 0.0, 0.0, hyps, verdict, {"zygmund_stability": moduli.STABILITY}, {})


def converse_titchmarsh(params: DRParams, f: RadialFunction | None, fhat: SpectralFunction, w: Modulus, t_grid=None, *, rel_slack: float = REL_SLACK) -> CheckReport:
    """Tail decay ⇒ Lip(ω), with the majorant split at λ = 1/t.

    ‖M_t f − f‖² = I₁ + I₂ (λ below / above 1/t).  The majorant replaces
    |1 − φ|² by the quadratic bound squared on I₁ and by 4 on I₂; the
    constant C′ bounding majorant/ω(t)² is assembled from measured pieces:

      C′ = 32 C₃ C_decr C_zk
           + (32 C₃ E + Q⁴ ψ(0)/32) (C_d2 δ₀² / ω(δ₀))²
           + 4 c_high C₂

    ψ(s) = ∫_s^∞ |f̂|² dens, C₃ = sup_s ψ(s)/ω(1/s)², E = ∫_{δ₀}^∞ ω²/t⁵,
    C_d2 the almost-decreasing constant of ω/t², c_high the upper density
    comparison constant, C₂ the dyadic-lemma constant built from the premise.
    """
    ts = _grid(t_grid)
    hyp_report = converse_hypotheses(w)
    hyps = list(hyp_report.hypotheses)
    name = "thm-converse"
    if not all(h.passed for h in hyps):
        return CheckReport(name, params, [], [], [], 0.0, 0.0, hyps, "inconclusive", {}, {})
    if ts.max() > w.delta0:
        raise ValueError("t_grid must lie below delta0 of the modulus")
    d = params.d
    Q = float(params.Q)
    # premise: flat tail ≤ C t^{d-1} ω(t)², probed down the dyadic ladder
    ext = (ts[:, None] * 2.0 ** -np.arange(DYADIC_DEPTH + 1)[None, :])
    prem = np.array([[weighted_tail(fhat, 1 / s) for s in row] for row in ext])
    prem = prem / (ext ** (d - 1) * np.asarray(w(ext)) ** 2)
    c_prem = float(prem.max())
    c_prem_half = float(prem[:, : DYADIC_DEPTH // 2 + 1].max())
    premise_ok = math.isfinite(c_prem) and c_prem <= c_prem_half * (1 + 0.05)
    hyps.append(Hypothesis("fourier_tail_premise", premise_ok, c_prem))
    if not premise_ok:
        return CheckReport(name, params, [], [], [], 0.0, 0.0, hyps, "inconclusive", {}, {"premise_constant": c_prem})
    m = mo_lower_index(w).value
    mu = 0.9 * m
    sums = [dyadic_sum_bound(w, t, mu) for t in ts]
    c_mu2 = max(s.constant for s in sums)
    B = 2.0 ** (d - 1) * c_prem
    C2 = B * c_mu2 / (1 - 2.0 ** (-2 * mu))
    _, c_high = density_comparison(params)
    psi0 = weighted_integral(fhat, 0.0, math.inf, plancherel=True)
    svals = np.geomspace(1e-3, 1e12, 301)
    psi = np.array([weighted_tail(fhat, s, plancherel=True) for s in svals])
    C3 = float(np.max(psi / np.asarray(w(1 / svals)) ** 2))
    zk = next(h for h in hyps if h.name == "zygmund_zk").constant
    E = next(h for h in hyps if h.name == "tail_l1_omega2_t5").constant
    c_decr = w.c_decr
    c_d2 = moduli.almost_decreasing_constant(w, 2.0)
    d0 = w.delta0
    geo = (c_d2 * d0 * d0 / float(w(d0))) ** 2
    c_prime = 32 * C3 * c_decr * zk + (32 * C3 * E + Q**4 * psi0 / 32) * geo + 4 * c_high * C2

    direct, major, i1, i2 = [], [], [], []
    direct_ok = True
    for t in ts:
        pc = lip_pieces(params, fhat, t, split=1 / t)
        m2 = 4 * weighted_tail(fhat, 1 / t, plancherel=True)
        maj = pc.majorant_below + m2
        direct.append(pc.point)
        major.append(maj)
        i1.append(pc.below)
        i2.append(pc.above + pc.tail)
        tiny = 1e-300
        direct_ok &= pc.below <= pc.majorant_below * (1 + rel_slack) + tiny
        direct_ok &= pc.above + 4 * pc.tail <= m2 * (1 + rel_slack) + tiny
    om2 = np.asarray(w(ts)) ** 2
    rhs = (c_prime * om2).tolist()
    chain_ok = bool(np.all(np.array(major) <= np.array(rhs) * (1 + rel_slack)))
    rsup, rinf = sup_inf(direct, rhs)
    L = float(np.max(np.sqrt(direct) / np.sqrt(om2)))
    extras = {
        "C_prime": c_prime,
        "premise_constant": c_prem,
        "C2": C2,
        "C3": C3,
        "E": E,
        "C_zk": zk,
        "C_decr": c_decr,
        "C_d2": c_d2,
        "c_high": c_high,
        "mu": mu,
        "L": L,
        "direct_le_majorant": bool(direct_ok),
        "majorant_le_chain": chain_ok,
        "max_majorant_over_omega2": float(np.max(np.array(major) / om2)),
    }
    return CheckReport(
        name, params, ts.tolist(), direct, rhs, rsup, rinf, hyps,
        decide(hyps, bool(direct_ok) and chain_ok, rsup), {"rel_slack": rel_slack}, extras,
    )


# ------------------------------------------------------------------- lipcor


def lipcor_modulus(alpha: float, gamma: float) -> Modulus:
    """t^α (ln 1/t)^γ as an order-2 modulus, on a δ₀ where it increases."""
    if gamma == 0:
        return standard_modulus("power", alpha, 0.0, 2.0, 0.5)
    d0 = 0.5 if gamma < 0 else min(0.5, 0.9 * math.exp(-gamma / alpha))
    return standard_modulus("power_log", alpha, gamma, 2.0, d0)


def lipcor_two_sided(params: DRParams, alpha: float, gamma: float = 0.0, t_grid=None, *, lam_max: float = 1e3, spread_max: float | None = None) -> CheckReport:
    """Both directions of the log-modulus equivalence on the recipe
    f̂(λ) = λ^{-(α+d/2)} (1 + ln λ)^γ 1{λ ≥ 1}.

    C₁ = sup ‖M_t f − f‖₂/ω(t) (Lip side), C₂ = sup tail/(t^{2α+d-1}(ln 1/t)^{2γ})
    (transform side); both must be finite with inf > 0, and the spread
    sup/inf of the Lip ratio must stay below spread_max (10, or 20 with a
    log factor).
    """
    if not 0 < alpha < 2:
        raise ValueError("alpha must lie in (0, 2)")
    ts = _grid(t_grid)
    d = params.d
    fhat = power_profile(params, alpha, gamma, lam_max=lam_max)
    w = lipcor_modulus(alpha, gamma)
    if ts.max() > w.delta0:
        raise ValueError(f"t_grid must lie below delta0 = {w.delta0:g}")
    if spread_max is None:
        spread_max = 10.0 if gamma == 0 else 20.0
    lips = np.array([lip_deviation_interval(params, fhat, t).value for t in ts])
    om = np.asarray(w(ts))
    tails = np.array([tail_energy(fhat, 1 / t) for t in ts])
    e = 2 * alpha + d - 1
    tail_scale = ts**e * np.log(1 / ts) ** (2 * gamma)
    if gamma == 0:
        closed = ts**e / e
    else:
        closed = np.array([integrate.quad(lambda u: math.exp(-(e + 1) * u + u) * (1 + u) ** (2 * gamma), math.log(1 / t), np.inf, epsabs=0, epsrel=1e-13, limit=200)[0] for t in ts])
    closed_err = float(np.max(np.abs(tails - closed) / closed))
    r_lip = lips / om
    r_tail = tails / tail_scale
    r_talpha = lips / ts**alpha
    rsup, rinf = float(r_lip.max()), float(r_lip.min())
    spread = rsup / rinf if rinf > 0 else math.inf
    spread_tail = float(r_tail.max() / r_tail.min())
    ok = rinf > 0 and math.isfinite(spread) and spread <= spread_max and math.isfinite(spread_tail) and r_tail.min() > 0
    extras = {
        "C1_lip": rsup,
        "C2_tail": float(r_tail.max()),
        "spread_lip": spread,
        "spread_tail": spread_tail,
        "spread_lip_over_t_alpha": float(r_talpha.max() / r_talpha.min()),
        "tail_closed_form_rel_err": closed_err,
        "delta0": w.delta0,
    }
    return CheckReport(
        "cor-lipcor", params, ts.tolist(), lips.tolist(), om.tolist(), rsup, rinf, [],
        decide([], ok, rsup), {"spread_max": spread_max}, extras,
    )


# -------------------------------------------------------------------- besov


def _gl(n):
    x, wt = leggauss(n)
    return x, wt


def besov_check(
    params: DRParams,
    f: RadialFunction | None,
    fhat: SpectralFunction,
    alpha: float,
    truncations: int = 64,
    *,
    lhs_nodes: int = 3,
    rhs_nodes: int = 8,
    stable_increment: float = STABLE_INCREMENT,
    fubini_tol: float = 1e-6,
) -> CheckReport:
    """LHS(ε) = ∫_ε^1 (‖M_t f − f‖₂/t^α)² dt/t against
    RHS(Λ) = ∫_0^Λ (∫_t^{2t} g) dt/t, g = |f̂|² λ^{2α} dens,
    for ε = 2^{-j}, Λ = 2^j, j = 1..truncations.

    RHS is assembled as I₁ (t ≤ 1/2) + I₂ (t > 1/2 via t = 1/(2s)) and
    compared with ln 2 ∫_0^Λ g + ∫_Λ^{2Λ} g ln(2Λ/λ) dλ at every level.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    J = int(truncations)
    a2 = 2 * alpha

    # LHS: panels [2^{-(j+1)}, 2^{-j}] in ln t
    x, wt = _gl(lhs_nodes)
    ln2 = math.log(2)
    lhs_inc = []
    for j in range(J):
        u = -(j + 0.5) * ln2 + 0.5 * ln2 * x
        t = np.exp(u)
        vals = [lip_deviation_interval(params, fhat, ti).value ** 2 / ti**a2 for ti in t]
        lhs_inc.append(0.5 * ln2 * float(np.dot(wt, vals)))
    lhs = np.cumsum(lhs_inc)

    G = _antiderivative(fhat, a2)

    def H(t):
        return G(2 * t) - G(t)

    x8, w8 = _gl(rhs_nodes)

    def octave(lo_exp):  # ∫ over t in [2^lo, 2^{lo+1}] of H(t) dt/t
        u = (lo_exp + 0.5) * ln2 + 0.5 * ln2 * x8
        return 0.5 * ln2 * float(np.dot(w8, H(np.exp(u))))

    # I₁: t ∈ (0, 1/2], down to 2^{-80} (H(t) = O(t^{3+2α}) below)
    i1 = sum(octave(-j - 2) for j in range(79))
    # I₂ over s = 1/(2t) ∈ [1/(2Λ), 1]: octave in s ↔ octave in t
    i2_inc = [octave(j - 1) for j in range(J + 1)]
    rhs = i1 + np.cumsum(i2_inc)[1:]
    lam = 2.0 ** np.arange(1, J + 1)
    fubini = np.array([ln2 * G(np.array([L]))[0] + _log_weighted(fhat, a2, L) for L in lam])
    fub_err = float(np.max(np.abs(rhs - fubini) / np.maximum(np.abs(fubini), 1e-300)))

    j_l = stabilization_index(lhs, stable_increment)
    j_r = stabilization_index(rhs, stable_increment)
    lhs_stable = j_l is not None
    rhs_stable = j_r is not None
    ok = (rhs_stable or not lhs_stable) and fub_err <= fubini_tol
    eps = 2.0 ** -np.arange(1, J + 1)
    rsup, rinf = sup_inf(lhs.tolist(), rhs.tolist())
    total = ln2 * weighted_integral(fhat, 0.0, math.inf, power=a2, plancherel=True)
    extras = {
        "lhs_stable": lhs_stable,
        "rhs_stable": rhs_stable,
        "lhs_stable_at_eps": float(eps[j_l]) if lhs_stable else math.nan,
        "rhs_stable_at_lambda": float(lam[j_r]) if rhs_stable else math.nan,
        "lhs_final": float(lhs[-1]),
        "rhs_final": float(rhs[-1]),
        "rhs_i1": i1,
        "rhs_limit_ln2_integral": total,
        "fubini_rel_err": fub_err,
    }
    return CheckReport(
        "thm-besov", params, eps.tolist(), lhs.tolist(), rhs.tolist(), rsup, rinf, [],
        decide([], ok, rsup), {"stable_increment": stable_increment, "fubini": fubini_tol}, extras,
    )


def _antiderivative(fhat: SpectralFunction, power: float):
    """x ↦ ∫_0^x |f̂|² λ^power dens dλ, vectorized."""
    lam = fhat.grid.nodes
    from .spherical import plancherel_density

    g = fhat.values**2 * lam**power * plancherel_density(fhat.params, lam)
    at_max = fhat.grid.integrate(g)

    def G(x):
        x = np.asarray(x, dtype=float)
        out = np.empty(x.shape)
        inside = x <= fhat.lam_max
        if np.any(inside):
            out[inside] = fhat.grid.antiderivative(g, x[inside])
        for i in np.flatnonzero(~inside):
            out.flat[i] = at_max + weighted_integral(fhat, fhat.lam_max, float(x.flat[i]), power=power, plancherel=True)
        return out

    return G


def _log_weighted(fhat: SpectralFunction, power: float, L: float) -> float:
    """∫_L^{2L} |f̂|² λ^power dens ln(2L/λ) dλ by Gauss-Legendre, split at Λ_max."""
    from .spherical import plancherel_density

    x, wt = _gl(32)
    cuts = [L, 2 * L]
    if L < fhat.lam_max < 2 * L:
        cuts = [L, fhat.lam_max, 2 * L]
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        lam = 0.5 * (a + b) + 0.5 * (b - a) * x
        g = fhat(lam) ** 2 * lam**power * plancherel_density(fhat.params, lam) * np.log(2 * L / lam)
        total += 0.5 * (b - a) * float(np.dot(wt, g))
    return total


# ------------------------------------------------------------------- holder


@dataclass(frozen=True)
class HolderParams:
    alpha: float
    p: float = 2.0
    q: float = 2.0
    beta_exp: float = 2.0

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must lie in (0, 1]")
        if not 1 < self.p <= 2:
            raise ValueError("p must lie in (1, 2]")
        if not self.p <= self.q <= self.p_prime:
            raise ValueError("q must lie in [p, p']")

    @property
    def p_prime(self) -> float:
        return self.p / (self.p - 1)

    @property
    def gamma_q(self) -> float:
        return 2 / self.q - 1

    def threshold(self, d: int) -> float:
        return d * self.p_prime / (d + self.alpha * self.p_prime)

    def admissible(self, d: int) -> bool:
        return self.threshold(d) < self.beta_exp <= self.p_prime


def holder_integrability(
    params: DRParams,
    f: RadialFunction | None,
    fhat: SpectralFunction,
    hp: HolderParams,
    *,
    betas=(1.4, 1.8, 2.0),
    t_grid=None,
    doublings: int = 40,
    stable_increment: float = STABLE_INCREMENT,
    rel_slack: float = REL_SLACK,
) -> CheckReport:
    """F = |f̂| ∈ L^β(dens) for β above d p'/(d + α p'), p = 2.

    I(β, Λ) = ∫_0^Λ F^β dens for Λ = 2^j must stabilize for admissible β;
    on the extremal profile F = λ^{-(α+d/2)} it must keep growing below
    the threshold.  Also checks φ(s) = ∫_1^s λ^{2β} F^β dens ≤
    C s^{(2-α)β + d(1-β/2)} on s ∈ [1, 1e3] with
    C = C₁^{β/2} (c_high/d)^{1-β/2}, C₁ = sup_s ∫_1^s λ⁴F² dens / s^{2(2-α)}.
    Rows: one per β; lhs = I(β, 2^J), rhs = I(β, 2^{J-1}).
    """
    if hp.p != 2:
        raise ValueError(
            "only p = 2 is supported on the transform side: for p != 2 the function F needs "
            "nonradial data (the direct-space Lip(alpha; p) premise is available via lip_deviation)"
        )
    ts = _grid(t_grid)
    d = params.d
    alpha = hp.alpha
    thr = hp.threshold(d)
    lips = np.array([lip_deviation_interval(params, fhat, t).value for t in ts])
    c_lip = float(np.max(lips / ts**alpha))
    hyps = [Hypothesis("lip_alpha_premise", math.isfinite(c_lip), c_lip)]
    tl = fhat.tail
    extremal = tl is not None and abs(tl.exponent - (alpha + d / 2)) < 1e-12 and tl.log_power == 0
    lam = 2.0 ** np.arange(0, doublings + 1)
    grid_beta, lhs, rhs = [], [], []
    extras = {"threshold": thr, "extremal_profile": extremal}
    ok = True
    for beta in sorted(set(float(b) for b in betas) | {float(hp.beta_exp)}):
        I = np.array([weighted_integral(fhat, 0.0, L, plancherel=True, beta=beta) for L in lam])
        j = stabilization_index(I, stable_increment)
        inc = np.diff(I)
        growing = j is None and bool(np.all(inc[-3:] > 0)) and bool(np.all(inc[-2:] >= inc[-3:-1] * (1 - 1e-9)))
        tag = f"beta_{beta:g}"
        extras[f"{tag}_stable"] = j is not None
        extras[f"{tag}_growing"] = growing
        extras[f"{tag}_increment_ratio"] = float(inc[-1] / inc[-2]) if inc[-2] > 0 else math.nan
        if thr < beta <= hp.p_prime:
            ok &= j is not None
        elif beta < thr and extremal:
            ok &= growing
        grid_beta.append(beta)
        lhs.append(float(I[-1]))
        rhs.append(float(I[-2]))
    # φ(s) device
    _, c_high = density_comparison(params)
    s = np.geomspace(1.0, 1e3, 61)[1:]
    base = np.array([weighted_integral(fhat, 1.0, si, power=4.0, plancherel=True) for si in s])
    c1 = float(np.max(base / s ** (2 * (2 - alpha))))
    worst = 0.0
    for beta in grid_beta:
        if not beta < hp.p_prime:
            continue
        phi = np.array([weighted_integral(fhat, 1.0, si, power=2 * beta, plancherel=True, beta=beta) for si in s])
        C = c1 ** (beta / 2) * (c_high / d) ** (1 - beta / 2)
        maj = C * s ** ((2 - alpha) * beta + d * (1 - beta / 2))
        worst = max(worst, float(np.max(phi / maj)))
    extras["phi_device_C1"] = c1
    extras["phi_device_worst_ratio"] = worst
    ok &= worst <= 1 + rel_slack
    rsup, rinf = sup_inf(lhs, rhs)
    return CheckReport(
        "thm-holder", params, grid_beta, lhs, rhs, rsup, rinf, hyps,
        decide(hyps, ok, rsup), {"stable_increment": stable_increment, "rel_slack": rel_slack}, extras,
    )
