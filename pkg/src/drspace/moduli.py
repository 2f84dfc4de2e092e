"""kth-order moduli of continuity and their classifications.

A modulus ω of order k is continuous with ω(0) = 0, almost increasing, and
ω(t)/t^k almost decreasing.  Everything here is decided on grids: sups
over log-spaced points, with membership in a class declared when the sup
is stable under refinement.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np
from numpy.polynomial.legendre import leggauss

log = logging.getLogger(__name__)

KINDS = ("power", "power_log", "power_loglog")
TAIL_KINDS = ("constant_extension", "bounded_below", "custom")
MAX_CONSTANT = 1e6
STABILITY = 0.05


class ModulusError(ValueError):
    pass


class IndexEstimateError(ArithmeticError):
    pass


class DyadicDivergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class PowerLogCore:
    """t^α (ln 1/t)^γ or t^α (ln ln 1/t)^γ."""

    kind: str
    alpha: float
    gamma: float = 0.0

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = t**self.alpha
            if self.kind == "power_log" and self.gamma:
                out = out * np.log(1 / t) ** self.gamma
            elif self.kind == "power_loglog" and self.gamma:
                out = out * np.log(np.log(1 / t)) ** self.gamma
        return np.where(t > 0, out, 0.0)

    @property
    def label(self) -> str:
        if self.kind == "power" or not self.gamma:
            return f"t^{self.alpha:g}"
        inner = "ln(1/t)" if self.kind == "power_log" else "ln ln(1/t)"
        return f"t^{self.alpha:g} ({inner})^{self.gamma:g}"


@dataclass(frozen=True)
class Modulus:
    order_k: float
    delta0: float
    core: Callable
    tail: str = "constant_extension"
    tail_value: float | None = None
    tail_fn: Callable | None = None
    label: str = ""
    c_incr: float = field(default=math.nan, compare=False)
    c_decr: float = field(default=math.nan, compare=False)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        near = t <= self.delta0
        out = np.empty(t.shape)
        out[near] = self.core(t[near])
        if np.any(~near):
            if self.tail == "constant_extension":
                out[~near] = float(self.core(self.delta0))
            elif self.tail == "bounded_below":
                out[~near] = self.tail_value
            else:
                out[~near] = self.tail_fn(t[~near])
        return out[()] if out.ndim == 0 else out

    def at_order(self, k: float) -> "Modulus":
        """The same function viewed as a modulus of order k (re-audited)."""
        return _audited(replace(self, order_k=float(k)))


def audit_grid(delta0: float, decades: float = 12, per_decade: int = 20) -> np.ndarray:
    return np.geomspace(delta0 * 10.0**-decades, delta0, int(decades * per_decade) + 1)


def monotonicity_audit(w: Modulus, grid=None, order: float | None = None) -> tuple[float, float]:
    """Smallest (C_incr, C_decr) with ω(t) ≤ C_incr ω(s) and
    ω(s)/s^k ≤ C_decr ω(t)/t^k for all grid pairs t ≤ s."""
    t = audit_grid(w.delta0) if grid is None else np.sort(np.asarray(grid, dtype=float))
    if np.any(t <= 0) or np.any(t > w.delta0 * (1 + 1e-12)):
        raise ValueError("audit grid must lie in (0, delta0]")
    k = w.order_k if order is None else order
    v = np.asarray(w(t), dtype=float)
    if np.any(~np.isfinite(v)) or np.any(v <= 0):
        raise ModulusError(f"{w.label or 'modulus'} is not positive and finite on (0, delta0]")
    c_incr = float(np.max(np.maximum.accumulate(v) / v))
    g = np.log(v) - k * np.log(t)
    c_decr = float(np.exp(np.max(g - np.minimum.accumulate(g))))
    return c_incr, c_decr


def _almost_increasing_constant(values) -> float:
    v = np.asarray(values, dtype=float)
    return float(np.max(np.maximum.accumulate(v) / v))


def _audited(w: Modulus) -> Modulus:
    c_incr, c_decr = monotonicity_audit(w)
    if c_incr > MAX_CONSTANT or c_decr > MAX_CONSTANT:
        raise ModulusError(
            f"{w.label or 'modulus'} fails the order-{w.order_k:g} monotonicity audit "
            f"(C_incr={c_incr:.3g}, C_decr={c_decr:.3g})"
        )
    return replace(w, c_incr=c_incr, c_decr=c_decr)


def make_modulus(
    core: Callable,
    order_k: float,
    delta0: float,
    *,
    tail: str = "constant_extension",
    tail_value: float | None = None,
    tail_fn: Callable | None = None,
    label: str = "",
) -> Modulus:
    if not order_k > 0 or not delta0 > 0:
        raise ModulusError("order_k and delta0 must be positive")
    if tail not in TAIL_KINDS:
        raise ModulusError(f"tail must be one of {TAIL_KINDS}")
    if tail == "bounded_below" and not (tail_value is not None and tail_value > 0):
        raise ModulusError("bounded_below tail needs a positive value")
    if tail == "custom" and tail_fn is None:
        raise ModulusError("custom tail needs a callable")
    if abs(float(core(0.0))) > 0:
        raise ModulusError("a modulus must vanish at 0")
    return _audited(Modulus(float(order_k), float(delta0), core, tail, tail_value, tail_fn, label))


def standard_modulus(
    kind: str,
    alpha: float,
    gamma: float = 0.0,
    k: float = 1.0,
    delta0: float = 0.5,
    *,
    tail: str = "constant_extension",
    tail_value: float | None = None,
    strict: bool = True,
) -> Modulus:
    """The classical examples t^α, t^α(ln 1/t)^γ, t^α(ln ln 1/t)^γ.

    strict (the default) insists on α ∈ (0, k), the range where these are
    Zygmund-Bari-Stechkin examples; strict=False only requires a valid
    order-k modulus (used to build boundary cases such as t^k).
    """
    if kind not in KINDS:
        raise ModulusError(f"kind must be one of {KINDS}")
    if strict and not 0 < alpha < k:
        raise ModulusError(f"alpha must lie in (0, k) = (0, {k:g}), got {alpha:g}")
    if not alpha > 0:
        raise ModulusError("alpha must be positive")
    if kind == "power_log" and not delta0 < 1:
        raise ModulusError("power_log needs delta0 < 1 so that ln(1/t) > 0")
    if kind == "power_loglog" and not delta0 < 1 / math.e:
        raise ModulusError("power_loglog needs delta0 < 1/e so that ln ln(1/t) > 0")
    core = PowerLogCore(kind, float(alpha), float(gamma) if kind != "power" else 0.0)
    return make_modulus(core, k, delta0, tail=tail, tail_value=tail_value, label=core.label)


# ---------------------------------------------------------------- indices


class MOIndex(NamedTuple):
    value: float
    error: float


_MO_LEVELS = (25, 50, 100)  # t = δ₀ 10^{-j}
_MO_STEPS = (0.5, 0.25, 0.125)


@lru_cache(maxsize=256)
def mo_lower_index(w: Modulus) -> MOIndex:
    """Lower Matuszewska-Orlicz index, extrapolated from finite t and h.

    For each h and depth j the liminf is taken over a decade window below
    δ₀ 10^{-j}; the h-estimates are then extrapolated to t → 0 by a
    quadratic fit in 1/ln(1/t).  The spread over h is the error bar.
    """
    window = 10.0 ** -np.linspace(0, 1, 11)
    est = []
    for h in _MO_STEPS:
        xs, ys = [], []
        for j in _MO_LEVELS:
            t = w.delta0 * 10.0**-j * window
            r = np.asarray(w(h * t)) / np.asarray(w(t))
            if np.any(~np.isfinite(r)) or np.any(r <= 0):
                raise IndexEstimateError(f"{w.label or 'modulus'}: cannot evaluate scaling ratios near 0")
            xs.append(1 / math.log(1 / float(t[0])))
            ys.append(math.log(float(r.min())) / math.log(h))
        quad = np.polyfit(xs, ys, 2)[-1]
        lin = np.polyfit(xs[1:], ys[1:], 1)[-1]
        est.append((quad, abs(quad - lin)))
    vals = np.array([e[0] for e in est])
    err = float(vals.max() - vals.min() + max(e[1] for e in est))
    if err > 0.05:
        raise IndexEstimateError(f"{w.label or 'modulus'}: MO index extrapolation does not stabilize (spread {err:.3g})")
    return MOIndex(float(vals[-1]), err)


# ---------------------------------------------------------------- Zygmund


class ZygmundResult(NamedTuple):
    member: bool
    C: float


def _log_panels(w: Modulus, lo: float, hi: float, per_decade: int, integrand):
    """Nodes t_j (log-spaced from lo to hi) and ∫_{t_j}^{t_{j+1}} integrand(s) ds."""
    n = int(round(math.log10(hi / lo) * per_decade))
    u = np.linspace(math.log(lo), math.log(hi), n + 1)
    x, wt = leggauss(8)
    mid = 0.5 * (u[1:] + u[:-1])
    half = 0.5 * np.diff(u)
    uu = mid[:, None] + half[:, None] * x[None, :]
    s = np.exp(uu)
    pieces = (integrand(s) * s * wt[None, :]).sum(axis=1) * half
    return np.exp(u), pieces


def _z0_sup(w: Modulus, decades: float, per_decade: int, skip: float, mu: float) -> float:
    t0 = w.delta0 * 10.0**-decades
    t, pieces = _log_panels(w, t0, w.delta0, per_decade, lambda s: w(s) / s)
    near = _almost_increasing_constant(np.asarray(w(t)) / t**mu) * float(w(t0)) / mu
    I = near + np.concatenate([[0.0], np.cumsum(pieces)])
    use = t >= t0 * 10.0**skip
    return float(np.max(I[use] / np.asarray(w(t[use]))))


def zygmund_z0(w: Modulus, *, decades: float = 15, per_decade: int = 8) -> ZygmundResult:
    """sup_t (∫_0^t ω(s)/s ds) / ω(t) on (0, δ₀], and whether it is stable.

    The piece [0, t₀] below the grid is bounded via ω(s) ≤ C (s/t₀)^μ ω(t₀)
    with μ just under the MO index; the sup is taken well above t₀ so that
    bound does not dominate.
    """
    try:
        m = mo_lower_index(w).value
    except IndexEstimateError as e:
        log.warning("Z0: %s", e)
        return ZygmundResult(False, math.inf)
    if not m > 1e-3:
        log.warning("Z0: MO index %.3g is not positive; the near-0 integral does not converge", m)
        return ZygmundResult(False, math.inf)
    mu = 0.95 * m
    c = _z0_sup(w, decades, per_decade, decades / 2, mu)
    c_ref = _z0_sup(w, decades * 4 / 3, 2 * per_decade, decades * 2 / 3, mu)
    member = math.isfinite(c) and abs(c_ref - c) <= STABILITY * c
    log.info("Z0 %s: C=%.6g refined C=%.6g member=%s", w.label, c, c_ref, member)
    return ZygmundResult(member, c_ref)


def _zk_sup(w: Modulus, decades: float, per_decade: int) -> float:
    k = w.order_k
    t, pieces = _log_panels(w, w.delta0 * 10.0**-decades, w.delta0, per_decade, lambda s: w(s) / s ** (1 + k))
    I = np.concatenate([np.cumsum(pieces[::-1])[::-1], [0.0]])
    return float(np.max(t**k * I / np.asarray(w(t))))


def zygmund_zk(w: Modulus, *, decades: float = 15, per_decade: int = 8) -> ZygmundResult:
    """sup_t t^k (∫_t^{δ₀} ω(s) s^{-1-k} ds) / ω(t), with refinement check."""
    c = _zk_sup(w, decades, per_decade)
    c_ref = _zk_sup(w, decades * 4 / 3, 2 * per_decade)
    member = math.isfinite(c) and abs(c_ref - c) <= STABILITY * c
    log.info("Zk %s: C=%.6g refined C=%.6g member=%s", w.label, c, c_ref, member)
    return ZygmundResult(member, c_ref)


# -------------------------------------------------------------- dyadic sums


class DyadicSum(NamedTuple):
    total: float
    bound: float
    constant: float  # C_μ², C_μ the almost-increasing constant of ω(s)/s^μ
    n_terms: int


def dyadic_sum_bound(w: Modulus, t: float, mu: float, *, max_terms: int = 100000) -> DyadicSum:
    """Σ_i ω(t/2^i)² and its geometric bound C_μ² ω(t)² / (1 − 2^{-2μ})."""
    if not t > 0 or not mu > 0:
        raise ValueError("t and mu must be positive")
    m = mo_lower_index(w)
    if not mu < m.value:
        raise ValueError(f"mu = {mu:g} must be below the MO lower index {m.value:.6g}")
    total = 0.0
    n = 0
    for n in range(max_terms):
        term = float(w(t * 2.0**-n)) ** 2
        total += term
        if n > 0 and term <= 1e-10 * total:
            break
    else:
        raise DyadicDivergenceError(f"dyadic sum for {w.label} at t={t:g} did not converge in {max_terms} terms")
    s = t * 2.0 ** -np.arange(max(n + 1, 60))[::-1]
    c = _almost_increasing_constant(np.asarray(w(s)) / s**mu) ** 2
    bound = c * float(w(t)) ** 2 / (1 - 2.0 ** (-2 * mu))
    return DyadicSum(total, bound, c, n + 1)


def almost_increasing_constant(w: Modulus, mu: float, t_hi: float | None = None, decades: float = 15) -> float:
    """Almost-increasing constant of ω(s)/s^μ on a log grid below t_hi."""
    hi = w.delta0 if t_hi is None else t_hi
    s = np.geomspace(hi * 10.0**-decades, hi, int(decades * 20) + 1)
    return _almost_increasing_constant(np.asarray(w(s)) / s**mu)


def almost_decreasing_constant(w: Modulus, order: float, decades: float = 15) -> float:
    """Almost-decreasing constant of ω(s)/s^order on (0, δ₀]."""
    return monotonicity_audit(w, audit_grid(w.delta0, decades), order)[1]
