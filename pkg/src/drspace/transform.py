"""Radial functions, their spherical transforms, and the spherical mean.

Conventions: for a radial f on S,

    f̂(λ) = ∫_0^∞ f(t) φ_λ(t) A(t) dt,
    f(t)  = C ∫_0^∞ f̂(λ) φ_λ(t) |c(λ)|^{-2} dλ,

with C the calibrated Plancherel constant (folded into
:func:`~drspace.spherical.plancherel_density`).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import mpmath
import numpy as np
from scipy import integrate

from .params import DRParams, volume_density
from .quadrature import CompositeGrid, merge_edges, spectral_grid, subdivide, uniform_grid
from .spherical import density_limits, plancherel_density, raw_density, spherical_phi_matrix

log = logging.getLogger(__name__)

SMOOTHNESS_HINTS = ("smooth", "compactly_supported", "gaussian_like")
FLAG_TOL = 1e-8
TAIL_FIT_TOL = 0.1
NEGLIGIBLE = 1e-10
LIP_PRODUCT = 64.0  # λt beyond which |1 − φ_λ(t)|² is bracketed instead of computed
LIP_WIDTH = 2.0  # λ-panel width in units of 1/t


class TailDivergenceError(ValueError):
    pass


# ---------------------------------------------------------------- radial side


@dataclass(frozen=True, eq=False)
class RadialFunction:
    params: DRParams
    grid: CompositeGrid
    values: np.ndarray
    smoothness_hint: str = "smooth"

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (len(self.grid),):
            raise ValueError(f"expected {len(self.grid)} samples, got shape {v.shape}")
        if self.grid.lo < 0:
            raise ValueError("radial grids live on [0, T_max]")
        if self.smoothness_hint not in SMOOTHNESS_HINTS:
            raise ValueError(f"smoothness_hint must be one of {SMOOTHNESS_HINTS}")
        if not np.all(np.isfinite(v)):
            raise ValueError("radial samples must be finite")
        if not math.isfinite(self.grid.integrate(v * v * volume_density(self.params, self.grid.nodes))):
            raise ValueError("radial function is not square integrable against A(t)")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def T_max(self) -> float:
        return self.grid.hi

    @property
    def t(self) -> np.ndarray:
        return self.grid.nodes

    @property
    def samples(self) -> list:
        return list(zip(self.grid.nodes.tolist(), self.values.tolist()))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        inside = t <= self.T_max
        out = np.zeros(t.shape)
        if np.any(inside):
            out[inside] = self.grid.interpolate(self.values, np.maximum(t[inside], self.grid.lo))
        return out

    def with_values(self, values, smoothness_hint=None) -> "RadialFunction":
        return RadialFunction(self.params, self.grid, values, smoothness_hint or self.smoothness_hint)

    def scaled(self, c: float) -> "RadialFunction":
        return self.with_values(c * self.values)

    def _same_grid(self, other):
        if not isinstance(other, RadialFunction) or other.grid != self.grid:
            raise ValueError("radial functions must share a grid")

    def __add__(self, other):
        self._same_grid(other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other):
        self._same_grid(other)
        return self.with_values(self.values - other.values)

    def __rmul__(self, c):
        return self.scaled(float(c))


def radial_function(params: DRParams, fn, *, T_max=12.0, panel_width=0.25, order=20, hint="smooth", grid=None):
    """Sample a callable on a composite grid over [0, T_max]."""
    g = grid if grid is not None else uniform_grid(0.0, T_max, panel_width, order)
    return RadialFunction(params, g, np.asarray(fn(g.nodes), dtype=float), hint)


def lp_norm(params: DRParams, f: RadialFunction, p: float) -> float:
    """(∫ |f|^p A dt)^{1/p}."""
    if not p >= 1:
        raise ValueError("p must be at least 1")
    A = volume_density(params, f.grid.nodes)
    return f.grid.integrate(np.abs(f.values) ** p * A) ** (1.0 / p)


# -------------------------------------------------------------- spectral side


@dataclass(frozen=True)
class TailModel:
    """|f̂(λ)| ≈ coefficient · λ^{-exponent} · (log_shift + ln λ)^{-log_power}."""

    exponent: float
    log_power: float = 0.0
    coefficient: float = 1.0
    log_shift: float = 0.0

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float)
        out = self.coefficient * lam ** (-self.exponent)
        if self.log_power:
            out = out * (self.log_shift + np.log(lam)) ** (-self.log_power)
        return out

    def scaled(self, c: float) -> "TailModel":
        return replace(self, coefficient=abs(c) * self.coefficient)

    def power_integral(self, s: float, power: float = 0.0, beta: float = 2.0) -> float:
        """∫_s^∞ model(λ)^β λ^power dλ in closed form."""
        if self.coefficient == 0:
            return 0.0
        a = beta * self.exponent - power
        b = beta * self.log_power
        c = self.coefficient**beta
        u = self.log_shift + math.log(s)
        if b and u <= 0:
            raise ValueError(f"tail model log factor is not positive at lambda={s:g}")
        if abs(a - 1) <= 1e-12:
            if b > 1:
                return c * u ** (1 - b) / (b - 1)
            raise TailDivergenceError(
                f"modeled tail diverges: need log power {b:g} > 1 when {beta:g}*{self.exponent:g} - {power:g} = 1"
            )
        if a < 1:
            raise TailDivergenceError(
                f"modeled tail diverges: need {beta:g}*{self.exponent:g} - {power:g} > 1 (got {a:g})"
            )
        if not b:
            return c * s ** (1 - a) / (a - 1)
        val = mpmath.exp((a - 1) * self.log_shift) * mpmath.power(a - 1, b - 1) * mpmath.gammainc(1 - b, (a - 1) * u)
        return c * float(val)

    def integral_between(self, a: float, b: float, power: float = 0.0, beta: float = 2.0) -> float:
        """∫_a^b model(λ)^β λ^power dλ; b may be infinite."""
        if math.isinf(b):
            return self.power_integral(a, power, beta)
        if b <= a or self.coefficient == 0:
            return 0.0
        A = beta * self.exponent - power
        c = self.coefficient**beta
        if not self.log_power:
            if abs(A - 1) <= 1e-12:
                return c * math.log(b / a)
            return c * (a ** (1 - A) - b ** (1 - A)) / (A - 1)
        if A > 1:
            return self.power_integral(a, power, beta) - self.power_integral(b, power, beta)
        f = lambda u: float(self(math.exp(u))) ** beta * math.exp(u * (power + 1))
        return float(integrate.quad(f, math.log(a), math.log(b), limit=200, epsabs=0, epsrel=1e-12)[0])

    def plancherel_integral(self, params: DRParams, a: float, b: float = math.inf, power: float = 0.0, beta: float = 2.0) -> float:
        """∫_a^b model^β λ^power |c(λ)|^{-2} dλ (calibrated).

        The density is split as K λ^{d-1} + remainder; the first part is
        closed form and the remainder, O(λ^{d-3}), goes to adaptive quadrature.
        """
        if self.coefficient == 0 or b <= a:
            return 0.0
        K = density_limits(params)[1]
        d = params.d
        main = K * self.integral_between(a, b, power + d - 1, beta)

        def rem(u):
            lam = math.exp(u)
            return float(self(lam)) ** beta * lam ** (power + 1) * (float(plancherel_density(params, lam)) - K * lam ** (d - 1))

        # the remainder is O(λ^{-2}) relative to the main part, so six
        # decades past `a` it is below double-precision noise
        hi = min(math.log(b), math.log(max(a, 1.0)) + 14)
        if hi <= math.log(a):
            return main
        corr, _ = integrate.quad(rem, math.log(a), hi, limit=200, epsabs=1e-14 * abs(main), epsrel=1e-10)
        return main + corr


@dataclass(frozen=True, eq=False)
class SpectralFunction:
    params: DRParams
    grid: CompositeGrid
    values: np.ndarray
    tail: TailModel | None = None
    est_error: float = 0.0
    flagged: bool = False

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (len(self.grid),):
            raise ValueError(f"expected {len(self.grid)} samples, got shape {v.shape}")
        if self.grid.lo < 0:
            raise ValueError("spectral grids live on [0, lambda_max]")
        if not np.all(np.isfinite(v)):
            raise ValueError("spectral samples must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.tail is not None:
            self._check_tail_fit()

    def _check_tail_fit(self):
        lam = self.grid.nodes
        sel = lam >= self.lam_max / 10
        got = np.abs(self.values[sel])
        want = self.tail(lam[sel])
        if self.tail.coefficient == 0:
            scale = max(float(np.abs(self.values).max()), 1e-300)
            bad = np.any(got > NEGLIGIBLE * scale)
        else:
            bad = np.any(np.abs(got - want) > TAIL_FIT_TOL * want)
        if bad:
            raise ValueError("samples on the last decade do not follow the tail model within 10%")

    @property
    def lam_max(self) -> float:
        return self.grid.hi

    @property
    def lam(self) -> np.ndarray:
        return self.grid.nodes

    @property
    def samples(self) -> list:
        return list(zip(self.grid.nodes.tolist(), self.values.tolist()))

    @property
    def negligible_beyond(self) -> bool:
        """True when the samples have died out at Λ_max relative to the peak."""
        scale = float(np.abs(self.values).max())
        end = abs(float(self.grid.interpolate(self.values, self.lam_max)))
        return scale == 0 or max(end, abs(float(self.values[-1]))) <= NEGLIGIBLE * scale

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float)
        out = np.zeros(lam.shape)
        inside = lam <= self.lam_max
        if np.any(inside):
            out[inside] = self.grid.interpolate(self.values, np.maximum(lam[inside], self.grid.lo))
        if np.any(~inside):
            if self.tail is not None:
                sign = 1.0 if self.values[-1] >= 0 else -1.0
                out[~inside] = sign * self.tail(lam[~inside])
            elif not self.negligible_beyond:
                raise ValueError("evaluation beyond lambda_max needs a tail model")
        return out

    def with_values(self, values, tail="keep") -> "SpectralFunction":
        return SpectralFunction(self.params, self.grid, values, self.tail if tail == "keep" else tail)

    def scaled(self, c: float) -> "SpectralFunction":
        tail = None if self.tail is None else self.tail.scaled(c)
        return SpectralFunction(self.params, self.grid, c * self.values, tail, abs(c) * self.est_error, self.flagged)


def _require_tail_or_negligible(fhat: SpectralFunction):
    if fhat.tail is None and not fhat.negligible_beyond:
        raise ValueError(
            "spectral samples are not negligible at lambda_max; attach a tail model or extend the grid"
        )


def default_lambda_grid(f: RadialFunction) -> CompositeGrid:
    lam_max = 40.0 if f.smoothness_hint == "gaussian_like" else 60.0
    return spectral_grid(lam_max, order=20, max_width=2.0, lam_floor=2.0**-6)


def spherical_transform(params: DRParams, f: RadialFunction, lambda_grid=None, *, tail: TailModel | None = None) -> SpectralFunction:
    """f̂(λ) = ∫ f(t) φ_λ(t) A(t) dt on the nodes of `lambda_grid`.

    `lambda_grid` is a CompositeGrid or a float Λ_max (default grid shape);
    None picks a default from the smoothness hint.
    """
    if lambda_grid is None:
        lambda_grid = default_lambda_grid(f)
    elif not isinstance(lambda_grid, CompositeGrid):
        lambda_grid = spectral_grid(float(lambda_grid), order=20, max_width=2.0, lam_floor=2.0**-6)
    t = f.grid.nodes
    fa = f.values * volume_density(params, t)
    P, Perr = spherical_phi_matrix(params, lambda_grid.nodes, t, return_error=True)
    vals = P @ (f.grid.weights * fa)
    quad_err = f.grid.tail_estimate(P * fa[None, :]).sum(axis=-1)
    phi_err = Perr @ (f.grid.weights * np.abs(fa))
    scale = max(f.grid.integrate(np.abs(fa)), 1e-300)
    err = float(np.max(quad_err + phi_err) / scale)
    if err > FLAG_TOL:
        log.warning("spherical transform error estimate %.3e exceeds %.0e", err, FLAG_TOL)
    return SpectralFunction(params, lambda_grid, vals, tail, err, err > FLAG_TOL)


def inverse_transform(params: DRParams, g: SpectralFunction, t_grid=None) -> RadialFunction:
    """f(t) = ∫ g(λ) φ_λ(t) |c(λ)|^{-2} dλ, truncated at Λ_max."""
    d = params.d
    if g.tail is not None and g.tail.coefficient != 0 and g.tail.exponent <= d / 2:
        raise TailDivergenceError(
            f"inverse transform needs tail decay faster than lambda^(-d/2) = lambda^(-{d / 2:g}); "
            f"tail exponent is {g.tail.exponent:g}"
        )
    _require_tail_or_negligible(g)
    if t_grid is None:
        t_grid = uniform_grid(0.0, 12.0, 0.25, 20)
    elif not isinstance(t_grid, CompositeGrid):
        raise TypeError("t_grid must be a CompositeGrid")
    lam = g.grid.nodes
    P = spherical_phi_matrix(params, lam, t_grid.nodes)
    vals = (g.grid.weights * g.values * plancherel_density(params, lam)) @ P
    return RadialFunction(params, t_grid, vals, "smooth")


def calibrate_plancherel(params: DRParams) -> float:
    """Plancherel constant from Parseval on the reference profile e^{-t²/2}."""
    f = radial_function(params, lambda t: np.exp(-(t**2) / 2), hint="gaussian_like")
    grid = spectral_grid(16.0, order=20, max_width=0.5, lam_floor=2.0**-6)
    fh = spherical_transform(params, f, grid)
    direct = f.grid.integrate(f.values**2 * volume_density(params, f.grid.nodes))
    spectral = grid.integrate(fh.values**2 * raw_density(params, grid.nodes))
    return direct / spectral


def parseval_sides(params: DRParams, f: RadialFunction, fhat: SpectralFunction) -> tuple[float, float]:
    """(∫|f|²A dt, ∫|f̂|²|c|^{-2} dλ)."""
    direct = f.grid.integrate(f.values**2 * volume_density(params, f.grid.nodes))
    return direct, spectral_l2_sq(params, fhat)


def spectral_l2_sq(params: DRParams, fhat: SpectralFunction) -> float:
    lam = fhat.grid.nodes
    core = fhat.grid.integrate(fhat.values**2 * plancherel_density(params, lam))
    if fhat.tail is not None:
        return core + fhat.tail.plancherel_integral(params, fhat.lam_max)
    _require_tail_or_negligible(fhat)
    return core


def spherical_mean(params: DRParams, f: RadialFunction, t: float, *, fhat: SpectralFunction | None = None, lambda_grid=None) -> RadialFunction:
    """M_t f, computed through the multiplier φ_λ(t); M_0 f = f."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0:
        return f
    if fhat is None:
        fhat = spherical_transform(params, f, lambda_grid)
    phi = spherical_phi_matrix(params, fhat.grid.nodes, [t])[:, 0]
    return inverse_transform(params, fhat.with_values(fhat.values * phi), f.grid)


# ---------------------------------------------------------- ‖M_t f − f‖ pieces


class LipPieces(NamedTuple):
    """Pieces of ‖M_t f − f‖₂² split at λ = split.

    below / above: ∫|1−φ_λ(t)|²|f̂|² dens over [0, split] and
    [split, cutoff]; tail: ∫_{cutoff}^∞ |f̂|² dens (modeled), where the
    bracket |1−φ|² is only known to lie in [0, 4].  majorant_below is
    ∫_0^{split} ((t²/2)(4λ²+Q²/4))² |f̂|² dens.
    """

    below: float
    above: float
    tail: float
    cutoff: float
    majorant_below: float

    @property
    def point(self) -> float:
        return self.below + self.above + self.tail

    @property
    def lower(self) -> float:
        return self.below + self.above

    @property
    def upper(self) -> float:
        return self.below + self.above + 4 * self.tail


def lip_pieces(params: DRParams, fhat: SpectralFunction, t: float, *, split: float | None = None) -> LipPieces:
    if not t > 0:
        raise ValueError("t must be positive")
    _require_tail_or_negligible(fhat)
    has_tail = fhat.tail is not None and fhat.tail.coefficient != 0
    cutoff = max(fhat.lam_max, LIP_PRODUCT / t) if has_tail else fhat.lam_max
    width = LIP_WIDTH / t
    inner = fhat.grid.edges
    outer = []
    if cutoff > fhat.lam_max:
        outer = fhat.lam_max * 2.0 ** np.arange(1, int(np.ceil(np.log2(cutoff / fhat.lam_max))) + 1)
        outer = np.append(outer[outer < cutoff], cutoff)
    extra = [split] if split is not None and 0 < split < cutoff else []
    edges = subdivide(merge_edges(inner, outer, extra), width)
    grid = CompositeGrid(edges, 16)
    lam = grid.nodes
    fv = fhat(lam)
    dens = plancherel_density(params, lam)
    phi = spherical_phi_matrix(params, lam, [t])[:, 0]
    base = fv * fv * dens * grid.weights
    g = (1 - phi) ** 2 * base
    if split is None:
        below, above, maj = float(g.sum()), 0.0, 0.0
    else:
        lo = lam <= split
        below = float(g[lo].sum())
        above = float(g[~lo].sum())
        Q = float(params.Q)
        maj = float(np.sum((t * t / 2 * (4 * lam[lo] ** 2 + Q * Q / 4)) ** 2 * base[lo]))
    tail = fhat.tail.plancherel_integral(params, cutoff) if has_tail else 0.0
    return LipPieces(below, above, tail, cutoff, maj)


class LipDeviation(NamedTuple):
    lower: float
    value: float
    upper: float


def lip_deviation_interval(params: DRParams, fhat: SpectralFunction, t: float) -> LipDeviation:
    """‖M_t f − f‖₂ with the rigorous bracket from the modeled tail."""
    pc = lip_pieces(params, fhat, t)
    return LipDeviation(math.sqrt(pc.lower), math.sqrt(pc.point), math.sqrt(pc.upper))


def lip_deviation(params: DRParams, fhat: SpectralFunction, t: float, p: float = 2.0, f: RadialFunction | None = None) -> float:
    """‖M_t f − f‖_p.  p = 2 is computed on the spectral side (point
    estimate; see lip_deviation_interval); other p go through the direct
    space and need `f`."""
    if p == 2:
        return lip_deviation_interval(params, fhat, t).value
    if f is None:
        raise ValueError("p != 2 needs the radial function itself")
    mt = spherical_mean(params, f, t, fhat=fhat)
    return lp_norm(params, mt - f, p)


# ------------------------------------------------------------ tail integrals


WEIGHTS = ("flat", "power_dminus1", "plancherel")


def weighted_integral(fhat: SpectralFunction, a: float, b: float = math.inf, *, power: float = 0.0, plancherel: bool = False, beta: float = 2.0) -> float:
    """∫_a^b |f̂(λ)|^β λ^power w(λ) dλ, w = 1 or the Plancherel density.

    Samples are integrated up to Λ_max; beyond it the tail model is
    integrated analytically (an absent model is only allowed when the
    samples are negligible at Λ_max).
    """
    if not a >= 0 or b <= a:
        return 0.0
    total = 0.0
    if a < fhat.lam_max:
        lam = fhat.grid.nodes
        g = np.abs(fhat.values) ** beta * lam**power
        if plancherel:
            g = g * plancherel_density(fhat.params, lam)
        total += fhat.grid.partial(g, a, min(b, fhat.lam_max))
    if b > fhat.lam_max:
        lo = max(a, fhat.lam_max)
        if fhat.tail is None:
            if not fhat.negligible_beyond:
                raise ValueError("integral beyond lambda_max needs a tail model")
        elif plancherel:
            total += fhat.tail.plancherel_integral(fhat.params, lo, b, power, beta)
        else:
            total += fhat.tail.integral_between(lo, b, power, beta)
    return total


def weighted_tail(fhat: SpectralFunction, s: float, *, power: float = 0.0, plancherel: bool = False, beta: float = 2.0) -> float:
    """∫_s^∞ |f̂(λ)|^β λ^power w(λ) dλ."""
    if not s > 0:
        raise ValueError("s must be positive")
    return weighted_integral(fhat, s, math.inf, power=power, plancherel=plancherel, beta=beta)
