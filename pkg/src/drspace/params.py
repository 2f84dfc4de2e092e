"""Structural constants of a Damek-Ricci space S = N ⋊ A.

N is an H-type group with Lie algebra 𝔳 ⊕ 𝔷, dim 𝔳 = m, dim 𝔷 = k (the
center dimension is sometimes written l; here it is always k).
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy import integrate
from scipy.special import betaln

from . import jacobi

log = logging.getLogger(__name__)

EIGEN_TOL = 1e-4
EIGEN_LAMBDAS = (0.5, 1.0, 2.0)
EIGEN_TS = tuple(np.linspace(0.2, 3.0, 57))


class IndexCandidate(NamedTuple):
    label: str
    alpha: Fraction
    beta: Fraction
    worst_ratio: float  # max |residual| / (EIGEN_TOL (1 + λ²))
    step: float

    @property
    def passed(self) -> bool:
        return self.worst_ratio <= 1.0


class IndexResolutionError(RuntimeError):
    pass


class PoissonQuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class DRParams:
    m: int
    k: int
    Q: Fraction
    rho: Fraction
    d: int
    jacobi_alpha: Fraction
    jacobi_beta: Fraction
    poisson_C: float | None = None
    plancherel_C: float | None = None
    index_audit: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.Q != Fraction(self.m, 2) + self.k or self.rho != self.Q / 2 or self.d != self.m + self.k + 1:
            raise ValueError("derived constants inconsistent with (m, k)")
        if self.jacobi_alpha + self.jacobi_beta + 1 != self.Q:
            raise ValueError("Jacobi indices must satisfy alpha + beta + 1 = Q")
        if not self.jacobi_alpha > self.jacobi_beta > Fraction(-1, 2):
            raise ValueError("Jacobi indices must satisfy alpha > beta > -1/2")

    @property
    def indices(self) -> tuple[float, float]:
        return float(self.jacobi_alpha), float(self.jacobi_beta)

    @property
    def calibrated(self) -> bool:
        return self.plancherel_C is not None

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "k": self.k,
            "Q": str(self.Q),
            "rho": str(self.rho),
            "d": self.d,
            "jacobi_alpha": str(self.jacobi_alpha),
            "jacobi_beta": str(self.jacobi_beta),
            "poisson_C": self.poisson_C,
            "plancherel_C": self.plancherel_C,
        }


@dataclass(frozen=True)
class NPoint:
    X: tuple
    Z: tuple

    def __post_init__(self):
        X = tuple(float(x) for x in np.atleast_1d(self.X))
        Z = tuple(float(z) for z in np.atleast_1d(self.Z))
        if not all(map(math.isfinite, X + Z)):
            raise ValueError("NPoint entries must be finite")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Z", Z)


def _validate(m, k):
    if not isinstance(m, (int, np.integer)) or not isinstance(k, (int, np.integer)):
        raise ValueError(f"m and k must be integers, got m={m!r}, k={k!r}")
    if m < 2:
        raise ValueError(f"m must be at least 2 (got m={m})")
    if m % 2:
        raise ValueError(f"m must be even (got m={m})")
    if k < 1:
        raise ValueError(f"k must be at least 1 (got k={k})")


def index_candidates(m: int, k: int) -> list[IndexCandidate]:
    """Audit both index conventions with the eigen-residual oracle.

    The "literal" candidate α = (m+k+1)/2 is the one written down in the
    source literature; the "consistent" one is forced by α+β+1 = Q.
    """
    _validate(m, k)
    beta = Fraction(k - 1, 2)
    Q = Fraction(m, 2) + k
    out = []
    for label, alpha in (("literal", Fraction(m + k + 1, 2)), ("consistent", Q - beta - 1)):
        res, h = jacobi.eigen_residual_study(m, k, float(alpha), float(beta), EIGEN_LAMBDAS, EIGEN_TS)
        lam = np.asarray(EIGEN_LAMBDAS)
        worst = float(np.max(np.abs(res) / (EIGEN_TOL * (1 + lam[:, None] ** 2))))
        out.append(IndexCandidate(label, alpha, beta, worst, h))
        log.info(
            "jacobi index candidate %s (alpha=%s, beta=%s) for (m,k)=(%d,%d): residual/tolerance = %.3e",
            label, alpha, beta, m, k, worst,
        )
    return out


@lru_cache(maxsize=None)
def _resolve(m, k):
    cands = index_candidates(m, k)
    chosen = [c for c in cands if c.label == "consistent" and c.passed]
    if not chosen:
        worst = ", ".join(f"{c.label}: {c.worst_ratio:.3e}" for c in cands)
        raise IndexResolutionError(f"no Jacobi index candidate passes the eigen-residual audit ({worst})")
    return chosen[0].alpha, chosen[0].beta, tuple(cands)


def resolve_jacobi_indices(m: int, k: int) -> tuple[Fraction, Fraction]:
    alpha, beta, _ = _resolve(m, k)
    return alpha, beta


@lru_cache(maxsize=None)
def derive_params(m: int, k: int, calibrate: bool = True) -> DRParams:
    """DRParams for (m, k), with normalization constants calibrated unless
    `calibrate` is false."""
    _validate(m, k)
    alpha, beta, audit = _resolve(m, k)
    Q = Fraction(m, 2) + k
    p = DRParams(m, k, Q, Q / 2, m + k + 1, alpha, beta, index_audit=audit)
    if calibrate:
        from .transform import calibrate_plancherel

        p = replace(p, poisson_C=poisson_normalization_constant(p), plancherel_C=calibrate_plancherel(p))
    return p


def sphere_area(n: int) -> float:
    """Surface area of the unit sphere in R^n (2 for n = 1)."""
    return 2 * math.pi ** (n / 2) / math.gamma(n / 2)


def poisson_kernel(params: DRParams, t: float, n: NPoint, C: float) -> float:
    a = math.exp(t)
    x2 = sum(x * x for x in n.X)
    z2 = sum(z * z for z in n.Z)
    Q = float(params.Q)
    return C * a**Q * ((a + x2 / 4) ** 2 + z2) ** (-Q)


def poisson_mass(params: DRParams, t: float = 0.0, C: float = 1.0, *, x_cut=np.inf, z_cut=np.inf):
    """∫_N P_{a_t}(X, Z) dX dZ reduced to polar coordinates in |X| and |Z|.

    Returns (value, abserr).
    """
    m, k = params.m, params.k
    Q = float(params.Q)
    a = math.exp(t)
    wx = sphere_area(m)
    wz = sphere_area(k)

    def f(z, x):
        return x ** (m - 1) * z ** (k - 1) * a**Q * ((a + x * x / 4) ** 2 + z * z) ** (-Q)

    with warnings.catch_warnings():
        # quadpack warns on the slowly decaying tails; the error estimate
        # returned alongside is what callers check
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.dblquad(f, 0, x_cut, 0, z_cut, epsabs=0, epsrel=1e-11)
    return C * wx * wz * val, C * wx * wz * err


def poisson_normalization_constant(params: DRParams, *, x_cut=np.inf, z_cut=np.inf) -> float:
    """C making the Poisson kernel a probability density on N."""
    mass, err = poisson_mass(params, 0.0, 1.0, x_cut=x_cut, z_cut=z_cut)
    if not (mass > 0 and err <= 1e-8 * mass):
        raise PoissonQuadratureError(f"Poisson mass quadrature did not converge: {mass!r} +/- {err!r}")
    return 1.0 / mass


def poisson_constant_closed_form(params: DRParams) -> float:
    """Same constant via Beta integrals (used as an independent check)."""
    m, k = params.m, params.k
    Q = float(params.Q)
    # ∫ (c² + z²)^{-Q} z^{k-1} dz = c^{k-2Q} B(k/2, Q-k/2) / 2, c = 1 + x²/4,
    # then ∫ (1+x²/4)^{k-2Q} x^{m-1} dx = 2^{m-1} B(m/2, 2Q-k-m/2).
    log_i = (
        math.log(sphere_area(m) * sphere_area(k))
        + betaln(k / 2, Q - k / 2)
        - math.log(2)
        + (m - 1) * math.log(2)
        + betaln(m / 2, 2 * Q - k - m / 2)
    )
    return math.exp(-log_i)


def volume_density(params: DRParams, t):
    """A(t) = (2 sinh(t/2))^{m+k} (2 cosh(t/2))^k, the radial volume weight."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be nonnegative")
    return np.exp(log_volume_density(params, t)) * (t > 0)


def log_volume_density(params: DRParams, t):
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore"):
        return (params.m + params.k) * np.log(2 * np.sinh(t / 2)) + params.k * np.log(2 * np.cosh(t / 2))


def volume_drift(params: DRParams, t):
    """A'(t)/A(t), the first-order coefficient of the radial Laplacian."""
    t = np.asarray(t, dtype=float)
    return (params.m + params.k) / 2 / np.tanh(t / 2) + params.k / 2 * np.tanh(t / 2)

