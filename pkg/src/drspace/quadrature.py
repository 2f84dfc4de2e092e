"""Composite Gauss-Legendre grids on finite intervals.

Every integral in the package goes through :class:`CompositeGrid`: a sorted
list of panel edges with a fixed Gauss-Legendre rule on each panel.  Samples
on the nodes carry a piecewise polynomial, which is what lets us integrate
over partial panels and evaluate the interpolant at arbitrary points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre as L


@lru_cache(maxsize=None)
def _rule(order: int):
    x, w = L.leggauss(order)
    # Discrete Legendre transform: coefficients from node values, exact for
    # polynomials of degree < order.
    P = L.legvander(x, order - 1)  # (order, order)
    norm = (2 * np.arange(order) + 1) / 2.0
    to_coef = (P * w[:, None]).T * norm[:, None]
    x.setflags(write=False)
    w.setflags(write=False)
    to_coef.setflags(write=False)
    return x, w, to_coef


@dataclass(frozen=True, eq=False)
class CompositeGrid:
    edges: np.ndarray
    order: int = 16
    nodes: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=float)
        if edges.ndim != 1 or edges.size < 2:
            raise ValueError("a grid needs at least two edges")
        if not np.all(np.isfinite(edges)):
            raise ValueError("grid edges must be finite")
        if np.any(np.diff(edges) <= 0):
            raise ValueError("grid edges must be strictly increasing")
        if self.order < 2:
            raise ValueError("quadrature order must be at least 2")
        x, w, _ = _rule(self.order)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        weights = (half[:, None] * w[None, :]).ravel()
        for arr in (edges, nodes, weights):
            arr.setflags(write=False)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def n_panels(self) -> int:
        return self.edges.size - 1

    @property
    def lo(self) -> float:
        return float(self.edges[0])

    @property
    def hi(self) -> float:
        return float(self.edges[-1])

    def __len__(self) -> int:
        return self.nodes.size

    def __eq__(self, other):
        if not isinstance(other, CompositeGrid):
            return NotImplemented
        return self.order == other.order and np.array_equal(self.edges, other.edges)

    def __hash__(self):
        return hash((self.order, self.edges.tobytes()))

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, np.asarray(values, dtype=float)))

    def coefficients(self, values) -> np.ndarray:
        """Per-panel Legendre coefficients, shape (..., n_panels, order)."""
        v = np.asarray(values, dtype=float)
        v = v.reshape(v.shape[:-1] + (self.n_panels, self.order))
        return v @ _rule(self.order)[2].T

    def tail_estimate(self, values) -> np.ndarray:
        """Size of the two highest Legendre modes per panel, scaled by panel
        width.  A cheap, usually pessimistic, quadrature error indicator."""
        c = self.coefficients(values)
        half = 0.5 * np.diff(self.edges)
        return (np.abs(c[..., -1]) + np.abs(c[..., -2])) * half

    def _locate(self, x):
        x = np.asarray(x, dtype=float)
        idx = np.clip(np.searchsorted(self.edges, x, side="right") - 1, 0, self.n_panels - 1)
        a = self.edges[idx]
        b = self.edges[idx + 1]
        return idx, (2 * x - a - b) / (b - a)

    def interpolate(self, values, x) -> np.ndarray:
        """Evaluate the piecewise polynomial through `values` at `x`."""
        x = np.asarray(x, dtype=float)
        if np.any(x < self.lo) or np.any(x > self.hi):
            raise ValueError("interpolation point outside the grid")
        coef = self.coefficients(values)
        idx, u = self._locate(x)
        V = L.legvander(u.ravel(), self.order - 1)
        out = np.einsum("ij,ij->i", V, coef[idx.ravel()])
        return out.reshape(x.shape)

    def cumulative(self, values) -> np.ndarray:
        """Integral from the left end up to each edge."""
        v = np.asarray(values, dtype=float).reshape(self.n_panels, self.order)
        w = self.weights.reshape(self.n_panels, self.order)
        return np.concatenate([[0.0], np.cumsum((v * w).sum(axis=1))])

    def partial(self, values, a: float, b: float) -> float:
        """Integral over [a, b] ⊂ [lo, hi] of the piecewise interpolant."""
        if b < a:
            return -self.partial(values, b, a)
        a = max(a, self.lo)
        b = min(b, self.hi)
        if b <= a:
            return 0.0
        # summed locally so small pieces of a large total keep relative accuracy
        v = np.asarray(values, dtype=float).reshape(self.n_panels, self.order)
        w = self.weights.reshape(self.n_panels, self.order)
        panel = (v * w).sum(axis=1)
        zero = np.zeros(self.n_panels + 1)
        (ia, ib), _ = self._locate(np.array([a, b]))
        fa, fb = self._antideriv(values, zero, np.array([a, b]))
        if ia == ib:
            return float(fb - fa)
        return float((panel[ia] - fa) + panel[ia + 1 : ib].sum() + fb)

    def antiderivative(self, values, x) -> np.ndarray:
        """∫_lo^x of the interpolant, vectorized over x."""
        x = np.clip(np.asarray(x, dtype=float), self.lo, self.hi)
        return self._antideriv(values, self.cumulative(values), x)

    def _antideriv(self, values, cum, x):
        x = np.asarray(x, dtype=float)
        coef = self.coefficients(values)
        idx, u = self._locate(x)
        idx = idx.ravel()
        u = u.ravel()
        half = 0.5 * (self.edges[idx + 1] - self.edges[idx])
        # antiderivative of sum c_j P_j from -1 to u
        ci = L.legint(coef, lbnd=-1, axis=-1)
        out = np.einsum("ij,ij->i", L.legvander(u, self.order), ci[idx])
        return (cum[idx] + half * out).reshape(x.shape)


def merge_edges(*edge_sets, tol: float = 1e-13) -> np.ndarray:
    """Sorted union of edge arrays, dropping near-duplicates."""
    e = np.unique(np.concatenate([np.atleast_1d(np.asarray(s, dtype=float)) for s in edge_sets]))
    keep = [e[0]]
    for x in e[1:]:
        if x - keep[-1] > tol * max(1.0, abs(x)):
            keep.append(x)
    return np.array(keep)


def subdivide(edges, max_width: float) -> np.ndarray:
    """Split every panel wider than `max_width` into equal pieces."""
    edges = np.asarray(edges, dtype=float)
    out = [edges[:1]]
    for a, b in zip(edges[:-1], edges[1:]):
        n = max(1, int(np.ceil((b - a) / max_width - 1e-12)))
        out.append(np.linspace(a, b, n + 1)[1:])
    return np.concatenate(out)


def uniform_grid(lo: float, hi: float, panel_width: float, order: int = 20) -> CompositeGrid:
    return CompositeGrid(subdivide([lo, hi], panel_width), order)


def spectral_grid(
    lam_max: float = 1e3,
    *,
    order: int = 16,
    lam_floor: float = 2.0 ** -10,
    max_width: float | None = None,
    breakpoints=(),
) -> CompositeGrid:
    """λ-grid on [0, lam_max]: dyadic panels refined towards 0, optionally
    capped in width, with extra breakpoints (cutoffs, kinks) as edges."""
    if lam_max <= lam_floor:
        raise ValueError("lam_max must exceed the dyadic floor")
    j_hi = int(np.floor(np.log2(lam_max)))
    dyadic = 2.0 ** np.arange(int(np.log2(lam_floor)), j_hi + 1)
    extra = [b for b in breakpoints if 0 < b < lam_max]
    edges = merge_edges([0.0, lam_max], dyadic[dyadic < lam_max], extra)
    if max_width is not None:
        edges = subdivide(edges, max_width)
    return CompositeGrid(edges, order)


def log_edges(lo: float, hi: float, per_octave: int = 1) -> np.ndarray:
    """Geometric edges from lo to hi with `per_octave` panels per doubling."""
    n = max(1, int(np.ceil(per_octave * np.log2(hi / lo) - 1e-12)))
    return np.geomspace(lo, hi, n + 1)
