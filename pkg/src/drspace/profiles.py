"""Ready-made test profiles and the plain-text profile format.

File format: one header line ``# {json}`` carrying the space, grid edges,
quadrature order and metadata, then one ``point value`` pair per node.
Floats are written with ``repr`` so a write/read cycle is exact.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .params import DRParams, derive_params
from .quadrature import CompositeGrid, spectral_grid, uniform_grid
from .transform import RadialFunction, SpectralFunction, TailModel, radial_function

FORMAT_VERSION = 1


# ------------------------------------------------------------ direct space


def gaussian_profile(params: DRParams, width: float = 1.0, *, T_max: float = 12.0) -> RadialFunction:
    return radial_function(params, lambda t: np.exp(-(t**2) / (2 * width * width)), T_max=T_max, hint="gaussian_like")


def compact_profile(params: DRParams, radius: float = 3.0, power: int = 12) -> RadialFunction:
    """(1 − (t/R)²)₊^power on a grid ending exactly at R."""
    grid = uniform_grid(0.0, radius, radius / 30, 20)
    return radial_function(params, lambda t: np.clip(1 - (t / radius) ** 2, 0, None) ** power, grid=grid, hint="compactly_supported")


# ---------------------------------------------------------- spectral recipes


def power_profile(
    params: DRParams,
    alpha: float,
    gamma: float = 0.0,
    *,
    lam_max: float = 1e3,
    cutoff: float = 1.0,
    log_shift: float | None = None,
    order: int = 16,
) -> SpectralFunction:
    """f̂(λ) = λ^{-(α+d/2)} (s + ln λ)^γ for λ ≥ cutoff, 0 below.

    s defaults to 0 for γ = 0 and 1 otherwise (keeping the log factor
    positive from λ = 1 on).  The flat tail integral then behaves like
    t^{2α+d-1} (ln 1/t)^{2γ} at s = 1/t.
    """
    if log_shift is None:
        log_shift = 0.0 if gamma == 0 else 1.0
    if gamma and log_shift + math.log(cutoff) <= 0:
        raise ValueError("log factor must be positive from the cutoff on")
    expo = alpha + params.d / 2
    grid = spectral_grid(lam_max, order=order, breakpoints=[cutoff])
    lam = grid.nodes
    vals = np.zeros(lam.size)
    on = lam >= cutoff
    vals[on] = lam[on] ** (-expo)
    if gamma:
        vals[on] *= (log_shift + np.log(lam[on])) ** gamma
    tail = TailModel(expo, -gamma, 1.0, log_shift)
    return SpectralFunction(params, grid, vals, tail)


def besov_profile(params: DRParams, alpha: float, **kw) -> SpectralFunction:
    """λ^{-(α+d/2)} (1 + ln λ)^{-1} for λ ≥ 1: the log-damped borderline."""
    return power_profile(params, alpha, -1.0, log_shift=1.0, **kw)


def band_limited_profile(params: DRParams, lam0: float = 1.0, power: int = 8, order: int = 16) -> SpectralFunction:
    """(1 − (λ/λ0)²)^power on [0, λ0]; vanishes to high order at λ0."""
    grid = spectral_grid(lam0, order=order, lam_floor=lam0 * 2.0**-10)
    lam = grid.nodes
    return SpectralFunction(params, grid, (1 - (lam / lam0) ** 2) ** power, None)


# -------------------------------------------------------------------- I/O


def _grid_header(grid: CompositeGrid) -> dict:
    return {"edges": [float(e) for e in grid.edges], "order": grid.order}


def write_profile(path, obj) -> None:
    p = obj.params
    header = {"format": FORMAT_VERSION, "m": p.m, "k": p.k, **_grid_header(obj.grid)}
    if isinstance(obj, RadialFunction):
        header.update(kind="radial", hint=obj.smoothness_hint)
        xs = obj.grid.nodes
    elif isinstance(obj, SpectralFunction):
        tail = None
        if obj.tail is not None:
            tl = obj.tail
            tail = {"exponent": tl.exponent, "log_power": tl.log_power, "coefficient": tl.coefficient, "log_shift": tl.log_shift}
        header.update(kind="spectral", tail=tail, est_error=obj.est_error, flagged=obj.flagged)
        xs = obj.grid.nodes
    else:
        raise TypeError("can only write RadialFunction or SpectralFunction")
    lines = ["# " + json.dumps(header, sort_keys=True)]
    lines += [f"{float(x)!r} {float(v)!r}" for x, v in zip(xs, obj.values)]
    Path(path).write_text("\n".join(lines) + "\n")


class ProfileFormatError(ValueError):
    pass


def read_profile(path, params: DRParams | None = None):
    text = Path(path).read_text().splitlines()
    if not text or not text[0].startswith("# "):
        raise ProfileFormatError(f"{path}: line 1: missing '# {{json}}' header")
    try:
        header = json.loads(text[0][2:])
    except json.JSONDecodeError as e:
        raise ProfileFormatError(f"{path}: line 1: bad header: {e.msg}") from None
    for key in ("m", "k", "edges", "order", "kind"):
        if key not in header:
            raise ProfileFormatError(f"{path}: header lacks {key!r}")
    if params is None:
        params = derive_params(int(header["m"]), int(header["k"]))
    elif (params.m, params.k) != (header["m"], header["k"]):
        raise ProfileFormatError(f"{path}: profile is for (m,k)=({header['m']},{header['k']})")
    grid = CompositeGrid(np.array(header["edges"], dtype=float), int(header["order"]))
    xs, vs = [], []
    for lineno, line in enumerate(text[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ProfileFormatError(f"{path}: line {lineno}: expected two columns")
        try:
            xs.append(float(parts[0]))
            vs.append(float(parts[1]))
        except ValueError:
            raise ProfileFormatError(f"{path}: line {lineno}: not a number") from None
    if len(xs) != len(grid) or not np.array_equal(np.array(xs), grid.nodes):
        raise ProfileFormatError(f"{path}: sample points do not match the header grid")
    if header["kind"] == "radial":
        return RadialFunction(params, grid, np.array(vs), header.get("hint", "smooth"))
    if header["kind"] == "spectral":
        t = header.get("tail")
        tail = None if t is None else TailModel(t["exponent"], t["log_power"], t["coefficient"], t["log_shift"])
        return SpectralFunction(params, grid, np.array(vs), tail, float(header.get("est_error", 0.0)), bool(header.get("flagged", False)))
    raise ProfileFormatError(f"{path}: unknown profile kind {header['kind']!r}")
