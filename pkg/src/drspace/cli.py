"""Command-line front end.

    drspace params M K
    drspace phi M K --lam 0.5,1,2 --t 0.1,1
    drspace transform --config run.yaml --out DIR
    drspace check --config run.yaml [--out DIR] [--jobs N] [--tol-scale X]

Exit status of ``check``: 0 all pass, 3 some inconclusive and none fail,
2 some fail, 4 I/O error (severity 0 < 3 < 2 < 4).  Configuration or
usage errors exit with 1.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np
import yaml

from . import checks
from .moduli import KINDS, TAIL_KINDS, ModulusError, standard_modulus
from .params import derive_params
from .profiles import (
    ProfileFormatError,
    band_limited_profile,
    besov_profile,
    compact_profile,
    gaussian_profile,
    power_profile,
    read_profile,
    write_profile,
)
from .report import CheckReport, _fmt, ratio
from .spherical import phi_bounds_audit, spherical_eval
from .transform import RadialFunction, parseval_sides, spherical_transform

log = logging.getLogger("drspace")

OUT_ENV = "DRSPACE_OUT"
DEFAULT_OUT = "drspace_out"

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_IO = 0, 1, 2, 3, 4
_SEVERITY = {"pass": EXIT_OK, "inconclusive": EXIT_INCONCLUSIVE, "fail": EXIT_FAIL}
_RANK = {EXIT_OK: 0, EXIT_INCONCLUSIVE: 1, EXIT_FAIL: 2, EXIT_IO: 3}

PROFILE_KINDS = {
    "spectral_power": {"alpha", "gamma", "cutoff"},
    "besov": {"alpha"},
    "band_limited": {"lam0", "power"},
    "gaussian": {"width"},
    "compact": {"radius", "power"},
    "file": {"path"},
}

TOLERANCE_KEYS = ("rel_slack", "stable_increment", "fubini", "spread_max", "phi_slack")

CHECK_OPTIONS = {
    "thm-forward": set(),
    "lem-dyadic": {"mu"},
    "thm-converse": set(),
    "converse-hypotheses": set(),
    "cor-lipcor": {"alpha", "gamma"},
    "thm-besov": {"alpha", "truncations"},
    "thm-holder": {"alpha", "betas", "beta_exp"},
    "lemma-phi-bounds": {"lambda_max", "t_max", "n"},
    "phi-eigen": set(),
}
ALIASES = {"phi_bounds_audit": "lemma-phi-bounds", "converse_titchmarsh": "thm-converse"}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    m: int
    k: int
    T_max: float = 12.0
    lambda_max: float = 1e3
    t_grid: tuple = (1e-3, 1e-1, 32)
    lambda_order: int = 16
    profile: dict = field(default_factory=lambda: {"kind": "spectral_power", "alpha": 0.5})
    modulus: dict = field(default_factory=lambda: {"kind": "power", "alpha": 0.5})
    checks: tuple = ()
    check_options: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    output_dir: str | None = None
    seed: int = 0
    source: str = "<config>"

    def ts(self) -> np.ndarray:
        lo, hi, n = self.t_grid
        return checks.default_t_grid(n, lo, hi)


# ---------------------------------------------------------------- config


def _keys(where: str, given: dict, allowed) -> None:
    for key in given:
        if key not in allowed:
            raise ConfigError(f"{where}: unknown key {key!r} (allowed: {', '.join(sorted(allowed))})")


def _number(where: str, v, *, positive=False, integer=False):
    try:
        x = int(v) if integer else float(v)
    except (TypeError, ValueError):
        raise ConfigError(f"{where}: expected a number, got {v!r}") from None
    if integer and float(v) != x:
        raise ConfigError(f"{where}: expected an integer, got {v!r}")
    if positive and not x > 0:
        raise ConfigError(f"{where}: must be positive, got {v!r}")
    return x


def _section(raw: dict, key: str, src: str) -> dict:
    v = raw.get(key) or {}
    if not isinstance(v, dict):
        raise ConfigError(f"{src}: {key}: expected a mapping")
    return v


def load_config(path) -> RunConfig:
    path = Path(path)
    src = str(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise OSError(f"{src}: cannot read config: {e.strerror}") from e
    try:
        raw = yaml.safe_load(text) or {}
    except yaml.MarkedYAMLError as e:
        line = e.problem_mark.line + 1 if e.problem_mark else "?"
        raise ConfigError(f"{src}: line {line}: {e.problem}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{src}: top level must be a mapping")
    _keys(src, raw, ("space", "grids", "profile", "modulus", "checks", "check_options", "tolerances", "output_dir", "seed"))

    space = _section(raw, "space", src)
    _keys(f"{src}: space", space, ("m", "k", "l"))
    if "l" in space:
        if "k" in space:
            raise ConfigError(f"{src}: space: give the center dimension as k or l, not both")
        space = {"m": space.get("m"), "k": space["l"]} if "m" in space else {"k": space["l"]}
    if "m" not in space or "k" not in space:
        raise ConfigError(f"{src}: space: both m and k are required")
    m = _number(f"{src}: space.m", space["m"], integer=True)
    k = _number(f"{src}: space.k", space["k"], integer=True)
    try:
        derive_params(m, k, calibrate=False)
    except ValueError as e:
        raise ConfigError(f"{src}: space: {e}") from None

    cfg = {"m": m, "k": k, "source": src}
    grids = _section(raw, "grids", src)
    _keys(f"{src}: grids", grids, ("T_max", "lambda_max", "t_grid", "lambda_panels"))
    if "T_max" in grids:
        cfg["T_max"] = _number(f"{src}: grids.T_max", grids["T_max"], positive=True)
    if "lambda_max" in grids:
        cfg["lambda_max"] = _number(f"{src}: grids.lambda_max", grids["lambda_max"], positive=True)
    tg = grids.get("t_grid") or {}
    _keys(f"{src}: grids.t_grid", tg, ("min", "max", "n"))
    lo = _number(f"{src}: grids.t_grid.min", tg.get("min", 1e-3), positive=True)
    hi = _number(f"{src}: grids.t_grid.max", tg.get("max", 1e-1), positive=True)
    n = _number(f"{src}: grids.t_grid.n", tg.get("n", 32), positive=True, integer=True)
    if not lo < hi < 1:
        raise ConfigError(f"{src}: grids.t_grid: need 0 < min < max < 1")
    cfg["t_grid"] = (lo, hi, n)
    lp = grids.get("lambda_panels") or {}
    _keys(f"{src}: grids.lambda_panels", lp, ("order",))
    if "order" in lp:
        cfg["lambda_order"] = _number(f"{src}: grids.lambda_panels.order", lp["order"], positive=True, integer=True)

    if "profile" in raw:
        prof = dict(_section(raw, "profile", src))
        kind = prof.pop("kind", None)
        if kind not in PROFILE_KINDS:
            raise ConfigError(f"{src}: profile.kind must be one of {', '.join(PROFILE_KINDS)}")
        _keys(f"{src}: profile", prof, PROFILE_KINDS[kind])
        if kind == "file":
            if "path" not in prof:
                raise ConfigError(f"{src}: profile.path is required for kind 'file'")
            p = Path(prof["path"])
            if not p.is_absolute():
                p = path.parent / p
            if not p.is_file():
                raise ConfigError(f"{src}: profile.path: file {str(p)!r} does not exist")
            prof["path"] = str(p)
        else:
            prof = {key: _number(f"{src}: profile.{key}", v) for key, v in prof.items()}
        cfg["profile"] = {"kind": kind, **prof}

    if "modulus" in raw:
        mod = dict(_section(raw, "modulus", src))
        _keys(f"{src}: modulus", mod, ("kind", "alpha", "gamma", "k", "delta0", "tail", "tail_value"))
        if mod.get("kind", "power") not in KINDS:
            raise ConfigError(f"{src}: modulus.kind must be one of {', '.join(KINDS)}")
        if mod.get("tail", "constant_extension") not in TAIL_KINDS[:2]:
            raise ConfigError(f"{src}: modulus.tail must be one of {', '.join(TAIL_KINDS[:2])}")
        for key in ("alpha", "gamma", "k", "delta0", "tail_value"):
            if key in mod:
                mod[key] = _number(f"{src}: modulus.{key}", mod[key])
        cfg["modulus"] = mod
        try:
            build_modulus(mod)
        except ModulusError as e:
            raise ConfigError(f"{src}: modulus: {e}") from None

    names = raw.get("checks") or []
    if not isinstance(names, list):
        raise ConfigError(f"{src}: checks must be a list")
    resolved = []
    for name in names:
        key = ALIASES.get(name, name)
        if key not in CHECK_OPTIONS:
            raise ConfigError(f"{src}: checks: unknown check {name!r} (registry: {', '.join(sorted(CHECK_OPTIONS) + sorted(ALIASES))})")
        if key not in resolved:
            resolved.append(key)
    cfg["checks"] = tuple(resolved)

    opts = _section(raw, "check_options", src)
    clean = {}
    for name, o in opts.items():
        key = ALIASES.get(name, name)
        if key not in CHECK_OPTIONS:
            raise ConfigError(f"{src}: check_options: unknown check {name!r}")
        if not isinstance(o, dict):
            raise ConfigError(f"{src}: check_options.{name}: expected a mapping")
        _keys(f"{src}: check_options.{name}", o, CHECK_OPTIONS[key])
        clean[key] = {
            k2: [_number(f"{src}: check_options.{name}.{k2}", b) for b in v] if isinstance(v, list) else _number(f"{src}: check_options.{name}.{k2}", v)
            for k2, v in o.items()
        }
    cfg["check_options"] = clean

    tol = _section(raw, "tolerances", src)
    _keys(f"{src}: tolerances", tol, TOLERANCE_KEYS)
    cfg["tolerances"] = {key: _number(f"{src}: tolerances.{key}", v, positive=True) for key, v in tol.items()}
    if raw.get("output_dir") is not None:
        cfg["output_dir"] = str(raw["output_dir"])
    if "seed" in raw:
        cfg["seed"] = _number(f"{src}: seed", raw["seed"], integer=True)
    return RunConfig(**cfg)


# ------------------------------------------------------------- builders


def build_modulus(options: dict):
    kind = options.get("kind", "power")
    alpha = float(options.get("alpha", 0.5))
    gamma = float(options.get("gamma", 0.0))
    k = float(options.get("k", 1.0))
    delta0 = float(options.get("delta0", 0.5))
    tail = options.get("tail", "constant_extension")
    strict = 0 < alpha < k
    if not strict:
        log.warning("modulus alpha=%g is outside (0, k=%g); building it as a boundary case", alpha, k)
    return standard_modulus(kind, alpha, gamma, k, delta0, tail=tail, tail_value=options.get("tail_value"), strict=strict)


def _inputs(cfg: RunConfig):
    """(params, f or None, fhat) for the configured profile."""
    return _build_inputs(cfg.m, cfg.k, cfg.T_max, cfg.lambda_max, cfg.lambda_order, tuple(sorted(cfg.profile.items())))


@lru_cache(maxsize=None)
def _build_inputs(m, k, T_max, lambda_max, lambda_order, profile_items):
    params = derive_params(m, k)
    prof = dict(profile_items)
    kind = prof["kind"]
    f = None
    if kind == "spectral_power":
        fhat = power_profile(params, prof.get("alpha", 0.5), prof.get("gamma", 0.0), lam_max=lambda_max, cutoff=prof.get("cutoff", 1.0), order=lambda_order)
    elif kind == "besov":
        fhat = besov_profile(params, prof.get("alpha", 0.5), lam_max=lambda_max, order=lambda_order)
    elif kind == "band_limited":
        fhat = band_limited_profile(params, prof.get("lam0", 1.0), int(prof.get("power", 8)), order=lambda_order)
    elif kind == "gaussian":
        f = gaussian_profile(params, prof.get("width", 1.0), T_max=T_max)
        fhat = spherical_transform(params, f)
    elif kind == "compact":
        f = compact_profile(params, prof.get("radius", 3.0), int(prof.get("power", 12)))
        fhat = spherical_transform(params, f)
    else:
        obj = read_profile(prof["path"], params)
        if isinstance(obj, RadialFunction):
            f, fhat = obj, spherical_transform(params, obj)
        else:
            fhat = obj
    return params, f, fhat


def _tol(cfg: RunConfig, key: str, default: float, scale: float) -> float:
    return cfg.tolerances.get(key, default) * scale


def run_one(cfg: RunConfig, name: str, tol_scale: float = 1.0) -> CheckReport:
    opts = cfg.check_options.get(name, {})
    ts = cfg.ts()
    rel = _tol(cfg, "rel_slack", checks.REL_SLACK, tol_scale)
    if name == "lemma-phi-bounds":
        params = derive_params(cfg.m, cfg.k)
        n = int(opts.get("n", 100))
        lams = np.linspace(opts.get("lambda_max", 10.0) / n, opts.get("lambda_max", 10.0), n)
        tt = np.linspace(opts.get("t_max", 10.0) / n, opts.get("t_max", 10.0), n)
        return phi_bounds_audit(params, lams, tt, slack=_tol(cfg, "phi_slack", 1e-10, tol_scale))
    if name == "phi-eigen":
        from .params import EIGEN_LAMBDAS, EIGEN_TS

        return phi_bounds_audit(derive_params(cfg.m, cfg.k), EIGEN_LAMBDAS, EIGEN_TS, mode="eigen")
    if name == "converse-hypotheses":
        return checks.converse_hypotheses(build_modulus(cfg.modulus))
    if name == "cor-lipcor":
        params = derive_params(cfg.m, cfg.k)
        gamma = opts.get("gamma", 0.0)
        spread = cfg.tolerances.get("spread_max", 10.0 if gamma == 0 else 20.0) * tol_scale
        return checks.lipcor_two_sided(params, opts.get("alpha", 0.5), gamma, ts, lam_max=cfg.lambda_max, spread_max=spread)
    params, f, fhat = _inputs(cfg)
    inc = _tol(cfg, "stable_increment", checks.STABLE_INCREMENT, tol_scale)
    if name == "thm-besov":
        return checks.besov_check(params, f, fhat, opts.get("alpha", 0.5), int(opts.get("truncations", 64)), stable_increment=inc, fubini_tol=_tol(cfg, "fubini", 1e-6, tol_scale))
    if name == "thm-holder":
        hp = checks.HolderParams(opts.get("alpha", 0.5), beta_exp=opts.get("beta_exp", 2.0))
        return checks.holder_integrability(params, f, fhat, hp, betas=tuple(opts.get("betas", (1.4, 1.8, 2.0))), t_grid=ts, stable_increment=inc, rel_slack=rel)
    w = build_modulus(cfg.modulus)
    if name == "thm-forward":
        return checks.forward_titchmarsh(params, f, fhat, w, ts, rel_slack=rel)
    if name == "lem-dyadic":
        return checks.dyadic_shell_equiv(fhat, w, ts, mu=opts.get("mu"), rel_slack=rel)
    if name == "thm-converse":
        return checks.converse_titchmarsh(params, f, fhat, w, ts, rel_slack=rel)
    raise KeyError(name)


def _guarded(cfg: RunConfig, name: str, tol_scale: float) -> CheckReport:
    """A check that raises becomes an inconclusive report carrying the error."""
    try:
        return run_one(cfg, name, tol_scale)
    except (ArithmeticError, ValueError) as e:
        return CheckReport(name, None, [], [], [], 0.0, 0.0, [], "inconclusive", {}, {}, [f"error: {type(e).__name__}: {e}"])


def run_checks(cfg: RunConfig, out_dir=None, *, jobs: int = 1, tol_scale: float = 1.0) -> int:
    out = Path(out_dir or cfg.output_dir or os.environ.get(OUT_ENV) or DEFAULT_OUT)
    if not cfg.checks:
        log.warning("no checks requested; nothing to do")
        return EXIT_OK
    if jobs > 1 and len(cfg.checks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_guarded, [cfg] * len(cfg.checks), cfg.checks, [tol_scale] * len(cfg.checks)))
    else:
        reports = [_guarded(cfg, name, tol_scale) for name in cfg.checks]
    status = EXIT_OK
    for r in reports:
        for note in r.notes:
            log.error("%s: %s", r.check_name, note)
        s = _SEVERITY[r.verdict]
        if _RANK[s] > _RANK[status]:
            status = s
    try:
        out.mkdir(parents=True, exist_ok=True)
        for name, r in zip(cfg.checks, reports):
            emit_plot_data(r, out / f"{name}.csv")
            (out / f"{name}.txt").write_text(r.to_table())
        summary = {
            "space": {"m": cfg.m, "k": cfg.k},
            "exit_status": status,
            "reports": {name: r.summary() for name, r in zip(cfg.checks, reports)},
        }
        (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    except OSError as e:
        log.error("cannot write reports to %s: %s", out, e)
        return EXIT_IO
    for name, r in zip(cfg.checks, reports):
        print(f"{name:<22} {r.verdict:<13} ratio_sup={_fmt(r.ratio_sup)}")
    return status


def emit_plot_data(report: CheckReport, path) -> None:
    """CSV with header grid,lhs,rhs,ratio in %.17e; byte-stable."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["grid", "lhs", "rhs", "ratio"])
    for g, a, b in zip(report.t_grid, report.lhs, report.rhs):
        writer.writerow(["%.17e" % float(x) for x in (g, a, b, ratio(a, b))])
    Path(path).write_text(buf.getvalue())


# ------------------------------------------------------------------ main


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="drspace", description="Radial Fourier analysis and Titchmarsh-type audits on Damek-Ricci spaces.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="print the structural constants of S(m, k)")
    p.add_argument("m", type=int)
    p.add_argument("k", type=int)

    p = sub.add_parser("phi", help="evaluate spherical functions phi_lambda(t)")
    p.add_argument("m", type=int)
    p.add_argument("k", type=int)
    p.add_argument("--lam", type=_floats, required=True, help="comma-separated lambdas")
    p.add_argument("--t", type=_floats, required=True, help="comma-separated radii")

    p = sub.add_parser("transform", help="compute and save the spectral profile of the configured function")
    p.add_argument("--config", required=True)
    p.add_argument("--out")

    p = sub.add_parser("check", help="run the configured audits")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--tol-scale", type=float, default=1.0, help="multiply every tolerance by X")
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        if args.command == "params":
            print(json.dumps(derive_params(args.m, args.k).as_dict(), indent=2, sort_keys=True))
            return EXIT_OK
        if args.command == "phi":
            params = derive_params(args.m, args.k)
            print("lambda,t,value,method,est_error")
            for lam in args.lam:
                for t in args.t:
                    e = spherical_eval(params, lam, t)
                    print(f"{e.lam!r},{e.t!r},{e.value:.17e},{e.method},{e.est_error:.3e}")
            return EXIT_OK
        cfg = load_config(args.config)
        if args.command == "transform":
            return _transform(cfg, args.out)
        if args.jobs < 1 or not args.tol_scale > 0 or not math.isfinite(args.tol_scale):
            raise ConfigError("--jobs must be >= 1 and --tol-scale positive")
        return run_checks(cfg, args.out, jobs=args.jobs, tol_scale=args.tol_scale)
    except (ConfigError, ProfileFormatError, ModulusError, ValueError) as e:
        print(f"drspace: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"drspace: I/O error: {e}", file=sys.stderr)
        return EXIT_IO


def _transform(cfg: RunConfig, out_dir) -> int:
    params, f, fhat = _inputs(cfg)
    out = Path(out_dir or cfg.output_dir or os.environ.get(OUT_ENV) or DEFAULT_OUT)
    try:
        out.mkdir(parents=True, exist_ok=True)
        write_profile(out / "spectral_profile.txt", fhat)
    except OSError as e:
        log.error("cannot write %s: %s", out, e)
        return EXIT_IO
    if f is not None:
        a, b = parseval_sides(params, f, fhat)
        print(f"parseval: direct={a:.17e} spectral={b:.17e} rel_diff={abs(a - b) / a:.3e}")
    print(f"wrote {out / 'spectral_profile.txt'} ({len(fhat.grid)} samples, lambda_max={fhat.lam_max:g}, flagged={fhat.flagged})")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
