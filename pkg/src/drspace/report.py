"""Audit reports and their serializations."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, NamedTuple

import numpy as np

VERDICTS = ("pass", "fail", "inconclusive")


class Hypothesis(NamedTuple):
    name: str
    passed: bool
    constant: float


@dataclass
class CheckReport:
    check_name: str
    params: Any
    t_grid: list
    lhs: list
    rhs: list
    ratio_sup: float
    ratio_inf: float
    hypotheses: list = field(default_factory=list)
    verdict: str = "inconclusive"
    tolerances: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if len(self.t_grid) != len(self.lhs) or len(self.lhs) != len(self.rhs):
            raise ValueError("t_grid, lhs and rhs must have equal length")
        if not (math.isnan(self.ratio_sup) or math.isnan(self.ratio_inf)) and self.ratio_sup < self.ratio_inf:
            raise ValueError("ratio_sup < ratio_inf")
        if self.verdict == "pass":
            if not all(h.passed for h in self.hypotheses):
                raise ValueError("a passing report cannot carry a failed hypothesis")
            if not math.isfinite(self.ratio_sup):
                raise ValueError("a passing report needs a finite ratio_sup")

    @property
    def ratios(self) -> list:
        return [ratio(a, b) for a, b in zip(self.lhs, self.rhs)]

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def summary(self) -> dict:
        p = self.params
        space = None if p is None else {"m": p.m, "k": p.k}
        return {
            "check": self.check_name,
            "space": space,
            "verdict": self.verdict,
            "ratio_sup": _num(self.ratio_sup),
            "ratio_inf": _num(self.ratio_inf),
            "n_points": len(self.t_grid),
            "hypotheses": [
                {"name": h.name, "passed": bool(h.passed), "constant": _num(h.constant)} for h in self.hypotheses
            ],
            "tolerances": {k: _num(v) for k, v in sorted(self.tolerances.items())},
            "extras": {k: _num(v) for k, v in sorted(self.extras.items())},
            "notes": list(self.notes),
        }

    def to_table(self) -> str:
        """Fixed-width text table: grid, lhs, rhs, ratio per row."""
        head = f"# {self.check_name}: verdict={self.verdict} ratio_sup={_fmt(self.ratio_sup)} ratio_inf={_fmt(self.ratio_inf)}"
        lines = [head]
        for h in self.hypotheses:
            lines.append(f"# hypothesis {h.name}: {'pass' if h.passed else 'FAIL'} constant={_fmt(h.constant)}")
        for k in sorted(self.extras):
            lines.append(f"# {k} = {_fmt(self.extras[k])}")
        lines.append(f"{'grid':>24} {'lhs':>24} {'rhs':>24} {'ratio':>24}")
        for g, a, b in zip(self.t_grid, self.lhs, self.rhs):
            lines.append(f"{_fmt(g):>24} {_fmt(a):>24} {_fmt(b):>24} {_fmt(ratio(a, b)):>24}")
        return "\n".join(lines) + "\n"


def ratio(a: float, b: float) -> float:
    if b == 0:
        return 0.0 if a == 0 else math.inf
    return a / b


def sup_inf(lhs, rhs) -> tuple[float, float]:
    r = [ratio(a, b) for a, b in zip(lhs, rhs)]
    if not r:
        return 0.0, 0.0
    return max(r), min(r)


def decide(hypotheses, ok: bool, ratio_sup: float) -> str:
    if not all(h.passed for h in hypotheses):
        return "inconclusive"
    if ok and math.isfinite(ratio_sup):
        return "pass"
    return "fail"


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return "%.17e" % float(x)


def _num(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isfinite(x):
        return x
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
