"""Reports on census output: density comparisons and error-exponent fits.

Everything here is a pure transform of a CensusResult; identical inputs
give identical reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .census import CensusResult
from .sl2fp import class_list, class_mass, predicted_density


@dataclass(frozen=True)
class DensityRow:
    a: int
    psi_a: float
    psi_pm: float
    predicted: Fraction
    empirical: float
    abs_err: float
    rel_err: float


@dataclass(frozen=True)
class DensityReport:
    p: int
    x: int
    rows: tuple[DensityRow, ...]
    trend: tuple[tuple[int, float], ...]
    pre_asymptotic: bool

    def max_rel_err(self) -> float:
        return max(r.rel_err for r in self.rows)


def _checkpoint_rows(result: CensusResult, i: int) -> tuple[DensityRow, ...]:
    p = result.config.p
    x = result.config.norm_bounds[i]
    fold = result.folded()
    rows = []
    for a in range(p):
        pred = predicted_density(p, a)
        predf = float(pred)
        emp = fold[i, a] / x
        rows.append(
            DensityRow(
                a=a,
                psi_a=float(result.psi[i, a]),
                psi_pm=float(fold[i, a]),
                predicted=pred,
                empirical=emp,
                abs_err=abs(emp - predf),
                rel_err=abs(emp - predf) / predf,
            )
        )
    return tuple(rows)


def density_report(result: CensusResult, checkpoint: int = -1) -> DensityReport:
    """Empirical psi_pm/x against the closed-form densities.

    The trend table carries the max-over-residues relative error at every
    checkpoint; the requested checkpoint supplies the detailed rows.
    """
    n = len(result.config.norm_bounds)
    i = range(n)[checkpoint]
    rows = _checkpoint_rows(result, i)
    assert sum(r.predicted for r in rows) == 1
    trend = []
    for j in range(n):
        jrows = _checkpoint_rows(result, j)
        trend.append((result.config.norm_bounds[j], max(r.rel_err for r in jrows)))
    return DensityReport(
        p=result.config.p,
        x=result.config.norm_bounds[i],
        rows=rows,
        trend=tuple(trend),
        pre_asymptotic=bool(result.psi[i].sum() == 0.0),
    )


@dataclass(frozen=True)
class ExponentFit:
    beta: float
    coeff: float
    residual: float
    points_used: int
    points_dropped: int


def error_exponent_fit(points, min_x: float = 100.0) -> ExponentFit:
    """Least-squares beta, c for err ~ c * x^beta in log-log coordinates.

    Points with err <= 0 or x < min_x are dropped (and counted); fewer
    than 4 surviving points is an error.
    """
    usable = [(x, e) for x, e in points if e > 0 and x >= min_x]
    dropped = len(list(points)) - len(usable)
    if len(usable) < 4:
        raise ValueError(
            "insufficient data: %d usable points, need at least 4" % len(usable)
        )
    lx = np.log([x for x, _ in usable])
    le = np.log([e for _, e in usable])
    beta, logc = np.polyfit(lx, le, 1)
    resid = float(np.sqrt(np.mean((le - (beta * lx + logc)) ** 2)))
    return ExponentFit(
        beta=float(beta),
        coeff=float(np.exp(logc)),
        residual=resid,
        points_used=len(usable),
        points_dropped=dropped,
    )


def density_error_series(result: CensusResult):
    """(x, max-over-a |psi_pm - predicted*x|) per checkpoint, fit-ready."""
    p = result.config.p
    preds = [float(predicted_density(p, a)) for a in range(p)]
    fold = result.folded()
    out = []
    for i, x in enumerate(result.config.norm_bounds):
        err = max(abs(fold[i, a] - preds[a] * x) for a in range(p))
        out.append((x, err))
    return out


def psi_error_series(result: CensusResult):
    """(x, |psi - x|) per checkpoint, fit-ready."""
    totals = result.psi_total()
    return [
        (x, abs(float(totals[i]) - x))
        for i, x in enumerate(result.config.norm_bounds)
    ]


@dataclass(frozen=True)
class ClassRow:
    label: tuple
    trace: int
    size: int
    empirical: float
    predicted: Fraction
    ratio: float


@dataclass(frozen=True)
class ClassReport:
    p: int
    x: int
    rows: tuple[ClassRow, ...]
    constant: int
    worst_rel_dev: float


def class_report(result: CensusResult, checkpoint: int = -1) -> ClassReport:
    """Per-conjugacy-class masses against size/|G|, with the global
    constant resolved empirically over {1, 2}."""
    if result.class_psi is None:
        raise ValueError("census was run without class resolution")
    p = result.config.p
    n = len(result.config.norm_bounds)
    i = range(n)[checkpoint]
    x = result.config.norm_bounds[i]
    classes = class_list(p)
    masses = class_mass(p)
    rows = []
    for k, cls in enumerate(classes):
        emp = result.class_psi[i, k] / x
        pred = masses[cls.label]
        rows.append(
            ClassRow(
                label=cls.label,
                trace=cls.trace,
                size=cls.size,
                empirical=emp,
                predicted=pred,
                ratio=emp / float(pred),
            )
        )
    best_c, best_dev = None, None
    for c in (1, 2):
        dev = max(abs(r.ratio / c - 1.0) for r in rows)
        if best_dev is None or dev < best_dev:
            best_c, best_dev = c, dev
    return ClassReport(p=p, x=x, rows=tuple(rows), constant=best_c, worst_rel_dev=best_dev)
