"""Exact census of unit-weighted class data along trace lines.

For every integer trace t with 3 <= t <= trace_bound(x), every splitting
t*t - 4 = m*m * D with D a valid discriminant contributes
h(D) * 2 * log(eps_D) to the residue class t mod p, where h(D) counts the
primitive reduced cycles of discriminant D and eps_D is the fundamental
totally positive unit.  The per-residue totals divided by x are the
quantities whose limits the closed-form conjugacy masses predict.

Parallel runs are bit-for-bit identical to serial runs by construction:
the trace range is cut into fixed-size chunks independent of the worker
count, every chunk accumulates its partial sums in ascending t order with
compensated addition, checkpoint snapshots are taken inside the owning
chunk, and the merge folds chunk totals in ascending chunk order.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .numtheory import SpfTable, build_spf_table, divisors_from_factorization, factorize
from .quadforms import (
    Form,
    class_number,
    class_number_and_reps,
    fundamental_unit,
    pell_from_known,
    unit_log,
    valid_discriminant,
)
from . import sl2fp


def trace_bound(x: int) -> int:
    """Largest integer trace whose unit has square norm at most x.

    t + sqrt(t*t-4) <= 2*sqrt(x) is equivalent to t*sqrt(x) <= x + 1,
    so the cutoff is isqrt((x+1)**2 // x), exact in integers.
    """
    if x < 1:
        raise ValueError("norm bound must be positive")
    return math.isqrt((x + 1) ** 2 // x)


def trace_decompositions(t: int, table: SpfTable) -> list[tuple[int, int]]:
    """All pairs (m, D) with t*t - 4 = m*m*D and D a valid discriminant.

    Returned in ascending m.  D is automatically a nonsquare for t >= 3.
    """
    if t < 3:
        raise ValueError("trace must be at least 3")
    merged: dict[int, int] = {}
    for part in (t - 2, t + 2):
        for q, e in factorize(part, table):
            merged[q] = merged.get(q, 0) + e
    square_part = [(q, e // 2) for q, e in merged.items() if e >= 2]
    n = t * t - 4
    out = []
    for m in divisors_from_factorization(square_part):
        d = n // (m * m)
        if d & 3 in (0, 1):
            out.append((m, d))
    return out


def matrix_from_form(t: int, m: int, form: Form) -> tuple[int, int, int, int]:
    """Integer matrix of trace t fixing the scaled form m*(a,b,c).

    Row-major (n11, n12, n21, n22) with determinant one.
    """
    a, b, c = form
    aa, bb, cc = m * a, m * b, m * c
    if (t - bb) % 2 != 0:
        raise ValueError("trace %d and form %r have mismatched parity" % (t, form))
    mat = ((t - bb) // 2, -cc, aa, (t + bb) // 2)
    if mat[0] * mat[3] - mat[1] * mat[2] != 1:
        raise RuntimeError("constructed matrix is not unimodular")
    return mat


@dataclass(frozen=True)
class RunConfig:
    """Parameters of one census run.

    norm_bounds are the checkpoint values of x, ascending.  chunk_traces
    fixes the trace-line chunking and therefore the exact floating point
    result; workers only changes how chunks are distributed.  With the
    analytic backend, line weights for discriminants above delta_switch
    come from the L-value closed form instead of cycle counting; class
    resolution then has no representatives to classify and is refused.
    """

    p: int
    norm_bounds: tuple[int, ...]
    workers: int = 1
    chunk_traces: int = 512
    resolve_classes: bool = False
    backend: str = "exact"
    delta_switch: int = 10**6

    def __post_init__(self) -> None:
        sl2fp._require_prime(self.p)
        if not self.norm_bounds:
            raise ValueError("at least one norm bound is required")
        if any(x < 1 for x in self.norm_bounds):
            raise ValueError("norm bounds must be positive")
        if list(self.norm_bounds) != sorted(set(self.norm_bounds)):
            raise ValueError("norm bounds must be strictly increasing")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.chunk_traces < 8:
            raise ValueError("chunk_traces must be at least 8")
        if self.backend not in ("exact", "analytic"):
            raise ValueError("backend must be exact or analytic")
        if self.backend == "analytic" and self.resolve_classes:
            raise ValueError("class resolution needs the exact backend")
        if self.delta_switch < 5:
            raise ValueError("delta_switch must be at least 5")


@dataclass
class CensusResult:
    """Checkpointed residue masses, one row per norm bound."""

    config: RunConfig
    trace_bounds: tuple[int, ...]
    psi: np.ndarray
    class_labels: tuple[sl2fp.Label, ...] | None = None
    class_psi: np.ndarray | None = None
    table_limit: int = 0

    def psi_total(self) -> np.ndarray:
        return self.psi.sum(axis=1)

    def folded(self) -> np.ndarray:
        """(psi_a + psi_{-a}) / 2 per residue, same shape as psi."""
        p = self.config.p
        idx = [(-a) % p for a in range(p)]
        return 0.5 * (self.psi + self.psi[:, idx])


def _acc(s: float, c: float, x: float) -> tuple[float, float]:
    t = s + x
    if abs(s) >= abs(x):
        c += (s - t) + x
    else:
        c += (x - t) + s
    return t, c


_W: dict = {}


def _init_worker(p: int, table: SpfTable, resolve: bool,
                 backend: str = "exact", delta_switch: int = 10**6) -> None:
    _W["p"] = p
    _W["table"] = table
    _W["resolve"] = resolve
    _W["backend"] = backend
    _W["delta_switch"] = delta_switch
    if resolve:
        labels = tuple(c.label for c in sl2fp.class_list(p))
        _W["labels"] = labels
        _W["label_index"] = {lab: i for i, lab in enumerate(labels)}
    else:
        _W["labels"] = None
        _W["label_index"] = None


def _chunk_task(args: tuple[int, int, tuple[tuple[int, int], ...]]):
    """Process traces t_lo..t_hi; snapshot at the listed (t, checkpoint) marks.

    Returns (snapshots, psi_sum, psi_comp, cls_sum, cls_comp) where each
    snapshot is (checkpoint_index, psi_sum, psi_comp, cls_sum, cls_comp)
    copied at the moment trace t finished.
    """
    t_lo, t_hi, marks = args
    p: int = _W["p"]
    table: SpfTable = _W["table"]
    resolve: bool = _W["resolve"]
    analytic: bool = _W["backend"] == "analytic"
    delta_switch: int = _W["delta_switch"]
    label_index = _W["label_index"]
    ncls = len(_W["labels"]) if resolve else 0
    if analytic:
        from .lfunctions import l_value

    psi_s = [0.0] * p
    psi_c = [0.0] * p
    cls_s = [0.0] * ncls
    cls_c = [0.0] * ncls
    snaps = []
    mi = 0
    cache: dict[int, tuple[int, float, tuple[Form, ...]]] = {}
    lw_cache: dict[int, float] = {}

    for t in range(t_lo, t_hi + 1):
        for m, d in trace_decompositions(t, table):
            a = t % p
            if analytic and d > delta_switch:
                w = lw_cache.get(d)
                if w is None:
                    w = 2.0 * math.sqrt(d) * l_value(d, table)
                    lw_cache[d] = w
                psi_s[a], psi_c[a] = _acc(psi_s[a], psi_c[a], w)
                continue
            data = cache.get(d)
            if data is None:
                h, reps = class_number_and_reps(d)
                tau0, _ = pell_from_known(t, m, d)
                data = (h, unit_log(tau0), tuple(reps) if resolve else ())
                cache[d] = data
            h, logeps, reps = data
            psi_s[a], psi_c[a] = _acc(psi_s[a], psi_c[a], h * 2.0 * logeps)
            if resolve:
                w = 2.0 * logeps
                for form in reps:
                    mat = matrix_from_form(t, m, form)
                    label = sl2fp.classify(tuple(v % p for v in mat), p)
                    k = label_index[label]
                    cls_s[k], cls_c[k] = _acc(cls_s[k], cls_c[k], w)
        while mi < len(marks) and marks[mi][0] == t:
            snaps.append((marks[mi][1], psi_s[:], psi_c[:], cls_s[:], cls_c[:]))
            mi += 1
    return snaps, psi_s, psi_c, cls_s, cls_c


def _plan_chunks(t_max: int, chunk: int,
                 checkpoints: Sequence[tuple[int, int]]) -> list[tuple[int, int, tuple]]:
    """Cut [3, t_max] into fixed chunks and assign each checkpoint mark
    to the chunk that contains its trace bound."""
    plans = []
    lo = 3
    while lo <= t_max:
        hi = min(lo + chunk - 1, t_max)
        marks = tuple((tb, i) for tb, i in checkpoints if lo <= tb <= hi)
        plans.append((lo, hi, marks))
        lo = hi + 1
    return plans


def required_table_limit(x: int, backend: str = "exact") -> int:
    """Spf table size covering factorization and root work up to bound x.

    The analytic backend also fills character tables over a full period,
    so it needs the sieve to reach the largest discriminant in range.
    """
    t = trace_bound(x)
    limit = max(4 * t + 16, 64)
    if backend == "analytic":
        limit = max(limit, t * t - 4)
        if limit > 3 * 10**8:
            raise ValueError("analytic backend infeasible at this bound")
    return limit


def line_weight(D: int, table: SpfTable | None = None, backend: str = "exact") -> float:
    """h(D) * log(eps_D) through either backend.

    exact: class cycle count times the chakravala unit logarithm.
    analytic: sqrt(D) * L(1, chi_D) by the class number formula, computed
    through the digamma closed form; needs a table with limit >= D - 1.
    """
    if backend == "exact":
        tau, _ = fundamental_unit(D)
        return class_number(D) * unit_log(tau)
    if backend == "analytic":
        if table is None:
            raise ValueError("the analytic backend needs an spf table")
        from .lfunctions import l_value

        return math.sqrt(D) * l_value(D, table)
    raise ValueError("unknown backend %r" % backend)


def unit_power_oracle(x: int, p: int, d_bound: int | None = None) -> np.ndarray:
    """Per-residue census by scanning discriminants instead of traces.

    For every valid discriminant up to d_bound, finds the fundamental
    unit by an exhaustive scan over s (complete because a unit of norm
    at most x has s at most 2 sqrt(x) / sqrt(D)), then walks the trace
    recurrence over its powers.  Slow and quadratic; it exists purely as
    the second ordering of the same countable set for run_census to be
    checked against.
    """
    sl2fp._require_prime(p)
    tmax = trace_bound(x)
    if d_bound is None:
        d_bound = max(tmax * tmax - 4, 5)
    psi = np.zeros(p)
    for d in range(5, d_bound + 1):
        if not valid_discriminant(d):
            continue
        smax = (2 * math.isqrt(x) + 2) // math.isqrt(d) + 1
        fund = None
        for s in range(1, smax + 1):
            v = 4 + s * s * d
            rv = math.isqrt(v)
            if rv * rv == v:
                fund = rv
                break
        if fund is None or fund > tmax:
            continue
        w = class_number(d) * 2.0 * unit_log(fund)
        t_prev, t_cur = 2, fund
        while t_cur <= tmax:
            psi[t_cur % p] += w
            t_prev, t_cur = t_cur, fund * t_cur - t_prev
    return psi


def run_census(config: RunConfig, table: SpfTable | None = None) -> CensusResult:
    """Run the census at every checkpoint in config.norm_bounds."""
    x_final = config.norm_bounds[-1]
    if table is None:
        table = build_spf_table(required_table_limit(x_final, config.backend))
    t_final = trace_bound(x_final)
    tbounds = tuple(trace_bound(x) for x in config.norm_bounds)
    checkpoints = [(tb, i) for i, tb in enumerate(tbounds) if tb >= 3]
    plans = _plan_chunks(t_final, config.chunk_traces, checkpoints)

    p = config.p
    ncheck = len(config.norm_bounds)
    if config.resolve_classes:
        labels = tuple(c.label for c in sl2fp.class_list(p))
    else:
        labels = None
    ncls = len(labels) if labels else 0

    if config.workers > 1 and len(plans) > 1:
        with ProcessPoolExecutor(
            max_workers=min(config.workers, len(plans)),
            initializer=_init_worker,
            initargs=(p, table, config.resolve_classes, config.backend, config.delta_switch),
        ) as ex:
            results = list(ex.map(_chunk_task, plans))
    else:
        _init_worker(p, table, config.resolve_classes, config.backend, config.delta_switch)
        results = [_chunk_task(plan) for plan in plans]

    psi = np.zeros((ncheck, p))
    cls = np.zeros((ncheck, ncls)) if labels else None
    run_ps = [0.0] * p
    run_pc = [0.0] * p
    run_cs = [0.0] * ncls
    run_cc = [0.0] * ncls

    for snaps, tot_ps, tot_pc, tot_cs, tot_cc in results:
        for ci, sp_s, sp_c, sc_s, sc_c in snaps:
            for a in range(p):
                v, c = run_ps[a], run_pc[a]
                v, c = _acc(v, c, sp_s[a])
                v, c = _acc(v, c, sp_c[a])
                psi[ci, a] = v + c
            for k in range(ncls):
                v, c = run_cs[k], run_cc[k]
                v, c = _acc(v, c, sc_s[k])
                v, c = _acc(v, c, sc_c[k])
                cls[ci, k] = v + c
        for a in range(p):
            run_ps[a], run_pc[a] = _acc(run_ps[a], run_pc[a], tot_ps[a])
            run_ps[a], run_pc[a] = _acc(run_ps[a], run_pc[a], tot_pc[a])
        for k in range(ncls):
            run_cs[k], run_cc[k] = _acc(run_cs[k], run_cc[k], tot_cs[k])
            run_cs[k], run_cc[k] = _acc(run_cs[k], run_cc[k], tot_cc[k])

    return CensusResult(
        config=config,
        trace_bounds=tbounds,
        psi=psi,
        class_labels=labels,
        class_psi=cls,
        table_limit=table.limit,
    )
