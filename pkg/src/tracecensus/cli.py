"""Command line front end.

Subcommands: census (residue-mass series), classes (conjugacy tables),
verify (internal consistency gauntlet), by-class (class-resolved census),
fit (error exponent from a stored series), psi (totals only).

Exit codes: 0 success, 1 verification failure, 2 usage or argument error.
The environment variable TRACECENSUS_THREADS, when set, overrides the
--threads flag.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .analysis import class_report, error_exponent_fit
from .census import RunConfig, run_census, trace_bound, unit_power_oracle
from .numtheory import build_spf_table
from .quadforms import (
    class_count_bfs,
    class_number,
    fundamental_unit,
    pell_from_known,
    reduced_forms,
    reduced_forms_via_roots,
    valid_discriminant,
)
from .sl2fp import (
    brute_force_classes,
    class_list,
    class_mass,
    group_order,
    predicted_density,
)

CSV_HEADER = "x,p,a,psi_a,psi_pm,predicted,abs_err,rel_err"


def _fmt(v: float) -> str:
    return "%.17g" % v


def _label_str(label) -> str:
    return ":".join(str(part) for part in label)


def _threads(args) -> int:
    env = os.environ.get("TRACECENSUS_THREADS")
    if env is not None:
        try:
            n = int(env)
        except ValueError:
            raise ValueError("TRACECENSUS_THREADS must be an integer, got %r" % env) from None
        if n < 1:
            raise ValueError("TRACECENSUS_THREADS must be positive")
        return n
    return args.threads


def _checkpoint_grid(x_max: int, count: int) -> tuple[int, ...]:
    """Geometric grid of integer checkpoints from 100 to x_max."""
    if x_max < 1:
        raise ValueError("x must be positive")
    if count < 1:
        raise ValueError("checkpoints must be positive")
    if x_max <= 100 or count == 1:
        return (x_max,)
    pts = {
        int(round(100.0 * (x_max / 100.0) ** (k / (count - 1))))
        for k in range(count)
    }
    pts.add(x_max)
    return tuple(sorted(pt for pt in pts if pt >= 1))


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _series_doc(results) -> dict:
    cfg = results[0].config
    doc = {
        "format": "census_series",
        "format_version": 1,
        "package_version": __version__,
        "config": {
            "norm_bounds": list(cfg.norm_bounds),
            "workers": cfg.workers,
            "chunk_traces": cfg.chunk_traces,
            "backend": cfg.backend,
            "delta_switch": cfg.delta_switch,
            "resolve_classes": cfg.resolve_classes,
        },
        "series": [],
    }
    for res in results:
        p = res.config.p
        fold = res.folded()
        rows = []
        for i, x in enumerate(res.config.norm_bounds):
            for a in range(p):
                pred = predicted_density(p, a)
                predf = float(pred)
                pm = float(fold[i, a])
                rows.append(
                    {
                        "x": x,
                        "a": a,
                        "psi_a": float(res.psi[i, a]),
                        "psi_pm": pm,
                        "predicted": predf,
                        "predicted_num": pred.numerator,
                        "predicted_den": pred.denominator,
                        "abs_err": abs(pm / x - predf),
                        "rel_err": abs(pm / x - predf) / predf,
                    }
                )
        totals = [
            {"x": x, "psi": float(res.psi_total()[i]), "ratio": float(res.psi_total()[i]) / x}
            for i, x in enumerate(res.config.norm_bounds)
        ]
        entry = {
            "p": p,
            "table_limit": res.table_limit,
            "trace_bounds": list(res.trace_bounds),
            "rows": rows,
            "totals": totals,
        }
        if res.class_psi is not None:
            masses = class_mass(p)
            classes = []
            for i, x in enumerate(res.config.norm_bounds):
                for k, cls in enumerate(class_list(p)):
                    pred = masses[cls.label]
                    classes.append(
                        {
                            "x": x,
                            "label": _label_str(cls.label),
                            "trace": cls.trace,
                            "empirical": float(res.class_psi[i, k]) / x,
                            "predicted_num": pred.numerator,
                            "predicted_den": pred.denominator,
                        }
                    )
            entry["classes"] = classes
        doc["series"].append(entry)
    return doc


def _series_csv(results) -> str:
    lines = [CSV_HEADER]
    for res in results:
        p = res.config.p
        fold = res.folded()
        for i, x in enumerate(res.config.norm_bounds):
            for a in range(p):
                predf = float(predicted_density(p, a))
                pm = float(fold[i, a])
                lines.append(
                    "%d,%d,%d,%s,%s,%s,%s,%s"
                    % (
                        x,
                        p,
                        a,
                        _fmt(float(res.psi[i, a])),
                        _fmt(pm),
                        _fmt(predf),
                        _fmt(abs(pm / x - predf)),
                        _fmt(abs(pm / x - predf) / predf),
                    )
                )
    return "\n".join(lines) + "\n"


def _cmd_census(args) -> int:
    xs = _checkpoint_grid(args.x, args.checkpoints)
    results = []
    for p in args.p:
        cfg = RunConfig(
            p=p,
            norm_bounds=xs,
            workers=_threads(args),
            chunk_traces=args.chunk_traces,
            backend=args.backend,
            delta_switch=args.delta_switch,
        )
        results.append(run_census(cfg))
    if args.format == "csv":
        _write_text(args.out, _series_csv(results))
    else:
        _write_text(args.out, json.dumps(_series_doc(results), indent=1) + "\n")
    return 0


def _cmd_classes(args) -> int:
    p = args.p[0] if isinstance(args.p, list) else args.p
    classes = class_list(p)
    masses = class_mass(p)
    if args.format == "json":
        doc = {
            "p": p,
            "group_order": group_order(p),
            "classes": [
                {
                    "label": _label_str(c.label),
                    "trace": c.trace,
                    "size": c.size,
                    "centralizer": c.centralizer,
                    "mass_num": masses[c.label].numerator,
                    "mass_den": masses[c.label].denominator,
                }
                for c in classes
            ],
        }
        _write_text(args.out, json.dumps(doc, indent=1) + "\n")
        return 0
    if args.format == "csv":
        lines = ["label,trace,size,centralizer,mass_num,mass_den"]
        for c in classes:
            m = masses[c.label]
            lines.append(
                "%s,%d,%d,%d,%d,%d"
                % (_label_str(c.label), c.trace, c.size, c.centralizer, m.numerator, m.denominator)
            )
        _write_text(args.out, "\n".join(lines) + "\n")
        return 0
    buf = io.StringIO()
    buf.write("conjugacy classes of SL2(F_%d), order %d\n" % (p, group_order(p)))
    buf.write("%-16s %6s %10s %12s %12s\n" % ("label", "trace", "size", "centralizer", "mass"))
    for c in classes:
        m = masses[c.label]
        buf.write(
            "%-16s %6d %10d %12d %8d/%-6d\n"
            % (_label_str(c.label), c.trace, c.size, c.centralizer, m.numerator, m.denominator)
        )
    _write_text(args.out, buf.getvalue())
    return 0


def _cmd_by_class(args) -> int:
    cfg = RunConfig(
        p=args.p[0] if isinstance(args.p, list) else args.p,
        norm_bounds=_checkpoint_grid(args.x, args.checkpoints),
        workers=_threads(args),
        chunk_traces=args.chunk_traces,
        resolve_classes=True,
    )
    res = run_census(cfg)
    if args.format == "json":
        _write_text(args.out, json.dumps(_series_doc([res]), indent=1) + "\n")
        return 0
    rep = class_report(res)
    buf = io.StringIO()
    buf.write("class-resolved census, p=%d, x=%d\n" % (rep.p, rep.x))
    buf.write("%-16s %6s %14s %14s %8s\n" % ("label", "trace", "empirical", "predicted", "ratio"))
    for row in rep.rows:
        buf.write(
            "%-16s %6d %14.8f %9d/%-6d %8.4f\n"
            % (
                _label_str(row.label),
                row.trace,
                row.empirical,
                row.predicted.numerator,
                row.predicted.denominator,
                row.ratio,
            )
        )
    buf.write(
        "global constant c=%d (worst relative deviation %.4f)\n"
        % (rep.constant, rep.worst_rel_dev)
    )
    _write_text(args.out, buf.getvalue())
    return 0


def _cmd_psi(args) -> int:
    xs = _checkpoint_grid(args.x, args.checkpoints)
    cfg = RunConfig(p=2, norm_bounds=xs, workers=_threads(args), chunk_traces=args.chunk_traces)
    res = run_census(cfg)
    buf = io.StringIO()
    buf.write("%12s %8s %20s %12s %12s\n" % ("x", "T(x)", "psi", "psi/x", "|psi/x-1|"))
    totals = res.psi_total()
    for i, x in enumerate(xs):
        r = float(totals[i]) / x
        buf.write("%12d %8d %20.8f %12.8f %12.3e\n" % (x, res.trace_bounds[i], totals[i], r, abs(r - 1)))
    _write_text(args.out, buf.getvalue())
    return 0


def _cmd_fit(args) -> int:
    points_by_p = _load_error_series(args.infile)
    if not points_by_p:
        print("no usable rows in %s" % args.infile, file=sys.stderr)
        return 2
    buf = io.StringIO()
    for p in sorted(points_by_p):
        if args.p and p not in args.p:
            continue
        try:
            fit = error_exponent_fit(points_by_p[p], min_x=args.min_x)
        except ValueError as exc:
            print("p=%d: %s" % (p, exc), file=sys.stderr)
            return 2
        buf.write(
            "p=%d  beta=%.4f  coeff=%.4g  residual=%.4f  points=%d (dropped %d)\n"
            % (p, fit.beta, fit.coeff, fit.residual, fit.points_used, fit.points_dropped)
        )
    _write_text(args.out, buf.getvalue())
    return 0


def _load_error_series(path: str) -> dict[int, list[tuple[int, float]]]:
    """Per-prime (x, max-over-a absolute error) points from a stored report."""
    by_key: dict[tuple[int, int], float] = {}
    if path.endswith(".json"):
        with open(path) as fh:
            doc = json.load(fh)
        for entry in doc.get("series", []):
            p = entry["p"]
            for row in entry["rows"]:
                key = (p, row["x"])
                err = row["abs_err"] * row["x"]
                by_key[key] = max(by_key.get(key, 0.0), err)
    else:
        with open(path, newline="") as fh:
            for row in csv.DictReader(fh):
                key = (int(row["p"]), int(row["x"]))
                err = float(row["abs_err"]) * int(row["x"])
                by_key[key] = max(by_key.get(key, 0.0), err)
    out: dict[int, list[tuple[int, float]]] = {}
    for (p, x), err in sorted(by_key.items()):
        out.setdefault(p, []).append((x, err))
    return out


def _cmd_verify(args) -> int:
    failures = 0
    threads = _threads(args)

    def report(ok: bool, name: str, detail: str) -> None:
        nonlocal failures
        if not ok:
            failures += 1
        print("%s %s (%s)" % ("PASS" if ok else "FAIL", name, detail))

    # conjugacy tables against the raw orbit partition
    ok = True
    detail = []
    for p in args.p:
        if p <= 13:
            want = sorted((c.trace, c.size, c.centralizer) for c in class_list(p))
            ok = ok and brute_force_classes(p) == want
            detail.append("p=%d orbits" % p)
        else:
            total = sum(c.size for c in class_list(p))
            ok = ok and total == group_order(p)
            detail.append("p=%d class equation" % p)
        ok = ok and sum(predicted_density(p, a) for a in range(p)) == 1
    report(ok, "conjugacy-tables", ", ".join(detail))

    # form enumeration dual routes over the discriminants in census range
    tmax = trace_bound(args.x)
    dmax = max(tmax * tmax - 4, 5)
    table = build_spf_table(max(4 * math.isqrt(dmax) + 16, 4 * tmax + 16, 64))
    checked = bfs_checked = 0
    ok = True
    first_bad = None
    for d in range(5, dmax + 1):
        if not valid_discriminant(d):
            continue
        checked += 1
        if reduced_forms(d) != sorted(reduced_forms_via_roots(d, table)):
            ok = False
            first_bad = first_bad or d
        if d <= args.bfs_cap:
            bfs_checked += 1
            if class_number(d) != class_count_bfs(d):
                ok = False
                first_bad = first_bad or d
    report(
        ok,
        "form-enumeration",
        "%d discriminants, %d with orbit search" % (checked, bfs_checked)
        if ok
        else "first mismatch at D=%d" % first_bad,
    )

    # fundamental unit recovery from proper powers
    ok = True
    n = 0
    for d in range(5, min(dmax, 2000) + 1):
        if not valid_discriminant(d):
            continue
        n += 1
        tau, s = fundamental_unit(d)
        if pell_from_known(tau * tau - 2, tau * s, d) != (tau, s):
            ok = False
            break
        t3, m3 = tau**3 - 3 * tau, s * (tau * tau - 1)
        if pell_from_known(t3, m3, d) != (tau, s):
            ok = False
            break
    report(ok, "unit-recovery", "%d discriminants" % n)

    # census against the discriminant-ordered enumeration
    ok = True
    worst = 0.0
    for p in args.p:
        res = run_census(RunConfig(p=p, norm_bounds=(args.x,), workers=threads))
        want = unit_power_oracle(args.x, p)
        gap = float(np.max(np.abs(res.psi[0] - want) / np.maximum(want, 1e-300)))
        worst = max(worst, gap)
        ok = ok and gap <= 1e-9
    report(ok, "census-dual-enumeration", "x=%d, worst rel gap %.2e" % (args.x, worst))

    # determinism across worker counts
    ok = True
    for p in args.p:
        base = run_census(RunConfig(p=p, norm_bounds=(args.x,), workers=1, chunk_traces=16))
        for w in (4, 8):
            other = run_census(RunConfig(p=p, norm_bounds=(args.x,), workers=w, chunk_traces=16))
            ok = ok and np.array_equal(base.psi, other.psi)
    report(ok, "parallel-determinism", "workers 1/4/8")

    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tracecensus",
        description="Weighted trace census of hyperbolic classes against SL2(F_p) conjugacy data.",
    )
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, with_primes=True, default_p=(5,)):
        if with_primes:
            sp.add_argument(
                "--p",
                type=int,
                action="append",
                help="prime modulus, repeatable (default %s)" % (default_p,),
            )
        sp.add_argument("--threads", type=int, default=1, help="worker processes (default 1)")
        sp.add_argument("--chunk-traces", type=int, default=512, help="trace lines per chunk (default 512)")
        sp.add_argument("--out", help="output path (default stdout)")

    sp = sub.add_parser("census", help="run the residue-mass census")
    sp.add_argument("--x", type=int, required=True, help="norm bound")
    sp.add_argument("--checkpoints", type=int, default=20, help="geometric grid points from 100 to x (default 20)")
    sp.add_argument("--backend", choices=("exact", "analytic"), default="exact")
    sp.add_argument("--delta-switch", type=int, default=10**6, help="analytic crossover discriminant (default 1e6)")
    sp.add_argument(
        "--l-tol",
        type=float,
        default=1e-4,
        help="reserved: the analytic route is exact to roundoff, no tolerance is consumed",
    )
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    add_common(sp)
    sp.set_defaults(func=_cmd_census)

    sp = sub.add_parser("classes", help="print the conjugacy class table")
    sp.add_argument("--p", type=int, default=5, help="prime modulus (default 5)")
    sp.add_argument("--format", choices=("text", "csv", "json"), default="text")
    sp.add_argument("--out", help="output path (default stdout)")
    sp.set_defaults(func=_cmd_classes)

    sp = sub.add_parser("verify", help="run the internal consistency suites")
    sp.add_argument("--x", type=int, default=500, help="norm bound for the census suites (default 500)")
    sp.add_argument("--bfs-cap", type=int, default=500, help="orbit-search ceiling for class counts (default 500)")
    add_common(sp, default_p=(2, 3, 5, 7))
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("by-class", help="class-resolved census report")
    sp.add_argument("--x", type=int, default=10**4, help="norm bound (default 10000)")
    sp.add_argument("--checkpoints", type=int, default=1, help="geometric grid points (default 1: final bound only)")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    add_common(sp, default_p=(3,))
    sp.set_defaults(func=_cmd_by_class)

    sp = sub.add_parser("fit", help="error-exponent fit from a stored census report")
    sp.add_argument("--in", dest="infile", required=True, help="census report path (.csv or .json)")
    sp.add_argument("--p", type=int, action="append", help="restrict to these primes")
    sp.add_argument("--min-x", type=float, default=100.0, help="exclude checkpoints below this (default 100)")
    sp.add_argument("--out", help="output path (default stdout)")
    sp.set_defaults(func=_cmd_fit)

    sp = sub.add_parser("psi", help="totals only")
    sp.add_argument("--x", type=int, required=True, help="norm bound")
    sp.add_argument("--checkpoints", type=int, default=20, help="geometric grid points (default 20)")
    add_common(sp, with_primes=False)
    sp.set_defaults(func=_cmd_psi)

    return parser


_DEFAULT_PRIMES = {"census": [5], "verify": [2, 3, 5, 7], "by-class": [3]}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "p", 0) is None and args.command in _DEFAULT_PRIMES:
        args.p = _DEFAULT_PRIMES[args.command]
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
