import math

import numpy as np
import pytest

from tracecensus.census import (
    CensusResult,
    RunConfig,
    matrix_from_form,
    required_table_limit,
    run_census,
    trace_bound,
    trace_decompositions,
)
from tracecensus.numtheory import build_spf_table
from tracecensus.quadforms import class_number_and_reps, discriminant
from tracecensus import sl2fp

import oracles

TABLE = build_spf_table(6000)


def test_trace_bound_pinned():
    assert trace_bound(50) == 7
    assert trace_bound(10**4) == 100
    assert trace_bound(7) == 3
    assert trace_bound(6) == 2
    assert trace_bound(1) == 2
    # eps_7^2 = 46.97..., so 46 excludes trace 7 and 47 includes it
    assert trace_bound(46) == 6
    assert trace_bound(47) == 7


def test_trace_bound_is_exact_cutoff():
    for x in range(1, 4000):
        t = trace_bound(x)
        # norm of the trace-t unit is ((t + sqrt(t^2-4))/2)^2 <= x,
        # equivalently t*isqrt-free check t^2 x <= (x+1)^2
        assert t * t * x <= (x + 1) ** 2
        assert (t + 1) ** 2 * x > (x + 1) ** 2


def test_decompositions_pinned():
    assert trace_decompositions(3, TABLE) == [(1, 5)]
    assert trace_decompositions(4, TABLE) == [(1, 12)]
    assert trace_decompositions(5, TABLE) == [(1, 21)]
    assert trace_decompositions(6, TABLE) == [(1, 32), (2, 8)]
    assert trace_decompositions(7, TABLE) == [(1, 45), (3, 5)]
    assert trace_decompositions(10, TABLE) == [(1, 96), (2, 24)]
    assert trace_decompositions(18, TABLE) == [(1, 320), (2, 80), (4, 20), (8, 5)]


def test_decompositions_against_divisor_scan():
    for t in range(3, 320):
        n = t * t - 4
        want = set()
        for m in range(1, math.isqrt(n) + 1):
            if n % (m * m) == 0 and (n // (m * m)) % 4 in (0, 1):
                want.add((m, n // (m * m)))
        assert set(trace_decompositions(t, TABLE)) == want, t


def test_matrix_fixes_its_form():
    for t in (3, 7, 18, 51, 100):
        for m, d in trace_decompositions(t, TABLE):
            _, reps = class_number_and_reps(d)
            for form in reps:
                n11, n12, n21, n22 = matrix_from_form(t, m, form)
                assert n11 + n22 == t
                assert n11 * n22 - n12 * n21 == 1
                aa, bb, cc = m * form[0], m * form[1], m * form[2]
                q = lambda x, y: aa * x * x + bb * x * y + cc * y * y
                for v in ((1, 0), (0, 1), (1, 1), (2, -3)):
                    w = (n11 * v[0] + n12 * v[1], n21 * v[0] + n22 * v[1])
                    assert q(*w) == q(*v), (t, m, form)


def test_census_x50_hand_value():
    # every (t, m, D) for x = 50 worked out by hand:
    # t=3:(1,5) h=1 tau=3; t=4:(1,12) h=2 tau=4; t=5:(1,21) h=2 tau=5;
    # t=6:(1,32) h=2 and (2,8) h=1, both tau=6; t=7:(1,45) h=2 tau=7
    # and (3,5) h=1 tau=3.
    want = [0.0] * 5
    want[3] += 1 * 2 * math.acosh(1.5)
    want[4] += 2 * 2 * math.acosh(2.0)
    want[0] += 2 * 2 * math.acosh(2.5)
    want[1] += 2 * 2 * math.acosh(3.0) + 1 * 2 * math.acosh(3.0)
    want[2] += 2 * 2 * math.acosh(3.5) + 1 * 2 * math.acosh(1.5)
    res = run_census(RunConfig(p=5, norm_bounds=(50,)))
    assert res.trace_bounds == (7,)
    np.testing.assert_allclose(res.psi[0], want, rtol=1e-13, atol=1e-13)


@pytest.mark.parametrize("p", [2, 5])
def test_census_against_discriminant_scan(p):
    x = 400
    res = run_census(RunConfig(p=p, norm_bounds=(x,)))
    want, want_total = oracles.psi_by_discriminant_scan(x, p)
    np.testing.assert_allclose(res.psi[0], want, rtol=1e-9)
    assert abs(res.psi_total()[0] - want_total) < 1e-9 * want_total


def test_checkpoints_match_individual_runs():
    xs = (40, 100, 700, 2500)
    combined = run_census(RunConfig(p=7, norm_bounds=xs, chunk_traces=16))
    for i, x in enumerate(xs):
        single = run_census(RunConfig(p=7, norm_bounds=(x,), chunk_traces=16))
        assert np.array_equal(combined.psi[i], single.psi[0]), x


def test_tiny_bound_has_empty_census():
    res = run_census(RunConfig(p=3, norm_bounds=(2, 6, 50)))
    assert np.all(res.psi[0] == 0.0)
    assert np.all(res.psi[1] == 0.0)
    assert res.psi[2].sum() > 0


def test_worker_count_does_not_change_bits():
    cfg1 = RunConfig(p=7, norm_bounds=(150, 4000), chunk_traces=16, workers=1)
    cfg3 = RunConfig(p=7, norm_bounds=(150, 4000), chunk_traces=16, workers=3)
    r1 = run_census(cfg1)
    r3 = run_census(cfg3)
    assert np.array_equal(r1.psi, r3.psi)


def test_worker_count_does_not_change_bits_with_classes():
    kw = dict(p=5, norm_bounds=(120, 3000), chunk_traces=16, resolve_classes=True)
    r1 = run_census(RunConfig(workers=1, **kw))
    r4 = run_census(RunConfig(workers=4, **kw))
    assert np.array_equal(r1.psi, r4.psi)
    assert np.array_equal(r1.class_psi, r4.class_psi)
    assert r1.class_labels == r4.class_labels


def test_class_resolution_consistency():
    res = run_census(RunConfig(p=5, norm_bounds=(500, 2000), resolve_classes=True))
    classes = sl2fp.class_list(5)
    assert res.class_labels == tuple(c.label for c in classes)
    # grouping the class masses by trace residue recovers psi
    for i in range(2):
        by_trace = [0.0] * 5
        for k, cls in enumerate(classes):
            by_trace[cls.trace] += res.class_psi[i, k]
        np.testing.assert_allclose(by_trace, res.psi[i], rtol=1e-9)
        np.testing.assert_allclose(
            res.class_psi[i].sum(), res.psi[i].sum(), rtol=1e-9
        )


def test_folded_masses():
    res = run_census(RunConfig(p=7, norm_bounds=(1000,)))
    fold = res.folded()
    for a in range(7):
        assert fold[0, a] == fold[0, (-a) % 7]
        assert abs(fold[0, a] - 0.5 * (res.psi[0, a] + res.psi[0, (-a) % 7])) < 1e-15


def test_required_table_limit_covers_run():
    x = 2500
    table = build_spf_table(required_table_limit(x))
    res = run_census(RunConfig(p=3, norm_bounds=(x,)), table=table)
    assert res.table_limit == table.limit
    assert res.psi_total()[0] > 0


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig(p=4, norm_bounds=(100,))
    with pytest.raises(ValueError):
        RunConfig(p=5, norm_bounds=())
    with pytest.raises(ValueError):
        RunConfig(p=5, norm_bounds=(100, 100))
    with pytest.raises(ValueError):
        RunConfig(p=5, norm_bounds=(200, 100))
    with pytest.raises(ValueError):
        RunConfig(p=5, norm_bounds=(100,), workers=0)
    with pytest.raises(ValueError):
        RunConfig(p=5, norm_bounds=(100,), chunk_traces=4)
    with pytest.raises(ValueError):
        trace_decompositions(2, TABLE)
    with pytest.raises(ValueError):
        trace_bound(0)


def test_ratio_drifts_toward_one():
    res = run_census(RunConfig(p=3, norm_bounds=(200, 2000, 20000)))
    ratios = res.psi_total() / np.array(res.config.norm_bounds, dtype=float)
    gaps = np.abs(ratios - 1.0)
    assert gaps[2] < gaps[0]
    assert gaps[2] < 0.05
