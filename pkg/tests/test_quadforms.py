import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tracecensus.numtheory import build_spf_table
from tracecensus.quadforms import (
    apply_sl2,
    class_count_bfs,
    class_cycles,
    class_number,
    class_number_and_reps,
    discriminant,
    forms_equivalent_bfs,
    fundamental_unit,
    is_reduced,
    pell_from_known,
    principal_form,
    reduce_form,
    reduced_forms,
    reduced_forms_via_roots,
    rho,
    unit_log,
    valid_discriminant,
)

from oracles import brute_reduced_forms, pell_oracle


def small_discs(lo=5, hi=400):
    return [D for D in range(lo, hi) if D % 4 in (0, 1) and math.isqrt(D) ** 2 != D]


@pytest.fixture(scope="module")
def table():
    return build_spf_table(5000)


def test_valid_discriminant():
    assert valid_discriminant(5)
    assert valid_discriminant(8)
    assert not valid_discriminant(4)
    assert not valid_discriminant(7)
    assert not valid_discriminant(-3)
    assert not valid_discriminant(16)
    with pytest.raises(ValueError):
        reduced_forms(9)


def test_reduced_forms_pinned():
    assert reduced_forms(5) == [(-1, 1, 1), (1, 1, -1)]
    assert reduced_forms(12) == [(-2, 2, 1), (-1, 2, 2), (1, 2, -2), (2, 2, -1)]


def test_class_numbers_pinned():
    expected = {5: 1, 8: 1, 12: 2, 13: 1, 17: 1, 21: 2, 24: 2, 32: 2, 40: 2, 45: 2, 60: 4}
    for D, h in expected.items():
        assert class_number(D) == h, D


def test_forms_match_brute_oracle():
    for D in small_discs(5, 300):
        assert reduced_forms(D) == brute_reduced_forms(D), D


def test_forms_match_root_route(table):
    for D in small_discs(5, 300) + [997 * 4 + 1, 3989, 4001]:
        assert reduced_forms(D) == reduced_forms_via_roots(D, table), D


def test_all_enumerated_forms_are_reduced_primitive():
    for D in small_discs(5, 200):
        for f in reduced_forms(D):
            assert is_reduced(f), (D, f)
            assert discriminant(f) == D
            assert math.gcd(f[0], f[1], f[2]) == 1


def test_rho_permutes_reduced_forms():
    for D in small_discs(5, 200):
        forms = set(reduced_forms(D))
        image = {rho(f, D) for f in forms}
        assert image == forms, D


def test_cycles_partition():
    for D in small_discs(5, 150):
        cycles = class_cycles(D)
        flat = [f for cyc in cycles for f in cyc]
        assert sorted(flat) == reduced_forms(D)
        for cyc in cycles:
            assert rho(cyc[-1], D) == cyc[0]
            for f, g in zip(cyc, cyc[1:]):
                assert rho(f, D) == g


def test_class_count_agrees_with_bfs_partition():
    for D in small_discs(5, 250):
        assert class_number(D) == class_count_bfs(D), D


def test_principal_form():
    for D in small_discs(5, 200):
        f = principal_form(D)
        assert f[0] == 1 and is_reduced(f) and discriminant(f) == D


def test_reduce_form_reaches_equivalent_reduced():
    rng = random.Random(7)
    for _ in range(150):
        D = rng.choice(small_discs(5, 120))
        f = principal_form(D)
        # scramble by a random word in the generators
        for _ in range(rng.randrange(1, 8)):
            mat = rng.choice([(0, -1, 1, 0), (1, 1, 0, 1), (1, -1, 0, 1)])
            f = apply_sl2(f, mat)
        g = reduce_form(f)
        assert is_reduced(g) and discriminant(g) == D
        assert forms_equivalent_bfs(g, principal_form(D))


def test_bfs_separates_pinned_classes():
    # D = 12: (1,2,-2) and (2,2,-1) sit in different strict classes
    assert not forms_equivalent_bfs((1, 2, -2), (2, 2, -1))
    assert forms_equivalent_bfs((1, 2, -2), (-2, 2, 1))


@settings(max_examples=120, deadline=None)
@given(st.integers(min_value=5, max_value=2000), st.data())
def test_apply_sl2_preserves_discriminant_and_reduction_closes(D, data):
    if D % 4 not in (0, 1) or math.isqrt(D) ** 2 == D:
        return
    forms = reduced_forms(D)
    f = data.draw(st.sampled_from(forms))
    word = data.draw(
        st.lists(st.sampled_from([(0, -1, 1, 0), (1, 1, 0, 1), (1, -1, 0, 1)]), max_size=6)
    )
    g = f
    for mat in word:
        g = apply_sl2(g, mat)
    assert discriminant(g) == D
    assert reduce_form(g) in forms


def test_pell_pinned():
    expected = {
        5: (3, 1),
        8: (6, 2),
        12: (4, 1),
        13: (11, 3),
        17: (66, 16),
        21: (5, 1),
        24: (10, 2),
        28: (16, 3),
        32: (6, 1),
        33: (46, 8),
        45: (7, 1),
        60: (8, 1),
    }
    for D, ts in expected.items():
        assert fundamental_unit(D) == ts, D


def test_pell_matches_cf_oracle():
    for D in small_discs(5, 500):
        tau, s = fundamental_unit(D)
        assert tau * tau - D * s * s == 4
        assert (tau, s) == pell_oracle(D), D


def test_pell_is_minimal_small():
    # brute scan over s confirms minimality where that is feasible
    for D in small_discs(5, 120):
        tau, s = fundamental_unit(D)
        for s2 in range(1, s):
            v = 4 + s2 * s2 * D
            assert math.isqrt(v) ** 2 != v, (D, s2)


def test_pell_large_regulator():
    # D = 1726 has a famously large fundamental solution for its size
    tau, s = fundamental_unit(1726 * 4)
    assert tau * tau - 1726 * 4 * s * s == 4
    assert tau > 10**20


def test_pell_from_known():
    for D in small_discs(5, 400):
        tau, s = fundamental_unit(D)
        assert pell_from_known(tau, s, D) == (tau, s), D
        # square and cube of the unit are still solutions, some enormous
        t2, m2 = tau * tau - 2, tau * s
        assert pell_from_known(t2, m2, D) == (tau, s), D
        t3, m3 = tau**3 - 3 * tau, s * (tau * tau - 1)
        assert t3 * t3 - m3 * m3 * D == 4
        assert pell_from_known(t3, m3, D) == (tau, s), D
    with pytest.raises(ValueError):
        pell_from_known(3, 1, 8)


def test_pell_from_known_mixed_orders():
    # trace 47 solves the unit equation for both D=5 (as the 4th power of
    # the D=5 unit) and D=45 (as the square of the D=45 unit); the root
    # descent must keep the two apart
    assert pell_from_known(47, 21, 5) == (3, 1)
    assert pell_from_known(47, 7, 45) == (7, 1)


def test_unit_log():
    assert unit_log(3) == pytest.approx(math.log((3 + math.sqrt(5)) / 2))
    assert unit_log(6) == pytest.approx(math.log(3 + math.sqrt(8)))
    big = 10**40
    assert unit_log(big) == pytest.approx(math.log(big))


def test_reduced_forms_deterministic():
    assert reduced_forms(3 * 10**4 + 1) == reduced_forms(3 * 10**4 + 1)
