import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tracecensus.numtheory import (
    SpfTable,
    build_spf_table,
    divisors_from_factorization,
    factorize,
    is_probable_prime,
    is_square,
    kronecker,
    sqrt_mod,
    sqrt_mod_prime,
    sqrt_mod_prime_power,
)


@pytest.fixture(scope="module")
def table():
    return build_spf_table(10_000)


def naive_spf(n):
    for p in range(2, n + 1):
        if n % p == 0:
            return p
    return 0


def test_spf_pinned_values(table):
    assert int(table.spf[49]) == 7
    assert int(table.spf[15]) == 3
    assert int(table.spf[47]) == 47
    assert int(table.spf[0]) == 0
    assert int(table.spf[1]) == 0


def test_spf_against_naive(table):
    for n in range(2, 2000):
        assert int(table.spf[n]) == naive_spf(n), n


def test_spf_limit_validation():
    with pytest.raises(ValueError):
        build_spf_table(1)


def test_primes_property(table):
    ps = list(table.primes[:10])
    assert ps == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert len(table.primes) == 1229  # pi(10^4)


def test_factorize_pinned(table):
    assert factorize(12, table) == [(2, 2), (3, 1)]
    assert factorize(9997, table) == [(13, 1), (769, 1)]
    assert factorize(1, table) == []
    assert factorize(2, table) == [(2, 1)]
    with pytest.raises(ValueError):
        factorize(0, table)


def test_factorize_roundtrip(table):
    rng = random.Random(11)
    for _ in range(400):
        n = rng.randrange(1, 10_000)
        fac = factorize(n, table)
        prod = 1
        for p, e in fac:
            assert is_probable_prime(p)
            prod *= p**e
        assert prod == n
        assert fac == sorted(fac)


def test_factorize_cofactor_path(table):
    # above the table, single large prime cofactor
    n = 2**3 * 104729  # 104729 = prime > 10^4
    assert factorize(n, table) == [(2, 3), (104729, 1)]
    # prime by size argument: cofactor <= limit^2
    big = 99991  # prime, fits under 10^8
    assert factorize(4 * big, table) == [(2, 2), (99991, 1)]
    # two large primes multiply past limit^2: unsupported
    with pytest.raises(ValueError):
        factorize(1_000_003 * 1_000_033 * 104729**2, table)


def test_divisors(table):
    assert divisors_from_factorization(factorize(12, table)) == [1, 2, 3, 4, 6, 12]
    assert divisors_from_factorization([]) == [1]
    d60 = divisors_from_factorization(factorize(60, table))
    assert len(d60) == 12 and d60 == sorted(d60)


def test_kronecker_pinned():
    assert kronecker(5, 11) == 1
    assert kronecker(8, 2) == 0
    assert kronecker(12, 35) == 1
    assert kronecker(-4, 5) == 1
    assert kronecker(2, 7) == 1
    assert kronecker(2, 3) == -1
    assert kronecker(0, 1) == 1
    assert kronecker(1, 0) == 1
    assert kronecker(2, 0) == 0
    assert kronecker(-1, 0) == 1


def test_kronecker_euler_criterion(table):
    for q in (3, 5, 7, 11, 13, 97, 541, 997):
        for a in range(1, q):
            euler = pow(a, (q - 1) // 2, q)
            want = 1 if euler == 1 else -1
            assert kronecker(a, q) == want, (a, q)


@given(
    a=st.integers(min_value=-500, max_value=500),
    b=st.integers(min_value=-500, max_value=500),
    n=st.integers(min_value=1, max_value=300),
)
def test_kronecker_multiplicative_top(a, b, n):
    assert kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n)


@given(
    a=st.integers(min_value=-500, max_value=500),
    m=st.integers(min_value=1, max_value=60),
    n=st.integers(min_value=1, max_value=60),
)
def test_kronecker_multiplicative_bottom(a, m, n):
    assert kronecker(a, m * n) == kronecker(a, m) * kronecker(a, n)


def test_is_square():
    squares = {k * k for k in range(200)}
    for n in range(-5, 40_000, 7):
        assert is_square(n) == (n in squares)
    assert is_square(0) and is_square(1) and not is_square(-4)


def test_is_probable_prime_small():
    sieve = [True] * 2000
    sieve[0] = sieve[1] = False
    for i in range(2, 45):
        if sieve[i]:
            for j in range(i * i, 2000, i):
                sieve[j] = False
    for n in range(2000):
        assert is_probable_prime(n) == sieve[n], n


def test_is_probable_prime_carmichael():
    for n in (561, 1105, 1729, 2465, 2821, 6601, 8911, 41041, 825265):
        assert not is_probable_prime(n)


def test_sqrt_mod_prime_basic():
    assert sqrt_mod_prime(4, 7) == 2
    assert sqrt_mod_prime(2, 7) in (3, 4)
    assert sqrt_mod_prime(3, 7) is None
    assert sqrt_mod_prime(0, 13) == 0


def test_sqrt_mod_prime_exhaustive():
    for p in (3, 5, 7, 11, 13, 17, 101, 103, 997):  # both 1 and 3 mod 4
        residues = {(x * x) % p for x in range(p)}
        for a in range(p):
            r = sqrt_mod_prime(a, p)
            if a in residues:
                assert r is not None and (r * r - a) % p == 0, (a, p)
                assert r <= p - r
            else:
                assert r is None, (a, p)


def brute_roots(a, modulus):
    return sorted(x for x in range(modulus) if (x * x - a) % modulus == 0)


def test_sqrt_mod_prime_power_exhaustive():
    for p, kmax in ((2, 6), (3, 4), (5, 3), (7, 2)):
        for k in range(1, kmax + 1):
            pk = p**k
            for a in range(pk):
                got = sqrt_mod_prime_power(a, p, k)
                assert got == brute_roots(a, pk), (a, p, k)


def test_sqrt_mod_composite(table):
    rng = random.Random(5)
    moduli = [1, 2, 4, 12, 36, 48, 60, 100, 180, 360, 720]
    moduli += [rng.randrange(2, 2000) for _ in range(40)]
    for m in moduli:
        for _ in range(12):
            a = rng.randrange(0, m) if m > 1 else 0
            assert sqrt_mod(a, m, table) == brute_roots(a, m), (a, m)


@settings(max_examples=150)
@given(
    a=st.integers(min_value=0, max_value=10_000),
    m=st.integers(min_value=1, max_value=500),
)
def test_sqrt_mod_roots_square_back(a, m):
    table = build_spf_table(600)
    for r in sqrt_mod(a, m, table):
        assert 0 <= r < m
        assert (r * r - a) % m == 0
