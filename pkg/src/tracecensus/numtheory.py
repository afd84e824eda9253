"""Sieve-backed factorization, Kronecker symbol, modular square roots.

Everything here is exact integer arithmetic.  The smallest-prime-factor table
is the one shared piece of state: build it once, sized a little past the
largest trace you will census, and every t-2 / t+2 factorization is a table
walk instead of trial division.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SpfTable",
    "build_spf_table",
    "factorize",
    "divisors_from_factorization",
    "kronecker",
    "is_square",
    "is_probable_prime",
    "sqrt_mod_prime",
    "sqrt_mod_prime_power",
    "sqrt_mod",
]


@dataclass(frozen=True)
class SpfTable:
    """Smallest-prime-factor table for 0..limit (spf[0] = spf[1] = 0)."""

    limit: int
    spf: np.ndarray = field(repr=False)

    @property
    def primes(self) -> np.ndarray:
        idx = np.arange(self.limit + 1, dtype=self.spf.dtype)
        return np.nonzero(self.spf == idx)[0][1:]  # [1:] drops the spf[0]==0 match


def build_spf_table(limit: int) -> SpfTable:
    """Sieve smallest prime factors for every n <= limit.

    limit must be >= 2.  Uses the classical refinement that a composite
    i*k with k < i already got its factor from k, so each prime only
    writes from i*i upward into still-unset slots.
    """
    if limit < 2:
        raise ValueError("spf table limit must be >= 2, got %r" % (limit,))
    spf = np.zeros(limit + 1, dtype=np.int64)
    for i in range(2, math.isqrt(limit) + 1):
        if spf[i] == 0:
            sl = spf[i * i :: i]
            sl[sl == 0] = i
    # whatever is still unset (n >= 2) is prime
    rest = np.nonzero(spf == 0)[0]
    spf[rest] = rest
    spf[0] = 0
    spf[1] = 0
    return SpfTable(limit=limit, spf=spf)


# Deterministic Miller-Rabin bases, valid for all n < 3.3 * 10^24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with fixed bases (deterministic far past 64 bits)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int, table: SpfTable) -> list[tuple[int, int]]:
    """Prime factorization of n >= 1 as a sorted list of (prime, exponent).

    For n <= table.limit this is a pure table walk.  Larger n are trial
    divided by the sieved primes; the surviving cofactor must be prime
    (it is proven prime when <= limit^2, and Miller-Rabin checked above
    that), otherwise the input is outside the supported domain.
    """
    if n < 1:
        raise ValueError("factorize expects n >= 1, got %r" % (n,))
    if n == 1:
        return []
    out: list[tuple[int, int]] = []
    if n <= table.limit:
        spf = table.spf
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out
    # cofactor path: strip everything the table can see, then judge the rest
    m = n
    spf = table.spf
    limit = table.limit
    if m % 2 == 0:
        e = 0
        while m % 2 == 0:
            m //= 2
            e += 1
        out.append((2, e))
    p = 3
    while p * p <= m and p <= limit:
        if int(spf[p]) == p and m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 2
    if m > 1:
        if m <= limit * limit:
            out.append((m, 1))  # no factor <= limit and m <= limit^2 => prime
        elif is_probable_prime(m):
            out.append((m, 1))
        else:
            raise ValueError(
                "unsupported input: cofactor %d exceeds limit^2 and is composite" % m
            )
    out.sort()
    return out


def divisors_from_factorization(factors: list[tuple[int, int]]) -> list[int]:
    """All positive divisors, ascending."""
    divs = [1]
    for p, e in factors:
        pe = 1
        new = list(divs)
        for _ in range(e):
            pe *= p
            new.extend(d * pe for d in divs)
        divs = new
    divs.sort()
    return divs


# (2/n) table indexed by n & 7: nonzero only for odd n, +1 iff n = +-1 mod 8.
_TAB2 = (0, 1, 0, -1, 0, -1, 0, 1)


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), full domain, by reciprocity recursion."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    k = 1
    if n < 0:
        n = -n
        if a < 0:
            k = -k
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v > 0:
        if a % 2 == 0:
            return 0  # shared factor 2
        if v % 2 == 1:
            k *= _TAB2[a & 7]
    # now n is odd and positive; standard Jacobi loop with 2-extraction
    a %= n
    while a != 0:
        v = 0
        while a % 2 == 0:
            a //= 2
            v += 1
        if v % 2 == 1:
            k *= _TAB2[n & 7]
        # reciprocity flip: both a and n odd, flip sign iff both = 3 mod 4
        if a & n & 2:
            k = -k
        a, n = n % a, a
    return k if n == 1 else 0


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def sqrt_mod_prime(a: int, p: int) -> int | None:
    """Smallest square root of a modulo an odd prime p, or None.

    Tonelli-Shanks with a deterministic non-residue search, so the result
    is reproducible.  Returns r with r^2 = a (mod p) and r <= p - r.
    """
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a % 2
    if kronecker(a, p) != 1:
        return None
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
        return min(r, p - r)
    # write p-1 = q * 2^s with q odd
    q = p - 1
    s = 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while kronecker(z, p) != -1:
        z += 1
    c = pow(z, q, p)
    r = pow(a, (q + 1) // 2, p)
    t = pow(a, q, p)
    m = s
    while t != 1:
        # find least i with t^(2^i) = 1
        i = 0
        t2 = t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        r = r * b % p
        c = b * b % p
        t = t * c % p
        m = i
    return min(r, p - r)


def sqrt_mod_prime_power(a: int, p: int, k: int) -> list[int]:
    """All square roots of a modulo p^k, sorted.

    Handles p | a (the valuation-splitting cases) and p = 2 (where the
    root count is 0, 1, 2 or 4 and lifting gains a branch per step).
    """
    pk = p ** k
    a %= pk
    if k == 0:
        return [0]
    if a == 0:
        # x = 0 mod p^ceil(k/2); p^floor(k/2) such residues mod p^k
        step = p ** ((k + 1) // 2)
        return list(range(0, pk, step))
    # split off the exact power of p
    v = 0
    u = a
    while u % p == 0:
        u //= p
        v += 1
    if v % 2 == 1:
        return []
    h = v // 2
    # roots of u mod p^(k-v), then scale by p^h; each lifts p^h ways mod p^k
    base = _sqrt_mod_unit(u, p, k - v)
    if not base:
        return []
    mod_small = p ** (k - v + h)  # roots x = p^h * y live mod p^(k-v+h)
    out = set()
    for y in base:
        x0 = (p ** h) * y % mod_small
        for j in range(p ** (v - h)):
            out.add((x0 + j * mod_small) % pk)
    return sorted(out)


def _sqrt_mod_unit(u: int, p: int, m: int) -> list[int]:
    """Square roots of a unit u modulo p^m (p prime, p does not divide u)."""
    if m == 0:
        return [0]
    if p != 2:
        r = sqrt_mod_prime(u, p)
        if r is None:
            return []
        pe = p
        while pe < p ** m:
            # Hensel: r <- r - (r^2 - u) / (2r) mod pe^2
            pe2 = pe * pe
            inv = pow(2 * r % pe2, -1, pe2)
            r = (r - (r * r - u) * inv) % pe2
            pe = pe2
        pm = p ** m
        r %= pm
        return sorted({r, pm - r})
    # p = 2
    if m == 1:
        return [1]
    if m == 2:
        return [1, 3] if u % 4 == 1 else []
    if u % 8 != 1:
        return []
    # lift from the root 1 mod 8, one bit at a time
    r = 1
    for j in range(3, m):
        if (r * r - u) % (1 << (j + 1)) != 0:
            r += 1 << (j - 1)
    pm = 1 << m
    r %= pm
    half = 1 << (m - 1)
    return sorted({r, pm - r, (r + half) % pm, (pm - r + half) % pm})


def sqrt_mod(a: int, modulus: int, table: SpfTable) -> list[int]:
    """All square roots of a modulo an arbitrary modulus >= 1, sorted.

    Factorizes the modulus with the table, solves each prime power, and
    glues with CRT.
    """
    if modulus == 1:
        return [0]
    factors = factorize(modulus, table)
    roots = [0]
    mod_so_far = 1
    for p, k in factors:
        pk = p ** k
        local = sqrt_mod_prime_power(a, p, k)
        if not local:
            return []
        if mod_so_far == 1:
            roots = list(local)
            mod_so_far = pk
            continue
        inv = pow(mod_so_far % pk, -1, pk)
        new_roots = []
        for r in roots:
            for s in local:
                t = (s - r) % pk * inv % pk
                new_roots.append(r + mod_so_far * t)
        roots = new_roots
        mod_so_far *= pk
    roots.sort()
    return roots
