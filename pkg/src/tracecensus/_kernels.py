"""Hot loops, written in nopython-compatible Python.

If numba is importable the functions are njit-compiled (same source, one
code path); otherwise the plain Python definitions run as-is.  Everything
stays inside int64, which callers must guarantee (discriminants up to
about 4e18).
"""

from __future__ import annotations

import math

import numpy as np

try:
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only on bare installs
    numba = None
    _HAVE_NUMBA = False


def _isqrt_i64(n):
    """Exact floor square root via float seed plus correction."""
    if n < 0:
        return -1
    r = int(math.sqrt(float(n)))
    while r > 0 and r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


def _gcd_i64(x, y):
    if x < 0:
        x = -x
    if y < 0:
        y = -y
    while y != 0:
        x, y = y, x % y
    return x


def _enum_reduced(D):
    """All primitive reduced forms (a, b, c) of discriminant D > 0 nonsquare.

    Scans the b-window for every leading coefficient a >= 1 and emits sign
    pairs (a, b, c), (-a, b, -c).  Output order is deterministic.
    """
    s = _isqrt_i64(D)
    cap = 256
    out = np.empty((cap, 3), np.int64)
    n = 0
    for a in range(1, s + 1):
        foura = 4 * a
        # reduced needs b > |sqrt(D) - 2a|, b <= s, b = D mod 2
        lo = s - 2 * a + 1
        lo2 = 2 * a - s
        if lo2 > lo:
            lo = lo2
        if lo < 1:
            lo = 1
        if ((lo ^ D) & 1) == 1:
            lo += 1
        for b in range(lo, s + 1, 2):
            num = b * b - D
            if num % foura == 0:
                c = num // foura
                g = _gcd_i64(_gcd_i64(a, b), c)
                if g == 1:
                    if n + 2 > cap:
                        cap *= 2
                        bigger = np.empty((cap, 3), np.int64)
                        for i in range(n):
                            bigger[i, 0] = out[i, 0]
                            bigger[i, 1] = out[i, 1]
                            bigger[i, 2] = out[i, 2]
                        out = bigger
                    out[n, 0] = a
                    out[n, 1] = b
                    out[n, 2] = c
                    n += 1
                    out[n, 0] = -a
                    out[n, 1] = b
                    out[n, 2] = -c
                    n += 1
    return out[:n]


if _HAVE_NUMBA:
    _isqrt_i64 = numba.njit(cache=True, nogil=True)(_isqrt_i64)
    _gcd_i64 = numba.njit(cache=True, nogil=True)(_gcd_i64)
    _enum_reduced = numba.njit(cache=True, nogil=True)(_enum_reduced)
