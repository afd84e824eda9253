"""Indefinite binary quadratic forms: reduction, cycles, class data, units.

A form (a, b, c) stands for a x^2 + b x y + c y^2 with discriminant
D = b^2 - 4ac > 0 and nonsquare.  Class counts here are strict (narrow)
ones: proper equivalence under SL2(Z), which is what matches counting
conjugacy classes of matrices and norm-one units of the order O_D.

Two independent enumeration routes are kept on purpose.  reduced_forms
walks a plain b-window scan (the kernel); reduced_forms_via_roots solves
b^2 = D mod 4a by factoring and lifting.  The verify machinery compares
them, so neither can silently drift.
"""

from __future__ import annotations

import math
from collections import deque

from . import _kernels
from .numtheory import SpfTable, is_square, sqrt_mod

Form = tuple[int, int, int]

# int64 ceiling for the kernel; leaves headroom for 9*D in the reduced test
_KERNEL_MAX_D = 4 * 10**17


def valid_discriminant(D: int) -> bool:
    return D > 0 and D % 4 in (0, 1) and not is_square(D)


def require_discriminant(D: int) -> None:
    if not valid_discriminant(D):
        raise ValueError("not a positive nonsquare discriminant: %r" % (D,))


def discriminant(form: Form) -> int:
    a, b, c = form
    return b * b - 4 * a * c


def principal_form(D: int) -> Form:
    """The reduced form with a = 1 (largest b <= isqrt(D) of right parity)."""
    require_discriminant(D)
    s = math.isqrt(D)
    b = s if (s - D) % 2 == 0 else s - 1
    return (1, b, (b * b - D) // 4)


def is_reduced(form: Form) -> bool:
    """Integer-exact test of |sqrt(D) - 2|a|| < b < sqrt(D)."""
    a, b, c = form
    if a == 0 or b <= 0:
        return False
    D = b * b - 4 * a * c
    if D <= 0 or b * b >= D:
        return False
    ta = 2 * abs(a)
    if (ta + b) ** 2 <= D:
        return False
    if ta > b and (ta - b) ** 2 >= D:
        return False
    return True


def rho(form: Form, D: int | None = None) -> Form:
    """One cycle step: (a, b, c) -> (c, b', (b'^2 - D) / 4c).

    b' is the representative of -b mod 2|c| in the window (s - 2|c|, s]
    when |c| <= s, and in (-|c|, |c|] otherwise (the latter only matters
    while reducing arbitrary forms).
    """
    a, b, c = form
    if D is None:
        D = b * b - 4 * a * c
    s = math.isqrt(D)
    M = 2 * abs(c)
    r = (-b) % M
    top = s if abs(c) <= s else abs(c)
    b2 = top - ((top - r) % M)
    c2 = (b2 * b2 - D) // (4 * c)
    return (c, b2, c2)


def reduce_form(form: Form) -> Form:
    """Apply rho until the form is reduced.  Discriminant is preserved."""
    a, b, c = form
    D = b * b - 4 * a * c
    require_discriminant(D)
    f = form
    # |c| at least halves per step while |c| > sqrt(D), then O(1) more steps
    cap = 2 * max(abs(a), abs(b), abs(c), D).bit_length() + 64
    for _ in range(cap):
        if is_reduced(f):
            return f
        f = rho(f, D)
    raise RuntimeError("reduction did not settle for %r" % (form,))


def apply_sl2(form: Form, mat: tuple[int, int, int, int]) -> Form:
    """Transform a form by (alpha, beta, gamma, delta) in SL2(Z)."""
    a, b, c = form
    al, be, ga, de = mat
    if al * de - be * ga != 1:
        raise ValueError("matrix is not in SL2(Z)")
    a2 = a * al * al + b * al * ga + c * ga * ga
    b2 = 2 * a * al * be + b * (al * de + be * ga) + 2 * c * ga * de
    c2 = a * be * be + b * be * de + c * de * de
    return (a2, b2, c2)


def reduced_forms(D: int) -> list[Form]:
    """All primitive reduced forms of discriminant D, sorted.  Kernel route."""
    require_discriminant(D)
    if D > _KERNEL_MAX_D:
        raise ValueError("discriminant %d exceeds the int64 kernel domain" % D)
    arr = _kernels._enum_reduced(D)
    forms = [(int(r[0]), int(r[1]), int(r[2])) for r in arr]
    forms.sort()
    return forms


def reduced_forms_via_roots(D: int, table: SpfTable) -> list[Form]:
    """Same set as reduced_forms, by solving b^2 = D (mod 4a) per a.

    Independent of the kernel scan: uses factorization, Tonelli-Shanks,
    Hensel lifting and CRT from numtheory.  The spf table must cover 4a
    for every a <= isqrt(D), i.e. table.limit >= 4 * isqrt(D).
    """
    require_discriminant(D)
    s = math.isqrt(D)
    if table.limit < 4 * s:
        raise ValueError("spf table limit %d < 4*isqrt(D) = %d" % (table.limit, 4 * s))
    forms: list[Form] = []
    for a in range(1, s + 1):
        foura = 4 * a
        lo = max(s - 2 * a + 1, 2 * a - s, 1)
        for r in sqrt_mod(D, foura, table):
            b = lo + ((r - lo) % foura)
            if b > s:
                continue
            c = (b * b - D) // foura
            if math.gcd(a, b, c) == 1:
                forms.append((a, b, c))
                forms.append((-a, b, -c))
    forms.sort()
    return forms


def class_cycles(D: int, forms: list[Form] | None = None) -> list[list[Form]]:
    """Partition the primitive reduced forms into rho-cycles."""
    if forms is None:
        forms = reduced_forms(D)
    index = {f: i for i, f in enumerate(forms)}
    seen = [False] * len(forms)
    cycles = []
    for start_i, start in enumerate(forms):
        if seen[start_i]:
            continue
        cycle = []
        f = start
        while True:
            i = index.get(f)
            if i is None:
                raise RuntimeError("rho left the reduced set at %r (D=%d)" % (f, D))
            if seen[i]:
                break
            seen[i] = True
            cycle.append(f)
            f = rho(f, D)
        cycles.append(cycle)
    return cycles


def class_number_and_reps(D: int, forms: list[Form] | None = None) -> tuple[int, list[Form]]:
    """Strict class number h and one representative per class (cycle minimum)."""
    cycles = class_cycles(D, forms)
    reps = sorted(min(c) for c in cycles)
    return len(cycles), reps


def class_number(D: int) -> int:
    return class_number_and_reps(D)[0]


_BFS_GENS = ((0, -1, 1, 0), (1, 1, 0, 1), (1, -1, 0, 1))  # S, T, T^-1


def _default_box(D: int) -> int:
    # a T-chain between cycle neighbours can pass through |c| = D/(4|a|),
    # so D/4 (hit when |a| = 1) is the honest coefficient ceiling
    return max(math.isqrt(D), D // 4) + 9


def forms_equivalent_bfs(f: Form, g: Form, box: int | None = None) -> bool:
    """Breadth-first search for an SL2(Z) path from f to g.

    Exploration is capped at coefficient size `box` (default D/4 plus
    margin, enough to hold every intermediate of a cycle walk).  A True
    answer is always sound.  A False answer relies on the cap; for reduced
    inputs the cycle theorem makes the default cap sufficient, and a cap
    that were too small could only split classes further, never merge them.
    """
    Df = discriminant(f)
    if discriminant(g) != Df:
        return False
    require_discriminant(Df)
    if box is None:
        box = _default_box(Df)
    if f == g:
        return True
    seen = {f}
    frontier = deque([f])
    while frontier:
        cur = frontier.popleft()
        for mat in _BFS_GENS:
            nxt = apply_sl2(cur, mat)
            if nxt == g:
                return True
            if nxt in seen:
                continue
            na, nb, nc = nxt
            if abs(na) > box or abs(nb) > box or abs(nc) > box:
                continue
            seen.add(nxt)
            frontier.append(nxt)
    return False


def class_count_bfs(D: int, forms: list[Form] | None = None, box: int | None = None) -> int:
    """Class count by BFS-partitioning reduced forms.  Oracle-grade, small D.

    Knows nothing about rho-cycles: components under the generator moves.
    Cost grows roughly quadratically in isqrt(D); keep D modest (<= ~10^5).
    """
    require_discriminant(D)
    if forms is None:
        forms = reduced_forms(D)
    if box is None:
        box = _default_box(D)
    remaining = set(forms)
    count = 0
    while remaining:
        start = min(remaining)
        count += 1
        seen = {start}
        frontier = deque([start])
        remaining.discard(start)
        while frontier:
            cur = frontier.popleft()
            for mat in _BFS_GENS:
                nxt = apply_sl2(cur, mat)
                if nxt in seen:
                    continue
                na, nb, nc = nxt
                if abs(na) > box or abs(nb) > box or abs(nc) > box:
                    continue
                seen.add(nxt)
                frontier.append(nxt)
                remaining.discard(nxt)
    return count


def _int_root(n: int, k: int) -> int:
    """Exact floor k-th root for n >= 0, k >= 1."""
    if k == 1 or n < 2:
        return n
    x = 1 << (n.bit_length() // k + 1)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def _trace_power(tau: int, k: int) -> int:
    """Trace of the k-th power of the norm-one unit with trace tau, k >= 1."""
    t_prev, t_cur = 2, tau
    for _ in range(k - 1):
        t_prev, t_cur = t_cur, tau * t_cur - t_prev
    return t_cur


def _pell1(N: int) -> tuple[int, int]:
    """Fundamental solution of x^2 - N y^2 = 1 by the chakravala method."""
    a0 = math.isqrt(N)
    if a0 * a0 == N:
        raise ValueError("N must be nonsquare")
    # seed (p, q, k) with p = a0 or a0+1, whichever makes |k| smaller
    if N - a0 * a0 <= (a0 + 1) ** 2 - N:
        p, q, k = a0, 1, a0 * a0 - N
    else:
        p, q, k = a0 + 1, 1, (a0 + 1) ** 2 - N
    for _ in range(10**6):
        if k == 1:
            return p, q
        ak = abs(k)
        m0 = (-p * pow(q, -1, ak)) % ak
        # candidates nearest sqrt(N) in the residue class, prefer smaller |m^2-N|
        m1 = m0 + ak * ((a0 - m0) // ak)
        if m1 < 1:
            m1 += ak
        m2 = m1 + ak
        m = m1 if abs(m1 * m1 - N) <= abs(m2 * m2 - N) else m2
        p, q, k = (p * m + N * q) // ak, (p + q * m) // ak, (m * m - N) // k
    raise RuntimeError("chakravala did not terminate for N=%d" % N)


def fundamental_unit(D: int) -> tuple[int, int]:
    """Smallest (tau, s) with tau > 2, s >= 1 and tau^2 - D s^2 = 4.

    The norm-one fundamental unit of O_D is (tau + s sqrt(D)) / 2.  Works
    from the chakravala solution of the unit equation; for odd D a cube
    root descent recovers the half-integer unit when there is one.
    """
    require_discriminant(D)
    if D % 4 == 0:
        x, y = _pell1(D // 4)
        return 2 * x, y
    x, y = _pell1(D)
    r = _int_root(2 * x, 3)
    for tau in range(max(3, r - 2), r + 3):
        if tau**3 - 3 * tau == 2 * x:
            num = tau * tau - 4
            if num % D == 0 and is_square(num // D):
                s = math.isqrt(num // D)
                if tau * tau - D * s * s == 4:
                    return tau, s
    assert (2 * x) ** 2 - D * (2 * y) ** 2 == 4
    return 2 * x, 2 * y


def pell_from_known(t: int, m: int, D: int) -> tuple[int, int]:
    """Fundamental (tau, s) of tau^2 - D s^2 = 4 given any solution (t, m).

    The given unit is a power of the fundamental one, so t is a Chebyshev
    image of the fundamental trace.  Scanning the power index k downward
    from the largest conceivable value, the first exact integer root that
    also solves the unit equation for this D is the fundamental solution;
    a unit of a smaller order never sneaks in because its trace square
    minus four fails the divisibility test.  No factorization of m is
    involved, so this stays cheap even when m has hundreds of digits.
    """
    if t < 3 or m < 1 or t * t - m * m * D != 4:
        raise ValueError("(%d, %d) does not solve the unit equation for D=%d" % (t, m, D))
    kmax = 1
    while _trace_power(3, kmax + 1) <= t:
        kmax += 1
    for k in range(kmax, 1, -1):
        r = _int_root(t, k)
        for tau in (r - 1, r, r + 1, r + 2):
            if tau < 3 or _trace_power(tau, k) != t:
                continue
            num = tau * tau - 4
            if num % D == 0:
                s2 = num // D
                s = math.isqrt(s2)
                if s * s == s2:
                    return tau, s
    return t, m


def unit_log(tau: int) -> float:
    """log((tau + sqrt(tau^2 - 4)) / 2), stable for astronomically large tau."""
    if tau < 10**15:
        return math.acosh(tau / 2)
    # correction term is below 1e-30 here
    return math.log(tau)


def class_weight(D: int, t: int | None = None, m: int | None = None) -> tuple[int, float]:
    """(h, log fundamental unit) for discriminant D.

    Pass a known unit-equation solution (t, m) to skip chakravala.
    """
    if t is not None and m is not None:
        tau, _ = pell_from_known(t, m, D)
    else:
        tau, _ = fundamental_unit(D)
    h = class_number(D)
    return h, unit_log(tau)


