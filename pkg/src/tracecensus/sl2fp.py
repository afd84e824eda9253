"""Conjugacy classes of SL2(F_p) in closed form, plus matrix classification.

For p >= 3 the p + 4 classes are: two central (+-I), four unipotent-type
(sign of trace x square class of the off-diagonal alpha), (p-3)/2 split
semisimple and (p-1)/2 nonsplit semisimple.  p = 2 is its own tiny case
(SL2(F_2) is the symmetric group on 3 letters).

Masses are exact Fractions throughout; floats appear only when a report
asks for them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .numtheory import is_probable_prime, kronecker

Mat = tuple[int, int, int, int]

# labels: ("central", sign) ("unipotent", sign, chi) ("split", a) ("nonsplit", a)
Label = tuple


@dataclass(frozen=True)
class ConjClass:
    label: Label
    trace: int
    size: int
    centralizer: int
    rep: Mat


def group_order(p: int) -> int:
    return p * (p * p - 1)


def _require_prime(p: int) -> None:
    if p < 2 or not is_probable_prime(p):
        raise ValueError("p must be prime, got %r" % (p,))


def _nonresidue(p: int) -> int:
    n = 2
    while kronecker(n, p) != -1:
        n += 1
    return n


def class_list(p: int) -> list[ConjClass]:
    """All conjugacy classes, deterministic order, sizes summing to |G|."""
    _require_prime(p)
    if p == 2:
        # x^2 + x + 1 is irreducible over F_2, so the order-3 class is nonsplit
        return [
            ConjClass(("central", 1), 0, 1, 6, (1, 0, 0, 1)),
            ConjClass(("unipotent", 1, 1), 0, 3, 2, (1, 1, 0, 1)),
            ConjClass(("nonsplit", 1), 1, 2, 3, (0, 1, 1, 1)),
        ]
    g = group_order(p)
    nu = _nonresidue(p)
    out = []
    for sign in (1, -1):
        sp = sign % p
        out.append(ConjClass(("central", sign), (2 * sign) % p, 1, g,
                             (sp, 0, 0, sp)))
        for chi, alpha in ((1, 1), (-1, nu)):
            rep = (sp, (sign * alpha) % p, 0, sp)
            out.append(ConjClass(("unipotent", sign, chi), (2 * sign) % p,
                                 (p * p - 1) // 2, 2 * p, rep))
    for a in range(p):
        k = kronecker(a * a - 4, p)
        if k == 1:
            out.append(ConjClass(("split", a), a, p * (p + 1), p - 1,
                                 _split_rep(a, p)))
        elif k == -1:
            # companion matrix of x^2 - a x + 1
            out.append(ConjClass(("nonsplit", a), a, p * (p - 1), p + 1,
                                 (0, (p - 1), 1, a % p)))
    return out


def _split_rep(a: int, p: int) -> Mat:
    from .numtheory import sqrt_mod_prime

    r = sqrt_mod_prime((a * a - 4) % p, p)
    lam = (a + r) * pow(2, -1, p) % p
    return (lam, 0, 0, pow(lam, -1, p))


def classify(mat: Mat, p: int) -> Label:
    """Conjugacy class label of a matrix in SL2(F_p)."""
    a, b, c, d = (x % p for x in mat)
    if (a * d - b * c) % p != 1:
        raise ValueError("determinant is not 1 mod %d" % p)
    t = (a + d) % p
    if p == 2:
        if (a, b, c, d) == (1, 0, 0, 1):
            return ("central", 1)
        return ("unipotent", 1, 1) if t == 0 else ("nonsplit", 1)
    disc = (t * t - 4) % p
    k = kronecker(disc, p)
    if k == 1:
        return ("split", t)
    if k == -1:
        return ("nonsplit", t)
    sign = 1 if t == 2 % p else -1
    # strip the central part: N = sign*M - I is nilpotent
    n11 = (sign * a - 1) % p
    n12 = (sign * b) % p
    n21 = (sign * c) % p
    if n11 == 0 and n12 == 0 and n21 == 0 and (sign * d - 1) % p == 0:
        return ("central", sign)
    alpha = (-n21) % p if n21 != 0 else n12
    return ("unipotent", sign, kronecker(alpha, p))


def brute_force_classes(p: int) -> list[tuple[int, int, int]]:
    """(trace, size, centralizer) per class by raw orbit partition.

    Enumerates the whole group and closes orbits under conjugation by the
    two standard generators.  Exponential-feeling and proud of it; only
    sane for p up to around 13.  Exists to check class_list against
    arithmetic-free ground truth.
    """
    _require_prime(p)
    group = [
        (a, b, c, d)
        for a in range(p)
        for b in range(p)
        for c in range(p)
        for d in range(p)
        if (a * d - b * c) % p == 1
    ]
    gens = ((1, 1, 0, 1), (0, 1, p - 1, 0))

    def mul(m, n):
        a, b, c, d = m
        e, f, g, h = n
        return ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)

    def inv(m):
        a, b, c, d = m
        return (d, (-b) % p, (-c) % p, a)

    order = len(group)
    remaining = set(group)
    out = []
    while remaining:
        start = min(remaining)
        orbit = {start}
        stack = [start]
        remaining.discard(start)
        while stack:
            m = stack.pop()
            for g in gens:
                n = mul(mul(g, m), inv(g))
                if n not in orbit:
                    orbit.add(n)
                    stack.append(n)
                    remaining.discard(n)
        out.append(((start[0] + start[3]) % p, len(orbit), order // len(orbit)))
    return sorted(out)


def trace_mass(p: int, a: int) -> Fraction:
    """Sum of 2 / |centralizer| over classes with trace a mod p."""
    a %= p
    total = Fraction(0)
    for cls in class_list(p):
        if cls.trace == a:
            total += Fraction(2, cls.centralizer)
    return total


def class_mass(p: int) -> dict[Label, Fraction]:
    """label -> |class| / |G| as exact Fractions (sums to 1)."""
    g = group_order(p)
    return {cls.label: Fraction(cls.size, g) for cls in class_list(p)}


def predicted_density(p: int, a: int) -> Fraction:
    """Limiting share of the weighted census falling on trace residue a.

    Computed from the class data alone: one quarter of the mass at a plus
    the mass at -a.  Collapses to 1/(p-1), 1/(p+1) or p/(p^2-1) by case,
    and to 1/3, 2/3 for p = 2, but that simplification lives in the tests.
    """
    _require_prime(p)
    return (trace_mass(p, a) + trace_mass(p, -a)) / 4


def predicted_density_table(p: int) -> list[Fraction]:
    return [predicted_density(p, a) for a in range(p)]
