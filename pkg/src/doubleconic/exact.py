"""Shared exact-arithmetic helpers: primitive vectors, determinants, ranks.

Everything works over Python ints and fractions.Fraction; nothing here
ever touches floating point.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidInputError


def vector_gcd(entries: Iterable[int]) -> int:
    g = 0
    for e in entries:
        g = math.gcd(g, abs(e))
    return g


def normalize_primitive(vec: Sequence[int]) -> tuple[int, ...]:
    """Scale an integer vector to primitive form with positive leading sign.

    Divides by the gcd of the entries and flips the sign so the first
    nonzero entry is positive.  The zero vector is rejected.
    """
    entries = [int(e) for e in vec]
    g = vector_gcd(entries)
    if g == 0:
        raise InvalidInputError("cannot normalize the zero vector")
    entries = [e // g for e in entries]
    for e in entries:
        if e != 0:
            if e < 0:
                entries = [-x for x in entries]
            break
    return tuple(entries)


def is_primitive_normalized(vec: Sequence[int]) -> bool:
    entries = list(vec)
    if vector_gcd(entries) != 1:
        return False
    for e in entries:
        if e != 0:
            return e > 0
    return False


def primitive_pairs(bound: int) -> list[tuple[int, int]]:
    """All primitive sign-normalized pairs of height <= bound.

    Sorted by height, then lexicographically, so the sampling order used by
    the propagation engine is reproducible.
    """
    if bound < 1:
        raise InvalidInputError("height bound must be >= 1")
    pairs = []
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            if math.gcd(abs(a), abs(b)) != 1:
                continue
            if a < 0 or (a == 0 and b < 0):
                continue
            pairs.append((a, b))
    pairs.sort(key=lambda p: (max(abs(p[0]), abs(p[1])), p))
    return pairs


def fraction_det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant of a square matrix by exact Gaussian elimination."""
    n = len(rows)
    m = [[Fraction(x) for x in row] for row in rows]
    if any(len(row) != n for row in m):
        raise InvalidInputError("determinant needs a square matrix")
    det = Fraction(1)
    for col in range(n):
        pivot_row = None
        for i in range(col, n):
            if m[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != col:
            m[col], m[pivot_row] = m[pivot_row], m[col]
            det = -det
        pivot = m[col][col]
        det *= pivot
        for i in range(col + 1, n):
            if m[i][col] != 0:
                factor = m[i][col] / pivot
                m[i] = [a - factor * b for a, b in zip(m[i], m[col])]
    return det


def exact_rank(rows: Iterable[Sequence[int]], stop_at: int | None = None) -> int:
    """Rank of an integer matrix over Q, processing rows incrementally.

    Stops early once `stop_at` independent rows have been found.
    """
    pivots: list[tuple[int, list[Fraction]]] = []
    for row in rows:
        work = [Fraction(x) for x in row]
        for col, basis in pivots:
            if work[col] != 0:
                factor = work[col] / basis[col]
                work = [a - factor * b for a, b in zip(work, basis)]
        lead = next((i for i, x in enumerate(work) if x != 0), None)
        if lead is not None:
            pivots.append((lead, work))
            if stop_at is not None and len(pivots) >= stop_at:
                break
    return len(pivots)


def is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n
