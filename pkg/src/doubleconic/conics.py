"""Plane conics and binary forms over Q, in exact arithmetic.

The module provides the two building blocks the point engine leans on:

* stereographic parametrization of a smooth conic through a rational
  point, returned as three integral binary quadratics with the pullback
  of the conic identically zero, and

* branch-locus analysis of double covers z^2 = r(u, v) of the line:
  resultant-based disjointness, squarefree structure, and the
  irreducibility criterion for fibre products of two such covers (the
  fibre product is geometrically irreducible iff none of r1, r2, r1*r2
  is a square over the algebraic closure).

Binary forms store coefficients by descending power of u, so
[1, 0, -1] is u^2 - v^2 and [0, 1, 0] is u*v.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    DegenerateConicError,
    InvalidInputError,
    NonReducedCoverError,
    PreconditionError,
)
from .exact import fraction_det, normalize_primitive

# -- univariate helpers (dense descending Fraction lists, [] is zero) -------


def _p_strip(c: list[Fraction]) -> list[Fraction]:
    i = 0
    while i < len(c) and c[i] == 0:
        i += 1
    return c[i:]


def _p_degree(c: list[Fraction]) -> int:
    return len(c) - 1


def _p_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _p_strip(out)

def _p_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    pa = [Fraction(0)] * (n - len(a)) + a
    pb = [Fraction(0)] * (n - len(b)) + b
    return _p_strip([x - y for x, y in zip(pa, pb)])


def _p_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], _p_strip(list(a))
    rem = [Fraction(x) for x in a]
    steps = len(a) - len(b) + 1
    quot = [Fraction(0)] * steps
    for i in range(steps):
        coef = rem[i] / b[0]
        quot[i] = coef
        if coef != 0:
            for j, bc in enumerate(b):
                rem[i + j] -= coef * bc
    return _p_strip(quot), _p_strip(rem[steps:])


def _p_monic(a: list[Fraction]) -> list[Fraction]:
    if not a:
        return []
    lead = a[0]
    return [x / lead for x in a]


def _p_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = list(a), list(b)
    while b:
        _, rem = _p_divmod(a, b)
        a, b = b, rem
    return _p_monic(a)


def _p_derivative(a: list[Fraction]) -> list[Fraction]:
    n = _p_degree(a)
    if n <= 0:
        return []
    return _p_strip([c * (n - i) for i, c in enumerate(a[:-1])])


def _p_squarefree_factors(p: list[Fraction]) -> list[tuple[list[Fraction], int]]:
    """Yun decomposition of a nonzero polynomial over Q (characteristic 0).

    Returns monic factors with their multiplicities; constants are dropped.
    """
    p = _p_monic(p)
    if _p_degree(p) <= 0:
        return []
    dp = _p_derivative(p)
    g = _p_gcd(p, dp)
    if _p_degree(g) == 0:
        return [(p, 1)]
    w, _ = _p_divmod(p, g)
    y, _ = _p_divmod(dp, g)
    z = _p_sub(y, _p_derivative(w))
    out: list[tuple[list[Fraction], int]] = []
    i = 1
    while _p_degree(w) > 0:
        gi = _p_gcd(w, z)
        if _p_degree(gi) > 0:
            out.append((gi, i))
        w, _ = _p_divmod(w, gi)
        y, _ = _p_divmod(z, gi)
        z = _p_sub(y, _p_derivative(w))
        i += 1
    return out


# -- binary forms ------------------------------------------------------------


def _coerce(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise InvalidInputError(f"cannot read {value!r} as an exact rational")


@dataclass(frozen=True)
class BinaryForm:
    """Homogeneous form in (u, v), coefficients by descending power of u."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise InvalidInputError("a binary form needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(_coerce(c) for c in self.coeffs))

    @classmethod
    def of(cls, coeffs: Sequence) -> "BinaryForm":
        return cls(tuple(coeffs))

    @classmethod
    def zero(cls, degree: int) -> "BinaryForm":
        return cls(tuple(Fraction(0) for _ in range(degree + 1)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def evaluate(self, u, v):
        n = self.degree
        return sum(c * u ** (n - i) * v**i for i, c in enumerate(self.coeffs))

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        if other.degree != self.degree:
            raise InvalidInputError("cannot add forms of different degrees")
        return BinaryForm(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "BinaryForm") -> "BinaryForm":
        return self + (-other)

    def __neg__(self) -> "BinaryForm":
        return BinaryForm(tuple(-c for c in self.coeffs))

    def __mul__(self, other: "BinaryForm") -> "BinaryForm":
        out = [Fraction(0)] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return BinaryForm(tuple(out))

    def scale(self, factor) -> "BinaryForm":
        f = _coerce(factor)
        return BinaryForm(tuple(f * c for c in self.coeffs))

    def substitute(self, m: Sequence[Sequence[int]]) -> "BinaryForm":
        """The form r(a*u + b*v, c*u + d*v) for m = [[a, b], [c, d]]."""
        (a, b), (c, d) = m
        fu = BinaryForm((_coerce(a), _coerce(b)))
        fv = BinaryForm((_coerce(c), _coerce(d)))
        n = self.degree
        out = BinaryForm.zero(n)
        for i, coef in enumerate(self.coeffs):
            if coef == 0:
                continue
            term = BinaryForm((coef,))
            for _ in range(n - i):
                term = term * fu
            for _ in range(i):
                term = term * fv
            out = out + term
        return out

    def derivative_u(self) -> "BinaryForm":
        n = self.degree
        if n == 0:
            return BinaryForm((Fraction(0),))
        return BinaryForm(tuple((n - i) * c for i, c in enumerate(self.coeffs[:-1])))

    def derivative_v(self) -> "BinaryForm":
        n = self.degree
        if n == 0:
            return BinaryForm((Fraction(0),))
        return BinaryForm(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def v_multiplicity(self) -> int:
        """Multiplicity of the root (1:0), i.e. the power of v dividing the form."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        raise InvalidInputError("the zero form has no root structure")

    def finite_poly(self) -> list[Fraction]:
        """Descending coefficients of r~(x, 1) after stripping the v-power."""
        e = self.v_multiplicity()
        return list(self.coeffs[e:])

    def normalized(self) -> "BinaryForm":
        """Integer-primitive representative with positive first nonzero coefficient."""
        if self.is_zero:
            raise InvalidInputError("cannot normalize the zero form")
        denom = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * denom) for c in self.coeffs]
        return BinaryForm(tuple(normalize_primitive(ints)))

    def to_json(self) -> list:
        out = []
        for c in self.coeffs:
            out.append(int(c) if c.denominator == 1 else str(c))
        return out

    @classmethod
    def from_json(cls, data: Sequence) -> "BinaryForm":
        return cls.of(data)


def rational_roots(form: BinaryForm) -> tuple[tuple[tuple[int, int], int], ...]:
    """Rational projective roots of a nonzero form, with multiplicities.

    Returns sorted ((a, b), multiplicity) pairs; (a : b) is primitive and
    sign-normalized.  Irrational roots are not reported.
    """
    if form.is_zero:
        raise InvalidInputError("the zero form vanishes everywhere")
    roots: list[tuple[tuple[int, int], int]] = []
    e = form.v_multiplicity()
    if e:
        roots.append(((1, 0), e))
    p = form.finite_poly()
    # root at x = 0, i.e. the point (0 : 1)
    tail = 0
    while p and p[-1] == 0:
        p.pop()
        tail += 1
    if tail:
        roots.append(((0, 1), tail))
    if _p_degree(p) >= 1:
        denom = math.lcm(*(c.denominator for c in p))
        ip = [int(c * denom) for c in p]
        g = math.gcd(*(abs(c) for c in ip))
        ip = [c // g for c in ip]
        lead, trail = abs(ip[0]), abs(ip[-1])
        for num in _divisors(trail):
            for den in _divisors(lead):
                if math.gcd(num, den) != 1:
                    continue
                for sign in (1, -1):
                    x = Fraction(sign * num, den)
                    if sum(c * x ** (len(ip) - 1 - i) for i, c in enumerate(ip)) != 0:
                        continue
                    mult = 0
                    linear = [Fraction(den), Fraction(-sign * num)]
                    rem_poly = [Fraction(c) for c in ip]
                    while True:
                        q, rem = _p_divmod(rem_poly, linear)
                        if rem:
                            break
                        mult += 1
                        rem_poly = q
                    point = normalize_primitive((sign * num, den))
                    roots.append((point, mult))
    roots = sorted(set(roots))
    return tuple(roots)


def _divisors(n: int) -> list[int]:
    if n == 0:
        return []
    n = abs(n)
    out = []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
    return sorted(out)


def form_gcd(f: BinaryForm, g: BinaryForm) -> BinaryForm:
    """Greatest common divisor of two binary forms, integer-primitive."""
    if f.is_zero and g.is_zero:
        raise InvalidInputError("gcd of two zero forms is undefined")
    if f.is_zero:
        return g.normalized()
    if g.is_zero:
        return f.normalized()
    e = min(f.v_multiplicity(), g.v_multiplicity())
    p = _p_gcd(f.finite_poly(), g.finite_poly())
    coeffs = [Fraction(0)] * e + p
    return BinaryForm(tuple(coeffs)).normalized()


def resultant(f: BinaryForm, g: BinaryForm) -> Fraction:
    """Resultant of two nonzero forms via the Sylvester determinant.

    Computed at the declared degrees, so a shared root at (1:0) (both
    leading coefficients zero) is detected as well.
    """
    if f.is_zero or g.is_zero:
        raise InvalidInputError("resultant needs nonzero forms")
    m, n = f.degree, g.degree
    size = m + n
    if size == 0:
        return Fraction(1)
    rows = []
    for i in range(n):
        row = [Fraction(0)] * size
        for j, c in enumerate(f.coeffs):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [Fraction(0)] * size
        for j, c in enumerate(g.coeffs):
            row[i + j] = c
        rows.append(row)
    return fraction_det(rows)


def branch_loci_disjoint(r1: BinaryForm, r2: BinaryForm) -> bool:
    """True iff the forms share no projective root over the closure."""
    if r1.is_zero or r2.is_zero:
        raise InvalidInputError("branch forms must be nonzero")
    return resultant(r1, r2) != 0


def is_square_over_closure(form: BinaryForm) -> bool:
    """True iff every root of the form has even multiplicity."""
    if form.is_zero:
        raise InvalidInputError("the zero form is not a valid input")
    if form.v_multiplicity() % 2 != 0:
        return False
    p = form.finite_poly()
    if _p_degree(p) == 0:
        return True
    return all(mult % 2 == 0 for _, mult in _p_squarefree_factors(p))


def is_squarefree(form: BinaryForm) -> bool:
    if form.is_zero:
        raise InvalidInputError("the zero form is not a valid input")
    if form.v_multiplicity() > 1:
        return False
    p = form.finite_poly()
    if _p_degree(p) <= 0:
        return True
    return _p_degree(_p_gcd(p, _p_derivative(p))) == 0


def discriminant_of_double_cover(r: BinaryForm) -> BinaryForm:
    """Branch form of the double cover z^2 = r(u, v) over the (u : v)-line.

    The cover ramifies exactly over the roots of r; an identically zero r
    would make the cover non-reduced and is rejected.
    """
    if r.is_zero:
        raise NonReducedCoverError("z^2 = 0 is a non-reduced cover")
    return r


def fibre_product_irreducible(r1: BinaryForm, r2: BinaryForm) -> bool:
    """Irreducibility of the fibre product of z^2 = r1 and w^2 = r2.

    The product is a geometrically irreducible curve over the line iff the
    function field gains full degree 4, i.e. none of r1, r2, r1*r2 is a
    square over the closure.  Disjoint branch loci plus both forms being
    non-squares is a sufficient condition, but the test is exact either way.
    """
    if r1.is_zero or r2.is_zero:
        raise InvalidInputError("branch forms must be nonzero")
    return not (
        is_square_over_closure(r1)
        or is_square_over_closure(r2)
        or is_square_over_closure(r1 * r2)
    )


def fibre_product_report(r1: BinaryForm, r2: BinaryForm) -> dict:
    """The three square tests, branch disjointness and the verdict, JSON-ready."""
    if r1.is_zero or r2.is_zero:
        raise InvalidInputError("branch forms must be nonzero")
    squares = (
        is_square_over_closure(r1),
        is_square_over_closure(r2),
        is_square_over_closure(r1 * r2),
    )
    return {
        "disjoint_branch": branch_loci_disjoint(r1, r2),
        "squares": list(squares),
        "irreducible": not any(squares),
    }


# -- ternary conics ----------------------------------------------------------


@dataclass(frozen=True)
class TernaryConic:
    """Plane conic given by a symmetric 3x3 matrix of exact rationals."""

    rows: tuple[tuple[Fraction, Fraction, Fraction], ...]

    def __post_init__(self):
        rows = tuple(tuple(_coerce(x) for x in row) for row in self.rows)
        if len(rows) != 3 or any(len(row) != 3 for row in rows):
            raise InvalidInputError("a conic needs a 3x3 matrix")
        for i in range(3):
            for j in range(3):
                if rows[i][j] != rows[j][i]:
                    raise InvalidInputError("conic matrix must be symmetric")
        if all(x == 0 for row in rows for x in row):
            raise InvalidInputError("conic matrix must be nonzero")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def of(cls, rows: Sequence[Sequence]) -> "TernaryConic":
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def from_equation(cls, xx, yy, zz, xy=0, xz=0, yz=0) -> "TernaryConic":
        """Conic a*x^2 + b*y^2 + c*z^2 + d*xy + e*xz + f*yz = 0."""
        xx, yy, zz, xy, xz, yz = (_coerce(t) for t in (xx, yy, zz, xy, xz, yz))
        half = Fraction(1, 2)
        return cls.of(
            [
                [xx, half * xy, half * xz],
                [half * xy, yy, half * yz],
                [half * xz, half * yz, zz],
            ]
        )

    def determinant(self) -> Fraction:
        return fraction_det(self.rows)

    def evaluate(self, point: Sequence) -> Fraction:
        p = [_coerce(x) for x in point]
        return sum(self.rows[i][j] * p[i] * p[j] for i in range(3) for j in range(3))

    def bilinear(self, p: Sequence, q: Sequence) -> Fraction:
        a = [_coerce(x) for x in p]
        b = [_coerce(x) for x in q]
        return sum(self.rows[i][j] * a[i] * b[j] for i in range(3) for j in range(3))

    def is_smooth(self) -> bool:
        return self.determinant() != 0

    def to_json(self) -> list[str]:
        return [str(x) for row in self.rows for x in row]

    @classmethod
    def from_json(cls, data: Sequence) -> "TernaryConic":
        if len(data) != 9:
            raise InvalidInputError("conic serialization needs 9 entries")
        return cls.of([data[0:3], data[3:6], data[6:9]])


def conic_is_smooth(conic: TernaryConic) -> bool:
    """True iff the conic matrix is nonsingular."""
    return conic.is_smooth()


@dataclass(frozen=True)
class ConicParametrization:
    """Degree-2 map P^1 -> conic through a chosen rational base point.

    `forms` are three integral binary quadratics (x, y, z as forms in the
    parameter (s : t)); the pullback of the conic is identically zero and
    the parameter (0 : 1) maps to the base point.  `chart` stores the two
    auxiliary basis vectors, which make the map invertible over Q.
    """

    forms: tuple[BinaryForm, BinaryForm, BinaryForm]
    base_point: tuple[int, int, int]
    chart: tuple[tuple[int, int, int], tuple[int, int, int]]

    def point_at(self, s: int, t: int) -> tuple[int, int, int]:
        values = [int(f.evaluate(s, t)) for f in self.forms]
        return normalize_primitive(values)

    def parameter_for(self, point: Sequence[int]) -> tuple[int, int]:
        """The parameter (s : t) with point_at(s, t) equal to the point."""
        x = normalize_primitive(point)
        cols = [self.base_point, self.chart[0], self.chart[1]]
        delta = fraction_det([[Fraction(cols[j][i]) for j in range(3)] for i in range(3)])
        if delta == 0:
            raise PreconditionError("parametrization chart is degenerate")

        def solve(col: int) -> Fraction:
            mat = []
            for i in range(3):
                row = []
                for j in range(3):
                    row.append(Fraction(x[i]) if j == col else Fraction(cols[j][i]))
                mat.append(row)
            return fraction_det(mat) / delta

        beta, gamma = solve(1), solve(2)
        if beta == 0 and gamma == 0:
            return (0, 1)
        scaled = normalize_primitive(
            (beta.numerator * gamma.denominator, gamma.numerator * beta.denominator)
        )
        if self.point_at(*scaled) != x:
            raise PreconditionError("point is not in the image of the parametrization")
        return scaled

    def pullback(self, conic: TernaryConic) -> BinaryForm:
        """The degree-4 form Q(f0, f1, f2); identically zero by construction."""
        total = BinaryForm.zero(4)
        for i in range(3):
            for j in range(3):
                coef = conic.rows[i][j]
                if coef != 0:
                    total = total + (self.forms[i] * self.forms[j]).scale(coef)
        return total

    def to_json(self) -> list[list]:
        return [f.to_json() for f in self.forms]


def parametrize_through_point(conic: TernaryConic, point: Sequence[int]) -> ConicParametrization:
    """Stereographic projection of a smooth conic from a rational point on it.

    Lines through the point sweep out the conic; the residual intersection
    of the line in direction s*u0 + t*v gives the parametrization

        phi(s, t) = Q(W) * P - 2 * B(P, W) * W,   W = s*u0 + t*v,

    with v chosen in the tangent direction at P so that phi(0 : 1) = P.
    Every rational point of the conic is hit at a rational parameter.
    """
    p = normalize_primitive(point)
    if conic.evaluate(p) != 0:
        raise PreconditionError("the point does not lie on the conic")
    if not conic.is_smooth():
        raise DegenerateConicError("cannot parametrize a singular conic")

    gradient = [sum(conic.rows[i][j] * p[j] for j in range(3)) for i in range(3)]
    denom = math.lcm(*(g.denominator for g in gradient))
    grad = normalize_primitive([int(g * denom) for g in gradient])
    pivot = next(i for i in range(3) if grad[i] != 0)

    tangent = None
    for i in range(3):
        if i == pivot:
            continue
        cand = [0, 0, 0]
        cand[i] = grad[pivot]
        cand[pivot] = -grad[i]
        if any(x != 0 for x in cand):
            minors = [
                cand[a] * p[b] - cand[b] * p[a] for a in range(3) for b in range(a + 1, 3)
            ]
            if any(m != 0 for m in minors):
                tangent = normalize_primitive(cand)
                break
    assert tangent is not None  # grad^perp is 2-dimensional, P spans only a line

    axis = None
    for i in range(3):
        basis = [0, 0, 0]
        basis[i] = 1
        mat = [[Fraction(basis[k]), Fraction(tangent[k]), Fraction(p[k])] for k in range(3)]
        if fraction_det(mat) != 0:
            axis = tuple(basis)
            break
    assert axis is not None

    qa = conic.evaluate(axis)
    qb = 2 * conic.bilinear(axis, tangent)
    qc = conic.evaluate(tangent)
    beta = conic.bilinear(p, axis)
    raw = []
    for k in range(3):
        raw.append(
            [
                qa * p[k] - 2 * beta * axis[k],
                qb * p[k] - 2 * beta * tangent[k],
                qc * p[k],
            ]
        )
    flat = [x for row in raw for x in row]
    denom = math.lcm(*(x.denominator for x in flat))
    ints = [int(x * denom) for x in flat]
    g = math.gcd(*(abs(x) for x in ints))
    ints = [x // g for x in ints]
    for x in ints:
        if x != 0:
            if x < 0:
                ints = [-y for y in ints]
            break
    forms = tuple(BinaryForm.of(ints[3 * k : 3 * k + 3]) for k in range(3))
    out = ConicParametrization(forms=forms, base_point=p, chart=(axis, tangent))
    if not out.pullback(conic).is_zero:
        raise AssertionError("parametrization does not pull the conic back to zero")
    common = form_gcd(form_gcd(forms[0], forms[1]), forms[2])
    if common.degree != 0:
        raise AssertionError("parametrization forms share a factor")
    return out
