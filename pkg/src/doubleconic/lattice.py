"""Intersection theory on the Picard lattice of a blown-up plane.

A surface obtained from P^2 by blowing up r points has Picard lattice
Z^(1+r) with basis (L, E1, ..., Er) and intersection form
diag(+1, -1, ..., -1); for 0 <= r <= 8 and points in general position this
is a del Pezzo surface of degree d = 9 - r.  The module enumerates the two
families of classes the rest of the package needs,

* exceptional classes  E with E^2 = -1 and K.E = -1,
* conic classes        C with C^2 =  0 and K.C = -2,

and, for d in {1, 2, 4}, builds from a conic class C the complementary
class D = -(4/d)K - C, the fibre class of a second conic fibration whose
fibres meet those of the first in C.D = 8/d points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import (
    DimensionError,
    InvalidInputError,
    NonIntegralClassError,
    NonIntegralGenusError,
    PreconditionError,
)

SECOND_FIBRATION_DEGREES = (1, 2, 4)

EXCEPTIONAL_NUMBERS = (-1, -1)  # (self-intersection, K-degree)
CONIC_NUMBERS = (0, -2)


@dataclass(frozen=True)
class DivisorClass:
    """Integer class a*L + sum(b_i * E_i), stored as (a, b1, ..., br)."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        if not coeffs:
            raise InvalidInputError("divisor class needs at least the L coefficient")
        if not all(isinstance(c, int) for c in coeffs):
            raise InvalidInputError("divisor class coefficients must be integers")
        object.__setattr__(self, "coeffs", coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self.coeffs)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        if len(other) != len(self):
            raise DimensionError("divisor classes live in different lattices")
        return DivisorClass(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return self + (-other)

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(tuple(-a for a in self.coeffs))

    def __rmul__(self, n: int) -> "DivisorClass":
        if not isinstance(n, int):
            return NotImplemented
        return DivisorClass(tuple(n * a for a in self.coeffs))

    def to_json(self) -> list[int]:
        return list(self.coeffs)


@dataclass(frozen=True)
class Lattice:
    """Picard lattice of a blow-up of P^2 in r points (0 <= r <= 8)."""

    r: int

    def __post_init__(self):
        if not isinstance(self.r, int) or not 0 <= self.r <= 8:
            raise InvalidInputError("blow-up count r must be an integer with 0 <= r <= 8")

    @classmethod
    def of_degree(cls, degree: int) -> "Lattice":
        if not isinstance(degree, int) or not 1 <= degree <= 9:
            raise PreconditionError("degree must be an integer with 1 <= degree <= 9")
        return cls(9 - degree)

    @property
    def degree(self) -> int:
        return 9 - self.r

    @property
    def rank(self) -> int:
        return self.r + 1

    def divisor(self, coeffs: Sequence[int]) -> DivisorClass:
        cls = DivisorClass(tuple(int(c) for c in coeffs))
        self._check(cls)
        return cls

    def _check(self, cls: DivisorClass) -> None:
        if len(cls) != self.rank:
            raise DimensionError(
                f"class of length {len(cls)} does not fit a lattice of rank {self.rank}"
            )

    def intersect(self, a: DivisorClass, b: DivisorClass) -> int:
        """Intersection product a0*b0 - sum(ai*bi); symmetric and bilinear."""
        self._check(a)
        self._check(b)
        return a[0] * b[0] - sum(x * y for x, y in zip(a.coeffs[1:], b.coeffs[1:]))

    def canonical_class(self) -> DivisorClass:
        return DivisorClass((-3,) + (1,) * self.r)

    def arithmetic_genus(self, cls: DivisorClass) -> int:
        """Adjunction genus 1 + (D.D + K.D)/2.

        For integral classes the numerator is always even (a^2 - 3a and
        b^2 + b are even for every integer); the parity guard encodes the
        contradiction that rules out non-integral candidates.
        """
        self._check(cls)
        numerator = self.intersect(cls, cls) + self.intersect(self.canonical_class(), cls)
        if numerator % 2 != 0:
            raise NonIntegralGenusError(
                f"D.D + K.D = {numerator} is odd: the adjunction genus is not an integer"
            )
        return 1 + numerator // 2

    def riemann_roch_chi(self, cls: DivisorClass) -> Fraction:
        """Euler characteristic (1/2) D.(D - K) + 1 (chi(O) = 1 is built in)."""
        self._check(cls)
        return Fraction(self.intersect(cls, cls - self.canonical_class()), 2) + 1

    # -- class enumeration ------------------------------------------------

    def class_search_box(self, self_intersection: int, k_degree: int) -> tuple[int, int]:
        """Certified search box (a_cap, b_cap) for the class system.

        Solutions of sum(b) = -3a - k, sum(b^2) = a^2 - s must satisfy
        (3a + k)^2 <= r (a^2 - s) by Cauchy-Schwarz, and a >= 0 (for the
        exceptional and conic systems the a < 0 branch of the inequality
        has no integer solutions).  Every coefficient then satisfies
        b^2 <= a_cap^2 - s.
        """
        s, k = self_intersection, k_degree
        r = self.r
        if r == 0:
            return (0, 0)
        lead = 9 - r  # positive for r <= 8
        disc = 36 * k * k - 4 * lead * (k * k + r * s)
        if disc < 0:
            return (-1, 0)
        upper = (-6 * k + math.isqrt(disc)) // (2 * lead) + 2
        a_cap = -1
        for a in range(0, upper + 1):
            if lead * a * a + 6 * k * a + (k * k + r * s) <= 0:
                a_cap = a
        if a_cap < 0:
            return (-1, 0)
        b_cap = math.isqrt(max(a_cap * a_cap - s, 0))
        return (a_cap, b_cap)

    def _enumerate_classes(
        self, self_intersection: int, k_degree: int, slack: int = 0
    ) -> tuple[DivisorClass, ...]:
        s, k = self_intersection, k_degree
        r = self.r
        if r == 0:
            out = []
            for a in (-k // 3,) if k % 3 == 0 else ():
                if a * a == s and -3 * a == k:
                    out.append(DivisorClass((a,)))
            return tuple(out)
        a_cap, b_cap = self.class_search_box(s, k)
        if a_cap < 0:
            return ()
        lo, hi = -(b_cap + slack), b_cap + slack
        results: list[DivisorClass] = []

        def extend(prefix: list[int], remaining: int, target_sum: int, target_sq: int) -> None:
            if remaining == 0:
                if target_sum == 0 and target_sq == 0:
                    results.append(DivisorClass(tuple(prefix)))
                return
            for b in range(lo, hi + 1):
                sq = target_sq - b * b
                if sq < 0:
                    if b >= 0:
                        break
                    continue
                rest = target_sum - b
                # Cauchy-Schwarz on the remaining coordinates is a sound cut.
                if rest * rest > (remaining - 1) * sq:
                    continue
                prefix.append(b)
                extend(prefix, remaining - 1, rest, sq)
                prefix.pop()

        for a in range(0, a_cap + slack + 1):
            target_sq = a * a - s
            if target_sq < 0:
                continue
            target_sum = -3 * a - k
            if target_sum * target_sum > r * target_sq:
                continue
            extend([a], r, target_sum, target_sq)
        results.sort(key=lambda c: c.coeffs)
        return tuple(results)

    def exceptional_classes(self, slack: int = 0) -> tuple[DivisorClass, ...]:
        """All classes E with E^2 = -1 and K.E = -1, in lexicographic order.

        `slack` widens every search bound; the output must not change
        (stabilization check used by the test suite).
        """
        return self._enumerate_classes(*EXCEPTIONAL_NUMBERS, slack=slack)

    def conic_classes(self, slack: int = 0) -> tuple[DivisorClass, ...]:
        """All classes C with C^2 = 0 and K.C = -2, in lexicographic order."""
        return self._enumerate_classes(*CONIC_NUMBERS, slack=slack)

    # -- the second fibration ---------------------------------------------

    def is_conic_class(self, cls: DivisorClass) -> bool:
        self._check(cls)
        k = self.canonical_class()
        return self.intersect(cls, cls) == 0 and self.intersect(k, cls) == -2

    def second_fibration(self, conic: DivisorClass) -> DivisorClass:
        """The class D = -(4/d)K - C of the fibration meeting C in 8/d points.

        Only degrees 1, 2 and 4 make (4/d)K integral; D satisfies D^2 = 0,
        -K.D = 2, C.D = 8/d and has genus 0, and the construction is an
        involution (D + C = -(4/d)K).
        """
        d = self.degree
        if d not in SECOND_FIBRATION_DEGREES:
            raise NonIntegralClassError(
                f"degree must be in {{1,2,4}}: -(4/d)K is not an integral class for degree {d}"
            )
        self._check(conic)
        if not self.is_conic_class(conic):
            raise PreconditionError(
                "input is not a conic class (needs C^2 = 0 and K.C = -2)"
            )
        k = self.canonical_class()
        second = (-(4 // d)) * k - conic
        assert self.intersect(second, second) == 0
        assert -self.intersect(k, second) == 2
        assert self.intersect(conic, second) == 8 // d
        assert self.arithmetic_genus(second) == 0
        return second

    def audit_second_fibrations(self) -> dict:
        """Recompute every numeric identity behind the second fibration.

        For each conic class C the report checks, with D = -(4/d)K - C:
        D^2 = 0, -K.D = 2, C.D = 8/d, genus(D) = 0, chi(D) = 2,
        -K.(K - D) = -(d + 2) (so K - D is never effective), and that the
        construction is an involution into the enumerated conic classes.
        """
        d = self.degree
        if d not in SECOND_FIBRATION_DEGREES:
            raise PreconditionError("degree must be in {1,2,4}")
        k = self.canonical_class()
        m = 4 // d
        conics = self.conic_classes()
        conic_set = set(conics)
        identity_names = (
            "second_self_intersection_zero",
            "second_anticanonical_degree_two",
            "fibre_meeting_number",
            "second_genus_zero",
            "second_chi_two",
            "residual_anticanonical_degree",
            "involution",
        )
        all_ok = {name: True for name in identity_names}
        failures: list[dict] = []
        for conic in conics:
            second = (-m) * k - conic
            checks = {
                "second_self_intersection_zero": self.intersect(second, second) == 0,
                "second_anticanonical_degree_two": -self.intersect(k, second) == 2,
                "fibre_meeting_number": self.intersect(conic, second) == 8 // d,
                "second_genus_zero": self.arithmetic_genus(second) == 0,
                "second_chi_two": self.riemann_roch_chi(second) == 2,
                "residual_anticanonical_degree": -self.intersect(k, k - second) == -(d + 2),
                "involution": second in conic_set and (-m) * k - second == conic,
            }
            for name, ok in checks.items():
                if not ok:
                    all_ok[name] = False
                    failures.append({"conic_class": conic.to_json(), "identity": name})
        return {
            "degree": d,
            "conic_class_count": len(conics),
            "fibre_meeting_number": 8 // d,
            "residual_anticanonical_degree": -(d + 2),
            "identities": all_ok,
            "failures": failures,
            "all_pass": not failures,
        }
