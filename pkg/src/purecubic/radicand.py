"""Integer invariants of pure cubic fields Q(cbrt(d)).

A radicand is stored in normalized form d = a*b**2 with a > b >= 1 squarefree
and coprime.  The co-radicand a**2*b defines the same field.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

from sympy import factorint

__all__ = [
    "Species",
    "Radicand",
    "CanonicalSplit",
    "CosetNorms",
    "NotACubicField",
    "NotAPrincipalFactorNorm",
    "ThreeDividesInvariant",
    "normalize",
    "canonical_split",
    "coset_norms",
    "congruence_invariants",
    "factor",
    "principal_norm_candidates",
]


class NotACubicField(ValueError):
    """The integer is a perfect cube, so it does not define a cubic field."""


class NotAPrincipalFactorNorm(ValueError):
    """The integer cannot be the norm of a primitive principal factor."""


class ThreeDividesInvariant(ValueError):
    """A congruence invariant is divisible by 3 (species 1a input)."""


class Species(str, enum.Enum):
    S1A = "1a"
    S1B = "1b"
    S2 = "2"


@lru_cache(maxsize=65536)
def factor(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of ``n`` as sorted ``(p, e)`` pairs."""
    return tuple(sorted(factorint(n).items()))


@dataclass(frozen=True)
class Radicand:
    d: int
    a: int
    b: int
    dbar: int
    species: Species
    f: int
    R: int

    @property
    def ab(self) -> int:
        return self.a * self.b

    @property
    def primes(self) -> tuple[int, ...]:
        """Primes dividing a*b, ascending."""
        return tuple(p for p, _ in factor(self.ab))

    @property
    def ramified_primes(self) -> tuple[int, ...]:
        """Primes dividing the ramification invariant R."""
        return tuple(p for p, _ in factor(self.R))

    def __str__(self) -> str:
        return f"d={self.d} (a={self.a}, b={self.b}, species {self.species.value})"


def _species(a: int, b: int) -> Species:
    d = a * b * b
    if (a * b) % 3 == 0:
        return Species.S1A
    if d % 9 in (1, 8):
        return Species.S2
    return Species.S1B


def from_ab(a: int, b: int) -> Radicand:
    if a < b:
        a, b = b, a
    sp = _species(a, b)
    ab = a * b
    f = ab if sp is Species.S2 else 3 * ab
    R = 3 * ab if sp is Species.S1B else ab
    return Radicand(d=a * b * b, a=a, b=b, dbar=a * a * b, species=sp, f=f, R=R)


@lru_cache(maxsize=65536)
def normalize(m: int) -> Radicand:
    """Reduce ``m`` modulo cubes and return the normalized radicand.

    >>> normalize(18).d
    12
    """
    if m < 2:
        raise NotACubicField(f"radicand must be >= 2, got {m}")
    a = b = 1
    for p, e in factor(m):
        if e % 3 == 1:
            a *= p
        elif e % 3 == 2:
            b *= p
    if a == b:  # only a == b == 1 is possible here
        raise NotACubicField(f"{m} is a perfect cube")
    return from_ab(a, b)


@dataclass(frozen=True)
class CanonicalSplit:
    """Canonical divisors of a radicand relative to a principal factor norm."""

    d1: int
    d2: int
    d3: int
    d4: int
    d5: int
    d6: int
    v: int
    n: int

    @property
    def divisors(self) -> tuple[int, int, int, int, int, int]:
        return (self.d1, self.d2, self.d3, self.d4, self.d5, self.d6)


def canonical_split(r: Radicand, n: int) -> CanonicalSplit:
    if n < 1:
        raise NotAPrincipalFactorNorm(f"norm must be positive, got {n}")
    fac = dict(factor(n)) if n > 1 else {}
    v = fac.pop(3, 0) if r.species is not Species.S1A else 0
    if v and r.species is not Species.S1B:
        raise NotAPrincipalFactorNorm(f"3 | {n} but species is {r.species.value}")
    if v > 2:
        raise NotAPrincipalFactorNorm(f"9 * 3 divides {n}")
    slots = {k: 1 for k in ("d1", "d2", "d3", "d4", "d5", "d6")}
    for p, e in fac.items():
        if e > 2:
            raise NotAPrincipalFactorNorm(f"{p}**{e} divides {n}")
        if r.a % p == 0:
            slots[("d3", "d1", "d2")[e]] *= p
        elif r.b % p == 0:
            slots[("d6", "d4", "d5")[e]] *= p
        else:
            raise NotAPrincipalFactorNorm(f"prime {p} of {n} does not divide ab")
    for p in r.primes:
        if p not in fac:
            slots["d3" if r.a % p == 0 else "d6"] *= p
    return CanonicalSplit(**slots, v=v, n=n)


@dataclass(frozen=True)
class CosetNorms:
    trivial: tuple[int, int, int]
    first: tuple[int, int, int]
    second: tuple[int, int, int]

    @property
    def minimal_first(self) -> int:
        return min(self.first)

    @property
    def minimal_second(self) -> int:
        return min(self.second)


def coset_norms(s: CanonicalSplit) -> CosetNorms:
    """Norms of the three cosets of primitive principal factors.

    The coset containing ``s.n`` is ``first``; the 3-part of the squared
    coset is ``3**(2v mod 3)`` after removing cubes.
    """
    d1, d2, d3, d4, d5, d6 = s.divisors
    a, b = d1 * d2 * d3, d4 * d5 * d6
    t1 = 3**s.v
    t2 = 3 ** ((2 * s.v) % 3)
    return CosetNorms(
        trivial=(1, a * b * b, a * a * b),
        first=(
            t1 * d1 * d2**2 * d4 * d5**2,
            t1 * d1**2 * d3 * d5 * d6**2,
            t1 * d2 * d3**2 * d4**2 * d6,
        ),
        second=(
            t2 * d1**2 * d2 * d4**2 * d5,
            t2 * d2**2 * d3 * d4 * d6**2,
            t2 * d1 * d3**2 * d5**2 * d6,
        ),
    )


def _pm1(m: int) -> int:
    res = m % 3
    if res == 0:
        raise ThreeDividesInvariant(f"3 divides {m}")
    return 1 if res == 1 else -1


def congruence_invariants(s: CanonicalSplit) -> tuple[int, int]:
    """(u1, u2) with u1 = d1 d3 d4 d5 and u2 = d1 d2 d4 d6 modulo 3, as +-1."""
    d1, d2, d3, d4, d5, d6 = s.divisors
    return _pm1(d1 * d3 * d4 * d5), _pm1(d1 * d2 * d4 * d6)


def principal_norm_candidates(r: Radicand) -> list[int]:
    """All cube-free divisors of R**2 that could be principal factor norms."""
    primes = list(r.ramified_primes)
    out = [1]
    for p in primes:
        out = [m * p**e for m in out for e in (0, 1, 2)]
    return sorted(out)

