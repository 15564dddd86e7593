"""Exact arithmetic in L = Q(cbrt(d)) with basis (1, delta, delta_bar).

delta = cbrt(a b^2) and delta_bar = cbrt(a^2 b) satisfy
delta^2 = b delta_bar, delta_bar^2 = a delta, delta delta_bar = a b.

The integer-triple helpers (``mul3``, ``norm3``, ``cp3``, ``sign3``) are the
hot path of the Voronoi engine; :class:`FieldElement` wraps them with
rational coordinates for the public API.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

import gmpy2
import mpmath

from .radicand import Radicand, Species

Rational = Union[int, Fraction]


class MixedParents(ValueError):
    pass


# ---------------------------------------------------------------- integer core


def mul3(u, v, a: int, b: int) -> tuple[int, int, int]:
    x1, y1, z1 = u
    x2, y2, z2 = v
    return (
        x1 * x2 + a * b * (y1 * z2 + z1 * y2),
        x1 * y2 + y1 * x2 + a * z1 * z2,
        x1 * z2 + z1 * x2 + b * y1 * y2,
    )


def norm3(u, a: int, b: int) -> int:
    x, y, z = u
    ab = a * b
    return x**3 + ab * b * y**3 + ab * a * z**3 - 3 * ab * x * y * z


def cp3(u, a: int, b: int) -> tuple[int, int, int]:
    """Coordinates of theta' theta'' (the squared radius) for theta = u."""
    x, y, z = u
    return (x * x - a * b * y * z, a * z * z - x * y, b * y * y - x * z)


@lru_cache(maxsize=4096)
def _cbrt_floor(n: int, bits: int) -> int:
    root, _ = gmpy2.iroot(gmpy2.mpz(n) << (3 * bits), 3)
    return int(root)


@lru_cache(maxsize=4096)
def _floats(a: int, b: int) -> tuple[float, float]:
    return float(a * b * b) ** (1.0 / 3.0), float(a * a * b) ** (1.0 / 3.0)


def sign3(u, a: int, b: int) -> int:
    """Exact sign of x + y*cbrt(a b^2) + z*cbrt(a^2 b) for integers x, y, z.

    1, cbrt(ab^2), cbrt(a^2 b) are linearly independent over Q when a b > 1,
    so the value vanishes only for the zero vector; otherwise interval
    evaluation at doubling precision terminates.
    """
    x, y, z = u
    if not (x or y or z):
        return 0
    if a * b == 1:  # degenerate: delta = delta_bar = 1
        s = x + y + z
        return (s > 0) - (s < 0)
    mag = abs(x) + abs(y) + abs(z)
    if mag < 1 << 52:
        df, dbf = _floats(a, b)
        val = x + y * df + z * dbf
        err = 1e-13 * (abs(x) + abs(y) * df + abs(z) * dbf) + 1e-300
        if val > err:
            return 1
        if val < -err:
            return -1
    bits = max(64, 2 * mag.bit_length())
    while True:
        lo_d = _cbrt_floor(a * b * b, bits)
        lo_e = _cbrt_floor(a * a * b, bits)
        base = x << bits
        lo = base + (y * lo_d if y >= 0 else y * (lo_d + 1)) + (
            z * lo_e if z >= 0 else z * (lo_e + 1)
        )
        hi = base + (y * (lo_d + 1) if y >= 0 else y * lo_d) + (
            z * (lo_e + 1) if z >= 0 else z * lo_e
        )
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2


def _common(coords) -> tuple[tuple[int, int, int], int]:
    den = math.lcm(*(Fraction(c).denominator for c in coords))
    return tuple(int(Fraction(c) * den) for c in coords), den


def exact_sign(A: Rational, B: Rational, C: Rational, parent: Radicand) -> int:
    """Exact sign of A + B*delta + C*delta_bar as a real number."""
    nums, _ = _common((A, B, C))
    return sign3(nums, parent.a, parent.b)


# ---------------------------------------------------------------- public type


@dataclass(frozen=True)
class FieldElement:
    """x + y*delta + z*delta_bar with rational coordinates."""

    x: Fraction
    y: Fraction
    z: Fraction
    parent: Radicand

    @classmethod
    def of(cls, x: Rational, y: Rational, z: Rational, parent: Radicand) -> FieldElement:
        return cls(Fraction(x), Fraction(y), Fraction(z), parent)

    @classmethod
    def from_int3(cls, u, parent: Radicand, den: int = 1) -> FieldElement:
        x, y, z = u
        return cls(Fraction(x, den), Fraction(y, den), Fraction(z, den), parent)

    @classmethod
    def one(cls, parent: Radicand) -> FieldElement:
        return cls.of(1, 0, 0, parent)

    @classmethod
    def delta(cls, parent: Radicand) -> FieldElement:
        return cls.of(0, 1, 0, parent)

    @classmethod
    def delta_bar(cls, parent: Radicand) -> FieldElement:
        return cls.of(0, 0, 1, parent)

    @property
    def coords(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.x, self.y, self.z)

    def int3(self) -> tuple[tuple[int, int, int], int]:
        """Integer numerators over the least common denominator."""
        return _common(self.coords)

    def _check(self, other: FieldElement) -> None:
        if self.parent != other.parent:
            raise MixedParents(f"{self.parent} vs {other.parent}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.x + other, self.y, self.z, self.parent)
        self._check(other)
        return FieldElement(self.x + other.x, self.y + other.y, self.z + other.z, self.parent)

    __radd__ = __add__

    def __neg__(self) -> FieldElement:
        return FieldElement(-self.x, -self.y, -self.z, self.parent)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.x * other, self.y * other, self.z * other, self.parent)
        self._check(other)
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return FieldElement(self.x / q, self.y / q, self.z / q, self.parent)
        return self * other.inverse()

    def __pow__(self, k: int) -> FieldElement:
        if k < 0:
            return self.inverse() ** (-k)
        result = FieldElement.one(self.parent)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> FieldElement:
        n = norm(self)
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return conjugate_product(self) / n

    def sign(self) -> int:
        return exact_sign(self.x, self.y, self.z, self.parent)

    def __float__(self) -> float:
        df, dbf = _floats(self.parent.a, self.parent.b)
        approx = float(self.x) + float(self.y) * df + float(self.z) * dbf
        scale = abs(float(self.x)) + abs(float(self.y)) * df + abs(float(self.z)) * dbf
        if abs(approx) > 1e-6 * scale:
            return approx
        # heavy cancellation (large units): evaluate with enough digits
        bits = max(c.numerator.bit_length() + c.denominator.bit_length() for c in self.coords)
        with mpmath.workprec(bits + 64):
            a, b = self.parent.a, self.parent.b
            v = (
                mpmath.mpf(self.x.numerator) / self.x.denominator
                + mpmath.mpf(self.y.numerator) / self.y.denominator * mpmath.cbrt(a * b * b)
                + mpmath.mpf(self.z.numerator) / self.z.denominator * mpmath.cbrt(a * a * b)
            )
            return float(v)

    def is_integral_o0(self) -> bool:
        """Membership in Z + Z delta + Z delta_bar."""
        return all(c.denominator == 1 for c in self.coords)

    def is_integral(self) -> bool:
        """Membership in the maximal order."""
        if self.is_integral_o0():
            return True
        if self.parent.species is not Species.S2:
            return False
        if any(3 % c.denominator for c in self.coords):
            return False
        s1, s2 = maximal_order_signs(self.parent)
        t = int(self.x * 3) % 3
        return (int(self.y * 3) - t * s1) % 3 == 0 and (int(self.z * 3) - t * s2) % 3 == 0

    def charpoly(self) -> tuple[Fraction, Fraction, Fraction]:
        """(c2, c1, c0) with X^3 + c2 X^2 + c1 X + c0 the characteristic polynomial."""
        x, y, z = self.coords
        ab = self.parent.ab
        return (-3 * x, 3 * (x * x - ab * y * z), -norm(self))

    def __repr__(self) -> str:
        return f"FieldElement({self.x}, {self.y}, {self.z}; d={self.parent.d})"


def mul(e1: FieldElement, e2: FieldElement) -> FieldElement:
    e1._check(e2)
    a, b = e1.parent.a, e1.parent.b
    u, du = e1.int3()
    v, dv = e2.int3()
    return FieldElement.from_int3(mul3(u, v, a, b), e1.parent, du * dv)


def norm(e: FieldElement) -> Fraction:
    u, den = e.int3()
    return Fraction(norm3(u, e.parent.a, e.parent.b), den**3)


def conjugate_product(e: FieldElement) -> FieldElement:
    u, den = e.int3()
    return FieldElement.from_int3(cp3(u, e.parent.a, e.parent.b), e.parent, den * den)


@lru_cache(maxsize=4096)
def maximal_order_signs(r: Radicand) -> tuple[int, int]:
    """Sign pattern (s1, s2) with (1 + s1 delta + s2 delta_bar)/3 integral.

    Only species 2 admits such a pattern.
    """
    if r.species is not Species.S2:
        raise ValueError(f"no denominator-3 integral element for species {r.species.value}")
    a, b = r.a, r.b
    for s1 in (1, -1):
        for s2 in (1, -1):
            u = (1, s1, s2)
            # trace 1 and second coefficient 3(1 - ab s1 s2)/9 must be integral,
            # norm (1 + ab^2 s1 + a^2 b s2 - 3 ab s1 s2)/27 too
            if (1 - a * b * s1 * s2) % 3:
                continue
            if norm3(u, a, b) % 27:
                continue
            return s1, s2
    raise AssertionError(f"species 2 radicand {r.d} without integral basis vector")
