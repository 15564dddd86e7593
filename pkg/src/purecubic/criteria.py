"""Closed-form criteria for principal factors among lattice minima.

All inequalities are decided exactly: the normalized radicals gamma and
gamma_bar are elements of L, P2/P4/Q4 are evaluated in L and compared with
``exact_sign``; the quadratic bounds sqrt(6) and (-1 + sqrt(33))/2 are
compared against rational cubes by squaring.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath

from .field import FieldElement
from .radicand import (
    CanonicalSplit,
    Radicand,
    Species,
    canonical_split,
    congruence_invariants,
    coset_norms,
)
from .voronoi import OrderKind


class HypothesisViolated(ValueError):
    """gamma <= 1 or gamma_bar <= 1: the norm is not minimal in its coset."""


class NotTypeBeta(ValueError):
    pass


class Verdict(str, enum.Enum):
    IS_MINIMUM = "is_minimum"
    NOT_MINIMUM = "not_minimum"
    UNCONDITIONAL = "unconditionally_minimum"

    @property
    def minimal(self) -> bool:
        return self is not Verdict.NOT_MINIMUM


class Coarse(str, enum.Enum):
    FORCES_MINIMUM = "forces_minimum"
    FORCES_NON_MINIMUM = "forces_non_minimum"
    INDETERMINATE = "indeterminate"


# ------------------------------------------------------------- polynomials


def p2(X, Y):
    return X * X + Y * Y - X * Y - X - Y + 1


def p4(X, Y):
    X2 = X * X
    return X2 * X2 - X2 * X + X2 * Y - 8 * X2 + X * Y + Y * Y


def q4(X):
    X2 = X * X
    return X2 * X2 + X2 * X + X - 8


# ------------------------------------------------------------------ bounds


def bound_B(u: int) -> float:
    """sqrt(6) for u = -1, 2 for u = 1 (as a float; comparisons use B_squared)."""
    return mpmath.sqrt(6) if u == -1 else mpmath.mpf(2)


def bound_C(u: int):
    """(-1 + sqrt(33))/2 for u = 1, 2 for u = -1."""
    return (mpmath.sqrt(33) - 1) / 2 if u == 1 else mpmath.mpf(2)


def _le_B(q: Fraction, u: int) -> bool:
    """q <= B(u) for rational q > 0."""
    return q * q <= 6 if u == -1 else q <= 2


def _cube_ge_B(c: Fraction, u: int) -> bool:
    """B(u)^3 <= c for rational c > 0 (B^3 = 6 sqrt 6 or 8)."""
    return c * c >= 216 if u == -1 else c >= 8


def _cube_lt_C(c: Fraction, u: int) -> bool:
    """c < C(u)^3 for rational c > 0, with C(1)^3 = (-25 + 9 sqrt 33)/2."""
    if u == -1:
        return c < 8
    t = 2 * c + 25
    return t < 0 or t * t < 81 * 33


@lru_cache(maxsize=1)
def z_plus(dps: int = 30):
    """The positive zero of X^4 + X^3 + X - 8, isolated in (1.4, 1.41)."""
    with mpmath.workdps(dps):
        return mpmath.findroot(lambda x: x**4 + x**3 + x - 8, (1.4, 1.41), solver="bisect")


def constants(dps: int = 30) -> dict[str, mpmath.mpf]:
    with mpmath.workdps(dps):
        c1 = (mpmath.sqrt(33) - 1) / 2
        zp = mpmath.findroot(lambda x: x**4 + x**3 + x - 8, (1.4, 1.41), solver="bisect")
        return {
            "sqrt6": mpmath.sqrt(6),
            "C1": c1,
            "C1_cubed": c1**3,
            "Z_plus": zp,
            "Z_plus_cubed": zp**3,
        }


# ----------------------------------------------------------- criterion input


@dataclass(frozen=True)
class CriterionInput:
    radicand: Radicand
    split: CanonicalSplit
    u1: int | None
    u2: int | None
    gamma: FieldElement
    gamma_bar: FieldElement
    y: Fraction

    @property
    def gamma_cubed(self) -> Fraction:
        d1, d2, d3, d4, d5, d6 = self.split.divisors
        r = self.radicand
        return Fraction(r.a * r.b * r.b, (d2 * d4 * d5) ** 3)

    @property
    def gamma_bar_cubed(self) -> Fraction:
        d1, d2, d3, d4, d5, d6 = self.split.divisors
        r = self.radicand
        return Fraction(r.a * r.a * r.b, (d1 * d2 * d5) ** 3)


def criterion_input(r: Radicand, n: int) -> CriterionInput:
    s = canonical_split(r, n)
    d1, d2, d3, d4, d5, d6 = s.divisors
    gamma = FieldElement.of(0, Fraction(1, d2 * d4 * d5), 0, r)
    gamma_bar = FieldElement.of(0, 0, Fraction(1, d1 * d2 * d5), r)
    y = gamma * gamma_bar
    assert y.y == 0 and y.z == 0 and y.x == Fraction(d3 * d6, d2 * d5)
    if r.species is Species.S1A:
        u1 = u2 = None
    else:
        u1, u2 = congruence_invariants(s)
    return CriterionInput(r, s, u1, u2, gamma, gamma_bar, y.x)


def _check_hypothesis(inp: CriterionInput) -> None:
    if inp.gamma_cubed <= 1 or inp.gamma_bar_cubed <= 1:
        raise HypothesisViolated(
            f"norm {inp.split.n} is not minimal in its coset "
            f"(gamma^3={inp.gamma_cubed}, gamma_bar^3={inp.gamma_bar_cubed})"
        )


def p2_value(inp: CriterionInput) -> FieldElement:
    return p2(inp.u1 * inp.gamma, inp.u2 * inp.gamma_bar)


def escalatory3_signs(inp: CriterionInput) -> tuple[int, int, int]:
    """Exact signs of P2(u1 g, u2 gb) - 9, P4(u1 g, -u1 u2 y), P4(u2 gb, -u1 u2 y)."""
    u1, u2 = inp.u1, inp.u2
    Y = FieldElement.of(-u1 * u2 * inp.y, 0, 0, inp.radicand)
    return (
        (p2_value(inp) - 9).sign(),
        p4(u1 * inp.gamma, Y).sign(),
        p4(u2 * inp.gamma_bar, Y).sign(),
    )


def predict_minimum(
    inp: CriterionInput, order: OrderKind = OrderKind.MAXIMAL
) -> Verdict:
    """Whether the principal factor of norm inp.split.n is a lattice minimum."""
    _check_hypothesis(inp)
    sp, v = inp.radicand.species, inp.split.v
    if sp is Species.S1A:
        return Verdict.UNCONDITIONAL
    if sp is Species.S2 and order is OrderKind.SUBORDER0:
        return Verdict.UNCONDITIONAL
    if sp is Species.S1B and v == 0:
        return Verdict.UNCONDITIONAL
    if v == 2:
        below = _cube_lt_C(inp.gamma_cubed, inp.u1) or _cube_lt_C(inp.gamma_bar_cubed, inp.u2)
        return Verdict.NOT_MINIMUM if below else Verdict.IS_MINIMUM
    # species 2 in the maximal order, or species 1b with v = 1
    if (inp.u1, inp.u2) == (1, 1):
        return Verdict.IS_MINIMUM
    return Verdict.NOT_MINIMUM if (p2_value(inp) - 9).sign() < 0 else Verdict.IS_MINIMUM


def coarse_conditions(inp: CriterionInput) -> Coarse:
    """One-sided tests: the max(gamma/B, gamma_bar/B) >= 1 bound and y <= B(-u1 u2)."""
    if inp.radicand.species is Species.S1A or inp.split.v == 2:
        raise ValueError("coarse conditions apply to species 2 or v = 1 only")
    if (inp.u1, inp.u2) == (1, 1):
        return Coarse.FORCES_MINIMUM
    if _cube_ge_B(inp.gamma_cubed, inp.u2) or _cube_ge_B(inp.gamma_bar_cubed, inp.u1):
        return Coarse.FORCES_MINIMUM
    if _le_B(inp.y, -inp.u1 * inp.u2):
        return Coarse.FORCES_NON_MINIMUM
    return Coarse.INDETERMINATE


# ------------------------------------------------------------------ M-class


class MClassKind(str, enum.Enum):
    M0 = "M0"
    M1 = "M1"
    M2 = "M2"


@dataclass(frozen=True)
class CosetVerdict:
    norm: int
    verdict: Verdict


@dataclass(frozen=True)
class MClass:
    kind: MClassKind
    first: CosetVerdict
    second: CosetVerdict
    trace: tuple[str, ...] = field(default=())
    fast_path: str | None = None


def coset_minima(r: Radicand, n: int) -> tuple[int, int]:
    """Minimal norms of the coset of n and of its square."""
    cn = coset_norms(canonical_split(r, n))
    return cn.minimal_first, cn.minimal_second


def m_class(r: Radicand, n: int) -> MClass:
    """M0/M1/M2 from a principal factor norm n (any member of a nontrivial coset)."""
    n1, n2 = coset_minima(r, n)
    if n1 == 1 or n2 == 1:
        raise NotTypeBeta(f"{n} lies in the trivial coset of d={r.d}")
    v1 = predict_minimum(criterion_input(r, n1))
    v2 = predict_minimum(criterion_input(r, n2))
    count = v1.minimal + v2.minimal
    kind = (MClassKind.M0, MClassKind.M1, MClassKind.M2)[count]
    trace: list[str] = []
    fast = None
    sq = square_part_1b(r, n1, n2)
    if sq is not None:
        fast_kind, trace = sq
        fast = "square-part species 1b"
        if fast_kind is not kind:
            raise AssertionError(f"d={r.d}: integer criterion {fast_kind} vs general {kind}")
    sf = squarefree_spec2(r, n1, n2)
    if sf is not None:
        is_m0, trace = sf
        fast = "squarefree species 2"
        if is_m0 and kind is not MClassKind.M0:
            raise AssertionError(f"d={r.d}: integer criterion M0 vs general {kind}")
    return MClass(kind, CosetVerdict(n1, v1), CosetVerdict(n2, v2), tuple(trace), fast)


def _res(m: int) -> int:
    return 1 if m % 3 == 1 else -1


def square_part_1b(r: Radicand, n1: int, n2: int):
    """Integer criteria for d = d3 d4^2 of species 1b with norms 9 d4 and 3 d4^2.

    Returns (MClassKind, trace) or None when the shape does not apply.
    """
    if r.species is not Species.S1B or r.b == 1:
        return None
    d3, d4 = r.a, r.b
    if {n1, n2} != {9 * d4, 3 * d4 * d4} or not d4 < d3:
        return None
    zp3 = z_plus() ** 3
    c13 = constants()["C1_cubed"]
    trace = [f"d3 = {d3}, d4 = {d4}, d4 < d3"]
    if _res(d3) == -_res(d4):
        # d3 < Z+^3 d4  <=>  Q4(cbrt(d3/d4)) < 0, decided in L
        g = FieldElement.of(0, Fraction(1, d4), 0, r)
        below_z = q4(g).sign() < 0
        trace.append(f"d3 = {d3} = -d4 (mod 3)")
        if below_z:
            trace.append(f"d3 = {d3} < {float(zp3 * d4):.2f} = Z+^3 * {d4}")
            return MClassKind.M0, trace
        trace.append(f"d3 = {d3} >= {float(zp3 * d4):.2f} = Z+^3 * {d4}")
        if d3 < 8 * d4:
            trace.append(f"d3 = {d3} < {8 * d4} = 8 * {d4}")
            return MClassKind.M1, trace
        trace.append(f"d3 = {d3} >= {8 * d4} = 8 * {d4}")
        return MClassKind.M2, trace
    trace.append(f"d3 = {d3} = d4 (mod 3)")
    if _cube_lt_C(Fraction(d3, d4), 1):
        trace.append(f"d3 = {d3} < {float(c13 * d4):.2f} = C1^3 * {d4}")
        return MClassKind.M1, trace
    trace.append(f"d3 = {d3} >= {float(c13 * d4):.2f} = C1^3 * {d4}")
    return MClassKind.M2, trace


def squarefree_spec2(r: Radicand, n1: int, n2: int):
    """Sufficient integer criteria for M0 of squarefree species-2 radicands.

    ``n1`` is the minimal norm d1 d2^2 of one nontrivial coset.  Returns
    (is_m0, trace) or None when d is not squarefree of species 2.
    """
    if r.species is not Species.S2 or r.b != 1:
        return None
    # either coset may play the role of the first one; try both labellings
    best = None
    for m in (n1, n2):
        s = canonical_split(r, m)
        d1, d2, d3 = s.d1, s.d2, s.d3
        out = _squarefree_spec2_one(d1, d2, d3)
        if out[0]:
            return out
        best = best or out
    return best


def _squarefree_spec2_one(d1: int, d2: int, d3: int):
    trace = [f"d1 = {d1}, d2 = {d2}, d3 = {d3}"]
    if not (d2 * d2 < d1 * d3 and d1 * d2 < d3 * d3):
        trace.append("d1 d2^2 is not minimal in its coset")
        return False, trace
    trace.append(f"d1 d3 = {d1 * d3} > {d2 * d2} = d2^2, d3^2 = {d3 * d3} > {d1 * d2} = d1 d2")
    e1, e2, e3 = _res(d1), _res(d2), _res(d3)
    if e1 == e2 == e3:
        trace.append("d1 = d2 = d3 (mod 3)")
        return False, trace
    s6 = mpmath.sqrt(6)

    def le_sqrt6(x: int, y: int) -> bool:  # x <= sqrt(6) y
        return x * x <= 6 * y * y

    if d1 * d1 < d2 * d3:
        trace.append(f"d2 d3 = {d2 * d3} > {d1 * d1} = d1^2 (first variant)")
        if e1 == e2 == -e3:
            ok = 2 * min(d1, d2) >= d3
            trace.append(f"d1 = d2 = -d3 (mod 3), d3 = {d3} {'<=' if ok else '>'} {2 * min(d1, d2)} = 2 min(d1, d2)")
        elif e1 == -e2 == e3:
            ok = le_sqrt6(d3, d1) and d3 <= 2 * d2
            trace.append(f"d1 = -d2 = d3 (mod 3), d3 = {d3} vs min({float(s6 * d1):.2f}, {2 * d2})")
        else:
            ok = d3 <= 2 * d1 and le_sqrt6(d3, d2)
            trace.append(
                f"-d1 = d2 = d3 (mod 3), d3 = {d3} {'<' if d3 < 2 * d1 else '>='} {2 * d1} = 2 d1, "
                f"d3 = {d3} {'<' if le_sqrt6(d3, d2) else '>'} {float(s6 * d2):.2f} = sqrt6 d2"
            )
        return ok, trace
    trace.append(f"d2 d3 = {d2 * d3} < {d1 * d1} = d1^2 (second variant)")
    if e1 == e2 == -e3:
        ok = le_sqrt6(d1, d2) and d3 <= 2 * d2
        trace.append(f"d1 = d2 = -d3 (mod 3), d1 = {d1} vs {float(s6 * d2):.2f} = sqrt6 d2, d3 = {d3} vs {2 * d2} = 2 d2")
    elif e1 == -e2 == e3:
        ok = max(d1, d3) <= 2 * d2
        trace.append(f"d1 = -d2 = d3 (mod 3), max(d1, d3) = {max(d1, d3)} vs {2 * d2} = 2 d2")
    else:
        ok = d1 <= 2 * d2 and le_sqrt6(d3, d2)
        trace.append(
            f"-d1 = d2 = d3 (mod 3), d1 = {d1} {'<' if d1 < 2 * d2 else '>='} {2 * d2} = 2 d2, "
            f"d3 = {d3} {'<' if le_sqrt6(d3, d2) else '>'} {float(s6 * d2):.2f} = sqrt6 d2"
        )
    return ok, trace
