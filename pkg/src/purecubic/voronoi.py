"""Voronoi chains of lattice minima for orders of pure cubic fields.

An element theta > 0 of an order O is a lattice minimum when its norm
cylinder {0 <= h < theta, r < |theta'|} meets psi(O) only in the origin.
Starting from 1, the chain is walked in the direction of decreasing height:
in the current lattice (1/theta) O, the adjacent minimum below 1 is the
lattice point with 0 < h < 1 of least radius (ties: largest height).

Floating point is used only to *find* candidates; every decision that
selects or rejects a candidate is made by ``sign3``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

import mpmath

from .field import FieldElement, cp3, maximal_order_signs, mul3, norm3, sign3
from .radicand import Radicand, Species

_SQ3_2 = math.sqrt(3.0) / 2.0
_TOL = 1e-9


class EnumerationOverflow(RuntimeError):
    """A lattice search exceeded its budget."""


BudgetExceeded = EnumerationOverflow


class OrderKind(str, enum.Enum):
    MAXIMAL = "maximal"
    SUBORDER0 = "suborder0"


class Stop(str, enum.Enum):
    FULL_PERIOD = "full"
    FIRST_PF = "first_pf"


@dataclass(frozen=True)
class CubicOrder:
    parent: Radicand
    kind: OrderKind

    @property
    def den(self) -> int:
        """Common denominator of the basis coordinates (1 or 3)."""
        if self.kind is OrderKind.MAXIMAL and self.parent.species is Species.S2:
            return 3
        return 1

    @property
    def int_basis(self) -> tuple[tuple[int, int, int], ...]:
        if self.den == 1:
            return ((1, 0, 0), (0, 1, 0), (0, 0, 1))
        s1, s2 = maximal_order_signs(self.parent)
        return ((3, 0, 0), (0, 3, 0), (1, s1, s2))

    @property
    def basis(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement.from_int3(v, self.parent, self.den) for v in self.int_basis)

    def contains(self, e: FieldElement) -> bool:
        if self.kind is OrderKind.SUBORDER0:
            return e.is_integral_o0()
        return e.is_integral()


def maximal_order(r: Radicand) -> CubicOrder:
    return CubicOrder(r, OrderKind.MAXIMAL)


def suborder0(r: Radicand) -> CubicOrder:
    return CubicOrder(r, OrderKind.SUBORDER0)


# ------------------------------------------------------------ lattice helpers


@lru_cache(maxsize=4096)
def _consts(a: int, b: int) -> tuple[float, float]:
    return float(a * b * b) ** (1.0 / 3.0), float(a * a * b) ** (1.0 / 3.0)


def _embed(v, den: int, dl: float, dbl: float) -> tuple[float, float, float]:
    """(height, Re, Im) of the first complex embedding of v/den."""
    x, y, z = v[0] / den, v[1] / den * dl, v[2] / den * dbl
    return (x + y + z, x - 0.5 * (y + z), _SQ3_2 * (y - z))


def _embed_mp(v, den: int, a: int, b: int, keep: bool = False):
    """Like _embed but accurate for vectors with huge, cancelling coordinates.

    With ``keep`` the values stay mpf (rounded to 160 bits), which cannot
    overflow however skewed the vector is.
    """
    bits = max(abs(c).bit_length() for c in v) + den.bit_length() + 80
    with mpmath.workprec(bits):
        dl = mpmath.cbrt(a * b * b)
        dbl = mpmath.cbrt(a * a * b)
        x = mpmath.mpf(v[0]) / den
        y = mpmath.mpf(v[1]) / den * dl
        z = mpmath.mpf(v[2]) / den * dbl
        out = (x + y + z, x - (y + z) / 2, mpmath.sqrt(3) / 2 * (y - z))
    if keep:
        with mpmath.workprec(160):
            return tuple(+t for t in out)
    return tuple(float(t) for t in out)


def _dot(u, v) -> float:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _lll(basis: list, den: int, r: Radicand, weight: float = 1.0, exact_embed: bool = False):
    """LLL-reduce an exact integer basis w.r.t. weight^2 h^2 + |c|^2.

    Row operations are integral, so the lattice is unchanged no matter how
    rough the floating point guidance is.
    """
    a, b = r.a, r.b
    dl, dbl = _consts(a, b)

    def emb(v):
        h, re, im = _embed_mp(v, den, a, b, keep=True) if exact_embed else _embed(v, den, dl, dbl)
        return (weight * h, re, im)

    if exact_embed:
        with mpmath.workprec(160):
            return _lll_loop(basis, emb, exact_embed, limit=200000)
    return _lll_loop(basis, emb, exact_embed, limit=10000)


def _round(x) -> int:
    return int(mpmath.nint(x)) if isinstance(x, mpmath.mpf) else round(x)


def _lll_loop(basis, emb, exact_embed: bool, limit: int):
    B = [tuple(v) for v in basis]
    E = [emb(v) for v in B]
    n = len(B)
    k = 1
    guard = 0
    while k < n:
        guard += 1
        if guard > limit:
            raise EnumerationOverflow("LLL did not converge")
        # Gram-Schmidt on the float embeddings
        bstar: list = []
        mu = [[0.0] * n for _ in range(n)]
        for i in range(n):
            w = list(E[i])
            for j in range(i):
                bb = _dot(bstar[j], bstar[j])
                mu[i][j] = _dot(E[i], bstar[j]) / bb if bb else 0.0
                w = [w[t] - mu[i][j] * bstar[j][t] for t in range(3)]
            bstar.append(w)
        changed = False
        for j in range(k - 1, -1, -1):
            q = _round(mu[k][j])
            if q:
                B[k] = tuple(B[k][t] - q * B[j][t] for t in range(3))
                E[k] = emb(B[k]) if exact_embed else tuple(E[k][t] - q * E[j][t] for t in range(3))
                for t in range(j + 1):
                    mu[k][t] -= q * (mu[j][t] if t < j else 1.0)
                changed = True
        if changed and not exact_embed:
            E[k] = emb(B[k])
        if changed:
            continue
        bk = _dot(bstar[k], bstar[k])
        bk1 = _dot(bstar[k - 1], bstar[k - 1])
        if bk >= (0.99 - mu[k][k - 1] ** 2) * bk1:
            k += 1
        else:
            B[k], B[k - 1] = B[k - 1], B[k]
            E[k], E[k - 1] = E[k - 1], E[k]
            k = max(k - 1, 1)
    return B, E


def _fincke_pohst(vecs, bound: float, limit: int = 200000) -> Iterator[tuple[int, int, int]]:
    """All integer c with |sum c_i vecs_i|^2 <= bound (vecs: 3 real 3-vectors)."""
    G = [[_dot(vecs[i], vecs[j]) for j in range(3)] for i in range(3)]
    Q = [row[:] for row in G]
    for i in range(3):
        if Q[i][i] <= 0:
            raise EnumerationOverflow("degenerate Gram matrix")
        for j in range(i + 1, 3):
            Q[j][i] = Q[i][j]
            Q[i][j] = Q[i][j] / Q[i][i]
        for k in range(i + 1, 3):
            for l in range(k, 3):
                Q[k][l] -= Q[k][i] * Q[i][l]
    q00, q11, q22 = Q[0][0], Q[1][1], Q[2][2]
    q01, q02, q12 = Q[0][1], Q[0][2], Q[1][2]
    count = 0
    r2 = math.sqrt(bound / q22)
    for c2 in range(math.ceil(-r2), math.floor(r2) + 1):
        rem2 = bound - q22 * c2 * c2
        if rem2 < 0:
            continue
        ctr1 = -q12 * c2
        r1 = math.sqrt(rem2 / q11)
        for c1 in range(math.ceil(ctr1 - r1), math.floor(ctr1 + r1) + 1):
            t1 = c1 + q12 * c2
            rem1 = rem2 - q11 * t1 * t1
            if rem1 < 0:
                continue
            ctr0 = -(q01 * c1 + q02 * c2)
            r0 = math.sqrt(rem1 / q00)
            for c0 in range(math.ceil(ctr0 - r0), math.floor(ctr0 + r0) + 1):
                count += 1
                if count > limit:
                    raise EnumerationOverflow(f"more than {limit} lattice points")
                yield (c0, c1, c2)


def _combine(c, B) -> tuple[int, int, int]:
    return tuple(c[0] * B[0][t] + c[1] * B[1][t] + c[2] * B[2][t] for t in range(3))


def _region_points(B, E, den: int, r: Radicand, H: float, rho2: float):
    """Exact integer vectors v (over den) with 0 < h(v) < H and r^2(v) <= rho2 (float filter, with slack)."""
    w = math.sqrt(rho2) / H
    vecs = [(w * e[0], e[1], e[2]) for e in E]
    bound = 2.0 * rho2 * (1.0 + 1e-7) + 1e-9
    out = []
    for c in _fincke_pohst(vecs, bound):
        h = c[0] * E[0][0] + c[1] * E[1][0] + c[2] * E[2][0]
        if h <= -_TOL * H or h >= H * (1 + _TOL):
            continue
        re = c[0] * E[0][1] + c[1] * E[1][1] + c[2] * E[2][1]
        im = c[0] * E[0][2] + c[1] * E[1][2] + c[2] * E[2][2]
        rr = re * re + im * im
        if rr > rho2 * (1 + 1e-7):
            continue
        out.append((rr, h, _combine(c, B)))
    return out


def _hnf(vectors, den: int) -> tuple[tuple[tuple[int, ...], ...], int]:
    """Canonical (row Hermite normal form, denominator) of a rank-3 Z-lattice in Q^3."""
    g = den
    for v in vectors:
        for c in v:
            g = math.gcd(g, c)
    rows = [[c // g for c in v] for v in vectors]
    den //= g
    m = [r[:] for r in rows]
    for col in range(3):
        # Euclid down the column among rows col..2
        while True:
            nz = [i for i in range(col, 3) if m[i][col] != 0]
            if not nz:
                raise ValueError("singular lattice basis")
            piv = min(nz, key=lambda i: abs(m[i][col]))
            m[col], m[piv] = m[piv], m[col]
            done = True
            for i in range(col + 1, 3):
                if m[i][col]:
                    q = m[i][col] // m[col][col]
                    m[i] = [m[i][t] - q * m[col][t] for t in range(3)]
                    if m[i][col]:
                        done = False
            if done:
                break
        if m[col][col] < 0:
            m[col] = [-c for c in m[col]]
        for i in range(col):
            q = m[i][col] // m[col][col]
            m[i] = [m[i][t] - q * m[col][t] for t in range(3)]
    return tuple(tuple(r) for r in m), den


# ------------------------------------------------------------- chain records


@dataclass(frozen=True)
class ChainRecord:
    index: int
    coords: tuple[int, int, int]  # numerators over the order denominator
    norm: int

    def element(self, order: CubicOrder) -> FieldElement:
        return FieldElement.from_int3(self.coords, order.parent, order.den)


@dataclass(frozen=True)
class ChainSummary:
    order: CubicOrder
    period_length: int | None
    fundamental_unit: FieldElement | None
    records: tuple[ChainRecord, ...]
    pf_hits: tuple[int, ...]
    complete: bool

    @property
    def kind(self) -> OrderKind:
        return self.order.kind

    def record(self, index: int) -> ChainRecord:
        return self.records[-index]

    def first_pf(self) -> ChainRecord | None:
        return self.record(self.pf_hits[0]) if self.pf_hits else None

    def to_json(self) -> dict:
        return {
            "d": self.order.parent.d,
            "order": self.order.kind.value,
            "period_length": self.period_length,
            "complete": self.complete,
            "den": self.order.den,
            "fundamental_unit": (
                [str(c) for c in self.fundamental_unit.coords] if self.fundamental_unit else None
            ),
            "pf_hits": list(self.pf_hits),
            "records": [[r.index, [str(c) for c in r.coords], r.norm] for r in self.records],
        }


@dataclass
class ReducedLattice:
    """The lattice (1/theta) O with theta the product of all steps so far."""

    order: CubicOrder
    basis: list  # integer vectors over ``den``
    den: int
    accumulated: tuple[int, int, int]  # theta numerators over order.den
    accumulated_norm: Fraction
    index: int = 0
    emb: list = field(default_factory=list)

    @classmethod
    def start(cls, order: CubicOrder) -> ReducedLattice:
        B, E = _lll(list(order.int_basis), order.den, order.parent)
        one = (order.den, 0, 0)
        return cls(order, B, order.den, one, Fraction(1), 0, E)

    def theta(self) -> FieldElement:
        return FieldElement.from_int3(self.accumulated, self.order.parent, self.order.den)

    def canonical(self):
        return _hnf(self.basis, self.den)


def _select_next(lat: ReducedLattice) -> tuple[tuple[int, int, int], float]:
    """Adjacent minimum below 1 in ``lat``, as an integer vector over lat.den."""
    r = lat.order.parent
    a, b = r.a, r.b
    den = lat.den
    rho2 = 4.0
    for _ in range(64):
        pts = _region_points(lat.basis, lat.emb, den, r, 1.0, rho2)
        cands = []
        for rr, h, v in pts:
            if h < _TOL or h > 1 - _TOL:
                # exact 0 < h < 1
                if sign3(v, a, b) <= 0 or sign3((v[0] - den, v[1], v[2]), a, b) >= 0:
                    continue
            cands.append((rr, h, v))
        if cands:
            rmin = min(c[0] for c in cands)
            if rmin <= rho2 * (1 - 1e-7):
                near = [c for c in cands if c[0] <= rmin * (1 + 1e-8) + 1e-12]
                best = near[0]
                for c in near[1:]:
                    best = _better(best, c, a, b)
                return best[2], best[0]
        rho2 *= 2.0
    raise EnumerationOverflow("no lattice point below height 1 found")


def _better(p, q, a: int, b: int):
    """Smaller exact radius wins; equal radius -> larger height."""
    cp_p, cp_q = cp3(p[2], a, b), cp3(q[2], a, b)
    s = sign3(tuple(cp_q[t] - cp_p[t] for t in range(3)), a, b)
    if s > 0:
        return p
    if s < 0:
        return q
    return p if sign3(tuple(p[2][t] - q[2][t] for t in range(3)), a, b) > 0 else q


def adjacent_step(lat: ReducedLattice) -> tuple[FieldElement, ReducedLattice]:
    """One Voronoi step: returns (phi, (1/phi) lat) with phi in lat."""
    r = lat.order.parent
    a, b = r.a, r.b
    v, _ = _select_next(lat)
    den = lat.den
    nv = norm3(v, a, b)  # N(phi) = nv / den^3 > 0
    cpv = cp3(v, a, b)
    newB = [mul3(u, cpv, a, b) for u in lat.basis]
    newden = nv
    g = newden
    for u in newB:
        for c in u:
            g = math.gcd(g, c)
    newB = [tuple(c // g for c in u) for u in newB]
    newden //= g
    B, E = _lll(newB, newden, r)
    prod = mul3(lat.accumulated, v, a, b)
    if any(c % den for c in prod):
        raise AssertionError("accumulated product left the order")
    theta = tuple(c // den for c in prod)
    phi = FieldElement.from_int3(v, r, den)
    new = ReducedLattice(
        lat.order,
        B,
        newden,
        theta,
        lat.accumulated_norm * Fraction(nv, den**3),
        lat.index - 1,
        E,
    )
    return phi, new


def run_chain(
    order: CubicOrder,
    stop: Stop = Stop.FULL_PERIOD,
    height_floor: FieldElement | None = None,
    max_steps: int = 10**7,
    periods: int = 1,
) -> ChainSummary:
    """Walk the chain of minima from 1 in the direction of decreasing height.

    ``periods`` > 1 keeps walking past the first unit (used by periodicity
    checks); ``height_floor`` stops once the height drops below the given
    element.
    """
    r = order.parent
    R2 = r.R * r.R
    lat = ReducedLattice.start(order)
    start_form = lat.canonical()
    records = [ChainRecord(0, lat.accumulated, 1)]
    hits: list[int] = []
    period = None
    unit = None
    units_seen = 0
    for _ in range(max_steps):
        _, lat = adjacent_step(lat)
        n = lat.accumulated_norm
        if n.denominator != 1:
            raise AssertionError("non-integral norm of a chain element")
        n = abs(n.numerator)
        if height_floor is not None and lat.theta().__sub__(height_floor).sign() < 0:
            break
        records.append(ChainRecord(lat.index, lat.accumulated, n))
        if n == 1:
            if lat.canonical() != start_form:
                raise AssertionError("unit reached but lattice differs from the order")
            units_seen += 1
            if period is None:
                period = -lat.index
                inv = lat.theta()
                unit = FieldElement.from_int3(
                    cp3(lat.accumulated, r.a, r.b), r, order.den * order.den
                )
                assert (unit * inv).coords == (1, 0, 0)
            if units_seen >= periods:
                break
        elif R2 % n == 0:
            if period is None:
                hits.append(lat.index)
            if stop is Stop.FIRST_PF:
                break
    else:
        raise EnumerationOverflow(f"chain longer than {max_steps} steps")
    return ChainSummary(
        order=order,
        period_length=period,
        fundamental_unit=unit,
        records=tuple(records),
        pf_hits=tuple(hits),
        complete=period is not None,
    )


# ------------------------------------------------------- minimality oracles


def cylinder_points(order: CubicOrder, e: FieldElement, strict: bool = True):
    """Nonzero order elements in the (open) norm cylinder of ``e``."""
    r = order.parent
    a, b = r.a, r.b
    u, du = e.int3()
    # (1/e) O has basis o_i * cp(e) / N(e); scale so that e maps to 1.
    cpu = cp3(u, a, b)
    nu = norm3(u, a, b)
    # o_i/den * du^3/du^2 ... : o_i / (u/du) = o_i * du * cp(u) / N(u), over den
    vecs = [mul3(o, cpu, a, b) for o in order.int_basis]
    vecs = [tuple(c * du for c in v) for v in vecs]
    den = order.den * nu
    if den < 0:
        den = -den
        vecs = [tuple(-c for c in v) for v in vecs]
    g = den
    for v in vecs:
        for c in v:
            g = math.gcd(g, c)
    vecs = [tuple(c // g for c in v) for v in vecs]
    den //= g
    B, _ = _lll(vecs, den, r, exact_embed=True)
    # one more pass on floats once the basis is small
    B, E = _lll(B, den, r)
    if max(abs(c) for v in B for c in v) > 1 << 50:
        E = [_embed_mp(v, den, a, b) for v in B]
    found = []
    rho2 = 1.0
    for _, h, v in _region_points(B, E, den, r, 1.0, rho2):
        # exact: 0 <= h < 1 and r^2 < 1 (r^2 = cp(v)/den^2)
        if not any(v):
            continue
        if sign3(v, a, b) < 0:
            continue
        if sign3((v[0] - den, v[1], v[2]), a, b) >= 0:
            continue
        c = cp3(v, a, b)
        if sign3((c[0] - den * den, c[1], c[2]), a, b) >= 0:
            continue
        found.append(FieldElement.from_int3(v, r, den) * e)
    return found


def is_lattice_minimum(order: CubicOrder, e: FieldElement) -> bool:
    """Decide whether ``e`` (in ``order``, e > 0) is a lattice minimum of ``order``."""
    if e.sign() <= 0:
        raise ValueError("lattice minima are positive")
    if not order.contains(e):
        raise ValueError(f"{e} is not in the {order.kind.value} order")
    return not cylinder_points(order, e)


def brute_force_minima(
    order: CubicOrder,
    h1: FieldElement | Fraction | int,
    h2: FieldElement | Fraction | int,
    bound: int,
    budget: int = 2 * 10**6,
) -> list[FieldElement]:
    """All minima with h1 <= height <= h2 among coefficient vectors in [-bound, bound]^3."""
    if (2 * bound + 1) ** 3 > budget:
        raise BudgetExceeded(f"(2*{bound}+1)^3 exceeds the budget {budget}")
    r = order.parent
    a, b = r.a, r.b
    lo = h1 if isinstance(h1, FieldElement) else FieldElement.of(h1, 0, 0, r)
    hi = h2 if isinstance(h2, FieldElement) else FieldElement.of(h2, 0, 0, r)
    lo_u, lo_d = lo.int3()
    hi_u, hi_d = hi.int3()
    lo_f, hi_f = float(lo), float(hi)
    ob = order.int_basis
    den = order.den
    dl, dbl = _consts(a, b)
    out = []
    rng = range(-bound, bound + 1)
    for c0 in rng:
        for c1 in rng:
            for c2 in rng:
                v = _combine((c0, c1, c2), ob)
                h = _embed(v, den, dl, dbl)[0]
                if h < lo_f * (1 - 1e-9) - 1e-12 or h > hi_f * (1 + 1e-9) + 1e-12:
                    continue
                # exact window test: v/den - lo >= 0 and hi - v/den >= 0
                if sign3(tuple(v[t] * lo_d - lo_u[t] * den for t in range(3)), a, b) < 0:
                    continue
                if sign3(tuple(hi_u[t] * den - v[t] * hi_d for t in range(3)), a, b) < 0:
                    continue
                e = FieldElement.from_int3(v, r, den)
                if is_lattice_minimum(order, e):
                    out.append(e)
    out.sort(key=lambda e: -float(e))
    return out
