"""Principal factorization type of a pure cubic field.

Species 1a and 2 fields are decided by a Voronoi chain (maximal order,
respectively Z[delta, delta_bar]) plus the subfield unit index Q when the
chain has no principal factor.  Species 1b needs Q, or a chain hit.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .criteria import MClass, NotTypeBeta, coset_minima, m_class
from .field import FieldElement, conjugate_product, norm
from .kummer import is_cube_in_k, kummer_classes, root_in_L
from .radicand import (
    NotAPrincipalFactorNorm,
    Radicand,
    Species,
    normalize,
    principal_norm_candidates,
)
from .voronoi import (
    ChainSummary,
    CubicOrder,
    OrderKind,
    Stop,
    is_lattice_minimum,
    maximal_order,
    run_chain,
    suborder0,
)

DEFAULT_PRECISION = 1 << 22
ORACLE_BITS = 4096


class FieldType(str, enum.Enum):
    ALPHA = "alpha"
    BETA = "beta"
    GAMMA = "gamma"


@dataclass(frozen=True)
class PFWitness:
    index: int
    coordinates: tuple[int, int, int]  # numerators over the order denominator
    den: int
    norm: int


@dataclass(frozen=True)
class QIndex:
    Q: int
    certificate: tuple  # per class: RootCertificate, or NonResidueCertificate for all 13


@dataclass(frozen=True)
class GammaExcluded:
    prime: int


@dataclass(frozen=True)
class CosetCheck:
    norm: int
    predicted: bool
    actual: bool
    shadows: tuple[tuple[int, int], ...]  # (index, norm) of maximal-chain minima in the cylinder
    cylinder_checked: bool = False


@dataclass(frozen=True)
class Verification:
    maximal_period: int
    cosets: tuple[CosetCheck, CosetCheck]
    chain: ChainSummary = field(repr=False, compare=False)

    @property
    def agrees(self) -> bool:
        return all(c.predicted == c.actual for c in self.cosets)


@dataclass(frozen=True)
class Classification:
    d: int
    radicand: Radicand
    type: FieldType
    evidence: PFWitness | QIndex
    chain_used: OrderKind
    period_length: int | None
    Q: int | None = None
    gamma_excluded: GammaExcluded | None = None
    pf_norms: tuple[int, ...] = ()
    principal_factor: FieldElement | None = None
    m_class: MClass | None = None
    verification: Verification | None = None
    chain: ChainSummary | None = field(default=None, repr=False, compare=False)


# ------------------------------------------------------------------- pieces


def chain_order(r: Radicand) -> CubicOrder:
    return suborder0(r) if r.species is Species.S2 else maximal_order(r)


def gamma_exclusion_prime(r: Radicand) -> GammaExcluded | None:
    for p in sorted({p for p in r.primes} | {3}):
        if r.f % p == 0 and p % 9 in (2, 4, 5, 7):
            return GammaExcluded(p)
    return None


def subfield_unit_index(
    r: Radicand, eps: FieldElement, max_prec: int = DEFAULT_PRECISION
) -> tuple[int, tuple]:
    """(Q, certificates).  Q = 3 iff one of the 13 Kummer classes is a cube in k.

    Any unit generating a subgroup of index prime to 3 in the unit group
    (e.g. eps^2) gives the same answer.
    """
    negatives = []
    for abc, w in kummer_classes(r, eps):
        ok, cert = is_cube_in_k(w, max_prec=max_prec)
        if ok:
            return 3, (abc, cert)
        negatives.append((abc, cert))
    return 1, tuple(negatives)


def _witness(chain: ChainSummary) -> PFWitness:
    rec = chain.first_pf()
    den = chain.order.den
    g = math.gcd(*rec.coords)
    coords = rec.coords
    if g > 1:
        e = FieldElement.from_int3(coords, chain.order.parent, den) / g
        if chain.order.contains(e):
            coords = tuple(c // g for c in coords)
    n = abs(norm(FieldElement.from_int3(coords, chain.order.parent, den)))
    return PFWitness(rec.index, coords, den, int(n))


def witness_is_ambiguous(w: PFWitness, r: Radicand) -> bool:
    """w^3 / N(w) is a unit of the maximal order."""
    e = FieldElement.from_int3(w.coordinates, r, w.den)
    u = e**3 / w.norm
    return u.is_integral() and abs(norm(u)) == 1


def find_principal_factor(
    r: Radicand, eps: FieldElement, max_prec: int = DEFAULT_PRECISION
) -> FieldElement | None:
    """A principal factor in a nontrivial coset, via a cube root of n eps^k in L."""
    seen = set()
    for n in principal_norm_candidates(r):
        try:
            pair = coset_minima(r, n)
        except NotAPrincipalFactorNorm:
            continue
        if 1 in pair or pair in seen:
            continue
        seen.add(pair)
        alpha = principal_factor_of_norm(r, pair[0], eps, max_prec)
        if alpha is not None:
            return alpha
    return None


def principal_factor_of_norm(
    r: Radicand, n: int, eps: FieldElement, max_prec: int = DEFAULT_PRECISION
) -> FieldElement | None:
    """alpha > 0 with alpha^3 = n eps^k (k = 1, 2), or None if n is not a principal norm."""
    for k in (1, 2):
        ok, cert = root_in_L(eps**k * n, 3, max_prec=max_prec)
        if ok:
            alpha = cert.root
            return -alpha if alpha.sign() < 0 else alpha
    return None


# ---------------------------------------------------------------- procedure


def classify(
    d: int,
    full_period: bool = False,
    mclass: bool = False,
    verify: bool = False,
    max_prec: int = DEFAULT_PRECISION,
) -> Classification:
    r = normalize(d)
    order = chain_order(r)
    stop = Stop.FULL_PERIOD if (full_period or verify) else Stop.FIRST_PF
    chain = run_chain(order, stop=stop)
    gx = gamma_exclusion_prime(r) if r.species is Species.S1B else None
    common = dict(
        d=r.d,
        radicand=r,
        chain_used=order.kind,
        period_length=chain.period_length,
        gamma_excluded=gx,
        chain=chain,
    )
    if chain.pf_hits:
        w = _witness(chain)
        if not witness_is_ambiguous(w, r):
            raise AssertionError(f"d={r.d}: chain witness {w} is not ambiguous")
        norms = tuple(chain.record(i).norm for i in chain.pf_hits)
        out = Classification(type=FieldType.BETA, evidence=w, pf_norms=norms, **common)
    else:
        eps = chain.fundamental_unit
        Q, cert = subfield_unit_index(r, eps, max_prec)
        ev = QIndex(Q, cert)
        if Q == 1:
            ftype = FieldType.ALPHA
        elif r.species is Species.S1B:
            ftype = FieldType.BETA
        else:
            ftype = FieldType.GAMMA
        out = Classification(type=ftype, evidence=ev, Q=Q, **common)
    if r.species is Species.S1B and out.type is FieldType.GAMMA:
        raise AssertionError("species 1b classified as gamma")
    if (mclass or verify) and out.type is FieldType.BETA:
        out = with_mclass(out, verify=verify, max_prec=max_prec)
    return out


def _pf_norm(c: Classification, max_prec: int) -> tuple[int, FieldElement | None]:
    if isinstance(c.evidence, PFWitness):
        return c.evidence.norm, None
    alpha = find_principal_factor(c.radicand, c.chain.fundamental_unit, max_prec)
    if alpha is None:
        raise AssertionError(f"d={c.d}: Q = 3 but no principal factor found")
    return int(abs(norm(alpha))), alpha


def with_mclass(
    c: Classification, verify: bool = False, max_prec: int = DEFAULT_PRECISION
) -> Classification:
    if c.type is not FieldType.BETA:
        raise NotTypeBeta(f"d={c.d} is of type {c.type.value}")
    n, alpha = _pf_norm(c, max_prec)
    mc = m_class(c.radicand, n)
    pf_norms = c.pf_norms or (n,)
    ver = verify_mclass(c.radicand, mc, max_prec) if verify else None
    return Classification(
        **{
            **c.__dict__,
            "m_class": mc,
            "pf_norms": pf_norms,
            "principal_factor": alpha,
            "verification": ver,
        }
    )


def classify_with_mclass(d: int, verify: bool = False, max_prec: int = DEFAULT_PRECISION):
    c = classify(d, full_period=verify, max_prec=max_prec)
    if c.type is not FieldType.BETA:
        raise NotTypeBeta(f"d={c.d} is of type {c.type.value}")
    return with_mclass(c, verify=verify, max_prec=max_prec)


def _reduce_height(e: FieldElement, eps: FieldElement) -> FieldElement:
    """e * eps^k with eps^-1 < e <= 1 (eps > 1)."""
    one = FieldElement.one(e.parent)
    while (e - one).sign() > 0:
        e = e / eps
    while (e * eps - one).sign() <= 0:
        e = e * eps
    return e


def locate_in_chain(chain: ChainSummary, alpha: FieldElement) -> tuple[bool, tuple]:
    """(alpha is a minimum, shadows) from a complete chain, by exact height comparisons.

    Shadows are chain minima in the open norm cylinder of alpha, reported as
    (index, norm) with alpha moved into the first period by a unit.
    """
    order = chain.order
    eps = chain.fundamental_unit
    ell = chain.period_length
    a = _reduce_height(alpha, eps)
    recs = chain.records  # heights strictly decreasing from 1 to eps^-1
    el = lambda i: recs[i].element(order)  # noqa: E731
    lo, hi = 0, ell  # el(lo) >= a > el(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if (el(mid) - a).sign() >= 0:
            lo = mid
        else:
            hi = mid
    is_min = el(lo) == a
    n = abs(norm(a))
    cp_a = conjugate_product(a)
    shadows = []
    eps_inv = el(ell)
    j, wrap = hi, 0
    while True:
        s = el(j) * eps_inv**wrap if wrap else el(j)
        if (s * n - a).sign() <= 0:  # below height h(a)/N(a): no more candidates
            break
        if (cp_a - conjugate_product(s)).sign() > 0:
            shadows.append((recs[j].index - wrap * ell, recs[j].norm))
        j += 1
        if j > ell:
            j, wrap = 1, wrap + 1
    return is_min, tuple(shadows)


def verify_mclass(r: Radicand, mc: MClass, max_prec: int = DEFAULT_PRECISION) -> Verification:
    """Run the maximal-order chain and test both coset representatives directly.

    Membership comes from locating each representative in the chain; the
    cylinder oracle ``is_lattice_minimum`` confirms it when the coordinates
    are of moderate size.
    """
    order = maximal_order(r)
    chain = run_chain(order)
    eps = chain.fundamental_unit
    checks = []
    for cv in (mc.first, mc.second):
        alpha = principal_factor_of_norm(r, cv.norm, eps, max_prec)
        if alpha is None:
            raise AssertionError(f"d={r.d}: no principal factor of norm {cv.norm}")
        actual, sh = locate_in_chain(chain, alpha)
        oracle = None
        if max(c.numerator.bit_length() for c in alpha.coords) <= ORACLE_BITS:
            oracle = is_lattice_minimum(order, alpha)
            if oracle != actual:
                raise AssertionError(f"d={r.d}: chain and cylinder disagree for norm {cv.norm}")
        checks.append(CosetCheck(cv.norm, cv.verdict.minimal, actual, sh, oracle is not None))
    return Verification(chain.period_length, tuple(checks), chain)
