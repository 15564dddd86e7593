"""Arithmetic in k = L(zeta3) and certified root extraction.

Elements of k are p + q*zeta with p, q in L and zeta^2 = -1 - zeta.
``sigma`` sends delta -> zeta*delta (so delta_bar -> zeta^2*delta_bar) and
fixes zeta; ``tau`` is complex conjugation, fixing L.

Root tests are exact both ways: a negative answer carries a prime at which
the element is a non-residue, a positive answer carries the root, verified
by exact exponentiation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
from sympy import nextprime
from sympy.ntheory.residue_ntheory import nthroot_mod

from .field import FieldElement
from .radicand import Radicand


class Undecided(RuntimeError):
    """Neither a root nor a non-residue certificate was found within budget."""


@dataclass(frozen=True)
class KElement:
    p: FieldElement
    q: FieldElement

    @classmethod
    def from_L(cls, e: FieldElement) -> KElement:
        return cls(e, e * 0)

    @classmethod
    def zeta(cls, r: Radicand) -> KElement:
        return cls(FieldElement.of(0, 0, 0, r), FieldElement.one(r))

    @classmethod
    def one(cls, r: Radicand) -> KElement:
        return cls(FieldElement.one(r), FieldElement.of(0, 0, 0, r))

    @property
    def parent(self) -> Radicand:
        return self.p.parent

    def __add__(self, other: KElement) -> KElement:
        return KElement(self.p + other.p, self.q + other.q)

    def __neg__(self) -> KElement:
        return KElement(-self.p, -self.q)

    def __sub__(self, other: KElement) -> KElement:
        return self + (-other)

    def __mul__(self, other) -> KElement:
        if isinstance(other, (int, Fraction)):
            return KElement(self.p * other, self.q * other)
        if isinstance(other, FieldElement):
            return KElement(self.p * other, self.q * other)
        qq = self.q * other.q
        return KElement(self.p * other.p - qq, self.p * other.q + self.q * other.p - qq)

    def __pow__(self, k: int) -> KElement:
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = KElement.one(self.parent)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, KElement) and self.p.coords == other.p.coords and self.q.coords == other.q.coords

    def __hash__(self) -> int:
        return hash((self.p.coords, self.q.coords))

    def coords(self) -> tuple[Fraction, ...]:
        return self.p.coords + self.q.coords


def _sigma_L(e: FieldElement) -> KElement:
    r = e.parent
    x, y, z = e.coords
    return KElement(FieldElement(x, 0 * y, -z, r), FieldElement(0 * x, y, -z, r))


def sigma(w: KElement) -> KElement:
    sp, sq = _sigma_L(w.p), _sigma_L(w.q)
    # sq * zeta: (u + v zeta) zeta = -v + (u - v) zeta
    return sp + KElement(-sq.q, sq.p - sq.q)


def tau(w: KElement) -> KElement:
    return KElement(w.p - w.q, -w.q)


def relative_norm(w: KElement) -> KElement:
    """N_{k/k0}(w) = w * sigma(w) * sigma^2(w)."""
    s = sigma(w)
    return w * s * sigma(s)


# ------------------------------------------------------------ residue maps


@dataclass(frozen=True)
class SplitPrime:
    p: int
    cube_root: int  # image of delta under the base embedding
    zeta: int  # primitive cube root of unity mod p


def _split_primes(r: Radicand, start: int = 7):
    """Primes p = 1 mod 3, p not dividing 3ab, with ab^2 a cube mod p."""
    p = start
    n = r.a * r.b * r.b
    while True:
        p = nextprime(p)
        if p % 3 != 1 or (3 * r.a * r.b) % p == 0:
            continue
        if pow(n % p, (p - 1) // 3, p) != 1:
            continue
        root = nthroot_mod(n % p, 3, p)
        z = next(g for g in range(2, p) if pow(g, (p - 1) // 3, p) != 1)
        yield SplitPrime(p, int(root), pow(z, (p - 1) // 3, p))


@lru_cache(maxsize=256)
def split_primes(r: Radicand, count: int) -> tuple[SplitPrime, ...]:
    return tuple(itertools.islice(_split_primes(r), count))


def _reduce_L(e: FieldElement, p: int, dl: int, dbl: int) -> int | None:
    tot = 0
    for c, g in zip(e.coords, (1, dl, dbl)):
        if c.denominator % p == 0:
            return None
        tot += c.numerator * pow(c.denominator, -1, p) * g
    return tot % p


def residue_images(w: KElement, sp: SplitPrime) -> list[tuple[tuple[int, int], int | None]]:
    """Images of w under the six homomorphisms k -> F_p above a split prime."""
    p, r = sp.p, w.parent
    out = []
    for i in range(3):
        dl = sp.cube_root * pow(sp.zeta, i, p) % p
        dbl = dl * dl * pow(r.b, -1, p) % p
        pv = _reduce_L(w.p, p, dl, dbl)
        qv = _reduce_L(w.q, p, dl, dbl)
        for s in (1, 2):
            if pv is None or qv is None:
                out.append(((i, s), None))
            else:
                out.append(((i, s), (pv + qv * pow(sp.zeta, s, p)) % p))
    return out


@dataclass(frozen=True)
class NonResidueCertificate:
    p: int
    embedding: tuple[int, int]
    image: int

    def check(self, k: int = 3) -> bool:
        return pow(self.image, (self.p - 1) // k, self.p) != 1


@dataclass(frozen=True)
class RootCertificate:
    root: object  # KElement or FieldElement
    exponent: int


def _nonresidue(w: KElement, r: Radicand, primes: int, k: int = 3):
    for sp in split_primes(r, primes):
        if (sp.p - 1) % k:
            continue
        for emb, img in residue_images(w, sp):
            if img is None or img == 0:
                continue
            if pow(img, (sp.p - 1) // k, sp.p) != 1:
                return NonResidueCertificate(sp.p, emb, img)
    return None


# ----------------------------------------------------------- numeric roots


def _bits(coords) -> int:
    return max(
        [max(abs(c.numerator).bit_length(), c.denominator.bit_length()) for c in coords] + [1]
    )


def _L_embeddings(e: FieldElement, dl, dbl, zeta) -> list:
    x, y, z = (mpmath.mpf(c.numerator) / c.denominator for c in e.coords)
    return [x + y * dl * zeta**i + z * dbl * zeta ** (2 * i) for i in range(3)]


def _coords_from_L_embeddings(vals, dl, dbl, zeta):
    p0, p1, p2 = vals
    x = (p0 + p1 + p2) / 3
    y = (p0 + p1 / zeta + p2 / zeta**2) / (3 * dl)
    z = (p0 + p1 / zeta**2 + p2 / zeta**4) / (3 * dbl)
    return x, y, z


def _round_coords(vals, den: int):
    out = []
    for v in vals:
        if abs(mpmath.im(v)) > 0.25 / den:
            return None
        t = mpmath.re(v) * den
        n = int(mpmath.nint(t))
        if abs(t - n) > 0.25:
            return None
        out.append(Fraction(n, den))
    return out


_DENS = (1, 3, 9, 27, 81)


def _root_candidates_k(w: KElement, prec: int) -> list:
    r = w.parent
    out = []
    with mpmath.workprec(prec):
        dl = mpmath.cbrt(r.a * r.b * r.b)
        dbl = mpmath.cbrt(r.a * r.a * r.b)
        zeta = mpmath.mpc(-0.5, mpmath.sqrt(3) / 2)
        P = _L_embeddings(w.p, dl, dbl, zeta)
        Qv = _L_embeddings(w.q, dl, dbl, zeta)
        # sigma_{i,+}: delta -> zeta^i delta, zeta3 -> zeta
        plus = [P[i] + Qv[i] * zeta for i in range(3)]
        base = [mpmath.cbrt(v) for v in plus]
        for j1, j2 in itertools.product(range(3), repeat=2):
            eta_plus = [base[0], base[1] * zeta**j1, base[2] * zeta**j2]
            # sigma_{i,-} is the complex conjugate of sigma_{-i,+}
            eta_minus = [mpmath.conj(eta_plus[(-i) % 3]) for i in range(3)]
            q_emb = [(eta_plus[i] - eta_minus[i]) / (zeta - mpmath.conj(zeta)) for i in range(3)]
            p_emb = [eta_plus[i] - q_emb[i] * zeta for i in range(3)]
            pc = _coords_from_L_embeddings(p_emb, dl, dbl, zeta)
            qc = _coords_from_L_embeddings(q_emb, dl, dbl, zeta)
            out.append((pc, qc))
    return out


def cube_root_in_k(w: KElement, max_prec: int = 1 << 22) -> KElement | None:
    """Exact cube root of w in k by numeric reconstruction, or None."""
    r = w.parent
    prec = 3 * _bits(w.coords()) + 128
    while prec <= max_prec:
        for pc, qc in _root_candidates_k(w, prec):
            for den in _DENS:
                with mpmath.workprec(prec):
                    p = _round_coords(pc, den)
                    q = _round_coords(qc, den)
                if p is None or q is None:
                    continue
                eta = KElement(FieldElement(*p, r), FieldElement(*q, r))
                if eta**3 == w:
                    return eta
        prec *= 2
    return None


def is_cube_in_k(w: KElement, primes: int = 40, max_prec: int = 1 << 22):
    """(True, RootCertificate) or (False, NonResidueCertificate); raises Undecided."""
    cert = _nonresidue(w, w.parent, primes)
    if cert is not None:
        return False, cert
    eta = cube_root_in_k(w, max_prec)
    if eta is not None:
        return True, RootCertificate(eta, 3)
    raise Undecided(f"no cube root found and no non-residue among {primes} split primes")


def root_in_L(e: FieldElement, k: int, primes: int = 30, max_prec: int = 1 << 22):
    """(True, RootCertificate) with eta^k = e and eta real positive if possible,
    or (False, certificate).  k is 2 or 3."""
    r = e.parent
    if k == 2 and e.sign() < 0:
        return False, None
    ke = KElement.from_L(e)
    if k == 3:
        cert = _nonresidue(ke, r, primes, 3)
        if cert is not None:
            return False, cert
    else:
        cert = _nonresidue_L_square(e, primes)
        if cert is not None:
            return False, cert
    prec = 2 * _bits(e.coords) + 128
    while prec <= max_prec:
        with mpmath.workprec(prec):
            dl = mpmath.cbrt(r.a * r.b * r.b)
            dbl = mpmath.cbrt(r.a * r.a * r.b)
            zeta = mpmath.mpc(-0.5, mpmath.sqrt(3) / 2)
            v0, v1, _ = _L_embeddings(e, dl, dbl, zeta)
            v0 = mpmath.re(v0)
            r0 = mpmath.cbrt(v0) if k == 3 else mpmath.sqrt(v0)
            r1 = mpmath.root(v1, k)
            unit = mpmath.exp(2j * mpmath.pi / k)
            cands = []
            for j in range(k):
                e1 = r1 * unit**j
                vals = [mpmath.mpc(r0), e1, mpmath.conj(e1)]
                cands.append(_coords_from_L_embeddings(vals, dl, dbl, zeta))
        for c in cands:
            for den in (1, 3):
                with mpmath.workprec(prec):
                    xyz = _round_coords(c, den)
                if xyz is None:
                    continue
                eta = FieldElement(*xyz, r)
                if eta**k == e:
                    return True, RootCertificate(eta, k)
        prec *= 2
    raise Undecided(f"{k}-th root test for {e} undecided")


def _nonresidue_L_square(e: FieldElement, primes: int):
    """A degree-one prime of L at which e is a quadratic non-residue."""
    r = e.parent
    n = r.a * r.b * r.b
    p = 5
    tried = 0
    while tried < primes:
        p = nextprime(p)
        if (3 * r.a * r.b) % p == 0:
            continue
        if p % 3 == 2:
            root = pow(n % p, (2 * p - 1) // 3, p)
        else:
            if pow(n % p, (p - 1) // 3, p) != 1:
                continue
            root = int(nthroot_mod(n % p, 3, p))
        tried += 1
        dbl = root * root * pow(r.b, -1, p) % p
        img = _reduce_L(e, p, root, dbl)
        if img and pow(img, (p - 1) // 2, p) != 1:
            return NonResidueCertificate(p, (0, 0), img)
    return None


def kummer_classes(r: Radicand, eps: FieldElement) -> list[tuple[tuple[int, int, int], KElement]]:
    """Representatives zeta^a eps^b sigma(eps)^c of the 13 nontrivial classes
    of <zeta, eps, eps'> modulo cubes and inversion."""
    z = KElement.zeta(r)
    e = KElement.from_L(eps)
    es = sigma(e)
    seen = set()
    out = []
    for a, b, c in itertools.product(range(3), repeat=3):
        if (a, b, c) == (0, 0, 0):
            continue
        inv = ((-a) % 3, (-b) % 3, (-c) % 3)
        if inv in seen:
            continue
        seen.add((a, b, c))
        out.append(((a, b, c), z**a * e**b * es**c))
    return out

