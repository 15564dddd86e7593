from collections import Counter

import pytest

from purecubic.classify import (
    FieldType,
    PFWitness,
    QIndex,
    classify,
    classify_with_mclass,
    find_principal_factor,
    subfield_unit_index,
    witness_is_ambiguous,
)
from purecubic.criteria import MClassKind, NotTypeBeta
from purecubic.field import norm
from purecubic.radicand import NotACubicField, Species, normalize
from purecubic.voronoi import OrderKind, maximal_order, run_chain


def _radicands(hi):
    for m in range(2, hi + 1):
        try:
            if normalize(m).d == m:
                yield m
        except NotACubicField:
            pass


@pytest.fixture(scope="module")
def small():
    return {d: classify(d) for d in _radicands(150)}


def test_1430():
    c = classify(1430, full_period=True)
    assert c.type is FieldType.BETA
    assert c.evidence == PFWitness(-16, (-28490, -13120, 1389), 1, 1100)
    assert c.chain_used is OrderKind.SUBORDER0
    assert c.period_length == 48
    assert c.pf_norms == (1100, 1210)


def test_12_species_1a():
    # frozen engine output; the witness norm is checked independently: -8 + 12 = 4
    c = classify(12)
    assert c.radicand.species is Species.S1A
    assert c.type is FieldType.BETA
    assert c.evidence == PFWitness(-1, (-2, 1, 0), 1, 4)


def test_first_counts(small):
    cnt = Counter(c.type for d, c in small.items() if d <= 10)
    assert cnt == {FieldType.ALPHA: 1, FieldType.BETA: 4, FieldType.GAMMA: 1}
    assert small[7].type is FieldType.ALPHA and small[3].type is FieldType.GAMMA


def test_counts_to_100(small):
    cnt = Counter(c.type for d, c in small.items() if d <= 100)
    assert (cnt[FieldType.ALPHA], cnt[FieldType.BETA], cnt[FieldType.GAMMA]) == (19, 49, 6)


def test_same_field_same_type():
    for d, k in ((2, 3), (12, 5), (7, 2)):
        assert classify(d * k**3).type is classify(d).type
    assert classify(18).d == 12


def test_evidence_shapes(small):
    for c in small.values():
        if c.type is FieldType.BETA:
            assert isinstance(c.evidence, PFWitness) or (
                c.radicand.species is Species.S1B and c.evidence == QIndex(3, c.evidence.certificate)
            )
        else:
            assert isinstance(c.evidence, QIndex)
            assert c.evidence.Q == (1 if c.type is FieldType.ALPHA else 3)
        if c.radicand.species is Species.S1B:
            assert c.type is not FieldType.GAMMA


def test_witnesses_are_ambiguous(small):
    for c in small.values():
        if isinstance(c.evidence, PFWitness):
            w = c.evidence
            assert (c.radicand.R**2) % w.norm == 0
            assert witness_is_ambiguous(w, c.radicand)


def test_independent_beta_oracle(small):
    # beta iff some n * eps^k (k = 1, 2) is a cube in L, with n from a nontrivial coset
    for d, c in small.items():
        r = c.radicand
        eps = run_chain(maximal_order(r)).fundamental_unit
        alpha = find_principal_factor(r, eps)
        assert (alpha is not None) == (c.type is FieldType.BETA), d
        if alpha is not None:
            assert (r.R**2) % abs(norm(alpha)) == 0


def test_q_is_three_when_witnessed(small):
    for d, c in small.items():
        if isinstance(c.evidence, PFWitness):
            eps = run_chain(maximal_order(c.radicand)).fundamental_unit
            assert subfield_unit_index(c.radicand, eps)[0] == 3, d


def test_mclass_needs_beta():
    with pytest.raises(NotTypeBeta):
        classify_with_mclass(7)
    assert classify(7, mclass=True).m_class is None


def test_species_1a_never_m0(small):
    for c in small.values():
        if c.radicand.species is Species.S1A and c.type is FieldType.BETA:
            mc = classify_with_mclass(c.d).m_class
            assert mc.kind is MClassKind.M2


def test_mclass_from_cube_root():
    c = classify_with_mclass(2, verify=True)
    assert c.principal_factor is not None and abs(norm(c.principal_factor)) == 3
    assert c.m_class.kind is MClassKind.M0
    assert c.verification.agrees


def test_verify_1430():
    c = classify_with_mclass(1430, verify=True)
    v = c.verification
    assert v.maximal_period == 50 and c.period_length == 48
    assert [cc.norm for cc in v.cosets] == [1100, 1210]
    assert [cc.shadows for cc in v.cosets] == [((-17, 239),), ((-35, 183),)]
    assert v.agrees and c.m_class.kind is MClassKind.M0
