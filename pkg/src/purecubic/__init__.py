"""Voronoi chains, principal factorization types and M-classes of pure cubic fields."""

from .classify import Classification, FieldType, classify, classify_with_mclass
from .criteria import MClassKind, m_class, predict_minimum
from .field import FieldElement, norm
from .radicand import Radicand, Species, normalize
from .voronoi import maximal_order, run_chain, suborder0

__all__ = [
    "Classification",
    "FieldElement",
    "FieldType",
    "MClassKind",
    "Radicand",
    "Species",
    "classify",
    "classify_with_mclass",
    "m_class",
    "maximal_order",
    "norm",
    "normalize",
    "predict_minimum",
    "run_chain",
    "suborder0",
]

__version__ = "0.1.0"
