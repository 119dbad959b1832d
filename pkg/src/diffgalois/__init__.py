"""Exact computation of Galois groups of linear difference systems sigma(Y) = A Y over Q(x)."""

from .errors import (
    CostExceeded,
    DiffGaloisError,
    ExtensionNeeded,
    ParseError,
    SliceNotStable,
    StageError,
    UnsupportedClassError,
)
from .groebner import PolyIdeal, Ring, ideal_equal
from .hyper_elements import HyperElement, hyper_elements
from .lattice import ExponentLattice, sigma_quotient_lattice
from .pipeline import (
    GaloisOutput,
    TorsorRelations,
    compute_galois_group,
    maximal_sigma_ideal,
    stabilizer,
    theoretical_bound,
    torsor_extension,
)
from .relations import RelationsIdealRequest, coefficient_bound, relations_ideal
from .scalar import RatFunc, UniPoly, parse_ratfunc
from .structure import associated_primes, sigma_period
from .system import DifferenceSystem

__all__ = [
    "CostExceeded",
    "DiffGaloisError",
    "DifferenceSystem",
    "ExponentLattice",
    "ExtensionNeeded",
    "GaloisOutput",
    "HyperElement",
    "ParseError",
    "PolyIdeal",
    "RatFunc",
    "RelationsIdealRequest",
    "Ring",
    "SliceNotStable",
    "StageError",
    "TorsorRelations",
    "UniPoly",
    "UnsupportedClassError",
    "associated_primes",
    "coefficient_bound",
    "compute_galois_group",
    "hyper_elements",
    "ideal_equal",
    "maximal_sigma_ideal",
    "parse_ratfunc",
    "relations_ideal",
    "sigma_period",
    "sigma_quotient_lattice",
    "stabilizer",
    "theoretical_bound",
    "torsor_extension",
]
