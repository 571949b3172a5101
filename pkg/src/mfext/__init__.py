"""Exact computations with matrix factorizations and iterated extensions.

Polynomial rings over Q or F_p, Gröbner bases for modules, finitely presented
modules over quotient rings, matrix factorizations, filtered modules with the
block-matrix reduction behind the extension short exact sequence, and
machine-checkable certificates of membership in extension balls.
"""

from .ball import BallCertificate, Generator, RadiusReport, cert_verify, identity_certificate, theorem0_certify
from .catalog import catalog_get, catalog_list
from .field import GF, QQ
from .matfac import MatrixFactorization, mf_periodicity_check, mf_verify
from .modules import ExactSequenceClaim, ModuleMorphism, PresentedModule, exact_check, iso_check
from .poly import PolyMatrix, Polynomial, Ring, parse_poly
from .star import FilteredModule, Layer, compute_filtration, lemma3_sequence, reduce_C, star_reassociate

__version__ = "0.1.0"

__all__ = [
    "QQ",
    "GF",
    "Ring",
    "Polynomial",
    "PolyMatrix",
    "parse_poly",
    "PresentedModule",
    "ModuleMorphism",
    "ExactSequenceClaim",
    "exact_check",
    "iso_check",
    "MatrixFactorization",
    "mf_verify",
    "mf_periodicity_check",
    "FilteredModule",
    "Layer",
    "compute_filtration",
    "lemma3_sequence",
    "reduce_C",
    "star_reassociate",
    "Generator",
    "BallCertificate",
    "RadiusReport",
    "cert_verify",
    "identity_certificate",
    "theorem0_certify",
    "catalog_get",
    "catalog_list",
]
