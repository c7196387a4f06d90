"""Exact computational algebra for cubic diagrams of abelian groups."""

from .domains import ZZ, GF2, GF3, Z_HALF, GF, Zloc, Zmod, Domain
from .matrix import Mat, smith_normal_form, invariant_factors, rank, kernel, solve

__all__ = [
    "ZZ",
    "GF2",
    "GF3",
    "Z_HALF",
    "GF",
    "Zloc",
    "Zmod",
    "Domain",
    "Mat",
    "smith_normal_form",
    "invariant_factors",
    "rank",
    "kernel",
    "solve",
]
