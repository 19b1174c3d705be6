"""Hyperelliptic curves with many automorphisms: catalog, symmetric-square
character test, quotient curves and Frobenius-based CM verdicts."""

from .curves import CURVE_IDS, CurveSpec, catalog, enumerate_branch_loci, get_curve

__version__ = "0.1.0"

__all__ = ["CURVE_IDS", "CurveSpec", "catalog", "enumerate_branch_loci", "get_curve", "__version__"]
