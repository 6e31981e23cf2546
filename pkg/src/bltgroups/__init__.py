"""Graphs, alternating matrix spaces and Baer p-groups of class 2 and exponent p."""

from __future__ import annotations

from .altspace import AltSpace, AltTuple, build_tuple, conforming_matrices, obs21_check, phi, space_iso
from .baer import BaerElement, BaerGroup, group_iso, is_group_homomorphism
from .errors import BLTError, TooLarge
from .fp import FpMatrix, PrimeField, det, rank
from .graph import Graph, graph_iso
from .prooflab import prop_key_oracle
from .pullback import PartialInjection, blt_morphism, compose, is_pullback_hom

__version__ = "0.1.0"

__all__ = [
    "AltSpace",
    "AltTuple",
    "BLTError",
    "BaerElement",
    "BaerGroup",
    "FpMatrix",
    "Graph",
    "PartialInjection",
    "PrimeField",
    "TooLarge",
    "blt_morphism",
    "build_tuple",
    "compose",
    "conforming_matrices",
    "det",
    "graph_iso",
    "group_iso",
    "is_group_homomorphism",
    "is_pullback_hom",
    "obs21_check",
    "phi",
    "prop_key_oracle",
    "rank",
    "space_iso",
]
