"""Compact approximations of sign-condition sets and exact Betti-number tooling.

The package computes telescopes of box approximations, the complexes
M(m0, ..., mN) and M_B, cores of marked complexes, fibred-power Betti
bounds and the explicit bound formulas, all with exact integer homology.
"""
from .boxes import BoxComplex, box_homology, project
from .constructible import approximate, stabilize, telescope
from .errors import TelescopeError
from .fibred import check_inequality, fibred_power, spectral_upper_bound
from .formula import parse_formula, relax, sign_sets
from .homology import BettiVector, betti, smith_normal_form
from .marking import MarkedComplex, core, mark_all_soft, mark_from_signs
from .mcomplex import LadderParams, MSpec, build_M, build_M_B, collapse, z_nonempty, z_witness
from .poset import Poset, nerve, order_complex
from .simplicial import SimplicialComplex, barycentric_subdivision, build_complex

__version__ = "0.1.0"

__all__ = [
    "BettiVector", "BoxComplex", "LadderParams", "MSpec", "MarkedComplex", "Poset", "SimplicialComplex",
    "TelescopeError", "approximate", "barycentric_subdivision", "betti", "box_homology", "build_M", "build_M_B",
    "build_complex", "check_inequality", "collapse", "core", "fibred_power", "mark_all_soft", "mark_from_signs",
    "nerve", "order_complex", "parse_formula", "project", "relax", "sign_sets", "smith_normal_form",
    "spectral_upper_bound", "stabilize", "telescope", "z_nonempty", "z_witness",
]
