"""Characters of loop groups of non-simply-connected groups.

Finite and affine root data, central elements and the diagram automorphisms
they induce, folded root systems, theta functions and the Kac-Weyl character
formula with its twisted analogue.
"""
from .cartan_core import RootSystem, VectorH, build_root_system
from .center_sigma import levels, sigma_data
from .characters import (
    CharacterResult,
    freudenthal_multiplicities,
    heat_residual,
    kac_weyl_character,
    twisted_character,
)
from .folding import fold

__all__ = [
    "RootSystem",
    "VectorH",
    "build_root_system",
    "levels",
    "sigma_data",
    "fold",
    "CharacterResult",
    "kac_weyl_character",
    "twisted_character",
    "freudenthal_multiplicities",
    "heat_residual",
]
__version__ = "0.1.0"
