"""Finite-model lab for comonoids in the category of Chu spaces over {0, 1}.

A family W of subsets of a finite ground set A is a comonoid when it
contains ∅ and A and every crossword over W has its diagonal in W.
"""

from .closure import close, is_comonoid
from .core import Crossword, Family, GroundSet, Preorder, Word, canonicalize
from .crossword import solve_diagonal, validate
from .errors import ComonoidError

__version__ = "1.0.0"

__all__ = [
    "ComonoidError",
    "Crossword",
    "Family",
    "GroundSet",
    "Preorder",
    "Word",
    "canonicalize",
    "close",
    "is_comonoid",
    "solve_diagonal",
    "validate",
]
