"""Fixed subgroups and eigengroups of free group automorphisms."""

from .words import Word, WordError, reduce, concat, invert, cyclic_reduce, root
from .stallings import SubgroupGraph, fold, member, rank_of, basis_of, pullback
from .morphisms import Endomorphism, apply, compose, inner, twist, is_automorphism

__version__ = "0.1.0"

__all__ = [
    "Word", "WordError", "reduce", "concat", "invert", "cyclic_reduce", "root",
    "SubgroupGraph", "fold", "member", "rank_of", "basis_of", "pullback",
    "Endomorphism", "apply", "compose", "inner", "twist", "is_automorphism",
]
