"""Finite closure algebras, fork frames, projectivity and algebraic unification."""

from .algebra import AlgHom, ClosedIdeal, ClosureAlgebra, cf, cm
from .builtins import b_fork, b_w, fork_frame, w_frame
from .frame import Frame, Morphism

__all__ = [
    "AlgHom",
    "ClosedIdeal",
    "ClosureAlgebra",
    "Frame",
    "Morphism",
    "b_fork",
    "b_w",
    "cf",
    "cm",
    "fork_frame",
    "w_frame",
]
