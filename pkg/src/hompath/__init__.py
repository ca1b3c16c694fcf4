"""Optimal paths in distinct homotopy classes."""
from .kernels import BACKEND
from .words import (
    EMPTY,
    Equivalence,
    Letter,
    Presentation,
    Word,
    canonical_key,
    compose,
    cyclic_reduce,
    dehn_reduce,
    equivalent,
    free_reduce,
    invert,
    symmetricize,
)

__version__ = "0.1.0"
