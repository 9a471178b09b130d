"""Exact maximum orthogonal sets of unimodular vectors over finite local rings.

The package provides exact arithmetic for finite local rings of odd
characteristic, symmetric bilinear forms with constructive
canonicalization, and an exhaustive branch-and-bound search for maximum
pairwise-orthogonal sets of unimodular vectors, cross-checked against the
closed-form prediction for dimension 2.
"""

from .errors import UniorthoError

__all__ = ["UniorthoError"]
__version__ = "0.1.0"
