"""Vectors over a local ring and the unimodularity predicate.

A vector is a plain tuple of canonical ring values; equality and the
fixed ordering are therefore inherited from the element representation.
Over a local ring a vector is unimodular iff some coordinate is a unit,
which is what the exhaustive search relies on.
"""

from __future__ import annotations

import itertools

from .errors import DimensionMismatch, ParseError, TooLarge
from .rings import DEFAULT_ENUMERATION_BOUND, LocalRing, split_top_level


def is_unimodular(ring: LocalRing, vec: tuple) -> bool:
    """True iff at least one coordinate is a unit."""
    return any(ring.is_unit(c) for c in vec)


def enumerate_unimodular(ring: LocalRing, n: int, max_card: int | None = None) -> list[tuple]:
    """All unimodular vectors of R^n in lexicographic coordinate order."""
    if n < 1:
        raise DimensionMismatch(f"dimension {n} must be >= 1")
    bound = DEFAULT_ENUMERATION_BOUND if max_card is None else max_card
    total = ring.cardinality ** n
    if total > bound:
        raise TooLarge(
            f"{ring.label}^{n}: enumerating {total} vectors exceeds bound {bound}"
        )
    elems = ring.elements(max_card)
    unit = {a for a in elems if ring.is_unit(a)}
    return [
        v for v in itertools.product(elems, repeat=n) if any(c in unit for c in v)
    ]


def scale(ring: LocalRing, c, vec: tuple) -> tuple:
    return tuple(ring.mul(c, x) for x in vec)


def format_vector(ring: LocalRing, vec: tuple) -> str:
    return "(" + ",".join(ring.format_element(c) for c in vec) + ")"


def parse_vector(ring: LocalRing, text: str) -> tuple:
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise ParseError(f"vector literal must be parenthesised: {text!r}")
    parts = split_top_level(text[1:-1])
    if len(parts) < 1:
        raise ParseError(f"empty vector literal {text!r}")
    return tuple(ring.parse_element(part) for part in parts)
