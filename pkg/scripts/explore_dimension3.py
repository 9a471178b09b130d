#!/usr/bin/env python3
"""Exploratory n = 3 brute force on tiny rings.

No closed form is known (or claimed) for dimension 3; this script only
reports what the exact search finds for both canonical forms over the
smallest catalog rings.  Sizes are printed without any prediction column
on purpose.
"""

from __future__ import annotations

from uniortho.catalog import parse_ring_literal
from uniortho.forms import BilinearForm, canonical_matrix, format_matrix
from uniortho.orthosets import max_orthogonal_set
from uniortho.rings import canonical_nonsquare, construct_ring

RINGS = ["Z3", "Z5"]


def main():
    for name in RINGS:
        ring = construct_ring(parse_ring_literal(name))
        for u in (ring.one, canonical_nonsquare(ring)):
            form = BilinearForm(ring, canonical_matrix(ring, 3, u))
            result = max_orthogonal_set(form, n=3, timeout=300.0)
            print(
                f"{ring.label:>4} {format_matrix(ring, form.matrix):<20} "
                f"max_size={result.max_size:<4} nodes={result.node_count}"
            )


if __name__ == "__main__":
    main()
