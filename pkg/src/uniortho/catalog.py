"""Named ring presentations and the default verification catalog.

Ring literals come in two shapes: short names (``Z9``, ``F25``,
``F3[t]/t^2``, ``GR(9,2)``) whose extension modulus is the
lexicographically first monic irreducible polynomial of the right degree,
and explicit functional forms (``Zps(3,2)``, ``ext(3;1,0,1)``,
``chain(3;e=2)``, ``GR(3,2;1,0,1)``) that pin the modulus exactly.  The
explicit form is what gets printed, so printed specs re-parse to the
identical ring.
"""

from __future__ import annotations

import importlib.resources

from .errors import InvalidRingSpec, ParseError
from .rings import RingSpec, _poly_is_irreducible
import itertools


def _prime_power(n: int) -> tuple[int, int] | None:
    """(p, k) with n = p^k, or None."""
    if n < 2:
        return None
    p = 2
    while p * p <= n:
        if n % p == 0:
            break
        p += 1
    else:
        p = n
    k = 0
    m = n
    while m % p == 0:
        m //= p
        k += 1
    return (p, k) if m == 1 else None


def first_irreducible_modulus(p: int, degree: int) -> tuple[int, ...]:
    """Lexicographically first monic irreducible of given degree over F_p."""
    if degree == 1:
        return (0, 1)
    for lower in itertools.product(range(p), repeat=degree):
        coeffs = (*lower, 1)
        if _poly_is_irreducible(coeffs, p):
            return coeffs
    raise InvalidRingSpec(f"no irreducible polynomial of degree {degree} over F_{p}")


def format_ring_spec(spec: RingSpec) -> str:
    """Explicit functional literal; re-parses to an identical spec."""
    if spec.kind == "Zps":
        return f"Zps({spec.p},{spec.s})"
    if spec.kind == "ext":
        return f"ext({spec.p};{','.join(map(str, spec.modulus))})"
    if spec.kind == "chain":
        if spec.modulus is None:
            return f"chain({spec.p};e={spec.e})"
        return f"chain({spec.p};{','.join(map(str, spec.modulus))};e={spec.e})"
    return f"GR({spec.p},{spec.s};{','.join(map(str, spec.modulus))})"


def _parse_int(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"bad {what} in ring literal: {text!r}") from None


def _parse_coeffs(text: str) -> tuple[int, ...]:
    return tuple(_parse_int(c, "modulus coefficient") for c in text.split(","))


def parse_ring_literal(text: str) -> RingSpec:
    """Parse a short name or explicit functional ring literal."""
    text = text.strip()
    if text.startswith("Zps(") and text.endswith(")"):
        parts = text[4:-1].split(",")
        if len(parts) != 2:
            raise ParseError(f"Zps takes (p,s): {text!r}")
        return RingSpec("Zps", _parse_int(parts[0], "p"), _parse_int(parts[1], "s"))
    if text.startswith("ext(") and text.endswith(")"):
        parts = text[4:-1].split(";")
        if len(parts) != 2:
            raise ParseError(f"ext takes (p;c0,...,ck): {text!r}")
        return RingSpec("ext", _parse_int(parts[0], "p"), 1, _parse_coeffs(parts[1]))
    if text.startswith("chain(") and text.endswith(")"):
        parts = text[6:-1].split(";")
        if len(parts) not in (2, 3) or not parts[-1].startswith("e="):
            raise ParseError(f"chain takes (p;e=N) or (p;c0,...,ck;e=N): {text!r}")
        p = _parse_int(parts[0], "p")
        e = _parse_int(parts[-1][2:], "e")
        modulus = _parse_coeffs(parts[1]) if len(parts) == 3 else None
        return RingSpec("chain", p, 1, modulus, e)
    if text.startswith("GR(") and text.endswith(")"):
        body = text[3:-1]
        if ";" in body:
            head, coeffs = body.split(";", 1)
            parts = head.split(",")
            if len(parts) != 2:
                raise ParseError(f"GR takes (p,s;c0,...,ck): {text!r}")
            return RingSpec(
                "GR", _parse_int(parts[0], "p"), _parse_int(parts[1], "s"),
                _parse_coeffs(coeffs),
            )
        # short name GR(q,r) with q = p^s
        parts = body.split(",")
        if len(parts) != 2:
            raise ParseError(f"GR takes (q,r): {text!r}")
        q, r = _parse_int(parts[0], "q"), _parse_int(parts[1], "r")
        pk = _prime_power(q)
        if pk is None:
            raise ParseError(f"{q} is not a prime power in {text!r}")
        p, s = pk
        return RingSpec("GR", p, s, first_irreducible_modulus(p, r))
    if text.startswith("F") and "[t]/t^" in text:
        qtext, etext = text[1:].split("[t]/t^", 1)
        q = _parse_int(qtext, "field order")
        e = _parse_int(etext, "nilpotency degree")
        pk = _prime_power(q)
        if pk is None:
            raise ParseError(f"{q} is not a prime power in {text!r}")
        p, r = pk
        modulus = None if r == 1 else first_irreducible_modulus(p, r)
        return RingSpec("chain", p, 1, modulus, e)
    if text.startswith("Z") and text[1:].isdigit():
        n = int(text[1:])
        pk = _prime_power(n)
        if pk is None:
            raise ParseError(f"{n} is not a prime power in {text!r}")
        return RingSpec("Zps", *pk)
    if text.startswith("F") and text[1:].isdigit():
        q = int(text[1:])
        pk = _prime_power(q)
        if pk is None:
            raise ParseError(f"{q} is not a prime power in {text!r}")
        p, r = pk
        if r == 1:
            return RingSpec("Zps", p, 1)
        return RingSpec("ext", p, 1, first_irreducible_modulus(p, r))
    raise ParseError(f"unrecognised ring literal {text!r}")


def default_catalog_text() -> str:
    """The packaged default catalog config."""
    return (
        importlib.resources.files("uniortho")
        .joinpath("data/default_catalog.toml")
        .read_text(encoding="utf-8")
    )
