"""Catalog configuration: a small TOML grammar, strictly validated.

Per-ring sections use ``[[ring]]`` with keys kind, p, s, modulus
(coefficient list, constant term first) and e; global keys are
timeout_secs, max_card, format and out.  Unknown keys are errors, not
warnings, and every ring spec is constructed (hence fully validated) at
load time.
"""

from __future__ import annotations

import re
import sys
from dataclasses import dataclass

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError, ParseError, UniorthoError, ValidationError
from .orthosets import DEFAULT_SEARCH_TIMEOUT
from .rings import DEFAULT_ENUMERATION_BOUND, LocalRing, RingSpec, construct_ring

_GLOBAL_KEYS = {"ring", "timeout_secs", "max_card", "format", "out"}
_RING_KEYS = {"kind", "p", "s", "modulus", "e"}
_FORMATS = ("csv", "json")


@dataclass(frozen=True)
class CatalogEntry:
    label: str
    spec: RingSpec
    ring: LocalRing


@dataclass(frozen=True)
class CatalogConfig:
    rings: tuple[CatalogEntry, ...]
    timeout_secs: float
    max_card: int
    format: str
    out: str | None


def _structured_parse_error(err: tomllib.TOMLDecodeError) -> ParseError:
    message = str(err)
    m = re.search(r"\s*\(at line (\d+), column (\d+)\)", message)
    if m is None:
        return ParseError(message)
    return ParseError(
        message[: m.start()], line=int(m.group(1)), column=int(m.group(2))
    )


def _expect(cond: bool, message: str):
    if not cond:
        raise ValidationError(message)


def parse_config(text: str) -> CatalogConfig:
    """Parse and validate a catalog config document."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as err:
        raise _structured_parse_error(err) from None

    unknown = set(data) - _GLOBAL_KEYS
    _expect(not unknown, f"unknown config keys: {sorted(unknown)}")

    timeout_secs = data.get("timeout_secs", DEFAULT_SEARCH_TIMEOUT)
    _expect(
        isinstance(timeout_secs, (int, float)) and not isinstance(timeout_secs, bool)
        and timeout_secs > 0,
        "timeout_secs must be a positive number",
    )
    max_card = data.get("max_card", DEFAULT_ENUMERATION_BOUND)
    _expect(
        isinstance(max_card, int) and not isinstance(max_card, bool) and max_card >= 1,
        "max_card must be a positive integer",
    )
    fmt = data.get("format", "csv")
    _expect(fmt in _FORMATS, f"format must be one of {_FORMATS}")
    out = data.get("out")
    _expect(out is None or isinstance(out, str), "out must be a path string")

    raw_rings = data.get("ring", [])
    _expect(isinstance(raw_rings, list) and raw_rings, "at least one [[ring]] is required")

    entries = []
    labels_seen: dict[str, int] = {}
    for i, table in enumerate(raw_rings):
        where = f"[[ring]] #{i + 1}"
        _expect(isinstance(table, dict), f"{where}: not a table")
        unknown = set(table) - _RING_KEYS
        _expect(not unknown, f"{where}: unknown keys {sorted(unknown)}")
        _expect("kind" in table and isinstance(table["kind"], str), f"{where}: kind is required")
        _expect("p" in table and isinstance(table["p"], int), f"{where}: integer p is required")
        for key in ("s", "e"):
            _expect(
                key not in table or isinstance(table[key], int),
                f"{where}: {key} must be an integer",
            )
        modulus = table.get("modulus")
        if modulus is not None:
            _expect(
                isinstance(modulus, list) and all(isinstance(c, int) for c in modulus),
                f"{where}: modulus must be a list of integers",
            )
            modulus = tuple(modulus)
        spec = RingSpec(
            kind=table["kind"],
            p=table["p"],
            s=table.get("s", 1),
            modulus=modulus,
            e=table.get("e", 1),
        )
        try:
            ring = construct_ring(spec, verify_bound=max_card)
        except ConfigError:
            raise
        except UniorthoError as err:
            raise ValidationError(f"{where}: {err}") from err
        n = labels_seen.get(ring.label, 0) + 1
        labels_seen[ring.label] = n
        label = ring.label if n == 1 else f"{ring.label}#{n}"
        entries.append(CatalogEntry(label, spec, ring))

    return CatalogConfig(
        rings=tuple(entries),
        timeout_secs=float(timeout_secs),
        max_card=max_card,
        format=fmt,
        out=out,
    )
