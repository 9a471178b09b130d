"""Finite local rings of odd characteristic with exact element arithmetic.

Four presentations are supported, enough to cover fields, pure nilpotent
quotients and mixed characteristic:

* ``Zps``   -- integers mod p^s,
* ``ext``   -- F_p[x]/(f) with f irreducible mod p (a finite field),
* ``chain`` -- F_q[t]/(t^e) over F_q = F_p[x]/(f), a chain ring with
  nilpotent maximal ideal (t),
* ``GR``    -- Z_{p^s}[x]/(f) with f monic and irreducible mod p (a
  Galois ring with maximal ideal (p)).

Elements are plain canonical values: an ``int`` in ``[0, p^s)`` for
``Zps``, and for quotients a tuple of base-ring values with the constant
coefficient first.  Two elements are equal iff their values are equal, and
the fixed total order on a ring is the lexicographic order of those
values (which Python's ``<`` implements directly).  All operations are
pure; rings never mutate after construction beyond private caches.

Units are recognised through the residue field: an element is a unit iff
its image in R/M is nonzero.  Squareness of a unit is decided by the
Euler criterion in the residue field and certified by an exact witness
found in the two lifted fibers; the agreement of this criterion with
exhaustive squaring is a property the test suite re-proves on every
catalog ring rather than an assumption.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .errors import (
    EvenCharacteristic,
    InvalidRingSpec,
    MixedRings,
    NotAUnit,
    NotLocal,
    ParseError,
    ReducibleModulus,
    TooLarge,
    UniorthoError,
)

#: Refuse exhaustive enumeration beyond this many elements unless overridden.
DEFAULT_ENUMERATION_BOUND = 3 ** 10

#: Largest ring for which index-space operation tables are materialised.
_TABLE_LIMIT = 512

KINDS = ("Zps", "ext", "chain", "GR")


@dataclass(frozen=True)
class RingSpec:
    """Constructive presentation of a finite local ring.

    ``modulus`` lists integer polynomial coefficients, constant term
    first, including the leading 1.  For ``chain`` it describes the base
    field F_q and may be omitted (base field F_p); ``e`` is the
    nilpotency degree of t.
    """

    kind: str
    p: int
    s: int = 1
    modulus: tuple[int, ...] | None = None
    e: int = 1


@dataclass(frozen=True)
class SquareClass:
    """Square/non-square classification of a unit, with exact witness."""

    is_square: bool
    witness: object | None = None

    @property
    def tag(self) -> str:
        return "square" if self.is_square else "non-square"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# polynomial helpers over F_p (plain int coefficient tuples, constant first)


def _poly_rem(num: tuple[int, ...], div: tuple[int, ...], p: int) -> tuple[int, ...]:
    """Remainder of num by monic div over F_p."""
    rem = list(num)
    dd = len(div) - 1
    for i in range(len(rem) - 1, dd - 1, -1):
        c = rem[i] % p
        if c:
            for j in range(dd + 1):
                rem[i - dd + j] = (rem[i - dd + j] - c * div[j]) % p
    return tuple(c % p for c in rem[:dd])


def _poly_is_irreducible(coeffs: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic divisor of degree <= deg/2 over F_p."""
    d = len(coeffs) - 1
    if d == 1:
        return True
    for k in range(1, d // 2 + 1):
        for lower in itertools.product(range(p), repeat=k):
            div = (*lower, 1)
            if not any(_poly_rem(coeffs, div, p)):
                return False
    return True


def split_top_level(text: str, sep: str = ",") -> list[str]:
    """Split on sep outside parentheses; used by element/matrix literals."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced ')' in {text!r}")
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise ParseError(f"unbalanced '(' in {text!r}")
    parts.append("".join(cur))
    return parts


# ---------------------------------------------------------------------------
# rings


class LocalRing:
    """Common behaviour shared by the concrete presentations.

    Concrete subclasses provide: ``zero``, ``one``, ``add``, ``sub``,
    ``neg``, ``mul``, ``inv``, ``is_unit``, ``residue``, ``lift``,
    ``residue_field``, ``check_element``, element iteration and literal
    formatting/parsing.
    """

    spec: RingSpec
    label: str
    cardinality: int
    characteristic: int
    maximal_ideal_size: int
    is_field: bool

    def __eq__(self, other) -> bool:
        return isinstance(other, LocalRing) and self.spec == other.spec

    def __hash__(self) -> int:
        return hash(self.spec)

    def __repr__(self) -> str:
        return f"LocalRing({self.label})"

    @property
    def residue_field_order(self) -> int:
        return self.cardinality // self.maximal_ideal_size

    # -- enumeration (desk scale only)

    def _check_card(self, needed: int, max_card: int | None):
        bound = DEFAULT_ENUMERATION_BOUND if max_card is None else max_card
        if needed > bound:
            raise TooLarge(
                f"{self.label}: enumerating {needed} elements exceeds bound {bound}"
            )

    def elements(self, max_card: int | None = None) -> list:
        """All elements in the fixed total order (lexicographic on values)."""
        cached = self.__dict__.get("_elements")
        if cached is None:
            self._check_card(self.cardinality, max_card)
            cached = list(self._iter_elements())
            self.__dict__["_elements"] = cached
        return cached

    def units(self, max_card: int | None = None) -> list:
        cached = self.__dict__.get("_units")
        if cached is None:
            cached = [a for a in self.elements(max_card) if self.is_unit(a)]
            self.__dict__["_units"] = cached
        return cached

    def maximal_ideal(self, max_card: int | None = None) -> list:
        cached = self.__dict__.get("_mideal")
        if cached is None:
            cached = [a for a in self.elements(max_card) if not self.is_unit(a)]
            self.__dict__["_mideal"] = cached
        return cached

    def element_index(self, a) -> int:
        index = self.__dict__.get("_index")
        if index is None:
            index = {v: i for i, v in enumerate(self.elements())}
            self.__dict__["_index"] = index
        return index[a]

    def require_element(self, a):
        if not self.check_element(a):
            raise MixedRings(f"{a!r} is not a canonical element of {self.label}")

    # -- generic arithmetic helpers

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def pow(self, a, k: int):
        if k < 0:
            return self.pow(self.inv(a), -k)
        result, base = self.one, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def tables(self) -> "OpTables":
        """Index-space add/mul tables for hot exhaustive loops."""
        cached = self.__dict__.get("_tables")
        if cached is None:
            if self.cardinality > _TABLE_LIMIT:
                raise TooLarge(
                    f"{self.label}: no operation tables beyond {_TABLE_LIMIT} elements"
                )
            cached = OpTables(self)
            self.__dict__["_tables"] = cached
        return cached


class IntegerModRing(LocalRing):
    """Z_{p^s}; elements are ints in [0, p^s)."""

    def __init__(self, p: int, s: int, spec: RingSpec | None = None):
        self.p = p
        self.s = s
        self.m = p ** s
        self.spec = spec if spec is not None else RingSpec("Zps", p, s)
        self.label = f"Z{self.m}"
        self.cardinality = self.m
        self.characteristic = self.m
        self.maximal_ideal_size = p ** (s - 1)
        self.is_field = s == 1
        self.zero = 0
        self.one = 1

    def add(self, a, b):
        return (a + b) % self.m

    def sub(self, a, b):
        return (a - b) % self.m

    def neg(self, a):
        return -a % self.m

    def mul(self, a, b):
        return (a * b) % self.m

    def is_unit(self, a) -> bool:
        return a % self.p != 0

    def inv(self, a):
        if not self.is_unit(a):
            raise NotAUnit(f"{a} is not a unit of {self.label}")
        return pow(a, -1, self.m)

    @cached_property
    def residue_field(self) -> "IntegerModRing":
        return self if self.s == 1 else IntegerModRing(self.p, 1)

    def residue(self, a):
        return a % self.p

    def lift(self, abar):
        return abar

    def check_element(self, a) -> bool:
        return isinstance(a, int) and 0 <= a < self.m

    def embed_int(self, k: int):
        return k % self.m

    def _iter_elements(self):
        return iter(range(self.m))

    def format_element(self, a) -> str:
        return str(a)

    def parse_element(self, text: str):
        try:
            return int(text) % self.m
        except ValueError:
            raise ParseError(f"{text!r} is not an element literal for {self.label}") from None


class QuotientRing(LocalRing):
    """base[x]/(f) with f monic of degree d; elements are d-tuples of base values."""

    def __init__(self, base: LocalRing, modulus: tuple, kind: str, spec: RingSpec, label: str):
        self.base = base
        self.modulus = tuple(modulus)
        self.degree = len(modulus) - 1
        self.spec = spec
        self.label = label
        self.kind = kind
        d = self.degree
        self.cardinality = base.cardinality ** d
        self.characteristic = base.characteristic
        self.zero = (base.zero,) * d
        self.one = (base.one,) + (base.zero,) * (d - 1)
        if kind == "ext":
            self.is_field = True
            self.maximal_ideal_size = 1
        elif kind == "chain":
            # maximal ideal (t): everything with zero constant coefficient
            self.is_field = d == 1
            self.maximal_ideal_size = base.cardinality ** (d - 1)
        elif kind == "GR":
            # maximal ideal (p); s == 1 degenerates to a field
            self.is_field = base.cardinality == base.p
            self.maximal_ideal_size = self.cardinality // (base.p ** d)
        else:
            raise InvalidRingSpec(f"unknown quotient kind {kind!r}")

    def add(self, a, b):
        base = self.base
        return tuple(base.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        base = self.base
        return tuple(base.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        base = self.base
        return tuple(base.neg(x) for x in a)

    def mul(self, a, b):
        base = self.base
        d = self.degree
        prod = [base.zero] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai == base.zero:
                continue
            for j, bj in enumerate(b):
                if bj != base.zero:
                    prod[i + j] = base.add(prod[i + j], base.mul(ai, bj))
        f = self.modulus
        for i in range(2 * d - 2, d - 1, -1):
            c = prod[i]
            if c == base.zero:
                continue
            prod[i] = base.zero
            off = i - d
            for j in range(d):
                fj = f[j]
                if fj != base.zero:
                    prod[off + j] = base.sub(prod[off + j], base.mul(c, fj))
        return tuple(prod[:d])

    def is_unit(self, a) -> bool:
        return self.residue(a) != self.residue_field.zero

    def inv(self, a):
        if not self.is_unit(a):
            raise NotAUnit(f"{self.format_element(a)} is not a unit of {self.label}")
        if self.is_field:
            return self.pow(a, self.cardinality - 2)
        # Newton lift of the residue-field inverse; error term lives in the
        # nilpotent maximal ideal, so squaring it reaches zero quickly
        x = self.lift(self.residue_field.inv(self.residue(a)))
        one = self.one
        two = self.add(one, one)
        while True:
            e = self.mul(a, x)
            if e == one:
                return x
            x = self.mul(x, self.sub(two, e))

    @cached_property
    def residue_field(self) -> LocalRing:
        if self.kind == "ext":
            return self
        if self.kind == "chain":
            return self.base
        # GR: reduce the modulus mod p and quotient the prime field by it
        base: IntegerModRing = self.base  # type: ignore[assignment]
        fp = IntegerModRing(base.p, 1)
        fbar = tuple(c % base.p for c in self.modulus)
        spec = RingSpec("ext", base.p, 1, fbar)
        return QuotientRing(fp, fbar, "ext", spec, f"F{base.p ** self.degree}")

    def residue(self, a):
        if self.kind == "ext":
            return a
        if self.kind == "chain":
            return a[0]
        p = self.base.p  # type: ignore[attr-defined]
        return tuple(c % p for c in a)

    def lift(self, abar):
        if self.kind == "ext":
            return abar
        if self.kind == "chain":
            return (abar,) + (self.base.zero,) * (self.degree - 1)
        return abar  # GR: residue coefficients are already valid Z_{p^s} values

    def check_element(self, a) -> bool:
        return (
            isinstance(a, tuple)
            and len(a) == self.degree
            and all(self.base.check_element(c) for c in a)
        )

    def embed_int(self, k: int):
        return (self.base.embed_int(k),) + (self.base.zero,) * (self.degree - 1)

    def _iter_elements(self):
        return itertools.product(self.base.elements(self.cardinality), repeat=self.degree)

    def format_element(self, a) -> str:
        return "(" + ",".join(self.base.format_element(c) for c in a) + ")"

    def parse_element(self, text: str):
        text = text.strip()
        if not text.startswith("("):
            # bare integer literal embeds as k * 1
            try:
                return self.embed_int(int(text))
            except ValueError:
                raise ParseError(
                    f"{text!r} is not an element literal for {self.label}"
                ) from None
        if not text.endswith(")"):
            raise ParseError(f"{text!r} is not an element literal for {self.label}")
        parts = split_top_level(text[1:-1])
        if len(parts) != self.degree:
            raise ParseError(
                f"{text!r} has {len(parts)} coefficients, {self.label} needs {self.degree}"
            )
        return tuple(self.base.parse_element(part) for part in parts)


class OpTables:
    """Dense index-space operation tables for a small ring.

    ``elements[i]`` is the i-th element in ring order; ``add``/``mul`` map
    index pairs to result indices; ``inv[i]`` is None for non-units.
    """

    __slots__ = ("ring", "elements", "index", "add", "mul", "neg", "unit", "inv")

    def __init__(self, ring: LocalRing):
        elems = ring.elements()
        n = len(elems)
        index = {v: i for i, v in enumerate(elems)}
        self.ring = ring
        self.elements = elems
        self.index = index
        self.add = [[index[ring.add(a, b)] for b in elems] for a in elems]
        self.mul = [[index[ring.mul(a, b)] for b in elems] for a in elems]
        self.neg = [index[ring.neg(a)] for a in elems]
        self.unit = [ring.is_unit(a) for a in elems]
        self.inv = [index[ring.inv(a)] if ring.is_unit(a) else None for a in elems]


# ---------------------------------------------------------------------------
# construction


def _validate_spec(spec: RingSpec):
    if spec.kind not in KINDS:
        raise InvalidRingSpec(f"unknown ring kind {spec.kind!r}; expected one of {KINDS}")
    p, s, e = spec.p, spec.s, spec.e
    if not isinstance(p, int) or not isinstance(s, int) or not isinstance(e, int):
        raise InvalidRingSpec("p, s, e must be integers")
    if p % 2 == 0:
        raise EvenCharacteristic(f"p = {p}: odd characteristic is required throughout")
    if not _is_prime(p):
        raise InvalidRingSpec(f"p = {p} is not prime")
    if s < 1:
        raise InvalidRingSpec(f"s = {s} must be >= 1")
    if e < 1:
        raise InvalidRingSpec(f"e = {e} must be >= 1")
    if spec.kind in ("Zps", "ext") and e != 1:
        raise InvalidRingSpec(f"kind {spec.kind!r} takes no nilpotency degree e")
    if spec.kind in ("ext", "chain") and s != 1:
        raise InvalidRingSpec(f"kind {spec.kind!r} takes no exponent s")
    if spec.kind == "Zps" and spec.modulus is not None:
        raise InvalidRingSpec("kind 'Zps' takes no modulus")
    if spec.kind in ("ext", "GR"):
        if spec.modulus is None:
            raise InvalidRingSpec(f"kind {spec.kind!r} requires a modulus")
    if spec.modulus is not None:
        if len(spec.modulus) < 2:
            raise InvalidRingSpec("modulus must have degree >= 1")
        if any(not isinstance(c, int) for c in spec.modulus):
            raise InvalidRingSpec("modulus coefficients must be integers")
        char = p ** s if spec.kind == "GR" else p
        if spec.modulus[-1] % char != 1:
            raise InvalidRingSpec("modulus must be monic")
        fbar = tuple(c % p for c in spec.modulus)
        if spec.kind in ("ext", "GR", "chain") and not _poly_is_irreducible(fbar, p):
            raise ReducibleModulus(
                f"modulus {list(spec.modulus)} is reducible mod {p}"
            )


def _build_ring(spec: RingSpec) -> LocalRing:
    p = spec.p
    if spec.kind == "Zps":
        return IntegerModRing(p, spec.s, spec)
    if spec.kind == "ext":
        base = IntegerModRing(p, 1)
        fbar = tuple(c % p for c in spec.modulus)
        return QuotientRing(base, fbar, "ext", spec, f"F{p ** (len(fbar) - 1)}")
    if spec.kind == "chain":
        if spec.modulus is None:
            field: LocalRing = IntegerModRing(p, 1)
        else:
            fbar = tuple(c % p for c in spec.modulus)
            fspec = RingSpec("ext", p, 1, fbar)
            field = QuotientRing(IntegerModRing(p, 1), fbar, "ext", fspec, f"F{p ** (len(fbar) - 1)}")
        q = field.cardinality
        tmod = (field.zero,) * spec.e + (field.one,)
        return QuotientRing(field, tmod, "chain", spec, f"F{q}[t]/t^{spec.e}")
    # GR
    base = IntegerModRing(p, spec.s)
    fvals = tuple(c % base.m for c in spec.modulus)
    d = len(fvals) - 1
    return QuotientRing(base, fvals, "GR", spec, f"GR({base.m},{d})")


def _verify_locality(ring: LocalRing):
    """Exhaustively check that the residue-zero elements form the ideal of
    non-units.

    Cost is O(|M|^2 + |R|*|M|) ring operations, so this is only run up to
    the configured bound; every catalog ring is tiny by comparison.
    """
    elems = ring.elements(max_card=ring.cardinality)
    mset = set(ring.maximal_ideal(max_card=ring.cardinality))
    if len(mset) != ring.maximal_ideal_size:
        raise NotLocal(
            f"{ring.label}: found {len(mset)} non-units, presentation predicts "
            f"{ring.maximal_ideal_size}"
        )
    if ring.one in mset:
        raise NotLocal(f"{ring.label}: 1 has zero residue")
    for a in elems:
        if a in mset:
            continue
        try:
            b = ring.inv(a)
        except NotAUnit:
            raise NotLocal(f"{ring.label}: {ring.format_element(a)} has no inverse") from None
        if ring.mul(a, b) != ring.one:
            raise NotLocal(f"{ring.label}: inversion of {ring.format_element(a)} is wrong")
    mlist = sorted(mset)
    for a in mlist:
        for b in mlist:
            if ring.add(a, b) not in mset:
                raise NotLocal(f"{ring.label}: M not closed under addition")
        for r in elems:
            if ring.mul(r, a) not in mset:
                raise NotLocal(f"{ring.label}: M does not absorb multiplication")


def construct_ring(spec: RingSpec, verify_bound: int | None = None) -> LocalRing:
    """Validate a presentation and build the ring.

    Locality (non-units = the unique maximal ideal) is certified by the
    exhaustive check whenever |R| <= verify_bound (default
    DEFAULT_ENUMERATION_BOUND); larger rings are constructed unverified.
    """
    _validate_spec(spec)
    ring = _build_ring(spec)
    bound = DEFAULT_ENUMERATION_BOUND if verify_bound is None else verify_bound
    if ring.cardinality <= bound:
        _verify_locality(ring)
    return ring


# ---------------------------------------------------------------------------
# element-level operations on top of a ring


def enumerate_elements(ring: LocalRing, which: str = "all", max_card: int | None = None) -> list:
    """Ordered element listings: "all", "units" or "maximal_ideal"."""
    if which == "all":
        return list(ring.elements(max_card))
    if which == "units":
        return list(ring.units(max_card))
    if which == "maximal_ideal":
        return list(ring.maximal_ideal(max_card))
    raise ValueError(f"unknown selection {which!r}")


def square_class(ring: LocalRing, a, max_card: int | None = None) -> SquareClass:
    """Classify a unit as square/non-square, with an exact square root witness.

    Decided by the Euler criterion in the residue field; a positive answer
    is certified by scanning the two lifted root fibers (r + M and -r + M)
    in element order for a value whose square is exactly ``a``.
    """
    if not ring.is_unit(a):
        raise NotAUnit(f"{ring.format_element(a)} is not a unit of {ring.label}")
    field = ring.residue_field
    abar = ring.residue(a)
    q = field.cardinality
    if field.pow(abar, (q - 1) // 2) != field.one:
        return SquareClass(False)
    rbar = None
    for t in field.elements(max_card):
        if t != field.zero and field.mul(t, t) == abar:
            rbar = t
            break
    if rbar is None:
        raise UniorthoError(
            f"{ring.label}: Euler criterion accepted {ring.format_element(a)} "
            "but no residue square root exists"
        )
    r0 = ring.lift(rbar)
    candidates = set()
    for root in (r0, ring.neg(r0)):
        for m in ring.maximal_ideal(max_card):
            candidates.add(ring.add(root, m))
    for t in sorted(candidates):
        if ring.mul(t, t) == a:
            return SquareClass(True, t)
    raise UniorthoError(
        f"{ring.label}: square witness lift failed for {ring.format_element(a)}"
    )


def canonical_nonsquare(ring: LocalRing, max_card: int | None = None):
    """The first non-square unit in element order; deterministic per ring."""
    cached = ring.__dict__.get("_nonsquare")
    if cached is not None:
        return cached
    for a in ring.elements(max_card):
        if ring.is_unit(a) and not square_class(ring, a, max_card).is_square:
            ring.__dict__["_nonsquare"] = a
            return a
    raise UniorthoError(f"{ring.label}: no non-square unit found")


def ring_arithmetic(ring: LocalRing, op: str, a, b=None):
    """Validated arithmetic entry point (add/sub/mul/neg) over one ring."""
    ring.require_element(a)
    if op == "neg":
        return ring.neg(a)
    ring.require_element(b)
    if op == "add":
        return ring.add(a, b)
    if op == "sub":
        return ring.sub(a, b)
    if op == "mul":
        return ring.mul(a, b)
    raise ValueError(f"unknown operation {op!r}")


def invert(ring: LocalRing, a):
    """Multiplicative inverse of a unit."""
    ring.require_element(a)
    return ring.inv(a)
