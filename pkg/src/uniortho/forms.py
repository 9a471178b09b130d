"""Symmetric bilinear forms over R^n and their canonical shapes.

A form is held by its associate matrix B, an n x n array of canonical
ring values; beta(x, y) = x^T B y.  Forms are equivalent when
B2 = P^T B1 P for invertible P.  Over a finite local ring of odd
characteristic every symmetric non-degenerate form is equivalent to the
alternating diagonal +1/-1 pattern whose final entry carries a single
parameter u, either 1 or the ring's canonical non-square unit.

Because det is only invariant up to unit squares, the class that decides
everything here is the discriminant (-1)^{n(n-1)/2} * det: for n = 2 the
class of -det.  Reports expose both classifications; see
``discriminant_class`` versus ``det_class``.

``diagonalize`` computes an explicit congruence to a unit diagonal and
``canonicalize`` an explicit congruence to the canonical matrix, both
returned with the transform P and verified exactly before returning.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce

from .errors import (
    Degenerate,
    DimensionMismatch,
    MixedRings,
    NotSymmetric,
    TooLarge,
    UniorthoError,
)
from .rings import (
    DEFAULT_ENUMERATION_BOUND,
    LocalRing,
    SquareClass,
    canonical_nonsquare,
    split_top_level,
    square_class,
)

Matrix = tuple  # tuple of row tuples of element values


# ---------------------------------------------------------------------------
# small exact matrix helpers


def mat_identity(ring: LocalRing, n: int) -> Matrix:
    return tuple(
        tuple(ring.one if i == j else ring.zero for j in range(n)) for i in range(n)
    )


def mat_transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m))


def mat_mul(ring: LocalRing, a: Matrix, b: Matrix) -> Matrix:
    bt = mat_transpose(b)
    return tuple(
        tuple(
            reduce(ring.add, (ring.mul(x, y) for x, y in zip(row, col)), ring.zero)
            for col in bt
        )
        for row in a
    )


def mat_vec(ring: LocalRing, a: Matrix, v: tuple) -> tuple:
    return tuple(
        reduce(ring.add, (ring.mul(x, y) for x, y in zip(row, v)), ring.zero)
        for row in a
    )


def mat_det(ring: LocalRing, m: Matrix):
    """Cofactor-expansion determinant; exact and fine for small n."""
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return ring.sub(ring.mul(m[0][0], m[1][1]), ring.mul(m[0][1], m[1][0]))
    total = ring.zero
    for j in range(n):
        if m[0][j] == ring.zero:
            continue
        minor = tuple(row[:j] + row[j + 1 :] for row in m[1:])
        term = ring.mul(m[0][j], mat_det(ring, minor))
        total = ring.add(total, term) if j % 2 == 0 else ring.sub(total, term)
    return total


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class BilinearForm:
    """A bilinear form given by its associate matrix over a local ring."""

    ring: LocalRing
    matrix: Matrix

    def __post_init__(self):
        n = len(self.matrix)
        if n < 1 or any(len(row) != n for row in self.matrix):
            raise DimensionMismatch("associate matrix must be square")

    @property
    def n(self) -> int:
        return len(self.matrix)

    @classmethod
    def from_ints(cls, ring: LocalRing, rows) -> "BilinearForm":
        return cls(ring, tuple(tuple(ring.embed_int(c) for c in row) for row in rows))


@dataclass(frozen=True)
class CongruenceTransform:
    """An invertible change of basis P; det P is checked to be a unit."""

    ring: LocalRing
    matrix: Matrix

    def __post_init__(self):
        if not self.ring.is_unit(mat_det(self.ring, self.matrix)):
            raise Degenerate("congruence transform must have unit determinant")


@dataclass(frozen=True)
class CanonicalForm:
    """The alternating diagonal target with class parameter u in {1, z}."""

    ring: LocalRing
    n: int
    u: object

    @property
    def parity(self) -> str:
        return "odd" if self.n % 2 else "even"

    def matrix(self) -> Matrix:
        return canonical_matrix(self.ring, self.n, self.u)


def canonical_matrix(ring: LocalRing, n: int, u) -> Matrix:
    """diag(1,-1,...,±u): alternating signs, final slot scaled by u."""
    diag = [ring.one if i % 2 == 0 else ring.neg(ring.one) for i in range(n)]
    diag[n - 1] = ring.mul(diag[n - 1], u)
    return tuple(
        tuple(diag[i] if i == j else ring.zero for j in range(n)) for i in range(n)
    )


def diagonal_form(ring: LocalRing, entries) -> BilinearForm:
    n = len(entries)
    return BilinearForm(
        ring,
        tuple(
            tuple(entries[i] if i == j else ring.zero for j in range(n))
            for i in range(n)
        ),
    )


def hyperbolic_form(ring: LocalRing, n: int = 2) -> BilinearForm:
    """The canonical form with u = 1 (for n = 2: x1*y1 - x2*y2)."""
    return BilinearForm(ring, canonical_matrix(ring, n, ring.one))


def nonsquare_form(ring: LocalRing, n: int = 2) -> BilinearForm:
    """The canonical form with u = z, the canonical non-square unit."""
    return BilinearForm(ring, canonical_matrix(ring, n, canonical_nonsquare(ring)))


# ---------------------------------------------------------------------------
# basic operations


def evaluate(form: BilinearForm, x: tuple, y: tuple):
    """beta(x, y) = x^T B y."""
    ring = form.ring
    if len(x) != form.n or len(y) != form.n:
        raise DimensionMismatch(
            f"form is {form.n}x{form.n}, got vectors of length {len(x)}, {len(y)}"
        )
    total = ring.zero
    for xi, row in zip(x, form.matrix):
        if xi == ring.zero:
            continue
        inner = reduce(ring.add, (ring.mul(b, yj) for b, yj in zip(row, y)), ring.zero)
        total = ring.add(total, ring.mul(xi, inner))
    return total


def is_symmetric(form: BilinearForm) -> bool:
    return form.matrix == mat_transpose(form.matrix)


def determinant(form: BilinearForm):
    return mat_det(form.ring, form.matrix)


def is_nondegenerate(form: BilinearForm) -> bool:
    return form.ring.is_unit(determinant(form))


def det_class(form: BilinearForm) -> SquareClass:
    """Square class of det B itself (not congruence-invariant)."""
    d = determinant(form)
    if not form.ring.is_unit(d):
        raise Degenerate("det is not a unit")
    return square_class(form.ring, d)


def discriminant(form: BilinearForm):
    """(-1)^{n(n-1)/2} * det B; for n = 2 this is -det B."""
    d = determinant(form)
    if (form.n * (form.n - 1) // 2) % 2:
        d = form.ring.neg(d)
    return d


def discriminant_class(form: BilinearForm) -> SquareClass:
    """Square class of the discriminant; invariant under congruence."""
    d = discriminant(form)
    if not form.ring.is_unit(d):
        raise Degenerate("det is not a unit")
    return square_class(form.ring, d)


def apply_congruence(form: BilinearForm, p: Matrix) -> BilinearForm:
    """P^T B P as a new form."""
    ring = form.ring
    return BilinearForm(ring, mat_mul(ring, mat_mul(ring, mat_transpose(p), form.matrix), p))


def _require_canonicalizable(form: BilinearForm):
    if not is_symmetric(form):
        raise NotSymmetric("associate matrix is not symmetric")
    if not is_nondegenerate(form):
        raise Degenerate("associate matrix has non-unit determinant")


# ---------------------------------------------------------------------------
# diagonalization


def _col_add(ring, b, p, j, k, c):
    """Basis change e_j <- e_j + c*e_k, applied to Gram matrix b and basis p."""
    n = len(b)
    for r in range(n):
        p[r][j] = ring.add(p[r][j], ring.mul(c, p[r][k]))
    for l in range(n):  # row j <- row j + c * row k   (T^T B)
        b[j][l] = ring.add(b[j][l], ring.mul(c, b[k][l]))
    for l in range(n):  # col j <- col j + c * col k   (... T)
        b[l][j] = ring.add(b[l][j], ring.mul(c, b[l][k]))


def _col_swap(b, p, j, k):
    n = len(b)
    for r in range(n):
        p[r][j], p[r][k] = p[r][k], p[r][j]
    b[j], b[k] = b[k], b[j]
    for row in b:
        row[j], row[k] = row[k], row[j]


def diagonalize(form: BilinearForm) -> tuple[CongruenceTransform, BilinearForm]:
    """Symmetric congruence to a diagonal matrix with unit entries.

    At each step the smallest unit diagonal entry is the pivot.  If none
    remains, non-degeneracy over a local ring guarantees a unit
    off-diagonal entry b_ij; the basis change e_i <- e_i + e_j then puts
    the unit b_ii + 2 b_ij + b_jj on the diagonal (2 b_ij is a unit in
    odd characteristic while b_ii, b_jj lie in M).  The pivot row and
    column are cleared by exact division by the pivot.
    """
    _require_canonicalizable(form)
    ring, n = form.ring, form.n
    b = [list(row) for row in form.matrix]
    p = [list(row) for row in mat_identity(ring, n)]
    for k in range(n):
        pivot = next((i for i in range(k, n) if ring.is_unit(b[i][i])), None)
        if pivot is None:
            rescue = next(
                (
                    (i, j)
                    for i in range(k, n)
                    for j in range(i + 1, n)
                    if ring.is_unit(b[i][j])
                ),
                None,
            )
            if rescue is None:
                raise Degenerate("no unit pivot available; form is degenerate")
            i, j = rescue
            _col_add(ring, b, p, i, j, ring.one)
            pivot = i
        if pivot != k:
            _col_swap(b, p, pivot, k)
        inv_d = ring.inv(b[k][k])
        for j in range(k + 1, n):
            lam = ring.mul(b[k][j], inv_d)
            if lam != ring.zero:
                _col_add(ring, b, p, j, k, ring.neg(lam))
    pmat = tuple(tuple(row) for row in p)
    dmat = tuple(tuple(row) for row in b)
    diag = BilinearForm(ring, dmat)
    transform = CongruenceTransform(ring, pmat)
    if apply_congruence(form, pmat).matrix != dmat:
        raise UniorthoError("diagonalization verification failed")
    return transform, diag


# ---------------------------------------------------------------------------
# canonicalization


def _find_value_vector(ring: LocalRing, gram: Matrix, t) -> tuple:
    """A vector v with v^T G v = t (t a unit), over the current Gram matrix.

    Diagonalize, then try single coordinates (square-class rescale) and
    coordinate pairs; pairs are solved in the residue field first and the
    unit coordinate is lifted exactly through a square witness.
    """
    k = len(gram)
    if k == 1:
        d = gram[0][0]
        sc = square_class(ring, ring.mul(t, ring.inv(d)))
        if not sc.is_square:
            raise UniorthoError("1-dimensional representation mismatch")
        return (sc.witness,)
    q_transform, diag = diagonalize(BilinearForm(ring, gram))
    dvals = [diag.matrix[i][i] for i in range(k)]
    for i, d in enumerate(dvals):
        sc = square_class(ring, ring.mul(t, ring.inv(d)))
        if sc.is_square:
            v = tuple(sc.witness if l == i else ring.zero for l in range(k))
            return mat_vec(ring, q_transform.matrix, v)
    field = ring.residue_field
    tbar = ring.residue(t)
    for i in range(k):
        for j in range(i + 1, k):
            di, dj = dvals[i], dvals[j]
            dib, djb = ring.residue(di), ring.residue(dj)
            hit = None
            for xb in field.elements():
                xterm = field.mul(dib, field.mul(xb, xb))
                for yb in field.elements():
                    yterm = field.mul(djb, field.mul(yb, yb))
                    if field.add(xterm, yterm) == tbar:
                        hit = (xb, yb)
                        break
                if hit:
                    break
            if hit is None:
                continue
            xb, yb = hit
            if xb == field.zero:  # make i the unit coordinate
                i, j = j, i
                di, dj = dj, di
                xb, yb = yb, xb
            y = ring.lift(yb)
            c = ring.mul(ring.sub(t, ring.mul(dj, ring.mul(y, y))), ring.inv(di))
            sc = square_class(ring, c)
            if not sc.is_square:
                raise UniorthoError("pair representation lift failed")
            v = [ring.zero] * k
            v[i], v[j] = sc.witness, y
            return mat_vec(ring, q_transform.matrix, tuple(v))
    raise UniorthoError("no representing vector found; form should be universal")


def canonicalize(form: BilinearForm) -> tuple[CongruenceTransform, CanonicalForm]:
    """Explicit congruence P with P^T B P equal to the canonical matrix.

    The class parameter u is fixed first from the discriminant class;
    the basis realizing each target diagonal value is then built one
    vector at a time, splitting off the orthogonal complement of each
    found vector (valid because every target value is a unit).
    """
    _require_canonicalizable(form)
    ring, n = form.ring, form.n
    u = ring.one if discriminant_class(form).is_square else canonical_nonsquare(ring)
    target = canonical_matrix(ring, n, u)
    canonical = CanonicalForm(ring, n, u)
    if form.matrix == target:
        return CongruenceTransform(ring, mat_identity(ring, n)), canonical
    targets = [target[i][i] for i in range(n)]
    embed = mat_identity(ring, n)  # n x k: current subspace basis, original coords
    gram = form.matrix
    columns: list[tuple] = []
    for step, t in enumerate(targets):
        k = len(gram)
        v = _find_value_vector(ring, gram, t)
        got = reduce(
            ring.add,
            (
                ring.mul(v[a], ring.mul(gram[a][bq], v[bq]))
                for a in range(k)
                for bq in range(k)
            ),
            ring.zero,
        )
        if got != t:
            raise UniorthoError("representation verification failed")
        columns.append(mat_vec(ring, embed, v))
        if step == n - 1:
            break
        # orthogonal complement of v inside the current subspace
        gv = mat_vec(ring, gram, v)  # beta(e_j, v) for the current basis
        pivot = next(i for i in range(k) if ring.is_unit(v[i]))
        tinv = ring.inv(t)
        wcols = []
        for j in range(k):
            if j == pivot:
                continue
            coef = ring.neg(ring.mul(tinv, gv[j]))
            w = tuple(
                ring.add(ring.one if l == j else ring.zero, ring.mul(coef, v[l]))
                for l in range(k)
            )
            wcols.append(w)
        wmat = mat_transpose(tuple(wcols))  # k x (k-1)
        embed = mat_mul(ring, embed, wmat)
        gram = mat_mul(ring, mat_mul(ring, mat_transpose(wmat), gram), wmat)
    pmat = mat_transpose(tuple(columns))
    if apply_congruence(form, pmat).matrix != target:
        raise UniorthoError("canonicalization verification failed")
    return CongruenceTransform(ring, pmat), canonical


def are_equivalent(f1: BilinearForm, f2: BilinearForm) -> bool:
    """Equivalence via canonical parameters (same n, same u)."""
    if f1.ring != f2.ring:
        raise MixedRings("forms live over different rings")
    if f1.n != f2.n:
        return False
    _, c1 = canonicalize(f1)
    _, c2 = canonicalize(f2)
    return c1.u == c2.u


def are_equivalent_exhaustive(
    f1: BilinearForm, f2: BilinearForm, max_card: int | None = None
) -> bool:
    """Oracle mode: scan every invertible P for P^T B1 P = B2.

    Only viable on tiny rings (|R|^(n^2) candidate matrices)."""
    if f1.ring != f2.ring:
        raise MixedRings("forms live over different rings")
    if f1.n != f2.n:
        return False
    ring, n = f1.ring, f1.n
    bound = DEFAULT_ENUMERATION_BOUND if max_card is None else max_card
    total = ring.cardinality ** (n * n)
    if total > bound:
        raise TooLarge(f"{total} candidate matrices exceed bound {bound}")
    elems = ring.elements(max_card)
    for flat in itertools.product(elems, repeat=n * n):
        p = tuple(flat[i * n : (i + 1) * n] for i in range(n))
        if not ring.is_unit(mat_det(ring, p)):
            continue
        if apply_congruence(f1, p).matrix == f2.matrix:
            return True
    return False


# ---------------------------------------------------------------------------
# literals


def format_matrix(ring: LocalRing, m: Matrix) -> str:
    return ";".join(",".join(ring.format_element(c) for c in row) for row in m)


def parse_matrix(ring: LocalRing, text: str) -> Matrix:
    rows = [r for r in text.strip().split(";") if r.strip()]
    matrix = tuple(
        tuple(ring.parse_element(part) for part in split_top_level(row))
        for row in rows
    )
    n = len(matrix)
    if n < 1 or any(len(row) != n for row in matrix):
        raise DimensionMismatch(f"matrix literal {text!r} is not square")
    return matrix
