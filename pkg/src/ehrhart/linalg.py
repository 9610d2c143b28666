"""Exact rational linear algebra on immutable tuples.

Vectors are tuples of ``fractions.Fraction`` (or plain ``int`` for lattice
vectors), matrices are tuples of row tuples.  Everything is a pure function
over immutable values and exact: no floating point enters anywhere.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Sequence

from .errors import DimensionError, RankError, SingularMatrixError

Rat = Fraction
RatVec = tuple[Fraction, ...]
IntVec = tuple[int, ...]
RatMat = tuple[tuple[Fraction, ...], ...]

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def rat(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def ratvec(xs) -> RatVec:
    return tuple(rat(x) for x in xs)


def intvec(xs) -> IntVec:
    out = []
    for x in xs:
        f = rat(x)
        if f.denominator != 1:
            raise DimensionError(f"integer vector entry {f} is not an integer")
        out.append(f.numerator)
    return tuple(out)


def zero_vec(dim: int) -> RatVec:
    return (Fraction(0),) * dim


def dot(u: Sequence, v: Sequence) -> Fraction:
    if len(u) != len(v):
        raise DimensionError(f"dot of vectors with dims {len(u)} and {len(v)}")
    return sum((rat(a) * b for a, b in zip(u, v)), Fraction(0))


def vadd(u, v):
    if len(u) != len(v):
        raise DimensionError("vector addition with mismatched dims")
    return tuple(rat(a) + b for a, b in zip(u, v))


def vsub(u, v):
    if len(u) != len(v):
        raise DimensionError("vector subtraction with mismatched dims")
    return tuple(rat(a) - b for a, b in zip(u, v))


def vscale(c, v):
    c = rat(c)
    return tuple(c * x for x in v)


def vneg(v):
    return tuple(-rat(x) for x in v)


def is_zero(v) -> bool:
    return all(x == 0 for x in v)


def mat(rows) -> RatMat:
    m = tuple(ratvec(r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise DimensionError("ragged matrix rows")
    return m


def mat_vec(m: RatMat, v) -> RatVec:
    return tuple(dot(row, v) for row in m)


def transpose(m) -> RatMat:
    return tuple(zip(*m)) if m else ()


def identity(n: int) -> RatMat:
    return tuple(
        tuple(Fraction(1) if i == j else Fraction(0) for j in range(n)) for i in range(n)
    )


def lcm_den(xs) -> int:
    """Least common multiple of the denominators of the given rationals."""
    out = 1
    for x in xs:
        out = math.lcm(out, rat(x).denominator)
    return out


def _integer_rows(m: RatMat) -> tuple[list[list[int]], Fraction]:
    """Scale each row to integers; return rows and the product of scales."""
    rows = []
    scale = Fraction(1)
    for row in m:
        l = lcm_den(row)
        rows.append([int(x * l) for x in row])
        scale *= l
    return rows, scale


def determinant(m) -> Fraction:
    """Exact determinant by fraction-free (Bareiss) elimination.

    Rows are first scaled to integers; the integer elimination keeps all
    intermediate entries as minors of the scaled matrix, bounding growth.
    """
    m = mat(m)
    n = len(m)
    if n == 0 or any(len(row) != n for row in m):
        raise DimensionError("determinant requires a nonempty square matrix")
    a, scale = _integer_rows(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return Fraction(sign * a[n - 1][n - 1]) / scale


def solve_unique(m, b) -> RatVec:
    """Exact solution of ``m @ x == b`` for square nonsingular ``m``.

    Fraction-free forward elimination on the integer-scaled augmented
    matrix, then exact back substitution.
    """
    m = mat(m)
    n = len(m)
    if n == 0 or any(len(row) != n for row in m):
        raise DimensionError("solve_unique requires a square matrix")
    b = ratvec(b)
    if len(b) != n:
        raise DimensionError(f"rhs dim {len(b)} does not match matrix size {n}")
    aug, _ = _integer_rows(tuple(row + (bi,) for row, bi in zip(m, b)))
    prev = 1
    for k in range(n - 1):
        if aug[k][k] == 0:
            for i in range(k + 1, n):
                if aug[i][k] != 0:
                    aug[k], aug[i] = aug[i], aug[k]
                    break
            else:
                raise SingularMatrixError("matrix is singular")
        for i in range(k + 1, n):
            for j in range(k + 1, n + 1):
                aug[i][j] = (aug[i][j] * aug[k][k] - aug[i][k] * aug[k][j]) // prev
            aug[i][k] = 0
        prev = aug[k][k]
    if aug[n - 1][n - 1] == 0:
        raise SingularMatrixError("matrix is singular")
    x: list[Fraction] = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(aug[i][n])
        for j in range(i + 1, n):
            s -= aug[i][j] * x[j]
        x[i] = s / aug[i][i]
    return tuple(x)


def mat_inverse(m) -> RatMat:
    m = mat(m)
    n = len(m)
    cols = [solve_unique(m, tuple(Fraction(int(i == j)) for i in range(n))) for j in range(n)]
    return transpose(cols)


def independent_rows(rows: Sequence[Sequence]) -> list[int]:
    """Indices of a maximal linearly independent subset, scanned in order."""
    kept: list[int] = []
    reduced: list[list[Fraction]] = []
    pivots: list[int] = []
    for idx, row in enumerate(rows):
        work = [rat(x) for x in row]
        for r, p in zip(reduced, pivots):
            if work[p] != 0:
                c = work[p] / r[p]
                for j in range(len(work)):
                    work[j] -= c * r[j]
        for p in range(len(work)):
            if work[p] != 0:
                kept.append(idx)
                reduced.append(work)
                pivots.append(p)
                break
    return kept


def rank_of(rows) -> int:
    return len(independent_rows(rows))


def primitive_vector(v) -> IntVec:
    """Scale a nonzero rational vector to its primitive integer multiple."""
    v = ratvec(v)
    if is_zero(v):
        raise RankError("zero vector has no primitive form")
    l = lcm_den(v)
    ints = [int(x * l) for x in v]
    g = math.gcd(*ints)
    return tuple(x // g for x in ints)


def canonical_sign(v: IntVec) -> IntVec:
    """Flip sign so the first nonzero entry is positive."""
    for x in v:
        if x != 0:
            return v if x > 0 else tuple(-y for y in v)
    return v


def primitive_normal(span: Sequence[Sequence], orient_toward: Sequence) -> IntVec:
    """Primitive integer vector orthogonal to ``span``, positive on ``orient_toward``.

    Computed as the Gram-Schmidt residual of the orientation vector against
    the span, which keeps the normal inside the linear span of the inputs
    (needed when the surrounding cone is not full-dimensional).
    """
    dim = len(orient_toward)
    basis: list[RatVec] = []
    for u in span:
        if len(u) != dim:
            raise DimensionError("span vector dimension mismatch")
        w = ratvec(u)
        for b in basis:
            w = vsub(w, vscale(dot(w, b) / dot(b, b), b))
        if is_zero(w):
            raise RankError("span vectors are linearly dependent")
        basis.append(w)
    r = ratvec(orient_toward)
    for b in basis:
        r = vsub(r, vscale(dot(r, b) / dot(b, b), b))
    if is_zero(r):
        raise RankError("orientation vector lies in the span")
    return primitive_vector(r)


def parse_rational(text: str) -> Fraction:
    """Parse the exact text form ``p`` or ``p/q`` (q positive)."""
    if not _RATIONAL_RE.match(text):
        raise ValueError(f"not a rational literal: {text!r}")
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise ValueError(f"zero denominator: {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(x) -> str:
    """Render a rational in the same ``p`` / ``p/q`` form parsed above."""
    return str(rat(x))
