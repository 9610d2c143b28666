"""Exact lattice-point enumeration.

Two consumers share one engine: shifted half-open parallelepipeds (the
numerator atoms of the cone generating functions) and the brute-force
dilation oracle that everything else is validated against.

The engine scans an integer bounding box against integer-form linear
constraints.  Small boxes use the direct Fraction-free pure-Python test;
larger boxes switch to a chunked int64 evaluation whose safety margin is
proved with exact integer arithmetic first, so both paths are exact and can
be cross-checked against each other.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from . import linalg
from .errors import PreconditionError, SingularMatrixError
from .geometry import Polytope, facet_system
from .linalg import IntVec, RatVec
from .quasipoly import QuasiPolynomial, interpolate_constituents

_PURE_SCAN_LIMIT = 4096
_NUMPY_CHUNK = 1 << 20
_INT64_SAFE = (1 << 62) - 1

# 'le': <coeffs, z> <= rhs;  'eq': <coeffs, z> == rhs.  All entries integers.
Constraint = tuple[IntVec, int, str]


def le_constraint(coeffs: RatVec, rhs: Fraction) -> Constraint:
    """Integer form of ``<coeffs, z> <= rhs`` valid for integer points z."""
    scale = linalg.lcm_den(coeffs)
    a = tuple(int(c * scale) for c in coeffs)
    return a, math.floor(rhs * scale), "le"


def lt_constraint(coeffs: RatVec, rhs: Fraction) -> Constraint:
    """Integer form of the strict ``<coeffs, z> < rhs``."""
    scale = linalg.lcm_den(coeffs)
    a = tuple(int(c * scale) for c in coeffs)
    bound = rhs * scale
    return a, math.ceil(bound) - 1, "le"


def eq_constraint(coeffs: RatVec, rhs: Fraction) -> Constraint | None:
    """Integer form of ``<coeffs, z> == rhs``; None when unsatisfiable."""
    scale = linalg.lcm_den(coeffs)
    a = tuple(int(c * scale) for c in coeffs)
    b = rhs * scale
    if b.denominator != 1:
        return None
    return a, int(b), "eq"


def scan_box(lo: IntVec, hi: IntVec, constraints) -> list[IntVec]:
    """All integer points of the box satisfying every constraint, in lex order."""
    if any(l > h for l, h in zip(lo, hi)):
        return []
    total = math.prod(h - l + 1 for l, h in zip(lo, hi))
    if total <= _PURE_SCAN_LIMIT or not _int64_safe(lo, hi, constraints):
        return _scan_pure(lo, hi, constraints)
    return _scan_numpy(lo, hi, constraints)


def _scan_pure(lo, hi, constraints):
    out = []
    for z in product(*(range(l, h + 1) for l, h in zip(lo, hi))):
        ok = True
        for a, b, kind in constraints:
            v = sum(ai * zi for ai, zi in zip(a, z))
            if (v != b) if kind == "eq" else (v > b):
                ok = False
                break
        if ok:
            out.append(z)
    return out


def _int64_safe(lo, hi, constraints) -> bool:
    for a, b, _ in constraints:
        bound = sum(max(abs(ai * l), abs(ai * h)) for ai, l, h in zip(a, lo, hi))
        if bound + abs(b) > _INT64_SAFE:
            return False
    return True


def _scan_numpy(lo, hi, constraints):
    dim = len(lo)
    extents = [h - l + 1 for l, h in zip(lo, hi)]
    split = 0
    while split < dim - 1 and math.prod(extents[split:]) > _NUMPY_CHUNK:
        split += 1
    tail_ranges = [np.arange(lo[j], hi[j] + 1, dtype=np.int64) for j in range(split, dim)]
    grids = np.meshgrid(*tail_ranges, indexing="ij")
    pts = np.stack([g.ravel() for g in grids])
    out: list[IntVec] = []
    for head in product(*(range(lo[j], hi[j] + 1) for j in range(split))):
        mask = np.ones(pts.shape[1], dtype=bool)
        for a, b, kind in constraints:
            vals = sum(int(a[j]) * int(h) for j, h in zip(range(split), head))
            vals = vals + np.asarray(a[split:], dtype=np.int64) @ pts
            mask &= (vals == b) if kind == "eq" else (vals <= b)
            if not mask.any():
                break
        if mask.any():
            sel = pts[:, mask]
            out.extend(head + tuple(int(x) for x in sel[:, k]) for k in range(sel.shape[1]))
    return out


@dataclass(frozen=True)
class HalfOpenParallelepiped:
    """Points ``shift + W @ lam`` with every lam_k in [0, 1).

    ``columns`` are the integer generators; they may number fewer than the
    ambient dimension, in which case membership additionally requires the
    point to lie on the shifted span.
    """

    shift: RatVec
    columns: tuple[IntVec, ...]


@dataclass(frozen=True)
class GradedPoints:
    points: tuple[IntVec, ...]
    grading: tuple[tuple[int, int], ...]  # (first coordinate, count), sorted

    @property
    def count(self) -> int:
        return len(self.points)


def graded(points) -> GradedPoints:
    counts = Counter(z[0] for z in points)
    return GradedPoints(tuple(points), tuple(sorted(counts.items())))


def parallelepiped_points(pp: HalfOpenParallelepiped) -> GradedPoints:
    """Exact integer points of a shifted half-open parallelepiped.

    Scans the integer bounding box of the cell and keeps points whose
    generator coordinates all lie in [0, 1), everything in integer form.
    """
    cols = tuple(linalg.intvec(c) for c in pp.columns)
    shift = linalg.ratvec(pp.shift)
    r = len(cols)
    dim = len(shift)
    rows = [tuple(Fraction(c[j]) for c in cols) for j in range(dim)]
    pivots = linalg.independent_rows(rows)[:r]
    if len(pivots) < r:
        raise SingularMatrixError("parallelepiped generators are linearly dependent")
    inv = linalg.mat_inverse([rows[i] for i in pivots])

    constraints: list[Constraint] = []
    # 0 <= lam_k < 1 for lam = inv @ (z - shift) restricted to pivot rows
    for k in range(r):
        coeffs = [Fraction(0)] * dim
        for t, j in enumerate(pivots):
            coeffs[j] = inv[k][t]
        base_val = linalg.dot(coeffs, shift)
        constraints.append(le_constraint(linalg.vneg(coeffs), -base_val))
        constraints.append(lt_constraint(tuple(coeffs), base_val + 1))
    # consistency of the non-pivot rows: z stays on the shifted span
    pivot_set = set(pivots)
    for j in range(dim):
        if j in pivot_set:
            continue
        coeffs = [Fraction(0)] * dim
        coeffs[j] = Fraction(1)
        r_j = tuple(
            sum((rows[j][c] * inv[c][t] for c in range(r)), Fraction(0))
            for t in range(r)
        )
        for t, pj in enumerate(pivots):
            coeffs[pj] -= r_j[t]
        c = eq_constraint(tuple(coeffs), linalg.dot(coeffs, shift))
        if c is None:
            return graded(())
        constraints.append(c)

    lo, hi = _cell_box(cols, shift)
    return graded(scan_box(lo, hi, constraints))


def _cell_box(cols, shift):
    dim = len(shift)
    lo, hi = [], []
    for j in range(dim):
        neg = sum(min(c[j], 0) for c in cols)
        pos = sum(max(c[j], 0) for c in cols)
        lo.append(math.ceil(shift[j] + neg))
        hi.append(math.floor(shift[j] + pos))
    return tuple(lo), tuple(hi)


def parallelepiped_capacity(columns) -> int:
    """Lattice points a generically shifted half-open cell must contain.

    gcd of the maximal minors of the generator matrix; |det| when square.
    Valid whenever the shifted span contains lattice points at all.
    """
    cols = tuple(linalg.intvec(c) for c in columns)
    r = len(cols)
    dim = len(cols[0])
    from itertools import combinations

    minors = [
        abs(linalg.determinant([[Fraction(c[i]) for c in cols] for i in rows]).numerator)
        for rows in combinations(range(dim), r)
    ]
    g = math.gcd(*minors)
    if g == 0:
        raise SingularMatrixError("parallelepiped generators are linearly dependent")
    return g


def dilation_constraints(p: Polytope, n: int, interior: bool) -> list[Constraint]:
    """Integer constraints describing ``z in n*P`` (or its relative interior)."""
    eqs, ineqs = facet_system(p)
    out: list[Constraint] = []
    for coeffs, rhs in eqs:
        c = eq_constraint(coeffs, n * rhs)
        if c is None:
            return [((0,) * p.ambient_dim, -1, "eq")]  # unsatisfiable
        out.append(c)
    for coeffs, rhs in ineqs:
        if interior:
            out.append(lt_constraint(coeffs, n * rhs))
        else:
            out.append(le_constraint(coeffs, n * rhs))
    return out


def dilation_box(p: Polytope, n: int):
    lo = tuple(
        math.ceil(n * min(v[j] for v in p.vertices)) for j in range(p.ambient_dim)
    )
    hi = tuple(
        math.floor(n * max(v[j] for v in p.vertices)) for j in range(p.ambient_dim)
    )
    return lo, hi


def oracle_count(p: Polytope, n: int, interior: bool = False) -> int:
    """Brute-force count of lattice points of the n-th dilate.

    ``interior`` counts the relative interior (for a point polytope that is
    the point itself).
    """
    if n < 1:
        raise PreconditionError("dilation factor must be positive")
    lo, hi = dilation_box(p, n)
    return len(scan_box(lo, hi, dilation_constraints(p, n, interior)))


def oracle_points(p: Polytope, n: int, interior: bool = False) -> list[IntVec]:
    lo, hi = dilation_box(p, n)
    return scan_box(lo, hi, dilation_constraints(p, n, interior))


def oracle_quasipolynomial(p: Polytope, period: int) -> QuasiPolynomial:
    """Interpolated count quasi-polynomial, entirely from brute-force counts.

    For each residue r the degree-<=D constituent is fixed by the D+1 sample
    dilations r + period, r + 2*period, ..., keeping every sample positive.
    """
    from .geometry import affine_dim, minimal_dilation

    if period < 1 or period % minimal_dilation(p) != 0:
        raise PreconditionError("period must make the dilated polytope integral")
    deg = affine_dim(p)
    samples = {}
    for r in range(period):
        pts = [r + k * period for k in range(1, deg + 2)]
        samples[r] = [(n, Fraction(oracle_count(p, n))) for n in pts]
    return interpolate_constituents(period, deg, samples)
