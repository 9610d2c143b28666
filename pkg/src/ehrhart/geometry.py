"""Rational polytopes in vertex form, facet descriptions, and lifted cones.

A polytope is just its ambient dimension plus a tuple of rational vertices.
The facet machinery works in an affine chart of the vertex hull so that
membership and (relative) interior tests are exact for lower-dimensional
polytopes too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from . import linalg
from .errors import DimensionError, PreconditionError
from .linalg import IntVec, RatMat, RatVec


@dataclass(frozen=True)
class Polytope:
    ambient_dim: int
    vertices: tuple[RatVec, ...]

    def __post_init__(self):
        if self.ambient_dim < 1:
            raise DimensionError("ambient dimension must be >= 1")
        if not self.vertices:
            raise DimensionError("a polytope needs at least one vertex")
        for v in self.vertices:
            if len(v) != self.ambient_dim:
                raise DimensionError(
                    f"vertex {v} does not have dimension {self.ambient_dim}"
                )
        if len(set(self.vertices)) != len(self.vertices):
            raise PreconditionError("duplicate vertices are not allowed")


def polytope(rows, ambient_dim: int | None = None) -> Polytope:
    """Build a polytope from an iterable of coordinate rows."""
    verts = tuple(linalg.ratvec(r) for r in rows)
    if ambient_dim is None:
        if not verts:
            raise DimensionError("cannot infer dimension from no vertices")
        ambient_dim = len(verts[0])
    return Polytope(ambient_dim, verts)


@dataclass(frozen=True)
class Cone:
    ambient_dim: int
    generators: tuple[IntVec, ...]

    def __post_init__(self):
        for g in self.generators:
            if len(g) != self.ambient_dim:
                raise DimensionError(f"generator {g} has wrong dimension")
            if all(x == 0 for x in g):
                raise PreconditionError("zero vector cannot generate a cone")


@dataclass(frozen=True)
class FacetInequality:
    """Half-space ``<normal, x> <= offset`` with a primitive integer normal."""

    normal: IntVec
    offset: Fraction


@dataclass(frozen=True)
class _Chart:
    """Affine coordinates on the hull of a vertex set.

    ``base + sum_j lam_j * cols[j]`` parametrizes the affine hull; ``pivot_rows``
    select an invertible square subsystem whose inverse recovers ``lam`` from a
    point, and the remaining rows give the consistency (hull-membership)
    equalities.
    """

    base: RatVec
    cols: tuple[RatVec, ...]
    pivot_rows: tuple[int, ...]
    inv: RatMat

    @property
    def dim(self) -> int:
        return len(self.cols)

    def local(self, point) -> RatVec | None:
        """Chart coordinates of ``point``, or None if outside the hull."""
        diff = linalg.vsub(point, self.base)
        if not self.cols:
            return () if linalg.is_zero(diff) else None
        lam = linalg.mat_vec(self.inv, tuple(diff[i] for i in self.pivot_rows))
        for j in range(len(self.base)):
            if linalg.dot(tuple(c[j] for c in self.cols), lam) != diff[j]:
                return None
        return lam


@lru_cache(maxsize=None)
def chart(p: Polytope) -> _Chart:
    base = p.vertices[0]
    diffs = [linalg.vsub(v, base) for v in p.vertices[1:]]
    keep = linalg.independent_rows(diffs)
    cols = tuple(diffs[i] for i in keep)
    if not cols:
        return _Chart(base, (), (), ())
    rows_of_matrix = [tuple(c[j] for c in cols) for j in range(p.ambient_dim)]
    pivot_rows = tuple(linalg.independent_rows(rows_of_matrix)[: len(cols)])
    square = tuple(rows_of_matrix[i] for i in pivot_rows)
    return _Chart(base, cols, pivot_rows, linalg.mat_inverse(square))


def affine_dim(p: Polytope) -> int:
    """Dimension of the affine hull of the vertex set."""
    return chart(p).dim


def minimal_dilation(p: Polytope) -> int:
    """Least positive integer whose dilate has all-integer vertices."""
    return linalg.lcm_den(x for v in p.vertices for x in v)


def cone_over(p: Polytope, dilation: int) -> Cone:
    """Cone in one higher dimension generated by the lifted, scaled vertices."""
    if dilation < 1 or dilation % minimal_dilation(p) != 0:
        raise PreconditionError(
            f"dilation {dilation} does not make the polytope integral "
            f"(needs a multiple of {minimal_dilation(p)})"
        )
    gens: list[IntVec] = []
    for v in p.vertices:
        g = linalg.intvec((dilation,) + tuple(dilation * x for x in v))
        if g not in gens:
            gens.append(g)
    return Cone(p.ambient_dim + 1, tuple(gens))


@lru_cache(maxsize=None)
def hrep_from_vrep(p: Polytope) -> tuple[FacetInequality, ...]:
    """Irredundant facet inequalities of a full-dimensional polytope.

    Every d-subset of vertices spanning a hyperplane is a facet candidate;
    it is kept iff all vertices lie weakly on one side.  Each kept candidate
    contains d affinely independent vertices, hence really is a facet, so no
    redundancy pass is needed.  O(m^d) is fine at the intended input sizes.
    """
    d = p.ambient_dim
    if affine_dim(p) != d:
        raise DimensionError(
            f"polytope has affine dimension {affine_dim(p)} in ambient {d}; "
            "facet enumeration requires full dimension"
        )
    seen = set()
    facets = []
    for subset in combinations(p.vertices, d):
        diffs = [linalg.vsub(v, subset[0]) for v in subset[1:]]
        if linalg.rank_of(diffs) != d - 1:
            continue
        normal = _hyperplane_normal(diffs, d)
        if normal is None:
            continue
        offset = linalg.dot(normal, subset[0])
        side_le = all(linalg.dot(normal, v) <= offset for v in p.vertices)
        side_ge = all(linalg.dot(normal, v) >= offset for v in p.vertices)
        if side_le:
            key = (normal, offset)
        elif side_ge:
            key = (tuple(-x for x in normal), -offset)
        else:
            continue
        if key not in seen:
            seen.add(key)
            facets.append(FacetInequality(key[0], key[1]))
    facets.sort(key=lambda f: (f.normal, f.offset))
    return tuple(facets)


def _hyperplane_normal(diffs, dim) -> IntVec | None:
    span = [linalg.primitive_vector(u) for u in diffs]
    for j in range(dim):
        axis = tuple(Fraction(int(i == j)) for i in range(dim))
        try:
            return linalg.primitive_normal(span, axis)
        except linalg.RankError:
            continue
    return None


LinearForm = tuple[RatVec, Fraction]


@lru_cache(maxsize=None)
def facet_system(p: Polytope) -> tuple[tuple[LinearForm, ...], tuple[LinearForm, ...]]:
    """Exact membership system ``(equalities, inequalities)`` for any dimension.

    A point x lies in the polytope iff ``<c, x> == r`` for every equality and
    ``<c, x> <= r`` for every inequality; it lies in the relative interior iff
    the inequalities hold strictly.  For lower-dimensional polytopes the
    equalities pin the affine hull and the inequalities come from the facet
    description of the chart image.
    """
    d = p.ambient_dim
    ch = chart(p)
    if ch.dim == d:
        ineqs = tuple(
            (linalg.ratvec(f.normal), f.offset) for f in hrep_from_vrep(p)
        )
        return (), ineqs
    equalities: list[LinearForm] = []
    pivot = set(ch.pivot_rows)
    for j in range(d):
        if j in pivot:
            continue
        coeffs = [Fraction(0)] * d
        coeffs[j] = Fraction(1)
        if ch.cols:
            # x_j - <r_j, x_pivot> is constant on the hull
            r_j = tuple(
                sum((ch.cols[c][j] * ch.inv[c][k] for c in range(ch.dim)), Fraction(0))
                for k in range(ch.dim)
            )
            for k, row in enumerate(ch.pivot_rows):
                coeffs[row] -= r_j[k]
        rhs = linalg.dot(coeffs, ch.base)
        equalities.append((tuple(coeffs), rhs))
    inequalities: list[LinearForm] = []
    if ch.dim > 0:
        local_poly = polytope(
            [ch.local(v) for v in p.vertices], ambient_dim=ch.dim
        )
        for f in hrep_from_vrep(local_poly):
            alpha_inv = linalg.mat_vec(
                linalg.transpose(ch.inv), linalg.ratvec(f.normal)
            )
            coeffs = [Fraction(0)] * d
            for k, row in enumerate(ch.pivot_rows):
                coeffs[row] = alpha_inv[k]
            rhs = f.offset + linalg.dot(coeffs, ch.base)
            inequalities.append((tuple(coeffs), rhs))
    return tuple(equalities), tuple(inequalities)


def contains_point(p: Polytope, point, strict: bool = False) -> bool:
    """Exact membership test; ``strict`` means relative interior."""
    point = linalg.ratvec(point)
    if len(point) != p.ambient_dim:
        raise DimensionError("point dimension mismatch")
    eqs, ineqs = facet_system(p)
    for coeffs, rhs in eqs:
        if linalg.dot(coeffs, point) != rhs:
            return False
    for coeffs, rhs in ineqs:
        val = linalg.dot(coeffs, point)
        if val > rhs or (strict and val == rhs):
            return False
    return True


def contains_polytope(q: Polytope, p: Polytope) -> bool:
    """True iff every vertex of ``p`` lies in ``q`` (convexity suffices)."""
    if q.ambient_dim != p.ambient_dim:
        raise DimensionError("containment requires equal ambient dimensions")
    return find_violating_vertex(q, p) is None


def find_violating_vertex(q: Polytope, p: Polytope) -> RatVec | None:
    for v in p.vertices:
        if not contains_point(q, v):
            return v
    return None


def bounding_box_polytope(p: Polytope) -> Polytope:
    """Axis-aligned bounding box of the vertex set, as a polytope."""
    los = [min(v[j] for v in p.vertices) for j in range(p.ambient_dim)]
    his = [max(v[j] for v in p.vertices) for j in range(p.ambient_dim)]
    corners: list[RatVec] = []
    for mask in range(1 << p.ambient_dim):
        c = tuple(
            his[j] if mask >> j & 1 else los[j] for j in range(p.ambient_dim)
        )
        if c not in corners:
            corners.append(c)
    return Polytope(p.ambient_dim, tuple(corners))
