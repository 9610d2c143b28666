"""Placing triangulation of a pointed rational cone.

Generators are inserted in the given order.  A generator inside the current
cone adds nothing; a generator outside gets joined to every boundary facet it
can see; a generator outside the current linear span is joined to every cell.
Cells therefore only ever use input generators, insertion is deterministic,
and the cells built from the first k generators always triangulate the cone
over those k generators (the prefix property).

All sign tests run in exact chart coordinates of the current linear span, so
cones of any rank embedded in any ambient dimension are handled uniformly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from . import linalg
from .errors import GeometryError
from .geometry import Cone
from .linalg import IntVec


@dataclass(frozen=True)
class SimplicialCone:
    """A linearly independent subset of the parent cone's generators."""

    generators: tuple[IntVec, ...]
    indices: tuple[int, ...]


@dataclass(frozen=True)
class Triangulation:
    parent: Cone
    cells: tuple[SimplicialCone, ...]
    boundary_normals: tuple[IntVec, ...]
    wall_normals: tuple[IntVec, ...]
    rank: int
    unused: tuple[int, ...]


def is_pointed(generators) -> bool:
    """Exact pointedness test: the origin is no convex combination of generators.

    By Caratheodory a witness combination can be taken over at most rank+1
    generators, so exhausting small subsets is complete and cheap at the
    sizes this package targets.
    """
    gens = [linalg.ratvec(g) for g in generators]
    if not gens:
        return True
    r = linalg.rank_of(gens)
    n = len(gens)
    for size in range(2, min(r + 1, n) + 1):
        for subset in combinations(range(n), size):
            cols = [gens[i] for i in subset]
            rows = [tuple(c[j] for c in cols) for j in range(len(gens[0]))]
            rows.append((Fraction(1),) * size)
            keep = linalg.independent_rows(rows)
            if len(keep) != size:
                continue
            square = [rows[i] for i in keep]
            rhs = [Fraction(0)] * len(rows)
            rhs[-1] = Fraction(1)
            try:
                lam = linalg.solve_unique(square, [rhs[i] for i in keep])
            except linalg.SingularMatrixError:
                continue
            if any(linalg.dot(rows[j], lam) != rhs[j] for j in range(len(rows))):
                continue
            if all(l >= 0 for l in lam):
                return False
    return True


class _SpanChart:
    """Coordinates of generators inside the span of a growing basis."""

    def __init__(self, dim: int):
        self.dim = dim
        self.basis: list[IntVec] = []
        self.pivot_rows: list[int] = []
        self.inv: linalg.RatMat = ()

    def extend(self, g: IntVec):
        self.basis.append(g)
        rows = [
            tuple(Fraction(b[j]) for b in self.basis) for j in range(self.dim)
        ]
        self.pivot_rows = linalg.independent_rows(rows)[: len(self.basis)]
        self.inv = linalg.mat_inverse([rows[i] for i in self.pivot_rows])

    def coords(self, g) -> tuple[Fraction, ...] | None:
        """Span coordinates of g, or None if g is outside the span."""
        if not self.basis:
            return None
        lam = linalg.mat_vec(self.inv, tuple(Fraction(g[i]) for i in self.pivot_rows))
        for j in range(self.dim):
            if linalg.dot(tuple(Fraction(b[j]) for b in self.basis), lam) != g[j]:
                return None
        return lam


def _orient(co: dict[int, tuple[Fraction, ...]], ridge: tuple[int, ...], idx: int) -> int:
    rows = [co[i] for i in ridge] + [co[idx]]
    det = linalg.determinant(rows)
    return (det > 0) - (det < 0)


def _boundary_ridges(cells: list[tuple[int, ...]]):
    """Map ridge -> owning cell for ridges lying in exactly one cell."""
    seen: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for cell in cells:
        for drop in cell:
            ridge = tuple(i for i in cell if i != drop)
            seen.setdefault(ridge, []).append(cell)
    return {r: owners[0] for r, owners in seen.items() if len(owners) == 1}


def placing_triangulation(generators) -> Triangulation:
    gens = tuple(linalg.intvec(g) for g in generators)
    if not gens:
        raise GeometryError("no generators")
    dim = len(gens[0])
    parent = Cone(dim, gens)
    if not is_pointed(gens):
        raise GeometryError("generators span a non-pointed cone")

    chart = _SpanChart(dim)
    co: dict[int, tuple[Fraction, ...]] = {}
    cells: list[tuple[int, ...]] = []
    unused: list[int] = []
    for idx, g in enumerate(gens):
        lam = chart.coords(g)
        if lam is None:
            chart.extend(g)
            co = {}
            for j in range(idx + 1):
                c = chart.coords(gens[j])
                if c is not None:
                    co[j] = c
            if cells:
                cells = [cell + (idx,) for cell in cells]
            else:
                cells = [(idx,)]
            continue
        co[idx] = lam
        new_cells = []
        on_boundary = _boundary_ridges(cells)
        for ridge in sorted(on_boundary):
            owner = on_boundary[ridge]
            other = next(i for i in owner if i not in ridge)
            s_new = _orient(co, ridge, idx)
            if s_new != 0 and s_new == -_orient(co, ridge, other):
                new_cells.append(tuple(sorted(ridge + (idx,))))
        if new_cells:
            cells.extend(new_cells)
        else:
            unused.append(idx)

    rank = len(chart.basis)
    cell_objs = tuple(
        SimplicialCone(tuple(gens[i] for i in cell), cell) for cell in cells
    )
    boundary, walls = _normals(gens, cells, rank)
    return Triangulation(parent, cell_objs, boundary, walls, rank, tuple(unused))


def _ridge_normal(gens, ridge: tuple[int, ...], other: int) -> IntVec:
    """Primitive normal of a cell facet, oriented toward the cell."""
    if ridge:
        return linalg.primitive_normal([gens[i] for i in ridge], gens[other])
    return linalg.primitive_vector(gens[other])


def _normals(gens, cells: list[tuple[int, ...]], rank: int):
    boundary: list[IntVec] = []
    on_boundary = _boundary_ridges(cells)
    for ridge in sorted(on_boundary):
        owner = on_boundary[ridge]
        other = next(i for i in owner if i not in ridge)
        n = _ridge_normal(gens, ridge, other)
        assert all(linalg.dot(n, g) >= 0 for g in gens), "boundary normal not supporting"
        if n not in boundary:
            boundary.append(n)
    walls: set[IntVec] = set()
    for cell in cells:
        for drop in cell:
            ridge = tuple(i for i in cell if i != drop)
            walls.add(linalg.canonical_sign(_ridge_normal(gens, ridge, drop)))
    return tuple(sorted(boundary)), tuple(sorted(walls))


def collect_normals(t: Triangulation) -> tuple[tuple[IntVec, ...], tuple[IntVec, ...]]:
    """Inner facet normals of the parent cone, and all cell-facet normals."""
    return t.boundary_normals, t.wall_normals


def cell_membership(cell: SimplicialCone, point) -> str:
    """Classify a rational point as 'interior', 'boundary', or 'outside'."""
    point = linalg.ratvec(point)
    cols = [linalg.ratvec(g) for g in cell.generators]
    rows = [tuple(c[j] for c in cols) for j in range(len(point))]
    keep = linalg.independent_rows(rows)[: len(cols)]
    lam = linalg.solve_unique([rows[i] for i in keep], [point[i] for i in keep])
    for j in range(len(point)):
        if linalg.dot(rows[j], lam) != point[j]:
            return "outside"
    if any(l < 0 for l in lam):
        return "outside"
    return "boundary" if any(l == 0 for l in lam) else "interior"


def cell_lattice_index(cell: SimplicialCone) -> int:
    """Number of lattice points in a generically shifted half-open cell.

    Equals |det| of the generator matrix when the cell is full-dimensional;
    in general it is the gcd of the maximal minors of the generator matrix,
    i.e. the index of the generator lattice inside the ambient lattice
    restricted to the cell's span.
    """
    cols = cell.generators
    r = len(cols)
    dim = len(cols[0])
    minors = []
    for rows in combinations(range(dim), r):
        sub = [[Fraction(c[i]) for c in cols] for i in rows]
        d = linalg.determinant(sub)
        minors.append(abs(d.numerator))
    g = math.gcd(*minors) if minors else 0
    if g == 0:
        raise GeometryError("cell generators are linearly dependent")
    return g


def triangulation_index_sum(t: Triangulation) -> int:
    """Sum of cell lattice indices; an order-invariant normalized volume."""
    return sum(cell_lattice_index(c) for c in t.cells)
