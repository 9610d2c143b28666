"""Ehrhart series, cone generating functions, and the theorem checkers.

The series pipeline lifts a polytope to its cone, triangulates, shifts by a
certified generic vector, and reads the numerator straight off the graded
lattice points of the shifted half-open cells.  The checkers compare that
numerator (and the quasi-polynomial it induces) against the brute-force
oracle and the exact rational-function identities.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import lattice, linalg, quasipoly, shift as shiftmod
from .errors import ContainmentError, PoleError, PreconditionError
from .geometry import (
    Cone,
    Polytope,
    affine_dim,
    cone_over,
    contains_polytope,
    find_violating_vertex,
    minimal_dilation,
)
from .lattice import GradedPoints, HalfOpenParallelepiped, parallelepiped_points
from .linalg import IntVec, RatVec
from .quasipoly import QuasiPolynomial, evaluate as eval_quasipolynomial
from .shift import INWARD, OUTWARD, ShiftSpec
from .triangulation import (
    Triangulation,
    cell_lattice_index,
    placing_triangulation,
)

import math


@dataclass(frozen=True)
class EhrhartSeries:
    """Numerator of ``1 + sum L(n) t^n`` over ``(1 - t^p)^(dim+1)``.

    The closed numerator has exactly ``(dim+1)*p`` coefficients; the interior
    variant (generating the relative-interior counts, with no constant term)
    carries one extra slot since its top degree may reach ``(dim+1)*p``.
    """

    period: int
    dim: int
    numerator: tuple[int, ...]
    denominator_exponent: int
    interior: bool


@dataclass(frozen=True)
class SeriesPipeline:
    series: EhrhartSeries
    cone: Cone
    triangulation: Triangulation
    shift: ShiftSpec
    cell_points: tuple[GradedPoints, ...]


def _validated_period(p: Polytope, period: int) -> int:
    if period < 1 or period % minimal_dilation(p) != 0:
        raise PreconditionError(
            f"period {period} does not make the polytope integral "
            f"(needs a multiple of {minimal_dilation(p)})"
        )
    return period


def ehrhart_series_pipeline(
    p: Polytope,
    period: int,
    interior: bool = False,
    *,
    workers: int = 1,
    extra_shrink: int = 0,
    seed: int = 0,
) -> SeriesPipeline:
    period = _validated_period(p, period)
    dim = affine_dim(p)
    cone = cone_over(p, period)
    tri = placing_triangulation(cone.generators)
    assert tri.rank == dim + 1
    direction = INWARD if interior else OUTWARD
    base = linalg.zero_vec(cone.ambient_dim)
    # keep |shift[0]| < 1 so the grading stays within the numerator window
    extra = extra_shrink
    while True:
        spec = shiftmod.choose_shift(tri, base, direction, extra_shrink=extra, seed=seed)
        if abs(spec.shift[0]) < 1:
            break
        extra += 1

    def cell_job(cell):
        pts = parallelepiped_points(HalfOpenParallelepiped(spec.shift, cell.generators))
        assert pts.count == cell_lattice_index(cell), "half-open cell miscounted"
        return pts

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            cell_points = tuple(pool.map(cell_job, tri.cells))
    else:
        cell_points = tuple(cell_job(c) for c in tri.cells)

    size = (dim + 1) * period + (1 if interior else 0)
    coeffs = [0] * size
    for pts in cell_points:
        for level, count in pts.grading:
            assert 0 <= level < size, "graded level outside numerator window"
            coeffs[level] += count
    if interior:
        assert coeffs[0] == 0, "interior numerator must have no constant term"
    else:
        assert coeffs[0] == 1, "closed numerator must start at 1"
    series = EhrhartSeries(period, dim, tuple(coeffs), dim + 1, interior)
    return SeriesPipeline(series, cone, tri, spec, cell_points)


def ehrhart_series(p: Polytope, period: int, interior: bool = False, workers: int = 1) -> EhrhartSeries:
    return ehrhart_series_pipeline(p, period, interior, workers=workers).series


def quasipolynomial_from_series(s: EhrhartSeries) -> QuasiPolynomial:
    """Exact constituents of the counting quasi-polynomial.

    Expanding the denominator gives, for n >= 1,
    ``L(n) = sum over i = n mod p of a_i * C((n - i)/p + dim, dim)``;
    grouping by residue class yields one polynomial per class.
    """
    base = quasipoly.binomial_coefficient_poly(s.dim)
    cons = []
    for r in range(s.period):
        total: quasipoly.Poly = (Fraction(0),)
        for i in range(r, len(s.numerator), s.period):
            if s.numerator[i] == 0:
                continue
            term = quasipoly.poly_compose_affine(
                base, Fraction(1, s.period), Fraction(-i, s.period)
            )
            total = quasipoly.poly_add(total, quasipoly.poly_scale(s.numerator[i], term))
        cons.append(quasipoly.poly_trim(total))
    return QuasiPolynomial(s.period, s.dim, tuple(cons))


@dataclass(frozen=True)
class ReciprocityReport:
    ok: bool
    period: int
    dim: int
    max_n: int
    failures: tuple[tuple[int, Fraction, Fraction, int], ...]  # n, reflected, interior, oracle


def check_reciprocity_ehrhart(p: Polytope, period: int, max_n: int) -> ReciprocityReport:
    """Count reciprocity: ``(-1)^dim L(-n)`` equals the interior count, n = 1..max_n."""
    period = _validated_period(p, period)
    dim = affine_dim(p)
    q_closed = quasipolynomial_from_series(ehrhart_series(p, period, interior=False))
    q_open = quasipolynomial_from_series(ehrhart_series(p, period, interior=True))
    sign = (-1) ** dim
    failures = []
    for n in range(1, max_n + 1):
        reflected = sign * eval_quasipolynomial(q_closed, -n)
        open_val = eval_quasipolynomial(q_open, n)
        oracle = lattice.oracle_count(p, n, interior=True)
        if not (reflected == open_val == oracle):
            failures.append((n, reflected, open_val, oracle))
    return ReciprocityReport(not failures, period, dim, max_n, tuple(failures))


@dataclass(frozen=True)
class PositivityReport:
    ok: bool
    period: int
    dim: int
    numerator: tuple[int, ...]
    cell_index_sum: int


def check_positivity(p: Polytope, period: int) -> PositivityReport:
    """Nonnegative-numerator check, plus the cell-count bookkeeping identity.

    Every coefficient is a count of lattice points by construction, so a
    failure here means an implementation bug rather than a counterexample;
    the checker still re-asserts it structurally.
    """
    pipe = ehrhart_series_pipeline(p, _validated_period(p, period))
    s = pipe.series
    index_sum = sum(cell_lattice_index(c) for c in pipe.triangulation.cells)
    ok = all(a >= 0 for a in s.numerator) and sum(s.numerator) == index_sum
    return PositivityReport(ok, s.period, s.dim, s.numerator, index_sum)


@dataclass(frozen=True)
class MonotonicityReport:
    ok: bool
    period: int
    numerator_inner: tuple[int, ...]
    numerator_outer: tuple[int, ...]
    first_violation: int | None


def check_monotonicity(p: Polytope, q: Polytope, period: int | None = None) -> MonotonicityReport:
    """Coefficientwise comparison of the two numerators for nested polytopes.

    Each numerator is taken over its own denominator exponent (dim + 1);
    the inner one is zero-padded to the outer length before comparing.
    """
    bad = find_violating_vertex(q, p)
    if bad is not None:
        raise ContainmentError(
            f"vertex {tuple(str(x) for x in bad)} of the inner polytope "
            "lies outside the outer polytope"
        )
    if period is None:
        period = math.lcm(minimal_dilation(p), minimal_dilation(q))
    period = _validated_period(p, period)
    period = _validated_period(q, period)
    nu_p = ehrhart_series(p, period).numerator
    nu_q = ehrhart_series(q, period).numerator
    padded = nu_p + (0,) * (len(nu_q) - len(nu_p))
    first = next((i for i in range(len(nu_q)) if padded[i] > nu_q[i]), None)
    return MonotonicityReport(first is None, period, padded, nu_q, first)


@dataclass(frozen=True)
class GenFunTerm:
    numerator: GradedPoints
    denominators: tuple[IntVec, ...]


@dataclass(frozen=True)
class ConeGenFun:
    """Sum of half-open cell terms representing a shifted-cone generating function."""

    terms: tuple[GenFunTerm, ...]
    rank: int
    shift: ShiftSpec


def cone_genfun(
    k: Cone | Triangulation, base, interior: bool = False, *, seed: int = 0
) -> ConeGenFun:
    tri = k if isinstance(k, Triangulation) else placing_triangulation(k.generators)
    base = linalg.ratvec(base)
    direction = INWARD if interior else OUTWARD
    spec = shiftmod.choose_shift(tri, base, direction, seed=seed)
    terms = []
    for cell in tri.cells:
        pts = parallelepiped_points(HalfOpenParallelepiped(spec.shift, cell.generators))
        if len(cell.generators) == tri.parent.ambient_dim:
            assert pts.count == cell_lattice_index(cell)
        terms.append(GenFunTerm(pts, cell.generators))
    return ConeGenFun(tuple(terms), tri.rank, spec)


def _monomial(point_value: RatVec, exponents) -> Fraction:
    out = Fraction(1)
    for x, e in zip(point_value, exponents):
        out *= x ** int(e)
    return out


def gf_evaluate(g: ConeGenFun, x, reciprocal: bool = False) -> Fraction:
    """Exact value of the rational function at x (or at 1/x componentwise)."""
    x = linalg.ratvec(x)
    if any(xi == 0 for xi in x):
        raise PoleError("evaluation point has a zero coordinate")
    y = tuple(1 / xi for xi in x) if reciprocal else x
    total = Fraction(0)
    for term in g.terms:
        denom = Fraction(1)
        for w in term.denominators:
            factor = 1 - _monomial(y, w)
            if factor == 0:
                raise PoleError(f"denominator factor for generator {w} vanishes")
            denom *= factor
        numer = sum((_monomial(y, z) for z in term.numerator.points), Fraction(0))
        total += numer / denom
    return total


@dataclass(frozen=True)
class ConeReciprocityReport:
    ok: bool
    rank: int
    trials: int
    sample_points: tuple[RatVec, ...]
    failures: tuple[str, ...]


def check_reciprocity_cone(
    k: Cone | Triangulation, base, trials: int = 5, seed: int = 0
) -> ConeReciprocityReport:
    """Exact spot checks of the closed/open reciprocity identity.

    Verifies ``sigma_{base+K}(x) = (-1)^rank sigma_{-base+K°}(1/x)`` at seeded
    random rational points, and the per-cell identity
    ``sigma_{s+C}(1/x) = (-1)^rank sigma_{-s+C}(x)`` for every cell C.
    """
    import random

    tri = k if isinstance(k, Triangulation) else placing_triangulation(k.generators)
    base = linalg.ratvec(base)
    g_closed = cone_genfun(tri, base, interior=False, seed=seed)
    g_open = cone_genfun(tri, linalg.vneg(base), interior=True, seed=seed)
    sign = (-1) ** tri.rank
    s = g_closed.shift.shift
    neg_terms = [
        parallelepiped_points(HalfOpenParallelepiped(linalg.vneg(s), cell.generators))
        for cell in tri.cells
    ]

    rng = random.Random(seed)
    dim = tri.parent.ambient_dim
    samples: list[RatVec] = []
    attempts = 0
    while len(samples) < trials:
        attempts += 1
        if attempts > 100 * trials + 100:
            raise ShiftSamplingExhausted("could not sample enough non-pole points")
        x = tuple(
            Fraction(rng.choice([i for i in range(-5, 6) if i != 0]), rng.randint(1, 5))
            for _ in range(dim)
        )
        if any(_monomial(x, cell.generators[i]) == 1 for cell in tri.cells for i in range(len(cell.generators))):
            continue
        samples.append(x)

    failures: list[str] = []
    for x in samples:
        lhs = gf_evaluate(g_closed, x)
        rhs = sign * gf_evaluate(g_open, x, reciprocal=True)
        if lhs != rhs:
            failures.append(f"whole-cone identity fails at x={x}: {lhs} != {rhs}")
        for j, (cell, pts_neg) in enumerate(zip(tri.cells, neg_terms)):
            cell_pos = ConeGenFun((GenFunTerm(g_closed.terms[j].numerator, cell.generators),), tri.rank, g_closed.shift)
            cell_neg = ConeGenFun((GenFunTerm(pts_neg, cell.generators),), tri.rank, g_closed.shift)
            left = gf_evaluate(cell_pos, x, reciprocal=True)
            right = sign * gf_evaluate(cell_neg, x)
            if left != right:
                failures.append(f"cell {j} identity fails at x={x}: {left} != {right}")
    return ConeReciprocityReport(not failures, tri.rank, trials, tuple(samples), tuple(failures))


class ShiftSamplingExhausted(PreconditionError):
    """Could not find enough non-pole sample points."""
