"""Choice and exact certification of the generic short shift.

The decomposition trick needs a shift s = base +/- eps*w (w strictly inside
the cone) such that

  * outward (closed target): the shifted cone catches exactly the lattice
    points of the closed cone ``base + K``;
  * inward (open target): it catches exactly the lattice points of the
    relative interior ``base + K°``;
  * no facet hyperplane of any shifted cell passes through a lattice point.

The certificate reduces all three to finitely many exact inequalities.  Why
they suffice: a primitive integer facet normal a pairs every lattice point
to an integer, so "``<a, s>`` is not an integer and no integer lies strictly
between ``<a, s>`` and ``<a, base>``" says precisely that sweeping the facet
from the base offset to the shifted offset crosses no lattice hyperplane
``<a, z> = k`` -- membership of lattice points relative to that facet is
unchanged except that points formerly on the facet land strictly inside
(outward) or strictly outside (inward).  Wall normals pair the wall's
affine hull to the non-integer ``<a', s>``, so no lattice point lies on any
shifted cell facet.  For cones of less than full rank all normals live in
the cone's linear span, the shift stays in that span, and lattice points
off the shifted span belong to neither side, so the same argument applies
within the span.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from . import lattice, linalg
from .errors import PreconditionError, ShiftSearchError
from .linalg import IntVec, RatVec
from .triangulation import Triangulation

OUTWARD = "outward"
INWARD = "inward"

_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53)


@dataclass(frozen=True)
class BoundaryCheck:
    normal: IntVec
    base_pairing: Fraction
    shift_pairing: Fraction


@dataclass(frozen=True)
class WallCheck:
    normal: IntVec
    shift_pairing: Fraction


@dataclass(frozen=True)
class ShiftCertificate:
    boundary: tuple[BoundaryCheck, ...]
    walls: tuple[WallCheck, ...]


@dataclass(frozen=True)
class ShiftSpec:
    base: RatVec
    direction: str
    shift: RatVec
    epsilon: Fraction
    interior_vector: IntVec
    certificate: ShiftCertificate


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    violation: str | None
    certificate: ShiftCertificate


def _integer_strictly_between(lo: Fraction, hi: Fraction) -> int | None:
    k = math.floor(lo) + 1
    return k if k < hi else None


def verify_shift(t: Triangulation, base, direction: str, shift) -> VerifyResult:
    """Evaluate every certificate condition exactly; report the first failure."""
    base = linalg.ratvec(base)
    shift = linalg.ratvec(shift)
    boundary = []
    violation = None
    for a in t.boundary_normals:
        pb = linalg.dot(a, base)
        ps = linalg.dot(a, shift)
        boundary.append(BoundaryCheck(a, pb, ps))
        if violation is not None:
            continue
        if ps.denominator == 1:
            violation = f"boundary normal {a}: shift pairing {ps} is an integer"
        elif direction == OUTWARD:
            if not ps < pb:
                violation = f"boundary normal {a}: shift pairing {ps} not below base {pb}"
            else:
                k = _integer_strictly_between(ps, pb)
                if k is not None:
                    violation = (
                        f"boundary normal {a}: integer {k} lies strictly "
                        f"between {ps} and {pb}"
                    )
        else:
            if not ps > pb:
                violation = f"boundary normal {a}: shift pairing {ps} not above base {pb}"
            else:
                k = _integer_strictly_between(pb, ps)
                if k is not None:
                    violation = (
                        f"boundary normal {a}: integer {k} lies strictly "
                        f"between {pb} and {ps}"
                    )
    walls = []
    for a in t.wall_normals:
        ps = linalg.dot(a, shift)
        walls.append(WallCheck(a, ps))
        if violation is None and ps.denominator == 1:
            violation = f"wall normal {a}: pairing {ps} is an integer"
    cert = ShiftCertificate(tuple(boundary), tuple(walls))
    return VerifyResult(violation is None, violation, cert)


def _interior_vector(t: Triangulation, seed: int) -> IntVec:
    """Positive generator combination pairing nonzero with every wall normal."""
    gens = t.parent.generators
    rng = random.Random(seed)
    attempts: list[tuple[int, ...]] = [(1,) * len(gens)]
    attempts.append(tuple(_PRIMES[i % len(_PRIMES)] for i in range(len(gens))))
    for _ in range(30):
        attempts.append(tuple(rng.randint(1, 997) for _ in gens))
    for weights in attempts:
        w = tuple(
            sum(c * g[j] for c, g in zip(weights, gens)) for j in range(t.parent.ambient_dim)
        )
        if all(linalg.dot(a, w) != 0 for a in t.wall_normals):
            return w
    raise ShiftSearchError("no interior direction clears all wall normals")


def choose_shift(
    t: Triangulation,
    base,
    direction: str,
    *,
    shrink_base: int = 10,
    max_shrink: int = 40,
    extra_shrink: int = 0,
    seed: int = 0,
) -> ShiftSpec:
    """Deterministic certified shift: base +/- eps*w with the smallest eps = 1/shrink_base^k.

    ``extra_shrink`` skips past the first passing eps values; the resulting
    decomposition must not depend on which certified eps is used, which the
    callers exercise as an invariant.
    """
    if direction not in (OUTWARD, INWARD):
        raise PreconditionError(f"unknown direction {direction!r}")
    base = linalg.ratvec(base)
    if len(base) != t.parent.ambient_dim:
        raise PreconditionError("base point dimension mismatch")
    w = _interior_vector(t, seed)
    sign = -1 if direction == OUTWARD else 1
    passes = 0
    last = None
    for k in range(max_shrink + 1):
        eps = Fraction(1, shrink_base**k)
        shift = linalg.vadd(base, linalg.vscale(sign * eps, w))
        result = verify_shift(t, base, direction, shift)
        if result.ok:
            if passes == extra_shrink:
                return ShiftSpec(base, direction, shift, eps, w, result.certificate)
            passes += 1
        else:
            last = result.violation
    raise ShiftSearchError(
        f"no certified shift within {max_shrink} shrink steps; last violation: {last}"
    )


@dataclass(frozen=True)
class BoxAudit:
    ok: bool
    box_lo: IntVec
    box_hi: IntVec
    points: int
    detail: str | None


def certificate_box_audit(t: Triangulation, spec: ShiftSpec, levels: int | None = None) -> BoxAudit:
    """Brute-force soundness check of a certified shift inside a finite box.

    Confirms that, within the box, the lattice points of the shifted cone are
    exactly those of the closed cone (outward) or of the relative interior
    (inward), and that no enumerated point lies on any shifted wall.
    """
    gens = t.parent.generators
    dim = t.parent.ambient_dim
    first = [g[0] for g in gens]
    if levels is not None and all(f == first[0] for f in first) and first[0] > 0:
        cap = levels * first[0]
        lo = [-1] * dim
        hi = [cap] * dim
        for j in range(1, dim):
            ratios = [Fraction(g[j], g[0]) for g in gens]
            lo[j] = math.floor(cap * min(ratios)) - 1
            hi[j] = math.ceil(cap * max(ratios)) + 1
    else:
        bound = 3 * max(abs(x) for g in gens for x in g) + 1
        lo = [-bound] * dim
        hi = [bound] * dim
    lo_t, hi_t = tuple(lo), tuple(hi)

    base_set = _cone_lattice_points(t, spec.base, lo_t, hi_t, spec.direction == INWARD)
    shift_set = _cone_lattice_points(t, spec.shift, lo_t, hi_t, False)
    if base_set != shift_set:
        diff = sorted(set(base_set) ^ set(shift_set))[0]
        return BoxAudit(False, lo_t, hi_t, len(shift_set), f"set mismatch at {diff}")
    for z in shift_set:
        for a in t.wall_normals:
            if linalg.dot(a, z) == linalg.dot(a, spec.shift):
                return BoxAudit(
                    False, lo_t, hi_t, len(shift_set), f"point {z} on wall {a}"
                )
    return BoxAudit(True, lo_t, hi_t, len(shift_set), None)


def _cone_lattice_points(t: Triangulation, apex, lo, hi, strict: bool):
    """Lattice points of the shifted (open if strict) cone inside a box."""
    apex = linalg.ratvec(apex)
    constraints = []
    for a in t.boundary_normals:
        coeffs = linalg.vneg(linalg.ratvec(a))
        rhs = -linalg.dot(a, apex)
        constraints.append(
            lattice.lt_constraint(coeffs, rhs) if strict else lattice.le_constraint(coeffs, rhs)
        )
    for coeffs, rhs in _span_equalities(t, apex):
        c = lattice.eq_constraint(coeffs, rhs)
        if c is None:
            return frozenset()
        constraints.append(c)
    return frozenset(lattice.scan_box(lo, hi, constraints))


def _span_equalities(t: Triangulation, apex):
    """Affine-hull equalities for ``apex + span(generators)``; empty if full rank."""
    gens = t.parent.generators
    dim = t.parent.ambient_dim
    if t.rank == dim:
        return []
    basis = [gens[i] for i in linalg.independent_rows(gens)[: t.rank]]
    rows = [tuple(Fraction(b[j]) for b in basis) for j in range(dim)]
    pivots = linalg.independent_rows(rows)[: t.rank]
    inv = linalg.mat_inverse([rows[i] for i in pivots])
    out = []
    pivot_set = set(pivots)
    for j in range(dim):
        if j in pivot_set:
            continue
        coeffs = [Fraction(0)] * dim
        coeffs[j] = Fraction(1)
        r_j = tuple(
            sum((rows[j][c] * inv[c][k] for c in range(t.rank)), Fraction(0))
            for k in range(t.rank)
        )
        for k, pj in enumerate(pivots):
            coeffs[pj] -= r_j[k]
        out.append((tuple(coeffs), linalg.dot(coeffs, apex)))
    return out
