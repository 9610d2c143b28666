"""Quasi-polynomials with exact rational coefficients.

A quasi-polynomial of period p is a tuple of p polynomial constituents;
evaluation at n uses constituent n mod p with the mathematical (always
nonnegative) residue, so negative arguments work as required by the
count reciprocity identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

Poly = tuple[Fraction, ...]  # coefficient list, constant term first


def poly_add(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return tuple(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
    )


def poly_mul(a: Poly, b: Poly) -> Poly:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return tuple(out)


def poly_scale(c, a: Poly) -> Poly:
    c = Fraction(c)
    return tuple(c * x for x in a)


def poly_eval(a: Poly, x) -> Fraction:
    x = Fraction(x)
    out = Fraction(0)
    for c in reversed(a):
        out = out * x + c
    return out


def poly_trim(a: Poly) -> Poly:
    n = len(a)
    while n > 1 and a[n - 1] == 0:
        n -= 1
    return tuple(a[:n])


def poly_compose_affine(a: Poly, scale, offset) -> Poly:
    """Coefficients of a(scale*x + offset)."""
    lin = (Fraction(offset), Fraction(scale))
    out: Poly = (Fraction(0),)
    power: Poly = (Fraction(1),)
    for c in a:
        out = poly_add(out, poly_scale(c, power))
        power = poly_mul(power, lin)
    return out


def binomial_coefficient_poly(deg: int) -> Poly:
    """Polynomial m -> C(m + deg, deg), exact rational coefficients."""
    out: Poly = (Fraction(1),)
    for j in range(1, deg + 1):
        out = poly_mul(out, (Fraction(j), Fraction(1)))
    return poly_scale(Fraction(1, math.factorial(deg)), out)


def lagrange_interpolate(samples) -> Poly:
    """Exact polynomial through the given (x, y) pairs."""
    result: Poly = (Fraction(0),)
    xs = [Fraction(x) for x, _ in samples]
    for i, (_, yi) in enumerate(samples):
        term: Poly = (Fraction(yi),)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            term = poly_mul(term, poly_scale(1 / (xs[i] - xj), (-xj, Fraction(1))))
        result = poly_add(result, term)
    return poly_trim(result)


@dataclass(frozen=True)
class QuasiPolynomial:
    period: int
    dim: int
    constituents: tuple[Poly, ...]  # one per residue class, degree <= dim

    def __post_init__(self):
        if len(self.constituents) != self.period:
            raise ValueError("need exactly one constituent per residue class")


def evaluate(q: QuasiPolynomial, n: int) -> Fraction:
    """Value at any integer n, using the mathematical residue n mod period."""
    return poly_eval(q.constituents[n % q.period], n)


def interpolate_constituents(period: int, dim: int, samples) -> QuasiPolynomial:
    """Build a quasi-polynomial from per-residue sample tables."""
    cons = tuple(lagrange_interpolate(samples[r]) for r in range(period))
    return QuasiPolynomial(period, dim, cons)
