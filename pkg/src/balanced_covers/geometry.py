"""Exact convex-position predicates over the rationals.

Vectors are tuples of :class:`fractions.Fraction`. Every predicate returns a
certificate that can be re-checked by plain substitution.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from . import kernels
from .errors import InputError, TheoremViolationError

Vector = tuple  # tuple[Fraction, ...]


def vector(coords: Iterable) -> Vector:
    return tuple(Fraction(c) for c in coords)


def sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def integer_rows(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[int]], list[int]]:
    """Scale each rational row by the lcm of its denominators.

    Returns the integer rows and the per-row scale factors.
    """
    out, scales = [], []
    for row in rows:
        s = 1
        for x in row:
            s = lcm(s, Fraction(x).denominator)
        out.append([int(Fraction(x) * s) for x in row])
        scales.append(s)
    return out, scales


def primitive(coords: Iterable[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    coords = tuple(coords)
    g = 0
    for c in coords:
        g = gcd(g, c)
    if g <= 1:
        return coords
    return tuple(c // g for c in coords)


@dataclass(frozen=True)
class Inside:
    """``r`` is the convex combination of the points with these weights."""

    coefficients: tuple

    def verify(self, points, r) -> bool:
        c = self.coefficients
        if len(c) != len(points) or any(x < 0 for x in c) or sum(c) != 1:
            return False
        d = len(r)
        return all(sum(ci * p[t] for ci, p in zip(c, points)) == r[t] for t in range(d))


@dataclass(frozen=True)
class Outside:
    """Every queried point lies strictly on the positive side of ``direction``."""

    direction: tuple

    def verify(self, points, r) -> bool:
        return all(dot(self.direction, sub(p, r)) > 0 for p in points)


def _check_dims(points, r):
    if not points:
        raise InputError("empty point list")
    d = len(r)
    for i, p in enumerate(points):
        if len(p) != d:
            raise InputError(f"point {i + 1} has dimension {len(p)}, expected {d}")
    return d


def conv_membership(points: Sequence[Sequence], r: Sequence) -> Inside | Outside:
    """Decide ``r in conv(points)`` exactly.

    Solved as a phase-one simplex feasibility problem; an infeasible system
    yields the separating direction from the Farkas dual.
    """
    points = [vector(p) for p in points]
    r = vector(r)
    d = _check_dims(points, r)
    for i, p in enumerate(points):
        if p == r:
            return Inside(tuple(Fraction(int(j == i)) for j in range(len(points))))
    diffs = [sub(p, r) for p in points]
    # coordinates where every point agrees with r carry no constraint
    live = [t for t in range(d) if any(q[t] for q in diffs)]
    rows = [[q[t] for q in diffs] + [Fraction(0)] for t in live]
    rows.append([Fraction(1)] * len(points) + [Fraction(1)])
    irows, scales = integer_rows(rows)
    feasible, den, vals = kernels.phase_one([row[:-1] for row in irows], [row[-1] for row in irows])
    if feasible:
        result = Inside(tuple(Fraction(v, den) for v in vals))
    else:
        w = [0] * d
        for k, t in enumerate(live):
            w[t] = -vals[k] * scales[k]
        result = Outside(tuple(Fraction(x) for x in primitive(w)))
    if not result.verify(points, r):
        raise TheoremViolationError(f"{type(result).__name__} certificate failed verification")
    return result


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull (equivalently of the convex hull)."""
    if not points:
        raise InputError("empty point list")
    points = [vector(p) for p in points]
    d = len(points[0])
    if any(len(p) != d for p in points):
        raise InputError("points have mixed dimensions")
    if len(points) == 1:
        return 0
    diffs = [sub(p, points[0]) for p in points[1:]]
    irows, _ = integer_rows(diffs)
    return kernels.rank(irows)


def relint_membership(points: Sequence[Sequence], r: Sequence) -> bool:
    """True iff ``r`` is a convex combination with all weights positive.

    Equivalent to asking for weights ``1 + mu_i`` (``mu >= 0``) whose
    combination of ``v_i - r`` vanishes, which is a pure feasibility problem.
    """
    points = [vector(p) for p in points]
    r = vector(r)
    d = _check_dims(points, r)
    diffs = [sub(p, r) for p in points]
    rows = [[q[t] for q in diffs] + [-sum(q[t] for q in diffs)] for t in range(d)]
    irows, _ = integer_rows(rows)
    feasible, _, _ = kernels.phase_one([row[:-1] for row in irows], [row[-1] for row in irows])
    return feasible
