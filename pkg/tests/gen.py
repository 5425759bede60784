"""Seeded generators shared by the test modules."""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from balanced_covers.balanced import PointConfig
from balanced_covers.geometry import Inside, affine_rank, conv_membership, relint_membership

SQUARE = PointConfig.of([(1, 0), (0, 1), (-1, 0), (0, -1)], (0, 0))
TRIANGLE = PointConfig.of([(1, 0), (-1, 1), (-1, -1)], (0, 0))


def _point(rng, d, lo=-5, hi=5):
    return tuple(Fraction(rng.randint(lo, hi)) for _ in range(d))


def interior_config(rng: random.Random, d: int, m: int) -> PointConfig:
    """Full-rank points with ``r`` a strictly positive combination of all of them."""
    if m < d + 1:
        raise ValueError("full rank needs at least d + 1 points")
    while True:
        pts = [_point(rng, d) for _ in range(m)]
        if affine_rank(pts) != d:
            continue
        w = [rng.randint(1, 5) for _ in range(m)]
        total = sum(w)
        r = tuple(sum(Fraction(wi, total) * p[k] for wi, p in zip(w, pts)) for k in range(d))
        return PointConfig(d, tuple(pts), r)


def boundary_or_outside_config(rng: random.Random, d: int, m: int) -> PointConfig:
    """Full-rank points with ``r`` outside the relative interior of their hull."""
    if m < d + 1:
        raise ValueError("full rank needs at least d + 1 points")
    while True:
        pts = [_point(rng, d) for _ in range(m)]
        if affine_rank(pts) != d:
            continue
        kind = rng.random()
        if kind < 0.4:
            r = _point(rng, d, -9, 9)
        elif kind < 0.7:
            a, b = rng.sample(pts, 2)
            r = tuple((x + y) / 2 for x, y in zip(a, b))
        else:
            r = rng.choice(pts)
        if not relint_membership(pts, r):
            return PointConfig(d, tuple(pts), r)


def brute_force_balanced(config: PointConfig) -> set:
    """Every subset (as a frozenset of 0-based indices) whose hull contains ``r``."""
    out = set()
    m = config.m
    for k in range(1, m + 1):
        for s in combinations(range(m), k):
            if isinstance(conv_membership([config.points[i] for i in s], config.base), Inside):
                out.add(frozenset(s))
    return out


def planar_configs(rng: random.Random, count: int) -> list:
    """Square and triangle plus random interior planar configurations."""
    out = [SQUARE, TRIANGLE]
    while len(out) < count:
        out.append(interior_config(rng, 2, rng.randint(3, 6)))
    return out
