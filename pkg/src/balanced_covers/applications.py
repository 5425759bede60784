"""Sperner, KKM and KKMS instances and balanced-simplex witnesses.

Covers of a subdivided simplex are vertex weight fields; ``x in C_I`` means
the weight of ``I`` is positive at a vertex of the simplex carrying ``x``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping

from .balanced import BalancedProfile, PointConfig, enumerate_minimal_balanced, is_balanced
from .degree import DegreeResult, WeightedCover, degree, facet_support
from .errors import InputError, TheoremViolationError
from .simplicial import (
    OrientedTriangulation,
    boundary_triangulation,
    orientation_coherence_check,
    permutation_sign,
)
from .triangulations import CarrierLabeledTriangulation, random_subdivision, simplex_embedding


def simplex_config(n: int) -> PointConfig:
    """Corners of ``Delta^(n-1)`` in ``R^(n-1)`` with ``r`` at the barycenter."""
    embed = simplex_embedding(n)
    pts = [embed(tuple(Fraction(int(j == i)) for j in range(n))) for i in range(n)]
    r = embed(tuple(Fraction(1, n) for _ in range(n)))
    return PointConfig(n - 1, tuple(pts), r)


def check_sperner(labeled: CarrierLabeledTriangulation, coloring: Mapping) -> bool:
    """Every vertex takes a color (0-based) from its carrier."""
    for u in labeled.tri.vertices:
        if u not in coloring:
            raise InputError(f"vertex {u} is not colored")
        if coloring[u] not in labeled.carrier[u]:
            return False
    return True


@dataclass(frozen=True)
class RainbowReport:
    facets: tuple
    signed_count: int


def find_rainbow(tri: OrientedTriangulation, coloring: Mapping, n: int) -> RainbowReport:
    """Facets using all ``n`` colors, and their signed count.

    A rainbow facet counts its orientation sign times the sign of the color
    permutation read in facet order.
    """
    if not orientation_coherence_check(tri, allow_boundary=True):
        raise InputError("triangulation is not coherently oriented")
    full = frozenset(range(n))
    hits, total = [], 0
    for idx, (f, s) in enumerate(zip(tri.facets, tri.orientation_signs)):
        colors = [coloring[u] for u in f]
        if frozenset(colors) == full:
            hits.append(idx)
            total += s * permutation_sign(colors)
    return RainbowReport(tuple(hits), total)


def boundary_cover(tri: OrientedTriangulation, cover: WeightedCover) -> tuple[OrientedTriangulation, WeightedCover]:
    bd = boundary_triangulation(tri)
    return bd, WeightedCover({u: cover.weights[u] for u in bd.vertices})


@dataclass(frozen=True)
class TheoremBReport:
    boundary: DegreeResult
    witness_facet: int | None = None
    support: frozenset | None = None
    balanced_set: tuple | None = None

    @property
    def obstruction(self) -> bool:
        return not self.boundary.ok or self.boundary.degree != 0


def _first_balanced_facet(tri, cover, profile: BalancedProfile):
    for i in range(len(tri.facets)):
        s = facet_support(tri, cover, i)
        if is_balanced(profile, s):
            members = [tuple(sorted(b)) for b in profile.minimal_balanced if b <= s]
            return i, s, min(members, key=lambda t: (len(t), t))
    return None


def theorem_b_check(
    ball: OrientedTriangulation, cover: WeightedCover, config: PointConfig, seed: int = 0
) -> TheoremBReport:
    """Nonzero (or undefined) boundary degree forces a balanced facet.

    With boundary degree zero nothing is claimed and no search is made.
    """
    if ball.dim != config.dim:
        raise InputError(f"ball has dimension {ball.dim}, configuration {config.dim}")
    if not orientation_coherence_check(ball, allow_boundary=True):
        raise InputError("ball triangulation is not coherently oriented")
    profile = enumerate_minimal_balanced(config)
    bd, bcover = boundary_cover(ball, cover)
    res = degree(bd, bcover, config, seed, profile=profile)
    report = TheoremBReport(res)
    if not report.obstruction:
        return report
    hit = _first_balanced_facet(ball, cover, profile)
    if hit is None:
        raise TheoremViolationError("nontrivial boundary class but no balanced facet")
    return TheoremBReport(res, *hit)


# ---------------------------------------------------------------- KKMS


def kkms_subsets(n: int) -> list[frozenset]:
    """Nonempty subsets of ``0..n-1`` by size, then lexicographically."""
    return [frozenset(c) for k in range(1, n + 1) for c in combinations(range(n), k)]


def kkms_config(n: int) -> PointConfig:
    """Barycenters ``v_I`` of all faces, with ``r`` the barycenter of the simplex."""
    embed = simplex_embedding(n)
    pts = [embed(tuple(Fraction(int(j in s), len(s)) for j in range(n))) for s in kkms_subsets(n)]
    r = embed(tuple(Fraction(1, n) for _ in range(n)))
    return PointConfig(n - 1, tuple(pts), r)


@dataclass(frozen=True)
class KkmsInstance:
    n: int
    subdivision: CarrierLabeledTriangulation
    cover: WeightedCover

    def __post_init__(self):
        subsets = kkms_subsets(self.n)
        if self.cover.m != len(subsets):
            raise InputError(f"KKMS cover needs {len(subsets)} members, got {self.cover.m}")
        for u in self.subdivision.tri.vertices:
            carrier = self.subdivision.carrier[u]
            for i in self.cover.support(u):
                if not subsets[i] <= carrier:
                    raise InputError(f"vertex {u}: member {_fmt(subsets[i])} not inside carrier {_fmt(carrier)}")

    @property
    def config(self) -> PointConfig:
        return kkms_config(self.n)


def _fmt(s) -> str:
    return "{" + ",".join(str(i + 1) for i in sorted(s)) + "}"


@dataclass(frozen=True)
class KkmsWitness:
    facet: int
    family: tuple  # tuple of frozensets I, the balanced subfamily


def kkms_witness(instance: KkmsInstance, profile: BalancedProfile | None = None) -> KkmsWitness:
    """First facet whose cover members contain a balanced subfamily.

    The subfamily returned is the smallest, then lexicographically first,
    minimal balanced set inside the facet's support.
    """
    if profile is None:
        profile = enumerate_minimal_balanced(instance.config)
    hit = _first_balanced_facet(instance.subdivision.tri, instance.cover, profile)
    if hit is None:
        raise TheoremViolationError("KKMS instance without a balanced facet")
    subsets = kkms_subsets(instance.n)
    idx, _, members = hit
    return KkmsWitness(idx, tuple(subsets[i] for i in members))


def kkms_boundary_degree(instance: KkmsInstance, seed: int = 0, profile: BalancedProfile | None = None) -> DegreeResult:
    bd, bcover = boundary_cover(instance.subdivision.tri, instance.cover)
    return degree(bd, bcover, instance.config, seed, profile=profile)


# ---------------------------------------------------------------- generators


def random_sperner_coloring(labeled: CarrierLabeledTriangulation, rng: random.Random) -> dict:
    return {u: rng.choice(sorted(labeled.carrier[u])) for u in labeled.tri.vertices}


def random_kkm_cover(labeled: CarrierLabeledTriangulation, rng: random.Random) -> WeightedCover:
    """Weights over the ``n`` corners, each supported inside the vertex carrier."""
    weights = {}
    for u in labeled.tri.vertices:
        allowed = sorted(labeled.carrier[u])
        chosen = rng.sample(allowed, rng.randint(1, len(allowed)))
        raw = {i: rng.randint(1, 4) for i in chosen}
        total = sum(raw.values())
        weights[u] = tuple(Fraction(raw.get(i, 0), total) for i in range(labeled.n))
    return WeightedCover(weights)


def random_kkms_instance(n: int, max_facets: int, rng: random.Random, max_members: int = 3) -> KkmsInstance:
    """Random subdivision with random KKMS-compliant weights."""
    labeled = random_subdivision(n, max_facets, rng)
    subsets = kkms_subsets(n)
    weights = {}
    for u in labeled.tri.vertices:
        allowed = [i for i, s in enumerate(subsets) if s <= labeled.carrier[u]]
        chosen = rng.sample(allowed, rng.randint(1, min(max_members, len(allowed))))
        raw = {i: rng.randint(1, 4) for i in chosen}
        total = sum(raw.values())
        weights[u] = tuple(Fraction(raw.get(i, 0), total) for i in range(len(subsets)))
    return KkmsInstance(n, labeled, WeightedCover(weights))


def random_sperner_instance(n: int, max_facets: int, rng: random.Random):
    labeled = random_subdivision(n, max_facets, rng)
    return labeled, random_sperner_coloring(labeled, rng)


def coloring_cover(coloring: Mapping, m: int) -> WeightedCover:
    return WeightedCover.from_coloring(coloring, m)


def embedded_ball(labeled: CarrierLabeledTriangulation) -> OrientedTriangulation:
    """The subdivision itself, as an oriented ball for :func:`theorem_b_check`."""
    return labeled.tri


def sperner_degree(labeled: CarrierLabeledTriangulation, coloring: Mapping, seed: int = 0) -> DegreeResult:
    bd, cover = boundary_cover(labeled.tri, WeightedCover.from_coloring(coloring, labeled.n))
    return degree(bd, cover, simplex_config(labeled.n), seed)

