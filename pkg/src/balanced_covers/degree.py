"""PL mapping degree of weighted covers relative to a pair ``(V, r)``.

A cover enters as a partition-of-unity sample at each triangulation vertex;
vertex ``u`` maps to ``q(u) = sum_i w_i(u) v_i`` and simplices map linearly.
The degree of ``x -> (q(x) - r)/|q(x) - r|`` is the signed number of times a
generic ray from ``r`` crosses the image, so no normalization (and no square
root) is ever evaluated.

Orientation convention: a crossing counts ``+1`` when
``det[w, q_1 - q_0, ..., q_{d-1} - q_0]`` is positive (the ray direction
plays the role of the outward normal of the sphere), times the facet's
orientation sign. A counterclockwise loop around ``r`` in the plane has
degree ``+1``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Mapping, Sequence

from . import kernels
from .balanced import BalancedProfile, PointConfig, bs_equivalent, enumerate_minimal_balanced, is_balanced
from .errors import GenericityError, InputError, OracleError, TheoremViolationError
from .geometry import affine_rank, integer_rows, relint_membership, sub
from .simplicial import OrientedTriangulation, is_cycle, orientation_coherence_check

RAY_RANGE = 10**6
MAX_RETRIES = 64


@dataclass(frozen=True)
class WeightedCover:
    """Weight vector over the ``m`` cover members at each triangulation vertex."""

    weights: Mapping

    def __post_init__(self):
        clean = {}
        length = None
        for u, w in self.weights.items():
            w = tuple(Fraction(x) for x in w)
            if length is None:
                length = len(w)
            elif len(w) != length:
                raise InputError(f"vertex {u}: weight vector has length {len(w)}, expected {length}")
            if any(x < 0 for x in w):
                raise InputError(f"vertex {u}: negative weight")
            if sum(w) != 1:
                raise InputError(f"vertex {u}: weights sum to {sum(w)}, not 1")
            clean[u] = w
        object.__setattr__(self, "weights", clean)

    @classmethod
    def from_coloring(cls, coloring: Mapping, m: int) -> "WeightedCover":
        """Unit weights; ``coloring`` maps vertex -> 0-based color."""
        weights = {}
        for u, c in coloring.items():
            if not 0 <= c < m:
                raise InputError(f"vertex {u}: color {c + 1} out of range 1..{m}")
            weights[u] = tuple(Fraction(int(i == c)) for i in range(m))
        return cls(weights)

    @property
    def m(self) -> int:
        for w in self.weights.values():
            return len(w)
        return 0

    def support(self, u) -> frozenset:
        try:
            w = self.weights[u]
        except KeyError:
            raise InputError(f"no weight vector for vertex {u}") from None
        return frozenset(i for i, x in enumerate(w) if x)

    def image(self, u, config: PointConfig) -> tuple:
        w = self.weights[u]
        return tuple(
            sum((wi * p[t] for wi, p in zip(w, config.points) if wi), Fraction(0)) for t in range(config.dim)
        )


@dataclass(frozen=True)
class Crossing:
    facet: int
    t: Fraction
    barycentric: tuple
    sign: int


@dataclass(frozen=True)
class RayCertificate:
    direction: tuple
    crossings: tuple

    def verify(self, tri: OrientedTriangulation, cover: WeightedCover, config: PointConfig) -> bool:
        r = config.base
        for c in self.crossings:
            qs = [cover.image(u, config) for u in tri.facets[c.facet]]
            mu = c.barycentric
            if c.t <= 0 or any(x <= 0 for x in mu) or sum(mu) != 1:
                return False
            for k in range(config.dim):
                if sum(m * q[k] for m, q in zip(mu, qs)) != r[k] + c.t * self.direction[k]:
                    return False
        return True


@dataclass(frozen=True)
class Witness:
    facet: int
    support: frozenset


@dataclass(frozen=True)
class DegreeResult:
    status: str  # "ok" or "balanced_witness"
    degree: int | None = None
    certificate: RayCertificate | None = None
    witness: Witness | None = None
    attempts: int = field(default=0, compare=False)

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def facet_support(tri: OrientedTriangulation, cover: WeightedCover, facet: int) -> frozenset:
    """Union of vertex supports: the nerve simplex the facet maps into."""
    try:
        verts = tri.facets[facet]
    except IndexError:
        raise InputError(f"no facet {facet}") from None
    out: frozenset = frozenset()
    for u in verts:
        out |= cover.support(u)
    return out


def check_no_balanced_simplices(tri, cover, profile: BalancedProfile) -> Witness | None:
    """First facet (in facet order) whose support is balanced, else ``None``.

    Faces need no separate scan: a face's support is contained in the
    support of any facet containing it and balancedness is upward closed.
    """
    for i in range(len(tri.facets)):
        s = facet_support(tri, cover, i)
        if is_balanced(profile, s):
            return Witness(i, s)
    return None


def _det_sign(rows: Sequence[Sequence[Fraction]]) -> int:
    irows, _ = integer_rows(rows)
    d = kernels.det(irows)
    return (d > 0) - (d < 0)


class _Degenerate(Exception):
    pass


def _facet_crossing(qs, r, w, d):
    """Crossing of the ray ``r + t w`` with the simplex ``conv(qs)``.

    Returns ``(t, mu)`` for a transversal interior hit, ``None`` for a miss,
    and raises :class:`_Degenerate` for any non-generic contact.
    """
    rows = [[q[k] for q in qs] + [-w[k], r[k]] for k in range(d)]
    rows.append([Fraction(1)] * d + [Fraction(0), Fraction(1)])
    irows, _ = integer_rows(rows)
    mat = [row[:-1] for row in irows]
    rhs = [row[-1] for row in irows]
    den, nums = kernels.solve(mat, rhs)
    if den == 0:
        # singular system: any contact between ray and image is degenerate
        feasible, _, _ = kernels.phase_one(mat, rhs)
        if feasible:
            raise _Degenerate()
        return None
    mu = [Fraction(x, den) for x in nums[:d]]
    t = Fraction(nums[d], den)
    if t < 0 or any(x < 0 for x in mu):
        return None
    if t == 0 or any(x == 0 for x in mu):
        raise _Degenerate()
    return t, tuple(mu)


def _random_direction(rng: random.Random, d: int) -> tuple:
    while True:
        w = tuple(Fraction(rng.randint(-RAY_RANGE, RAY_RANGE)) for _ in range(d))
        if any(w):
            return w


def degree(
    tri: OrientedTriangulation,
    cover: WeightedCover,
    config: PointConfig,
    seed: int = 0,
    profile: BalancedProfile | None = None,
    closed: str = "manifold",
) -> DegreeResult:
    """Degree of the cover relative to ``(V, r)``, or a balanced witness.

    ``closed="manifold"`` requires a closed coherently oriented
    pseudomanifold; ``closed="cycle"`` only requires a chain with zero
    boundary, which is enough for the ray count to be well defined.
    """
    d = config.dim
    if tri.dim != d - 1:
        raise InputError(f"triangulation has dimension {tri.dim}, expected {d - 1}")
    if cover.m != config.m:
        raise InputError(f"cover has {cover.m} members but the configuration has {config.m} points")
    if closed == "manifold":
        if not orientation_coherence_check(tri):
            raise InputError("triangulation is not a coherently oriented closed pseudomanifold")
    elif not is_cycle(tri):
        raise InputError("triangulation chain is not closed")
    if profile is None:
        profile = enumerate_minimal_balanced(config)
    witness = check_no_balanced_simplices(tri, cover, profile)
    if witness is not None:
        return DegreeResult("balanced_witness", witness=witness)
    images = {u: cover.image(u, config) for u in tri.vertices}
    r = config.base
    rng = random.Random(seed)
    for attempt in range(1, MAX_RETRIES + 1):
        w = _random_direction(rng, d)
        try:
            crossings = []
            for idx, (f, s) in enumerate(zip(tri.facets, tri.orientation_signs)):
                qs = [images[u] for u in f]
                hit = _facet_crossing(qs, r, w, d)
                if hit is None:
                    continue
                t, mu = hit
                frame = [w] + [sub(q, qs[0]) for q in qs[1:]]
                sign = s * _det_sign(frame)
                if sign == 0:
                    raise _Degenerate()
                crossings.append(Crossing(idx, t, mu, sign))
        except _Degenerate:
            continue
        cert = RayCertificate(w, tuple(crossings))
        if not cert.verify(tri, cover, config):
            raise TheoremViolationError("ray certificate failed verification")
        return DegreeResult("ok", sum(c.sign for c in crossings), cert, attempts=attempt)
    raise GenericityError(f"no generic ray direction in {MAX_RETRIES} attempts (seed {seed})")


def _orient(p, q, r) -> Fraction:
    return (q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1])


def winding_oracle(tri: OrientedTriangulation, cover: WeightedCover, config: PointConfig) -> int:
    """Winding number of the image loop around ``r`` (planar case only).

    Counts signed crossings of the horizontal ray to the right of ``r``;
    vertices exactly on the ray's line are treated as lying below it, which
    is a fixed symbolic perturbation, so no randomness is involved.
    """
    if config.dim != 2 or tri.dim != 1:
        raise InputError("winding oracle needs a closed 1-cycle in the plane")
    r = config.base
    wn = 0
    for f, s in zip(tri.facets, tri.orientation_signs):
        a, b = (f[0], f[1]) if s > 0 else (f[1], f[0])
        p, q = cover.image(a, config), cover.image(b, config)
        o = _orient(p, q, r)
        if o == 0 and min(p[0], q[0]) <= r[0] <= max(p[0], q[0]) and min(p[1], q[1]) <= r[1] <= max(p[1], q[1]):
            raise OracleError(f"loop passes through r on edge {f}")
        if p[1] <= r[1]:
            if q[1] > r[1] and o > 0:
                wn += 1
        elif q[1] <= r[1] and o < 0:
            wn -= 1
    return wn


def degree_invariance_check(
    a: PointConfig, b: PointConfig, tri: OrientedTriangulation, cover: WeightedCover, seed: int = 0
) -> bool:
    """Do BS-equivalent pairs give the same N/A status and the same ``|deg|``?"""
    if not bs_equivalent(a, b):
        raise InputError("configurations are not BS-equivalent")
    ra = degree(tri, cover, a, seed)
    rb = degree(tri, cover, b, seed)
    if ra.status != rb.status:
        return False
    if not ra.ok:
        return True
    return abs(ra.degree) == abs(rb.degree)


def angular_order(config: PointConfig) -> list[int]:
    """Indices of points different from ``r``, counterclockwise around ``r``.

    Starts at the positive x-axis; ties (same ray) keep index order.
    """
    r = config.base
    dirs = {i: sub(p, r) for i, p in enumerate(config.points) if p != r}

    def half(u):
        return 0 if (u[1] > 0 or (u[1] == 0 and u[0] > 0)) else 1

    def cmp(i, j):
        u, v = dirs[i], dirs[j]
        hu, hv = half(u), half(v)
        if hu != hv:
            return hu - hv
        cross = u[0] * v[1] - u[1] * v[0]
        if cross > 0:
            return -1
        if cross < 0:
            return 1
        return i - j

    return sorted(dirs, key=cmp_to_key(cmp))


def cycle_triangulation(n: int) -> OrientedTriangulation:
    """The ``n``-gon ``0 -> 1 -> ... -> n-1 -> 0`` (``n = 2`` gives a digon)."""
    if n < 2:
        raise InputError("a cycle needs at least two vertices")
    return OrientedTriangulation(1, tuple((i, (i + 1) % n) for i in range(n)))


def construct_degree_k_circle(config: PointConfig, k: int) -> tuple[OrientedTriangulation, WeightedCover]:
    """A colored polygon whose degree relative to ``(V, r)`` is ``k`` (plane only).

    The colors run through the angular order of the points ``|k|`` times,
    backwards when ``k < 0``; ``k = 0`` gives a one-colored triangle. Consecutive angular gaps are below a half turn
    because ``r`` is interior, so no edge is balanced.
    """
    if config.dim != 2:
        raise InputError("circle construction is only available in the plane")
    if affine_rank(config.points) < 2:
        raise InputError("configuration must have full rank 2")
    if not relint_membership(config.points, config.base):
        raise InputError("r must lie in the interior of conv(V)")
    order = angular_order(config)
    if k == 0:
        # smallest simplicial circle, one color
        colors = [order[0]] * 3
    else:
        seq = order if k > 0 else order[::-1]
        colors = seq * abs(k)
    tri = cycle_triangulation(len(colors))
    return tri, WeightedCover.from_coloring(dict(enumerate(colors)), config.m)
