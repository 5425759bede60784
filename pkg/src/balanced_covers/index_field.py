"""Balanced-intersection components of grid covers and their indices.

A grid cover samples a partition of unity at the lattice points of a box
that is cut into Kuhn simplices. A facet is singular when the union of its
vertex supports is r-balanced. Singular facets are grouped into components,
each component gets a closed-star neighborhood, and the index of the
component is the degree of the cover on the boundary of that neighborhood.
Indices add up to the degree on the boundary of the whole box.
"""
from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .balanced import BalancedProfile, PointConfig, enumerate_minimal_balanced, is_balanced
from .degree import DegreeResult, WeightedCover, degree
from .errors import BoundaryContactError, InputError, TheoremViolationError
from .geometry import Inside, conv_membership, dot, sub
from .simplicial import OrientedTriangulation, boundary_triangulation
from .triangulations import KuhnGrid

MAX_GRID_FACETS = 200_000


@dataclass(frozen=True)
class GridCover:
    """Weight vectors at the lattice points of ``[lower, upper]``.

    ``weights`` maps vertex ids (row-major over ``[0, resolution]^n``) to
    weight vectors of a common length ``m``.
    """

    n: int
    lower: tuple
    upper: tuple
    resolution: int
    weights: Mapping

    def __post_init__(self):
        if self.n not in (2, 3):
            raise InputError(f"grid dimension must be 2 or 3, got {self.n}")
        if self.resolution < 1:
            raise InputError("resolution must be positive")
        lower = tuple(Fraction(x) for x in self.lower)
        upper = tuple(Fraction(x) for x in self.upper)
        if len(lower) != self.n or len(upper) != self.n:
            raise InputError(f"box corners must have {self.n} coordinates")
        if any(a >= b for a, b in zip(lower, upper)):
            raise InputError("box lower corner must be below the upper corner")
        grid = self.grid
        facets = grid.resolution**self.n * (2 if self.n == 2 else 6)
        if facets > MAX_GRID_FACETS:
            raise InputError(f"grid has {facets} facets, limit is {MAX_GRID_FACETS}")
        expected = grid.side**self.n
        if len(self.weights) != expected or any(not 0 <= u < expected for u in self.weights):
            raise InputError(f"grid needs weights at exactly {expected} lattice points")
        cover = self.weights if isinstance(self.weights, WeightedCover) else WeightedCover(self.weights)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "weights", cover.weights)
        object.__setattr__(self, "_cover", cover)

    @property
    def grid(self) -> KuhnGrid:
        return KuhnGrid(self.n, self.resolution)

    @property
    def cover(self) -> WeightedCover:
        return self._cover

    @property
    def m(self) -> int:
        return self._cover.m

    def position(self, vid: int) -> tuple:
        idx = self.grid.vertex_index(vid)
        return tuple(
            lo + (hi - lo) * Fraction(i, self.resolution) for lo, hi, i in zip(self.lower, self.upper, idx)
        )

    def triangulation(self) -> OrientedTriangulation:
        return self.grid.triangulation()

    def reflected(self) -> "GridCover":
        """Mirror image through the hyperplane ``x_1 = const`` at the box center."""
        g = self.grid
        out = {}
        for vid, w in self.weights.items():
            idx = list(g.vertex_index(vid))
            idx[0] = self.resolution - idx[0]
            out[g.vertex_id(idx)] = w
        return GridCover(self.n, self.lower, self.upper, self.resolution, out)


# ---------------------------------------------------------------- builders


def _color_weights(config: PointConfig, u: Sequence[Fraction], mode: str) -> tuple:
    scores = [dot(sub(p, config.base), u) for p in config.points]
    m = len(scores)
    if mode == "argmax":
        best = max(range(m), key=lambda i: (scores[i], -i))
        return tuple(Fraction(int(i == best)) for i in range(m))
    if mode == "soft":
        top = max(scores)
        if top <= 0:
            raise InputError("direction field has no positive score; is r interior?")
        pos = [max(2 * s - top, Fraction(0)) for s in scores]
        total = sum(pos)
        return tuple(x / total for x in pos)
    raise InputError(f"unknown weight mode {mode!r}")


def field_cover(
    config: PointConfig,
    direction: Callable[[tuple], tuple],
    resolution: int,
    lower: Sequence,
    upper: Sequence,
    mode: str = "argmax",
) -> GridCover:
    """Sample a direction field on the lattice and turn it into weights.

    ``argmax`` gives each vertex the unit weight of the point ``v_i`` with the
    largest score ``<v_i - r, u>`` (ties to the lowest index); ``soft``
    spreads weight over every point scoring above half the maximum.
    """
    n = config.dim
    lower = tuple(Fraction(x) for x in lower)
    upper = tuple(Fraction(x) for x in upper)
    g = KuhnGrid(n, resolution)
    weights = {}
    for idx in g.lattice():
        x = tuple(lo + (hi - lo) * Fraction(i, resolution) for lo, hi, i in zip(lower, upper, idx))
        u = direction(x)
        if not any(u):
            raise InputError(f"direction field vanishes at lattice point {idx}")
        weights[g.vertex_id(idx)] = _color_weights(config, u, mode)
    return GridCover(n, lower, upper, resolution, weights)


def _cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def vortex_field(centers: Sequence[Sequence], charges: Sequence[int]) -> Callable:
    """Planar field ``prod (z - c_j)^(+-1)``; ``-1`` uses the conjugate."""
    centers = [tuple(Fraction(x) for x in c) for c in centers]
    for s in charges:
        if s not in (1, -1):
            raise InputError("vortex charges must be +1 or -1")

    def u(x):
        acc = (Fraction(1), Fraction(0))
        for c, s in zip(centers, charges):
            z = (x[0] - c[0], (x[1] - c[1]) * s)
            acc = _cmul(acc, z)
        return acc

    return u


def hedgehog_field(center: Sequence, charge: int) -> Callable:
    """``x - c`` in any dimension; charge ``-1`` flips the first coordinate."""
    c = tuple(Fraction(x) for x in center)
    if charge not in (1, -1):
        raise InputError("charge must be +1 or -1")

    def u(x):
        v = list(sub(x, c))
        v[0] *= charge
        return tuple(v)

    return u


def _default_box(n):
    return (Fraction(-1),) * n, (Fraction(1),) * n


def vortex(config: PointConfig, resolution: int, center=None, charge: int = 1, mode: str = "argmax") -> GridCover:
    """Single vortex in ``[-1, 1]^n``; the default center avoids lattice points."""
    n = config.dim
    lower, upper = _default_box(n)
    if center is None:
        center = tuple(Fraction(1, 3 * resolution) * (k + 1) for k in range(n))
    if n == 2:
        fieldf = vortex_field([center], [charge])
    else:
        fieldf = hedgehog_field(center, charge)
    return field_cover(config, fieldf, resolution, lower, upper, mode)


def bivortex(
    config: PointConfig, resolution: int, charges=(1, -1), centers=None, mode: str = "argmax"
) -> GridCover:
    """Two planar vortices on the diagonal of ``[-1, 1]^2``."""
    if config.dim != 2:
        raise InputError("bivortex is only available in the plane")
    if centers is None:
        off = Fraction(1, 3 * resolution)
        h = Fraction(1, 3)
        centers = [(-h + off, -h + 2 * off), (h + off, h + 2 * off)]
    lower, upper = _default_box(2)
    return field_cover(config, vortex_field(centers, charges), resolution, lower, upper, mode)


def constant(config: PointConfig, resolution: int, weights: Sequence) -> GridCover:
    n = config.dim
    w = tuple(Fraction(x) for x in weights)
    if len(w) != config.m:
        raise InputError(f"weight vector needs {config.m} entries")
    lower, upper = _default_box(n)
    g = KuhnGrid(n, resolution)
    return GridCover(n, lower, upper, resolution, {g.vertex_id(i): w for i in g.lattice()})


def random_planar_cover(config: PointConfig, rng: random.Random, max_resolution: int = 32) -> GridCover:
    """Random product of 1 to 3 vortices with centers off the lattice.

    Centers stay in the middle half of the box, which keeps every singular
    region inside the window for moderate resolutions.
    """
    if config.dim != 2:
        raise InputError("random planar covers need a planar configuration")
    resolution = rng.randint(max(8, max_resolution // 2), max_resolution)
    count = rng.randint(1, 3)
    off = Fraction(1, 3 * resolution)
    centers, charges = [], []
    for _ in range(count):
        cx = Fraction(rng.randint(-resolution // 4, resolution // 4 - 1), resolution // 2) + off
        cy = Fraction(rng.randint(-resolution // 4, resolution // 4 - 1), resolution // 2) + 2 * off
        centers.append((cx, cy))
        charges.append(rng.choice((1, -1)))
    mode = rng.choice(("argmax", "soft"))
    lower, upper = _default_box(2)
    return field_cover(config, vortex_field(centers, charges), resolution, lower, upper, mode)


# ---------------------------------------------------------------- analysis


def _check_dim(grid: GridCover, config: PointConfig):
    if grid.n != config.dim:
        raise InputError(f"grid dimension {grid.n} does not match configuration dimension {config.dim}")
    if grid.m != config.m:
        raise InputError(f"grid weights have {grid.m} entries but the configuration has {config.m} points")


def singular_facets(
    grid: GridCover, config: PointConfig, profile: BalancedProfile | None = None
) -> frozenset:
    """Facet ids whose support union is r-balanced."""
    _check_dim(grid, config)
    if profile is None:
        profile = enumerate_minimal_balanced(config)
    cover = grid.cover
    tri = grid.triangulation()
    cache: dict = {}
    out = set()
    for i, f in enumerate(tri.facets):
        s = frozenset().union(*(cover.support(u) for u in f))
        hit = cache.get(s)
        if hit is None:
            hit = cache[s] = is_balanced(profile, s)
        if hit:
            out.add(i)
    return frozenset(out)


def image_singular_facets(grid: GridCover, config: PointConfig) -> frozenset:
    """Facet ids whose image simplex contains ``r`` (the stricter notion)."""
    _check_dim(grid, config)
    cover = grid.cover
    tri = grid.triangulation()
    images = {u: cover.image(u, config) for u in tri.vertices}
    out = set()
    for i, f in enumerate(tri.facets):
        if isinstance(conv_membership([images[u] for u in f], config.base), Inside):
            out.add(i)
    return frozenset(out)


@dataclass
class BalancedComponent:
    cells: frozenset
    neighborhood: frozenset
    neighborhood_boundary: OrientedTriangulation
    index: int | None = None
    stable: bool | None = None


def _face_adjacency(tri: OrientedTriangulation, ids) -> dict:
    by_face = defaultdict(list)
    for i in ids:
        f = tri.facets[i]
        for k in range(len(f)):
            by_face[tuple(sorted(f[:k] + f[k + 1:]))].append(i)
    adj = defaultdict(set)
    for group in by_face.values():
        for a in group:
            adj[a].update(b for b in group if b != a)
    return adj


def _classes(ids, adj) -> list:
    seen, out = set(), []
    for start in sorted(ids):
        if start in seen:
            continue
        stack, comp = [start], set()
        seen.add(start)
        while stack:
            a = stack.pop()
            comp.add(a)
            for b in adj.get(a, ()):
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        out.append(frozenset(comp))
    return out


class _Stars:
    def __init__(self, tri: OrientedTriangulation):
        self.tri = tri
        self.at = defaultdict(list)
        for i, f in enumerate(tri.facets):
            for u in f:
                self.at[u].append(i)

    def verts(self, ids) -> set:
        return {u for i in ids for u in self.tri.facets[i]}

    def star(self, ids, avoid=frozenset()) -> frozenset:
        out = set(ids)
        for u in self.verts(ids):
            for j in self.at[u]:
                if avoid.isdisjoint(self.tri.facets[j]):
                    out.add(j)
        return frozenset(out)


def _sub_boundary(tri: OrientedTriangulation, ids) -> OrientedTriangulation:
    ids = sorted(ids)
    chain = OrientedTriangulation(
        tri.dim, tuple(tri.facets[i] for i in ids), tuple(tri.orientation_signs[i] for i in ids)
    )
    return boundary_triangulation(chain)


def components(
    grid: GridCover, singular: frozenset, tri: OrientedTriangulation | None = None
) -> list[BalancedComponent]:
    """Group singular facets and attach closed-star neighborhoods.

    Face-connected classes whose neighborhoods share a vertex are merged, so
    distinct neighborhoods never meet. A neighborhood reaching the box
    boundary raises :class:`BoundaryContactError`.
    """
    if not singular:
        return []
    if tri is None:
        tri = grid.triangulation()
    stars = _Stars(tri)
    classes = _classes(singular, _face_adjacency(tri, singular))
    merged = True
    while merged:
        merged = False
        hoods = [stars.verts(stars.star(c)) for c in classes]
        for a in range(len(classes)):
            for b in range(a + 1, len(classes)):
                if not hoods[a].isdisjoint(hoods[b]):
                    classes[a] = classes[a] | classes[b]
                    del classes[b]
                    merged = True
                    break
            if merged:
                break
    classes.sort(key=min)
    g = grid.grid
    out = []
    for c in classes:
        hood = stars.star(c)
        if any(g.on_box_boundary(u) for u in stars.verts(hood)):
            raise BoundaryContactError(
                f"singular region around facet {min(c) + 1} reaches the box boundary; enlarge the window"
            )
        out.append(BalancedComponent(c, hood, _sub_boundary(tri, hood)))
    return out


def local_index(
    comp: BalancedComponent,
    grid: GridCover,
    config: PointConfig,
    seed: int = 0,
    profile: BalancedProfile | None = None,
) -> int:
    res = degree(comp.neighborhood_boundary, grid.cover, config, seed, profile=profile, closed="cycle")
    if not res.ok:
        raise TheoremViolationError("neighborhood boundary of a component meets a balanced simplex")
    return res.degree


def grown_index(
    comp: BalancedComponent,
    others: Sequence[BalancedComponent],
    grid: GridCover,
    config: PointConfig,
    tri: OrientedTriangulation,
    seed: int = 0,
    profile: BalancedProfile | None = None,
) -> int:
    """Index on the neighborhood grown by one ring of stars.

    The ring stops short of the other components' singular facets, so the
    added region contains no singular facet.
    """
    stars = _Stars(tri)
    avoid = frozenset(stars.verts(frozenset().union(*(o.cells for o in others)))) if others else frozenset()
    grown = stars.star(comp.neighborhood, avoid)
    bd = _sub_boundary(tri, grown)
    res = degree(bd, grid.cover, config, seed, profile=profile, closed="cycle")
    if not res.ok:
        raise TheoremViolationError("grown neighborhood boundary meets a balanced simplex")
    return res.degree


@dataclass
class AdditivityReport:
    outer_degree: int
    components: list
    discrepancies: frozenset = field(default_factory=frozenset)

    @property
    def index_sum(self) -> int:
        return sum(c.index for c in self.components)

    @property
    def additive(self) -> bool:
        return self.outer_degree == self.index_sum

    @property
    def stable(self) -> bool:
        return all(c.stable for c in self.components)


def outer_degree(
    grid: GridCover, config: PointConfig, seed: int = 0, profile: BalancedProfile | None = None
) -> DegreeResult:
    tri = grid.triangulation()
    return degree(boundary_triangulation(tri), grid.cover, config, seed, profile=profile)


def additivity_check(
    grid: GridCover, config: PointConfig, seed: int = 0, check_stability: bool = True
) -> AdditivityReport:
    """Outer boundary degree against the sum of local indices.

    Also records facets that are singular by support but whose image does
    not contain ``r``; the two notions are reported, not reconciled.
    """
    _check_dim(grid, config)
    profile = enumerate_minimal_balanced(config)
    tri = grid.triangulation()
    sing = singular_facets(grid, config, profile)
    comps = components(grid, sing, tri)
    outer = degree(boundary_triangulation(tri), grid.cover, config, seed, profile=profile)
    if not outer.ok:
        raise BoundaryContactError("the box boundary meets a balanced simplex")
    for k, c in enumerate(comps):
        c.index = local_index(c, grid, config, seed, profile)
        if check_stability:
            others = comps[:k] + comps[k + 1:]
            c.stable = grown_index(c, others, grid, config, tri, seed, profile) == c.index
    image = image_singular_facets(grid, config)
    if not image <= sing:
        raise TheoremViolationError("a facet image contains r but its support is not balanced")
    return AdditivityReport(outer.degree, comps, sing - image)


# ---------------------------------------------------------------- figures


_PALETTE = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


def component_svg(grid: GridCover, report: AdditivityReport, size: int = 480) -> str:
    """Static SVG of a planar grid: singular facets colored by component."""
    if grid.n != 2:
        raise InputError("SVG output is only available for planar grids")
    tri = grid.triangulation()
    owner = {}
    for k, c in enumerate(report.components):
        for i in c.cells:
            owner[i] = k
    span = [hi - lo for lo, hi in zip(grid.lower, grid.upper)]

    def xy(u):
        p = grid.position(u)
        x = float((p[0] - grid.lower[0]) / span[0]) * size
        y = float((grid.upper[1] - p[1]) / span[1]) * size
        return f"{x:.2f},{y:.2f}"

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    for i, f in enumerate(tri.facets):
        k = owner.get(i)
        fill = "#f4f4f4" if k is None else _PALETTE[k % len(_PALETTE)]
        pts = " ".join(xy(u) for u in f)
        lines.append(f'<polygon points="{pts}" fill="{fill}" stroke="#cccccc" stroke-width="0.3"/>')
    for k, c in enumerate(report.components):
        u = min(v for i in c.cells for v in tri.facets[i])
        x, y = xy(u).split(",")
        lines.append(f'<text x="{x}" y="{y}" font-size="12" font-family="sans-serif">{c.index:+d}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
