"""Concrete triangulations with exact vertex positions.

Simplex subdivisions keep barycentric coordinates for every vertex, so the
carrier face of a vertex is simply the support of its coordinates. Boxes are
cut into Kuhn simplices. Facets are oriented positively with respect to the
ambient orientation, which makes every construction coherently oriented.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Mapping

from .errors import InputError
from .geometry import integer_rows
from . import kernels
from .simplicial import OrientedTriangulation, boundary_triangulation, permutation_sign


@dataclass(frozen=True)
class CarrierLabeledTriangulation:
    """Triangulated simplex ``Delta^(n-1)`` with the carrier face of each vertex.

    ``carrier[u]`` is the 0-based index set of the smallest face containing
    ``u``; ``positions[u]`` are barycentric coordinates when known.
    """

    n: int
    tri: OrientedTriangulation
    carrier: Mapping
    positions: Mapping | None = None

    def __post_init__(self):
        carrier = {u: frozenset(c) for u, c in self.carrier.items()}
        for u in self.tri.vertices:
            c = carrier.get(u)
            if not c:
                raise InputError(f"vertex {u} has no carrier")
            if any(not 0 <= i < self.n for i in c):
                raise InputError(f"vertex {u}: carrier outside 1..{self.n}")
        object.__setattr__(self, "carrier", carrier)

    @property
    def boundary(self) -> OrientedTriangulation:
        return boundary_triangulation(self.tri)


def _orient_barycentric(facet, pos):
    rows, _ = integer_rows([pos[u] for u in facet])
    d = kernels.det(rows)
    if d == 0:
        raise InputError(f"degenerate simplex {facet}")
    if d < 0:
        facet = (facet[1], facet[0]) + tuple(facet[2:])
    return facet


def _carrier_of(b) -> frozenset:
    return frozenset(i for i, x in enumerate(b) if x)


def _labeled(n, facets, pos) -> CarrierLabeledTriangulation:
    oriented = tuple(_orient_barycentric(f, pos) for f in facets) if n > 1 else tuple(facets)
    tri = OrientedTriangulation(n - 1, oriented)
    carrier = {u: _carrier_of(pos[u]) for u in tri.vertices}
    return CarrierLabeledTriangulation(n, tri, carrier, dict(pos))


def _corner(n, i):
    return tuple(Fraction(int(j == i)) for j in range(n))


def standard_simplex(n: int) -> CarrierLabeledTriangulation:
    """``Delta^(n-1)`` as a single facet on the corners ``0..n-1``."""
    pos = {i: _corner(n, i) for i in range(n)}
    return _labeled(n, [tuple(range(n))], pos)


def barycentric_subdivision(n: int) -> CarrierLabeledTriangulation:
    """First barycentric subdivision of ``Delta^(n-1)``.

    Vertices are the nonempty faces (numbered by size, then lexicographic);
    facets are the maximal flags.
    """
    faces = [c for k in range(1, n + 1) for c in combinations(range(n), k)]
    ids = {f: i for i, f in enumerate(faces)}
    pos = {ids[f]: tuple(Fraction(int(j in f), len(f)) for j in range(n)) for f in faces}
    facets = []
    for perm in permutations(range(n)):
        facets.append(tuple(ids[tuple(sorted(perm[: k + 1]))] for k in range(n)))
    return _labeled(n, facets, pos)


def _random_weights(rng: random.Random, k: int) -> list[Fraction]:
    raw = [rng.randint(1, 6) for _ in range(k)]
    total = sum(raw)
    return [Fraction(x, total) for x in raw]


def random_subdivision(n: int, max_facets: int, rng: random.Random, edge_bias: float = 0.5) -> CarrierLabeledTriangulation:
    """Random stellar subdivision of ``Delta^(n-1)`` with at most ``max_facets`` facets.

    Each step either splits an edge at a random rational point (all facets
    on the edge are split) or cones a random facet from a random interior
    point. Edge splits on the boundary put vertices on proper faces.
    """
    pos = {i: _corner(n, i) for i in range(n)}
    facets = [tuple(range(n))]
    nxt = n
    if n == 1:
        return _labeled(n, facets, pos)
    while True:
        if rng.random() < edge_bias:
            f = rng.choice(facets)
            a, b = rng.sample(f, 2)
            on_edge = [g for g in facets if a in g and b in g]
            if len(facets) + len(on_edge) > max_facets:
                break
            t = Fraction(rng.randint(1, 9), 10)
            pos[nxt] = tuple(t * x + (1 - t) * y for x, y in zip(pos[a], pos[b]))
            keep = [g for g in facets if not (a in g and b in g)]
            for g in on_edge:
                keep.append(tuple(nxt if v == a else v for v in g))
                keep.append(tuple(nxt if v == b else v for v in g))
            facets = keep
        else:
            if len(facets) + n - 1 > max_facets:
                break
            f = rng.choice(facets)
            w = _random_weights(rng, n)
            pos[nxt] = tuple(sum(wi * pos[v][j] for wi, v in zip(w, f)) for j in range(n))
            facets.remove(f)
            for i in range(n):
                facets.append(f[:i] + (nxt,) + f[i + 1:])
        nxt += 1
    return _labeled(n, facets, pos)


def simplex_embedding(n: int):
    """Affine map from barycentric coordinates of ``Delta^(n-1)`` into ``R^(n-1)``.

    Corner 0 goes to the origin and corner ``i > 0`` to ``e_i``, i.e. the
    first barycentric coordinate is dropped. This map preserves orientation,
    so positively oriented facets stay positive after embedding.
    """

    def embed(b):
        return tuple(Fraction(x) for x in b[1:])

    return embed


# ---------------------------------------------------------------- grids


@dataclass(frozen=True)
class KuhnGrid:
    """Kuhn triangulation of ``resolution^n`` cells of a lattice box.

    Lattice points are multi-indices in ``[0, resolution]^n`` with ids in
    row-major order; each cell splits into ``n!`` simplices, one per axis
    permutation.
    """

    n: int
    resolution: int

    @property
    def side(self) -> int:
        return self.resolution + 1

    def vertex_id(self, idx) -> int:
        out = 0
        for x in idx:
            out = out * self.side + x
        return out

    def vertex_index(self, vid: int) -> tuple:
        out = []
        for _ in range(self.n):
            vid, x = divmod(vid, self.side)
            out.append(x)
        return tuple(reversed(out))

    def lattice(self):
        return product(range(self.side), repeat=self.n)

    def cells(self):
        return product(range(self.resolution), repeat=self.n)

    def cell_simplices(self, cell):
        """``(facet, sign)`` pairs for one cell, in permutation order."""
        out = []
        for perm in permutations(range(self.n)):
            cur = list(cell)
            verts = [self.vertex_id(cur)]
            for axis in perm:
                cur[axis] += 1
                verts.append(self.vertex_id(cur))
            out.append((tuple(verts), permutation_sign(perm)))
        return out

    def triangulation(self) -> OrientedTriangulation:
        facets, signs = [], []
        for cell in self.cells():
            for f, s in self.cell_simplices(cell):
                facets.append(f)
                signs.append(s)
        return OrientedTriangulation(self.n, tuple(facets), tuple(signs))

    def on_box_boundary(self, vid: int) -> bool:
        return any(x in (0, self.resolution) for x in self.vertex_index(vid))


def grid_disk(k: int) -> tuple[OrientedTriangulation, list]:
    """Kuhn-triangulated ``k x k`` square and its boundary vertices counterclockwise.

    The boundary list starts at the lower-left corner.
    """
    grid = KuhnGrid(2, k)
    ring = [(i, 0) for i in range(k)] + [(k, j) for j in range(k)]
    ring += [(i, k) for i in range(k, 0, -1)] + [(0, j) for j in range(k, 0, -1)]
    return grid.triangulation(), [grid.vertex_id(p) for p in ring]
