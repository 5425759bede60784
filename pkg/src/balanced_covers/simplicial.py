"""Chain complexes of abstract simplicial complexes and oriented triangulations.

Homology is reduced and integral: the empty face is a (-1)-simplex and the
augmentation is the boundary of every vertex. Ranks and torsion come from
Smith normal forms computed with arbitrary-precision integers.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

from . import kernels
from ._pykernels import smith_diagonal_sparse
from .errors import CapacityError, InputError

MAX_FACES = 1 << 20


@dataclass(frozen=True)
class SimplicialComplex:
    """Downward closure of ``facets``; vertices are ``0..vertex_count-1``."""

    vertex_count: int
    facets: frozenset

    def __post_init__(self):
        facets = {frozenset(f) for f in self.facets}
        for f in facets:
            for v in f:
                if not 0 <= v < self.vertex_count:
                    raise InputError(f"vertex {v + 1} out of range 1..{self.vertex_count}")
        if not facets:
            facets = {frozenset()}
        maximal = frozenset(f for f in facets if not any(f < g for g in facets))
        object.__setattr__(self, "facets", maximal)

    @property
    def dimension(self) -> int:
        return max(len(f) for f in self.facets) - 1

    def sorted_facets(self) -> list[tuple[int, ...]]:
        return sorted(tuple(sorted(f)) for f in self.facets)

    def faces(self) -> list[list[tuple[int, ...]]]:
        """Nonempty faces grouped by dimension, each group sorted."""
        budget = sum(1 << len(f) for f in self.facets)
        if budget > 2 * MAX_FACES:
            # a crude bound first; the exact count is checked below
            seen: set = set()
            for f in self.facets:
                for k in range(1, len(f) + 1):
                    for c in combinations(sorted(f), k):
                        seen.add(c)
                        if len(seen) > MAX_FACES:
                            raise CapacityError(f"complex has more than {MAX_FACES} faces")
        top = self.dimension
        groups: list[set] = [set() for _ in range(top + 1)]
        for f in self.facets:
            fs = sorted(f)
            for k in range(1, len(fs) + 1):
                groups[k - 1].update(combinations(fs, k))
        if sum(len(g) for g in groups) > MAX_FACES:
            raise CapacityError(f"complex has more than {MAX_FACES} faces")
        return [sorted(g) for g in groups]

    def relabel(self, perm: Sequence[int]) -> "SimplicialComplex":
        return SimplicialComplex(
            self.vertex_count, frozenset(frozenset(perm[v] for v in f) for f in self.facets)
        )


@dataclass(frozen=True)
class HomologyGroup:
    degree: int
    betti: int
    torsion: tuple = ()

    @property
    def trivial(self) -> bool:
        return self.betti == 0 and not self.torsion


@dataclass(frozen=True)
class HomologyResult:
    groups: tuple  # HomologyGroup for degrees -1..dim

    def __getitem__(self, degree: int) -> HomologyGroup:
        for g in self.groups:
            if g.degree == degree:
                return g
        return HomologyGroup(degree, 0, ())

    @property
    def trivial(self) -> bool:
        return all(g.trivial for g in self.groups)

    def records(self) -> list[dict]:
        return [{"degree": g.degree, "betti": g.betti, "torsion": list(g.torsion)} for g in self.groups]


def _sign(i: int) -> int:
    return -1 if i & 1 else 1


def _boundary_entries(lower: Sequence[tuple], upper: Sequence[tuple]) -> dict:
    index = {f: i for i, f in enumerate(lower)}
    entries = {}
    for j, face in enumerate(upper):
        for i in range(len(face)):
            entries[(index[face[:i] + face[i + 1:]], j)] = _sign(i)
    return entries


def boundary_matrices(complex_: SimplicialComplex) -> list[list[list[int]]]:
    """Dense ``d_k`` for ``k = 1..dim``; rows and columns in lexicographic face order."""
    faces = complex_.faces() if complex_.dimension >= 0 else []
    out = []
    for k in range(1, len(faces)):
        lower, upper = faces[k - 1], faces[k]
        mat = [[0] * len(upper) for _ in lower]
        for (i, j), v in _boundary_entries(lower, upper).items():
            mat[i][j] = v
        out.append(mat)
    return out


def normalize_diagonal(diag: Iterable[int]) -> list[int]:
    """Turn any diagonal into Smith form: ``d1 | d2 | ...``, zeros dropped."""
    d = sorted(x for x in diag if x)
    n = len(d)
    for i in range(n):
        for j in range(i + 1, n):
            g = gcd(d[i], d[j])
            if g != d[i]:
                d[i], d[j] = g, d[i] * d[j] // g
    return d


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> tuple[list[int], int]:
    """Smith diagonal (length ``min(rows, cols)``) and rank of an integer matrix."""
    nrows = len(matrix)
    ncols = len(matrix[0]) if nrows else 0
    if nrows == 0 or ncols == 0:
        return [], 0
    inv = normalize_diagonal(kernels.smith_diagonal([list(r) for r in matrix]))
    rk = len(inv)
    return inv + [0] * (min(nrows, ncols) - rk), rk


# largest boundary matrix handed to the dense kernel, in entries
DENSE_SNF_LIMIT = 250_000


def _invariants(entries: dict, nrows: int, ncols: int) -> list[int]:
    if nrows == 0 or ncols == 0 or not entries:
        return []
    if kernels.BACKEND == "compiled" and nrows * ncols <= DENSE_SNF_LIMIT:
        mat = [[0] * ncols for _ in range(nrows)]
        for (i, j), v in entries.items():
            mat[i][j] = v
        return normalize_diagonal(kernels.smith_diagonal(mat))
    return normalize_diagonal(smith_diagonal_sparse(entries, nrows, ncols))


def reduced_homology(complex_: SimplicialComplex) -> HomologyResult:
    faces = complex_.faces() if complex_.dimension >= 0 else []
    top = len(faces) - 1
    counts = {-1: 1}
    for k, group in enumerate(faces):
        counts[k] = len(group)
    invariants = {}
    if faces:
        invariants[0] = [1]  # augmentation onto the empty face
    for k in range(1, top + 1):
        invariants[k] = _invariants(_boundary_entries(faces[k - 1], faces[k]), len(faces[k - 1]), len(faces[k]))
    groups = []
    for k in range(-1, top + 1):
        rk_out = len(invariants.get(k, []))
        rk_in = invariants.get(k + 1, [])
        betti = counts[k] - rk_out - len(rk_in)
        torsion = tuple(x for x in rk_in if x > 1)
        groups.append(HomologyGroup(k, betti, torsion))
    return HomologyResult(tuple(groups))


def verify_sphere_homology(complex_: SimplicialComplex, k: int) -> bool:
    """Does ``complex_`` have the reduced homology of ``S^(k-1)``?

    ``k = 0`` asks for the empty sphere (only the void face); ``k = 1`` for
    two points.
    """
    if k < 0:
        raise InputError("sphere rank must be >= 0")
    h = reduced_homology(complex_)
    for g in h.groups:
        want = 1 if g.degree == k - 1 else 0
        if g.betti != want or g.torsion:
            return False
    return h[k - 1].betti == 1


def cone_apex_detect(complex_: SimplicialComplex) -> int | None:
    """Lowest vertex lying in every facet, if any.

    ``F + a`` is a face for each facet ``F`` exactly when ``a`` belongs to
    every facet, since facets are maximal.
    """
    common = frozenset.intersection(*complex_.facets)
    return min(common) if common else None


# ---------------------------------------------------------------- oriented


@dataclass(frozen=True)
class OrientedTriangulation:
    """Oriented simplicial chain with unit coefficients.

    ``facets`` are ordered vertex tuples; vertex ids are arbitrary ints. The
    orientation of facet ``i`` is its vertex order times
    ``orientation_signs[i]``.
    """

    dim: int
    facets: tuple
    orientation_signs: tuple = field(default=())

    def __post_init__(self):
        facets = tuple(tuple(f) for f in self.facets)
        for f in facets:
            if len(f) != self.dim + 1:
                raise InputError(f"facet {f} does not have {self.dim + 1} vertices")
        signs = tuple(self.orientation_signs) or (1,) * len(facets)
        if len(signs) != len(facets) or any(s not in (1, -1) for s in signs):
            raise InputError("orientation signs must be one +-1 per facet")
        object.__setattr__(self, "facets", facets)
        object.__setattr__(self, "orientation_signs", signs)

    @property
    def vertices(self) -> list:
        return sorted({v for f in self.facets for v in f})

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    def reversed(self) -> "OrientedTriangulation":
        return OrientedTriangulation(self.dim, self.facets, tuple(-s for s in self.orientation_signs))

    def relabel(self, mapping) -> "OrientedTriangulation":
        return OrientedTriangulation(
            self.dim, tuple(tuple(mapping[v] for v in f) for f in self.facets), self.orientation_signs
        )


def permutation_sign(seq: Sequence) -> int:
    """Sign of the permutation sorting ``seq``; 0 if it has repeats."""
    items = list(seq)
    if len(set(items)) != len(items):
        return 0
    sign = 1
    seen = [False] * len(items)
    order = sorted(range(len(items)), key=lambda i: items[i])
    for i in range(len(items)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def induced_faces(tri: OrientedTriangulation):
    """Yield ``(facet_index, sorted_face, sign)`` for every codimension-one face."""
    for idx, (f, s) in enumerate(zip(tri.facets, tri.orientation_signs)):
        for i in range(len(f)):
            face = f[:i] + f[i + 1:]
            ps = permutation_sign(face)
            yield idx, tuple(sorted(face)), s * _sign(i) * ps


def boundary_chain(tri: OrientedTriangulation) -> dict:
    """Net coefficient of every codimension-one face."""
    net: dict = defaultdict(int)
    for _, face, sign in induced_faces(tri):
        net[face] += sign
    return {f: c for f, c in net.items() if c}


def _facets_valid(tri: OrientedTriangulation) -> bool:
    seen = set()
    for f in tri.facets:
        if permutation_sign(f) == 0:
            return False
        key = tuple(sorted(f))
        if key in seen:
            return False
        seen.add(key)
    return True


def orientation_coherence_check(tri: OrientedTriangulation, allow_boundary: bool = False) -> bool:
    """Every codimension-one face lies in exactly two facets, oppositely induced.

    With ``allow_boundary`` a face may also lie in a single facet (manifold
    with boundary).
    """
    if not tri.facets or not _facets_valid(tri):
        return False
    incident: dict = defaultdict(list)
    for _, face, sign in induced_faces(tri):
        incident[face].append(sign)
    for signs in incident.values():
        if len(signs) == 2:
            if signs[0] + signs[1] != 0:
                return False
        elif not (allow_boundary and len(signs) == 1):
            return False
    return True


def is_cycle(tri: OrientedTriangulation) -> bool:
    """Is the chain closed (zero boundary)?"""
    return _facets_valid(tri) and not boundary_chain(tri)


def boundary_triangulation(tri: OrientedTriangulation) -> OrientedTriangulation:
    """Oriented boundary of a chain, with the induced orientation."""
    if tri.dim < 1:
        raise InputError("a 0-dimensional chain has no boundary triangulation")
    chain = boundary_chain(tri)
    faces = sorted(chain)
    signs = []
    for f in faces:
        c = chain[f]
        if c not in (1, -1):
            raise InputError(f"boundary face {f} has coefficient {c}")
        signs.append(c)
    return OrientedTriangulation(tri.dim - 1, tuple(faces), tuple(signs))
