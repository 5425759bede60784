"""Balanced subsets of a point configuration and the non-balanced complex.

Index sets are handled internally as 0-based ``frozenset``s (and bitmasks in
the hot loops); the CLI converts to the 1-based labels users see.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from . import kernels
from .errors import CapacityError, InputError, MismatchError
from .geometry import integer_rows, sub, vector
from .simplicial import SimplicialComplex

MAX_POINTS = 20
MAX_DIM = 6


@dataclass(frozen=True)
class PointConfig:
    """A pair ``(V, r)``: ``m`` indexed points and a base point in ``R^dim``."""

    dim: int
    points: tuple
    base: tuple

    def __post_init__(self):
        if self.dim < 1:
            raise InputError(f"dimension must be >= 1, got {self.dim}")
        if not self.points:
            raise InputError("a configuration needs at least one point")
        pts = tuple(vector(p) for p in self.points)
        base = vector(self.base)
        if len(base) != self.dim:
            raise InputError(f"base point has dimension {len(base)}, expected {self.dim}")
        for i, p in enumerate(pts):
            if len(p) != self.dim:
                raise InputError(f"point {i + 1} has dimension {len(p)}, expected {self.dim}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "base", base)

    @classmethod
    def of(cls, points: Iterable[Sequence], base: Sequence) -> "PointConfig":
        pts = tuple(vector(p) for p in points)
        return cls(len(vector(base)), pts, vector(base))

    @property
    def m(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class BalancedProfile:
    """Inclusion-minimal balanced index sets; their up-closure is BS(V, r)."""

    m: int
    minimal_balanced: frozenset

    def __post_init__(self):
        sets = frozenset(frozenset(s) for s in self.minimal_balanced)
        for s in sets:
            if not s or any(not 0 <= i < self.m for i in s):
                raise InputError(f"balanced set {sorted(i + 1 for i in s)} is empty or out of range 1..{self.m}")
        object.__setattr__(self, "minimal_balanced", sets)

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(sorted(_mask(s) for s in self.minimal_balanced))

    def sorted_sets(self) -> list[tuple[int, ...]]:
        return sorted((tuple(sorted(s)) for s in self.minimal_balanced), key=lambda t: (len(t), t))


def _mask(indices: Iterable[int]) -> int:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


def _bits(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


class _SubsetOracle:
    """Balancedness tests for subsets of one configuration.

    Rows are pre-scaled to integers once; each query is a phase-one LP on a
    column subset. Separating directions found along the way are cached as
    bitmasks of the points they certify, so many non-balanced subsets are
    settled without an LP.
    """

    def __init__(self, config: PointConfig):
        d = config.dim
        diffs = [sub(p, config.base) for p in config.points]
        rows = [[q[t] for q in diffs] for t in range(d)]
        self.rows, _ = integer_rows(rows)
        self.d = d
        self.m = config.m
        self.outside_masks: list[int] = []
        self.lp_calls = 0

    def balanced(self, mask: int) -> bool:
        for om in self.outside_masks:
            if mask & ~om == 0:
                return False
        idx = _bits(mask)
        a = [[row[j] for j in idx] for row in self.rows]
        a.append([1] * len(idx))
        b = [0] * self.d + [1]
        self.lp_calls += 1
        feasible, _, y = kernels.phase_one(a, b)
        if feasible:
            return True
        # points strictly on the positive side of the separating direction
        om = 0
        for j in range(self.m):
            score = -sum(y[t] * self.rows[t][j] for t in range(self.d))
            if score > 0:
                om |= 1 << j
        self.outside_masks.append(om)
        return False


def _check_capacity(config: PointConfig, cap: int, max_dim: int) -> None:
    if config.m > cap:
        raise CapacityError(f"{config.m} points exceeds the cap of {cap}")
    if config.dim > max_dim:
        raise CapacityError(f"dimension {config.dim} exceeds the cap of {max_dim}")


def enumerate_minimal_balanced(
    config: PointConfig, cap: int = MAX_POINTS, max_dim: int = MAX_DIM
) -> BalancedProfile:
    """All inclusion-minimal balanced subsets.

    By Caratheodory a minimal balanced set has at most ``dim + 1`` points, so
    only subsets up to that size are tested, smallest first; supersets of a
    set already found are skipped, which makes every hit minimal.
    """
    _check_capacity(config, cap, max_dim)
    oracle = _SubsetOracle(config)
    found: list[int] = []
    for k in range(1, min(config.dim + 1, config.m) + 1):
        for combo in combinations(range(config.m), k):
            mask = _mask(combo)
            if any(f & ~mask == 0 for f in found):
                continue
            if oracle.balanced(mask):
                found.append(mask)
    return BalancedProfile(config.m, frozenset(frozenset(_bits(f)) for f in found))


def is_balanced(profile: BalancedProfile, subset: Iterable[int]) -> bool:
    subset = frozenset(subset)
    for i in subset:
        if not 0 <= i < profile.m:
            raise InputError(f"index {i + 1} out of range 1..{profile.m}")
    return any(s <= subset for s in profile.minimal_balanced)


def minimal_transversals(edges: Sequence[int]) -> list[int]:
    """Minimal hitting sets of a hypergraph given as bitmasks (Berge)."""
    trans = [0]
    for e in edges:
        grown = []
        for t in trans:
            if t & e:
                grown.append(t)
            else:
                m = e
                while m:
                    low = m & -m
                    grown.append(t | low)
                    m ^= low
        grown = sorted(set(grown), key=lambda x: (bin(x).count("1"), x))
        kept: list[int] = []
        for t in grown:
            if not any(k & ~t == 0 for k in kept):
                kept.append(t)
        trans = kept
    return trans


def complex_from_profile(profile: BalancedProfile) -> SimplicialComplex:
    """Maximal subsets avoiding every minimal balanced set."""
    full = (1 << profile.m) - 1
    edges = profile.masks
    if not edges:
        return SimplicialComplex(profile.m, frozenset([frozenset(range(profile.m))]))
    facets = frozenset(frozenset(_bits(full & ~t)) for t in minimal_transversals(edges))
    return SimplicialComplex(profile.m, facets)


def nonbalanced_complex(config: PointConfig, cap: int = MAX_POINTS) -> SimplicialComplex:
    return complex_from_profile(enumerate_minimal_balanced(config, cap))


def bs_equivalent(a: PointConfig, b: PointConfig, up_to_permutation: bool = False) -> bool:
    """Do the configurations have the same balanced families?

    The default compares index by index. With ``up_to_permutation`` the
    families are compared as hypergraphs up to relabeling the points.
    """
    if a.m != b.m:
        raise MismatchError(f"configurations have {a.m} and {b.m} points")
    pa = enumerate_minimal_balanced(a)
    pb = enumerate_minimal_balanced(b)
    if not up_to_permutation:
        return pa.minimal_balanced == pb.minimal_balanced
    return hypergraphs_isomorphic(pa, pb)


def _incidence_graph(profile: BalancedProfile):
    import networkx as nx

    g = nx.Graph()
    for i in range(profile.m):
        g.add_node(("v", i), kind="v")
    for k, s in enumerate(profile.sorted_sets()):
        g.add_node(("e", k), kind="e")
        for i in s:
            g.add_edge(("v", i), ("e", k))
    return g


def hypergraph_hash(profile: BalancedProfile) -> str:
    """Relabeling-invariant hash of the minimal balanced family."""
    import networkx as nx

    return nx.weisfeiler_lehman_graph_hash(_incidence_graph(profile), node_attr="kind")


def hypergraphs_isomorphic(pa: BalancedProfile, pb: BalancedProfile) -> bool:
    import networkx as nx

    if pa.m != pb.m or len(pa.minimal_balanced) != len(pb.minimal_balanced):
        return False
    if hypergraph_hash(pa) != hypergraph_hash(pb):
        return False
    return nx.is_isomorphic(
        _incidence_graph(pa),
        _incidence_graph(pb),
        node_match=lambda x, y: x["kind"] == y["kind"],
    )


def scale_transform(config: PointConfig, lambdas: Sequence) -> PointConfig:
    """Move each point along its ray from the base: ``l_i (v_i - r) + r``."""
    lambdas = [Fraction(x) for x in lambdas]
    if len(lambdas) != config.m:
        raise InputError(f"expected {config.m} scale factors, got {len(lambdas)}")
    for i, lam in enumerate(lambdas):
        if lam <= 0:
            raise InputError(f"scale factor {i + 1} must be positive, got {lam}")
    r = config.base
    pts = tuple(
        tuple(lam * (x - c) + c for x, c in zip(p, r)) for lam, p in zip(lambdas, config.points)
    )
    return PointConfig(config.dim, pts, r)
