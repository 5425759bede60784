from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from balanced_covers.applications import (
    KkmsInstance,
    check_sperner,
    find_rainbow,
    kkms_boundary_degree,
    kkms_config,
    kkms_subsets,
    kkms_witness,
    random_kkm_cover,
    random_kkms_instance,
    random_sperner_instance,
    simplex_config,
    sperner_degree,
    theorem_b_check,
)
from balanced_covers.balanced import enumerate_minimal_balanced
from balanced_covers.degree import WeightedCover
from balanced_covers.errors import InputError
from balanced_covers.simplicial import OrientedTriangulation, is_cycle, orientation_coherence_check
from balanced_covers.triangulations import (
    CarrierLabeledTriangulation,
    KuhnGrid,
    barycentric_subdivision,
    grid_disk,
    random_subdivision,
    standard_simplex,
)

from gen import SQUARE

F = Fraction


def test_standard_simplex_and_barycentric_subdivision():
    s = standard_simplex(3)
    assert len(s.tri.facets) == 1 and s.carrier[0] == {0}
    b = barycentric_subdivision(3)
    assert len(b.tri.facets) == 6
    assert orientation_coherence_check(b.tri, allow_boundary=True)
    assert is_cycle(b.boundary) and len(b.boundary.facets) == 6
    assert sorted(len(c) for c in b.carrier.values()) == [1, 1, 1, 2, 2, 2, 3]


def test_sperner_check_examples():
    b = barycentric_subdivision(3)
    good = {u: min(c) for u, c in b.carrier.items()}
    assert check_sperner(b, good)
    on_edge = next(u for u, c in b.carrier.items() if c == {0, 1})
    assert not check_sperner(b, {**good, on_edge: 2})
    del good[on_edge]
    with pytest.raises(InputError):
        check_sperner(b, good)


def test_coned_triangle_has_one_rainbow_facet():
    # corners 0,1,2 and an interior apex 3 colored like corner 0
    tri = OrientedTriangulation(2, ((3, 1, 2), (0, 3, 2), (0, 1, 3)))
    lab = CarrierLabeledTriangulation(3, tri, {0: {0}, 1: {1}, 2: {2}, 3: {0, 1, 2}})
    coloring = {0: 0, 1: 1, 2: 2, 3: 0}
    assert check_sperner(lab, coloring)
    rep = find_rainbow(tri, coloring, 3)
    assert rep.facets == (0,) and rep.signed_count == 1


def test_barycentric_rainbow_count_is_odd():
    b = barycentric_subdivision(3)
    rng = random.Random(0)
    for _ in range(30):
        coloring = {u: rng.choice(sorted(c)) for u, c in b.carrier.items()}
        rep = find_rainbow(b.tri, coloring, 3)
        assert len(rep.facets) % 2 == 1 and rep.signed_count == 1


def test_rainbow_rejects_incoherent_triangulation():
    tri = OrientedTriangulation(2, ((0, 1, 2), (1, 2, 3)))
    with pytest.raises(InputError):
        find_rainbow(tri, {0: 0, 1: 1, 2: 2, 3: 0}, 3)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(2, 4))
def test_sperner_parity_and_degree(seed, n):
    rng = random.Random(seed)
    labeled, coloring = random_sperner_instance(n, 40, rng)
    assert orientation_coherence_check(labeled.tri, allow_boundary=True)
    rep = find_rainbow(labeled.tri, coloring, n)
    assert len(rep.facets) % 2 == 1
    assert rep.signed_count == 1
    assert sperner_degree(labeled, coloring, seed).degree == 1


def test_random_subdivision_respects_size_and_carriers():
    rng = random.Random(3)
    for n in (2, 3, 4):
        lab = random_subdivision(n, 50, rng)
        assert len(lab.tri.facets) <= 50
        for u, c in lab.carrier.items():
            assert c == frozenset(i for i, x in enumerate(lab.positions[u]) if x)


def test_simplex_config_is_balanced_only_as_a_whole():
    for n in (2, 3, 4):
        prof = enumerate_minimal_balanced(simplex_config(n))
        assert prof.minimal_balanced == {frozenset(range(n))}


def square_coloring(k, colors):
    """Color grid vertices by the square point best aligned with their offset."""
    grid = KuhnGrid(2, k)
    out = {}
    for idx in grid.lattice():
        u = (2 * idx[0] - k, 2 * idx[1] - k)
        scores = [u[0], u[1], -u[0], -u[1]]
        best = max(range(4), key=lambda i: (scores[i], -i))
        out[grid.vertex_id(idx)] = colors[best]
    return out


def test_theorem_b_square_disk():
    tri, ring = grid_disk(4)
    cover = WeightedCover.from_coloring(square_coloring(4, (0, 1, 2, 3)), 4)
    rep = theorem_b_check(tri, cover, SQUARE)
    assert rep.boundary.degree == 1 and rep.obstruction
    assert rep.balanced_set in ((0, 2), (1, 3))
    assert set(rep.balanced_set) <= rep.support


def test_theorem_b_without_obstruction():
    tri, _ = grid_disk(4)
    cover = WeightedCover.from_coloring(square_coloring(4, (0, 1, 0, 1)), 4)
    rep = theorem_b_check(tri, cover, SQUARE)
    assert rep.boundary.degree == 0 and not rep.obstruction
    assert rep.witness_facet is None


def test_theorem_b_rejects_dimension_mismatch():
    tri, _ = grid_disk(2)
    cover = WeightedCover.from_coloring({u: 0 for u in tri.vertices}, 3)
    with pytest.raises(InputError):
        theorem_b_check(tri, cover, simplex_config(4))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_kkm_covers_have_boundary_degree_one(n):
    rng = random.Random(n)
    for _ in range(10):
        lab = random_subdivision(n, 30, rng)
        cover = random_kkm_cover(lab, rng)
        rep = theorem_b_check(lab.tri, cover, simplex_config(n))
        assert rep.boundary.degree == 1
        assert rep.balanced_set == tuple(range(n))


def test_kkms_subsets_and_config():
    assert [tuple(sorted(s)) for s in kkms_subsets(3)] == [
        (0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)
    ]
    cfg = kkms_config(2)
    assert cfg.points == ((F(0),), (F(1),), (F(1, 2),)) and cfg.base == (F(1, 2),)
    prof = enumerate_minimal_balanced(cfg)
    assert prof.minimal_balanced == {frozenset({2}), frozenset({0, 1})}


def test_kkms_examples_on_an_edge():
    edge = standard_simplex(2)
    inst = KkmsInstance(2, edge, WeightedCover({0: (1, 0, 0), 1: (0, 1, 0)}))
    w = kkms_witness(inst)
    assert w.facet == 0 and w.family == (frozenset({0}), frozenset({1}))
    assert kkms_boundary_degree(inst).degree == 1
    # midpoint 2 covered only by the full edge
    split = CarrierLabeledTriangulation(
        2, OrientedTriangulation(1, ((0, 2), (2, 1))), {0: {0}, 1: {1}, 2: {0, 1}}
    )
    inst = KkmsInstance(2, split, WeightedCover({0: (1, 0, 0), 1: (0, 1, 0), 2: (0, 0, 1)}))
    w = kkms_witness(inst)
    assert w.facet == 0 and w.family == (frozenset({0, 1}),)
    assert kkms_boundary_degree(inst).degree == 1


def test_kkms_carrier_condition():
    edge = standard_simplex(2)
    with pytest.raises(InputError):
        KkmsInstance(2, edge, WeightedCover({0: (0, 1, 0), 1: (0, 1, 0)}))
    with pytest.raises(InputError):
        KkmsInstance(2, edge, WeightedCover({0: (1, 0), 1: (0, 1)}))


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(2, 3))
def test_random_kkms_instances(seed, n):
    inst = random_kkms_instance(n, 30, random.Random(seed))
    prof = enumerate_minimal_balanced(inst.config)
    w = kkms_witness(inst, prof)
    members = {i for i, s in enumerate(kkms_subsets(n)) if s in w.family}
    assert any(b == members for b in prof.minimal_balanced)
    assert kkms_boundary_degree(inst, seed, prof).degree == 1
