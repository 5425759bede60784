from __future__ import annotations

import random
from fractions import Fraction

import pytest

from balanced_covers.applications import simplex_config
from balanced_covers.balanced import PointConfig, scale_transform
from balanced_covers.errors import BoundaryContactError, InputError
from balanced_covers.index_field import (
    GridCover,
    additivity_check,
    bivortex,
    component_svg,
    constant,
    image_singular_facets,
    outer_degree,
    random_planar_cover,
    singular_facets,
    vortex,
)
from balanced_covers.triangulations import KuhnGrid

from gen import SQUARE, TRIANGLE

F = Fraction


def indices(report):
    return [c.index for c in report.components]


def test_kuhn_grid_shape():
    g = KuhnGrid(2, 3)
    assert len(g.triangulation().facets) == 18
    assert g.vertex_index(g.vertex_id((2, 1))) == (2, 1)
    assert g.on_box_boundary(g.vertex_id((0, 1))) and not g.on_box_boundary(g.vertex_id((1, 2)))
    assert len(KuhnGrid(3, 2).triangulation().facets) == 48


@pytest.mark.parametrize("charge", [1, -1])
def test_single_vortex(charge):
    grid = vortex(SQUARE, 8, charge=charge)
    rep = additivity_check(grid, SQUARE)
    assert rep.outer_degree == charge
    assert indices(rep) == [charge]
    assert rep.additive and rep.stable


@pytest.mark.parametrize("charges", [(1, -1), (1, 1), (-1, -1)])
def test_bivortex(charges):
    rep = additivity_check(bivortex(SQUARE, 12, charges), SQUARE)
    assert sorted(indices(rep)) == sorted(charges)
    assert rep.outer_degree == sum(charges) and rep.additive and rep.stable


def test_soft_mode_matches_argmax_indices():
    for mode in ("argmax", "soft"):
        rep = additivity_check(bivortex(TRIANGLE, 12, (1, 1), mode=mode), TRIANGLE)
        assert indices(rep) == [1, 1] and rep.additive


def test_hedgehog_in_space():
    cfg = simplex_config(4)
    rep = additivity_check(vortex(cfg, 6), cfg)
    assert abs(rep.outer_degree) == 1 and indices(rep) == [rep.outer_degree]
    rep2 = additivity_check(vortex(cfg, 6, charge=-1), cfg)
    assert rep2.outer_degree == -rep.outer_degree


def test_constant_field_has_no_singular_set():
    grid = constant(SQUARE, 6, (1, 0, 0, 0))
    assert singular_facets(grid, SQUARE) == frozenset()
    rep = additivity_check(grid, SQUARE)
    assert rep.outer_degree == 0 and rep.components == []


def test_balanced_constant_field_touches_the_box():
    grid = constant(SQUARE, 4, (F(1, 2), 0, F(1, 2), 0))
    with pytest.raises(BoundaryContactError):
        additivity_check(grid, SQUARE)


def test_removable_cluster_has_index_zero():
    g = KuhnGrid(2, 6)
    weights = {g.vertex_id(i): (1, 0, 0, 0) for i in g.lattice()}
    weights[g.vertex_id((3, 3))] = (F(1, 2), 0, F(1, 2), 0)
    grid = GridCover(2, (-1, -1), (1, 1), 6, weights)
    rep = additivity_check(grid, SQUARE)
    assert indices(rep) == [0] and rep.outer_degree == 0 and rep.stable
    assert len(rep.components[0].cells) == 6


def test_reflection_negates_indices():
    grid = bivortex(SQUARE, 12, (1, 1))
    a = additivity_check(grid, SQUARE)
    b = additivity_check(grid.reflected(), SQUARE)
    assert b.outer_degree == -a.outer_degree
    assert sorted(indices(b)) == sorted(-i for i in indices(a))


def test_indices_depend_only_on_balanced_sets():
    grid = bivortex(SQUARE, 12, (1, -1))
    base = additivity_check(grid, SQUARE)
    rotated = PointConfig.of([(1, 1), (-1, 1), (-1, -1), (1, -1)], (0, 0))
    for other in (scale_transform(SQUARE, (1, 2, 3, 4)), rotated):
        rep = additivity_check(grid, other)
        assert [abs(i) for i in indices(rep)] == [abs(i) for i in indices(base)]
        assert [c.cells for c in rep.components] == [c.cells for c in base.components]


def test_image_singular_is_subset_of_support_singular():
    for mode in ("argmax", "soft"):
        grid = bivortex(SQUARE, 10, (1, -1), mode=mode)
        assert image_singular_facets(grid, SQUARE) <= singular_facets(grid, SQUARE)
    rep = additivity_check(bivortex(SQUARE, 10, (1, -1), mode="soft"), SQUARE)
    assert rep.discrepancies <= singular_facets(bivortex(SQUARE, 10, (1, -1), mode="soft"), SQUARE)


def test_random_planar_covers_are_additive():
    rng = random.Random(5)
    for _ in range(4):
        grid = random_planar_cover(SQUARE, rng)
        rep = additivity_check(grid, SQUARE)
        assert rep.additive and rep.stable
        assert outer_degree(grid, SQUARE).degree == rep.index_sum


def test_grid_validation():
    with pytest.raises(InputError):
        constant(PointConfig.of([(1,), (-1,)], (0,)), 4, (1, 0))
    with pytest.raises(InputError):
        GridCover(2, (-1, -1), (1, 1), 2, {0: (1, 0)})
    with pytest.raises(InputError):
        GridCover(2, (1, -1), (-1, 1), 1, {i: (1,) for i in range(4)})
    with pytest.raises(InputError):
        additivity_check(constant(SQUARE, 4, (1, 0, 0, 0)), TRIANGLE)
    with pytest.raises(InputError):
        bivortex(simplex_config(4), 4)


def test_component_svg():
    grid = bivortex(SQUARE, 8, (1, -1))
    rep = additivity_check(grid, SQUARE)
    svg = component_svg(grid, rep)
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert svg.count("<polygon") >= sum(len(c.cells) for c in rep.components)
    with pytest.raises(InputError):
        cfg = simplex_config(4)
        component_svg(vortex(cfg, 4), rep)
