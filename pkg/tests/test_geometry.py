from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from balanced_covers.errors import InputError
from balanced_covers.geometry import (
    Inside,
    Outside,
    affine_rank,
    conv_membership,
    primitive,
    relint_membership,
)

F = Fraction
SQUARE = [(1, 0), (0, 1), (-1, 0), (0, -1)]


def test_conv_membership_examples():
    assert conv_membership([(-1,), (2,)], (0,)) == Inside((F(2, 3), F(1, 3)))
    assert conv_membership([(1, 0)], (0, 0)) == Outside((F(1), F(0)))
    assert conv_membership([(1, 0), (-1, 0)], (0, 0)) == Inside((F(1, 2), F(1, 2)))


def test_point_equal_to_r_is_inside_with_unit_weight():
    res = conv_membership([(3, 3), (1, 2), (5, 5)], (1, 2))
    assert res == Inside((F(0), F(1), F(0)))


def test_conv_membership_errors():
    with pytest.raises(InputError):
        conv_membership([], (0, 0))
    with pytest.raises(InputError):
        conv_membership([(1, 0), (1, 0, 0)], (0, 0))


def test_outside_direction_is_primitive_integer():
    res = conv_membership([(2, 4), (4, 6)], (0, 0))
    assert isinstance(res, Outside)
    assert all(x.denominator == 1 for x in res.direction)
    assert primitive(int(x) for x in res.direction) == tuple(int(x) for x in res.direction)


def test_affine_rank_examples():
    assert affine_rank(SQUARE) == 2
    assert affine_rank([(0, 0), (1, 1), (2, 2)]) == 1
    assert affine_rank([(5, 7)]) == 0
    with pytest.raises(InputError):
        affine_rank([])


def test_relint_examples():
    assert relint_membership(SQUARE, (0, 0))
    assert not relint_membership(SQUARE, (F(1, 2), F(1, 2)))
    assert not relint_membership(SQUARE, (2, 0))


def test_relint_of_lower_dimensional_hull():
    # a segment in the plane: its midpoint is relative-interior
    assert relint_membership([(0, 0), (2, 2)], (1, 1))
    assert not relint_membership([(0, 0), (2, 2)], (0, 0))


coords = st.integers(-6, 6)


def points(d, lo=1, hi=7):
    return st.lists(st.tuples(*[coords] * d).map(lambda p: tuple(map(F, p))), min_size=lo, max_size=hi)


@settings(max_examples=200, deadline=None)
@given(d=st.integers(1, 4), data=st.data())
def test_farkas_dichotomy(d, data):
    pts = data.draw(points(d))
    r = data.draw(st.tuples(*[coords] * d))
    res = conv_membership(pts, r)
    # an Outside direction rules out any convex combination, so one check suffices
    assert res.verify([tuple(map(F, p)) for p in pts], tuple(map(F, r)))
    if isinstance(res, Inside):
        assert sum(res.coefficients) == 1
    else:
        assert any(x != 0 for x in res.direction)


@settings(max_examples=100, deadline=None)
@given(d=st.integers(1, 3), data=st.data())
def test_relint_implies_inside(d, data):
    pts = data.draw(points(d))
    r = data.draw(st.tuples(*[coords] * d))
    if relint_membership(pts, r):
        assert isinstance(conv_membership(pts, r), Inside)


@settings(max_examples=100, deadline=None)
@given(d=st.integers(1, 4), data=st.data())
def test_affine_rank_invariances(d, data):
    pts = data.draw(points(d, 1, 6))
    shift = data.draw(st.tuples(*[coords] * d))
    perm = data.draw(st.permutations(range(len(pts))))
    k = affine_rank(pts)
    assert affine_rank([pts[i] for i in perm]) == k
    assert affine_rank([tuple(x + s for x, s in zip(p, shift)) for p in pts]) == k
    assert 0 <= k <= min(d, len(pts) - 1)


@settings(max_examples=100, deadline=None)
@given(d=st.integers(1, 3), data=st.data())
def test_positive_combination_is_relative_interior(d, data):
    pts = data.draw(points(d, 1, 6))
    w = data.draw(st.lists(st.integers(1, 9), min_size=len(pts), max_size=len(pts)))
    total = sum(w)
    r = tuple(sum(F(wi, total) * p[k] for wi, p in zip(w, pts)) for k in range(d))
    assert relint_membership(pts, r)


@settings(max_examples=100, deadline=None)
@given(d=st.integers(1, 3), data=st.data())
def test_lexicographic_extreme_point_is_not_relative_interior(d, data):
    pts = data.draw(points(d, 2, 6))
    if len(set(pts)) < 2:
        return
    # the lexicographic maximum is a vertex of the hull
    assert not relint_membership(pts, max(pts))


def test_all_subsets_of_square_have_exactly_one_certificate():
    for k in range(1, 5):
        for s in combinations(SQUARE, k):
            res = conv_membership(list(s), (0, 0))
            pts = [tuple(map(F, p)) for p in s]
            assert res.verify(pts, (F(0), F(0)))
            assert isinstance(res, Inside) == (set(s) in ({(1, 0), (-1, 0)}, {(0, 1), (0, -1)}) or k >= 3)
