from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from balanced_covers.balanced import (
    BalancedProfile,
    PointConfig,
    bs_equivalent,
    enumerate_minimal_balanced,
    hypergraph_hash,
    is_balanced,
    minimal_transversals,
    nonbalanced_complex,
    scale_transform,
)
from balanced_covers.errors import CapacityError, InputError, MismatchError
from balanced_covers.geometry import Inside, affine_rank, conv_membership, relint_membership

from gen import SQUARE, TRIANGLE, brute_force_balanced, interior_config

F = Fraction


def one_based(profile):
    return {tuple(i + 1 for i in s) for s in profile.sorted_sets()}


def facets(cx):
    return {tuple(v + 1 for v in f) for f in cx.sorted_facets()}


def test_enumerate_examples():
    assert one_based(enumerate_minimal_balanced(TRIANGLE)) == {(1, 2, 3)}
    assert one_based(enumerate_minimal_balanced(SQUARE)) == {(1, 3), (2, 4)}
    far = PointConfig.of(SQUARE.points, (2, 0))
    assert one_based(enumerate_minimal_balanced(far)) == set()


def test_is_balanced_examples():
    p = enumerate_minimal_balanced(SQUARE)
    assert is_balanced(p, {0, 2})
    assert not is_balanced(p, {0, 1})
    assert not is_balanced(p, set())
    with pytest.raises(InputError):
        is_balanced(p, {7})


def test_nonbalanced_complex_examples():
    assert facets(nonbalanced_complex(SQUARE)) == {(1, 2), (2, 3), (3, 4), (1, 4)}
    assert facets(nonbalanced_complex(TRIANGLE)) == {(1, 2), (1, 3), (2, 3)}
    far = PointConfig.of(SQUARE.points, (2, 0))
    assert facets(nonbalanced_complex(far)) == {(1, 2, 3, 4)}
    edge = PointConfig.of(SQUARE.points, (F(1, 2), F(1, 2)))
    assert facets(nonbalanced_complex(edge)) == {(1, 3, 4), (2, 3, 4)}


def test_bs_equivalent_examples():
    scaled = scale_transform(SQUARE, (1, 2, 3, 4))
    assert bs_equivalent(SQUARE, scaled)
    rotated = PointConfig.of([(1, 1), (-1, 1), (-1, -1), (1, -1)], (0, 0))
    assert bs_equivalent(SQUARE, rotated)
    tri_plus = PointConfig.of([(1, 0), (-1, 1), (-1, -1), (5, 5)], (0, 0))
    assert not bs_equivalent(SQUARE, tri_plus)
    with pytest.raises(MismatchError):
        bs_equivalent(SQUARE, TRIANGLE)


def test_up_to_permutation():
    shuffled = PointConfig.of([(1, 0), (-1, 0), (0, 1), (0, -1)], (0, 0))
    assert not bs_equivalent(SQUARE, shuffled)
    assert bs_equivalent(SQUARE, shuffled, up_to_permutation=True)
    assert hypergraph_hash(enumerate_minimal_balanced(SQUARE)) == hypergraph_hash(enumerate_minimal_balanced(shuffled))
    tri_plus = PointConfig.of([(1, 0), (-1, 1), (-1, -1), (5, 5)], (0, 0))
    assert not bs_equivalent(SQUARE, tri_plus, up_to_permutation=True)


def test_scale_transform_examples():
    assert scale_transform(SQUARE, (1, 1, 1, 1)) == SQUARE
    doubled = scale_transform(SQUARE, (2, 2, 2, 2))
    assert doubled.points == tuple((F(x), F(y)) for x, y in [(2, 0), (0, 2), (-2, 0), (0, -2)])
    assert doubled.base == SQUARE.base
    with pytest.raises(InputError):
        scale_transform(SQUARE, (1, 0, 1, 1))


def test_capacity_cap():
    big = PointConfig.of([(i, 1) for i in range(21)], (0, 0))
    with pytest.raises(CapacityError):
        enumerate_minimal_balanced(big)


def test_duplicate_points_are_distinct_indices():
    cfg = PointConfig.of([(1, 0), (1, 0), (-1, 0)], (0, 0))
    assert one_based(enumerate_minimal_balanced(cfg)) == {(1, 3), (2, 3)}


def test_minimal_transversals_small():
    # edges {0,1} and {1,2}: minimal transversals {1} and {0,2}
    got = sorted(minimal_transversals([0b011, 0b110]))
    assert got == sorted([0b010, 0b101])


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), d=st.integers(1, 3), m=st.integers(1, 7))
def test_oracle_equivalence_and_profile_invariants(seed, d, m):
    rng = random.Random(seed)
    pts = tuple(tuple(F(rng.randint(-4, 4)) for _ in range(d)) for _ in range(m))
    r = tuple(F(rng.randint(-2, 2), rng.randint(1, 2)) for _ in range(d))
    cfg = PointConfig(d, pts, r)
    profile = enumerate_minimal_balanced(cfg)
    bf = brute_force_balanced(cfg)
    every = [frozenset(s) for k in range(m + 1) for s in combinations(range(m), k)]
    assert {s for s in every if is_balanced(profile, s)} == bf
    for s in profile.minimal_balanced:
        assert len(s) <= d + 1
        assert all(not is_balanced(profile, s - {i}) for i in s)
    sets = list(profile.minimal_balanced)
    assert all(not (a < b) for a in sets for b in sets)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_monotonicity_and_facet_soundness(seed):
    rng = random.Random(seed)
    d = rng.randint(2, 3)
    cfg = interior_config(rng, d, rng.randint(d + 1, 7))
    profile = enumerate_minimal_balanced(cfg)
    cx = nonbalanced_complex(cfg)
    for f in cx.facets:
        assert not is_balanced(profile, f)
        for j in set(range(cfg.m)) - f:
            assert is_balanced(profile, f | {j})
    for s in profile.minimal_balanced:
        for j in range(cfg.m):
            assert is_balanced(profile, s | {j})


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6), lambdas=st.lists(st.fractions(min_value=F(1, 10), max_value=10), min_size=7, max_size=7))
def test_rescaling_preserves_balanced_sets(seed, lambdas):
    rng = random.Random(seed)
    d = rng.randint(2, 3)
    cfg = interior_config(rng, d, rng.randint(d + 1, 7))
    assert bs_equivalent(cfg, scale_transform(cfg, lambdas[: cfg.m]))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_rank_corollary(seed):
    rng = random.Random(seed)
    d = rng.randint(2, 3)
    a = interior_config(rng, d, rng.randint(d + 1, 6))
    b = scale_transform(a, [F(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(a.m)])
    assert bs_equivalent(a, b)
    assert relint_membership(a.points, a.base) and relint_membership(b.points, b.base)
    assert affine_rank(a.points) == affine_rank(b.points)


def test_profile_rejects_out_of_range_members():
    with pytest.raises(InputError):
        BalancedProfile(2, frozenset({frozenset({0, 5})}))


def test_point_config_validation():
    with pytest.raises(InputError):
        PointConfig.of([(1, 0), (1,)], (0, 0))
    with pytest.raises(InputError):
        PointConfig.of([], (0, 0))


def test_members_verify_with_conv_membership():
    rng = random.Random(9)
    for _ in range(20):
        cfg = interior_config(rng, 3, rng.randint(4, 8))
        for s in enumerate_minimal_balanced(cfg).minimal_balanced:
            assert isinstance(conv_membership([cfg.points[i] for i in s], cfg.base), Inside)
