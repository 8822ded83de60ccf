import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from dmc_kit.classify import is_integrally_convex
from dmc_kit.dmcset import (
    Decomposition,
    PointSet,
    check_conditions,
    check_dmc_set,
    critical_check,
    d0_decompose,
    d1_decompose,
    d2_decompose,
    d_minus,
    d_plus,
    parallelogram_points,
    scale_set,
    set_membership_sweep,
    steps_decompose,
)
from dmc_kit.funcs import DocumentError, IndicatorFn
from dmc_kit.generators import random_dmc_set
from dmc_kit.lattice import Box, linf_norm

import oracles

V = (5, 3, -3, -5)


def _random_vector(rng, n_max=6, norm_max=8):
    n = rng.randint(1, n_max)
    while True:
        v = tuple(rng.randint(-norm_max, norm_max) for _ in range(n))
        if any(v):
            return v


def test_d0_example():
    want = sorted([(1, 1, 0, 0), (1, 0, 0, -1), (1, 1, -1, -1), (1, 1, -1, -1),
                   (1, 0, 0, -1), (0, 0, -1, -1)])
    assert list(d0_decompose(V).vectors) == want


def test_d1_example():
    want = sorted([(1, 0, 0, -1), (1, 1, -1, -1), (1, 1, -1, -1), (1, 0, 0, -1), (1, 1, -1, -1)])
    assert list(d1_decompose(V, cross_check=True).vectors) == want


def test_d2_example():
    want = sorted([(1, 0, -1, -1), (1, 0, -1, -1), (1, 1, -1, -1), (1, 1, 0, -1), (1, 1, 0, -1)])
    d = d2_decompose(V)
    assert list(d.vectors) == want
    assert d.twists


def test_leaves_of_critical_vector():
    assert d_plus(V) == (1, 1, 0, 0)
    assert d_minus(V) == (0, 0, -1, -1)


@pytest.mark.parametrize("v, small", [((0, 1, -1), [(0, 1, -1)]), ((2, -2), [(1, -1), (1, -1)])])
def test_small_cases(v, small):
    assert list(d0_decompose(v).vectors) == small
    assert d1_decompose(v).vectors == d0_decompose(v).vectors


def test_chain_input_has_no_twists():
    d = d2_decompose((3, 1))
    assert d.twists == () and d.vectors == d1_decompose((3, 1)).vectors


def test_zero_vector_rejected():
    for fn in (d0_decompose, d1_decompose, d2_decompose, steps_decompose):
        with pytest.raises(ValueError):
            fn((0, 0))


@pytest.mark.parametrize("v, expected", [(V, True), ((4, -4), False), ((3, 0), False),
                                         ((3, -3), True), ((1, -1), False), ((3, -1), False)])
def test_critical(v, expected):
    assert critical_check(v) is expected


def test_required_conditions_per_stage():
    assert d0_decompose(V).required() == ("C1", "C2", "C3", "C4")
    assert "C5" in d1_decompose(V).required() and "C6" not in d1_decompose(V).required()
    with pytest.raises(AssertionError, match="C5"):
        Decomposition(V, "d1", d0_decompose(V).vectors).validate()


def test_condition_failures():
    c = check_conditions((2, 0), [(1, 0), (1, 1)])
    assert not c["C2"] and not c["C3"]
    c = check_conditions((1, 1), [(1, 0), (0, 1)])
    assert c["C2"] and not c["C4"]
    c = check_conditions((2, 0), [(2, 0)])
    assert not c["C1"]


def test_random_vectors_full_pipeline():
    rng = random.Random(2024)
    for _ in range(1000):
        v = _random_vector(rng)
        d0, d1, d2 = d0_decompose(v), d1_decompose(v), d2_decompose(v)
        for d in (d0, d1, d2):
            d.validate()
        assert len(d1.vectors) == linf_norm(v)
        assert d2.vectors == steps_decompose(v).vectors


@given(st.lists(st.integers(-9, 9), min_size=1, max_size=6))
@settings(max_examples=150)
def test_d1_recursive_matches_tree(v):
    if any(v):
        d1_decompose(v, cross_check=True)


@given(st.lists(st.integers(-9, 9), min_size=1, max_size=6))
@settings(max_examples=150)
def test_pairs_sum_to_norm_two(v):
    if not any(v):
        return
    vecs = d1_decompose(v).vectors
    for a, b in itertools.combinations(vecs, 2):
        assert linf_norm(tuple(p + q for p, q in zip(a, b))) == 2


def test_decomposition_json():
    doc = d2_decompose(V).to_json()
    assert doc["stage"] == "d2" and doc["vector"] == list(V)
    assert all(set(t) == {"pair", "result"} for t in doc["twists"])


def test_pointset_json():
    S = PointSet.from_json({"dim": 2, "points": [[0, 1], [1, 0]]})
    assert PointSet.from_json(S.to_json()) == S
    assert S.box == Box((0, 0), (1, 1))
    with pytest.raises(DocumentError):
        PointSet.from_json({"dim": 2, "points": [[0, 1, 2]]})


def test_scale_set():
    S = PointSet.of([(0,), (2,), (4,)])
    assert scale_set(S, 2) == PointSet.of([(0,), (1,), (2,)])
    assert scale_set(S, 1) == S
    with pytest.raises(ValueError):
        scale_set(S, 0)


@pytest.mark.parametrize("seed", range(12))
def test_scaling_keeps_midpoint_convexity(seed):
    rng = random.Random(seed)
    S = PointSet.of(random_dmc_set(rng, Box.cube(2, -4, 4), tries=30), 2)
    assert check_dmc_set(S).holds
    for alpha in (2, 3, 4):
        scaled = scale_set(S, alpha)
        assert check_dmc_set(scaled).holds
        assert oracles.dmc_set_holds(list(scaled))


def test_parallelogram_example():
    S = PointSet.of(Box.cube(2, -3, 4).points())
    x, y = (0, 0), (4, -2)
    assert parallelogram_points(S, x, y, [1, 2]) == ((2, -2), (2, 0))
    assert parallelogram_points(S, x, y, []) == (x, y)
    assert parallelogram_points(S, x, y, [1, 2, 3, 4]) == (y, x)


def test_parallelogram_errors():
    S = PointSet.of([(0, 0), (1, 1)])
    with pytest.raises(ValueError):
        parallelogram_points(S, (0, 0), (2, 2), [1])
    with pytest.raises(ValueError):
        parallelogram_points(S, (0, 0), (0, 0), [1])


@pytest.mark.parametrize("seed", range(15))
def test_parallelogram_stays_in_random_set(seed):
    rng = random.Random(50 + seed)
    S = PointSet.of(random_dmc_set(rng, Box.cube(3, -2, 2), tries=40), 3)
    assert check_dmc_set(S).holds
    pts = sorted(S)
    for _ in range(20):
        x, y = rng.sample(pts, 2)
        m = linf_norm(tuple(b - a for a, b in zip(x, y)))
        J = [k for k in range(1, m + 1) if rng.random() < 0.5]
        p, q = parallelogram_points(S, x, y, J, check=False)
        assert p in S and q in S


@pytest.mark.parametrize("seed", range(15))
def test_membership_sweep(seed):
    rng = random.Random(300 + seed)
    S = PointSet.of(random_dmc_set(rng, Box.cube(2, -3, 3), tries=50), 2)
    pts = sorted(S)
    for _ in range(8):
        x, y = rng.choice(pts), rng.choice(pts)
        v = set_membership_sweep(S, x, y)
        assert v.holds
        if x != y:
            m = linf_norm(tuple(b - a for a, b in zip(x, y)))
            assert v.pairs_checked == 2 ** m


def test_membership_sweep_rejects_non_convex():
    S = PointSet.of([(0, 0), (2, 1)])
    with pytest.raises(ValueError):
        set_membership_sweep(S, (0, 0), (2, 1))
    v = set_membership_sweep(S, (0, 0), (2, 1), certified=True)
    assert not v.holds and v.witness.y not in S


def test_intersection_and_integral_convexity():
    rng = random.Random(9)
    box = Box.cube(2, -2, 2)
    for _ in range(10):
        A = PointSet.of(random_dmc_set(rng, box, tries=30), 2)
        B = PointSet.of(random_dmc_set(rng, box, tries=30), 2)
        C = A.intersect(B)
        assert check_dmc_set(C).holds
        if len(A):
            assert is_integrally_convex(IndicatorFn(sorted(A))).holds
