from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dmc_kit.lattice import (
    INF,
    Box,
    DimensionError,
    ExtArithmeticError,
    StepChain,
    chain_partial_sum,
    directions,
    ext_add,
    ext_sub,
    format_ext,
    integer_neighborhood,
    midpoint_round,
    parse_box,
    parse_ext,
    parse_rational,
    shell,
    step_decompose,
)

vectors = st.lists(st.integers(-9, 9), min_size=1, max_size=6)


@pytest.mark.parametrize("x, y, up, down", [
    ((0, 0), (3, -3), (2, -1), (1, -2)),
    ((1, 2), (1, 2), (1, 2), (1, 2)),
    ((-1, -2), (0, 0), (0, -1), (-1, -1)),
])
def test_midpoint_round(x, y, up, down):
    assert midpoint_round(x, y) == (up, down)


@given(vectors, st.data())
def test_midpoint_round_sums_back(x, data):
    y = data.draw(st.lists(st.integers(-9, 9), min_size=len(x), max_size=len(x)))
    up, down = midpoint_round(tuple(x), tuple(y))
    assert tuple(a + b for a, b in zip(up, down)) == tuple(a + b for a, b in zip(x, y))
    assert all((u - d) == (a + b) % 2 for u, d, a, b in zip(up, down, x, y))


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        midpoint_round((1, 2), (1,))


def test_integer_neighborhood():
    assert integer_neighborhood((Fraction(1, 2), 3)) == [(0, 3), (1, 3)]
    assert integer_neighborhood((Fraction(-1, 3), Fraction(5, 2))) == [(-1, 2), (-1, 3), (0, 2), (0, 3)]
    assert integer_neighborhood((2, -1)) == [(2, -1)]


def test_ext_values():
    assert ext_add(1, INF) == INF
    assert ext_sub(INF, 3) == INF
    assert ext_sub(2, INF) == -INF
    with pytest.raises(ExtArithmeticError):
        ext_sub(INF, INF)
    assert format_ext(Fraction(-4, 6)) == "-2/3"
    assert format_ext(INF) == "inf"


@pytest.mark.parametrize("lit, value", [("3/4", Fraction(3, 4)), (-2, Fraction(-2)), ("7", Fraction(7))])
def test_parse_rational(lit, value):
    assert parse_rational(lit) == value


@pytest.mark.parametrize("lit", ["0.5", 0.5, True, "1/0x", ""])
def test_parse_rational_rejects(lit):
    with pytest.raises(ValueError):
        parse_rational(lit)


def test_parse_ext_inf():
    assert parse_ext("inf") == INF


def test_box():
    b = parse_box("-1..1,0..2")
    assert b == Box((-1, 0), (1, 2))
    assert b.size == 9 and b.diameter == 2
    assert list(b.points())[:2] == [(-1, 0), (-1, 1)]
    assert (0, 3) not in b
    assert str(b) == "-1..1,0..2"
    with pytest.raises(ValueError):
        Box((1,), (0,))
    with pytest.raises(ValueError):
        parse_box("1-2")


def test_center_out_order():
    b = Box.cube(2, -1, 1)
    order = sorted(b.points(), key=b.center_key)
    assert order[0] == (0, 0)
    assert order[1:5] == [(-1, -1), (-1, 0), (-1, 1), (0, -1)]


def test_directions_and_shells():
    assert len(list(directions(3))) == 26
    assert len(list(shell(2, 2))) == 25 - 9
    assert all(max(map(abs, d)) == 3 for d in shell(2, 3))


def test_step_decompose_mixed_sign_vector():
    c = step_decompose((5, 3, -3, -5))
    assert c.steps() == [(1, 0, -1, -1), (1, 0, -1, -1), (1, 1, -1, -1), (1, 1, 0, -1), (1, 1, 0, -1)]
    assert c.A[0] == frozenset({1}) and c.B[0] == frozenset({3, 4})


def test_step_decompose_zero():
    with pytest.raises(ValueError):
        step_decompose((0, 0))


@given(vectors)
def test_step_chain_reconstructs(v):
    v = tuple(v)
    if not any(v):
        return
    c = step_decompose(v)
    assert c.m == max(map(abs, v))
    assert c.reconstruct() == v
    assert chain_partial_sum(c, []) == (0,) * len(v)


def test_malformed_chain():
    with pytest.raises(ValueError):
        StepChain(2, (frozenset({1, 2}), frozenset({1})), (frozenset(), frozenset()))
    with pytest.raises(ValueError):
        StepChain(2, (frozenset({1}),), (frozenset({1}),))
    with pytest.raises(IndexError):
        chain_partial_sum(step_decompose((2, 0)), [3])

