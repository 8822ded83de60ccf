import random
from fractions import Fraction

import pytest

from dmc_kit.classify import (
    CrossCheckError,
    Verdict,
    check_dmc_at,
    check_parallelogram,
    check_parallelogram_pair,
    integrally_convex_domain,
    is_dmc_set,
    is_globally_dmc,
    is_integrally_convex,
    is_lnat,
    is_locally_dmc,
    is_submodular,
    restricted_midpoint_insufficiency_demo,
)
from dmc_kit.funcs import CallableFn, IndicatorFn, QuadraticFn, TableFn
from dmc_kit.generators import random_mixed_table
from dmc_kit.lattice import INF, Box, step_decompose

import oracles

B2 = Box.cube(2, -3, 3)
B3 = Box.cube(3, -2, 2)


def abs_sum():
    return CallableFn(2, lambda x: abs(x[0] + x[1]), B2)


def signed_max():
    return CallableFn(3, lambda x: max(x[0], x[1], -x[2]), B3)


def test_abs_sum_distance_two_holds():
    assert check_dmc_at(abs_sum(), B2, 2).holds


def test_abs_sum_distance_three_fails():
    v = check_dmc_at(abs_sum(), B2, 3)
    assert not v.holds
    w = v.witness
    assert (w.lhs, w.rhs) == (0, 2)
    assert w.x == (0, 0) and abs(w.y[0]) == 3 and w.y[0] == -w.y[1]


def test_signed_max_witness():
    v = check_dmc_at(signed_max(), B3, 2)
    assert not v.holds
    assert (v.witness.x, v.witness.y, v.witness.lhs, v.witness.rhs) == ((0, 0, 0), (-2, -1, 1), -1, 0)


def test_witness_violates_inequality():
    f = signed_max()
    w = check_dmc_at(f, B3, 2).witness
    up, down = oracles.rounds(w.x, w.y)
    assert f(w.x) + f(w.y) == w.lhs < w.rhs == f(up) + f(down)


def test_failing_verdict_needs_witness():
    with pytest.raises(ValueError):
        Verdict(False)


def test_bad_mode():
    with pytest.raises(ValueError):
        check_dmc_at(abs_sum(), B2, 2, mode="sometimes")
    with pytest.raises(ValueError):
        check_dmc_at(abs_sum(), B2, 0)


def test_local_and_global():
    assert is_locally_dmc(abs_sum()).holds
    assert not is_globally_dmc(abs_sum()).holds


def test_unit_cube_is_global():
    rng = random.Random(3)
    box = Box.cube(3, 0, 1)
    f = TableFn(box, {p: rng.randint(-9, 9) for p in box.points()})
    assert is_globally_dmc(f).holds


def test_three_dim_quadratic_is_global():
    f = QuadraticFn([[1, -1, 1], [-1, 2, -1], [1, -1, 2]], Box.cube(3, -3, 3))
    assert is_globally_dmc(f).holds


@pytest.mark.parametrize("Q, holds", [
    ([[1, -1], [-1, 1]], True),
    ([[1, 1], [1, 1]], False),
])
def test_submodular(Q, holds):
    v = is_submodular(QuadraticFn(Q, Box.cube(2, -2, 2)))
    assert v.holds is holds


def test_submodular_single_point():
    assert is_submodular(TableFn(Box((1, 1), (1, 1)), {(1, 1): 7})).holds


def test_integrally_convex_examples():
    assert is_integrally_convex(abs_sum()).holds
    assert is_integrally_convex(IndicatorFn([(0, 0), (1, 1)])).holds
    v = is_integrally_convex(IndicatorFn([(0, 0), (2, 1)]))
    assert not v.holds and v.witness.rhs == INF
    assert is_integrally_convex(IndicatorFn([(4, 4)])).holds


def test_integrally_convex_domain():
    assert integrally_convex_domain(IndicatorFn([(t, -t) for t in range(-3, 4)])).holds
    assert not integrally_convex_domain(IndicatorFn([(0, 0), (2, 1)])).holds


@pytest.mark.parametrize("c, holds", [("-1/2", True), ("1/2", False), ("0", True), ("-1", True)])
def test_lnat_quadratics(c, holds):
    assert is_lnat(QuadraticFn([[1, c], [c, 1]], B2)).holds is holds


def test_lnat_two_point_indicator():
    v = is_lnat(IndicatorFn([(1, 0), (0, 1)]))
    assert not v.holds and v.witness.rhs == INF


def test_dmc_set_examples():
    assert is_dmc_set([(1, 0), (0, 1)]).holds
    assert not is_dmc_set([(t, -t) for t in range(-3, 4)]).holds
    v = is_dmc_set([(0, 0, 0, 0), (0, 1, 1, 0), (1, 1, 0, 0), (1, 2, 1, 0)])
    assert (v.witness.x, v.witness.y) == ((0, 0, 0, 0), (1, 2, 1, 0))
    assert is_dmc_set([]).holds


def _table(seed, n, side):
    rng = random.Random(seed)
    box = Box.cube(n, 0, side - 1)
    return TableFn(box, {p: (INF if rng.random() < 0.15 else rng.randint(-4, 4) + p[0] ** 2)
                         for p in box.points()})


@pytest.mark.parametrize("seed", range(60))
def test_checkers_match_naive_oracle(seed):
    rng = random.Random(seed)
    f = random_mixed_table(rng, rng.choice((1, 2)), 4)
    vals = oracles.table(f, f.box)
    dom = [p for p, v in vals.items() if v != INF]
    for k in (1, 2, 3):
        assert check_dmc_at(f, f.box, k).holds == oracles.dmc_holds(vals, k)
    assert check_dmc_at(f, f.box, 2, "at_least").holds == oracles.dmc_holds(vals, 2, at_least=True)
    assert is_submodular(f).holds == oracles.submodular_holds(vals)
    assert is_dmc_set(dom).holds == oracles.dmc_set_holds(dom)
    assert is_globally_dmc(f).holds == (oracles.dmc_set_holds(dom) and oracles.dmc_holds(vals, 2, True))
    assert is_integrally_convex(f).holds == oracles.weak_holds(vals)
    closed = all(set(oracles.rounds(x, y)) <= set(dom) for x in dom for y in dom)
    assert is_lnat(f).holds == (oracles.dmc_holds(vals, 1) and oracles.dmc_holds(vals, 2) and closed)


@pytest.mark.parametrize("seed", range(6))
def test_jobs_give_identical_verdicts(seed):
    f = _table(seed, 2, 6)
    for k in (1, 2, 3):
        assert check_dmc_at(f, f.box, k, jobs=1) == check_dmc_at(f, f.box, k, jobs=4)
    assert is_integrally_convex(f, jobs=1) == is_integrally_convex(f, jobs=3)


def test_jobs_from_environment(monkeypatch):
    monkeypatch.setenv("DMC_KIT_JOBS", "3")
    f = _table(1, 2, 5)
    assert check_dmc_at(f, f.box, 2) == check_dmc_at(f, f.box, 2, jobs=1)


def test_cross_check_error_is_raised_on_disagreement(monkeypatch):
    import dmc_kit.classify as cl

    real = cl._dmc_at

    def broken(scan, k, mode, jobs=None):
        if mode == "at_least":
            return Verdict(True, None, 0)
        return real(scan, k, mode, jobs)

    monkeypatch.setattr(cl, "_dmc_at", broken)
    with pytest.raises(CrossCheckError):
        is_globally_dmc(abs_sum())


def test_verdict_json():
    doc = check_dmc_at(abs_sum(), B2, 3).to_json("dmc(3)", B2)
    assert doc["class"] == "dmc(3)" and doc["holds"] is False
    assert doc["witness"]["lhs"] == "0" and doc["box"] == {"lo": [-3, -3], "hi": [3, 3]}


def test_parallelogram_trivial_partition():
    f = QuadraticFn([[2, 1], [1, 2]])
    c = step_decompose((3, -1))
    v = check_parallelogram(f, (0, 0), c, [1, 2, 3], [])
    assert v.holds
    with pytest.raises(ValueError):
        check_parallelogram(f, (0, 0), c, [1, 2], [2, 3])


def test_parallelogram_violated_outside_class():
    f = signed_max()
    found = False
    for x in B3.points():
        for d in [(-2, -1, 1), (1, -2, -1), (2, 1, -1)]:
            c = step_decompose(d)
            for J in ([1], [2]):
                I = [k for k in (1, 2) if k not in J]
                if f(x) != INF and not check_parallelogram(f, x, c, I, J).holds:
                    found = True
    assert found


def test_parallelogram_pair_form():
    f = QuadraticFn([[1, 0], [0, 1]])
    assert check_parallelogram_pair(f, (0, 0), (3, -2), [2]).holds


def test_restricted_midpoint_demo():
    v = restricted_midpoint_insufficiency_demo()
    assert not v.holds
    assert (v.witness.x, v.witness.y, v.witness.lhs, v.witness.rhs) == ((-1,), (1,), 2, 4)


def test_restricted_midpoint_demo_brute_force():
    g = {(z,): (2 if z == 0 else z * z) for z in range(-5, 6)}
    pairs = [(x, y) for x in g for y in g]
    assert len(pairs) == 121
    assert oracles.dmc_holds(g, 3, at_least=True)
    assert g[(2,)] == 4
    assert not oracles.dmc_holds(g, 2)


def test_fraction_values():
    box = Box.cube(1, 0, 2)
    f = TableFn(box, {(0,): Fraction(1, 3), (1,): Fraction(1, 6), (2,): Fraction(1, 3)})
    assert is_lnat(f).holds
