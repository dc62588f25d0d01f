from __future__ import annotations

import random

import pytest
from conftest import CORPUS, random_poly

from diffclass.algebra import Poly2, RatFunc
from diffclass.bounds import SearchBounds
from diffclass.classifier import (
    AT_LEAST_4,
    Order0Witness,
    Order1Witness,
    PDEWitness,
    classify,
    cleared_linear_pde,
    n_order,
    order1_residual,
    pde_residual,
    solve_linear_pde,
    solve_order1,
)
from diffclass.vectorfield import VectorField, compute_b

x1, x2 = Poly2.var(1), Poly2.var(2)
one = Poly2.const(1)
SMALL = SearchBounds(num_deg=3, n_range=2, max_denom_power=2, darboux_deg=2)


def test_n_order():
    assert n_order(2) == [1, -1, 2, -2]


def test_bounds_validation():
    with pytest.raises(ValueError):
        SearchBounds(num_deg=0)
    assert SearchBounds().as_dict()["num_deg"] == 8


def test_solve_order1_example():
    w = solve_order1(CORPUS["order1"], SMALL)
    assert w.a == RatFunc.coerce(x2) and w.n == -1
    assert order1_residual(CORPUS["order1"], w.a, w.n).is_zero()


def test_solve_linear_pde_examples():
    w = solve_linear_pde(CORPUS["order2"], 1, 1, SMALL)
    assert w.a.is_zero()
    w = solve_linear_pde(CORPUS["riccati"], 2, 2, SMALL)
    assert w.a.is_zero()
    assert solve_linear_pde(CORPUS["riccati"], 1, 1, SMALL) is None
    with pytest.raises(ValueError):
        solve_linear_pde(CORPUS["riccati"], 1, 2, SMALL)


def test_classify_corpus_small_bounds():
    expected = {"order0": 0, "order1": 1, "order2": 2, "riccati": 3}
    for name, order in expected.items():
        rep = classify(CORPUS[name], SMALL)
        assert rep.order == order, name
        assert len(rep.exclusions) == order
        assert all(c.passed for c in rep.checks)
    rep = classify(CORPUS["order0"], SMALL)
    assert isinstance(rep.witness, Order0Witness)
    assert rep.witness.omega == RatFunc.coerce(x2 - x1 * x1)
    assert isinstance(classify(CORPUS["order1"], SMALL).witness, Order1Witness)
    assert isinstance(classify(CORPUS["order2"], SMALL).witness, PDEWitness)


def test_vdp_small_bounds_is_at_least_4():
    rep = classify(CORPUS["vdp"], SMALL)
    assert rep.verdict == AT_LEAST_4 and rep.order is None and rep.witness is None
    assert [e.order for e in rep.exclusions] == [0, 1, 2, 3]
    assert rep.exclusions[1].bounds["n_range"] == 2


def test_classify_is_deterministic():
    a = classify(CORPUS["order1"], SMALL, seed=3)
    b = classify(CORPUS["order1"], SMALL, seed=3)
    assert a.witness == b.witness and a.checks == b.checks


def test_larger_bounds_never_raise_the_order():
    rng = random.Random(41)
    for _ in range(4):
        vf = VectorField(one, random_poly(rng, 2))
        lo = classify(vf, SearchBounds(num_deg=2, n_range=1, max_denom_power=1, darboux_deg=1))
        hi = classify(vf, SearchBounds(num_deg=3, n_range=2, max_denom_power=2, darboux_deg=2))
        if lo.order is not None:
            assert hi.order is not None and hi.order <= lo.order


def test_b1_zero_family_is_order_at_most_2():
    # X = (x1, x1 x2 + c): b1 vanishes for every constant c
    for c in (1, 2, -3):
        vf = VectorField(x1, x1 * x2 + c)
        assert compute_b(vf, 1)[1].is_zero()
        rep = classify(vf, SMALL)
        assert rep.order is not None and rep.order <= 2


def test_b2_zero_family_is_order_at_most_3():
    # Riccati fields x2' = x2^2 + p(x1) have b2 = 0
    for p in (-x1, x1 * x1, x1 + 1):
        vf = VectorField(one, x2 * x2 + p)
        assert compute_b(vf, 2)[2].is_zero()
        rep = classify(vf, SMALL)
        assert rep.order is not None and rep.order <= 3
        if rep.order == 3:
            assert pde_residual(vf, rep.witness.a, 2, 2).is_zero()


def test_cleared_pde_for_vdp():
    vdp = CORPUS["vdp"]
    c = cleared_linear_pde(vdp, 2, 2)
    X1 = vdp.X1
    # coefficients proportional to (X1^3, 2 x1 X1^2, 6 x1)
    k = c.coef_X.leading_coeff() / (X1 * X1 * X1).leading_coeff()
    assert c.coef_X == (X1 * X1 * X1).scale(k)
    assert c.const == x1.scale(6 * k)
    assert c.coef_a == (x1 * X1 * X1).scale(2 * k)
