from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from conftest import random_field, random_ratfunc, vector_fields
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import eliminate_d1, poly_to_sympy, to_sympy

from diffclass.algebra import Poly2, RatFunc
from diffclass.diffpoly import (
    DiffPoly,
    Rank,
    degree_gt,
    delta_pairs,
    index_C,
    index_delta,
    precedes,
    predecessor_count,
    predecessor_set,
    rank_compare,
    residual_coeffs,
    xreduce,
)
from diffclass.vectorfield import VectorField, apply_X, compute_b

x1, x2 = Poly2.var(1), Poly2.var(2)
one = Poly2.const(1)


def random_index_sample(rng: random.Random):
    r = rng.randint(2, 6)
    j = rng.randint(2, r)
    i = rng.randint(1, j - 1)
    m = [rng.randint(0, 3) for _ in range(r + 1)]
    m[j] = max(m[j], 1)
    return tuple(m), i, j


# --- index utilities ---------------------------------------------------------------


def test_index_c_examples():
    assert index_C((0, 1, 0, 1)) == 4
    assert index_C((0, 1, 1, 0)) == 3
    assert index_C((5, 0, 0, 0)) == 0


def test_delta_examples():
    assert index_delta((0, 1, 0, 1), 1, 3) == (0, 1, 1, 0)
    assert index_delta((0, 1, 1, 0), 1, 2) == (0, 2, 0, 0)
    assert index_delta((0, 1, 1, 0), 1, 2, inverse=True) == (0, 0, 2, 0)


def test_delta_errors():
    with pytest.raises(ValueError):
        index_delta((0, 1, 0), 1, 2)  # m_2 = 0 underflows
    with pytest.raises(ValueError):
        index_delta((0, 1, 1), 2, 2)
    with pytest.raises(ValueError):
        index_delta((0, 1, 1), 0, 2)


def test_index_laws_on_1000_samples():
    rng = random.Random(21)
    for _ in range(1000):
        m, i, j = random_index_sample(rng)
        d = index_delta(m, i, j)
        assert index_delta(d, i, j, inverse=True) == m
        assert index_C(m) - index_C(d) == i
        assert precedes(m, d)
        assert degree_gt(m, d)
        if m[j - i] >= 1:
            u = index_delta(m, i, j, inverse=True)
            assert precedes(u, m) and degree_gt(u, m)


def test_precedence_implies_larger_weight():
    rng = random.Random(22)
    for _ in range(500):
        r = rng.randint(2, 5)
        m = tuple(rng.randint(0, 2) for _ in range(r + 1))
        p = tuple(rng.randint(0, 2) for _ in range(r + 1))
        if precedes(m, p):
            assert index_C(m) > index_C(p)


@given(st.lists(st.integers(0, 3), min_size=3, max_size=5), st.lists(st.integers(0, 3), min_size=3, max_size=5))
def test_degree_order_is_total(a, b):
    n = min(len(a), len(b))
    m, p = tuple(a[:n]), tuple(b[:n])
    if m != p:
        assert degree_gt(m, p) != degree_gt(p, m)
    else:
        assert not degree_gt(m, p)


def test_predecessor_set():
    support = [(0, 1, 0, 1), (0, 2, 0, 0), (0, 0, 0, 2)]
    assert predecessor_set((0, 1, 1, 0), support) == {(0, 1, 0, 1)}
    # Delta_23 takes (0,1,0,1) straight to (0,2,0,0)
    assert predecessor_set((0, 2, 0, 0), support) == {(0, 1, 0, 1)}
    assert predecessor_set((0, 1, 0, 1), support) == {(0, 0, 0, 2)}
    assert predecessor_count((0, 0, 0, 2), support) == 0
    assert list(delta_pairs(3)) == [(1, 2), (1, 3), (2, 3)]


# --- differential polynomials ----------------------------------------------------------


def test_diffpoly_arithmetic_and_printing():
    y1, y2 = DiffPoly.y(1), DiffPoly.y(2)
    A = y2 - y1 * RatFunc.coerce(x1)
    assert str(A) == "y2 - (x1)*y1"
    assert A.order == 2 and A.highest_index() == (0, 0, 1)
    assert (y1 * y1).coeffs == {(0, 2): RatFunc.coerce(1)}
    assert (A - A).is_zero()
    assert DiffPoly(1, {(0, 1): 0}).is_zero()
    with pytest.raises(ValueError):
        DiffPoly(1, {(0, 1, 0): 1})


def test_rank_compare():
    y1, y2 = DiffPoly.y(1), DiffPoly.y(2)
    assert rank_compare(y2, y1 * y1 * y1) is Rank.HIGHER
    assert rank_compare(y1 * y1, y1) is Rank.HIGHER
    assert rank_compare(DiffPoly.constant(x1), DiffPoly.y(0)) is Rank.LOWER
    assert rank_compare(y1, y1 * RatFunc.coerce(x2)) is Rank.EQUAL
    assert rank_compare(y1, y2) is Rank.LOWER


def test_xreduce_examples_generic_field():
    rng = random.Random(23)
    vf = random_field(rng, 2)
    b = compute_b(vf, 2)
    assert xreduce(vf, DiffPoly.y(1)).reduced == DiffPoly(1, {(0, 1): b[0]})
    assert xreduce(vf, DiffPoly.y(2)).reduced == DiffPoly(2, {(0, 0, 1): b[0] * 2, (0, 1, 0): b[1]})
    assert xreduce(vf, DiffPoly.y(3)).reduced == DiffPoly(3, {(0, 0, 0, 1): b[0] * 3, (0, 0, 1, 0): b[1] * 3, (0, 1, 0, 0): b[2]})


def test_xreduce_of_coefficient_only():
    vf = VectorField(one, x1 * x2)
    A = DiffPoly.constant(x2)
    assert xreduce(vf, A).reduced == DiffPoly.constant(apply_X(vf, x2))


def test_reduction_certificates_verify():
    rng = random.Random(24)
    for _ in range(10):
        vf = random_field(rng, 2)
        r = rng.randint(1, 3)
        coeffs = {}
        for _ in range(3):
            m = tuple(rng.randint(0, 2) for _ in range(r + 1))
            coeffs[m] = random_ratfunc(rng, 1)
        A = DiffPoly(r, coeffs)
        cert = xreduce(vf, A)
        assert cert.verify(vf)
        # a corrupted reduced form must fail
        bad = type(cert)(cert.source, cert.reduced + DiffPoly.y(r, r), cert.combination)
        assert not bad.verify(vf)


def test_xreduce_matches_sympy_elimination():
    rng = random.Random(25)
    for _ in range(4):
        vf = random_field(rng, 2)
        X1, X2 = poly_to_sympy(vf.X1), poly_to_sympy(vf.X2)
        for j in range(1, 4):
            red = xreduce(vf, DiffPoly.y(j)).reduced
            ref = eliminate_d1(X1, X2, j)
            for k, expr in ref.items():
                m = [0] * (j + 1)
                if k <= j:
                    m[k] = 1
                    got = to_sympy(red.coeff(tuple(m)))
                else:
                    got = 0
                assert sympy.cancel(got - expr) == 0


# --- residual extraction ----------------------------------------------------------------


def test_residual_for_order2_template():
    rng = random.Random(26)
    vf = random_field(rng, 2)
    a = random_ratfunc(rng, 1)
    b = compute_b(vf, 1)
    A = DiffPoly.y(2) - DiffPoly.y(1, 2) * a
    res = residual_coeffs(vf, A)
    assert set(res) == {(0, 1, 0)}
    assert res[(0, 1, 0)] == -RatFunc.coerce(apply_X(vf, a)) + b[0] * a + b[1]


def test_residual_vanishes_when_b1_is_zero():
    vf = VectorField(x1, x1 * x2 + 1)
    res = residual_coeffs(vf, DiffPoly.y(2))
    assert all(not v for v in res.values())


def test_residual_of_leader_alone_is_empty():
    assert residual_coeffs(VectorField(one, x1), DiffPoly.y(1)) == {}


def test_residual_requires_monic_top():
    with pytest.raises(ValueError):
        residual_coeffs(VectorField(one, x1), DiffPoly.y(2) * 2)


@given(vector_fields(max_deg=2))
@settings(max_examples=25, deadline=None)
def test_residual_agrees_with_reduction(vf):
    """R must equal the reduced form of X A - C(m*) b0 A with the top term removed."""
    a = RatFunc(x1 + 2, x2 - 3)
    A = DiffPoly(3, {(0, 1, 0, 1): 1, (0, 0, 2, 0): Fraction(-3, 2), (0, 2, 0, 0): -a})
    b0 = compute_b(vf, 0)[0]
    red = xreduce(vf, A).reduced - A * (b0 * 4)
    res = residual_coeffs(vf, A)
    for m, v in red.coeffs.items():
        assert res.get(m, RatFunc()) == v
    for m, v in res.items():
        assert red.coeff(m) == v
