from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from conftest import CORPUS, random_poly
from oracles import poly_to_sympy

from diffclass.algebra import Poly2, RatFunc
from diffclass.bounds import SearchBounds
from diffclass.darboux import (
    CandidateDenominators,
    DarbouxPair,
    candidate_denominators,
    divmod_poly,
    find_darboux,
    height_candidates,
    normalize_first_integral,
    poly_sort_key,
    rational_first_integral,
)
from diffclass.vectorfield import VectorField, apply_X

x1, x2 = Poly2.var(1), Poly2.var(2)
one = Poly2.const(1)


def test_order0_example_darboux_and_integral():
    res = find_darboux(CORPUS["order0"], 2)
    assert [pr.p for pr in res] == [x1 * x1 - x2]
    assert res[0].k.is_zero()
    fi = rational_first_integral(CORPUS["order0"], res.pairs)
    assert fi.omega == RatFunc.coerce(x2 - x1 * x1)
    assert fi.route == "cofactor-relation"


def test_simple_darboux_examples():
    res = find_darboux(CORPUS["order1"], 3)
    assert [(pr.p, pr.k) for pr in res] == [(x2, x1)]
    res = find_darboux(CORPUS["order2"], 3)
    assert [(pr.p, pr.k) for pr in res] == [(x1, one)]


def test_riccati_and_vdp_have_no_low_degree_darboux():
    assert len(find_darboux(CORPUS["riccati"], 3)) == 0
    vdp = find_darboux(CORPUS["vdp"], 4)
    assert len(vdp) == 0


def test_linear_centre_first_integral():
    vf = VectorField(x2, -x1)
    res = find_darboux(vf, 2)
    for pr in res:
        assert pr.verify(vf)
    fi = rational_first_integral(vf, res.pairs)
    assert fi.omega == RatFunc.coerce(x1 * x1 + x2 * x2)


def test_radial_field_first_integral():
    vf = VectorField(x1, x2)
    fi = rational_first_integral(vf, find_darboux(vf, 1).pairs)
    assert fi.omega == RatFunc(x2, x1)
    assert RatFunc.coerce(apply_X(vf, fi.omega)).is_zero()


def test_direct_ansatz_without_pairs():
    vf = CORPUS["order0"]
    fi = rational_first_integral(vf, [], SearchBounds(num_deg=2))
    assert fi.route == "direct-ansatz"
    assert fi.omega == RatFunc.coerce(x2 - x1 * x1)


def test_no_integral_for_order1_example():
    vf = CORPUS["order1"]
    assert rational_first_integral(vf, find_darboux(vf, 3).pairs, SearchBounds(num_deg=4, max_denom_power=2)) is None


def test_darboux_soundness_on_random_fields():
    rng = random.Random(31)
    for _ in range(8):
        vf = VectorField(random_poly(rng, 2, nonzero=True), random_poly(rng, 2))
        res = find_darboux(vf, 2)
        for pr in res:
            assert pr.verify(vf)
            assert not pr.p.is_constant()
        keys = [poly_sort_key(pr.p) for pr in res]
        assert keys == sorted(keys)


def test_darboux_against_sympy_invariant_curve():
    # x1 x2 is invariant for (x1, -x2): X(x1 x2) = 0
    vf = VectorField(x1, -x2)
    res = find_darboux(vf, 2)
    ps = {pr.p for pr in res}
    assert x1 in ps and x2 in ps
    for pr in res:
        expr = poly_to_sympy(vf.X1) * sympy.diff(poly_to_sympy(pr.p), "x1") + poly_to_sympy(vf.X2) * sympy.diff(poly_to_sympy(pr.p), "x2")
        assert sympy.expand(expr - poly_to_sympy(pr.k) * poly_to_sympy(pr.p)) == 0


def test_constant_darboux_pair_rejected():
    with pytest.raises(ValueError):
        DarbouxPair(Poly2.const(3), Poly2.const(0))
    with pytest.raises(ValueError):
        find_darboux(CORPUS["order0"], 0)


def test_candidate_denominators():
    d = CandidateDenominators((x1, x2), 2)
    exps = d.exponents()
    assert exps[0] == (0, 0)
    assert [sum(e) for e in exps] == sorted(sum(e) for e in exps)
    assert len(exps) == 6
    qs = dict(d.products())
    assert qs[(1, 1)] == x1 * x2
    with pytest.raises(ValueError):
        CandidateDenominators((x1, x1 * 2), 1)
    with pytest.raises(ValueError):
        CandidateDenominators((Poly2.const(2),), 1)


def test_candidate_denominators_from_field():
    vf = CORPUS["order2"]
    d = candidate_denominators(vf, find_darboux(vf, 2).pairs, 3)
    assert d.generators == (x1,)
    d = candidate_denominators(CORPUS["order1"], find_darboux(CORPUS["order1"], 2).pairs, 1)
    assert d.generators == (x2,)


def test_height_candidates():
    h = height_candidates(2)
    assert h[0] == 0
    assert set(h) == {Fraction(0), Fraction(1), Fraction(-1), Fraction(2), Fraction(-2), Fraction(1, 2), Fraction(-1, 2)}
    assert len(height_candidates(3)) == len(set(height_candidates(3)))


def test_normalize_first_integral():
    assert normalize_first_integral(RatFunc.coerce((x1 * x1 - x2).scale(3) + 5)) == RatFunc.coerce(x2 - x1 * x1)
    w = normalize_first_integral(RatFunc(x2.scale(4), x1))
    assert w == RatFunc(x2, x1)


def test_divmod_poly():
    p = x1 * x1 * x2 + x2 + 3
    q, r = divmod_poly(p, x1 * x1 + 1)
    assert q * (x1 * x1 + 1) + r == p
