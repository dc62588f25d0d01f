from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from diffclass.algebra import Poly2, RatFunc
from diffclass.vectorfield import VectorField

x1, x2 = Poly2.var(1), Poly2.var(2)

CORPUS = {
    "order0": VectorField(Poly2.const(1), 2 * x1),
    "order1": VectorField(Poly2.const(1), x1 * x2),
    "order2": VectorField(x1, x1 * x2 + 1),
    "riccati": VectorField(Poly2.const(1), x2 * x2 - x1),
    "vdp": VectorField(x2 - x1**3 * Fraction(1, 3) + x1, -x1),
}


@pytest.fixture
def corpus():
    return CORPUS


# --- hypothesis strategies ------------------------------------------------------

small_fracs = st.builds(Fraction, st.integers(-5, 5), st.integers(1, 4))


@st.composite
def polys(draw, max_deg: int = 3, max_terms: int = 4, nonzero: bool = False):
    n = draw(st.integers(1 if nonzero else 0, max_terms))
    terms = {}
    for _ in range(n):
        d = draw(st.integers(0, max_deg))
        i = draw(st.integers(0, d))
        terms[(i, d - i)] = draw(small_fracs.filter(bool))
    p = Poly2(terms)
    if nonzero and p.is_zero():
        p = Poly2.const(1)
    return p


@st.composite
def ratfuncs(draw, max_deg: int = 2):
    return RatFunc(draw(polys(max_deg)), draw(polys(max_deg, nonzero=True)))


@st.composite
def vector_fields(draw, max_deg: int = 3):
    return VectorField(draw(polys(max_deg, nonzero=True)), draw(polys(max_deg)))


# --- seeded generators for fixed-count samples ------------------------------------


def random_poly(rng: random.Random, max_deg: int = 3, max_terms: int = 4, nonzero: bool = False) -> Poly2:
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            d = rng.randint(0, max_deg)
            i = rng.randint(0, d)
            terms[(i, d - i)] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        p = Poly2(terms)
        if p or not nonzero:
            return p


def random_ratfunc(rng: random.Random, max_deg: int = 2) -> RatFunc:
    return RatFunc(random_poly(rng, max_deg), random_poly(rng, max_deg, nonzero=True))


def random_field(rng: random.Random, max_deg: int = 3) -> VectorField:
    return VectorField(random_poly(rng, max_deg, nonzero=True), random_poly(rng, max_deg))


# --- acceptance summary -------------------------------------------------------------

ACCEPTANCE: dict[int, tuple[bool, str, float]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, title, secs = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {title}  ({secs:.2f} s)")
