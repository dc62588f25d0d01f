"""The operator X = X1 d/dx1 + X2 d/dx2 and the data derived from it.

``compute_b`` builds the chain b_0, b_1, ... that drives the whole reduction
calculus:

    b_0 = -X1 * d2(X2/X1),    b_i = X1 * d2(b_{i-1}/X1)

and ``c_table`` the integer coefficients of the reduction of X y_j.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property
from math import comb

from .algebra import Field, Poly2, RatFunc


@dataclass(frozen=True)
class VectorField:
    X1: Poly2
    X2: Poly2

    def __post_init__(self):
        for name in ("X1", "X2"):
            v = getattr(self, name)
            if not isinstance(v, Poly2):
                object.__setattr__(self, name, RatFunc.coerce(v).as_poly())
        if self.X1.is_zero():
            raise ValueError("X1 must not vanish identically: the operator is assumed to have X1 != 0")

    @property
    def degree(self) -> int:
        return max(self.X1.degree(), self.X2.degree())

    @cached_property
    def ratio(self) -> RatFunc:
        """X2 / X1."""
        return RatFunc(self.X2, self.X1)

    def __call__(self, f):
        return apply_X(self, f)

    def __str__(self) -> str:
        return f"x1' = {self.X1}; x2' = {self.X2}"


def apply_X(vf: VectorField, f: Field) -> Field:
    """X1*d1(f) + X2*d2(f); polynomials map to polynomials."""
    if isinstance(f, Poly2):
        return vf.X1 * f.derive(1) + vf.X2 * f.derive(2)
    f = RatFunc.coerce(f)
    if f.is_polynomial():
        return RatFunc.coerce(vf.X1 * f.num.derive(1) + vf.X2 * f.num.derive(2))
    n, d = f.num, f.den
    xn = vf.X1 * n.derive(1) + vf.X2 * n.derive(2)
    xd = vf.X1 * d.derive(1) + vf.X2 * d.derive(2)
    return RatFunc(xn * d - n * xd, d * d)


@dataclass(frozen=True)
class BChain:
    entries: tuple[RatFunc, ...]

    def __getitem__(self, i: int) -> RatFunc:
        return self.entries[i]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def compute_b(vf: VectorField, upto: int) -> BChain:
    """b_0 .. b_upto by the recursive definition."""
    if upto < 0:
        raise ValueError("upto must be >= 0")
    x1 = RatFunc.coerce(vf.X1)
    b = [-(x1 * vf.ratio.derive(2))]
    for _ in range(upto):
        b.append(x1 * (b[-1] / x1).derive(2))
    return BChain(tuple(b))


def b_closed_form(vf: VectorField, i: int) -> RatFunc:
    """-X1 * d2^(i+1)(X2/X1), computed independently of the recursion."""
    r = vf.ratio
    for _ in range(i + 1):
        r = r.derive(2)
    return -(RatFunc.coerce(vf.X1) * r)


@dataclass(frozen=True)
class CTable:
    r: int
    c: Mapping[tuple[int, int], int] = field(repr=False)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.c[ij]


def c_table(r: int) -> CTable:
    """Reduction coefficients c[i, j] for 0 <= i < j <= r.

    c[0, j] = j; c[i, k+1] = c[i-1, k] + c[i, k] for 1 <= i <= k-1; c[k, k+1] = c[k-1, k].
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    c = {(0, 1): 1}
    for k in range(1, r):
        c[(0, k + 1)] = c[(0, k)] + 1
        for i in range(1, k):
            c[(i, k + 1)] = c[(i - 1, k)] + c[(i, k)]
        c[(k, k + 1)] = c[(k - 1, k)]
    return CTable(r, c)


def c_closed_form(i: int, j: int) -> int:
    return comb(j, i + 1)


def commutator_residual(vf: VectorField, f: Field) -> RatFunc:
    """[d2, X] f - ((d2 X1 / X1) X f - b_0 d2 f); identically zero."""
    f = RatFunc.coerce(f)
    x1 = RatFunc.coerce(vf.X1)
    xf = RatFunc.coerce(apply_X(vf, f))
    d2f = f.derive(2)
    bracket = xf.derive(2) - RatFunc.coerce(apply_X(vf, d2f))
    b0 = -(x1 * vf.ratio.derive(2))
    return bracket - (RatFunc.coerce(vf.X1.derive(2)) / x1 * xf - b0 * d2f)
