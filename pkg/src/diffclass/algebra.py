"""Exact arithmetic in Q[x1, x2] and its fraction field.

Polynomials are sparse maps from exponent pairs ``(i, j)`` to nonzero
``Fraction`` coefficients, meaning ``c * x1**i * x2**j``.  Rational functions
are kept in a canonical form: numerator and denominator coprime, denominator
monic under graded lexicographic order with ``x1 > x2``.  Canonical forms make
``==`` a structural comparison.

Only gcd, exact division and factorisation are delegated to sympy's sparse
polynomial rings; everything else is plain Python on ``Fraction``.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from fractions import Fraction
from functools import cache
from math import gcd, lcm
from types import MappingProxyType
from typing import Union

from sympy import QQ
from sympy.polys.rings import ring as _sympy_ring

BigRat = Fraction
Exponent = tuple[int, int]
Scalar = Union[int, Fraction]


class AlgebraError(ArithmeticError):
    pass


class PoleError(AlgebraError, ZeroDivisionError):
    """Raised when a rational function is evaluated at a zero of its denominator."""


def _grlex_key(e: Exponent) -> tuple[int, int]:
    return (e[0] + e[1], e[0])


def as_fraction(c: Scalar) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"expected int or Fraction, got {type(c).__name__}")


class Poly2:
    """Sparse bivariate polynomial with rational coefficients (immutable)."""

    __slots__ = ("_hash", "_terms")

    def __init__(self, terms: Mapping[Exponent, Scalar] | None = None):
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for (i, j), c in terms.items():
                if i < 0 or j < 0:
                    raise ValueError(f"negative exponent {(i, j)}")
                c = as_fraction(c)
                if c:
                    clean[(int(i), int(j))] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Exponent, Fraction]) -> Poly2:
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: Scalar) -> Poly2:
        c = as_fraction(c)
        return cls._raw({(0, 0): c} if c else {})

    @classmethod
    def var(cls, axis: int) -> Poly2:
        if axis not in (1, 2):
            raise ValueError("axis must be 1 or 2")
        return cls._raw({(1, 0) if axis == 1 else (0, 1): Fraction(1)})

    @classmethod
    def monomial(cls, i: int, j: int, c: Scalar = 1) -> Poly2:
        return cls({(i, j): c})

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return MappingProxyType(self._terms)

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        """Terms in graded lexicographic order, leading term first."""
        return sorted(self._terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and (0, 0) in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0, 0), Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((i + j for i, j in self._terms), default=-1)

    def degree_in(self, axis: int) -> int:
        k = axis - 1
        return max((e[k] for e in self._terms), default=-1)

    def leading_term(self) -> tuple[Exponent, Fraction]:
        if not self._terms:
            raise AlgebraError("zero polynomial has no leading term")
        e = max(self._terms, key=_grlex_key)
        return e, self._terms[e]

    def leading_coeff(self) -> Fraction:
        return self.leading_term()[1]

    def trailing_term(self) -> tuple[Exponent, Fraction]:
        if not self._terms:
            raise AlgebraError("zero polynomial has no trailing term")
        e = min(self._terms, key=_grlex_key)
        return e, self._terms[e]

    def homogeneous_part(self, d: int) -> Poly2:
        return Poly2._raw({e: c for e, c in self._terms.items() if e[0] + e[1] == d})

    def monic(self) -> Poly2:
        return self.scale(1 / self.leading_coeff())

    def scale(self, c: Scalar) -> Poly2:
        c = as_fraction(c)
        if not c:
            return Poly2()
        return Poly2._raw({e: v * c for e, v in self._terms.items()})

    def content(self) -> Fraction:
        """Positive rational content: gcd of numerators over lcm of denominators."""
        if not self._terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self._terms.values():
            num = gcd(num, c.numerator)
            den = lcm(den, c.denominator)
        return Fraction(num, den)

    # arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(other) -> Poly2 | None:
        if isinstance(other, Poly2):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly2.const(other)
        return None

    def __add__(self, other):
        o = Poly2._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in o._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly2._raw(out)

    __radd__ = __add__

    def __neg__(self) -> Poly2:
        return Poly2._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        o = Poly2._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = Poly2._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly2):
            return NotImplemented
        out: dict[Exponent, Fraction] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                e = (i1 + i2, j1 + j2)
                out[e] = out.get(e, 0) + c1 * c2
        return Poly2._raw({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Poly2:
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative int")
        result = Poly2.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division of polynomial by zero")
            return self.scale(1 / as_fraction(other))
        if isinstance(other, (Poly2, RatFunc)):
            return RatFunc(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatFunc(Poly2.const(other)) / self
        return NotImplemented

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly2):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_term() == other
        if isinstance(other, RatFunc):
            return other == self
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # calculus and evaluation -------------------------------------------

    def derive(self, axis: int) -> Poly2:
        out: dict[Exponent, Fraction] = {}
        if axis == 1:
            for (i, j), c in self._terms.items():
                if i:
                    out[(i - 1, j)] = c * i
        elif axis == 2:
            for (i, j), c in self._terms.items():
                if j:
                    out[(i, j - 1)] = c * j
        else:
            raise ValueError("axis must be 1 or 2")
        return Poly2._raw(out)

    def eval(self, p: tuple[Scalar, Scalar]) -> Fraction:
        x, y = as_fraction(p[0]), as_fraction(p[1])
        total = Fraction(0)
        for (i, j), c in self._terms.items():
            total += c * x**i * y**j
        return total

    def eval_float(self, x: float, y: float) -> float:
        return sum(float(c) * x**i * y**j for (i, j), c in self._terms.items())

    def shift(self, b1: Scalar, b2: Scalar) -> Poly2:
        """Return p(x1 + b1, x2 + b2)."""
        s1 = Poly2({(1, 0): 1, (0, 0): b1})
        s2 = Poly2({(0, 1): 1, (0, 0): b2})
        out = Poly2()
        for (i, j), c in self._terms.items():
            out = out + (s1**i) * (s2**j) * c
        return out

    def __repr__(self) -> str:
        return f"Poly2({self})"

    def __str__(self) -> str:
        return format_poly(self)


def _format_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly2, names: tuple[str, str] = ("x1", "x2")) -> str:
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for (i, j), c in p.sorted_terms():
        mono = []
        if i:
            mono.append(names[0] if i == 1 else f"{names[0]}^{i}")
        if j:
            mono.append(names[1] if j == 1 else f"{names[1]}^{j}")
        mag = abs(c)
        if not mono:
            body = _format_coeff(mag)
        elif mag == 1:
            body = "*".join(mono)
        elif mag.denominator == 1:
            body = f"{mag.numerator}*" + "*".join(mono)
        else:
            body = f"({_format_coeff(mag)})*" + "*".join(mono)
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


# --- sympy bridge (gcd, exact division, factorisation) -------------------

_RING, _SX1, _SX2 = _sympy_ring("x1,x2", QQ)


def _to_ring(p: Poly2):
    return _RING.from_dict({e: QQ(c.numerator, c.denominator) for e, c in p.terms.items()})


def _from_ring(q) -> Poly2:
    return Poly2._raw(
        {(int(e[0]), int(e[1])): Fraction(int(c.numerator), int(c.denominator)) for e, c in q.items()}
    )


def poly_gcd(p: Poly2, q: Poly2) -> Poly2:
    """Monic gcd (zero only when both inputs are zero)."""
    if p.is_zero():
        return q.monic() if q else Poly2()
    if q.is_zero():
        return p.monic()
    if p.is_constant() or q.is_constant():
        return Poly2.const(1)
    return _from_ring(_to_ring(p).gcd(_to_ring(q))).monic()


def poly_cofactors(p: Poly2, q: Poly2) -> tuple[Poly2, Poly2, Poly2]:
    """Return ``(g, p/g, q/g)`` with ``g`` a gcd of ``p`` and ``q``."""
    h, cp, cq = _to_ring(p).cofactors(_to_ring(q))
    return _from_ring(h), _from_ring(cp), _from_ring(cq)


def poly_divides(d: Poly2, p: Poly2) -> bool:
    if d.is_zero():
        return p.is_zero()
    _, r = _to_ring(p).div(_to_ring(d))
    return not r


def poly_exact_div(p: Poly2, d: Poly2) -> Poly2:
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    q, r = _to_ring(p).div(_to_ring(d))
    if r:
        raise AlgebraError(f"{d} does not divide {p}")
    return _from_ring(q)


def poly_factor(p: Poly2) -> tuple[Fraction, list[tuple[Poly2, int]]]:
    """Irreducible factorisation over Q: ``p = c * prod(f**e)`` with monic ``f``."""
    if p.is_zero():
        raise AlgebraError("cannot factor the zero polynomial")
    c, facs = _to_ring(p).factor_list()
    out = []
    scale = Fraction(int(c.numerator), int(c.denominator))
    for f, e in facs:
        fp = _from_ring(f)
        lc = fp.leading_coeff()
        scale *= lc**e
        out.append((fp.scale(1 / lc), int(e)))
    out.sort(key=lambda fe: (fe[0].degree(), [(_grlex_key(e), c) for e, c in fe[0].sorted_terms()]))
    return scale, out


def squarefree_part(p: Poly2) -> Poly2:
    _, facs = poly_factor(p)
    out = Poly2.const(1)
    for f, _ in facs:
        out = out * f
    return out


# --- rational functions ----------------------------------------------------


class RatFunc:
    """Element of Q(x1, x2) in canonical normalized form (immutable)."""

    __slots__ = ("_hash", "den", "num")

    def __init__(self, num: Poly2 | Scalar = 0, den: Poly2 | Scalar | None = None):
        num = num if isinstance(num, Poly2) else Poly2.const(num)
        if den is None:
            den = Poly2.const(1)
        elif not isinstance(den, Poly2):
            den = Poly2.const(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self._hash = None
        if num.is_zero():
            self.num, self.den = Poly2(), Poly2.const(1)
            return
        if den.is_constant():
            self.num, self.den = num.scale(1 / den.constant_term()), Poly2.const(1)
            return
        if num.is_constant():
            n, d = num, den
        else:
            _, n, d = poly_cofactors(num, den)
        lc = d.leading_coeff()
        self.num, self.den = n.scale(1 / lc), d.scale(1 / lc)

    @classmethod
    def _raw(cls, num: Poly2, den: Poly2) -> RatFunc:
        obj = cls.__new__(cls)
        obj.num, obj.den, obj._hash = num, den, None
        return obj

    @classmethod
    def coerce(cls, v) -> RatFunc:
        if isinstance(v, RatFunc):
            return v
        if isinstance(v, Poly2):
            return cls._raw(v, Poly2.const(1))
        if isinstance(v, (int, Fraction)):
            return cls._raw(Poly2.const(v), Poly2.const(1))
        raise TypeError(f"cannot interpret {type(v).__name__} as a rational function")

    @classmethod
    def var(cls, axis: int) -> RatFunc:
        return cls.coerce(Poly2.var(axis))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.den.is_constant() and self.num.is_constant()

    def as_poly(self) -> Poly2:
        if not self.is_polynomial():
            raise AlgebraError(f"{self} is not a polynomial")
        return self.num

    def __add__(self, other):
        try:
            o = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den.is_constant() and o.den.is_constant():
            return RatFunc._raw(self.num + o.num, self.den)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> RatFunc:
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        try:
            o = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        try:
            o = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatFunc._raw(self.num.scale(other), self.den) if other else RatFunc()
        try:
            o = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den.is_constant() and o.den.is_constant():
            return RatFunc._raw(self.num * o.num, self.den)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> RatFunc:
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        try:
            o = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        try:
            o = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return o / self

    def __pow__(self, n: int) -> RatFunc:
        if not isinstance(n, int):
            raise TypeError("exponent must be an int")
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc._raw(self.num**n, self.den**n)

    def __eq__(self, other) -> bool:
        try:
            o = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def derive(self, axis: int) -> RatFunc:
        if self.den.is_constant():
            return RatFunc._raw(self.num.derive(axis), self.den)
        n, d = self.num, self.den
        return RatFunc(n.derive(axis) * d - n * d.derive(axis), d * d)

    def eval(self, p: tuple[Scalar, Scalar]) -> Fraction:
        dv = self.den.eval(p)
        if not dv:
            raise PoleError(f"{self} has a pole at {tuple(str(c) for c in p)}")
        return self.num.eval(p) / dv

    def __repr__(self) -> str:
        return f"RatFunc({self})"

    def __str__(self) -> str:
        if self.den.is_constant():
            return format_poly(self.num)
        n = format_poly(self.num)
        d = format_poly(self.den)
        if len(self.num.terms) > 1:
            n = f"({n})"
        if len(self.den.terms) > 1:
            d = f"({d})"
        return f"{n}/{d}"


Field = Union[Poly2, RatFunc]


def field_ops(lhs, rhs, op: str) -> RatFunc:
    a, b = RatFunc.coerce(lhs), RatFunc.coerce(rhs)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown field operation {op!r}")


def derive(f: Field, axis: int) -> Field:
    if axis not in (1, 2):
        raise ValueError("axis must be 1 or 2")
    if isinstance(f, (int, Fraction)):
        return Poly2()
    return f.derive(axis)


def eval_point(f, p: tuple[Scalar, Scalar]) -> Fraction:
    return RatFunc.coerce(f).eval(p)


X1_VAR = Poly2.var(1)
X2_VAR = Poly2.var(2)


@cache
def monomials_upto(deg: int) -> tuple[Exponent, ...]:
    """All exponents of total degree <= deg, ascending by (degree, x1-exponent)."""
    return tuple((i, d - i) for d in range(deg + 1) for i in range(d + 1))


def poly_from_coeffs(exps: Iterable[Exponent], coeffs: Iterable[Scalar]) -> Poly2:
    return Poly2(dict(zip(exps, coeffs)))
