"""Differential polynomials in the d2-derivative tower y_0, ..., y_r.

``y_k`` stands for d2^k y.  A differential polynomial is a sparse map from
multi-indices ``m = (m_0, ..., m_r)`` to nonzero coefficients in Q(x1, x2),
meaning ``sum a_m * y_0**m_0 * ... * y_r**m_r``.

Reduction modulo the differential ideal generated by ``X = X1 d1 y + X2 d2 y``
never needs mixed derivatives except transiently: the image of a monomial
under the operator is rewritten with the c-table and the b-chain, and a
certificate records the multiples of ``d2^k X`` that were subtracted.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from enum import Enum
from math import comb

from .algebra import RatFunc
from .vectorfield import BChain, CTable, VectorField, apply_X, c_table, compute_b

MultiIndex = tuple[int, ...]


# --- index utilities ---------------------------------------------------------


def index_C(m: MultiIndex) -> int:
    """Weighted sum  sum_{j>=1} j * m_j."""
    return sum(j * mj for j, mj in enumerate(m))


def index_delta(m: MultiIndex, i: int, j: int, inverse: bool = False) -> MultiIndex:
    """m + e_{j-i} - e_j  (or its inverse m - e_{j-i} + e_j)."""
    r = len(m) - 1
    if not 0 < i < j <= r:
        raise ValueError(f"need 0 < i < j <= {r}, got i={i}, j={j}")
    out = list(m)
    dec, inc = (j - i, j) if inverse else (j, j - i)
    if out[dec] < 1:
        raise ValueError(f"exponent underflow at position {dec} of {m}")
    out[dec] -= 1
    out[inc] += 1
    return tuple(out)


def delta_pairs(r: int) -> Iterable[tuple[int, int]]:
    for j in range(2, r + 1):
        for i in range(1, j):
            yield i, j


def precedes(m: MultiIndex, n: MultiIndex) -> bool:
    """True when ``m`` is a direct Delta-predecessor of ``n`` (m ≻ n)."""
    r = len(m) - 1
    for i, j in delta_pairs(r):
        if m[j] >= 1 and index_delta(m, i, j) == n:
            return True
    return False


def degree_key(m: MultiIndex) -> tuple[int, ...]:
    """Sort key for the degree order: compare m_r first, then m_{r-1}, ..."""
    return tuple(reversed(m))


def degree_gt(n: MultiIndex, m: MultiIndex) -> bool:
    return degree_key(n) > degree_key(m)


def predecessor_set(m: MultiIndex, support: Iterable[MultiIndex]) -> set[MultiIndex]:
    """Indices of the support that are direct Delta-predecessors of ``m``."""
    return {p for p in support if precedes(p, m)}


def predecessor_count(m: MultiIndex, support: Iterable[MultiIndex]) -> int:
    return len(predecessor_set(m, support))


# --- differential polynomials ------------------------------------------------


@dataclass(frozen=True)
class DiffPoly:
    order: int
    coeffs: Mapping[MultiIndex, RatFunc] = field(default_factory=dict)

    def __post_init__(self):
        clean: dict[MultiIndex, RatFunc] = {}
        for m, a in self.coeffs.items():
            m = tuple(int(v) for v in m)
            if len(m) != self.order + 1 or min(m) < 0:
                raise ValueError(f"bad multi-index {m} for order {self.order}")
            a = RatFunc.coerce(a)
            if a:
                clean[m] = clean[m] + a if m in clean else a
        object.__setattr__(self, "coeffs", {m: a for m, a in clean.items() if a})

    @classmethod
    def y(cls, j: int, order: int | None = None, power: int = 1) -> DiffPoly:
        r = j if order is None else order
        m = [0] * (r + 1)
        m[j] = power
        return cls(r, {tuple(m): RatFunc.coerce(1)})

    @classmethod
    def constant(cls, a, order: int = 0) -> DiffPoly:
        return cls(order, {(0,) * (order + 1): RatFunc.coerce(a)})

    @property
    def support(self) -> frozenset[MultiIndex]:
        return frozenset(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, m: MultiIndex) -> RatFunc:
        return self.coeffs.get(tuple(m), RatFunc())

    def lift(self, order: int) -> DiffPoly:
        if order < self.order:
            raise ValueError("cannot lower the order of a differential polynomial")
        pad = (0,) * (order - self.order)
        return DiffPoly(order, {m + pad: a for m, a in self.coeffs.items()})

    def _aligned(self, other: DiffPoly) -> tuple[DiffPoly, DiffPoly]:
        r = max(self.order, other.order)
        return self.lift(r), other.lift(r)

    def __add__(self, other: DiffPoly) -> DiffPoly:
        a, b = self._aligned(other)
        out = dict(a.coeffs)
        for m, c in b.coeffs.items():
            out[m] = out[m] + c if m in out else c
        return DiffPoly(a.order, out)

    def __neg__(self) -> DiffPoly:
        return DiffPoly(self.order, {m: -a for m, a in self.coeffs.items()})

    def __sub__(self, other: DiffPoly) -> DiffPoly:
        return self + (-other)

    def scale(self, c) -> DiffPoly:
        c = RatFunc.coerce(c)
        return DiffPoly(self.order, {m: a * c for m, a in self.coeffs.items()})

    def __mul__(self, other):
        if not isinstance(other, DiffPoly):
            return self.scale(other)
        a, b = self._aligned(other)
        out: dict[MultiIndex, RatFunc] = {}
        for m1, c1 in a.coeffs.items():
            for m2, c2 in b.coeffs.items():
                m = tuple(p + q for p, q in zip(m1, m2))
                out[m] = out[m] + c1 * c2 if m in out else c1 * c2
        return DiffPoly(a.order, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffPoly):
            return NotImplemented
        a, b = self._aligned(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def leader(self) -> int | None:
        """Index k of the highest y_k present, or None for elements of K."""
        best = None
        for m in self.coeffs:
            for k in range(len(m) - 1, -1, -1):
                if m[k]:
                    best = k if best is None else max(best, k)
                    break
        return best

    def leader_degree(self) -> int:
        k = self.leader()
        if k is None:
            return 0
        return max(m[k] for m in self.coeffs)

    def highest_index(self) -> MultiIndex:
        """m*: the support element of highest degree (``degree_key``)."""
        if not self.coeffs:
            raise ValueError("zero differential polynomial has no highest index")
        return max(self.coeffs, key=degree_key)

    def monic(self) -> DiffPoly:
        return self.scale(self.coeffs[self.highest_index()].inverse())

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        out = ""
        for m in sorted(self.coeffs, key=degree_key, reverse=True):
            a = self.coeffs[m]
            mono = "*".join(f"y{k}" if e == 1 else f"y{k}^{e}" for k, e in enumerate(m) if e)
            neg = a.num.leading_coeff() < 0
            mag = -a if neg else a
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            elif mag.is_constant():
                body = f"{mag}*{mono}"
            else:
                body = f"({mag})*{mono}"
            if not out:
                out = f"-{body}" if neg else body
            else:
                out += f" - {body}" if neg else f" + {body}"
        return out

    __repr__ = __str__


class Rank(Enum):
    LOWER = "lower"
    EQUAL = "equal"
    HIGHER = "higher"


def rank_compare(A: DiffPoly, B: DiffPoly) -> Rank:
    """Rank of A relative to B: leader first, then degree in the leader."""
    la, lb = A.leader(), B.leader()
    if la is None and lb is None:
        return Rank.EQUAL
    if la is None:
        return Rank.LOWER
    if lb is None:
        return Rank.HIGHER
    if la != lb:
        return Rank.HIGHER if la > lb else Rank.LOWER
    da, db = A.leader_degree(), B.leader_degree()
    if da == db:
        return Rank.EQUAL
    return Rank.HIGHER if da > db else Rank.LOWER


# --- reduction of X-images -----------------------------------------------------


def monomial_image(vf: VectorField, m: MultiIndex, a: RatFunc, bchain: BChain, ctab: CTable | None) -> dict[MultiIndex, RatFunc]:
    """Reduced form of X(a * y^m) as a coefficient map."""
    r = len(m) - 1
    out: dict[MultiIndex, RatFunc] = {}

    def add(k: MultiIndex, v: RatFunc):
        out[k] = out[k] + v if k in out else v

    add(m, RatFunc.coerce(apply_X(vf, a)) + bchain[0] * a * index_C(m))
    for i, j in delta_pairs(r):
        if m[j]:
            add(index_delta(m, i, j), bchain[i] * a * (m[j] * ctab[i, j]))
    return out


def _chain_and_table(vf: VectorField, r: int) -> tuple[BChain, CTable | None]:
    return compute_b(vf, max(r - 1, 0)), (c_table(r) if r >= 1 else None)


@dataclass(frozen=True)
class ReductionCertificate:
    """``X A = reduced + sum(multiplier * d2^k X)`` once d1-derivatives are written out."""

    source: DiffPoly
    reduced: DiffPoly
    combination: tuple[tuple[DiffPoly, int], ...]

    def verify(self, vf: VectorField) -> bool:
        r = self.source.order
        lhs = _image_with_mixed(vf, self.source)
        total = _ext_from_diffpoly(self.reduced, r)
        for mult, k in self.combination:
            total = _ext_add(total, _ext_mul(_ext_from_diffpoly(mult, r), _d2_power_X(vf, k, r)))
        diff = _ext_add(lhs, _ext_scale(total, -1))
        return not diff


def xreduce(vf: VectorField, A: DiffPoly) -> ReductionCertificate:
    """Rewrite X A modulo the ideal generated by X into the tower y_0..y_r."""
    r = A.order
    bchain, ctab = _chain_and_table(vf, r)
    reduced: dict[MultiIndex, RatFunc] = {}
    for m, a in A.coeffs.items():
        for k, v in monomial_image(vf, m, a, bchain, ctab).items():
            reduced[k] = reduced[k] + v if k in reduced else v
    combination = _eliminate_mixed(vf, A)
    return ReductionCertificate(A, DiffPoly(r, reduced), combination)


def residual_coeffs(vf: VectorField, A: DiffPoly) -> dict[MultiIndex, RatFunc]:
    """Coefficients f_m of R in  X A - C(m*) b_0 A  ~  R = sum_{m < m*} f_m y^m.

    A must be normalized so that its highest-degree index m* has coefficient 1.
    Every index that can carry a residual is present in the result (possibly
    with a zero value); an all-zero map certifies membership of
    ``X A - C(m*) b_0 A`` in the ideal.
    """
    mstar = A.highest_index()
    if A.coeffs[mstar] != 1:
        raise ValueError(f"highest term {mstar} of A is not monic")
    r = A.order
    bchain, ctab = _chain_and_table(vf, r)
    keys = set(A.coeffs) - {mstar}
    for p in A.coeffs:
        for i, j in delta_pairs(r):
            if p[j]:
                keys.add(index_delta(p, i, j))
    cstar = index_C(mstar)
    out: dict[MultiIndex, RatFunc] = {}
    for m in sorted(keys, key=degree_key, reverse=True):
        am = A.coeff(m)
        f = RatFunc.coerce(apply_X(vf, am)) + bchain[0] * am * (index_C(m) - cstar)
        for i, j in delta_pairs(r):
            if m[j - i]:
                src = index_delta(m, i, j, inverse=True)
                if src in A.coeffs:
                    f = f + bchain[i] * A.coeffs[src] * ((m[j] + 1) * ctab[i, j])
        out[m] = f
    return out


# --- extended ring with mixed derivatives z_k = d1 d2^k y -----------------------
# Keys are tuples of length 2r+3: exponents of y_0..y_{r+1} followed by z_0..z_r.

ExtPoly = dict[tuple[int, ...], RatFunc]


def _ext_len(r: int) -> int:
    return 2 * r + 3


def _ext_from_diffpoly(A: DiffPoly, r: int) -> ExtPoly:
    pad = _ext_len(r) - (A.order + 1)
    return {m + (0,) * pad: a for m, a in A.coeffs.items()}


def _ext_var(r: int, pos: int) -> tuple[int, ...]:
    e = [0] * _ext_len(r)
    e[pos] = 1
    return tuple(e)


def _ext_add(p: ExtPoly, q: ExtPoly) -> ExtPoly:
    out = dict(p)
    for k, v in q.items():
        w = out[k] + v if k in out else v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def _ext_scale(p: ExtPoly, c) -> ExtPoly:
    return {k: v * c for k, v in p.items() if v * c}


def _ext_mul(p: ExtPoly, q: ExtPoly) -> ExtPoly:
    out: ExtPoly = {}
    for k1, v1 in p.items():
        for k2, v2 in q.items():
            k = tuple(a + b for a, b in zip(k1, k2))
            out[k] = out[k] + v1 * v2 if k in out else v1 * v2
    return {k: v for k, v in out.items() if v}


def _image_with_mixed(vf: VectorField, A: DiffPoly) -> ExtPoly:
    """X A written with z_k = d1 d2^k y and y_{k+1} = d2 y_k (no reduction)."""
    r = A.order
    x1, x2 = RatFunc.coerce(vf.X1), RatFunc.coerce(vf.X2)
    out: ExtPoly = {}
    for m, a in A.coeffs.items():
        base = m + (0,) * (_ext_len(r) - r - 1)
        out = _ext_add(out, {base: RatFunc.coerce(apply_X(vf, a))})
        for j, mj in enumerate(m):
            if not mj:
                continue
            lowered = list(base)
            lowered[j] -= 1
            zk = list(lowered)
            zk[r + 2 + j] += 1
            yk = list(lowered)
            yk[j + 1] += 1
            out = _ext_add(out, {tuple(zk): a * x1 * mj, tuple(yk): a * x2 * mj})
    return out


def _d2_power_X(vf: VectorField, k: int, r: int) -> ExtPoly:
    """d2^k X = sum_l binom(k, l) (d2^l X1 z_{k-l} + d2^l X2 y_{k-l+1})."""
    out: ExtPoly = {}
    d1, d2 = vf.X1, vf.X2
    for l in range(k + 1):
        c = comb(k, l)
        out = _ext_add(
            out,
            {
                _ext_var(r, r + 2 + k - l): RatFunc.coerce(d1 * c),
                _ext_var(r, k - l + 1): RatFunc.coerce(d2 * c),
            },
        )
        d1, d2 = d1.derive(2), d2.derive(2)
    return out


def _eliminate_mixed(vf: VectorField, A: DiffPoly) -> tuple[tuple[DiffPoly, int], ...]:
    """Multipliers of d2^k X that clear every z_k from the image of A, top k first."""
    r = A.order
    x1 = RatFunc.coerce(vf.X1)
    expr = _image_with_mixed(vf, A)
    combination = []
    for k in range(r, -1, -1):
        pos = r + 2 + k
        mult: dict[MultiIndex, RatFunc] = {}
        for key, v in expr.items():
            if key[pos]:
                if key[pos] != 1 or any(key[r + 2 + q] for q in range(r + 1) if q != k):
                    raise AssertionError("image is not linear in mixed derivatives")
                mult[key[: r + 1]] = v / x1
        if not mult:
            continue
        mp = DiffPoly(r, mult)
        expr = _ext_add(expr, _ext_scale(_ext_mul(_ext_from_diffpoly(mp, r), _d2_power_X(vf, k, r)), -1))
        combination.append((mp, k))
    return tuple(combination)
