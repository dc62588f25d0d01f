"""Truncated power-series solutions of the order-3 system

    d1 u = f(x1, x2, u),    d2 u = g(x1, x2, u)

where f and g are polynomials in u with rational-function coefficients.
With D1 = d/dx1 + f d/du and D2 = d/dx2 + g d/du the coefficients about a
base point are

    u_{m,0} = D1^{m-1} f / m!,     u_{m,n} = D1^m D2^{n-1} g / (m! n!)

evaluated at (base, u0).  Everything is carried out on truncated trivariate
series in (s1, s2, w) = (x1 - base1, x2 - base2, u - u0), which is all the
evaluation at the base point ever sees.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from .algebra import PoleError, Poly2, RatFunc, as_fraction
from .darboux import height_candidates
from .vectorfield import VectorField, apply_X, compute_b

Tri = dict[tuple[int, int, int], Fraction]
Bi = dict[tuple[int, int], Fraction]


class SeriesError(ValueError):
    pass


# --- polynomials in u over Q(x1, x2) ------------------------------------------


@dataclass(frozen=True)
class UPoly:
    coeffs: tuple[RatFunc, ...] = ()

    def __post_init__(self):
        cs = [RatFunc.coerce(c) for c in self.coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def of(cls, *coeffs) -> UPoly:
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> RatFunc:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else RatFunc()

    def __add__(self, other: UPoly) -> UPoly:
        n = max(len(self.coeffs), len(other.coeffs))
        return UPoly(tuple(self[k] + other[k] for k in range(n)))

    def __neg__(self) -> UPoly:
        return UPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: UPoly) -> UPoly:
        return self + (-other)

    def __mul__(self, other) -> UPoly:
        if not isinstance(other, UPoly):
            c = RatFunc.coerce(other)
            return UPoly(tuple(a * c for a in self.coeffs))
        if self.is_zero() or other.is_zero():
            return UPoly()
        out = [RatFunc()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UPoly(tuple(out))

    __rmul__ = __mul__

    def derive_x(self, axis: int) -> UPoly:
        return UPoly(tuple(c.derive(axis) for c in self.coeffs))

    def derive_u(self) -> UPoly:
        return UPoly(tuple(c * k for k, c in enumerate(self.coeffs) if k))

    def __eq__(self, other) -> bool:
        if not isinstance(other, UPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else ("u" if k == 1 else f"u^{k}")
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def build_fg(vf: VectorField, a) -> tuple[UPoly, UPoly]:
    """Right-hand sides f, g of the order-3 system for a solution a of X a = 2 b0 a + b2."""
    a = RatFunc.coerce(a)
    b = compute_b(vf, 2)
    eq = RatFunc.coerce(apply_X(vf, a)) - b[0] * a * 2 - b[2]
    if eq:
        raise SeriesError(f"a = {a} does not satisfy X a = 2 b0 a + b2 (residual {eq})")
    r = vf.ratio
    half = Fraction(1, 2)
    f = UPoly.of(-r.derive(2).derive(2) - r * a, -r.derive(2), -r * half)
    g = UPoly.of(a, 0, half)
    return f, g


def check_compatibility(f: UPoly, g: UPoly) -> UPoly:
    """D2 f - D1 g; vanishes identically for a compatible pair."""
    d2f = f.derive_x(2) + g * f.derive_u()
    d1g = g.derive_x(1) + f * g.derive_u()
    return d2f - d1g


# --- truncated series -----------------------------------------------------------


def _bi_taylor(p: Poly2, base: tuple[Fraction, Fraction]) -> Bi:
    return dict(p.shift(base[0], base[1]).terms)


def rat_taylor(c: RatFunc, base: tuple[Fraction, Fraction], N: int) -> Bi:
    """Taylor coefficients of c about base through total degree N."""
    num = _bi_taylor(c.num, base)
    den = _bi_taylor(c.den, base)
    d0 = den.get((0, 0), Fraction(0))
    if not d0:
        raise PoleError(f"{c} has a pole at the base point")
    out: Bi = {}
    for d in range(N + 1):
        for i in range(d, -1, -1):
            e = (i, d - i)
            acc = num.get(e, Fraction(0))
            for (a1, a2), dv in den.items():
                if (a1, a2) == (0, 0) or a1 > e[0] or a2 > e[1]:
                    continue
                q = out.get((e[0] - a1, e[1] - a2))
                if q:
                    acc -= dv * q
            if acc:
                out[e] = acc / d0
    return out


def _tri_add(p: Tri, q: Tri, c: Fraction = Fraction(1)) -> Tri:
    out = dict(p)
    for k, v in q.items():
        w = out.get(k, 0) + c * v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def _tri_mul(p: Tri, q: Tri, N: int) -> Tri:
    out: Tri = {}
    for (a, b, c), v in p.items():
        da = a + b + c
        for (d, e, f), w in q.items():
            if da + d + e + f > N:
                continue
            k = (a + d, b + e, c + f)
            out[k] = out.get(k, 0) + v * w
    return {k: v for k, v in out.items() if v}


def _tri_derive(p: Tri, pos: int) -> Tri:
    out: Tri = {}
    for k, v in p.items():
        if k[pos]:
            kk = list(k)
            kk[pos] -= 1
            out[tuple(kk)] = v * k[pos]
    return out


def upoly_to_tri(h: UPoly, base: tuple[Fraction, Fraction], u0: Fraction, N: int) -> Tri:
    """h(base + s, u0 + w) as a truncated series in (s1, s2, w)."""
    out: Tri = {}
    for k, c in enumerate(h.coeffs):
        if not c:
            continue
        tay = rat_taylor(c, base, N)
        for l in range(min(k, N) + 1):
            coef = comb(k, l) * u0 ** (k - l)
            if not coef:
                continue
            for (i, j), v in tay.items():
                if i + j + l <= N:
                    key = (i, j, l)
                    out[key] = out.get(key, 0) + coef * v
    return {k: v for k, v in out.items() if v}


class _Derivations:
    def __init__(self, F: Tri, G: Tri, N: int):
        self.F, self.G, self.N = F, G, N

    def D1(self, H: Tri) -> Tri:
        return _tri_add(_tri_derive(H, 0), _tri_mul(self.F, _tri_derive(H, 2), self.N))

    def D2(self, H: Tri) -> Tri:
        return _tri_add(_tri_derive(H, 1), _tri_mul(self.G, _tri_derive(H, 2), self.N))


def _coefficients(F: Tri, G: Tri, u0: Fraction, N: int, via: str = "g") -> Bi:
    ops = _Derivations(F, G, N)
    coeffs: Bi = {(0, 0): u0}
    H = F
    for m in range(1, N + 1):
        coeffs[(m, 0)] = H.get((0, 0, 0), Fraction(0)) / factorial(m)
        H = ops.D1(H)
    if via == "g":
        chain = G
        for n in range(1, N + 1):
            H = chain
            for m in range(N - n + 1):
                coeffs[(m, n)] = H.get((0, 0, 0), Fraction(0)) / (factorial(m) * factorial(n))
                H = ops.D1(H)
            chain = ops.D2(chain)
    else:
        # alternative route through D1^{m-1} D2^n f, valid for m >= 1
        chain = ops.D2(F)
        for n in range(1, N + 1):
            H = chain
            for m in range(1, N - n + 1):
                coeffs[(m, n)] = H.get((0, 0, 0), Fraction(0)) / (factorial(m) * factorial(n))
                H = ops.D1(H)
            chain = ops.D2(chain)
    return {k: v for k, v in coeffs.items() if v}


@dataclass(frozen=True)
class SeriesSolution:
    base_point: tuple[Fraction, Fraction]
    u0: Fraction
    trunc_deg: int
    coeffs: Mapping[tuple[int, int], Fraction]
    residual_deg: int
    residual_f: Mapping[tuple[int, int], Fraction] = field(default_factory=dict)
    residual_g: Mapping[tuple[int, int], Fraction] = field(default_factory=dict)
    radius_estimate: float | None = None

    def coeff(self, i: int, j: int) -> Fraction:
        return self.coeffs.get((i, j), Fraction(0))

    @property
    def certified(self) -> bool:
        return not self.residual_f and not self.residual_g


def _compose_residual(H: Tri, u: Bi, u0: Fraction, N: int, du: Bi) -> Bi:
    """Coefficients of du - H(s, u(s) - u0) of total degree < N."""
    w = {k: v for k, v in u.items() if k != (0, 0)}  # u - u0
    powers: list[Bi] = [{(0, 0): Fraction(1)}]
    max_l = max((k[2] for k in H), default=0)
    for _ in range(max_l):
        prev = powers[-1]
        nxt: Bi = {}
        for (a, b), v in prev.items():
            for (c, d), x in w.items():
                if a + b + c + d < N:
                    nxt[(a + c, b + d)] = nxt.get((a + c, b + d), 0) + v * x
        powers.append({k: v for k, v in nxt.items() if v})
    comp: Bi = {}
    for (i, j, l), v in H.items():
        for (a, b), x in powers[l].items():
            if i + j + a + b < N:
                comp[(i + a, j + b)] = comp.get((i + a, j + b), 0) + v * x
    out: Bi = {}
    for k in set(comp) | set(du):
        if sum(k) < N:
            r = du.get(k, 0) - comp.get(k, 0)
            if r:
                out[k] = r
    return out


def _radius_estimate(coeffs: Mapping[tuple[int, int], Fraction], N: int) -> float | None:
    """Root-test estimate from the largest coefficient of each total degree."""
    est = []
    for d in range(1, N + 1):
        m = max((abs(v) for (i, j), v in coeffs.items() if i + j == d), default=Fraction(0))
        if m:
            est.append((d, float(m) ** (-1.0 / d)))
    if len(est) < 2:
        return None
    tail = [r for _, r in est[-3:]]
    return sum(tail) / len(tail)


def solve_series(
    f: UPoly,
    g: UPoly,
    base: Sequence = (0, 0),
    u0=0,
    trunc: int = 8,
    vf: VectorField | None = None,
) -> SeriesSolution:
    """Power-series solution through total degree ``trunc`` with a residual certificate."""
    base = (as_fraction(base[0]), as_fraction(base[1]))
    u0 = as_fraction(u0)
    if trunc < 1:
        raise SeriesError("truncation degree must be >= 1")
    problems = []
    if vf is not None and vf.X1.eval(base) == 0:
        problems.append("X1 vanishes at the base point")
    for name, h in (("f", f), ("g", g)):
        for k, c in enumerate(h.coeffs):
            if c and c.den.eval(base) == 0:
                problems.append(f"coefficient of u^{k} in {name} has a pole at the base point")
    if problems:
        raise SeriesError("singular base point: " + "; ".join(problems))
    if not check_compatibility(f, g).is_zero():
        raise SeriesError("f and g are not compatible (D2 f - D1 g is not zero)")
    N = trunc
    F = upoly_to_tri(f, base, u0, N)
    G = upoly_to_tri(g, base, u0, N)
    coeffs = _coefficients(F, G, u0, N)
    du1 = {(i - 1, j): v * i for (i, j), v in coeffs.items() if i}
    du2 = {(i, j - 1): v * j for (i, j), v in coeffs.items() if j}
    res_f = _compose_residual(F, coeffs, u0, N, du1)
    res_g = _compose_residual(G, coeffs, u0, N, du2)
    return SeriesSolution(base, u0, N, coeffs, N - 1, res_f, res_g, _radius_estimate(coeffs, N))


def alternative_coefficients(f: UPoly, g: UPoly, base: Sequence = (0, 0), u0=0, trunc: int = 8) -> dict[tuple[int, int], Fraction]:
    """Coefficients u_{m,n} (m >= 1) through D1^{m-1} D2^n f instead of g."""
    base = (as_fraction(base[0]), as_fraction(base[1]))
    u0 = as_fraction(u0)
    F = upoly_to_tri(f, base, u0, trunc)
    G = upoly_to_tri(g, base, u0, trunc)
    return _coefficients(F, G, u0, trunc, via="f")


def _height_points():
    vals = height_candidates(6)
    pts = [(a, b) for a in vals for b in vals]
    pts.sort(key=lambda p: (max(max(abs(c.numerator), c.denominator) for c in p), abs(p[0]) + abs(p[1])))
    return pts


def choose_base_point(f: UPoly, g: UPoly, vf: VectorField | None = None) -> tuple[Fraction, Fraction]:
    """Smallest-height rational point avoiding X1 = 0 and every coefficient pole."""
    dens = [c.den for h in (f, g) for c in h.coeffs if c]
    if vf is not None:
        dens.append(vf.X1)
    for p in _height_points():
        if all(d.eval(p) != 0 for d in dens):
            return p
    raise SeriesError("no admissible base point of small height")
