"""Invariant algebraic curves and rational first integrals.

A Darboux polynomial p satisfies ``X p = k p`` for a polynomial cofactor k of
degree at most ``deg(X) - 1``.  For a fixed degree m the top homogeneous part
of p is pinned down by the top homogeneous part of the field: unless the top
part is radial, ``p_m`` is a product of irreducible factors of
``T = x1*X2_top - x2*X1_top``, and the top part of k is ``X_top p_m / p_m``.
What remains is bilinear in the lower coefficients of p (z) and of k (kappa).
A lex Groebner basis with z > kappa eliminates z; rational values of kappa
come from rational roots of the univariate members, falling back to a
bounded-height grid when a kappa stays free.  For each kappa the system is
linear in z and is solved exactly, with free coefficients set to zero.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product
from math import gcd, lcm

import sympy

from .algebra import (
    Exponent,
    Poly2,
    RatFunc,
    _from_ring,
    _grlex_key,
    _to_ring,
    monomials_upto,
    poly_divides,
    poly_factor,
)
from .bounds import SearchBounds
from .linalg import solve_sparse
from .vectorfield import VectorField, apply_X


class VerificationError(AssertionError):
    """An emitted object failed its exact re-verification."""


@dataclass(frozen=True)
class DarbouxPair:
    p: Poly2
    k: Poly2

    def __post_init__(self):
        if self.p.is_constant():
            raise ValueError("a Darboux polynomial must be non-constant")

    def verify(self, vf: VectorField) -> bool:
        return apply_X(vf, self.p) == self.k * self.p


@dataclass(frozen=True)
class DarbouxSearch:
    """Result of :func:`find_darboux`; iterates over the pairs found."""

    pairs: tuple[DarbouxPair, ...]
    max_deg: int
    cofactor_height: int
    complete: bool
    notes: tuple[str, ...] = ()

    def __iter__(self) -> Iterator[DarbouxPair]:
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __getitem__(self, i: int) -> DarbouxPair:
        return self.pairs[i]


def poly_sort_key(p: Poly2) -> tuple:
    return (p.degree(), [(_grlex_key(e), c) for e, c in p.sorted_terms()])


def _homogeneous_monomials(d: int) -> list[Exponent]:
    return [(i, d - i) for i in range(d, -1, -1)]


def _lower_monomials(m: int) -> list[Exponent]:
    """Monomials of degree < m, descending grlex (so low monomials end up free)."""
    out = [e for d in range(m) for e in _homogeneous_monomials(d)]
    return sorted(out, key=_grlex_key, reverse=True)


def _top_candidates(T: Poly2, m: int) -> list[Poly2]:
    """Monic products of irreducible factors of T with total degree m."""
    _, facs = poly_factor(T)
    gens = [f for f, _ in facs]
    out = []
    ranges = [range(m // f.degree() + 1) for f in gens]
    for exps in product(*ranges):
        if sum(e * f.degree() for e, f in zip(exps, gens)) == m:
            out.append(reduce(lambda acc, fe: acc * fe[0] ** fe[1], zip(gens, exps), Poly2.const(1)))
    return sorted(out, key=poly_sort_key)


# Bilinear system: one equation per x-monomial, each a map
# (z index or None, kappa index or None) -> coefficient.
Equation = dict[tuple[int | None, int | None], Fraction]


def _bilinear_equations(
    vf: VectorField,
    known: dict[Exponent, Fraction],
    z_monos: Sequence[Exponent],
    k_known: Poly2,
    k_monos: Sequence[Exponent],
) -> list[Equation]:
    eqs: dict[Exponent, Equation] = {}

    def add(poly: Poly2, key):
        for e, c in poly.terms.items():
            row = eqs.setdefault(e, {})
            v = row.get(key, 0) + c
            if v:
                row[key] = v
            else:
                row.pop(key, None)

    slots = [(None, c, e) for e, c in known.items()] + [(a, Fraction(1), e) for a, e in enumerate(z_monos)]
    for a, c, e in slots:
        mono = Poly2.monomial(e[0], e[1], c)
        add(apply_X(vf, mono) - k_known * mono, (a, None))
        for b, f in enumerate(k_monos):
            add(-Poly2.monomial(e[0] + f[0], e[1] + f[1], c), (a, b))
    return [row for row in eqs.values() if row]


def _linear_rows(eqs: Sequence[Equation], kappa: Sequence[Fraction]) -> tuple[list[dict[int, Fraction]], list[Fraction]]:
    rows, rhs = [], []
    for eq in eqs:
        row: dict[int, Fraction] = {}
        const = Fraction(0)
        for (a, b), c in eq.items():
            v = c * (kappa[b] if b is not None else 1)
            if not v:
                continue
            if a is None:
                const += v
            else:
                row[a] = row.get(a, 0) + v
        rows.append({k: v for k, v in row.items() if v})
        rhs.append(-const)
    return rows, rhs


def height_candidates(height: int) -> list[Fraction]:
    """Rationals p/q with |p|, q <= height, ordered by height then |value| then sign."""
    seen = set()
    out = []
    for h in range(height + 1):
        for q in range(1, h + 1):
            for p in range(-h, h + 1):
                if max(abs(p), q) != h and not (p == 0 and q == 1):
                    continue
                v = Fraction(p, q)
                if v not in seen:
                    seen.add(v)
                    out.append(v)
    out.sort(key=lambda v: (max(abs(v.numerator), v.denominator), abs(v), v < 0))
    return out


def _rational_roots(poly) -> list[Fraction]:
    _, facs = sympy.factor_list(poly)
    roots = []
    for f, _ in facs:
        P = sympy.Poly(f)
        if P.degree() == 1:
            c1, c0 = P.all_coeffs()
            r = -sympy.Rational(c0) / sympy.Rational(c1)
            roots.append(Fraction(int(r.p), int(r.q)))
    return sorted(set(roots))


def _kappa_candidates(eqs: Sequence[Equation], nz: int, nk: int, height: int) -> tuple[list[tuple[Fraction, ...]], bool]:
    """Rational kappa values for which the z-system may be consistent.

    Returns the candidates and whether they were obtained without resorting to
    the bounded-height grid.
    """
    if nk == 0:
        return [()], True
    zs = sympy.symbols(f"z0:{nz}") if nz else ()
    ks = sympy.symbols(f"k0:{nk}")
    exprs = []
    for eq in eqs:
        e = sympy.Integer(0)
        for (a, b), c in eq.items():
            t = sympy.Rational(c.numerator, c.denominator)
            if a is not None:
                t *= zs[a]
            if b is not None:
                t *= ks[b]
            e += t
        exprs.append(e)
    gens = list(zs) + list(ks)
    if sympy.groebner(exprs, *gens, order="grevlex").exprs == [1]:
        return [], True
    lex = sympy.groebner(exprs, *gens, order="lex").exprs
    kset = set(ks)
    elim = [g for g in lex if g.free_symbols <= kset]
    complete = True
    grid = height_candidates(height)

    def assign(idx: int, partial: dict) -> list[dict]:
        nonlocal complete
        if idx < 0:
            return [partial]
        var = ks[idx]
        allowed = set(ks[idx:])
        polys = []
        for g in elim:
            if g.free_symbols <= allowed:
                s = sympy.expand(g.subs(partial))
                if s != 0:
                    polys.append(s)
        if any(p.is_number for p in polys):
            return []
        if polys:
            values = set(_rational_roots(polys[0]))
            for p in polys[1:]:
                values &= set(_rational_roots(p))
            values = sorted(values)
        else:
            complete = False
            values = grid
        out = []
        for v in values:
            out.extend(assign(idx - 1, {**partial, var: sympy.Rational(v.numerator, v.denominator)}))
        return out

    cands = []
    for sol in assign(nk - 1, {}):
        cands.append(tuple(Fraction(int(sol[k].p), int(sol[k].q)) for k in ks))
    return cands, complete


def _solve_degree(vf: VectorField, m: int, height: int, notes: list[str]) -> tuple[list[DarbouxPair], bool]:
    d = vf.degree
    X1t, X2t = vf.X1.homogeneous_part(d), vf.X2.homogeneous_part(d)
    x1, x2 = Poly2.var(1), Poly2.var(2)
    T = x1 * X2t - x2 * X1t
    k_monos = sorted((e for dd in range(d - 1) for e in _homogeneous_monomials(dd)), key=_grlex_key, reverse=True)
    branches: list[tuple[dict[Exponent, Fraction], list[Exponent], Poly2]] = []
    lower = _lower_monomials(m)
    if T:
        for top in _top_candidates(T, m):
            image = X1t * top.derive(1) + X2t * top.derive(2)
            if d == 0:
                if image:
                    continue
                k_top = Poly2()
            else:
                q, r = divmod_poly(image, top)
                if r:
                    continue
                k_top = q
            branches.append(({e: c for e, c in top.terms.items()}, lower, k_top))
    else:
        # Radial top part: X_top = h * (x1, x2), so any homogeneous p_m works at top degree.
        h = _div_exact(X1t, x1) if X1t else _div_exact(X2t, x2)
        tops = _homogeneous_monomials(m)
        for lead in range(len(tops)):
            z = tops[lead + 1 :] + lower
            branches.append(({tops[lead]: Fraction(1)}, z, h.scale(m)))
    found: list[DarbouxPair] = []
    complete = True
    for known, z_monos, k_top in branches:
        eqs = _bilinear_equations(vf, known, z_monos, k_top, k_monos)
        cands, ok = _kappa_candidates(eqs, len(z_monos), len(k_monos), height)
        complete &= ok
        for kappa in cands:
            rows, rhs = _linear_rows(eqs, kappa)
            sol = solve_sparse(rows, rhs, len(z_monos))
            if not sol.consistent:
                continue
            p = Poly2({**known, **dict(zip(z_monos, sol.particular))})
            k = k_top + Poly2(dict(zip(k_monos, kappa)))
            if p.is_constant():
                continue
            p_monic = p.monic()
            pair = DarbouxPair(p_monic, k)
            if not pair.verify(vf):
                raise VerificationError(f"Darboux candidate {p_monic} with cofactor {k} failed X p = k p")
            found.append(pair)
    if not complete:
        notes.append(f"degree {m}: some cofactor coefficients were free; searched rationals of height <= {height}")
    return found, complete


def divmod_poly(p: Poly2, d: Poly2) -> tuple[Poly2, Poly2]:
    q, r = _to_ring(p).div(_to_ring(d))
    return _from_ring(q), _from_ring(r)


def _div_exact(p: Poly2, d: Poly2) -> Poly2:
    q, r = divmod_poly(p, d)
    if r:
        raise ArithmeticError(f"{d} does not divide {p}")
    return q


def find_darboux(vf: VectorField, max_deg: int = 4, cofactor_height: int = 4) -> DarbouxSearch:
    """Darboux polynomials of degree <= max_deg, each re-verified exactly.

    For a positive-dimensional family at fixed cofactor (as happens when a
    polynomial first integral exists) one representative is returned, the one
    with the undetermined low-order coefficients set to zero.  Polynomials
    divisible by an already-found Darboux polynomial are dropped.
    """
    if max_deg < 1:
        raise ValueError("max_deg must be >= 1")
    notes: list[str] = []
    complete = True
    raw: list[DarbouxPair] = []
    for m in range(1, max_deg + 1):
        found, ok = _solve_degree(vf, m, cofactor_height, notes)
        raw.extend(found)
        complete &= ok
    raw.sort(key=lambda pr: poly_sort_key(pr.p))
    kept: list[DarbouxPair] = []
    for pr in raw:
        if any(poly_divides(q.p, pr.p) for q in kept):
            continue
        kept.append(pr)
    return DarbouxSearch(tuple(kept), max_deg, cofactor_height, complete, tuple(notes))


# --- denominators and first integrals -----------------------------------------


@dataclass(frozen=True)
class CandidateDenominators:
    """Products of generator powers with total power <= max_power."""

    generators: tuple[Poly2, ...]
    max_power: int

    def __post_init__(self):
        for g in self.generators:
            if g.is_constant():
                raise ValueError("denominator generators must be non-constant")
        for i, g in enumerate(self.generators):
            for h in self.generators[i + 1 :]:
                if g.monic() == h.monic():
                    raise ValueError(f"associate generators {g} and {h}")

    def exponents(self) -> list[tuple[int, ...]]:
        n = len(self.generators)
        out = [e for e in product(range(self.max_power + 1), repeat=n) if sum(e) <= self.max_power]
        return sorted(out, key=lambda e: (sum(e), tuple(-v for v in e)))

    def products(self) -> Iterator[tuple[tuple[int, ...], Poly2]]:
        for e in self.exponents():
            q = Poly2.const(1)
            for g, k in zip(self.generators, e):
                q = q * g**k
            yield e, q


def candidate_denominators(vf: VectorField, pairs: Iterable[DarbouxPair], max_power: int) -> CandidateDenominators:
    """X1 (when non-constant) followed by the Darboux polynomials, associates removed."""
    gens: list[Poly2] = []
    for g in [vf.X1] + [p.p for p in pairs]:
        if g.is_constant():
            continue
        if all(g.monic() != h.monic() for h in gens):
            gens.append(g.monic())
    return CandidateDenominators(tuple(gens), max_power)


@dataclass(frozen=True)
class FirstIntegral:
    omega: RatFunc
    route: str  # "cofactor-relation" | "direct-ansatz"
    exponents: tuple[int, ...] | None = None
    denominator: Poly2 | None = None


def normalize_first_integral(omega: RatFunc) -> RatFunc:
    """Drop a constant term of a polynomial integral; make the numerator's lowest term monic."""
    if omega.is_polynomial():
        p = omega.num - omega.num.constant_term()
        return RatFunc.coerce(p.scale(1 / p.trailing_term()[1]))
    return omega * (1 / omega.num.trailing_term()[1])


def _integer_kernel(cofactors: Sequence[Poly2], bound: int) -> list[tuple[int, ...]]:
    monos = sorted({e for k in cofactors for e in k.terms}, key=_grlex_key)
    idx = {e: i for i, e in enumerate(monos)}
    rows: list[dict[int, Fraction]] = [{} for _ in monos]
    for c, k in enumerate(cofactors):
        for e, v in k.terms.items():
            rows[idx[e]][c] = v
    sol = solve_sparse(rows, [0] * len(rows), len(cofactors))
    out = []
    for vec in sol.nullspace:
        den = lcm(*(v.denominator for v in vec))
        ints = [int(v * den) for v in vec]
        g = gcd(*ints)
        ints = [v // g for v in ints]
        first = next(v for v in ints if v)
        if first < 0:
            ints = [-v for v in ints]
        if max(abs(v) for v in ints) <= bound:
            out.append(tuple(ints))
    return out


def _direct_ansatz(vf: VectorField, denoms: CandidateDenominators, num_deg: int) -> FirstIntegral | None:
    monos = monomials_upto(num_deg)
    images = [apply_X(vf, Poly2.monomial(i, j)) for i, j in monos]
    for _, Q in denoms.products():
        XQ = apply_X(vf, Q)
        cols = [Q * img - Poly2.monomial(i, j) * XQ for (i, j), img in zip(monos, images)]
        rows: dict[Exponent, dict[int, Fraction]] = {}
        for c, poly in enumerate(cols):
            for e, v in poly.terms.items():
                rows.setdefault(e, {})[c] = v
        sol = solve_sparse(list(rows.values()), [0] * len(rows), len(monos))
        for vec in sol.nullspace:
            P = Poly2(dict(zip(monos, vec)))
            omega = RatFunc(P, Q)
            if omega.is_constant():
                continue
            return FirstIntegral(omega, "direct-ansatz", denominator=Q)
    return None


def rational_first_integral(
    vf: VectorField,
    pairs: Sequence[DarbouxPair],
    bounds: SearchBounds = SearchBounds(),
    denominators: CandidateDenominators | None = None,
) -> FirstIntegral | None:
    """A non-constant rational omega with X omega = 0, or None within bounds.

    Integer relations among cofactors are tried first; then P/Q with P of
    degree <= ``bounds.num_deg`` and Q from the candidate denominators.
    """
    if pairs:
        for n in _integer_kernel([p.k for p in pairs], bounds.exponent_bound):
            omega = RatFunc.coerce(1)
            for pr, e in zip(pairs, n):
                omega = omega * RatFunc.coerce(pr.p) ** e
            if omega.is_constant():
                continue
            omega = normalize_first_integral(omega)
            _check_integral(vf, omega)
            return FirstIntegral(omega, "cofactor-relation", exponents=n)
    if denominators is None:
        denominators = candidate_denominators(vf, pairs, bounds.max_denom_power)
    hit = _direct_ansatz(vf, denominators, bounds.num_deg)
    if hit is None:
        return None
    omega = normalize_first_integral(hit.omega)
    _check_integral(vf, omega)
    return FirstIntegral(omega, hit.route, denominator=hit.denominator)


def _check_integral(vf: VectorField, omega: RatFunc) -> None:
    if omega.is_constant():
        raise VerificationError("first integral is constant")
    if RatFunc.coerce(apply_X(vf, omega)):
        raise VerificationError(f"X({omega}) is not zero")
