"""The order cascade.

Orders are tried from 0 upward and the first success wins:

    0  a non-constant rational first integral
    1  X a = n b0 a            with a != 0, n a nonzero integer
    2  X a = b0 a + b1
    3  X a = 2 b0 a + b2

Each search is an exact linear solve for a = P/q with P of bounded degree and
q drawn from a finite list of candidate denominators, so absence is only ever
reported relative to the bounds that were searched.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from .algebra import Exponent, Poly2, RatFunc, monomials_upto, poly_exact_div, poly_gcd
from .bounds import SearchBounds
from .darboux import (
    CandidateDenominators,
    DarbouxSearch,
    VerificationError,
    candidate_denominators,
    find_darboux,
    rational_first_integral,
)
from .identity import random_point_check
from .linalg import solve_sparse
from .vectorfield import BChain, VectorField, apply_X, b_closed_form, compute_b

AT_LEAST_4 = "at_least_4_within_bounds"

EQUATIONS = {
    0: "X omega = 0",
    1: "X a = n b0 a",
    2: "X a = b0 a + b1",
    3: "X a = 2 b0 a + b2",
}


@dataclass(frozen=True)
class Exclusion:
    """A search that came back empty, with the bounds it covered."""

    order: int
    equation: str
    bounds: dict
    denominator_generators: tuple[str, ...]
    denominator_count: int


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    method: str  # "exact" | "random-point" | "advisory"
    detail: str = ""


@dataclass(frozen=True)
class Order0Witness:
    omega: RatFunc
    route: str


@dataclass(frozen=True)
class Order1Witness:
    a: RatFunc
    n: int
    denominator: Poly2


@dataclass(frozen=True)
class PDEWitness:
    a: RatFunc
    lam: int
    rhs_index: int
    denominator: Poly2


Witness = Order0Witness | Order1Witness | PDEWitness


@dataclass(frozen=True)
class ClassificationReport:
    system: VectorField
    bounds: SearchBounds
    verdict: str
    order: int | None
    witness: Witness | None
    exclusions: tuple[Exclusion, ...]
    checks: tuple[Check, ...]
    bchain: BChain
    darboux: DarbouxSearch
    denominators: CandidateDenominators

    @property
    def certified(self) -> bool:
        return self.order is not None


def _denominator_list(denoms: CandidateDenominators) -> list[Poly2]:
    return [q for _, q in denoms.products()]


def _nullspace_numerators(cols: Sequence[Poly2], monos: Sequence[Exponent], rhs: Poly2 | None):
    rows: dict[Exponent, dict[int, Fraction]] = {}
    for c, poly in enumerate(cols):
        for e, v in poly.terms.items():
            rows.setdefault(e, {})[c] = v
    if rhs is not None:
        for e in rhs.terms:
            rows.setdefault(e, {})
    keys = list(rows)
    b = [rhs.terms.get(e, Fraction(0)) if rhs is not None else Fraction(0) for e in keys]
    return solve_sparse([rows[e] for e in keys], b, len(monos))


def n_order(n_range: int) -> list[int]:
    out = []
    for k in range(1, n_range + 1):
        out += [k, -k]
    return out


def solve_order1(vf: VectorField, bounds: SearchBounds = SearchBounds(), denominators: CandidateDenominators | None = None) -> Order1Witness | None:
    """Search for a != 0 and n != 0 with X a = n b0 a.

    With a = P/q and b0 = N0/D0 the equation becomes
    D0 (q X P - P X q) - n N0 q P = 0, linear in the coefficients of P.
    """
    if denominators is None:
        denominators = candidate_denominators(vf, find_darboux(vf, bounds.darboux_deg, bounds.cofactor_height), bounds.max_denom_power)
    b0 = compute_b(vf, 0)[0]
    N0, D0 = b0.num, b0.den
    monos = monomials_upto(bounds.num_deg)
    images = [apply_X(vf, Poly2.monomial(i, j)) for i, j in monos]
    best = None
    for q in _denominator_list(denominators):
        Xq = apply_X(vf, q)
        for n in n_order(bounds.n_range):
            cols = [
                D0 * (q * img - Poly2.monomial(i, j) * Xq) - (N0 * q * Poly2.monomial(i, j)).scale(n)
                for (i, j), img in zip(monos, images)
            ]
            sol = _nullspace_numerators(cols, monos, None)
            if not sol.nullspace:
                continue
            P = Poly2(dict(zip(monos, sol.nullspace[0])))
            key = (P.degree(), abs(n), n < 0)
            if best is None or key < best[0]:
                best = (key, P, q, n)
        if best is not None:
            break  # least denominator power wins
    if best is None:
        return None
    _, P, q, n = best
    a = RatFunc(P, q)
    a = a * (1 / a.num.leading_coeff())
    return Order1Witness(a, n, q)


def solve_linear_pde(
    vf: VectorField,
    lam: int,
    rhs_index: int,
    bounds: SearchBounds = SearchBounds(),
    denominators: CandidateDenominators | None = None,
) -> PDEWitness | None:
    """Search for a with X a = lam b0 a + b_rhs.

    Clearing denominators with L = lcm(D0, Dr) gives the affine system
    L (q X P - P X q) - lam (L/D0) N0 q P = (L/Dr) Nr q^2.
    """
    if (lam, rhs_index) not in ((1, 1), (2, 2)):
        raise ValueError("supported equations: lam=1 with b1, lam=2 with b2")
    if denominators is None:
        denominators = candidate_denominators(vf, find_darboux(vf, bounds.darboux_deg, bounds.cofactor_height), bounds.max_denom_power)
    b = compute_b(vf, rhs_index)
    b0, br = b[0], b[rhs_index]
    N0, D0 = b0.num, b0.den
    Nr, Dr = br.num, br.den
    L = poly_exact_div(D0 * Dr, poly_gcd(D0, Dr))
    L0, Lr = poly_exact_div(L, D0), poly_exact_div(L, Dr)
    monos = monomials_upto(bounds.num_deg)
    images = [apply_X(vf, Poly2.monomial(i, j)) for i, j in monos]
    for q in _denominator_list(denominators):
        Xq = apply_X(vf, q)
        cols = [
            L * (q * img - Poly2.monomial(i, j) * Xq) - (L0 * N0 * q * Poly2.monomial(i, j)).scale(lam)
            for (i, j), img in zip(monos, images)
        ]
        rhs = Lr * Nr * q * q
        sol = _nullspace_numerators(cols, monos, rhs)
        if sol.consistent:
            P = Poly2(dict(zip(monos, sol.particular)))
            return PDEWitness(RatFunc(P, q), lam, rhs_index, q)
    return None


def order1_residual(vf: VectorField, a: RatFunc, n: int) -> RatFunc:
    return RatFunc.coerce(apply_X(vf, a)) - b_closed_form(vf, 0) * a * n


def pde_residual(vf: VectorField, a: RatFunc, lam: int, rhs_index: int) -> RatFunc:
    return RatFunc.coerce(apply_X(vf, a)) - b_closed_form(vf, 0) * a * lam - b_closed_form(vf, rhs_index)


def _bounds_record(bounds: SearchBounds, order: int) -> dict:
    rec = {"num_deg": bounds.num_deg, "max_denom_power": bounds.max_denom_power, "darboux_deg": bounds.darboux_deg}
    if order == 0:
        rec["exponent_bound"] = bounds.exponent_bound
    if order == 1:
        rec["n_range"] = bounds.n_range
    return rec


def classify(vf: VectorField, bounds: SearchBounds = SearchBounds(), trials: int = 20, seed: int = 0) -> ClassificationReport:
    """Run the cascade; every certified witness is re-verified exactly."""
    bchain = compute_b(vf, 2)
    darboux = find_darboux(vf, bounds.darboux_deg, bounds.cofactor_height)
    denoms = candidate_denominators(vf, darboux.pairs, bounds.max_denom_power)
    denom_info = (tuple(str(g) for g in denoms.generators), len(_denominator_list(denoms)))
    checks: list[Check] = []
    for pr in darboux.pairs:
        checks.append(Check(f"darboux {pr.p}", pr.verify(vf), "exact", f"X p = ({pr.k}) p"))
    exclusions: list[Exclusion] = []

    def finish(order, witness, residual: RatFunc, label: str):
        ok = residual.is_zero()
        checks.append(Check(label, ok, "exact", "recomputed with apply_X and the closed-form b-chain"))
        rp = random_point_check(residual, trials=trials, seed=seed)
        checks.append(Check(label + " (random points)", rp.passed, "random-point", f"{trials} trials, seed {seed}"))
        if not ok:
            raise VerificationError(f"{label} failed exact re-verification")
        return ClassificationReport(vf, bounds, f"certified_order_{order}", order, witness, tuple(exclusions), tuple(checks), bchain, darboux, denoms)

    fi = rational_first_integral(vf, darboux.pairs, bounds, denoms)
    if fi is not None:
        return finish(0, Order0Witness(fi.omega, fi.route), RatFunc.coerce(apply_X(vf, fi.omega)), "order 0: X omega = 0")
    exclusions.append(Exclusion(0, EQUATIONS[0], _bounds_record(bounds, 0), *denom_info))

    w1 = solve_order1(vf, bounds, denoms)
    if w1 is not None:
        return finish(1, w1, order1_residual(vf, w1.a, w1.n), "order 1: X a = n b0 a")
    exclusions.append(Exclusion(1, EQUATIONS[1], _bounds_record(bounds, 1), *denom_info))

    for order, lam in ((2, 1), (3, 2)):
        w = solve_linear_pde(vf, lam, lam, bounds, denoms)
        if w is not None:
            return finish(order, w, pde_residual(vf, w.a, lam, lam), f"order {order}: {EQUATIONS[order]}")
        exclusions.append(Exclusion(order, EQUATIONS[order], _bounds_record(bounds, order), *denom_info))

    return ClassificationReport(vf, bounds, AT_LEAST_4, None, None, tuple(exclusions), tuple(checks), bchain, darboux, denoms)


@dataclass(frozen=True)
class ClearedPDE:
    """X a * coef_X + a * coef_a + const = 0 with polynomial coefficients."""

    coef_X: Poly2
    coef_a: Poly2
    const: Poly2


def cleared_linear_pde(vf: VectorField, lam: int, rhs_index: int) -> ClearedPDE:
    """X a - lam b0 a - b_rhs = 0 multiplied through by the lcm of the b denominators.

    The result is normalized so the leading coefficient of ``coef_X`` is 1.
    """
    b = compute_b(vf, rhs_index)
    b0, br = b[0], b[rhs_index]
    L = poly_exact_div(b0.den * br.den, poly_gcd(b0.den, br.den))
    coef_a = -(poly_exact_div(L, b0.den) * b0.num).scale(lam)
    const = -(poly_exact_div(L, br.den) * br.num)
    s = 1 / L.leading_coeff()
    return ClearedPDE(L.scale(s), coef_a.scale(s), const.scale(s))
