"""Witness differential polynomials and integrating-factor data.

For each order the witness polynomial A is

    0   y - a
    1   y1^|n| - a^(|n|/n)
    2   y2 - a y1
    3   2 y1 y3 - 3 y2^2 - 2 a y1^2

and ``X A - C(m*) b0 A`` reduces to zero exactly when a solves the order's
equation.  (For order 3 the y1^2 coefficient is 2a, with a the solution of
X a = 2 b0 a + b2; that is what makes the reduction vanish.)

Non-rational objects such as a^(1/n) or exp of a line integral are never
built: every closedness statement is checked as a rational identity after
logarithmic differentiation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Poly2, RatFunc
from .classifier import ClassificationReport, Order1Witness, PDEWitness
from .diffpoly import DiffPoly, residual_coeffs
from .series import UPoly, build_fg, check_compatibility
from .vectorfield import VectorField, compute_b


class WitnessError(ValueError):
    pass


@dataclass(frozen=True)
class WitnessA:
    order: int
    a: RatFunc
    n: int | None
    A: DiffPoly


def build_A(order: int, a, n: int | None = None) -> WitnessA:
    a = RatFunc.coerce(a)
    one = RatFunc.coerce(1)
    if order == 0:
        A = DiffPoly(0, {(1,): one, (0,): -a})
    elif order == 1:
        if not n:
            raise WitnessError("order 1 needs a nonzero integer n")
        if not a:
            raise WitnessError("order 1 needs a nonzero a")
        # a^(|n|/n) is a or 1/a
        c = a if n > 0 else a.inverse()
        A = DiffPoly(1, {(0, abs(n)): one, (0, 0): -c})
    elif order == 2:
        A = DiffPoly(2, {(0, 0, 1): one, (0, 1, 0): -a})
    elif order == 3:
        A = DiffPoly(3, {(0, 1, 0, 1): one * 2, (0, 0, 2, 0): one * -3, (0, 2, 0, 0): a * -2})
    else:
        raise WitnessError(f"no witness template for order {order}")
    if order != 1:
        n = None
    return WitnessA(order, a, n, A)


def verify_reduction(vf: VectorField, w: WitnessA) -> bool:
    """True iff every residual coefficient of the normalized A vanishes."""
    return all(not v for v in residual_coeffs(vf, w.A.monic()).values())


@dataclass(frozen=True)
class ClosedFormData:
    """Data of the closed 1-form v dx1 + u dx2 behind an integrating factor.

    ``u`` and ``v`` are filled in only when they are rational; ``v_over_u``
    is always rational for orders 1 and 2.  ``closedness_residual`` must be 0;
    for order 3 it is the polynomial in u left by D2 v - f.
    """

    order: int
    u_descriptor: str
    eta_descriptor: str
    closedness_residual: RatFunc | UPoly
    u: RatFunc | None = None
    v: RatFunc | None = None
    v_over_u: RatFunc | None = None
    potential: RatFunc | None = None
    one_form: tuple[RatFunc, RatFunc] | None = None
    f: UPoly | None = None
    g: UPoly | None = None
    compatibility: UPoly | None = None
    extra_checks: dict[str, bool] = field(default_factory=dict)

    @property
    def closed(self) -> bool:
        return self.closedness_residual.is_zero()


def order1_closedness(vf: VectorField, a: RatFunc, n: int) -> RatFunc:
    """(1/n) d1a/a + d2(X2/X1) + (X2/X1)(1/n) d2a/a, the log-derivative form of d1 u = d2 v."""
    r = vf.ratio
    la1 = a.derive(1) / a
    la2 = a.derive(2) / a
    return la1 * RatFunc.coerce(1) / n + r.derive(2) + r * la2 / n


def order2_form(vf: VectorField, a: RatFunc) -> tuple[RatFunc, RatFunc]:
    """b = -(X2/X1) a + b0/X1 and the closedness residual d1 a - d2 b."""
    b0 = compute_b(vf, 0)[0]
    b = -(vf.ratio * a) + b0 / RatFunc.coerce(vf.X1)
    return b, a.derive(1) - b.derive(2)


def _polynomial_potential(b: RatFunc, a: RatFunc) -> RatFunc | None:
    """phi with d1 phi = b, d2 phi = a when both are polynomials."""
    if not (b.is_polynomial() and a.is_polynomial()):
        return None
    bp, ap = b.as_poly(), a.as_poly()
    phi = Poly2({(i + 1, j): c / (i + 1) for (i, j), c in bp.terms.items()})
    rest = ap - phi.derive(2)
    if rest.derive(1):
        return None
    phi = phi + Poly2({(i, j + 1): c / (j + 1) for (i, j), c in rest.terms.items()})
    return RatFunc.coerce(phi)


def _over_X1(text: str, X1: Poly2) -> str:
    return text if X1 == Poly2.const(1) else f"{text}/({X1})"


def integrating_factor(vf: VectorField, report: ClassificationReport) -> ClosedFormData:
    if report.order not in (1, 2, 3):
        raise WitnessError("integrating-factor data needs a certified order 1, 2 or 3 report")
    w = report.witness
    x1 = RatFunc.coerce(vf.X1)
    if report.order == 1:
        assert isinstance(w, Order1Witness)
        a, n = w.a, w.n
        res = order1_closedness(vf, a, n)
        u = v = None
        if n in (1, -1):
            u = a if n == 1 else a.inverse()
            v = -(vf.ratio * u)
        eta = (u / x1) if u is not None else None
        return ClosedFormData(
            1,
            u_descriptor=f"({a})^({Fraction(1, n)})",
            eta_descriptor=(str(eta) if eta is not None else _over_X1(f"({a})^({Fraction(1, n)})", vf.X1)),
            closedness_residual=res,
            u=u,
            v=v,
            v_over_u=-vf.ratio,
        )
    if report.order == 2:
        assert isinstance(w, PDEWitness)
        a = w.a
        b, res = order2_form(vf, a)
        phi = _polynomial_potential(b, a)
        phi_text = str(phi) if phi is not None else f"integral of ({b}) dx1 + ({a}) dx2"
        return ClosedFormData(
            2,
            u_descriptor=f"exp({phi_text})",
            eta_descriptor=_over_X1(f"exp({phi_text})", vf.X1),
            closedness_residual=res,
            v_over_u=-vf.ratio,
            potential=phi,
            one_form=(b, a),
        )
    assert isinstance(w, PDEWitness)
    a = w.a
    f, g = build_fg(vf, a)
    comp = check_compatibility(f, g)
    r = vf.ratio
    # v = -d2(X2/X1) - (X2/X1) u must satisfy D2 v = f for the form v dx1 + u dx2 to be closed
    v = UPoly.of(-r.derive(2), -r)
    d2v = v.derive_x(2) + g * v.derive_u()
    resid = d2v - f
    return ClosedFormData(
        3,
        u_descriptor="power series solution of d1 u = f(u), d2 u = g(u)",
        eta_descriptor=_over_X1("exp(integral of v dx1 + u dx2)", vf.X1) + ", v = -d2(X2/X1) - (X2/X1) u",
        closedness_residual=resid,
        f=f,
        g=g,
        compatibility=comp,
        extra_checks={"D2 v = f": resid.is_zero(), "D2 f = D1 g": comp.is_zero()},
    )
