"""Full analysis pipeline and the versioned JSON report.

Exact values are encoded losslessly: rationals as ``{"num": "3", "den": "2"}``
strings, polynomials as term lists ``[[i, j, rational], ...]`` with a printed
form alongside, rational functions as a numerator/denominator pair.  Series
coefficients use the compact ``[i, j, "num", "den"]`` rows.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .algebra import Poly2, RatFunc, _grlex_key
from .bounds import SearchBounds
from .classifier import (
    AT_LEAST_4,
    EQUATIONS,
    Check,
    Order0Witness,
    Order1Witness,
    classify,
)
from .dsl import format_system
from .identity import rk4_drift
from .series import SeriesError, choose_base_point, solve_series
from .vectorfield import VectorField
from .witness import build_A, integrating_factor, verify_reduction

SCHEMA = "v1"

CASE_LABELS = {
    0: "order 0: rational first integral",
    1: "order 1: integrating factor a^(1/n)/X1",
    2: "order 2: integrating factor exp(integral of b dx1 + a dx2)/X1",
    3: "order 3: integrating factor from the first-order system for u",
    None: "order at least 4 within the searched bounds (no witness for orders 0-3)",
}


# --- encoders / decoders -------------------------------------------------------


def enc_rat(c: Fraction) -> dict:
    c = Fraction(c)
    return {"num": str(c.numerator), "den": str(c.denominator)}


def dec_rat(obj: dict) -> Fraction:
    return Fraction(int(obj["num"]), int(obj["den"]))


def enc_poly(p: Poly2) -> dict:
    terms = sorted(p.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)
    return {"terms": [[i, j, enc_rat(c)] for (i, j), c in terms], "text": str(p)}


def dec_poly(obj: dict) -> Poly2:
    return Poly2({(int(i), int(j)): dec_rat(c) for i, j, c in obj["terms"]})


def enc_ratfunc(f) -> dict:
    f = RatFunc.coerce(f)
    return {"num": enc_poly(f.num), "den": enc_poly(f.den), "text": str(f)}


def dec_ratfunc(obj: dict) -> RatFunc:
    return RatFunc(dec_poly(obj["num"]), dec_poly(obj["den"]))


def enc_series_coeffs(coeffs) -> list:
    return [[i, j, str(v.numerator), str(v.denominator)] for (i, j), v in sorted(coeffs.items(), key=lambda kv: (sum(kv[0]), -kv[0][0]))]


def dec_series_coeffs(rows) -> dict[tuple[int, int], Fraction]:
    return {(int(i), int(j)): Fraction(int(n), int(d)) for i, j, n, d in rows}


def _enc_check(c: Check) -> dict:
    return {"name": c.name, "passed": c.passed, "method": c.method, "detail": c.detail}


# --- pipeline -------------------------------------------------------------------


def _drift_start(omega: RatFunc) -> tuple[Fraction, Fraction] | None:
    for p in [(0, 1), (1, 1), (0, 0), (1, 0), (1, 2), (2, 1)]:
        if omega.den.eval(p) != 0:
            return p
    return None


def analyze(
    vf: VectorField,
    bounds: SearchBounds = SearchBounds(),
    series_order: int = 8,
    trials: int = 20,
    seed: int = 0,
) -> dict:
    """Classify, build and verify witnesses, and return the report document."""
    report = classify(vf, bounds, trials=trials, seed=seed)
    checks = list(report.checks)
    witness_doc = None
    if_doc = None
    series_doc = None
    if report.certified:
        w = report.witness
        order = report.order
        if isinstance(w, Order0Witness):
            W = build_A(0, w.omega)
            witness_doc = {"omega": enc_ratfunc(w.omega), "route": w.route}
        elif isinstance(w, Order1Witness):
            W = build_A(1, w.a, w.n)
            witness_doc = {"a": enc_ratfunc(w.a), "n": w.n, "denominator": enc_poly(w.denominator)}
        else:
            W = build_A(order, w.a)
            witness_doc = {"a": enc_ratfunc(w.a), "denominator": enc_poly(w.denominator)}
        witness_doc["equation"] = EQUATIONS[order]
        ok = verify_reduction(vf, W) if order > 0 else True
        witness_doc["A"] = {"order": W.A.order, "text": str(W.A)}
        if order > 0:
            checks.append(Check("witness polynomial reduces to zero", ok, "exact", f"A = {W.A}"))
        if order == 0:
            start = _drift_start(w.omega)
            if start is not None:
                dr = rk4_drift(vf, w.omega, 1.0, 1e-3, start)
                detail = f"max drift {dr.max_drift:.3e} over t in [0, {dr.t_reached:g}] from {start}"
                checks.append(Check("first integral along RK4 trajectory", dr.completed and dr.max_drift <= 1e-6, "advisory", detail))
        else:
            cf = integrating_factor(vf, report)
            checks.append(Check("closed 1-form", cf.closed, "exact", f"residual {cf.closedness_residual}"))
            if_doc = {"u": cf.u_descriptor, "eta": cf.eta_descriptor, "closed": cf.closed}
            if cf.u is not None:
                if_doc["u_rational"] = enc_ratfunc(cf.u)
                if_doc["v_rational"] = enc_ratfunc(cf.v)
            if cf.one_form is not None:
                if_doc["one_form"] = {"dx1": enc_ratfunc(cf.one_form[0]), "dx2": enc_ratfunc(cf.one_form[1])}
            if order == 3:
                if_doc["f"] = [enc_ratfunc(c) for c in cf.f.coeffs]
                if_doc["g"] = [enc_ratfunc(c) for c in cf.g.coeffs]
                if_doc["compatible"] = cf.compatibility.is_zero()
                checks.append(Check("D2 f = D1 g", cf.compatibility.is_zero(), "exact"))
                try:
                    base = choose_base_point(cf.f, cf.g, vf)
                    sol = solve_series(cf.f, cf.g, base, 0, series_order, vf)
                    series_doc = {
                        "base": [enc_rat(base[0]), enc_rat(base[1])],
                        "u0": enc_rat(sol.u0),
                        "trunc": sol.trunc_deg,
                        "residual_deg": sol.residual_deg,
                        "certified": sol.certified,
                        "radius_estimate": sol.radius_estimate,
                        "coeffs": enc_series_coeffs(sol.coeffs),
                    }
                    checks.append(
                        Check("series residuals", sol.certified, "exact", f"both equations hold through total degree {sol.residual_deg}")
                    )
                except SeriesError as exc:
                    checks.append(Check("series residuals", False, "exact", str(exc)))
    doc: dict[str, Any] = {
        "schema": SCHEMA,
        "system": {"X1": enc_poly(vf.X1), "X2": enc_poly(vf.X2), "text": format_system(vf)},
        "bounds": bounds.as_dict(),
        "verdict": {
            "kind": "certified_order" if report.certified else AT_LEAST_4,
            "order": report.order,
            "label": CASE_LABELS[report.order],
        },
        "witness": witness_doc,
        "exclusions": [
            {
                "order": e.order,
                "equation": e.equation,
                "bounds": e.bounds,
                "denominator_generators": list(e.denominator_generators),
                "denominator_count": e.denominator_count,
            }
            for e in report.exclusions
        ],
        "checks": [_enc_check(c) for c in checks],
        "bchain": [enc_ratfunc(b) for b in report.bchain],
        "darboux": {
            "max_deg": report.darboux.max_deg,
            "complete": report.darboux.complete,
            "pairs": [{"p": enc_poly(pr.p), "k": enc_poly(pr.k)} for pr in report.darboux],
            "notes": list(report.darboux.notes),
        },
    }
    if if_doc is not None:
        doc["integrating_factor"] = if_doc
    if series_doc is not None:
        doc["series"] = series_doc
    return doc


# --- rendering ------------------------------------------------------------------


def render_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def parse_json(text: str) -> dict:
    return json.loads(text)


def _witness_line(doc: dict) -> str | None:
    w = doc["witness"]
    order = doc["verdict"]["order"]
    if w is None:
        return None
    eq = w["equation"]
    if order == 0:
        return f"order-0 witness ({eq}): omega = {w['omega']['text']}"
    if order == 1:
        return f"order-1 witness ({eq}): a = {w['a']['text']}, n = {w['n']}; integrating factor a^(1/n)/X1"
    return f"order-{order} witness ({eq}): a = {w['a']['text']}"


def render_human(doc: dict) -> str:
    lines = [f"system: {doc['system']['text']}", f"verdict: {doc['verdict']['label']}"]
    wl = _witness_line(doc)
    if wl:
        lines.append(wl)
        lines.append(f"witness polynomial: A = {doc['witness']['A']['text']}")
    if "integrating_factor" in doc:
        inf = doc["integrating_factor"]
        lines.append(f"integrating factor: {inf['eta']}")
        if "f" in inf:
            lines.append("  d1 u = " + _upoly_text(inf["f"]))
            lines.append("  d2 u = " + _upoly_text(inf["g"]))
    if "series" in doc:
        s = doc["series"]
        base = ", ".join(str(dec_rat(c)) for c in s["base"])
        lines.append(f"series about ({base}), u0 = {dec_rat(s['u0'])}, truncation {s['trunc']}:")
        coeffs = dec_series_coeffs(s["coeffs"])
        shown = [f"u[{i},{j}] = {v}" for (i, j), v in coeffs.items() if i + j <= 3]
        lines.append("  " + ("; ".join(shown) if shown else "u = 0"))
        r = s["radius_estimate"]
        lines.append(f"  residuals vanish through degree {s['residual_deg']}: {'yes' if s['certified'] else 'NO'}")
        lines.append(f"  radius estimate (advisory): {'n/a' if r is None else f'{r:.4g}'}")
    lines.append("b-chain: " + "; ".join(f"b{i} = {b['text']}" for i, b in enumerate(doc["bchain"])))
    pairs = doc["darboux"]["pairs"]
    if pairs:
        lines.append("Darboux polynomials: " + "; ".join(f"{pr['p']['text']} (cofactor {pr['k']['text']})" for pr in pairs))
    if doc["exclusions"]:
        lines.append("excluded within bounds:")
        for e in doc["exclusions"]:
            b = ", ".join(f"{k}={v}" for k, v in e["bounds"].items())
            gens = ", ".join(e["denominator_generators"])
            lines.append(f"  order {e['order']}: {e['equation']}  [{b}]")
            if gens:
                lines.append(f"    denominators: {e['denominator_count']} products of powers of {{{gens}}}")
            else:
                lines.append("    denominators: 1 only (no generators)")
    lines.append("checks:")
    for c in doc["checks"]:
        mark = "ok" if c["passed"] else "FAIL"
        extra = f" - {c['detail']}" if c["detail"] else ""
        lines.append(f"  [{mark}] ({c['method']}) {c['name']}{extra}")
    return "\n".join(lines) + "\n"


def _upoly_text(coeffs: list) -> str:
    parts = []
    for k, c in enumerate(coeffs):
        if c["text"] == "0":
            continue
        mono = "" if k == 0 else ("*u" if k == 1 else f"*u^{k}")
        parts.append(f"({c['text']}){mono}")
    return " + ".join(parts) if parts else "0"


def render_report(doc: dict, mode: str = "json") -> str:
    if mode == "json":
        return render_json(doc)
    if mode == "human":
        return render_human(doc)
    raise ValueError(f"unknown render mode {mode!r}")
