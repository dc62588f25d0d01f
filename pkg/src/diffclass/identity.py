"""Cross-checks outside the exact certification path.

``random_point_check`` evaluates a claimed identity at random rational points
(exact arithmetic, probabilistic coverage).  ``rk4_drift`` integrates the
system in floating point and watches a first integral; its result is advisory
and never feeds back into a certified verdict.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .algebra import PoleError, RatFunc
from .vectorfield import VectorField

Point = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class IdentityCheck:
    identity: RatFunc
    trials: int
    seed: int
    points: tuple[Point, ...]
    failures: tuple[Point, ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def _random_rational(rng: random.Random, height: int) -> Fraction:
    return Fraction(rng.randint(-height, height), rng.randint(1, height))


def random_point_check(f, trials: int = 20, seed: int = 0, height: int = 100) -> IdentityCheck:
    """Evaluate ``f`` at ``trials`` random points of height <= ``height``, skipping poles."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    f = RatFunc.coerce(f)
    rng = random.Random(seed)
    points, failures = [], []
    attempts = 0
    while len(points) < trials:
        attempts += 1
        if attempts > 100 * trials:
            raise RuntimeError("could not find enough points off the pole set")
        p = (_random_rational(rng, height), _random_rational(rng, height))
        try:
            v = f.eval(p)
        except PoleError:
            continue
        points.append(p)
        if v != 0:
            failures.append(p)
    return IdentityCheck(f, trials, seed, tuple(points), tuple(failures))


@dataclass(frozen=True)
class DriftResult:
    """Maximum of |omega(x(t)) - omega(x(0))| along an RK4 trajectory (advisory)."""

    max_drift: float
    t_reached: float
    steps: int
    completed: bool
    reason: str = ""
    label: str = "advisory"


def _evaluator(f: RatFunc):
    num, den = f.num, f.den
    return lambda x, y: num.eval_float(x, y) / den.eval_float(x, y)


def rk4_drift(vf: VectorField, omega, t_end: float = 1.0, step: float = 1e-3, start: tuple[float, float] = (0.0, 0.0)) -> DriftResult:
    """Integrate x' = X1, y' = X2 with classical RK4 and track the drift of omega."""
    omega = RatFunc.coerce(omega)
    fx, fy = vf.X1.eval_float, vf.X2.eval_float
    w = _evaluator(omega)
    nsteps = max(1, round(t_end / step))
    h = t_end / nsteps
    x, y = float(start[0]), float(start[1])
    try:
        w0 = w(x, y)
    except ZeroDivisionError:
        return DriftResult(math.nan, 0.0, 0, False, "start point is a pole of omega")
    drift = 0.0
    for n in range(nsteps):
        try:
            k1 = (fx(x, y), fy(x, y))
            k2 = (fx(x + h / 2 * k1[0], y + h / 2 * k1[1]), fy(x + h / 2 * k1[0], y + h / 2 * k1[1]))
            k3 = (fx(x + h / 2 * k2[0], y + h / 2 * k2[1]), fy(x + h / 2 * k2[0], y + h / 2 * k2[1]))
            k4 = (fx(x + h * k3[0], y + h * k3[1]), fy(x + h * k3[0], y + h * k3[1]))
            x += h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
            y += h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
            val = w(x, y)
        except (ZeroDivisionError, OverflowError):
            return DriftResult(drift, n * h, n, False, "pole or overflow along the trajectory")
        if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(val)):
            return DriftResult(drift, n * h, n, False, "pole or overflow along the trajectory")
        drift = max(drift, abs(val - w0))
    return DriftResult(drift, nsteps * h, nsteps, True)
