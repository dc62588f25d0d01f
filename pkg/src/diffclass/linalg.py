"""Exact solution of rational linear systems by fraction-free elimination.

Rows are scaled to integers, eliminated with integer row combinations (the
row content is divided out after each step so entries stay small), and only
the final back substitution uses ``Fraction``.  Pivots are chosen
deterministically: columns are scanned in order and the first remaining row
with a nonzero entry in that column becomes the pivot row.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .algebra import Scalar, as_fraction

SparseRow = Mapping[int, Scalar]


@dataclass(frozen=True)
class LinearSolution:
    consistent: bool
    particular: tuple[Fraction, ...] | None
    nullspace: tuple[tuple[Fraction, ...], ...]
    pivots: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)


def _integer_row(row: SparseRow, rhs: Scalar) -> tuple[dict[int, int], int]:
    vals = {c: as_fraction(v) for c, v in row.items() if v}
    r = as_fraction(rhs)
    den = lcm(r.denominator, *(v.denominator for v in vals.values()))
    out = {c: int(v * den) for c, v in vals.items()}
    return _primitive(out, int(r * den))


def _primitive(row: dict[int, int], rhs: int) -> tuple[dict[int, int], int]:
    g = gcd(rhs, *row.values())
    if g > 1:
        row = {c: v // g for c, v in row.items()}
        rhs //= g
    return row, rhs


def solve_sparse(rows: Sequence[SparseRow], rhs: Sequence[Scalar], ncols: int) -> LinearSolution:
    """Solve ``A x = b`` where ``A`` is given as sparse rows ``{column: value}``."""
    if len(rows) != len(rhs):
        raise ValueError("row count and rhs length differ")
    work = [_integer_row(r, b) for r, b in zip(rows, rhs)]
    work = [(r, b) for r, b in work if r or b]
    echelon: list[tuple[int, dict[int, int], int]] = []
    for col in range(ncols):
        idx = next((k for k, (r, _) in enumerate(work) if r.get(col)), None)
        if idx is None:
            continue
        prow, pb = work.pop(idx)
        pv = prow[col]
        nxt = []
        for r, b in work:
            a = r.get(col)
            if a:
                g = gcd(pv, a)
                mp, ma = pv // g, a // g
                new = {c: v * mp for c, v in r.items()}
                for c, v in prow.items():
                    w = new.get(c, 0) - ma * v
                    if w:
                        new[c] = w
                    else:
                        new.pop(c, None)
                r, b = _primitive(new, b * mp - ma * pb)
            if r or b:
                nxt.append((r, b))
        work = nxt
        echelon.append((col, prow, pb))
    pivots = tuple(c for c, _, _ in echelon)
    if any(b for r, b in work if not r):
        return LinearSolution(False, None, _nullspace(echelon, ncols), pivots)
    particular = _back_substitute(echelon, ncols, {}, use_rhs=True)
    return LinearSolution(True, particular, _nullspace(echelon, ncols), pivots)


def _back_substitute(echelon, ncols: int, fixed: dict[int, Fraction], use_rhs: bool) -> tuple[Fraction, ...]:
    x = [Fraction(0)] * ncols
    for c, v in fixed.items():
        x[c] = v
    for col, row, b in reversed(echelon):
        acc = Fraction(b) if use_rhs else Fraction(0)
        for c, v in row.items():
            if c != col and x[c]:
                acc -= v * x[c]
        x[col] = acc / row[col]
    return tuple(x)


def _nullspace(echelon, ncols: int) -> tuple[tuple[Fraction, ...], ...]:
    pivset = {c for c, _, _ in echelon}
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        basis.append(_back_substitute(echelon, ncols, {f: Fraction(1)}, use_rhs=False))
    return tuple(basis)


def solve_linear(matrix: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar]) -> LinearSolution:
    """Dense front end to :func:`solve_sparse`.

    Returns one particular solution (free variables set to zero) and a basis of
    the homogeneous nullspace, one vector per free column.  Inconsistency is
    reported through ``consistent=False``, never raised.
    """
    ncols = len(matrix[0]) if matrix else 0
    if any(len(r) != ncols for r in matrix):
        raise ValueError("matrix rows must have equal length")
    rows = [{c: v for c, v in enumerate(r) if v} for r in matrix]
    return solve_sparse(rows, rhs, ncols)


def mat_vec(matrix: Sequence[Sequence[Scalar]], x: Sequence[Scalar]) -> list[Fraction]:
    return [sum((as_fraction(a) * as_fraction(b) for a, b in zip(row, x)), Fraction(0)) for row in matrix]
