from __future__ import annotations

from fractions import Fraction
from itertools import permutations

from hypothesis import given, settings
from hypothesis import strategies as st

from diffclass.linalg import mat_vec, solve_linear, solve_sparse


def det(m):
    n = len(m)
    total = Fraction(0)
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        prod = Fraction(1)
        for i in range(n):
            prod *= m[i][perm[i]]
        total += sign * prod
    return total


def cramer(m, b):
    d = det(m)
    out = []
    for k in range(len(m)):
        mk = [row[:k] + [b[i]] + row[k + 1 :] for i, row in enumerate(m)]
        out.append(det(mk) / d)
    return out


def test_identity():
    sol = solve_linear([[1, 0], [0, 1]], [1, 2])
    assert sol.consistent and list(sol.particular) == [1, 2] and sol.nullspace == ()


def test_rank_one_nullspace():
    sol = solve_linear([[1, 1], [2, 2]], [0, 0])
    assert sol.consistent and sol.rank == 1
    assert sol.nullspace == ((Fraction(-1), Fraction(1)),)


def test_hilbert_matches_cramer():
    h = [[Fraction(1, i + j + 1) for j in range(3)] for i in range(3)]
    sol = solve_linear(h, [1, 0, 0])
    assert list(sol.particular) == cramer(h, [Fraction(1), Fraction(0), Fraction(0)])
    assert list(sol.particular) == [9, -36, 30]


def test_inconsistent_is_a_value():
    sol = solve_linear([[1, 1], [1, 1]], [0, 1])
    assert not sol.consistent and sol.particular is None


def test_free_variables_are_zero_in_particular_solution():
    sol = solve_linear([[1, 1, 1]], [3])
    assert list(sol.particular) == [3, 0, 0]
    assert len(sol.nullspace) == 2


def test_sparse_front_end():
    sol = solve_sparse([{0: 2, 2: 1}, {1: Fraction(1, 2)}], [4, 1], 3)
    assert sol.consistent and sol.pivots == (0, 1)
    assert list(sol.particular) == [2, 2, 0]


entries = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5))
matrices = st.integers(1, 4).flatmap(
    lambda rows: st.integers(1, 4).flatmap(
        lambda cols: st.tuples(
            st.lists(st.lists(entries, min_size=cols, max_size=cols), min_size=rows, max_size=rows),
            st.lists(entries, min_size=rows, max_size=rows),
        )
    )
)


@given(matrices)
@settings(max_examples=300, deadline=None)
def test_solution_and_nullspace_are_exact(mb):
    m, b = mb
    sol = solve_linear(m, b)
    for v in sol.nullspace:
        assert all(x == 0 for x in mat_vec(m, v))
    assert sol.rank + len(sol.nullspace) == len(m[0])
    if sol.consistent:
        assert mat_vec(m, sol.particular) == [Fraction(x) for x in b]


@given(matrices)
@settings(max_examples=100, deadline=None)
def test_homogeneous_system_always_consistent(mb):
    m, _ = mb
    sol = solve_linear(m, [0] * len(m))
    assert sol.consistent and all(x == 0 for x in sol.particular)
