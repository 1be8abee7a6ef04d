"""Linear algebra layer: rational affine solving, Hermite normal form with
unimodular transform, integer affine solving, lattice membership."""

import random
from fractions import Fraction

import sympy

from oracles import P
from shiftsum.linalg import (
    AffineSetQ,
    AffineSetZ,
    hnf,
    kernel_z,
    lattice_contains,
    lattices_equal,
    solve_q,
    solve_q_matrix,
    solve_z,
    solve_z_matrix,
    xgcd,
)
from shiftsum.polyarith import Poly, VarTable

AB = VarTable(("a", "b"))
ABC = VarTable(("a", "b", "c"))


# ----------------------------------------------------------------------
# rational solving


def test_solve_q_golden_pair():
    eqs = [P("2*a + 2*b - 2", AB), P("2*a + 6*b - 10", AB)]
    sol = solve_q(eqs, AB)
    assert sol.status == "nonempty"
    assert sol.particular == (Fraction(-1), Fraction(2))
    assert sol.basis == ()


def test_solve_q_trivial_equation_gives_full_space():
    sol = solve_q([Poly.zero(AB)], AB)
    assert sol.status == "nonempty"
    assert sol.particular == (Fraction(0), Fraction(0))
    assert set(sol.basis) == {(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))}


def test_solve_q_inconsistent():
    eqs = [P("a + b", AB), P("a + b - 1", AB)]
    assert solve_q(eqs, AB).is_empty()


def _random_matrix(rng, m, n, bound=6):
    return [[rng.randrange(-bound, bound + 1) for _ in range(n)] for _ in range(m)]


def _matvec(A, x):
    return [sum(Fraction(a) * xx for a, xx in zip(row, x)) for row in A]


def test_solve_q_random_residual_and_rank():
    rng = random.Random(41)
    for _ in range(40):
        m = rng.randrange(1, 6)
        n = rng.randrange(1, 6)
        A = _random_matrix(rng, m, n)
        x0 = [Fraction(rng.randrange(-5, 6), rng.randrange(1, 3)) for _ in range(n)]
        b = _matvec(A, x0)
        sol = solve_q_matrix(A, b, n)
        assert sol.status == "nonempty"
        assert _matvec(A, sol.particular) == b
        for vec in sol.basis:
            assert all(v == 0 for v in _matvec(A, vec))
        rank = sympy.Matrix(A).rank()
        assert len(sol.basis) == n - rank


def test_solve_q_emptiness_matches_sympy():
    rng = random.Random(42)
    seen_empty = 0
    for _ in range(50):
        m = rng.randrange(1, 5)
        n = rng.randrange(1, 4)
        A = _random_matrix(rng, m, n, bound=3)
        b = [rng.randrange(-3, 4) for _ in range(m)]
        sol = solve_q_matrix(A, b, n)
        MA = sympy.Matrix(A)
        Mab = MA.row_join(sympy.Matrix(m, 1, b))
        consistent = MA.rank() == Mab.rank()
        assert (sol.status == "nonempty") == consistent
        if not consistent:
            seen_empty += 1
    assert seen_empty > 0


# ----------------------------------------------------------------------
# Hermite normal form


def test_hnf_identity():
    H, U = hnf([[1, 0], [0, 1]])
    assert H == [[1, 0], [0, 1]]
    assert U == [[1, 0], [0, 1]]


def test_hnf_upper_triangular_determinant():
    H, U = hnf([[2, 4], [0, 3]])
    det = H[0][0] * H[1][1] - H[0][1] * H[1][0]
    assert abs(det) == 6
    assert sympy.Matrix(U).det() in (1, -1)
    M = sympy.Matrix([[2, 4], [0, 3]])
    assert M * sympy.Matrix(U) == sympy.Matrix(H)


def test_hnf_kernel_golden():
    ker = kernel_z([[1, 2, 1]])
    assert len(ker) == 2
    for v in ker:
        assert v[0] + 2 * v[1] + v[2] == 0
    assert lattice_contains(ker, (1, -1, 1))
    assert lattice_contains(ker, (2, -1, 0))


def _check_hnf_shape(H):
    m = len(H)
    n = len(H[0]) if m else 0
    pivots = []
    for j in range(n):
        rows = [i for i in range(m) if H[i][j] != 0]
        if not rows:
            # zero columns must be rightmost
            assert all(
                all(H[i][k] == 0 for i in range(m)) for k in range(j, n)
            )
            break
        i = rows[0]
        pivots.append((i, j))
    for (i1, _), (i2, _) in zip(pivots, pivots[1:]):
        assert i1 < i2
    for i, j in pivots:
        piv = H[i][j]
        assert piv > 0
        assert all(H[i][k] == 0 for k in range(j + 1, n))
        assert all(0 <= H[i][k] < piv for k in range(j))


def test_hnf_random_invariants():
    rng = random.Random(43)
    for _ in range(60):
        m = rng.randrange(1, 5)
        n = rng.randrange(1, 5)
        M = _random_matrix(rng, m, n, bound=9)
        H, U = hnf(M)
        SU = sympy.Matrix(U)
        assert SU.det() in (1, -1)
        assert sympy.Matrix(M) * SU == sympy.Matrix(m, n, [H[i][j] for i in range(m) for j in range(n)])
        _check_hnf_shape(H)
        for v in kernel_z(M):
            assert all(s == 0 for s in _matvec(M, v))


def test_xgcd():
    for a, b in [(12, 18), (-4, 6), (0, 5), (7, 0), (0, 0), (-3, -9)]:
        g, s, t = xgcd(a, b)
        assert g == s * a + t * b
        assert g >= 0
        import math

        assert g == math.gcd(a, b)


# ----------------------------------------------------------------------
# integer solving


def test_solve_z_golden_plane():
    sol = solve_z([P("a + 2*b + c", ABC)], ABC)
    assert sol.status == "nonempty"
    assert sol.particular == (0, 0, 0)
    assert len(sol.lattice_basis) == 2
    assert lattice_contains(sol.lattice_basis, (1, -1, 1))
    assert lattice_contains(sol.lattice_basis, (2, -1, 0))


def test_solve_z_divisibility_obstruction():
    sol = solve_z([P("2*a - 1", AB)], AB)
    assert sol.is_empty()
    # over the rationals the same system is solvable
    assert solve_q([P("2*a - 1", AB)], AB).status == "nonempty"


def test_solve_z_planted_solutions():
    rng = random.Random(44)
    for _ in range(60):
        m = rng.randrange(1, 5)
        n = rng.randrange(1, 5)
        A = _random_matrix(rng, m, n)
        x0 = [rng.randrange(-9, 10) for _ in range(n)]
        b = [sum(a * x for a, x in zip(row, x0)) for row in A]
        res = solve_z_matrix(A, b, n)
        assert res is not None
        particular, basis = res
        assert [sum(a * x for a, x in zip(row, particular)) for row in A] == b
        for vec in basis:
            assert all(sum(a * x for a, x in zip(row, vec)) == 0 for row in A)
        # the planted solution differs from the particular one by a lattice vector
        diff = tuple(x - y for x, y in zip(x0, particular))
        assert lattice_contains(basis, diff)


def test_solve_z_agrees_with_solve_q():
    rng = random.Random(45)
    empties = 0
    for _ in range(60):
        m = rng.randrange(1, 4)
        n = rng.randrange(1, 4)
        A = _random_matrix(rng, m, n, bound=4)
        b = [rng.randrange(-4, 5) for _ in range(m)]
        zres = solve_z_matrix(A, b, n)
        qres = solve_q_matrix(A, b, n)
        if qres.is_empty():
            assert zres is None
        if zres is not None:
            assert qres.status == "nonempty"
            assert _matvec(A, zres[0]) == [Fraction(v) for v in b]
        else:
            empties += 1
    assert empties > 0


def test_lattice_equality_by_mutual_membership():
    b1 = ((1, -1, 1), (2, -1, 0))
    b2 = ((1, 0, -1), (2, -1, 0))
    # same plane a + 2b + c = 0, different bases
    assert lattices_equal(b1, b2)
    assert not lattices_equal(b1, ((1, -1, 1),))
