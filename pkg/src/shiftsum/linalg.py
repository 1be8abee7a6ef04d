"""Exact linear algebra: affine solution sets over the rationals, column
Hermite normal form with its unimodular transform, and integer affine
solution sets (particular solution plus kernel lattice).

The Gaussian elimination core is generic over any exact field whose
elements support +, -, *, / and comparison with zero, so the same engine
serves rational matrices and matrices of rational functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .polyarith import Poly, VarTable


@dataclass(frozen=True)
class AffineSetQ:
    """Affine solution set over the rationals: empty, or a particular
    solution plus a basis of the homogeneous solution space."""

    status: str
    particular: tuple | None
    basis: tuple

    def is_empty(self) -> bool:
        return self.status == "empty"

    @classmethod
    def empty(cls) -> "AffineSetQ":
        return cls("empty", None, ())


@dataclass(frozen=True)
class AffineSetZ:
    """Integer affine solution set: empty, or a particular integer solution
    plus a basis of the solution lattice of the homogeneous system."""

    status: str
    particular: tuple | None
    lattice_basis: tuple

    def is_empty(self) -> bool:
        return self.status == "empty"

    @classmethod
    def empty(cls) -> "AffineSetZ":
        return cls("empty", None, ())


def _is_zero(v) -> bool:
    if hasattr(v, "is_zero"):
        return v.is_zero()
    return v == 0


def solve_field(rows, rhs, ncols, zero, one):
    """Solve a linear system over an exact field.  rows is a list of
    coefficient rows, rhs the right hand sides.  Returns None when the
    system is inconsistent, else (particular, basis) with free variables
    set to zero and one homogeneous basis vector per free column."""
    aug = [list(r) + [v] for r, v in zip(rows, rhs)]
    m = len(aug)
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, m):
            if not _is_zero(aug[i][c]):
                pr = i
                break
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        pv = aug[r][c]
        aug[r] = [v / pv for v in aug[r]]
        for i in range(m):
            if i != r and not _is_zero(aug[i][c]):
                f = aug[i][c]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if not _is_zero(aug[i][ncols]):
            return None
    pivot_of = {c: i for i, c in enumerate(pivots)}
    particular = [zero] * ncols
    for c, i in pivot_of.items():
        particular[c] = aug[i][ncols]
    basis = []
    for f in range(ncols):
        if f in pivot_of:
            continue
        vec = [zero] * ncols
        vec[f] = one
        for c, i in pivot_of.items():
            vec[c] = zero - aug[i][f]
        basis.append(tuple(vec))
    return tuple(particular), tuple(basis)


def linear_rows(eqs, vt: VarTable):
    """Turn degree-at-most-1 polynomials p into rows of p = 0, i.e. the
    system (coefficients) x = -constant."""
    rows = []
    rhs = []
    for p in eqs:
        if p.total_degree() > 1:
            raise ValueError("system is not linear")
        row = [Fraction(0)] * vt.n
        for e, c in p.terms.items():
            if sum(e) == 0:
                continue
            row[e.index(1)] = c
        rows.append(row)
        rhs.append(-p.constant())
    return rows, rhs


def solve_q(eqs, vt: VarTable) -> AffineSetQ:
    """Rational solution set of a system of linear polynomial equations."""
    rows, rhs = linear_rows(eqs, vt)
    res = solve_field(rows, rhs, vt.n, Fraction(0), Fraction(1))
    if res is None:
        return AffineSetQ.empty()
    particular, basis = res
    return AffineSetQ("nonempty", particular, basis)


def solve_q_matrix(rows, rhs, ncols) -> AffineSetQ:
    res = solve_field(
        [[Fraction(v) for v in r] for r in rows],
        [Fraction(v) for v in rhs],
        ncols,
        Fraction(0),
        Fraction(1),
    )
    if res is None:
        return AffineSetQ.empty()
    return AffineSetQ("nonempty", res[0], res[1])


# ----------------------------------------------------------------------
# Hermite normal form (column style)


def xgcd(a: int, b: int):
    """Extended gcd: returns (g, s, t) with g = s*a + t*b, g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def hnf(mat):
    """Column Hermite normal form.  Returns (H, U) with H = M U and U
    unimodular.  In H, zero columns sit rightmost; each nonzero column has
    a positive pivot, pivot rows strictly increase left to right, entries
    right of a pivot in its row vanish and entries left of it lie in
    [0, pivot)."""
    H = [list(map(int, row)) for row in mat]
    m = len(H)
    n = len(H[0]) if m else 0
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def colop(j, k, a, b, c, d):
        # (col_j, col_k) <- (a*col_j + b*col_k, c*col_j + d*col_k)
        for rowset in (H, U):
            for row in rowset:
                vj, vk = row[j], row[k]
                row[j] = a * vj + b * vk
                row[k] = c * vj + d * vk

    def swap(j, k):
        if j == k:
            return
        for rowset in (H, U):
            for row in rowset:
                row[j], row[k] = row[k], row[j]

    def addmul(j, k, q):
        # col_j <- col_j - q*col_k
        if not q:
            return
        for rowset in (H, U):
            for row in rowset:
                row[j] -= q * row[k]

    col = 0
    for row in range(m):
        if col == n:
            break
        nz = [j for j in range(col, n) if H[row][j]]
        if not nz:
            continue
        swap(col, nz[0])
        for j in range(col + 1, n):
            if not H[row][j]:
                continue
            a, b = H[row][col], H[row][j]
            g, s, t = xgcd(a, b)
            colop(col, j, s, t, -(b // g), a // g)
        if H[row][col] < 0:
            for rowset in (H, U):
                for rr in rowset:
                    rr[col] = -rr[col]
        piv = H[row][col]
        for j in range(col):
            q = H[row][j] // piv
            addmul(j, col, q)
        col += 1
    return H, U


def kernel_z(mat):
    """Basis of the integer kernel lattice of mat, from the unimodular
    transform columns over the zero columns of the Hermite form."""
    H, U = hnf(mat)
    m = len(H)
    n = len(H[0]) if m else (len(mat[0]) if mat else 0)
    if m == 0:
        return tuple(tuple(1 if i == j else 0 for i in range(n)) for j in range(n))
    basis = []
    for j in range(n):
        if all(H[i][j] == 0 for i in range(m)):
            basis.append(tuple(U[i][j] for i in range(n)))
    return tuple(basis)


def solve_z_matrix(rows, rhs, ncols):
    """Integer solutions of an integer linear system.  Returns None when
    none exist, else (particular, lattice_basis)."""
    m = len(rows)
    if m == 0:
        ident = tuple(tuple(1 if i == j else 0 for i in range(ncols)) for j in range(ncols))
        return (0,) * ncols, ident
    H, U = hnf(rows)
    # locate the pivot of each nonzero column
    pivot_row = {}
    for j in range(ncols):
        i = next((i for i in range(m) if H[i][j] != 0), None)
        if i is not None:
            pivot_row[j] = i
    y = [0] * ncols
    used = set()
    for j in sorted(pivot_row, key=lambda j: pivot_row[j]):
        i = pivot_row[j]
        acc = rhs[i] - sum(H[i][k] * y[k] for k in range(ncols) if k != j)
        if acc % H[i][j]:
            return None
        y[j] = acc // H[i][j]
        used.add(i)
    for i in range(m):
        if i in used:
            continue
        if sum(H[i][k] * y[k] for k in range(ncols)) != rhs[i]:
            return None
    particular = tuple(sum(U[i][j] * y[j] for j in range(ncols)) for i in range(ncols))
    basis = []
    for j in range(ncols):
        if all(H[i][j] == 0 for i in range(m)):
            basis.append(tuple(U[i][j] for i in range(ncols)))
    return particular, tuple(basis)


def solve_z(eqs, vt: VarTable) -> AffineSetZ:
    """Integer solution set of a system of linear polynomial equations with
    rational coefficients."""
    qrows, qrhs = linear_rows(eqs, vt)
    rows = []
    rhs = []
    for row, b in zip(qrows, qrhs):
        scale = math.lcm(*(v.denominator for v in row + [b]))
        rows.append([int(v * scale) for v in row])
        rhs.append(int(b * scale))
    res = solve_z_matrix(rows, rhs, vt.n)
    if res is None:
        return AffineSetZ.empty()
    return AffineSetZ("nonempty", res[0], res[1])


def lattice_contains(basis, v) -> bool:
    """Whether v lies in the lattice spanned by the given integer basis."""
    v = tuple(int(c) for c in v)
    if not basis:
        return all(c == 0 for c in v)
    n = len(v)
    rows = [[int(vec[i]) for vec in basis] for i in range(n)]
    return solve_z_matrix(rows, list(v), len(basis)) is not None


def lattices_equal(basis1, basis2) -> bool:
    """Mutual containment of two integer lattices given by bases."""
    return all(lattice_contains(basis1, v) for v in basis2) and all(
        lattice_contains(basis2, v) for v in basis1
    )


def rank_q(vectors) -> int:
    """Rank over the rationals of a list of equal-length vectors."""
    rows = [[Fraction(c) for c in v] for v in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    col = 0
    while col < ncols and rank < len(rows):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] / rows[rank][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def invert_q(mat):
    """Exact inverse of a square matrix with rational entries.

    Raises ValueError when the matrix is singular.
    """
    n = len(mat)
    aug = [
        [Fraction(mat[i][j]) for j in range(n)]
        + [Fraction(1 if j == i else 0) for j in range(n)]
        for i in range(n)
    ]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        pivval = aug[col][col]
        aug[col] = [v / pivval for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)
