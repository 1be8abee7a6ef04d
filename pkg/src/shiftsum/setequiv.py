"""Deciding shift equivalence of multivariate polynomials.

Given p and q in F[x1..xn], find all shift vectors a with p(x + a) = q(x).
Over the rationals the answer is an affine subspace; over the integers it
is an affine lattice.  Both are computed exactly by grouping the
coefficients of p(x + a) - q(x) into an admissible cover and solving a
cascade of linearized systems.
"""

from dataclasses import dataclass
from fractions import Fraction

from .linalg import AffineSetQ, AffineSetZ, solve_q, solve_z, solve_z_matrix
from .polyarith import Poly, VarTable, shift_var_table, symbolic_shift, with_shift_vars


@dataclass(frozen=True)
class CoeffSystem:
    """Coefficients of p(x + a) - q(x) grouped by x-monomial.

    entries holds pairs (alpha, c) where alpha is an exponent tuple over
    the original variables and c is the corresponding coefficient, a
    nonzero polynomial in the shift variables.  xdeg is
    max(deg p, deg q), used by the x-degree cover.
    """

    xvt: VarTable
    avt: VarTable
    entries: tuple
    xdeg: int

    def coeff(self, alpha):
        for beta, c in self.entries:
            if beta == alpha:
                return c
        return Poly.zero(self.avt)


@dataclass(frozen=True)
class Cover:
    """Ordered strata of a coefficient system.

    Each stratum is a tuple of (alpha, c) entries.  Strata are nonempty
    and listed in the order the solving cascade consumes them.
    """

    kind: str
    strata: tuple


def coeff_system(p, q):
    """Group the coefficients of p(x + a) - q(x) by x-monomial."""
    if p.vt != q.vt:
        raise ValueError("coeff_system needs polynomials over the same variables")
    vt = p.vt
    n = vt.n
    avt = shift_var_table(vt)
    diff = symbolic_shift(p) - Poly(with_shift_vars(vt), {e + (0,) * n: c for e, c in q.terms.items()})
    grouped = {}
    for exps, c in diff.terms.items():
        alpha, beta = exps[:n], exps[n:]
        grouped.setdefault(alpha, {})[beta] = c
    entries = tuple(
        (alpha, Poly(avt, coeffs))
        for alpha, coeffs in sorted(grouped.items(), key=lambda item: (sum(item[0]), item[0]), reverse=True)
    )
    xdeg = max(p.total_degree(), q.total_degree())
    return CoeffSystem(vt, avt, entries, xdeg)


def a_degree_cover(system):
    """Stratify entries by their degree in the shift variables.

    The first stratum collects every entry of degree at most 1; each
    later stratum holds the entries of one higher degree.  Empty strata
    are dropped.
    """
    blocks = {}
    for alpha, c in system.entries:
        d = c.total_degree()
        blocks.setdefault(1 if d <= 1 else d, []).append((alpha, c))
    strata = []
    for d in sorted(blocks):
        strata.append(tuple(blocks[d]))
    cover = Cover("adeg", tuple(strata))
    _check_first_stratum(cover)
    return cover


def x_homogeneous_cover(system):
    """Stratify entries by x-degree, highest first.

    Entries with |alpha| = xdeg - i land in the i-th nonempty stratum;
    their coefficients have shift-degree at most i, so the first stratum
    is linear.  Empty strata are dropped.
    """
    blocks = {}
    for alpha, c in system.entries:
        blocks.setdefault(sum(alpha), []).append((alpha, c))
    strata = []
    for d in sorted(blocks, reverse=True):
        strata.append(tuple(blocks[d]))
    cover = Cover("xhom", tuple(strata))
    _check_first_stratum(cover)
    return cover


def _check_first_stratum(cover):
    if cover.strata and any(c.total_degree() > 1 for _, c in cover.strata[0]):
        raise AssertionError("first stratum of %s cover is not linear" % cover.kind)


def is_admissible(cover, system):
    """Check the cover conditions the cascade relies on.

    The first stratum must be linear in the shift variables, every
    stratum must be nonempty, and among non-constant entries, the entry
    at any componentwise larger exponent must sit in a strictly earlier
    stratum.  Constant entries are exempt from the ordering: a nonzero
    constant coefficient proves emptiness at whatever round reaches it,
    so no linearization ever depends on it.
    """
    if any(not stratum for stratum in cover.strata):
        return False
    if cover.strata and any(c.total_degree() > 1 for _, c in cover.strata[0]):
        return False
    position = {}
    degree = {}
    for idx, stratum in enumerate(cover.strata):
        for alpha, c in stratum:
            position[alpha] = idx
            degree[alpha] = c.total_degree()
    if len(position) != len(system.entries):
        return False
    for alpha, pos in position.items():
        if degree[alpha] < 1:
            continue
        for beta, bpos in position.items():
            if degree[beta] < 1 or beta == alpha:
                continue
            if all(bi >= ai for ai, bi in zip(alpha, beta)) and bpos >= pos:
                return False
    return True


@dataclass(frozen=True)
class ShiftEquivalence:
    """Result of a shift-equivalence decision.

    solutions is an AffineSetQ (ring "q") or AffineSetZ (ring "z").
    decided_at_stratum is the 1-based index of the stratum whose system
    settled the verdict; 0 means the answer was known before any stratum
    was solved.
    """

    solutions: object
    decided_at_stratum: int
    cover: str
    ring: str


def _full_space(vt, ring):
    n = vt.n
    zero = tuple(Fraction(0) for _ in range(n))
    if ring == "q":
        basis = tuple(tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n))
        return AffineSetQ("nonempty", zero, basis)
    basis = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    return AffineSetZ("nonempty", tuple(0 for _ in range(n)), basis)


def _empty(ring):
    if ring == "q":
        return AffineSetQ.empty()
    return AffineSetZ.empty()


def shift_equivalent(p, q, ring="z", cover="adeg"):
    """Decide for which shift vectors a the identity p(x + a) = q(x) holds.

    Runs the stratified linearization cascade: strata are consumed in
    cover order, each round re-linearizes all entries seen so far at the
    current particular point and solves the joint linear system.  An
    inconsistent round proves there is no solution.  After the last
    round the solution set of the final linear system is the exact
    answer; for ring "z" it is resolved into an affine lattice.
    """
    if ring not in ("q", "z"):
        raise ValueError("ring must be 'q' or 'z'")
    if cover not in ("adeg", "xhom"):
        raise ValueError("cover must be 'adeg' or 'xhom'")
    if p.vt != q.vt:
        raise ValueError("shift_equivalent needs polynomials over the same variables")
    vt = p.vt
    if p.is_zero() and q.is_zero():
        return ShiftEquivalence(_full_space(vt, ring), 0, cover, ring)
    diff_deg = (p - q).total_degree()
    if diff_deg >= p.total_degree():
        return ShiftEquivalence(_empty(ring), 0, cover, ring)
    system = coeff_system(p, q)
    strata = (a_degree_cover(system) if cover == "adeg" else x_homogeneous_cover(system)).strata
    if not strata:
        return ShiftEquivalence(_full_space(vt, ring), 0, cover, ring)
    avt = system.avt
    point = tuple(Fraction(0) for _ in range(avt.n))
    seen = []
    final = None
    for ordinal, stratum in enumerate(strata, start=1):
        seen.extend(c for _, c in stratum)
        linear = [c.linearize(point) for c in seen]
        solved = solve_q(linear, avt)
        if solved.is_empty():
            return ShiftEquivalence(_empty(ring), ordinal, cover, ring)
        point = solved.particular
        final = (linear, solved)
    linear, solved = final
    if ring == "q":
        return ShiftEquivalence(solved, len(strata), cover, ring)
    return ShiftEquivalence(solve_z(linear, avt), len(strata), cover, ring)


def dispersion_z(p, q, subgroup=None):
    """Integer shift vectors a with p(x + a) = q(x), optionally restricted.

    subgroup, when given, is an iterable of variable indices that are
    allowed to move; all other components of a are forced to zero.  The
    result is an affine lattice in full-length coordinates.
    """
    full = shift_equivalent(p, q, ring="z", cover="adeg").solutions
    if full.is_empty():
        return full
    n = p.vt.n
    if subgroup is None:
        return full
    allowed = set(subgroup)
    fixed = [i for i in range(n) if i not in allowed]
    if not fixed:
        return full
    basis = full.lattice_basis
    if not basis:
        if all(full.particular[i] == 0 for i in fixed):
            return full
        return AffineSetZ.empty()
    rows = [[vec[i] for vec in basis] for i in fixed]
    rhs = [-full.particular[i] for i in fixed]
    sub = solve_z_matrix(rows, rhs, len(basis))
    if sub is None:
        return AffineSetZ.empty()
    c0, cbasis = sub
    particular = tuple(
        full.particular[i] + sum(c0[j] * basis[j][i] for j in range(len(basis)))
        for i in range(n)
    )
    new_basis = tuple(
        tuple(sum(ck[j] * basis[j][i] for j in range(len(basis))) for i in range(n))
        for ck in cbasis
    )
    return AffineSetZ("nonempty", particular, new_basis)
