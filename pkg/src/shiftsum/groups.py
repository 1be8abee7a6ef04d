"""Shift groups of polynomials.

A shift vector v acts on p by p(x) -> p(x + v).  This module computes
the lattice of vectors fixing a polynomial (its isotropy group), tests
equivalence of two polynomials inside a subgroup of shifts, extracts a
quotient generator along a distinguished axis, and builds the linear
change of variables that straightens an independent family of shift
vectors onto the coordinate shifts.
"""

from dataclasses import dataclass
from fractions import Fraction

from .linalg import hnf, invert_q, lattice_contains, lattices_equal, rank_q
from .polyarith import Poly, VarTable
from .setequiv import dispersion_z


@dataclass(frozen=True)
class ShiftLattice:
    """Subgroup of integer shift vectors given by an independent basis."""

    generators: tuple

    @classmethod
    def from_spanning(cls, vectors):
        """Reduce a spanning set to an independent basis."""
        vecs = [tuple(int(c) for c in v) for v in vectors]
        vecs = [v for v in vecs if any(v)]
        if not vecs:
            return cls(())
        n = len(vecs[0])
        mat = [[v[i] for v in vecs] for i in range(n)]
        H, _ = hnf(mat)
        cols = []
        for j in range(len(vecs)):
            col = tuple(H[i][j] for i in range(n))
            if any(col):
                cols.append(col)
        return cls(tuple(cols))

    @property
    def rank(self):
        return len(self.generators)

    def contains(self, v):
        return lattice_contains(self.generators, v)

    def equals(self, other):
        return lattices_equal(self.generators, other.generators)


def isotropy_basis(d, subgroup=None):
    """Basis of the lattice of integer shift vectors fixing d.

    subgroup, when given, lists the variable indices allowed to move;
    all other components are forced to zero.
    """
    if d.is_zero():
        raise ValueError("isotropy_basis needs a nonzero polynomial")
    sol = dispersion_z(d, d, subgroup=subgroup)
    # 0 fixes d, so the solution set is a lattice and contains its own
    # particular point.
    assert not sol.is_empty()
    assert lattice_contains(sol.lattice_basis, sol.particular)
    return ShiftLattice.from_spanning(sol.lattice_basis)


def g_equivalent(p, q, subgroup=None):
    """Some integer shift vector moving p onto q, or None.

    The vector is supported on the subgroup indices when given.  A
    returned v satisfies p(x + v) = q(x) exactly.
    """
    sol = dispersion_z(p, q, subgroup=subgroup)
    if sol.is_empty():
        return None
    return sol.particular


def axis_split(generators, axis):
    """Split a lattice along one coordinate axis.

    Returns (tau0, k0, complement): tau0 is a lattice element whose
    axis-component k0 is the minimal positive one (the gcd of all
    axis-components), and complement is a basis of the sublattice with
    zero axis-component.  tau0 is None and k0 is 0 when every generator
    already has zero axis-component.
    """
    vecs = [tuple(int(c) for c in v) for v in generators]
    vecs = [v for v in vecs if any(v)]
    if not vecs or all(v[axis] == 0 for v in vecs):
        return None, 0, tuple(vecs)
    n = len(vecs[0])
    order = [axis] + [i for i in range(n) if i != axis]
    mat = [[v[order[r]] for v in vecs] for r in range(n)]
    H, _ = hnf(mat)
    cols = []
    for j in range(len(vecs)):
        col = [H[r][j] for r in range(n)]
        if any(col):
            cols.append(col)

    def unpermute(col):
        out = [0] * n
        for r, i in enumerate(order):
            out[i] = col[r]
        return tuple(out)

    tau0 = unpermute(cols[0])
    k0 = tau0[axis]
    assert k0 > 0
    rest = tuple(unpermute(c) for c in cols[1:])
    assert all(v[axis] == 0 for v in rest)
    return tau0, k0, rest


def quotient_generator(full, sub, axis):
    """Generator of the quotient of one lattice by its zero-axis part.

    full is a ShiftLattice over all variables, sub the sublattice of
    elements with zero axis-component.  Returns None when the quotient
    is trivial (every element of full has zero axis-component); else
    (tau0, k0) with tau0 in full of minimal positive axis-component k0,
    so that full is generated by tau0 together with sub.
    """
    tau0, k0, rest = axis_split(full.generators, axis)
    if tau0 is None:
        return None
    assert lattices_equal(rest, sub.generators)
    return tau0, k0


@dataclass(frozen=True)
class DifferenceIso:
    """Linear change of variables phi(h) = h(M x) with integer M.

    Column j of M is the image of the j-th unit vector, so shifting
    variable j downstream of phi corresponds to shifting by column j
    upstream: phi(h shifted by M e_j) = (phi h) shifted by e_j.
    """

    vt: VarTable
    matrix: tuple
    inverse: tuple

    def _images(self, rows):
        n = self.vt.n
        out = []
        for i in range(n):
            terms = {}
            for j in range(n):
                c = rows[i][j]
                if c != 0:
                    e = tuple(1 if k == j else 0 for k in range(n))
                    terms[e] = Fraction(c)
            out.append(Poly(self.vt, terms))
        return tuple(out)

    def apply(self, obj):
        return obj.substitute(self.vt, self._images(self.matrix))

    def unapply(self, obj):
        return obj.substitute(self.vt, self._images(self.inverse))


def difference_isomorphism(taus, mode, vt, nactive=None):
    """Straighten independent shift vectors onto coordinate shifts.

    In summation mode, taus are vectors supported on the first nactive
    variables; the result phi satisfies phi(h shifted by taus[l]) =
    sigma_{x_l}(phi(h)).  In telescoping mode taus[0] must have nonzero
    t-component and becomes the image of the t-axis (so phi(t) = k0*t),
    while the remaining taus straighten onto the leading x-variables.
    Slots not used by taus are completed greedily with unit vectors of
    the active variables, keeping the columns independent; variables
    beyond the active range are fixed.
    """
    n = vt.n
    if nactive is None:
        nactive = n if vt.t_index is None else vt.t_index
    cols = {}
    vectors = []
    if mode == "telescoping":
        if vt.t_index is None:
            raise ValueError("telescoping mode needs a designated t variable")
        if not taus or taus[0][vt.t_index] == 0:
            raise ValueError("telescoping mode needs a leading tau moving t")
        if any(v[vt.t_index] != 0 for v in taus[1:]):
            raise ValueError("only the leading tau may move t")
        cols[vt.t_index] = tuple(int(c) for c in taus[0])
        vectors.append(cols[vt.t_index])
        assigned = taus[1:]
    elif mode == "summation":
        assigned = taus
    else:
        raise ValueError("mode must be 'summation' or 'telescoping'")
    if len(assigned) > nactive:
        raise ValueError("more shift vectors than active variables")
    for slot, v in enumerate(assigned):
        v = tuple(int(c) for c in v)
        if any(v[i] != 0 for i in range(n) if i >= nactive and i != vt.t_index):
            raise ValueError("shift vector moves an inactive variable")
        cols[slot] = v
        vectors.append(v)
    if vectors and rank_q(vectors) != len(vectors):
        raise ValueError("shift vectors are dependent")
    free_slots = [i for i in range(nactive) if i not in cols]
    for i in range(nactive):
        if not free_slots:
            break
        unit = tuple(1 if k == i else 0 for k in range(n))
        if rank_q(vectors + [unit]) > rank_q(vectors):
            vectors.append(unit)
            cols[free_slots.pop(0)] = unit
    if free_slots:
        raise ValueError("shift vectors are dependent")
    for i in range(n):
        if i not in cols:
            cols[i] = tuple(1 if k == i else 0 for k in range(n))
    matrix = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
    inverse = invert_q(matrix)
    return DifferenceIso(vt, matrix, inverse)
