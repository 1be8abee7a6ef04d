"""Decide multivariate rational summability with exact certificates.

A rational function f is (sigma_{x_1}, ..., sigma_{x_n})-summable when
f = sum_i (sigma_{x_i}(g_i) - g_i) for rational functions g_i.  The
decision runs over the orbit decomposition of f: the polynomial part is
always summable, and each orbit component collapses onto its
representative d, leaving a single fraction a/d^j.  That fraction is
summable exactly when a is summable under the isotropy lattice of d,
which a linear change of variables turns into a smaller instance of the
same problem.  Both verdicts come with an exact decomposition
f = sum_i Delta_{x_i}(g_i) + remainder, the remainder empty exactly in
the summable case.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd

from .groups import axis_split, difference_isomorphism, g_equivalent, isotropy_basis
from .orbital import UPoly, orbital_decompose, refine_factors
from .polyarith import FactoredDen, Poly, RatFun


def _unit_shift(n, i, k):
    return tuple(k if j == i else 0 for j in range(n))


def _active_count(vt, nactive):
    limit = vt.n if vt.t_index is None else vt.t_index
    if nactive is None:
        nactive = limit
    if not 1 <= nactive <= limit:
        raise ValueError("active variable count out of range")
    return nactive


# ----------------------------------------------------------------------
# result containers


@dataclass(frozen=True)
class Certificate:
    """Per-variable parts g_i, aligned with the variable table order.

    Certifies f = sum_i (sigma_{x_i}(g_i) - g_i) for the f it belongs to;
    parts for variables outside the summation set are zero."""

    parts: tuple


@dataclass(frozen=True)
class ReducedForm:
    """Exact decomposition f = sum_i Delta_{x_i}(g_i) + sum a/(d^j).

    remainder holds (a, d, j) triples: d is a primitive polynomial
    involving the main variable, j a positive power, and a a rational
    function whose denominator is free of the main variable.  Distinct
    entries have distinct (d, j) keys."""

    certificate: Certificate
    remainder: tuple


@dataclass(frozen=True)
class SummabilityResult:
    summable: bool
    reduced: ReducedForm

    @property
    def certificate(self):
        return self.reduced.certificate


# ----------------------------------------------------------------------
# telescoping expansions


def expand_tau_delta(tau, h):
    """Split tau(h) - h into per-variable differences.

    Returns parts with tau(h) - h = sum_i (sigma_{x_i}(parts[i]) -
    parts[i]).  Working from the last variable down, each step peels one
    coordinate of tau off via the univariate telescoping sum, so
    parts[i] is a sum of |tau[i]| shifted copies of h."""
    vt = h.vt
    n = vt.n
    parts = [RatFun.zero(vt)] * n
    w = h
    for i in range(n - 1, -1, -1):
        k = int(tau[i])
        if k == 0:
            continue
        g = RatFun.zero(vt)
        if k > 0:
            for step in range(k):
                g = g + w.shift(_unit_shift(n, i, step))
        else:
            for step in range(1, -k + 1):
                g = g + w.shift(_unit_shift(n, i, -step))
            g = -g
        parts[i] = g
        w = w.shift(_unit_shift(n, i, k))
    return parts


def poly_antidifference(f):
    """UPoly u with u(x1 + 1) - u(x1) = f, zero constant term.

    Solves the triangular system sum_{k>m} C(k, m) c_k = f_m from the
    top degree down; always solvable, so polynomials in the main
    variable are always summable in it."""
    vt = f.vt
    if f.is_zero():
        return UPoly.zero(vt)
    coeffs = {}
    for m in range(f.degree(), -1, -1):
        acc = f.coeff(m)
        for k, ck in coeffs.items():
            if k > m:
                acc = acc - ck * comb(k, m)
        coeffs[m + 1] = acc * Fraction(1, m + 1)
    return UPoly(vt, coeffs)


def reduce_orbit_component(comp):
    """Collapse an orbit component onto its representative.

    Returns (parts, a) with comp.value() = sum_i Delta_{x_i}(parts[i]) +
    a/rep^j exactly, where a = sum_tau shift(a_tau, -tau) collects every
    member numerator pulled back to the representative.  Each member at
    shift tau contributes the telescoping sums of tau applied to
    shift(a_tau, -tau)/rep^j."""
    rep = comp.orbit.representative
    vt = rep.vt
    n = vt.n
    inv_dj = RatFun(Poly.one(vt), rep ** comp.j)
    parts = [RatFun.zero(vt)] * n
    a = RatFun.zero(vt)
    for tau, anum in comp.terms:
        back = anum.shift(tuple(-c for c in tau))
        a = a + back
        if any(tau):
            w = back * inv_dj
            for i, g in enumerate(expand_tau_delta(tau, w)):
                if not g.is_zero():
                    parts[i] = parts[i] + g
    return parts, a


# ----------------------------------------------------------------------
# the decision


def _oriented_basis(generators, axis):
    """Basis of a shift lattice ordered for variable elimination.

    Vectors fixing the highest active axes come first; the last entry
    moves the highest moved axis, with minimal positive step on it.
    Recursing on the complement orders the head the same way, so the
    basis mirrors the order in which is_summable peels off variables.
    """
    gens = [tuple(int(c) for c in v) for v in generators if any(v)]
    if not gens:
        return ()
    assert axis >= 0
    tau0, _, rest = axis_split(gens, axis)
    head = _oriented_basis(rest, axis - 1)
    if tau0 is None:
        return head
    return head + (tau0,)


def _strata_distinct_check(d, lattice, nact):
    """Consistency check between the isotropy lattice and shift
    equivalence: along the last active variable, strata 1..k-1 of d must
    be inequivalent under the remaining active shifts, and stratum k
    equivalent, where k is the minimal positive step of the lattice
    along that axis."""
    axis = nact - 1
    steps = [abs(v[axis]) for v in lattice.generators if v[axis]]
    if not steps:
        return
    k = gcd(*steps)
    sub = tuple(range(axis))
    n = d.vt.n
    for i in range(1, k):
        if g_equivalent(d, d.shift(_unit_shift(n, axis, i)), sub) is not None:
            raise AssertionError(
                "strata along the last active variable collapse early"
            )
    if g_equivalent(d, d.shift(_unit_shift(n, axis, k)), sub) is None:
        raise AssertionError(
            "lattice step along the last active variable is not realized"
        )


def is_summable(num, den, nactive=None, known=()):
    """Decide (sigma_{x_1}, ..., sigma_{x_nactive})-summability of num/den.

    den must be a FactoredDen whose bases are irreducible; nactive counts
    the leading variables being summed over (all non-parameter variables
    by default).  Extra polynomials in `known` help factor denominators
    that appear mid-recursion.

    Returns a SummabilityResult whose ReducedForm is exact for both
    verdicts: num/den = sum_i Delta_{x_i}(g_i) + sum a/(d^j), and the
    function is summable exactly when the remainder is empty.  Each
    remainder entry has a numerator failing the isotropy criterion for
    its orbit, so no further reduction is possible along these
    directions."""
    vt = num.vt
    nact = _active_count(vt, nactive)
    sub = tuple(range(nact))
    f0, comps = orbital_decompose(num, den, subgroup=sub)

    parts = [RatFun.zero(vt) for _ in range(vt.n)]
    remainder = {}
    anti = poly_antidifference(f0)
    if not anti.is_zero():
        parts[vt.main_index] = parts[vt.main_index] + anti.to_ratfun()

    x1free = [b for b, _ in den.factors if b.degree_in(vt.main_index) == 0]

    for comp in comps:
        cparts, a = reduce_orbit_component(comp)
        for i in range(vt.n):
            if not cparts[i].is_zero():
                parts[i] = parts[i] + cparts[i]
        if a.is_zero():
            continue
        d, j = comp.orbit.representative, comp.j
        lattice = isotropy_basis(d, subgroup=sub)
        taus = _oriented_basis(lattice.generators, nact - 1)
        r = len(taus)
        if nact == 1 or r == 0:
            key = (d, j)
            remainder[key] = remainder.get(key, RatFun.zero(vt)) + a
            continue
        _strata_distinct_check(d, lattice, nact)
        phi = difference_isomorphism(taus, "summation", vt, nactive=nact)
        atil = phi.apply(a)
        pool = dict.fromkeys(list(known) + x1free)
        for tau, _ in comp.terms:
            if any(tau):
                neg = tuple(-c for c in tau)
                for b in x1free:
                    pool[b.shift(neg)] = None
        inner_known = [phi.apply(p) for p in pool]
        inner_den = refine_factors(atil.den, known=inner_known)
        inner = is_summable(atil.num, inner_den, nactive=r, known=inner_known)
        inner_parts = inner.reduced.certificate.parts
        assert all(g.is_zero() for g in inner_parts[r:]), (
            "certificate touches a variable outside the active range"
        )
        inv_dj = RatFun(Poly.one(vt), d ** j)
        for slot in range(r):
            if inner_parts[slot].is_zero():
                continue
            pulled = phi.unapply(inner_parts[slot]) * inv_dj
            for i, g in enumerate(expand_tau_delta(taus[slot], pulled)):
                if not g.is_zero():
                    parts[i] = parts[i] + g
        for am, dm, jm in inner.reduced.remainder:
            back = phi.unapply(am * RatFun(Poly.one(vt), dm ** jm))
            key = (d, j)
            remainder[key] = remainder.get(key, RatFun.zero(vt)) + back

    entries = tuple(
        (a, d, j) for (d, j), a in remainder.items() if not a.is_zero()
    )
    reduced = ReducedForm(Certificate(tuple(parts)), entries)
    return SummabilityResult(not entries, reduced)


# ----------------------------------------------------------------------
# verification


def _delta_total(parts, nact):
    vt = None
    total = None
    for i, g in enumerate(parts):
        if vt is None:
            vt = g.vt
            total = RatFun.zero(vt)
        if g.is_zero():
            continue
        if i >= nact:
            return None
        total = total + g.shift(_unit_shift(vt.n, i, 1)) - g
    return total


def verify_certificate(f, cert, nactive=None):
    """True iff f = sum_i (sigma_{x_i}(g_i) - g_i) exactly, with every
    part outside the first nactive variables zero."""
    nact = _active_count(f.vt, nactive)
    total = _delta_total(cert.parts, nact)
    return total is not None and total == f


def verify_reduced(f, reduced, nactive=None):
    """True iff f = sum_i Delta_{x_i}(g_i) + sum a/(d^j) exactly."""
    nact = _active_count(f.vt, nactive)
    total = _delta_total(reduced.certificate.parts, nact)
    if total is None:
        return False
    for a, d, j in reduced.remainder:
        total = total + a * RatFun(Poly.one(f.vt), d ** j)
    return total == f
