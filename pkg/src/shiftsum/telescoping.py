"""Decide existence of telescopers for parameterized rational functions.

A telescoper for f(t, x1, ..., xn) of shift type (sigma_t; sigma_{x1},
..., sigma_{xn}) is a nonzero operator L = sum_i c_i(t) S_t^i whose
application L(f) = sum_i c_i(t) f(t + i, x) is summable in x1..xn; the
parts g_i with L(f) = sum_i Delta_{x_i}(g_i) are its certificate.  The
decision mirrors the summability pipeline: decompose f into orbit
components under the group generated by all shifts including t, collapse
each component onto the t-strata of its representative, and decide each
stratum piece by one of three routes.  When no t-move fixes the
denominator, a telescoper exists exactly when the piece is summable.
When the denominator is fixed by a t-move tau0 but by nothing else, the
piece numerators live in a finite dimensional space over K(t) and a
linear annihilator along tau0 decides.  Otherwise a change of variables
trades tau0 for a clean shift of t and the remaining denominator
symmetries for clean x-shifts, giving a smaller instance of the same
problem; pulled back, its operator gains step k0 and its coefficients
are evaluated at t/k0.  An LCLM merges the per-piece operators into one
telescoper for the sum.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd

from .groups import axis_split, difference_isomorphism, g_equivalent, isotropy_basis
from .linalg import solve_field
from .orbital import orbital_decompose, refine_factors
from .polyarith import Poly, RatFun, divexact, poly_gcd
from .summation import (
    Certificate,
    _active_count,
    _oriented_basis,
    _unit_shift,
    expand_tau_delta,
    is_summable,
    poly_antidifference,
)


# ----------------------------------------------------------------------
# shift operators in the parameter


@dataclass(frozen=True)
class OreOp:
    """Operator sum over (i, c_i) of c_i(t) * S_t^(i*step).

    coeffs holds (order, coefficient) pairs with strictly increasing
    orders and nonzero coefficients, each a rational function of t alone;
    step is the positive stride of the powers actually used.  Instances
    are built through OreOp.build, which merges duplicate orders and
    pulls the largest common stride out of the orders, so structurally
    equal operators compare equal."""

    coeffs: tuple
    step: int = 1

    @classmethod
    def build(cls, pairs, step=1):
        if step < 1:
            raise ValueError("operator step must be positive")
        merged = {}
        vt = None
        for i, c in pairs:
            i = int(i)
            if i < 0:
                raise ValueError("operator orders must be nonnegative")
            vt = c.vt
            if c.is_zero():
                continue
            merged[i] = merged[i] + c if i in merged else c
        merged = {i: c for i, c in merged.items() if not c.is_zero()}
        if not merged:
            raise ValueError("zero operator")
        t = vt.t_index
        if t is None:
            raise ValueError("operator coefficients need a designated t")
        for c in merged.values():
            for i in range(vt.n):
                if i != t and (c.num.degree_in(i) or c.den.degree_in(i)):
                    raise ValueError("operator coefficients must depend on t only")
        stride = 0
        for i in merged:
            stride = gcd(stride, i)
        if stride == 0:
            step = 1
        elif stride > 1:
            merged = {i // stride: c for i, c in merged.items()}
            step *= stride
        return cls(tuple(sorted(merged.items())), step)

    @classmethod
    def identity(cls, vt):
        return cls.build([(0, RatFun.one(vt))])

    @property
    def vt(self):
        return self.coeffs[0][1].vt

    def order(self):
        """Largest power of S_t used."""
        return self.coeffs[-1][0] * self.step

    def is_identity(self):
        return self.order() == 0 and self.coeffs[0][1] == RatFun.one(self.vt)

    def is_monic(self):
        return self.coeffs[-1][1] == RatFun.one(self.vt)

    def __str__(self):
        t = self.vt.names[self.vt.t_index]
        pieces = []
        for i, c in reversed(self.coeffs):
            k = i * self.step
            head = f"S_{t}^{k}" if k > 1 else (f"S_{t}" if k == 1 else "")
            body = str(c)
            if head and body == "1":
                pieces.append(head)
            elif head:
                pieces.append(f"({body})*{head}")
            else:
                pieces.append(f"({body})")
        return " + ".join(pieces)


def apply_op(op, f):
    """sum_i c_i(t) * sigma_t^(i*step)(f), exactly."""
    vt = f.vt
    if vt != op.vt:
        raise ValueError("variable table mismatch")
    t = vt.t_index
    total = RatFun.zero(vt)
    for i, c in op.coeffs:
        total = total + c * f.shift(_unit_shift(vt.n, t, i * op.step))
    return total


def op_mul(a, b):
    """Operator product a*b: (a*b)(f) = a(b(f)).

    Shifts act on coefficients when they move past them, so the
    coefficient of S^(i+j) collects a_i * sigma_t^i(b_j)."""
    vt = a.vt
    if vt != b.vt:
        raise ValueError("variable table mismatch")
    t = vt.t_index
    n = vt.n
    g = gcd(a.step, b.step)
    out = {}
    for i, ca in a.coeffs:
        ia = i * (a.step // g)
        for j, cb in b.coeffs:
            k = ia + j * (b.step // g)
            term = ca * cb.shift(_unit_shift(n, t, i * a.step))
            out[k] = out[k] + term if k in out else term
    return OreOp.build(out.items(), step=g)


def _dense_step1(op):
    """Coefficient list [c_0, ..., c_order] of op re-indexed to step 1."""
    vt = op.vt
    arr = [RatFun.zero(vt)] * (op.order() + 1)
    for i, c in op.coeffs:
        arr[i * op.step] = c
    return arr


def _lclm2(a, b):
    """Minimal common left multiple of two monic operators.

    Returns (l, ra, rb) with l = ra*a = rb*b, found by solving the
    coefficient identities over K(t) at each candidate order from
    max(orda, ordb) up to orda + ordb, where a solution always exists."""
    if a == b:
        one = OreOp.identity(a.vt)
        return a, one, one
    if a.is_identity():
        return b, b, OreOp.identity(a.vt)
    if b.is_identity():
        return a, OreOp.identity(a.vt), a
    vt = a.vt
    t = vt.t_index
    n = vt.n
    zero = RatFun.zero(vt)
    one = RatFun.one(vt)
    da = _dense_step1(a)
    db = _dense_step1(b)
    alpha = len(da) - 1
    beta = len(db) - 1

    def shifted(arr, j, k):
        # sigma_t^j applied to arr[k], zero outside range
        if not 0 <= k <= len(arr) - 1 or arr[k].is_zero():
            return zero
        return arr[k].shift(_unit_shift(n, t, j))

    for rho in range(max(alpha, beta), alpha + beta + 1):
        nr = rho - alpha
        ns = rho - beta
        ncols = nr + ns + 1
        rows = []
        rhs = []
        for k in range(rho + 1):
            row = [zero] * ncols
            for i in range(nr):
                row[i] = shifted(da, i, k - i)
            for j in range(ns + 1):
                row[nr + j] = zero - shifted(db, j, k - j)
            rows.append(row)
            rhs.append(zero - shifted(da, nr, k - nr))
        sol = solve_field(rows, rhs, ncols, zero, one)
        if sol is None:
            continue
        particular, _ = sol
        ra = OreOp.build(list(enumerate(particular[:nr])) + [(nr, one)])
        rb = OreOp.build(enumerate(particular[nr:]))
        l = op_mul(ra, a)
        if l != op_mul(rb, b):
            raise AssertionError("cofactor identities disagree")
        return l, ra, rb
    raise AssertionError("no common left multiple within the order bound")


def lclm(ops):
    """Least common left multiple with cofactors.

    Returns (l, cofactors) with l = cofactors[i] * ops[i] for every i as
    exact operator identities; l is monic.  Each input must be monic."""
    ops = list(ops)
    if not ops:
        raise ValueError("lclm needs at least one operator")
    for op in ops:
        if not op.is_monic():
            raise ValueError("lclm expects monic operators")
    total = ops[0]
    cofactors = [OreOp.identity(total.vt)]
    for op in ops[1:]:
        total, p, q = _lclm2(total, op)
        cofactors = [op_mul(p, c) for c in cofactors]
        cofactors.append(q)
    return total, cofactors


# ----------------------------------------------------------------------
# annihilators along a denominator-fixing t-move


def _split_t_exponent(e, t):
    xe = tuple(0 if i == t else k for i, k in enumerate(e))
    te = tuple(k if i == t else 0 for i, k in enumerate(e))
    return xe, te


def _x_content_split(b):
    """b = content * primitive with content in K[t], viewing b in K[t][x]."""
    vt = b.vt
    t = vt.t_index
    groups = {}
    for e, c in b.terms.items():
        xe, te = _split_t_exponent(e, t)
        groups.setdefault(xe, {})[te] = c
    content = Poly.zero(vt)
    for td in groups.values():
        content = poly_gcd(content, Poly(vt, td))
        if content.is_constant():
            return Poly.one(vt), b
    return content, divexact(b, content)


def _x_coeff_vector(g):
    """Map x-monomial -> coefficient in K(t), for g with x-free denominator."""
    vt = g.vt
    t = vt.t_index
    groups = {}
    for e, c in g.num.terms.items():
        xe, te = _split_t_exponent(e, t)
        groups.setdefault(xe, {})[te] = c
    return {xe: RatFun(Poly(vt, td), g.den) for xe, td in groups.items()}


def _reduce_row(rows, vec, combo):
    """Row-reduce vec against the echelon rows, tracking the combination."""
    for key, rvec, rcombo in rows:
        c = vec.get(key)
        if c is None or c.is_zero():
            continue
        for k2, v2 in rvec.items():
            w = vec.get(k2, None)
            w = (w - c * v2) if w is not None else -(c * v2)
            if w.is_zero():
                vec.pop(k2, None)
            else:
                vec[k2] = w
        for k2, v2 in rcombo.items():
            w = combo.get(k2, None)
            w = (w - c * v2) if w is not None else -(c * v2)
            if w.is_zero():
                combo.pop(k2, None)
            else:
                combo[k2] = w
    return vec, combo


def annihilator(a, tau0):
    """Minimal monic operator in T0 killing a along tau0, or None.

    tau0 is an integer shift vector with positive t-component; T0 stands
    for the shift by tau0, and the returned operator L = sum_i e_i T0^i
    satisfies sum_i e_i(t) * a(x + i*tau0) = 0 with coefficients rational
    in t alone.  Writing a's denominator as b1(t) * b2 with b2 primitive
    as a polynomial in the x-variables over K[t], an annihilator exists
    exactly when tau0 fixes b2: the shifts of a * b2 then stay inside the
    x-monomials of a fixed finite set, and the first linear dependence
    among their coefficient vectors over K(t) yields the operator."""
    vt = a.vt
    t = vt.t_index
    if t is None:
        raise ValueError("annihilator needs a designated parameter variable t")
    if tau0[t] <= 0:
        raise ValueError("tau0 must have positive t-component")
    if a.is_zero():
        return OreOp.identity(vt)
    _, b2 = _x_content_split(a.den)
    if b2.shift(tau0) != b2:
        return None
    g = a * RatFun.from_poly(b2)
    assert all(
        g.den.degree_in(i) == 0 for i in range(vt.n) if i != t
    ), "denominator failed to clear its x-part"
    degrees = [sum(k for i, k in enumerate(e) if i != t) for e in g.num.terms]
    xvars = {i for e in g.num.terms for i, k in enumerate(e) if k and i != t}
    bound = comb(max(degrees) + len(xvars), len(xvars))
    one = RatFun.one(vt)
    rows = []
    w = g
    for r in range(bound + 1):
        if r:
            w = w.shift(tau0)
        vec, combo = _reduce_row(rows, _x_coeff_vector(w), {r: one})
        if not vec:
            return OreOp.build(combo.items())
        key = max(vec)
        pivot = vec[key]
        rvec = {k: v / pivot for k, v in vec.items()}
        rcombo = {k: v / pivot for k, v in combo.items()}
        rows.append((key, rvec, rcombo))
    raise AssertionError("shift vectors exceeded their dimension bound")


# ----------------------------------------------------------------------
# the decision


@dataclass(frozen=True)
class TelescoperResult:
    """A telescoper L with certificate parts g_i.

    Certifies apply_op(L, f) = sum_i Delta_{x_i}(g_i) exactly for the f
    it was computed from."""

    L: OreOp
    certificate: Certificate


def collapse_slots(comp, tau0, k0):
    """Collapse an orbit component onto the t-strata of its representative.

    A member at shift tau of the representative d folds onto the stratum
    sigma_t^l(d) with l = tau[t] reduced modulo k0 via tau0 when a
    denominator-fixing t-move tau0 with t-step k0 exists (plain tau[t]
    otherwise); its x-offset telescopes away.  Returns (parts, slots)
    with comp.value() = sum_i Delta_{x_i}(parts[i]) +
    sum_l slots[l] / sigma_t^l(d)^j exactly."""
    rep = comp.orbit.representative
    vt = rep.vt
    n = vt.n
    t = vt.t_index
    parts = [RatFun.zero(vt)] * n
    slots = {}
    for tau, anum in comp.terms:
        ell = tau[t]
        assert ell >= 0, "orbit member sits below its representative's stratum"
        tc = list(tau)
        if tau0 is not None and ell >= k0:
            q, ell = divmod(ell, k0)
            tc = [u - q * v for u, v in zip(tc, tau0)]
            assert tc[t] == ell
        xpart = tuple(0 if i == t else c for i, c in enumerate(tc))
        back = anum.shift(tuple(-c for c in xpart))
        slots[ell] = slots[ell] + back if ell in slots else back
        if any(xpart):
            base = rep.shift(_unit_shift(n, t, ell))
            w = back * RatFun(Poly.one(vt), base ** comp.j)
            for i, g in enumerate(expand_tau_delta(xpart, w)):
                if not g.is_zero():
                    parts[i] = parts[i] + g
    return parts, slots


def _t_strata_check(rep, k0, sub_x):
    """Consistency check between the isotropy lattice and shift
    equivalence along t: strata 1..k0-1 of rep must be inequivalent to
    rep under the x-shifts alone, and stratum k0 equivalent."""
    n = rep.vt.n
    t = rep.vt.t_index
    for i in range(1, k0):
        if g_equivalent(rep, rep.shift(_unit_shift(n, t, i)), sub_x) is not None:
            raise AssertionError("t-strata collapse below the lattice step")
    if g_equivalent(rep, rep.shift(_unit_shift(n, t, k0)), sub_x) is None:
        raise AssertionError("lattice step along t is not realized")


def _decide_piece(a, rep, ell, j, tau0, k0, gd_gens, nact, pool):
    """Telescoper for the single piece a / sigma_t^ell(rep)^j, or None.

    Returns (op, parts) with apply_op(op, piece) = sum Delta_{x_i}(parts[i]).
    tau0/k0 describe the t-move fixing rep (None when there is none) and
    gd_gens the t-free part of its isotropy lattice."""
    vt = a.vt
    n = vt.n
    t = vt.t_index
    base = rep.shift(_unit_shift(n, t, ell))
    inv = RatFun(Poly.one(vt), base ** j)
    if tau0 is None:
        piece = a * inv
        fd = refine_factors(piece.den, known=[base] + list(pool))
        res = is_summable(piece.num, fd, nactive=nact, known=list(pool))
        if not res.summable:
            return None
        return OreOp.identity(vt), list(res.certificate.parts)

    kappa = tuple(0 if i == t else -c for i, c in enumerate(tau0))
    obasis = _oriented_basis(gd_gens, nact - 1)
    pullbacks = []
    if not obasis:
        op0 = annihilator(a, tau0)
        if op0 is None:
            return None
        coeffs = op0.coeffs
        sstep = op0.step
    else:
        phi = difference_isomorphism([tau0] + list(obasis), "telescoping", vt, nactive=nact)
        atil = phi.apply(a)
        inner_known = [phi.apply(p) for p in pool]
        fd = refine_factors(atil.den, known=inner_known)
        inner = is_telescoperable(atil.num, fd, nactive=len(obasis), known=inner_known)
        if inner is None:
            return None
        hparts = inner.certificate.parts
        assert all(
            hparts[i].is_zero() for i in range(n) if i >= len(obasis)
        ), "certificate touches a variable outside the active range"
        coeffs = tuple((i, _rescale_t(c, k0)) for i, c in inner.L.coeffs)
        sstep = inner.L.step
        for lam in range(len(obasis)):
            if not hparts[lam].is_zero():
                pullbacks.append((obasis[lam], phi.unapply(hparts[lam])))

    parts = [RatFun.zero(vt)] * n
    for m, e in coeffs:
        if m == 0:
            continue
        stride = m * sstep
        v = e * a.shift(tuple(stride * c for c in tau0)) * inv
        kv = tuple(stride * c for c in kappa)
        if any(kv) and not v.is_zero():
            for i, g in enumerate(expand_tau_delta(kv, v)):
                if not g.is_zero():
                    parts[i] = parts[i] + g
    for tvec, b in pullbacks:
        for i, g in enumerate(expand_tau_delta(tvec, b * inv)):
            if not g.is_zero():
                parts[i] = parts[i] + g
    return OreOp.build(coeffs, step=sstep * k0), parts


def _rescale_t(c, k):
    """c(t) -> c(t/k) for a rational function of t alone."""
    if k == 1:
        return c
    return RatFun(_scale_var(c.num, c.vt.t_index, k), _scale_var(c.den, c.vt.t_index, k))


def _scale_var(p, idx, k):
    inv = Fraction(1, k)
    return Poly(p.vt, {e: c * inv ** e[idx] for e, c in p.terms.items()})


def is_telescoperable(num, den, nactive=None, known=()):
    """Decide existence of a telescoper for num/den in sigma_t over
    sigma_{x_1}, ..., sigma_{x_nactive}.

    den must be a FactoredDen whose bases are irreducible, and the
    variable table must designate a parameter variable t beyond the
    active range.  Extra polynomials in `known` help factor denominators
    that appear mid-recursion.

    Returns a TelescoperResult with a monic operator L and a certificate,
    satisfying apply_op(L, f) = sum_i Delta_{x_i}(g_i) exactly, or None
    when no telescoper exists: some stratum piece then violates the
    applicable criterion (non-summability when no t-move fixes its
    denominator, annihilator absence, or a recursive failure)."""
    vt = num.vt
    t = vt.t_index
    if t is None:
        raise ValueError("is_telescoperable needs a designated parameter variable t")
    nact = _active_count(vt, nactive)
    sub_x = tuple(range(nact))
    f0, comps = orbital_decompose(num, den, subgroup=sub_x + (t,), t_axis=t)

    n = vt.n
    base_parts = [RatFun.zero(vt) for _ in range(n)]
    anti = poly_antidifference(f0)
    if not anti.is_zero():
        base_parts[vt.main_index] = base_parts[vt.main_index] + anti.to_ratfun()
    x1free = [b for b, _ in den.factors if b.degree_in(vt.main_index) == 0]

    pieces = []
    for comp in comps:
        rep = comp.orbit.representative
        lattice = isotropy_basis(rep, subgroup=sub_x + (t,))
        gens = [v for v in lattice.generators if any(v)]
        if gens:
            tau0, k0, gd_gens = axis_split(gens, t)
        else:
            tau0, k0, gd_gens = None, None, ()
        if tau0 is not None:
            _t_strata_check(rep, k0, sub_x)
        cparts, slots = collapse_slots(comp, tau0, k0)
        for i in range(n):
            if not cparts[i].is_zero():
                base_parts[i] = base_parts[i] + cparts[i]
        pool = dict.fromkeys(list(known) + x1free)
        for tau, _ in comp.terms:
            if any(tau):
                neg = tuple(-c for c in tau)
                for b in x1free:
                    pool[b.shift(neg)] = None
        for ell in sorted(slots):
            a = slots[ell]
            if a.is_zero():
                continue
            piece = _decide_piece(a, rep, ell, comp.j, tau0, k0, gd_gens, nact, pool)
            if piece is None:
                return None
            pieces.append(piece)

    if pieces:
        op, cofactors = lclm([p[0] for p in pieces])
    else:
        op, cofactors = OreOp.identity(vt), []
    parts = [apply_op(op, g) for g in base_parts]
    for (_, pparts), r in zip(pieces, cofactors):
        for i in range(n):
            if not pparts[i].is_zero():
                parts[i] = parts[i] + apply_op(r, pparts[i])
    assert all(
        parts[i].is_zero() for i in range(n) if i >= nact
    ), "certificate touches a variable outside the active range"
    return TelescoperResult(op, Certificate(tuple(parts)))
