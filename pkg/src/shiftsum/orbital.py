"""Orbit decomposition of rational functions along shift-equivalent
denominator factors.

A rational function f = num / (unit * prod_i base_i^mult_i) is rewritten,
with respect to the main variable, as

    f = f0 + sum over (orbit class, power j) of sum_tau a_tau / tau(rep)^j

where f0 is polynomial in the main variable, rep is the chosen
representative of a class of shift-equivalent factors, tau ranges over the
shifts mapping rep onto the members, and each a_tau has main-variable
degree below deg(rep).  All arithmetic is exact over the rationals; the
decomposition re-sums to f and the constructor verifies that identity
before returning.
"""

from dataclasses import dataclass
from fractions import Fraction
import math
import random
import warnings

from .groups import g_equivalent
from .polyarith import (
    FactoredDen,
    Poly,
    RatFun,
    divexact,
    make_primitive,
    poly_gcd,
)


# ----------------------------------------------------------------------
# univariate view: polynomials in the main variable over the field of
# rational functions in the remaining variables


class UPoly:
    """Polynomial in the main variable; coefficients are rational functions
    free of the main variable, held over the full variable table."""

    __slots__ = ("vt", "coeffs")

    def __init__(self, vt, coeffs):
        self.vt = vt
        clean = {}
        for k, c in coeffs.items():
            if k < 0:
                raise ValueError("negative degree")
            if not c.is_zero():
                clean[k] = c
        self.coeffs = clean

    @classmethod
    def zero(cls, vt):
        return cls(vt, {})

    @classmethod
    def from_poly(cls, p):
        m = p.vt.main_index
        buckets = {}
        for e, c in p.terms.items():
            red = list(e)
            k = red[m]
            red[m] = 0
            buckets.setdefault(k, {})[tuple(red)] = c
        return cls(p.vt, {k: RatFun.from_poly(Poly(p.vt, t)) for k, t in buckets.items()})

    @classmethod
    def from_ratfun(cls, f):
        m = f.vt.main_index
        if f.den.degree_in(m) > 0:
            raise ValueError("denominator is not free of the main variable")
        den = RatFun.from_poly(f.den)
        num = cls.from_poly(f.num)
        return cls(f.vt, {k: c / den for k, c in num.coeffs.items()})

    def is_zero(self):
        return not self.coeffs

    def degree(self):
        return max(self.coeffs) if self.coeffs else -1

    def lc(self):
        return self.coeffs[self.degree()]

    def coeff(self, k):
        return self.coeffs.get(k, RatFun.zero(self.vt))

    def __eq__(self, other):
        return isinstance(other, UPoly) and self.vt == other.vt and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.vt, frozenset(self.coeffs.items())))

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            s = out.get(k, RatFun.zero(self.vt)) + c
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return UPoly(self.vt, out)

    def __neg__(self):
        return UPoly(self.vt, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                k = k1 + k2
                s = out.get(k, RatFun.zero(self.vt)) + c1 * c2
                if s.is_zero():
                    out.pop(k, None)
                else:
                    out[k] = s
        return UPoly(self.vt, out)

    def scale(self, c):
        """Multiply by a main-variable-free rational function or scalar."""
        if not isinstance(c, RatFun):
            c = RatFun.const(self.vt, c)
        if c.is_zero():
            return UPoly.zero(self.vt)
        return UPoly(self.vt, {k: v * c for k, v in self.coeffs.items()})

    def divmod_(self, other):
        """Exact long division: self = q * other + r with deg r < deg other."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        db = other.degree()
        inv = RatFun.one(self.vt) / other.lc()
        q = {}
        rem = dict(self.coeffs)
        while rem and max(rem) >= db:
            dk = max(rem)
            c = rem[dk] * inv
            q[dk - db] = c
            for k2, c2 in other.coeffs.items():
                t = dk - db + k2
                s = rem.get(t, RatFun.zero(self.vt)) - c * c2
                if s.is_zero():
                    rem.pop(t, None)
                else:
                    rem[t] = s
        return UPoly(self.vt, q), UPoly(self.vt, rem)

    def to_ratfun(self):
        total = RatFun.zero(self.vt)
        m = self.vt.main_index
        for k, c in self.coeffs.items():
            e = [0] * self.vt.n
            e[m] = k
            total = total + c * RatFun.from_poly(Poly.monomial(self.vt, e))
        return total

    def __str__(self):
        if not self.coeffs:
            return "0"
        name = self.vt.names[self.vt.main_index]
        bits = []
        for k in sorted(self.coeffs, reverse=True):
            bits.append(f"({self.coeffs[k]})*{name}^{k}")
        return " + ".join(bits)

    def __repr__(self):
        return f"UPoly({self})"


def _upow(f, e):
    out = UPoly(f.vt, {0: RatFun.one(f.vt)})
    for _ in range(e):
        out = out * f
    return out


def _uxgcd(a, b):
    """Extended Euclid over the coefficient field: g, s, t with s*a + t*b = g,
    g monic (or zero)."""
    vt = a.vt
    r0, r1 = a, b
    s0, s1 = UPoly(vt, {0: RatFun.one(vt)}), UPoly.zero(vt)
    t0, t1 = UPoly.zero(vt), UPoly(vt, {0: RatFun.one(vt)})
    while not r1.is_zero():
        q, r = r0.divmod_(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = RatFun.one(vt) / r0.lc()
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


# ----------------------------------------------------------------------
# partial fractions


def _pf_split(num, factors):
    """Split num / prod(f_i^{e_i}) into a polynomial part plus one proper
    residue per factor: returns (poly_part, [r_i]) with deg r_i < e_i*deg f_i
    and num/prod = poly_part + sum r_i / f_i^{e_i}.  Raises ValueError if the
    factors are not pairwise coprime."""
    if not factors:
        return num, []
    f0, e0 = factors[0]
    big0 = _upow(f0, e0)
    if len(factors) == 1:
        q, r = num.divmod_(big0)
        return q, [r]
    rest = factors[1:]
    bigr = UPoly(num.vt, {0: RatFun.one(num.vt)})
    for f, e in rest:
        bigr = bigr * _upow(f, e)
    g, s, t = _uxgcd(big0, bigr)
    if g.degree() != 0:
        raise ValueError("denominator factors are not pairwise coprime")
    # s*big0 + t*bigr = 1, so num/(big0*bigr) = num*t/big0 + num*s/bigr
    qa, ra = (num * t).divmod_(big0)
    qb, rb = (num * s).divmod_(bigr)
    poly_rest, residues = _pf_split(rb, rest)
    return qa + qb + poly_rest, [ra] + residues


def _adic_terms(a, f, e):
    """f-adic expansion of a/f^e (deg a < e*deg f): list of (j, d) with
    a/f^e = sum d/f^j, 1 <= j <= e, deg d < deg f."""
    digits = []
    cur = a
    while not cur.is_zero():
        cur, r = cur.divmod_(f)
        digits.append(r)
    out = []
    for idx, d in enumerate(digits):
        if d.is_zero():
            continue
        j = e - idx
        if j < 1:
            raise ValueError("numerator degree too large for adic expansion")
        out.append((j, d))
    out.sort(key=lambda jd: -jd[0])
    return out


# ----------------------------------------------------------------------
# orbit classification


@dataclass(frozen=True)
class OrbitClass:
    """A set of shift-equivalent denominator factors.

    members holds (tau, mult) pairs with representative.shift(tau) equal to
    the stored member factor, exactly."""

    representative: Poly
    members: tuple


@dataclass(frozen=True)
class OrbitalComponent:
    """All terms of one orbit class at one denominator power j."""

    orbit: OrbitClass
    j: int
    terms: tuple  # ((tau, numerator RatFun), ...)

    def value(self):
        rep = self.orbit.representative
        vt = rep.vt
        total = RatFun.zero(vt)
        for tau, a in self.terms:
            total = total + a / RatFun.from_poly(rep.shift(tau) ** self.j)
        return total


def classify_factors(den, subgroup=None, t_axis=None):
    """Group the factors of a FactoredDen into shift-orbit classes under the
    given subgroup of shift directions (None = all variables).

    The representative of a class is the member with the fewest terms,
    first-seen on ties.  When t_axis is given, candidates are first
    restricted to members at the minimal shift along that axis, so every
    member sits at a nonnegative t-shift of the representative.  Every
    factor must involve the main variable."""
    main = None
    entries = []
    for base, mult in den.factors:
        main = base.vt.main_index
        if base.degree_in(main) <= 0:
            raise ValueError("factor free of the main variable cannot be classified")
        entries.append((base, mult))
    groups = []  # [anchor, [(tau_from_anchor, base, mult), ...]]
    for base, mult in entries:
        for grp in groups:
            tau = g_equivalent(grp[0], base, subgroup)
            if tau is not None:
                grp[1].append((tau, base, mult))
                break
        else:
            zero = (0,) * base.vt.n
            groups.append([base, [(zero, base, mult)]])
    classes = []
    for anchor, members in groups:
        if t_axis is not None:
            tmin = min(tau[t_axis] for tau, _, _ in members)
            candidates = [m for m in members if m[0][t_axis] == tmin]
        else:
            candidates = members
        rep_tau, rep_base, _ = min(
            candidates, key=lambda m: (len(m[1].terms), members.index(m))
        )
        rel_members = []
        for tau, base, mult in members:
            rel = tuple(u - v for u, v in zip(tau, rep_tau))
            if rep_base.shift(rel) != base:
                raise AssertionError("orbit member does not match its shift")
            rel_members.append((rel, mult))
        classes.append(OrbitClass(rep_base, tuple(rel_members)))
    return classes


# ----------------------------------------------------------------------
# the decomposition


def orbital_decompose(num, den, subgroup=None, t_axis=None):
    """Decompose num/den (den a FactoredDen) with respect to the main
    variable and the shift subgroup.

    Returns (f0, components): f0 is a UPoly (the part polynomial in the
    main variable, with coefficients rational in the others), components a
    list of OrbitalComponent.  Factors free of the main variable are units
    of the coefficient field and fold into the numerators.  The result is
    verified by re-summation; a mismatch raises ValueError, which signals
    an incorrect factorization of the denominator."""
    vt = num.vt
    main = vt.main_index
    unit = RatFun.const(vt, den.unit)
    proper = []
    for base, mult in den.factors:
        if base.vt != vt:
            raise ValueError("variable table mismatch")
        if base.degree_in(main) <= 0:
            unit = unit * RatFun.from_poly(base) ** mult
        else:
            proper.append((base, mult))
    numer = UPoly.from_poly(num).scale(RatFun.one(vt) / unit)
    ufactors = [(UPoly.from_poly(base), mult) for base, mult in proper]
    f0, residues = _pf_split(numer, ufactors)

    classes = classify_factors(
        FactoredDen(Fraction(1), tuple(proper)), subgroup, t_axis
    )
    locate = {}
    for cls_ in classes:
        for tau, mult in cls_.members:
            locate[cls_.representative.shift(tau)] = (cls_, tau)

    bucket = {}
    for (base, mult), residue in zip(proper, residues):
        cls_, tau = locate[base]
        for j, d in _adic_terms(residue, UPoly.from_poly(base), mult):
            bucket.setdefault((cls_, j), []).append((tau, d.to_ratfun()))

    components = []
    for cls_ in classes:
        js = sorted((j for kc, j in bucket if kc == cls_), reverse=True)
        for j in js:
            terms = sorted(bucket[(cls_, j)], key=lambda td: td[0])
            components.append(OrbitalComponent(cls_, j, tuple(terms)))

    total = f0.to_ratfun()
    for comp in components:
        total = total + comp.value()
    target = RatFun(num, den.value(vt))
    if total != target:
        raise ValueError(
            "decomposition failed to re-sum; the denominator factorization "
            "is inconsistent"
        )
    return f0, components


# ----------------------------------------------------------------------
# refining denominators that show up mid-recursion


def _content_in(p, v):
    """Gcd of the coefficients of p as a polynomial in variable v."""
    g = None
    for k in range(p.degree_in(v) + 1):
        c = p.coeff_of(v, k)
        if c.is_zero():
            continue
        g = c if g is None else poly_gcd(g, c)
        if g.is_constant():
            return Poly.one(p.vt)
    return g if g is not None else Poly.one(p.vt)


def _squarefree_split(p):
    """Peel squarefree layers off p: repeatedly emit p / gcd(p, dp/dv) and
    continue on the gcd, recursing on variable-free content.  Returns
    [(factor, 1)] entries whose product is p up to a rational unit; a factor
    of multiplicity m in p shows up in m overlapping entries, which the
    pairwise-gcd refinement afterwards consolidates."""
    out = []
    _, p = make_primitive(p)
    while not p.is_constant():
        stripped = False
        for v in sorted(p.vars_present()):
            cont = _content_in(p, v)
            if not cont.is_constant():
                out.extend(_squarefree_split(cont))
                p = divexact(p, cont)
                _, p = make_primitive(p)
                stripped = True
                break
        if stripped:
            continue
        v = max(p.vars_present(), key=lambda i: p.degree_in(i))
        g = poly_gcd(p, p.partial(v))
        _, g = make_primitive(g)
        if g.is_constant():
            out.append((p, 1))
            break
        w = divexact(p, g)
        _, w = make_primitive(w)
        out.append((w, 1))
        p = g
    return out


def _gcd_free(pairs):
    """Refine a list of (base, mult) pairs until the bases are pairwise
    coprime, preserving the product."""
    work = dict()
    for f, m in pairs:
        work[f] = work.get(f, 0) + m
    changed = True
    while changed:
        changed = False
        bases = list(work)
        for i in range(len(bases)):
            for k in range(i + 1, len(bases)):
                a, b = bases[i], bases[k]
                if a not in work or b not in work:
                    continue
                g = poly_gcd(a, b)
                if g.is_constant():
                    continue
                _, g = make_primitive(g)
                ma, mb = work.pop(a), work.pop(b)
                qa, qb = divexact(a, g), divexact(b, g)
                for piece, m in ((g, ma + mb), (qa, ma), (qb, mb)):
                    _, piece = make_primitive(piece)
                    if not piece.is_constant():
                        work[piece] = work.get(piece, 0) + m
                changed = True
                break
            if changed:
                break
    return sorted(work.items(), key=lambda kv: (kv[0].total_degree(), str(kv[0])))


def refine_factors(d, known=()):
    """Write d as unit * prod(base^mult), preferring bases from `known`.

    Known bases are divided out exactly as often as possible; whatever is
    left is split by squarefree decomposition and pairwise-gcd refinement.
    Fresh bases get a heuristic irreducibility check that can only warn.
    Returns a FactoredDen over d.vt."""
    vt = d.vt
    if d.is_zero():
        raise ValueError("zero denominator")
    unit, rem = make_primitive(d)
    pairs = []
    pool = []
    seen = set()
    for k in known:
        _, kp = make_primitive(k)
        if kp.is_constant() or kp in seen:
            continue
        seen.add(kp)
        pool.append(kp)
    for kp in pool:
        mult = 0
        while True:
            try:
                q = divexact(rem, kp)
            except ValueError:
                break
            rem = q
            mult += 1
        if mult:
            pairs.append((kp, mult))
    c, rem = make_primitive(rem)
    unit *= c
    if not rem.is_constant():
        fresh = _gcd_free(_squarefree_split(rem))
        for base, _ in fresh:
            _warn_unless_plausibly_irreducible(base)
        pairs.extend(fresh)
    return FactoredDen.build(vt, unit, pairs)


# ----------------------------------------------------------------------
# heuristic irreducibility screen (warnings only)


def _frac_gcd_poly(a, b):
    """Euclidean gcd of dense univariate Fraction coefficient lists."""
    a = list(a)
    b = list(b)

    def deg(u):
        while u and u[-1] == 0:
            u.pop()
        return len(u) - 1

    da, db = deg(a), deg(b)
    while db >= 0:
        while deg(a) >= db >= 0:
            da = deg(a)
            lead = a[da] / b[db]
            for i in range(db + 1):
                a[da - db + i] -= lead * b[i]
        a, b = b, a
        db = deg(b)
    return a


def _divisors_capped(n, cap=64):
    n = abs(n)
    if n == 0:
        return []
    out = []
    i = 1
    while i * i <= n and len(out) < cap:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return sorted(out)[:cap]


def _warn_unless_plausibly_irreducible(base):
    """Specialize all but the main variable at a few integer points and look
    for evidence of reducibility: a square factor, or a rational root of an
    image of degree at least 2.  Emits a warning; never raises."""
    vt = base.vt
    main = vt.main_index
    d = base.degree_in(main)
    if d <= 1:
        return
    rng = random.Random(20260822)
    for _ in range(3):
        point = [Fraction(rng.randrange(-25, 26)) for _ in range(vt.n)]
        point[main] = Fraction(0)
        coeffs = []
        for k in range(d + 1):
            coeffs.append(base.coeff_of(main, k).eval_at(point))
        if coeffs[-1] == 0:
            continue
        deriv = [coeffs[k] * k for k in range(1, d + 1)]
        g = _frac_gcd_poly(coeffs, deriv)
        while g and g[-1] == 0:
            g.pop()
        if len(g) - 1 > 0:
            warnings.warn(
                f"denominator factor {base} may be reducible "
                "(square factor in a specialization)",
                stacklevel=2,
            )
            return
        # integer-root screen on the cleared-denominator image
        lcm = 1
        for c in coeffs:
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        ints = [int(c * lcm) for c in coeffs]
        lo = next(i for i, c in enumerate(ints) if c != 0)
        trailing = ints[lo]
        leading = ints[-1]
        found = lo > 0
        if not found:
            for pnum in _divisors_capped(trailing):
                for pden in _divisors_capped(leading):
                    for sgn in (1, -1):
                        r = Fraction(sgn * pnum, pden)
                        val = Fraction(0)
                        for c in reversed(ints):
                            val = val * r + c
                        if val == 0:
                            found = True
                            break
                    if found:
                        break
                if found:
                    break
        if found and d >= 2:
            warnings.warn(
                f"denominator factor {base} may be reducible "
                "(rational root in a specialization)",
                stacklevel=2,
            )
            return
