"""Sparse multivariate polynomials and rational functions over the rationals.

All coefficients are exact fractions.Fraction values.  A polynomial is a
sparse map from exponent tuples to nonzero coefficients, tied to a VarTable
fixing the variable names and their order.  The monomial order used
everywhere is graded lexicographic: total degree first, ties broken by the
exponent tuple with earlier variables weighing more.

Rational functions are kept fully reduced with a canonical denominator
(integer coefficients, content one, positive leading coefficient), so equal
values always have identical representations.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction

Rat = Fraction

SHIFT_PREFIX = "@"


def _rat(value) -> Fraction:
    """Coerce an int or Fraction to Fraction; reject inexact types loudly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact number, got {type(value).__name__}")


def grlex_key(exps):
    """Sort key realizing the graded lexicographic order."""
    return (sum(exps), exps)


def _int_fraction(v: int) -> Fraction:
    """Fraction with denominator one, skipping gcd normalization."""
    f = Fraction.__new__(Fraction)
    f._numerator = v
    f._denominator = 1
    return f


def _heap_key(exps):
    """Min-heap key that pops exponents in descending grlex order."""
    return (-sum(exps), tuple(-k for k in exps))


@dataclass(frozen=True)
class VarTable:
    """Ordered variable names, optionally designating a parameter variable t
    (never the main variable) and the main variable used for partial
    fraction work."""

    names: tuple[str, ...]
    t_index: int | None = None
    main_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if not self.names:
            raise ValueError("a variable table needs at least one name")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        if not 0 <= self.main_index < len(self.names):
            raise ValueError("main variable index out of range")
        if self.t_index is not None:
            if not 0 <= self.t_index < len(self.names):
                raise ValueError("t index out of range")
            if self.t_index == self.main_index:
                raise ValueError("t cannot be the main variable")

    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def x_indices(self) -> tuple[int, ...]:
        """Indices of all non-t variables, in table order."""
        return tuple(i for i in range(self.n) if i != self.t_index)


class Poly:
    """Sparse polynomial with Fraction coefficients over a fixed VarTable."""

    __slots__ = ("vt", "terms")

    def __init__(self, vt: VarTable, terms):
        self.vt = vt
        self.terms = {e: c for e, c in terms.items() if c}

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zero(cls, vt: VarTable) -> "Poly":
        return cls(vt, {})

    @classmethod
    def const(cls, vt: VarTable, c) -> "Poly":
        c = _rat(c)
        return cls(vt, {(0,) * vt.n: c} if c else {})

    @classmethod
    def one(cls, vt: VarTable) -> "Poly":
        return cls.const(vt, 1)

    @classmethod
    def var(cls, vt: VarTable, i: int) -> "Poly":
        e = [0] * vt.n
        e[i] = 1
        return cls(vt, {tuple(e): Fraction(1)})

    @classmethod
    def variable(cls, vt: VarTable, name: str) -> "Poly":
        return cls.var(vt, vt.index(name))

    @classmethod
    def monomial(cls, vt: VarTable, exps, c=1) -> "Poly":
        exps = tuple(exps)
        if len(exps) != vt.n or any(k < 0 for k in exps):
            raise ValueError("bad exponent tuple")
        c = _rat(c)
        return cls(vt, {exps: c} if c else {})

    # ------------------------------------------------------------------
    # basic queries

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant(self) -> Fraction:
        """Coefficient of the constant monomial."""
        return self.terms.get((0,) * self.vt.n, Fraction(0))

    def coeff(self, exps) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, v: int) -> int:
        """Degree in variable v; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(e[v] for e in self.terms)

    def vars_present(self) -> set:
        """Indices of variables occurring with positive exponent."""
        out = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    out.add(i)
        return out

    def leading(self):
        """Grlex-leading (exponents, coefficient); raises on zero."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def terms_sorted(self):
        """Terms as (exponents, coefficient) pairs, grlex descending."""
        return [(e, self.terms[e]) for e in sorted(self.terms, key=grlex_key, reverse=True)]

    def coeff_of(self, v: int, k: int) -> "Poly":
        """Coefficient of x_v^k as a polynomial with the v slot zeroed."""
        out = {}
        for e, c in self.terms.items():
            if e[v] == k:
                out[e[:v] + (0,) + e[v + 1:]] = c
        return Poly(self.vt, out)

    # ------------------------------------------------------------------
    # arithmetic

    def _check(self, other: "Poly"):
        if self.vt != other.vt:
            raise ValueError("variable table mismatch")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.vt, other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Poly(self.vt, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.vt, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.vt, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _rat(other)
            if not c:
                return Poly.zero(self.vt)
            return Poly(self.vt, {e: cc * c for e, cc in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        if all(c.denominator == 1 for c in self.terms.values()) and all(
            c.denominator == 1 for c in other.terms.values()
        ):
            # integer coefficients: convolve with plain ints
            left = [(e, c.numerator) for e, c in self.terms.items()]
            right = [(e, c.numerator) for e, c in other.terms.items()]
            acc = {}
            for e1, c1 in left:
                for e2, c2 in right:
                    e = tuple(a + b for a, b in zip(e1, e2))
                    acc[e] = acc.get(e, 0) + c1 * c2
            return Poly(self.vt, {e: _int_fraction(v) for e, v in acc.items() if v})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Poly(self.vt, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Poly.one(self.vt)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.vt == other.vt and self.terms == other.terms

    def __hash__(self):
        return hash((self.vt, frozenset(self.terms.items())))

    # ------------------------------------------------------------------
    # calculus and substitution

    def partial(self, v: int) -> "Poly":
        """Partial derivative with respect to variable v."""
        out = {}
        for e, c in self.terms.items():
            k = e[v]
            if k:
                ne = e[:v] + (k - 1,) + e[v + 1:]
                out[ne] = out.get(ne, Fraction(0)) + c * k
        return Poly(self.vt, out)

    def shift(self, a) -> "Poly":
        """Evaluate at (x_1 + a_1, ..., x_n + a_n) for exact numbers a_i."""
        avec = [_rat(c) for c in a]
        if len(avec) != self.vt.n:
            raise ValueError("shift vector length mismatch")
        terms = self.terms
        for i, ai in enumerate(avec):
            if not ai:
                continue
            new = {}
            for e, c in terms.items():
                k = e[i]
                if k == 0:
                    new[e] = new.get(e, Fraction(0)) + c
                    continue
                for j in range(k + 1):
                    ne = e[:i] + (j,) + e[i + 1:]
                    add = c * math.comb(k, j) * ai ** (k - j)
                    new[ne] = new.get(ne, Fraction(0)) + add
            terms = {e: c for e, c in new.items() if c}
        return Poly(self.vt, dict(terms))

    def substitute(self, target_vt: VarTable, images) -> "Poly":
        """Replace each variable by its image polynomial over target_vt."""
        images = list(images)
        if len(images) != self.vt.n:
            raise ValueError("one image per variable is required")
        for im in images:
            if not isinstance(im, Poly) or im.vt != target_vt:
                raise ValueError("images must be polynomials over the target table")
        powers = [{0: Poly.one(target_vt)} for _ in range(self.vt.n)]

        def power(i, k):
            d = powers[i]
            if k not in d:
                m = max(kk for kk in d if kk <= k)
                p = d[m]
                while m < k:
                    p = p * images[i]
                    m += 1
                    d[m] = p
            return d[k]

        acc = {}
        for e, c in self.terms.items():
            term = Poly.const(target_vt, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            for te, tc in term.terms.items():
                acc[te] = acc.get(te, Fraction(0)) + tc
        return Poly(target_vt, acc)

    def eval_at(self, point) -> Fraction:
        """Evaluate at a tuple of exact numbers."""
        pvec = [_rat(c) for c in point]
        if len(pvec) != self.vt.n:
            raise ValueError("point length mismatch")
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for i, k in enumerate(e):
                if k:
                    v *= pvec[i] ** k
            total += v
        return total

    def homogeneous_parts(self) -> dict:
        """Split into homogeneous parts, keyed by total degree."""
        parts: dict[int, dict] = {}
        for e, c in self.terms.items():
            parts.setdefault(sum(e), {})[e] = c
        return {d: Poly(self.vt, t) for d, t in sorted(parts.items())}

    def linearize(self, s) -> "Poly":
        """Keep the degree 0 and 1 parts; evaluate every homogeneous part of
        degree at least 2 at the point s and fold it into the constant."""
        svec = [_rat(c) for c in s]
        if len(svec) != self.vt.n:
            raise ValueError("point length mismatch")
        out = {}
        extra = Fraction(0)
        for e, c in self.terms.items():
            if sum(e) <= 1:
                out[e] = out.get(e, Fraction(0)) + c
            else:
                v = c
                for i, k in enumerate(e):
                    if k:
                        v *= svec[i] ** k
                extra += v
        if extra:
            z = (0,) * self.vt.n
            out[z] = out.get(z, Fraction(0)) + extra
        return Poly(self.vt, out)

    # ------------------------------------------------------------------
    # printing

    def __str__(self):
        if not self.terms:
            return "0"
        chunks = []
        for e, c in self.terms_sorted():
            factors = []
            for i, k in enumerate(e):
                if k == 1:
                    factors.append(self.vt.names[i])
                elif k > 1:
                    factors.append(f"{self.vt.names[i]}^{k}")
            mono = "*".join(factors)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            sign = "-" if c < 0 else "+"
            chunks.append((sign, body))
        first_sign, first_body = chunks[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in chunks[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"Poly({self})"


# ----------------------------------------------------------------------
# content, exact division, gcd


def content(p: Poly) -> Fraction:
    """Rational content carrying the sign of the grlex-leading coefficient;
    p = content(p) * primitive part.  content(0) = 0."""
    if p.is_zero():
        return Fraction(0)
    num = 0
    den = 1
    for c in p.terms.values():
        num = math.gcd(num, abs(c.numerator))
        den = math.lcm(den, c.denominator)
    c = Fraction(num, den)
    if p.leading()[1] < 0:
        c = -c
    return c


def make_primitive(p: Poly):
    """Write p = c * q with q an integer polynomial of content one and a
    positive grlex-leading coefficient.  Returns (c, q); (0, 0) for zero."""
    if p.is_zero():
        return Fraction(0), p
    c = content(p)
    q = Poly(p.vt, {e: cc / c for e, cc in p.terms.items()})
    return c, q


def _divexact_int(pterms, dterms, dle, dlc):
    """Integer-coefficient exact division of term dicts.  Returns the
    quotient dict, or None when a leading coefficient fails to divide (the
    quotient may still exist with rational coefficients).  Raises ValueError
    when the division is inexact over any coefficient field."""
    rem = dict(pterms)
    rest = [(de, dc) for de, dc in dterms.items() if de != dle]
    heap = [(_heap_key(e), e) for e in rem]
    heapq.heapify(heap)
    quot = {}
    while rem:
        _, e = heapq.heappop(heap)
        if e not in rem:
            continue
        c = rem.pop(e)
        diff = tuple(a - b for a, b in zip(e, dle))
        if any(k < 0 for k in diff):
            raise ValueError("inexact polynomial division")
        if c % dlc:
            return None
        q = c // dlc
        quot[diff] = q
        for de, dc in rest:
            ne = tuple(a + b for a, b in zip(diff, de))
            if ne in rem:
                nv = rem[ne] - q * dc
                if nv:
                    rem[ne] = nv
                else:
                    del rem[ne]
            else:
                rem[ne] = -q * dc
                heapq.heappush(heap, (_heap_key(ne), ne))
    return quot


def divexact(p: Poly, d: Poly) -> Poly:
    """Exact polynomial division; raises ValueError when not divisible."""
    if p.vt != d.vt:
        raise ValueError("variable table mismatch")
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero():
        return Poly.zero(p.vt)
    dle, dlc = d.leading()
    if (
        dlc.denominator == 1
        and all(c.denominator == 1 for c in p.terms.values())
        and all(c.denominator == 1 for c in d.terms.values())
    ):
        got = _divexact_int(
            {e: c.numerator for e, c in p.terms.items()},
            {e: c.numerator for e, c in d.terms.items()},
            dle,
            dlc.numerator,
        )
        if got is not None:
            return Poly(p.vt, {e: _int_fraction(v) for e, v in got.items()})
    quot: dict = {}
    rem = dict(p.terms)
    rest = [(de, dc) for de, dc in d.terms.items() if de != dle]
    heap = [(_heap_key(e), e) for e in rem]
    heapq.heapify(heap)
    while rem:
        _, e = heapq.heappop(heap)
        if e not in rem:
            continue
        c = rem.pop(e)
        diff = tuple(a - b for a, b in zip(e, dle))
        if any(k < 0 for k in diff):
            raise ValueError("inexact polynomial division")
        q = c / dlc
        quot[diff] = q
        for de, dc in rest:
            ne = tuple(a + b for a, b in zip(diff, de))
            if ne in rem:
                nv = rem[ne] - q * dc
                if nv:
                    rem[ne] = nv
                else:
                    del rem[ne]
            else:
                rem[ne] = -q * dc
                heapq.heappush(heap, (_heap_key(ne), ne))
    return Poly(p.vt, quot)


def _prem(a: Poly, b: Poly, v: int) -> Poly:
    """Pseudo-remainder of a by b in variable v: lc(b)^(da-db+1) * a mod b."""
    da = a.degree_in(v)
    db = b.degree_in(v)
    if db < 0:
        raise ZeroDivisionError("pseudo-division by zero")
    lb = b.coeff_of(v, db)
    r = a
    steps = 0
    while not r.is_zero() and r.degree_in(v) >= db:
        dr = r.degree_in(v)
        lr = r.coeff_of(v, dr)
        shift_mono = Poly.monomial(a.vt, tuple(dr - db if i == v else 0 for i in range(a.vt.n)))
        r = lb * r - lr * shift_mono * b
        steps += 1
    need = da - db + 1
    if steps < need:
        r = lb ** (need - steps) * r
    return r


def _content_in_var(p: Poly, v: int) -> Poly:
    """Gcd of the coefficients of p viewed as a polynomial in v; the result
    is free of v, primitive, with positive leading coefficient."""
    slices = {}
    for e, c in p.terms.items():
        k = e[v]
        slices.setdefault(k, {})[e[:v] + (0,) + e[v + 1:]] = c
    g = None
    for k in sorted(slices):
        q = make_primitive(Poly(p.vt, slices[k]))[1]
        g = q if g is None else _gcd_prim(g, q)
        if g.is_constant():
            return Poly.one(p.vt)
    return g


def _grlex_max(terms):
    return max(terms, key=lambda e: (sum(e), e))


def _int_divexact_terms(num, den):
    """Exact division of integer-coefficient term dicts, or None.  Used only
    to certify heuristic gcd candidates; a None answer is never wrong, it
    just sends the caller to the slow path."""
    gl = _grlex_max(den)
    try:
        return _divexact_int(num, den, gl, den[gl])
    except ValueError:
        return None


def _heu_eval(terms, v, xi):
    """Evaluate an integer term dict at variable v = xi."""
    out = {}
    for e, c in terms.items():
        e2 = e[:v] + (0,) + e[v + 1:]
        out[e2] = out.get(e2, 0) + c * xi ** e[v]
    return {e: c for e, c in out.items() if c}


def _heu_lift(gterms, v, xi):
    """Reverse the evaluation: balanced base-xi digits become the
    coefficients of powers of v."""
    out = {}
    cur = dict(gterms)
    k = 0
    while cur:
        if k > 4096:
            return None
        nxt = {}
        for e, c in cur.items():
            r = c % xi
            if r > xi // 2:
                r -= xi
            if r:
                ge = list(e)
                ge[v] = k
                out[tuple(ge)] = r
            q = (c - r) // xi
            if q:
                nxt[e] = q
        cur = nxt
        k += 1
    return out


def _heu_gcd_terms(A, B, tries=6):
    """Heuristic gcd of nonzero integer term dicts, certified by exact
    division before being returned; None when the attempts run out."""
    ca = math.gcd(*(abs(c) for c in A.values()))
    cb = math.gcd(*(abs(c) for c in B.values()))
    A = {e: c // ca for e, c in A.items()}
    B = {e: c // cb for e, c in B.items()}
    gc = math.gcd(ca, cb)
    varsA = {i for e in A for i, k in enumerate(e) if k}
    varsB = {i for e in B for i, k in enumerate(e) if k}
    common = varsA & varsB
    if not common:
        n = len(next(iter(A)))
        return {(0,) * n: gc}
    v = min(common)
    bound = max(max(abs(c) for c in A.values()), max(abs(c) for c in B.values()))
    xi = 2 * bound + 29
    for _ in range(tries):
        ea = _heu_eval(A, v, xi)
        eb = _heu_eval(B, v, xi)
        if ea and eb:
            G = _heu_gcd_terms(ea, eb, tries)
            if G is not None:
                g = _heu_lift(G, v, xi)
                if g:
                    cg = math.gcd(*(abs(c) for c in g.values()))
                    g = {e: c // cg for e, c in g.items()}
                    if g[_grlex_max(g)] < 0:
                        g = {e: -c for e, c in g.items()}
                    if _int_divexact_terms(A, g) is not None and _int_divexact_terms(B, g) is not None:
                        return {e: c * gc for e, c in g.items()}
        xi = xi * 33 // 10 + 27
    return None


def _gcd_prim(a: Poly, b: Poly) -> Poly:
    """Gcd of two nonzero primitive integer polynomials, in the same form."""
    if a.is_constant() or b.is_constant():
        return Poly.one(a.vt)
    common = sorted(a.vars_present() & b.vars_present())
    if not common:
        return Poly.one(a.vt)
    heur = _heu_gcd_terms(
        {e: int(c) for e, c in a.terms.items()},
        {e: int(c) for e, c in b.terms.items()},
    )
    if heur is not None:
        return make_primitive(Poly(a.vt, {e: Fraction(c) for e, c in heur.items()}))[1]
    v = common[0]
    ca = _content_in_var(a, v)
    cb = _content_in_var(b, v)
    A = a if ca.is_constant() else divexact(a, ca)
    B = b if cb.is_constant() else divexact(b, cb)
    if ca.is_constant() or cb.is_constant():
        cg = Poly.one(a.vt)
    else:
        cg = _gcd_prim(ca, cb)
    if A.degree_in(v) < B.degree_in(v):
        A, B = B, A
    g = Poly.one(a.vt)
    h = Poly.one(a.vt)
    while True:
        delta = A.degree_in(v) - B.degree_in(v)
        r = _prem(A, B, v)
        if r.is_zero():
            break
        if r.degree_in(v) == 0:
            B = Poly.one(a.vt)
            break
        A, B = B, divexact(r, g * h ** delta)
        g = A.coeff_of(v, A.degree_in(v))
        if delta >= 1:
            h = divexact(g ** delta, h ** (delta - 1))
    if not B.is_constant():
        cB = _content_in_var(B, v)
        if not cB.is_constant():
            B = divexact(B, cB)
    B = make_primitive(B)[1]
    if not cg.is_constant():
        B = B * cg
    return B


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Greatest common divisor, normalized to a primitive integer polynomial
    with positive grlex-leading coefficient; gcd(p, 0) normalizes p."""
    if p.vt != q.vt:
        raise ValueError("variable table mismatch")
    if p.is_zero():
        return make_primitive(q)[1]
    if q.is_zero():
        return make_primitive(p)[1]
    return _gcd_prim(make_primitive(p)[1], make_primitive(q)[1])


# ----------------------------------------------------------------------
# shift variables and coefficient derivatives


def with_shift_vars(vt: VarTable) -> VarTable:
    """Extend vt with one shift variable per original variable."""
    return VarTable(vt.names + tuple(SHIFT_PREFIX + nm for nm in vt.names))


def shift_var_table(vt: VarTable) -> VarTable:
    """Table holding only the shift variables of vt."""
    return VarTable(tuple(SHIFT_PREFIX + nm for nm in vt.names))


def symbolic_shift(p: Poly) -> Poly:
    """p(x + a) expanded in the table extended with shift variables a."""
    cvt = with_shift_vars(p.vt)
    n = p.vt.n
    images = [Poly.var(cvt, i) + Poly.var(cvt, n + i) for i in range(n)]
    return p.substitute(cvt, images)


def _compositions(total: int, parts: int):
    """All tuples of `parts` nonnegative integers summing to `total`."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def dir_coeff_derivative(p: Poly, alpha, k: int) -> Poly:
    """k-th directional derivative of the alpha coefficient slice of p, in
    the table extended with shift variables: the sum over |beta| = k of
    multinomial(k, beta) * a^beta * d^beta/dx^beta (coeff(alpha+beta) *
    x^(alpha+beta))."""
    alpha = tuple(alpha)
    n = p.vt.n
    if len(alpha) != n or any(j < 0 for j in alpha):
        raise ValueError("bad coefficient index")
    if k < 0:
        raise ValueError("derivative order must be nonnegative")
    cvt = with_shift_vars(p.vt)
    out = {}
    kfact = math.factorial(k)
    for beta in _compositions(k, n):
        c = p.coeff(tuple(x + y for x, y in zip(alpha, beta)))
        if not c:
            continue
        mult = kfact
        fall = 1
        for ai, bi in zip(alpha, beta):
            mult //= math.factorial(bi)
            fall *= math.perm(ai + bi, bi)
        e = alpha + beta
        out[e] = out.get(e, Fraction(0)) + c * mult * fall
    return Poly(cvt, out)


# ----------------------------------------------------------------------
# rational functions


class RatFun:
    """Reduced ratio num/den of polynomials; den is an integer polynomial of
    content one with positive grlex-leading coefficient."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly):
        if num.vt != den.vt:
            raise ValueError("variable table mismatch")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num = num
            self.den = Poly.one(num.vt)
            return
        if den.is_constant():
            c = den.constant()
            self.num = num if c == 1 else num * (1 / c)
            self.den = Poly.one(num.vt)
            return
        g = poly_gcd(num, den)
        if not g.is_constant():
            num = divexact(num, g)
            den = divexact(den, g)
        c, den = make_primitive(den)
        self.num = num * (1 / c)
        self.den = den

    # ------------------------------------------------------------------

    @classmethod
    def from_poly(cls, p: Poly) -> "RatFun":
        return cls(p, Poly.one(p.vt))

    @classmethod
    def zero(cls, vt: VarTable) -> "RatFun":
        return cls.from_poly(Poly.zero(vt))

    @classmethod
    def one(cls, vt: VarTable) -> "RatFun":
        return cls.from_poly(Poly.one(vt))

    @classmethod
    def const(cls, vt: VarTable, c) -> "RatFun":
        return cls.from_poly(Poly.const(vt, c))

    @property
    def vt(self) -> VarTable:
        return self.num.vt

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> Poly:
        """The numerator when the denominator is 1; raises otherwise."""
        if not self.den.is_constant():
            raise ValueError("not a polynomial")
        return self.num * (1 / self.den.constant())

    # ------------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RatFun):
            return other
        if isinstance(other, Poly):
            return RatFun.from_poly(other)
        if isinstance(other, (int, Fraction)):
            return RatFun.const(self.vt, other)
        return None

    @classmethod
    def _reduced(cls, num: Poly, den: Poly) -> "RatFun":
        """Wrap a fraction already known to be in lowest terms; only the
        denominator unit is normalized away."""
        out = cls.__new__(cls)
        if num.is_zero():
            out.num = num
            out.den = Poly.one(num.vt)
            return out
        c, d = make_primitive(den)
        out.num = num if c == 1 else num * (1 / c)
        out.den = d
        return out

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        # classical reduced addition: only small gcds are ever taken
        d = poly_gcd(self.den, other.den)
        if d.is_constant():
            num = self.num * other.den + other.num * self.den
            return RatFun._reduced(num, self.den * other.den)
        t1 = divexact(other.den, d)
        t2 = divexact(self.den, d)
        num = self.num * t1 + other.num * t2
        g = poly_gcd(num, d)
        if g.is_constant():
            return RatFun._reduced(num, t2 * other.den)
        return RatFun._reduced(divexact(num, g), t2 * divexact(other.den, g))

    __radd__ = __add__

    def __neg__(self):
        out = RatFun.__new__(RatFun)
        out.num = -self.num
        out.den = self.den
        return out

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RatFun.zero(self.vt)
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        a1 = self.num if g1.is_constant() else divexact(self.num, g1)
        a2 = other.num if g2.is_constant() else divexact(other.num, g2)
        b1 = self.den if g2.is_constant() else divexact(self.den, g2)
        b2 = other.den if g1.is_constant() else divexact(other.den, g1)
        return RatFun._reduced(a1 * a2, b1 * b2)

    __rmul__ = __mul__

    def _inverse(self) -> "RatFun":
        if self.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFun._reduced(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other._inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise ValueError("exponent must be an integer")
        if k < 0:
            return (self._inverse()) ** (-k)
        return RatFun._reduced(self.num ** k, self.den ** k)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            other = self._coerce(other)
        if not isinstance(other, RatFun):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    # ------------------------------------------------------------------

    def shift(self, a) -> "RatFun":
        """Evaluate at (x_1 + a_1, ..., x_n + a_n).  Integer shifts preserve
        lowest terms and the denominator normalization exactly."""
        if all(Fraction(k).denominator == 1 for k in a):
            out = RatFun.__new__(RatFun)
            out.num = self.num.shift(a)
            out.den = self.den.shift(a)
            return out
        return RatFun(self.num.shift(a), self.den.shift(a))

    def substitute(self, target_vt: VarTable, images) -> "RatFun":
        return RatFun(self.num.substitute(target_vt, images), self.den.substitute(target_vt, images))

    def eval_at(self, point) -> Fraction:
        d = self.den.eval_at(point)
        if not d:
            raise ZeroDivisionError("denominator vanishes at the point")
        return self.num.eval_at(point) / d

    def __str__(self):
        if self.den.is_constant() and self.den.constant() == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatFun({self})"


@dataclass(frozen=True)
class FactoredDen:
    """Denominator kept in product form: unit * prod(base^mult).

    Bases are primitive polynomials (integer content 1, positive leading
    coefficient under the term order), pairwise distinct, each asserted
    irreducible by whoever built the object.  The unit absorbs all
    rational scalars.
    """

    unit: Fraction
    factors: tuple

    @classmethod
    def build(cls, vt, unit, pairs):
        """Normalize bases, fold scalars into the unit, merge duplicates."""
        unit = _rat(unit)
        if unit == 0:
            raise ValueError("denominator unit must be nonzero")
        merged = {}
        for base, mult in pairs:
            if mult <= 0:
                raise ValueError("factor multiplicity must be positive")
            if base.is_zero():
                raise ValueError("zero denominator factor")
            c, prim = make_primitive(base)
            if prim.is_constant():
                unit *= (c * prim.constant()) ** mult
                continue
            unit *= c ** mult
            merged[prim] = merged.get(prim, 0) + mult
        factors = tuple(sorted(merged.items(), key=lambda kv: (kv[0].total_degree(), str(kv[0]))))
        return cls(unit, factors)

    def value(self, vt) -> Poly:
        """Expanded denominator polynomial."""
        out = Poly.const(vt, self.unit)
        for base, mult in self.factors:
            out = out * base ** mult
        return out
