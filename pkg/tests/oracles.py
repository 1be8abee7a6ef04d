"""Shared reference oracles and random generators for the test suite.

Where it matters, results are cross-checked against sympy as a second,
independent implementation of the same algebra.
"""

from fractions import Fraction

import sympy
from hypothesis import strategies as st

from shiftsum.parser import expr_to_poly, parse
from shiftsum.polyarith import Poly, VarTable


def P(src: str, vt: VarTable) -> Poly:
    """Parse a polynomial from source text over the given table."""
    return expr_to_poly(parse(src, vt.names), vt)


def to_sympy(p: Poly):
    syms = [sympy.Symbol(nm) for nm in p.vt.names]
    total = sympy.Integer(0)
    for e, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, k in zip(syms, e):
            if k:
                term *= s ** k
        total += term
    return sympy.expand(total)


def ratfun_to_sympy(f):
    return to_sympy(f.num) / to_sympy(f.den)


def random_exps(rng, n, deg):
    while True:
        e = tuple(rng.randrange(deg + 1) for _ in range(n))
        if sum(e) <= deg:
            return e


def random_poly(rng, vt, terms=5, deg=4, bound=9, allow_zero=True):
    lo = 0 if allow_zero else 1
    count = rng.randrange(lo, terms + 1)
    out = {}
    for _ in range(count):
        e = random_exps(rng, vt.n, deg)
        c = Fraction(rng.randrange(-bound, bound + 1), rng.randrange(1, 4))
        if c:
            out[e] = c
    p = Poly(vt, out)
    if not allow_zero and p.is_zero():
        return random_poly(rng, vt, terms, deg, bound, allow_zero)
    return p


def poly_st(vt, max_deg=4, max_terms=5):
    exp = st.tuples(*(st.integers(0, max_deg) for _ in vt.names)).filter(
        lambda e: sum(e) <= max_deg
    )
    coeff = st.fractions(min_value=-9, max_value=9, max_denominator=3).filter(bool)
    return st.lists(st.tuples(exp, coeff), max_size=max_terms).map(
        lambda items: Poly(vt, dict(items))
    )


def vector_st(n, lo=-4, hi=4):
    return st.tuples(*(st.integers(lo, hi) for _ in range(n)))


def fraction_vector_st(n, bound=4):
    coord = st.fractions(min_value=-bound, max_value=bound, max_denominator=3)
    return st.tuples(*(coord for _ in range(n)))
