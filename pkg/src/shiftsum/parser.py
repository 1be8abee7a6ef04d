"""Parsing and printing of rational expressions for the command line.

Grammar, loosest to tightest: + and - (left associative), * and /
(left associative), unary minus, ^ with a nonnegative integer exponent
(a chain like 2^3 after ^ folds right associatively into one integer).
Multiplication must be written explicitly and whitespace is ignored.
"""

from __future__ import annotations

from fractions import Fraction

from .polyarith import Poly, VarTable, divexact, make_primitive


class ParseError(ValueError):
    """Syntax or name error with a 1-based position into the source text."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.message = message
        self.pos = pos


class NotPolynomial(ValueError):
    """Raised when an expression required to be polynomial is not."""


def _tokenize(src: str):
    tokens = []
    i = 0
    n = len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            tokens.append(("int", int(src[i:j]), i + 1))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            tokens.append(("name", src[i:j], i + 1))
            i = j
            continue
        if ch in "+-*/^()":
            tokens.append(("op", ch, i + 1))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i + 1)
    tokens.append(("end", "", n + 1))
    return tokens


class _Parser:
    def __init__(self, tokens, names):
        self.tokens = tokens
        self.names = names
        self.k = 0

    def peek(self):
        return self.tokens[self.k]

    def take(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect_op(self, op):
        kind, value, pos = self.take()
        if kind != "op" or value != op:
            raise ParseError(f"expected {op!r}", pos)

    def parse_expr(self):
        node = self.parse_term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.take()
                rhs = self.parse_term()
                node = ("add" if value == "+" else "sub", node, rhs)
            else:
                return node

    def parse_term(self):
        node = self.parse_unary()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "*/":
                self.take()
                rhs = self.parse_unary()
                node = ("mul" if value == "*" else "div", node, rhs)
            else:
                return node

    def parse_unary(self):
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.take()
            return ("neg", self.parse_unary())
        return self.parse_power()

    def parse_power(self):
        node = self.parse_atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.take()
            exps = [self.parse_exponent()]
            while True:
                kind, value, _ = self.peek()
                if kind == "op" and value == "^":
                    self.take()
                    exps.append(self.parse_exponent())
                else:
                    break
            total = exps[-1]
            for e in reversed(exps[:-1]):
                total = e ** total
            return ("pow", node, total)
        return node

    def parse_exponent(self) -> int:
        kind, value, pos = self.take()
        if kind != "int":
            raise ParseError("nonnegative integer exponent expected", pos)
        return value

    def parse_atom(self):
        kind, value, pos = self.take()
        if kind == "int":
            return ("int", value)
        if kind == "name":
            if value not in self.names:
                raise ParseError(f"undeclared variable {value!r}", pos)
            return ("var", value)
        if kind == "op" and value == "(":
            node = self.parse_expr()
            self.expect_op(")")
            return node
        raise ParseError("expected a number, a variable or '('", pos)


def parse(src: str, names) -> tuple:
    """Parse src into an expression tree; names is the set of legal
    variable names.  Parentheses are folded away during parsing."""
    parser = _Parser(_tokenize(src), set(names))
    node = parser.parse_expr()
    kind, _, pos = parser.peek()
    if kind != "end":
        raise ParseError("unexpected trailing input", pos)
    return node


_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4, "int": 9, "var": 9}


def print_expr(node) -> str:
    """Render an expression tree; parse(print_expr(e)) == e."""

    def walk(n, ctx):
        tag = n[0]
        if tag == "int":
            text = str(n[1])
        elif tag == "var":
            text = n[1]
        elif tag == "neg":
            text = "-" + walk(n[1], _PREC["neg"] + 1)
        elif tag == "pow":
            text = walk(n[1], _PREC["pow"] + 1) + "^" + str(n[2])
        else:
            op = {"add": " + ", "sub": " - ", "mul": "*", "div": "/"}[tag]
            prec = _PREC[tag]
            text = walk(n[1], prec) + op + walk(n[2], prec + 1)
        if _PREC[tag] < ctx:
            return "(" + text + ")"
        return text

    return walk(node, 0)


# ----------------------------------------------------------------------
# conversion to polynomials and factored rational functions


def _normalize_base(base: Poly):
    """Split base = unit * monic-free normal form (primitive integer
    coefficients, positive grlex-leading coefficient)."""
    c, prim = make_primitive(base)
    return c, prim


def expr_to_factored(node, vt: VarTable):
    """Evaluate an expression tree keeping the multiplicative structure of
    denominators.  Returns (num, factors) with num a Poly and factors a
    dict mapping normalized nonconstant denominator polynomials to their
    multiplicities; constant denominators are folded into num."""
    scalar, nfac, dfac = _eval_factored(node, vt)
    num = Poly.const(vt, scalar) * _factors_poly(vt, nfac)
    if num.is_zero():
        return num, {}
    return num, dfac


def _mul_factors(f1: dict, f2: dict) -> dict:
    out = dict(f1)
    for b, m in f2.items():
        out[b] = out.get(b, 0) + m
    return out


def _lcm_factors(f1: dict, f2: dict):
    """Per-base maximum, plus the cofactors lcm/f1 and lcm/f2."""
    lcm = dict(f1)
    for b, m in f2.items():
        lcm[b] = max(lcm.get(b, 0), m)
    co1 = {b: m - f1.get(b, 0) for b, m in lcm.items() if m - f1.get(b, 0) > 0}
    co2 = {b: m - f2.get(b, 0) for b, m in lcm.items() if m - f2.get(b, 0) > 0}
    return lcm, co1, co2


def _factors_poly(vt: VarTable, fac: dict) -> Poly:
    out = Poly.one(vt)
    for b, m in fac.items():
        out = out * b ** m
    return out


def _eval_factored(node, vt: VarTable):
    """Evaluate to (scalar, numerator factors, denominator factors); both
    factor dicts map normalized nonconstant polynomials to multiplicities."""
    tag = node[0]
    if tag == "int":
        return Fraction(node[1]), {}, {}
    if tag == "var":
        return Fraction(1), {Poly.variable(vt, node[1]): 1}, {}
    if tag == "neg":
        s, nf, df = _eval_factored(node[1], vt)
        return -s, nf, df
    if tag == "pow":
        s, nf, df = _eval_factored(node[1], vt)
        k = node[2]
        if k == 0:
            if s == 0:
                raise ZeroDivisionError("0^0 in the input expression")
            return Fraction(1), {}, {}
        return s ** k, {b: m * k for b, m in nf.items()}, {b: m * k for b, m in df.items()}
    if tag == "mul":
        s1, nf1, df1 = _eval_factored(node[1], vt)
        s2, nf2, df2 = _eval_factored(node[2], vt)
        return s1 * s2, _mul_factors(nf1, nf2), _mul_factors(df1, df2)
    if tag == "div":
        s1, nf1, df1 = _eval_factored(node[1], vt)
        s2, nf2, df2 = _eval_factored(node[2], vt)
        if s2 == 0:
            raise ZeroDivisionError("division by zero in the input expression")
        return s1 / s2, _mul_factors(nf1, df2), _mul_factors(df1, nf2)
    if tag in ("add", "sub"):
        s1, nf1, df1 = _eval_factored(node[1], vt)
        s2, nf2, df2 = _eval_factored(node[2], vt)
        lcm, co1, co2 = _lcm_factors(df1, df2)
        t1 = Poly.const(vt, s1) * _factors_poly(vt, _mul_factors(nf1, co1))
        t2 = Poly.const(vt, s2) * _factors_poly(vt, _mul_factors(nf2, co2))
        num = t1 + t2 if tag == "add" else t1 - t2
        if num.is_zero():
            return Fraction(0), {}, {}
        unit, base = _normalize_base(num)
        if base.is_constant():
            return unit * base.constant(), {}, lcm
        return unit, {base: 1}, lcm
    raise ValueError(f"unknown expression node {tag!r}")


def expr_to_poly(node, vt: VarTable) -> Poly:
    """Convert an expression tree to a polynomial.  Division is accepted
    only when it cancels exactly; otherwise NotPolynomial is raised."""
    num, fac = expr_to_factored(node, vt)
    for base, mult in fac.items():
        for _ in range(mult):
            try:
                num = divexact(num, base)
            except ValueError:
                raise NotPolynomial(
                    f"expression is not a polynomial (denominator {base})"
                ) from None
    return num
