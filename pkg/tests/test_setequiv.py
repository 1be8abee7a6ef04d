"""Tests for shift-equivalence decisions: coefficient systems, covers,
the linearization cascade, and integer dispersion sets."""

import random
from collections import Counter
from fractions import Fraction

import sympy

from shiftsum.linalg import lattice_contains, lattices_equal
from shiftsum.polyarith import Poly, VarTable, shift_var_table, symbolic_shift, with_shift_vars
from shiftsum.setequiv import (
    CoeffSystem,
    a_degree_cover,
    coeff_system,
    dispersion_z,
    is_admissible,
    shift_equivalent,
    x_homogeneous_cover,
)

from oracles import P, random_poly, to_sympy

XY = VarTable(("x", "y"))
XYZ = VarTable(("x", "y", "z"))


def _shift_vars(vt):
    avt = shift_var_table(vt)
    return avt, tuple(Poly.var(avt, i) for i in range(avt.n))


def _stratum_polys(stratum):
    return Counter(c for _, c in stratum)


def _pair_set_example():
    p = P("x^2 + 2*x*y + y^2 + 2*x + 6*y", XY)
    q = P("x^2 + 2*x*y + y^2 + 4*x + 8*y + 11", XY)
    return p, q


def _pair_quartic():
    p = P("x^4 + x^3*y + x*y^2 + z^2", XYZ)
    q = p.shift((0, 1, 2)) + P("x*y", XYZ)
    return p, q


def _pair_quartic_flat():
    p = P("x^4 + x^2*y + y^2", XYZ)
    q = p.shift((0, 1, 2)) + P("z", XYZ)
    return p, q


def test_coeff_system_quadratic_pair():
    p, q = _pair_set_example()
    system = coeff_system(p, q)
    avt, (a, b) = _shift_vars(XY)
    expected = {
        (1, 0): 2 * a + 2 * b - 2,
        (0, 1): 2 * a + 2 * b - 2,
        (0, 0): a * a + 2 * a * b + b * b + 2 * a + 6 * b - 11,
    }
    assert dict(system.entries) == expected
    assert system.xdeg == 2


def test_coeff_system_reconstructs_difference():
    rng = random.Random(41)
    for _ in range(25):
        n = rng.choice([1, 2, 3])
        vt = VarTable(tuple("xyz"[:n]))
        p = random_poly(rng, vt, terms=5, deg=4, bound=6)
        q = random_poly(rng, vt, terms=5, deg=4, bound=6)
        system = coeff_system(p, q)
        cvt = with_shift_vars(vt)
        total = Poly.zero(cvt)
        for alpha, c in system.entries:
            assert not c.is_zero()
            lifted = Poly(cvt, {(0,) * n + e: v for e, v in c.terms.items()})
            total = total + lifted * Poly(cvt, {alpha + (0,) * n: Fraction(1)})
        embedded_q = Poly(cvt, {e + (0,) * n: v for e, v in q.terms.items()})
        assert total == symbolic_shift(p) - embedded_q


def test_symbolic_shift_matches_sympy():
    rng = random.Random(42)
    for _ in range(15):
        n = rng.choice([1, 2, 3])
        vt = VarTable(tuple("xyz"[:n]))
        p = random_poly(rng, vt, terms=5, deg=4, bound=6)
        xs = [sympy.Symbol(name) for name in vt.names]
        sh = [sympy.Symbol("@" + name) for name in vt.names]
        direct = sympy.expand(to_sympy(p).subs(list(zip(xs, [x + s for x, s in zip(xs, sh)])), simultaneous=True))
        assert sympy.expand(to_sympy(symbolic_shift(p)) - direct) == 0


def test_adeg_cover_quartic_strata():
    p, q = _pair_quartic()
    avt, (a, b, c) = _shift_vars(XYZ)
    cover = a_degree_cover(coeff_system(p, q))
    assert cover.kind == "adeg"
    expected = [
        Counter([4 * a + b - 1, 3 * a, a, 2 * c - 4]),
        Counter([6 * a * a + 3 * a * b, 3 * a * a + 2 * b - 3]),
        Counter([4 * a ** 3 + 3 * a * a * b + b * b - 1, a ** 3 + 2 * a * b]),
        Counter([a ** 4 + a ** 3 * b + a * b * b + c * c - 4]),
    ]
    assert [_stratum_polys(s) for s in cover.strata] == expected


def test_xhom_cover_quartic_strata():
    p, q = _pair_quartic()
    avt, (a, b, c) = _shift_vars(XYZ)
    cover = x_homogeneous_cover(coeff_system(p, q))
    assert cover.kind == "xhom"
    expected = [
        Counter([4 * a + b - 1, 3 * a]),
        Counter([6 * a * a + 3 * a * b, 3 * a * a + 2 * b - 3, a]),
        Counter([4 * a ** 3 + 3 * a * a * b + b * b - 1, a ** 3 + 2 * a * b, 2 * c - 4]),
        Counter([a ** 4 + a ** 3 * b + a * b * b + c * c - 4]),
    ]
    assert [_stratum_polys(s) for s in cover.strata] == expected


def test_covers_admissible_on_examples_and_randoms():
    pairs = [_pair_set_example(), _pair_quartic(), _pair_quartic_flat()]
    rng = random.Random(43)
    for _ in range(40):
        n = rng.choice([1, 2, 3])
        vt = VarTable(tuple("xyz"[:n]))
        p = random_poly(rng, vt, terms=5, deg=5, bound=6)
        if rng.random() < 0.5:
            a = tuple(rng.randrange(-5, 6) for _ in range(n))
            q = p.shift(a)
        else:
            q = random_poly(rng, vt, terms=5, deg=5, bound=6)
        pairs.append((p, q))
    for p, q in pairs:
        system = coeff_system(p, q)
        for cover in (a_degree_cover(system), x_homogeneous_cover(system)):
            assert is_admissible(cover, system)


def test_shift_equivalent_quadratic_pair():
    p, q = _pair_set_example()
    for cover in ("adeg", "xhom"):
        res_q = shift_equivalent(p, q, ring="q", cover=cover)
        assert res_q.solutions.particular == (Fraction(-1), Fraction(2))
        assert res_q.solutions.basis == ()
        res_z = shift_equivalent(p, q, ring="z", cover=cover)
        assert res_z.solutions.particular == (-1, 2)
        assert res_z.solutions.lattice_basis == ()
    assert shift_equivalent(p, q, ring="q", cover="adeg").decided_at_stratum == 2


def test_stratum_accounting_on_contrasting_pairs():
    p1, q1 = _pair_quartic_flat()
    res = shift_equivalent(p1, q1, ring="z", cover="adeg")
    assert res.solutions.is_empty()
    assert res.decided_at_stratum == 1
    system = coeff_system(p1, q1)
    first = a_degree_cover(system).strata[0]
    assert all(c.total_degree() <= 1 for _, c in first)
    res = shift_equivalent(p1, q1, ring="z", cover="xhom")
    assert res.solutions.is_empty()
    assert res.decided_at_stratum == 3

    p2, q2 = _pair_quartic()
    res = shift_equivalent(p2, q2, ring="z", cover="xhom")
    assert res.solutions.is_empty()
    assert res.decided_at_stratum == 2
    res = shift_equivalent(p2, q2, ring="z", cover="adeg")
    assert res.solutions.is_empty()
    assert res.decided_at_stratum == 2


def test_trivial_and_constant_cases():
    zero = Poly.zero(XY)
    res = shift_equivalent(zero, zero, ring="q")
    assert res.decided_at_stratum == 0
    assert res.solutions.particular == (0, 0)
    assert len(res.solutions.basis) == 2
    five = Poly.const(XY, 5)
    res = shift_equivalent(five, five, ring="z")
    assert not res.solutions.is_empty()
    assert len(res.solutions.lattice_basis) == 2
    assert shift_equivalent(five, Poly.const(XY, 7), ring="z").solutions.is_empty()
    assert shift_equivalent(zero, P("x", XY), ring="z").solutions.is_empty()
    assert shift_equivalent(P("x", XY), zero, ring="z").solutions.is_empty()


def test_rational_but_not_integer_shift():
    vt = VarTable(("x",))
    p = P("2*x", vt)
    q = P("2*x + 1", vt)
    res_q = shift_equivalent(p, q, ring="q")
    assert res_q.solutions.particular == (Fraction(1, 2),)
    assert res_q.solutions.basis == ()
    assert shift_equivalent(p, q, ring="z").solutions.is_empty()


def _sets_agree_z(s1, s2):
    if s1.is_empty() or s2.is_empty():
        return s1.is_empty() and s2.is_empty()
    diff = tuple(a - b for a, b in zip(s1.particular, s2.particular))
    return lattice_contains(s1.lattice_basis, diff) and lattices_equal(
        s1.lattice_basis, s2.lattice_basis
    )


def test_planted_shift_recovery_and_cover_agreement():
    rng = random.Random(44)
    for _ in range(40):
        n = rng.choice([1, 2, 3])
        vt = VarTable(tuple("xyz"[:n]))
        p = random_poly(rng, vt, terms=6, deg=4, bound=8)
        a = tuple(rng.randrange(-9, 10) for _ in range(n))
        q = p.shift(a)
        results = {}
        for cover in ("adeg", "xhom"):
            res = shift_equivalent(p, q, ring="z", cover=cover)
            assert not res.solutions.is_empty()
            diff = tuple(ai - pi for ai, pi in zip(a, res.solutions.particular))
            assert lattice_contains(res.solutions.lattice_basis, diff)
            assert p.shift(res.solutions.particular) == q
            results[cover] = res.solutions
        assert _sets_agree_z(results["adeg"], results["xhom"])
        res_q = shift_equivalent(p, q, ring="q", cover="adeg")
        assert p.shift(res_q.solutions.particular) == q


def test_cascade_matches_brute_force_enumeration():
    rng = random.Random(45)
    for _ in range(30):
        n = rng.choice([1, 2])
        vt = VarTable(tuple("xy"[:n]))
        p = random_poly(rng, vt, terms=4, deg=3, bound=4)
        if rng.random() < 0.5:
            q = p.shift(tuple(rng.randrange(-3, 4) for _ in range(n)))
        else:
            q = random_poly(rng, vt, terms=4, deg=3, bound=4)
        res = shift_equivalent(p, q, ring="z").solutions
        points = []
        if n == 1:
            points = [(i,) for i in range(-6, 7)]
        else:
            points = [(i, j) for i in range(-6, 7) for j in range(-6, 7)]
        for a in points:
            hit = p.shift(a) == q
            if res.is_empty():
                claimed = False
            else:
                diff = tuple(ai - pi for ai, pi in zip(a, res.particular))
                claimed = lattice_contains(res.lattice_basis, diff)
            assert hit == claimed
        if not res.is_empty():
            assert p.shift(res.particular) == q
            for vec in res.lattice_basis:
                moved = tuple(pi + vi for pi, vi in zip(res.particular, vec))
                assert p.shift(moved) == q


def test_coset_structure_matches_isotropy():
    rng = random.Random(46)
    for _ in range(15):
        n = rng.choice([2, 3])
        vt = VarTable(tuple("xyz"[:n]))
        p = random_poly(rng, vt, terms=5, deg=4, bound=6)
        a = tuple(rng.randrange(-5, 6) for _ in range(n))
        q = p.shift(a)
        pair = shift_equivalent(p, q, ring="z").solutions
        iso = shift_equivalent(p, p, ring="z").solutions
        assert not pair.is_empty() and not iso.is_empty()
        assert lattice_contains(iso.lattice_basis, iso.particular)
        assert lattices_equal(pair.lattice_basis, iso.lattice_basis)


def test_dispersion_planted_single_step():
    d1 = P("x^2 + 2*x*y + z^2", XYZ)
    res = dispersion_z(d1, d1.shift((0, 1, 0)))
    assert res.particular == (0, 1, 0)
    assert res.lattice_basis == ()


def test_dispersion_isotropy_lattice():
    d3 = P("x + 2*y + z", XYZ)
    res = dispersion_z(d3, d3)
    assert res.particular == (0, 0, 0)
    assert lattices_equal(res.lattice_basis, ((1, -1, 1), (2, -1, 0)))


def test_dispersion_subgroup_restriction():
    d3 = P("x + 2*y + z", XYZ)
    q = d3.shift((1, 0, 0))
    only_x = dispersion_z(d3, q, subgroup=(0,))
    assert only_x.particular == (1, 0, 0)
    assert only_x.lattice_basis == ()
    only_y = dispersion_z(d3, q, subgroup=(1,))
    assert only_y.is_empty()
    only_z = dispersion_z(d3, q, subgroup=(2,))
    assert only_z.particular == (0, 0, 1)
    d1 = P("x^2 + 2*x*y + z^2", XYZ)
    assert dispersion_z(d1, d1.shift((0, 1, 0)), subgroup=(0, 2)).is_empty()


def test_dispersion_subgroup_of_full_lattice():
    d3 = P("x + 2*y + z", XYZ)
    res = dispersion_z(d3, d3, subgroup=(0, 2))
    assert not res.is_empty()
    assert res.particular == (0, 0, 0)
    assert lattices_equal(res.lattice_basis, ((1, 0, -1),))
