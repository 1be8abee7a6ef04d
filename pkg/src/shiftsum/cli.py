"""Command line interface and randomized benchmark harness.

Every command prints one JSON document on stdout.  Rational numbers are
serialized as strings "p" or "p/q"; polynomials and rational functions
as expression text that the parser accepts back; empty solution sets as
{"status": "empty"}.  A --pretty flag switches to short human-readable
text.  Exit codes: 0 for a positive verdict (or a completed report),
1 for a negative verdict, 2 for syntax errors in expressions or flags,
3 for inputs that break a contract (a non-polynomial argument, a
vanishing denominator, a denominator the factor refiner cannot split).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction

from .groups import isotropy_basis
from .linalg import lattice_contains, lattices_equal
from .parser import NotPolynomial, ParseError, expr_to_factored, expr_to_poly, parse
from .polyarith import FactoredDen, Poly, RatFun, VarTable
from .setequiv import shift_equivalent
from .summation import is_summable, verify_certificate
from .telescoping import apply_op, is_telescoperable


class ContractError(ValueError):
    """Input is well formed but violates a command's contract."""


def _frac_str(value) -> str:
    q = Fraction(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _vector(vec):
    return [_frac_str(c) for c in vec]


def _split_names(text: str, what: str):
    names = tuple(part.strip() for part in text.split(","))
    if any(not name.isidentifier() for name in names):
        raise ContractError(f"{what} must be comma-separated identifiers: {text!r}")
    if len(set(names)) != len(names):
        raise ContractError(f"duplicate name in {what}: {text!r}")
    return names


def _poly_arg(src: str, vt: VarTable) -> Poly:
    node = parse(src, vt.names)
    try:
        return expr_to_poly(node, vt)
    except NotPolynomial as e:
        raise ContractError(str(e)) from None


def _fraction_arg(src: str, vt: VarTable):
    node = parse(src, vt.names)
    try:
        num, factors = expr_to_factored(node, vt)
    except ZeroDivisionError as e:
        raise ContractError(str(e)) from None
    den = FactoredDen.build(vt, 1, list(factors.items()))
    return num, den


def _affine_doc(solutions) -> dict:
    if solutions.is_empty():
        return {"status": "empty"}
    basis = getattr(solutions, "basis", None)
    if basis is None:
        basis = solutions.lattice_basis
    return {
        "status": "nonempty",
        "particular": _vector(solutions.particular),
        "basis": [_vector(v) for v in basis],
    }


def _emit(doc: dict) -> None:
    print(json.dumps(doc, indent=2))


# ----------------------------------------------------------------------
# commands


def cmd_set_equiv(args) -> int:
    names = _split_names(args.vars, "--vars")
    vt = VarTable(names)
    p = _poly_arg(args.p, vt)
    q = _poly_arg(args.q, vt)
    res = shift_equivalent(p, q, ring=args.ring, cover=args.cover)
    doc = {
        "command": "set-equiv",
        "vars": list(names),
        "ring": args.ring,
        "cover": args.cover,
        "decided_at_stratum": res.decided_at_stratum,
        "solutions": _affine_doc(res.solutions),
    }
    if args.pretty:
        if res.solutions.is_empty():
            print("no shift maps p onto q")
        else:
            print("particular shift: (" + ", ".join(_vector(res.solutions.particular)) + ")")
            for v in doc["solutions"]["basis"]:
                print("lattice direction: (" + ", ".join(v) + ")")
    else:
        _emit(doc)
    return 0 if not res.solutions.is_empty() else 1


def cmd_isotropy(args) -> int:
    names = _split_names(args.vars, "--vars")
    vt = VarTable(names)
    p = _poly_arg(args.p, vt)
    subgroup = None
    chosen = None
    if args.subgroup is not None:
        chosen = _split_names(args.subgroup, "--subgroup")
        missing = [name for name in chosen if name not in names]
        if missing:
            raise ContractError(f"--subgroup names not in --vars: {missing}")
        subgroup = tuple(names.index(name) for name in chosen)
    lattice = isotropy_basis(p, subgroup)
    doc = {
        "command": "isotropy",
        "vars": list(names),
        "subgroup": list(chosen) if chosen else None,
        "rank": lattice.rank,
        "generators": [_vector(g) for g in lattice.generators],
    }
    if args.pretty:
        if not lattice.generators:
            print("trivial isotropy")
        for g in doc["generators"]:
            print("generator: (" + ", ".join(g) + ")")
    else:
        _emit(doc)
    return 0


def cmd_summable(args) -> int:
    names = _split_names(args.vars, "--vars")
    vt = VarTable(names)
    num, den = _fraction_arg(args.f, vt)
    res = is_summable(num, den)
    doc = {
        "command": "summable",
        "vars": list(names),
        "summable": res.summable,
    }
    if args.certificate:
        if res.summable:
            f = RatFun(num, den.value(vt))
            assert verify_certificate(f, res.certificate)
            doc["certificate"] = [str(g) for g in res.certificate.parts]
        else:
            doc["remainder"] = [
                {"numerator": str(a), "base": str(d), "power": j}
                for a, d, j in res.reduced.remainder
            ]
    if args.pretty:
        print("summable" if res.summable else "not summable")
        for i, text in enumerate(doc.get("certificate", [])):
            print(f"g[{names[i]}] = {text}")
        for entry in doc.get("remainder", []):
            print(f"remainder: ({entry['numerator']}) / ({entry['base']})^{entry['power']}")
    else:
        _emit(doc)
    return 0 if res.summable else 1


def cmd_telescoper(args) -> int:
    names = _split_names(args.vars, "--vars")
    tname = args.t.strip()
    if not tname.isidentifier():
        raise ContractError(f"--t must be an identifier: {args.t!r}")
    if tname in names:
        raise ContractError("--t must not repeat a name from --vars")
    vt = VarTable(names + (tname,), t_index=len(names))
    num, den = _fraction_arg(args.f, vt)
    res = is_telescoperable(num, den)
    doc = {
        "command": "telescoper",
        "vars": list(names),
        "t": tname,
        "exists": res is not None,
    }
    if res is not None:
        doc["operator"] = {
            "order": res.L.order(),
            "terms": [
                {"shift": i * res.L.step, "coefficient": str(c)}
                for i, c in res.L.coeffs
            ],
        }
        if args.certificate:
            f = RatFun(num, den.value(vt))
            assert verify_certificate(
                apply_op(res.L, f), res.certificate, nactive=len(names)
            )
            doc["certificate"] = [str(g) for g in res.certificate.parts[: len(names)]]
    if args.pretty:
        if res is None:
            print("no telescoper")
        else:
            print(f"telescoper: {res.L}")
            for i, text in enumerate(doc.get("certificate", [])):
                print(f"g[{names[i]}] = {text}")
    else:
        _emit(doc)
    return 0 if res is not None else 1


# ----------------------------------------------------------------------
# benchmark harness


def _random_bench_poly(rng, vt: VarTable, terms: int, deg: int) -> Poly:
    """A terms-term polynomial of total degree exactly deg (when deg > 0
    and at least one term is left free to carry it)."""
    n = vt.n
    chosen = {}
    while len(chosen) < terms:
        budget = deg
        exps = []
        for _ in range(n - 1):
            e = rng.randint(0, budget)
            exps.append(e)
            budget -= e
        exps.append(rng.randint(0, budget))
        rng.shuffle(exps)
        chosen[tuple(exps)] = Fraction(rng.randint(-99, 99) or 1)
        if len(chosen) == terms and deg > 0 and not any(
            sum(e) == deg for e in chosen
        ):
            top = [rng.randint(0, deg) for _ in range(n - 1)]
            while sum(top) > deg:
                top = [rng.randint(0, deg) for _ in range(n - 1)]
            top.append(deg - sum(top))
            rng.shuffle(top)
            chosen.pop(next(iter(chosen)))
            chosen[tuple(top)] = Fraction(rng.randint(-99, 99) or 1)
    return Poly(vt, chosen)


def _solutions_match(a, b) -> bool:
    if a.is_empty() != b.is_empty():
        return False
    if a.is_empty():
        return True
    if not lattices_equal(a.lattice_basis, b.lattice_basis):
        return False
    diff = tuple(int(x - y) for x, y in zip(a.particular, b.particular))
    return lattice_contains(a.lattice_basis, diff)


def run_bench_instance(seed: int, n: int, terms: int, deg: int, disdeg, cover: str):
    """One benchmark row: plant a shift, optionally disturb, decide."""
    rng = random.Random(seed)
    vt = VarTable(tuple(f"x{i + 1}" for i in range(n)))
    p = _random_bench_poly(rng, vt, terms, deg)
    shift = tuple(rng.randint(0, 99) for _ in range(n))
    q = p.shift(shift)
    if disdeg is not None:
        q = q + _random_bench_poly(rng, vt, terms, disdeg)
    covers = ("adeg", "xhom") if cover == "both" else (cover,)
    results = {}
    elapsed = {}
    for kind in covers:
        t0 = time.perf_counter_ns()
        results[kind] = shift_equivalent(p, q, ring="z", cover=kind)
        elapsed[kind] = time.perf_counter_ns() - t0
    first = results[covers[0]].solutions
    row = {
        "seed": seed,
        "n": n,
        "terms": terms,
        "deg": deg,
        "disdeg": disdeg,
        "cover": cover,
        "elapsed_ns": elapsed if cover == "both" else elapsed[covers[0]],
        "verdict": "empty" if first.is_empty() else "nonempty",
    }
    if disdeg is None:
        inside = (not first.is_empty()) and lattice_contains(
            first.lattice_basis,
            tuple(int(s - c) for s, c in zip(shift, first.particular)),
        )
        row["planted_recovered"] = bool(inside and p.shift(shift) == q)
    else:
        row["planted_recovered"] = None
    if cover == "both":
        row["agreement"] = _solutions_match(
            results["adeg"].solutions, results["xhom"].solutions
        )
    else:
        row["agreement"] = None
    return row


def cmd_bench(args) -> int:
    if args.disdeg is not None and args.disdeg >= args.deg:
        raise ContractError("--disdeg must be smaller than --deg")
    if args.n < 1 or args.terms < 1 or args.deg < 0 or args.count < 1:
        raise ContractError("bench sizes must be positive")
    rows = [
        run_bench_instance(args.seed + i, args.n, args.terms, args.deg, args.disdeg, args.cover)
        for i in range(args.count)
    ]
    rows.sort(key=lambda row: row["seed"])
    doc = {
        "command": "bench",
        "n": args.n,
        "terms": args.terms,
        "deg": args.deg,
        "disdeg": args.disdeg,
        "seed": args.seed,
        "count": args.count,
        "cover": args.cover,
        "rows": rows,
    }
    if args.pretty:
        for row in rows:
            print(
                f"seed {row['seed']}: verdict {row['verdict']}"
                + (
                    f", recovered {row['planted_recovered']}"
                    if row["planted_recovered"] is not None
                    else ""
                )
                + (f", agreement {row['agreement']}" if row["agreement"] is not None else "")
            )
    else:
        _emit(doc)
    return 0


# ----------------------------------------------------------------------
# argument wiring


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="shiftsum",
        description="Exact decisions for shift equivalence, rational summability and telescoper existence.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    se = sub.add_parser("set-equiv", help="solve p(x + a) = q(x) for integer or rational shifts a")
    se.add_argument("--vars", required=True, help="comma-separated variable names")
    se.add_argument("--ring", choices=("q", "z"), default="z")
    se.add_argument("--cover", choices=("adeg", "xhom"), default="adeg")
    se.add_argument("--pretty", action="store_true")
    se.add_argument("p")
    se.add_argument("q")
    se.set_defaults(run=cmd_set_equiv)

    iso = sub.add_parser("isotropy", help="basis of the shift lattice fixing a polynomial")
    iso.add_argument("--vars", required=True)
    iso.add_argument("--subgroup", help="restrict moves to these variables")
    iso.add_argument("--pretty", action="store_true")
    iso.add_argument("p")
    iso.set_defaults(run=cmd_isotropy)

    summ = sub.add_parser("summable", help="decide summability in all declared variables")
    summ.add_argument("--vars", required=True)
    summ.add_argument("--certificate", action="store_true")
    summ.add_argument("--pretty", action="store_true")
    summ.add_argument("f")
    summ.set_defaults(run=cmd_summable)

    tel = sub.add_parser("telescoper", help="decide existence of a telescoper in the parameter")
    tel.add_argument("--vars", required=True, help="summation variables")
    tel.add_argument("--t", required=True, help="parameter variable name")
    tel.add_argument("--certificate", action="store_true")
    tel.add_argument("--pretty", action="store_true")
    tel.add_argument("f")
    tel.set_defaults(run=cmd_telescoper)

    bench = sub.add_parser("bench", help="randomized planted-shift benchmark")
    bench.add_argument("--n", type=int, required=True)
    bench.add_argument("--terms", type=int, required=True)
    bench.add_argument("--deg", type=int, required=True)
    bench.add_argument("--disdeg", type=int, default=None)
    bench.add_argument("--seed", type=int, required=True)
    bench.add_argument("--count", type=int, required=True)
    bench.add_argument("--cover", choices=("adeg", "xhom", "both"), default="both")
    bench.add_argument("--pretty", action="store_true")
    bench.set_defaults(run=cmd_bench)
    return top


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.run(args)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ContractError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
