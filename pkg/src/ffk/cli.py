"""``ffk`` command line: one subcommand per library operation.

Exit codes: 0 success, 2 parse error, 3 violated precondition, 4 unsupported
parameters.  Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys
from fractions import Fraction

from . import csa, kochen, laurent, places, poly, tower
from .errors import FFKError, ParseError, PreconditionError
from .ffield import field, parse_field_spec, parse_fp_poly

PREC_ENV = "FFK_PREC_DEFAULT"


def default_prec() -> int:
    raw = os.environ.get(PREC_ENV, "32")
    try:
        value = int(raw)
    except ValueError:
        raise ParseError(f"{PREC_ENV}={raw!r} is not an integer") from None
    if value < 1:
        raise PreconditionError(f"{PREC_ENV} must be positive")
    return value


def _field(args):
    if args.field:
        return parse_field_spec(args.field)
    if args.p is None:
        raise ParseError("a field is required: --p P [--e E --mod POLY] or --field SPEC")
    modulus = parse_fp_poly(args.mod, args.p, "s") if args.mod else None
    return field(args.p, args.e, modulus)


def _levels(spec, text):
    if not text:
        return []
    return [poly.parse_poly(spec, part) for part in text.split(",") if part.strip()]


def _places(spec, text):
    if not text:
        return []
    return [places.parse_place(spec, part) for part in text.split(",") if part.strip()]


def _val(v):
    return "inf" if v == places.INF else v


def _frac(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}" if f else "0"


# ----------------------------------------------------------------------------
# commands: each returns (json-able dict, text)


def cmd_field_info(spec, args):
    data = {
        "field": str(spec),
        "p": spec.p,
        "e": spec.e,
        "q": spec.q,
        "modulus": None if spec.modulus is None else list(spec.modulus),
        "generator": spec.format(spec.generator),
    }
    text = f"{spec}\nq = {spec.q}\ngenerator = {data['generator']}"
    return data, text


def cmd_irreducibles(spec, args):
    polys = poly.enumerate_Pn_plus(spec, args.n, args.max_degree)
    data = {"n": args.n, "max_degree": args.max_degree, "count": len(polys)}
    if not args.count_only:
        data["polynomials"] = [str(f) for f in polys]
    text = str(len(polys)) if args.count_only else "\n".join(data["polynomials"])
    return data, text


def cmd_hensel_root(spec, args):
    f = poly.parse_poly(spec, args.poly)
    prec = args.prec or default_prec()
    root = laurent.hensel_nth_root(f, args.n, prec)
    data = {"poly": str(f), "n": args.n, "series": root.to_json(), "text": str(root)}
    if args.figure:
        from . import report

        data["figure"] = str(report.series_coefficients(root, args.figure))
    return data, str(root)


def cmd_place_val(spec, args):
    r = poly.parse_ratfunc(spec, args.r)
    v = places.parse_place(spec, args.place)
    val = places.valuation(r, v)
    data = {"r": str(r), "place": str(v), "valuation": _val(val), "residue": None}
    if val >= 0:
        data["residue"] = str(places.residue(r, v))
    text = str(_val(val)) + ("" if data["residue"] is None else f"\nresidue = {data['residue']}")
    return data, text


def _parse_constraint(spec, text):
    parts = text.split(":")
    if len(parts) != 3:
        raise ParseError(f"constraint {text!r} must be PLACE:TARGET:M")
    try:
        m = int(parts[2])
    except ValueError:
        raise ParseError(f"constraint bound {parts[2]!r} is not an integer") from None
    return places.parse_place(spec, parts[0]), poly.parse_ratfunc(spec, parts[1]), m


def cmd_weak_approx(spec, args):
    cons = [_parse_constraint(spec, c) for c in args.constraint]
    y = places.weak_approximation(cons)
    checks = [
        {"place": str(v), "target": str(T), "m": m, "achieved": _val(places.valuation(y - T, v))}
        for v, T, m in cons
    ]
    return {"y": str(y), "checks": checks}, str(y)


def cmd_place_split(spec, args):
    v = places.parse_place(spec, args.place)
    f = poly.parse_poly(spec, args.poly)
    data = places.split_type(v, args.n, f)
    return {"place": str(v), "n": args.n, "poly": str(f), "split": [list(p) for p in data]}, str(data)


def _kochen_setup(spec, args):
    base = places.parse_place(spec, args.place)
    levels = _levels(spec, args.levels)
    L = tower.make_tower(spec, args.n, levels) if levels else kochen.base_field(spec)
    return base, L, kochen.KochenContext.at(base)


def cmd_kochen_eval(spec, args):
    base, L, ctx = _kochen_setup(spec, args)
    a = tower.parse_tower_element(L, args.a)
    b = kochen.beta(a, ctx, L)
    g = kochen.gamma(a, ctx, L)
    cases = []
    for P in kochen.places_above(L, base):
        entry = {"place": str(P), "one_one": kochen.is_one_one_place(P)}
        if b is kochen.POLE:
            entry.update(case=None, valuation=None)
        else:
            case = kochen.classify_beta(a, P, ctx)
            entry["case"] = case.to_json()
            entry["case"]["predicted"] = _val(case.predicted) if case.predicted != "<=0" else "<=0"
            entry["valuation"] = _val(P.valuation(b))
            entry["gamma_valuation"] = _val(P.valuation(g))
        cases.append(entry)
    data = {"a": str(a), "beta": str(b), "gamma": str(g), "places": cases}
    lines = [f"beta = {b}", f"gamma = {g}"]
    for c in cases:
        if c["case"]:
            lines.append(f"{c['place']}: case ({c['case']['clause']}), v(beta) = {c['valuation']}")
    return data, "\n".join(lines)


def cmd_kochen_check(spec, args):
    base, L, _ = _kochen_setup(spec, args)
    rep = kochen.gamma_integrality_sample(L, base, args.samples, args.seed)
    if args.figure:
        from . import report

        rep["figure"] = str(report.valuation_histogram(rep["valuation_histogram"], args.figure))
    text = f"samples = {rep['samples']}\nviolations = {len(rep['violations'])}"
    return rep, text


def cmd_kochen_represent(spec, args):
    base, L, ctx = _kochen_setup(spec, args)
    r = tower.parse_tower_element(L, args.r)
    x, y, z = kochen.kochen_representation(L, r, ctx)
    ok = kochen.check_representation(L, r, (x, y, z), ctx)
    data = {"r": str(r), "x": str(x), "y": str(y), "z": str(z), "verified": ok}
    return data, f"x = {x}\ny = {y}\nz = {z}\nverified = {ok}"


def _tower(spec, args):
    return tower.make_tower(spec, args.n, _levels(spec, args.levels))


def cmd_tower_norm(spec, args):
    T = _tower(spec, args)
    x = tower.parse_tower_element(T, args.x)
    nm = tower.norm_max(x, args.prec)
    data = {"x": str(x), "norm_max": nm.to_json()}
    return data, str(nm)


def cmd_tower_enumerate(spec, args):
    T = _tower(spec, args)
    elems = tower.enumerate_bounded(T, args.N)
    data = {"levels": [str(f) for f in T.levels], "N": args.N, "count": len(elems)}
    if not args.count_only:
        data["elements"] = [str(x) for x in elems]
    if args.figure:
        from . import report

        exps = [tower.norm_max(x).exponent for x in elems if x]
        data["figure"] = str(report.norm_histogram(exps, spec.q, args.figure))
    text = str(len(elems)) if args.count_only else "\n".join(data["elements"])
    return data, text


def cmd_tower_disc(spec, args):
    f = poly.parse_poly(spec, args.poly)
    rec = tower.verify_integral_basis(f, args.n)
    vals = [{"place": str(v), "valuation": k} for v, k in rec["valuations"].items()]
    data = {"poly": str(f), "n": args.n, "disc": str(rec["disc"]), "valuations": vals, "ok": rec["ok"]}
    text = f"disc = {rec['disc']}\n" + "\n".join(f"v_({e['place']}) = {e['valuation']}" for e in vals)
    return data, text


def _algebra(spec, args):
    return csa.SymbolAlgebra(args.l, poly.parse_ratfunc(spec, args.a), poly.parse_ratfunc(spec, args.b))


def cmd_csa_invariants(spec, args):
    A = _algebra(spec, args)
    profile = csa.invariant_profile(A)
    data = {"algebra": str(A), "profile": csa.profile_json(profile), "reciprocity": csa.reciprocity_check(A)}
    if args.figure:
        from . import report

        data["figure"] = str(report.invariant_profile(profile, A.l, args.figure))
    text = "\n".join(f"{v}: {_frac(f)}" for v, f in profile.items()) or "split at every place"
    return data, text


def cmd_csa_pair(spec, args):
    p = places.parse_place(spec, args.place)
    q1 = places.parse_place(spec, args.q1)
    q2 = places.parse_place(spec, args.q2)
    A, B = csa.construct_sibling_pair(p, q1, q2, args.l, args.max_degree)
    data = {
        "A": {"algebra": str(A), "profile": csa.profile_json(csa.invariant_profile(A))},
        "B": {"algebra": str(B), "profile": csa.profile_json(csa.invariant_profile(B))},
    }
    return data, f"A = {A}\nB = {B}"


def cmd_csa_sample(spec, args):
    A = _algebra(spec, args)
    values = csa.sample_trace_of_norm_one(A, args.count, args.seed)
    ram = sorted(csa.ramified_places(A), key=places.Place.sort_key)
    bad = [str(x) for x in values if any(places.valuation(x, v) < 0 for v in ram)]
    data = {"algebra": str(A), "ramified": [str(v) for v in ram], "traces": [str(x) for x in values], "non_integral": bad}
    return data, "\n".join(data["traces"])


def cmd_csa_split(spec, args):
    x = poly.parse_ratfunc(spec, args.x)
    y = csa.split_integral(x, _places(spec, args.delta_a), _places(spec, args.delta_b))
    return {"x": str(x), "y": str(y)}, str(y)


# ----------------------------------------------------------------------------


def _add_field_flags(sp):
    sp.add_argument("--p", type=int, help="characteristic")
    sp.add_argument("--e", type=int, default=1, help="extension degree (q = p^e)")
    sp.add_argument("--mod", help="defining polynomial in s for e > 1")
    sp.add_argument("--field", help="field spec such as 'p=3,e=2,mod=s^2+1'")
    sp.add_argument("--format", choices=("json", "text"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ffk", description="Exact arithmetic over F_q(t), Kummer towers and symbol algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text)
        _add_field_flags(sp)
        sp.set_defaults(func=fn)
        return sp

    add("field-info", cmd_field_info, "field parameters and generator")

    sp = add("irreducibles", cmd_irreducibles, "monic irreducibles of degree divisible by n")
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--max-degree", type=int, required=True)
    sp.add_argument("--count-only", action="store_true")

    sp = add("hensel-root", cmd_hensel_root, "n-th root of a monic polynomial in F_q((1/t))")
    sp.add_argument("--poly", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--prec", type=int, help=f"retained terms (default ${PREC_ENV} or 32)")
    sp.add_argument("--figure")

    sp = add("place-val", cmd_place_val, "valuation and residue at a place")
    sp.add_argument("--r", required=True)
    sp.add_argument("--place", required=True)

    sp = add("weak-approx", cmd_weak_approx, "solve valuation constraints")
    sp.add_argument("--constraint", action="append", required=True, help="PLACE:TARGET:M, repeatable")

    sp = add("place-split", cmd_place_split, "splitting of a place in K(f^(1/n))")
    sp.add_argument("--place", required=True)
    sp.add_argument("--poly", required=True)
    sp.add_argument("--n", type=int, required=True)

    def kochen_flags(sp):
        sp.add_argument("--place", required=True, help="base place p")
        sp.add_argument("--levels", default="", help="comma-separated level polynomials (empty: K itself)")
        sp.add_argument("--n", type=int, default=2)

    sp = add("kochen-eval", cmd_kochen_eval, "beta, gamma and the valuation case")
    kochen_flags(sp)
    sp.add_argument("--a", required=True)

    sp = add("kochen-check", cmd_kochen_check, "sample gamma-integrality at (1,1)-places")
    kochen_flags(sp)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--figure")

    sp = add("kochen-represent", cmd_kochen_represent, "r = x / (1 + t_p gamma(z) y)")
    kochen_flags(sp)
    sp.add_argument("--r", required=True)

    def tower_flags(sp):
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--levels", default="", help="comma-separated level polynomials")

    sp = add("tower-norm", cmd_tower_norm, "max absolute value over conjugates")
    tower_flags(sp)
    sp.add_argument("--x", required=True)
    sp.add_argument("--prec", type=int)

    sp = add("tower-enumerate", cmd_tower_enumerate, "integral elements of bounded norm")
    tower_flags(sp)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--count-only", action="store_true")
    sp.add_argument("--figure")

    sp = add("tower-disc", cmd_tower_disc, "discriminant of X^n - p and its valuations")
    sp.add_argument("--poly", required=True)
    sp.add_argument("--n", type=int, required=True)

    def algebra_flags(sp):
        sp.add_argument("--a", required=True)
        sp.add_argument("--b", required=True)
        sp.add_argument("--l", type=int, default=2)

    sp = add("csa-invariants", cmd_csa_invariants, "local invariants of (a, b)")
    algebra_flags(sp)
    sp.add_argument("--figure")

    sp = add("csa-pair", cmd_csa_pair, "algebras ramified at {p, q1} and {p, q2}")
    sp.add_argument("--place", required=True)
    sp.add_argument("--q1", required=True)
    sp.add_argument("--q2", required=True)
    sp.add_argument("--l", type=int, default=2)
    sp.add_argument("--max-degree", type=int, default=2)

    sp = add("csa-sample", cmd_csa_sample, "reduced traces of norm-one elements")
    algebra_flags(sp)
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("csa-split", cmd_csa_split, "integral splitting of x between two place sets")
    sp.add_argument("--x", required=True)
    sp.add_argument("--delta-a", required=True, help="comma-separated places")
    sp.add_argument("--delta-b", required=True, help="comma-separated places")
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(stderr), contextlib.redirect_stdout(stdout):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        spec = _field(args)
        data, text = args.func(spec, args)
    except FFKError as exc:
        print(f"ffk {args.command}: {exc}", file=stderr)
        return exc.exit_code
    except ZeroDivisionError as exc:
        print(f"ffk {args.command}: {exc}", file=stderr)
        return PreconditionError.exit_code
    if args.format == "json":
        json.dump({"command": args.command, "field": str(spec), **data}, stdout, indent=2)
        stdout.write("\n")
    else:
        stdout.write(text + "\n")
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
