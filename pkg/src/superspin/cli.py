"""Command line front end.

Exit status: 0 when every requested claim holds, 1 when an identity fails,
2 for usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import oracle, sugawara
from .algebras import osp22_multiplet
from .dsl import DslError, parse
from .expressions import beta, mirror, psi
from .scalars import PoleError
from .wick import DEFAULT_DEPTH, ope

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

TENSOR_LABELS = ("free", "su0", "so0", "gl11", "osp22")


class UsageError(Exception):
    pass


def named_operator(text: str):
    """Multiplet symbols (``H``, ``S+``, ``Shat-``, with an optional ``bar``
    suffix), ``T_<label>``, ``rho``, or any DSL expression."""
    members = osp22_multiplet().members
    if text in members:
        return members[text]
    if text.endswith("bar") and text[:-3] in members:
        return mirror(members[text[:-3]])
    if text.startswith("T_") and text[2:] in TENSOR_LABELS:
        return sugawara.build_T(text[2:]).expr
    if text == "rho":
        return sugawara.density_operator()
    return parse(text)


def _emit(args, payload_text: str, payload_json) -> None:
    if getattr(args, "format", "text") == "json":
        print(json.dumps(payload_json, indent=2, sort_keys=True))
    else:
        print(payload_text)


def cmd_ope(args) -> int:
    a, b = named_operator(args.a), named_operator(args.b)
    result = ope(a, b, depth=args.depth)
    if args.format == "json":
        print(result.to_json(indent=2))
    elif args.format == "latex":
        print(result.to_latex())
    else:
        print(result)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.target == "sp-numeric":
        if args.n not in (1, 2):
            raise UsageError("verify sp-numeric needs --n 1 or --n 2")
        check = oracle.sp_check(args.n)
        report = {
            "claim": f"T_free = T_osp22(-2N) + T_sp(2N)0 at n = {args.n}",
            "status": "proven" if check.ok else "failed",
            "lhs_minus_rhs_term_count": len(check.residual),
        }
        if not check.commuting:
            report["status"] = "failed"
            report["witness_terms"] = [{"coeff": "", "monomial": "sp currents do not commute with the multiplet"}]
        reports = [report]
    else:
        families = ("su", "so") if args.target == "all" else (args.target,)
        reports = [sugawara.decomposition_report(f).to_dict() for f in families]
    ok = all(r["status"] == "proven" for r in reports)
    text = "\n".join(f"{r['status']:7} {r['claim']}" for r in reports)
    _emit(args, text, reports if len(reports) > 1 else reports[0])
    return EXIT_OK if ok else EXIT_FAIL


def cmd_central_charge(args) -> int:
    c = sugawara.central_charge(sugawara.build_T(args.label))
    _emit(args, f"c({args.label}) = {c}", {"tensor": args.label, "central_charge": str(c)})
    return EXIT_OK


def cmd_weights(args) -> int:
    sup, bos = sugawara.FAMILY_SECTORS[args.family]
    make = psi if args.field == "psi" else beta
    rows = {}
    ok = True
    for charge in ("+", "-"):
        f = make(charge, "i")
        w = {label: sugawara.conformal_weight(sugawara.build_T(label), f) for label in ("free", sup, bos)}
        ok &= w["free"] == w[sup] + w[bos]
        rows[f"{args.field}{charge}"] = w
    lines = [
        f"{name}: free = {w['free']}, {sup} = {w[sup]}, {bos} = {w[bos]}" for name, w in rows.items()
    ]
    lines.append("additivity " + ("holds" if ok else "FAILS"))
    payload = {name: {k: str(v) for k, v in w.items()} for name, w in rows.items()}
    payload["additive"] = ok
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_beta(args) -> int:
    system = sugawara.beta_one_loop(args.family)
    payload = {
        "couplings": system.couplings,
        "structure_constants": [
            {"k": k, "i": i, "j": j, "value": str(v)} for (k, i, j), v in sorted(system.structure.items())
        ],
        "beta": system.render(),
    }
    _emit(args, str(system), payload)
    return EXIT_OK


def _eval_or_pole(x, n) -> str:
    try:
        return str(x.eval(n))
    except PoleError:
        return "pole"


def cmd_dos_table(args) -> int:
    points = []
    if args.eval:
        try:
            points = [int(p) for p in args.eval.split(",") if p.strip()]
        except ValueError:
            raise UsageError(f"--eval expects comma-separated integers, got {args.eval!r}") from None
    rows = []
    ok = True
    for family in ("su", "so", "sp"):
        r = sugawara.dos_exponents(family)
        ok &= r.routes_agree and r.quartic_double_pole_zero
        row = {"family": family, "gamma": str(r.gamma), "nu": str(r.nu), "routes_agree": r.routes_agree}
        if points:
            row["values"] = {str(n): {"gamma": _eval_or_pole(r.gamma, n), "nu": _eval_or_pole(r.nu, n)} for n in points}
        rows.append(row)
    lines = [f"{'family':6}  {'Gamma':22}  nu"]
    for row in rows:
        lines.append(f"{row['family']:6}  {row['gamma']:22}  {row['nu']}")
        for n, v in row.get("values", {}).items():
            lines.append(f"{'':6}  N = {n}: Gamma = {v['gamma']}, nu = {v['nu']}")
    _emit(args, "\n".join(lines), rows)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_oracle(args) -> int:
    if args.what == "completeness":
        ok = oracle.completeness_numeric(args.family, args.n)
        consts = oracle.casimir_constants(oracle.generator_basis(args.family, args.n))
        payload = {
            "family": args.family,
            "n": args.n,
            "completeness": ok,
            "C(N)": str(consts.casimir_fund),
            "C2(N)": str(consts.casimir2_fund),
            "C2(G)": str(consts.casimir2_adjoint),
            "dim": consts.dimension,
        }
        name = f"sp({2 * args.n})" if args.family == "sp" else f"{args.family}({args.n})"
        text = (
            f"{name} completeness {'holds' if ok else 'FAILS'}; "
            f"C(N) = {consts.casimir_fund}, C2(N) = {consts.casimir2_fund}, C2(G) = {consts.casimir2_adjoint}"
        )
    else:
        checks = oracle.equivalence_checks(args.family, args.n)
        ok = all(checks.values())
        payload = {"family": args.family, "n": args.n, "checks": checks}
        text = "\n".join(f"{'ok  ' if v else 'FAIL'} {k}" for k, v in checks.items())
    _emit(args, text, payload)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="superspin", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def fmt(sp, choices=("text", "json")):
        sp.add_argument("--format", choices=choices, default="text")

    s = sub.add_parser("ope", help="operator product expansion of two operators")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    fmt(s, ("text", "json", "latex"))
    s.set_defaults(func=cmd_ope)

    s = sub.add_parser("verify", help="prove a stress-tensor decomposition")
    s.add_argument("target", choices=("su", "so", "all", "sp-numeric"))
    s.add_argument("--n", type=int, default=1)
    fmt(s)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("central-charge", help="central charge of a stress tensor")
    s.add_argument("label", choices=TENSOR_LABELS)
    fmt(s)
    s.set_defaults(func=cmd_central_charge)

    s = sub.add_parser("weights", help="conformal weights of the free fields in each sector")
    s.add_argument("family", choices=("su", "so"))
    s.add_argument("--field", choices=("psi", "beta"), default="psi")
    fmt(s)
    s.set_defaults(func=cmd_weights)

    s = sub.add_parser("beta", help="one-loop beta functions of the current-current couplings")
    s.add_argument("family", choices=("su", "so"))
    fmt(s)
    s.set_defaults(func=cmd_beta)

    s = sub.add_parser("dos-table", help="density-of-states exponents")
    s.add_argument("--eval", default="", help="comma-separated ranks to evaluate at")
    fmt(s)
    s.set_defaults(func=cmd_dos_table)

    s = sub.add_parser("oracle", help="explicit-generator checks")
    s.add_argument("what", choices=("completeness", "equivalence"))
    s.add_argument("family", choices=("su", "so", "sp"))
    s.add_argument("--n", type=int, required=True)
    fmt(s)
    s.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (DslError, UsageError, oracle.UnsupportedRank) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
