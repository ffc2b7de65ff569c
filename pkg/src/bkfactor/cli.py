"""Command-line front end.

Exit codes: 0 success, 1 obstructed / no factorization (the report is still
printed), 2 usage or parse error, 3 unresolved roots.
"""

from __future__ import annotations

import argparse
import sys

from .approx import (
    GridSpec,
    LinearCoeffs,
    coefficient_deltas,
    invariant_field,
    r_function_check,
    sample,
    scale_operator,
)
from .expr import EvaluationError, to_text
from .factor import (
    FactorizationError,
    UnresolvedRootsError,
    analyze,
    full_factorization,
    roots,
)
from .jsonio import dumps
from .operator import Lpdo, compose, gauge_conjugate, transpose
from .parsing import ParseError, parse_expression, parse_operator

EXIT_OK, EXIT_OBSTRUCTED, EXIT_USAGE, EXIT_UNRESOLVED = 0, 1, 2, 3


def _read(text: str) -> str:
    return sys.stdin.read() if text == "-" else text


def _operator(text: str) -> Lpdo:
    return parse_operator(_read(text))


def _mask(text: str | None):
    if text is None:
        return None
    out = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        j, k = (int(v) for v in part.split(","))
        out.append((j, k))
    return out


def _operator_json(A: Lpdo) -> dict:
    return {
        "operator": str(A),
        "order": A.order,
        "coefficients": {f"{j},{k}": to_text(c) for (j, k), c in A.items()},
    }


def _emit(args, payload: dict, text: str) -> None:
    sys.stdout.write((dumps(payload) if args.json else text) + "\n")


def _cmd_parse(args) -> int:
    if args.expr:
        e = parse_expression(_read(args.text))
        _emit(args, {"expression": to_text(e)}, to_text(e))
        return EXIT_OK
    A = _operator(args.text)
    _emit(args, _operator_json(A), str(A))
    return EXIT_OK


def _cmd_factor(args) -> int:
    A = _operator(args.operator)
    result = full_factorization(A, all_chains=args.all, user_roots=args.root, riccati=args.riccati or ())
    _emit(args, result.to_json(), result.to_text())
    return EXIT_OK if result.chains else EXIT_OBSTRUCTED


def _cmd_invariants(args) -> int:
    A = _operator(args.operator)
    reports, search = analyze(A, user_roots=args.root, riccati=args.riccati or ())
    payload = {
        "operator": str(A),
        "roots": [r.root.to_json() for r in reports],
        "unresolved": None if search is None or search.complete else to_text(search.unresolved),
        "reports": [r.to_json() for r in reports],
    }
    text = "\n\n".join([f"operator: {A}"] + [r.to_text() for r in reports])
    _emit(args, payload, text)
    if search is not None and not search.complete and not any(r.factored for r in reports):
        return EXIT_UNRESOLVED
    return EXIT_OK if any(r.factored for r in reports) else EXIT_OBSTRUCTED


def _cmd_transpose(args) -> int:
    At = transpose(_operator(args.operator))
    _emit(args, _operator_json(At), str(At))
    return EXIT_OK


def _cmd_gauge(args) -> int:
    A = _operator(args.operator)
    G = gauge_conjugate(A, parse_expression(args.phi))
    _emit(args, _operator_json(G), str(G))
    return EXIT_OK


def _cmd_compose(args) -> int:
    ops = [_operator(t) for t in args.operators]
    out = ops[0]
    for B in ops[1:]:
        out = compose(out, B)
    _emit(args, _operator_json(out), str(out))
    return EXIT_OK


def _grid(args) -> GridSpec:
    return GridSpec.parse(args.grid) if args.grid else GridSpec.square(-10.0, 10.0)


def _write_csv(path: str | None, field) -> None:
    if path is None:
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        field.write_csv(fh)


def _cmd_approx(args) -> int:
    A = _operator(args.operator)
    spec = _grid(args)
    payload: dict = {"operator": str(A)}
    lines = [f"operator: {A}"]
    target = A
    if args.scale_f is not None:
        target = scale_operator(A, parse_expression(args.scale_f), _mask(args.mask))
        payload["auxiliary"] = str(target)
        lines.append(f"auxiliary: {target}")
        deltas = coefficient_deltas(A, target, spec)
        payload["deltas"] = {f"{j},{k}": f.summary() for (j, k), f in deltas.items()}
        for (j, k), f in deltas.items():
            lines.append(f"delta a{j}{k}: max_abs={f.max_abs:.17g} mean_abs={f.mean_abs:.17g} nan_count={f.nan_count}")
    if args.root:
        root = args.root[0]
    else:
        simple = [r for r in roots(target) if r.is_simple]
        if not simple:
            raise UnresolvedRootsError("no simple root available; pass --root")
        root = simple[0]
    field = invariant_field(target, root, spec)
    payload["root"] = str(root)
    payload["invariant"] = to_text(field.source)
    payload["field"] = field.summary()
    lines.append(f"root: {root}")
    lines.append(f"inv[0] = {to_text(field.source)}")
    am = field.argmax
    lines.append(
        f"max_abs={field.max_abs:.17g} mean_abs={field.mean_abs:.17g} "
        f"argmax={'none' if am is None else f'{am[0]:.17g},{am[1]:.17g}'} nan_count={field.nan_count}"
    )
    _write_csv(args.csv, field)
    status = EXIT_OK
    if args.eps is not None:
        check = r_function_check(LinearCoeffs.from_operator(A), args.eps, spec)
        payload["r_check"] = check.to_json() | {"eps": args.eps}
        lines.append(f"R check (eps={args.eps:.17g}): holds={check.holds} worst={check.worst:.17g}")
        if not check.holds:
            status = EXIT_OBSTRUCTED
    _emit(args, payload, "\n".join(lines))
    return status


def _cmd_grid(args) -> int:
    e = parse_expression(_read(args.expression))
    field = sample(e, _grid(args))
    _write_csv(args.csv, field)
    summary = field.summary()
    text = "\n".join(f"{k}: {v}" for k, v in summary.items())
    _emit(args, {"expression": to_text(e)} | summary, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bkfactor",
        description="Factor bivariate linear partial differential operators and inspect their invariants.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def op_command(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("operator", help="operator text, e.g. 'Dx*Dy + x*Dx + 1' ('-' reads stdin)")
        p.add_argument("--json", action="store_true", help="emit JSON")
        return p

    p = sub.add_parser("parse", help="parse and print in canonical form")
    p.add_argument("text")
    p.add_argument("--expr", action="store_true", help="parse a coefficient expression, not an operator")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_parse)

    for name, func, help_text in (
        ("factor", _cmd_factor, "factor into first-order operators"),
        ("invariants", _cmd_invariants, "generalized invariants at every root"),
    ):
        p = op_command(name, help_text)
        p.add_argument("--root", action="append", help="user-supplied root omega, or 'inf' (repeatable)")
        p.add_argument("--riccati", action="append", help="candidate for the Riccati unknown r (repeatable)")
        if name == "factor":
            p.add_argument("--all", action="store_true", help="enumerate all chains")
        p.set_defaults(func=func)

    op_command("transpose", "formal transpose").set_defaults(func=_cmd_transpose)

    p = op_command("gauge", "conjugate by exp(phi)")
    p.add_argument("--phi", required=True, help="gauge function phi(x, y)")
    p.set_defaults(func=_cmd_gauge)

    p = sub.add_parser("compose", help="compose operators left to right")
    p.add_argument("operators", nargs="+")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_compose)

    p = op_command("approx", "invariant field of an (auxiliary) operator over a grid")
    p.add_argument("--scale-f", dest="scale_f", help="damping function f for the auxiliary operator")
    p.add_argument("--mask", help="coefficients to scale, e.g. '1,0;0,1;0,0' (default: below the symbol)")
    p.add_argument("--root", action="append", help="root selecting the left factor")
    p.add_argument("--grid", help="x0,x1,y0,y1[,nx,ny] (default -10,10,-10,10,200,200)")
    p.add_argument("--csv", help="write the invariant field as CSV")
    p.add_argument("--eps", type=float, help="also run the |a00 - R| < eps check (linear coefficients)")
    p.set_defaults(func=_cmd_approx)

    p = sub.add_parser("grid", help="sample an expression over a grid")
    p.add_argument("expression")
    p.add_argument("--grid", help="x0,x1,y0,y1[,nx,ny]")
    p.add_argument("--csv", help="write samples as CSV")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_grid)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UnresolvedRootsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNRESOLVED
    except (ParseError, FactorizationError, EvaluationError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
