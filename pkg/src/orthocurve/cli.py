"""Command-line entry point.

    orthocurve build --family ncp --n 5 -o nc5.json
    orthocurve check --family ncw --type D4 --checks cat0 --json
    orthocurve check --input nc5.json --checks validate,lattice,spindles
    orthocurve report coxeter
    orthocurve verify report.json
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from .errors import OrthocurveError
from .poset import save_poset
from .report import (
    CHECKS,
    FAMILIES,
    CheckRequest,
    FamilySpec,
    build_family,
    execute_check,
    verify_report,
)

RANK4_TYPES = ("A4", "B4", "D4", "F4", "H4")
STANDARD_POSETS = (
    FamilySpec("boolean", n=3),
    FamilySpec("boolean", n=4),
    FamilySpec("partition", n=4),
    FamilySpec("ncp", n=4),
    FamilySpec("ncp", n=5),
    FamilySpec("subspace", n=3, q=2),
    FamilySpec("subspace", n=4, q=2),
) + tuple(FamilySpec("ncw", type=t) for t in RANK4_TYPES)


def _family_args(p: argparse.ArgumentParser, required: bool) -> None:
    p.add_argument("--family", choices=FAMILIES, required=required)
    p.add_argument("--n", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--type", dest="ctype", metavar="TYPE")


def _spec(args: argparse.Namespace) -> FamilySpec:
    return FamilySpec(args.family, args.n, args.q, args.ctype)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orthocurve", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="generate a named poset as JSON")
    _family_args(b, required=True)
    b.add_argument("-o", "--output", type=Path)

    c = sub.add_parser("check", help="run checks on a poset")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", type=Path)
    src.add_argument("--family", choices=FAMILIES)
    c.add_argument("--n", type=int)
    c.add_argument("--q", type=int)
    c.add_argument("--type", dest="ctype", metavar="TYPE")
    c.add_argument("--checks", default=",".join(CHECKS))
    c.add_argument("--max-girth", type=int)
    c.add_argument("--json", action="store_true")
    c.add_argument("-o", "--output", type=Path)

    r = sub.add_parser("report", help="batch tables")
    r.add_argument("table", choices=("coxeter", "standard"))
    r.add_argument("--json", action="store_true")

    v = sub.add_parser("verify", help="re-validate the witnesses of a JSON report")
    v.add_argument("report", type=Path)
    return parser


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        path.write_text(text if text.endswith("\n") else text + "\n")


def _dump(obj: Any) -> str:
    return json.dumps(obj, indent=1, sort_keys=True)


def _table(specs: Sequence[FamilySpec], as_json: bool) -> str:
    rows = []
    for spec in specs:
        rep = execute_check(CheckRequest(spec, checks=("validate", "lattice", "modular", "cat0")))
        c = rep.checks
        w = c["cat0"]["witness"]
        rows.append({
            "poset": rep.poset["name"],
            "size": rep.poset["size"],
            "rank": rep.poset["rank"],
            "lattice": c["lattice"]["is_lattice"],
            "modular": c["modular"]["is_modular"],
            "cat0": c["cat0"]["status"],
            "witness_girth": None if w is None or w["kind"] != "spindle" else w["girth"],
            "witness_length_over_pi": None if w is None or w["kind"] != "spindle" else w["length_over_pi"],
        })
    if as_json:
        return _dump({"schema": "orthocurve/1", "rows": rows})
    head = f"{'poset':<12}{'size':>6}{'rank':>6}  {'lattice':<8}{'modular':<8}{'cat0':<11}witness"
    lines = [head, "-" * len(head)]
    for row in rows:
        mod = "-" if row["modular"] is None else "yes" if row["modular"] else "no"
        wit = "" if row["witness_girth"] is None else f"girth {row['witness_girth']}, {row['witness_length_over_pi']:.4f}π"
        lines.append(
            f"{row['poset']:<12}{row['size']:>6}{row['rank']:>6}  "
            f"{'yes' if row['lattice'] else 'no':<8}{mod:<8}{row['cat0']:<11}{wit}".rstrip()
        )
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "build":
            P = build_family(_spec(args))
            if args.output is None:
                _emit(_dump(P.to_dict()), None)
            else:
                save_poset(P, args.output)
        elif args.command == "check":
            source: FamilySpec | str = str(args.input) if args.input else _spec(args)
            checks = tuple(s.strip() for s in args.checks.split(",") if s.strip())
            req = CheckRequest(source, checks, args.max_girth, "json" if args.json else "text")
            rep = execute_check(req)
            _emit(_dump(rep.to_dict()) if args.json else rep.to_text(), args.output)
        elif args.command == "report":
            specs = [FamilySpec("ncw", type=t) for t in RANK4_TYPES] if args.table == "coxeter" else STANDARD_POSETS
            _emit(_table(specs, args.json), None)
        elif args.command == "verify":
            problems = verify_report(json.loads(args.report.read_text()))
            for p in problems:
                print(p, file=sys.stderr)
            if problems:
                return 1
            print("all witnesses re-validated")
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON: {exc}", file=sys.stderr)
        return 2
    except OrthocurveError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
