"""Command-line front end.

Exit codes: 0 ok, 1 failed check, 2 input error, 3 capacity error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .casestudy import CASESTUDIES
from .channel import equivalence_report
from .games import DEFAULT_GUESS_BUDGET, GAMES, CapacityError, GameSpec, Solution, solve, verify_hierarchy
from .numerics import decimal_string, format_rational
from .scenarios import (
    LISTED_GAME_VALUES,
    PasswordConfig,
    password_game,
    running_example,
    running_example_swapped,
)
from .specio import SpecParseError, action_key, action_text, load_spec, spec_to_dict

BUDGET_ENV = "LEAKGAMES_GUESS_BUDGET"

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAPACITY = 0, 1, 2, 3

BUILTINS: dict[str, Callable[[], GameSpec]] = {
    "running-example": running_example,
    "running-example-swapped": running_example_swapped,
    "password": lambda: password_game(PasswordConfig()),
    "password-constant-time": lambda: password_game(PasswordConfig(constant_time=True)),
}


class InputError(Exception):
    pass


def _budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_GUESS_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise InputError(f"{BUDGET_ENV} must be positive")
    return value


def _load(args) -> GameSpec:
    if args.spec and args.builtin:
        raise InputError("give either --spec or --builtin, not both")
    if args.spec:
        return load_spec(args.spec)
    name = args.builtin or "running-example"
    if name not in BUILTINS:
        raise InputError(f"unknown builtin {name!r}; choose from {', '.join(BUILTINS)}")
    return BUILTINS[name]()


def _value_json(q: Fraction) -> dict:
    return {"exact": format_rational(q), "decimal": decimal_string(q, 12)}


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, dict):
        return {action_text(k) if not isinstance(k, str) else k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "as_dict"):
        return _jsonable(obj.as_dict())
    return obj


def _compress_mix(weights: dict) -> str:
    vals = list(weights.values())
    if len(set(vals)) == 1:
        return f"{format_rational(vals[0])} x{len(vals)}"
    return ", ".join(f"{action_text(k)}: {format_rational(v)}" for k, v in weights.items())


def _strategy_text(strategy) -> str:
    if strategy.kind == "pure":
        return f"pure {action_text(strategy.action)}"
    if strategy.kind == "mixed":
        return f"mixed ({_compress_mix(strategy.mix.as_dict())})"
    parts = []
    for k, v in strategy.function.items():
        shown = f"({_compress_mix(v.as_dict())})" if hasattr(v, "as_dict") else action_text(v)
        parts.append(f"{action_text(k)} -> {shown}")
    return "response " + "; ".join(parts)


def _solution_dict(sol: Solution) -> dict:
    certs = {}
    for key in ("duality_gap", "saddle", "closed_form", "optimal_profiles", "profile", "values_agree",
                "extended_value", "defender_guarantee", "attacker_guarantee", "per_action", "optimal_actions"):
        if key in sol.certificates:
            certs[key] = _jsonable(sol.certificates[key])
    return {
        "game": sol.game,
        "value": _value_json(sol.value),
        "defender": {"kind": sol.defender.kind, "strategy": _jsonable(sol.defender.describe())},
        "attacker": {"kind": sol.attacker.kind, "strategy": _jsonable(sol.attacker.describe())},
        "certificates": certs,
    }


def _csv(rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def cmd_solve(args) -> int:
    spec = _load(args)
    sol = solve(spec, args.game, _budget())
    if args.format == "json":
        print(json.dumps(_solution_dict(sol), indent=2))
    elif args.format == "csv":
        print(_csv([
            ["game", "value", "decimal", "defender", "attacker"],
            [sol.game, format_rational(sol.value), decimal_string(sol.value, 12),
             _strategy_text(sol.defender), _strategy_text(sol.attacker)],
        ]), end="")
    else:
        print(f"Game {sol.game}")
        print(f"  value     {format_rational(sol.value)}  ({decimal_string(sol.value, 12)})")
        print(f"  defender  {_strategy_text(sol.defender)}")
        print(f"  attacker  {_strategy_text(sol.attacker)}")
        for key in ("profile", "optimal_profiles", "closed_form", "saddle", "values_agree"):
            if key in sol.certificates:
                print(f"  {key:<9} {_jsonable(sol.certificates[key])}")
    return EXIT_OK


def _listed_note(args) -> list[str]:
    if args.spec or (args.builtin or "running-example") != "running-example":
        return []
    return [
        f"listed value for IV/V is {format_rational(LISTED_GAME_VALUES['IV'])}; "
        "the computed equilibrium (4/7, 4/7) has payoff 5/7"
    ]


def cmd_compare(args) -> int:
    spec = _load(args)
    report = verify_hierarchy(spec, _budget())
    notes = _listed_note(args)
    if args.format == "csv":
        rows = [["game", "value", "decimal"]]
        rows += [[g, format_rational(report.values[g]), decimal_string(report.values[g], 12)] for g in GAMES]
        rows += [["check", f"{l} {r} {rr}", "holds" if ok else "VIOLATED"] for l, r, rr, ok in report.checks]
        rows.append(["check", "III ? IV", "incomparable"])
        print(_csv(rows), end="")
    elif args.format == "json":
        print(json.dumps({
            "values": {g: _value_json(v) for g, v in report.values.items()},
            "checks": [{"relation": f"{l} {r} {rr}", "holds": ok} for l, r, rr, ok in report.checks],
            "incomparable": list(report.incomparable),
            "notes": notes,
        }, indent=2))
    else:
        for g in GAMES:
            v = report.values[g]
            print(f"{g:>4}  {format_rational(v):>14}  {decimal_string(v, 12)}")
        for l, r, rr, ok in report.checks:
            print(f"  {l} {r} {rr}: {'holds' if ok else 'VIOLATED'}")
        print("  III vs IV: incomparable")
        for note in notes:
            print(f"  note: {note}")
    return EXIT_OK if report.ok else EXIT_FAIL


def _channel_ref(spec: GameSpec, ref: str):
    for d in spec.defender_actions:
        for a in spec.attacker_actions:
            if action_key(d, a) == ref:
                return spec.channel(d, a)
    raise InputError(f"unknown channel reference {ref!r}; use \"<d>|<a>\"")


def cmd_equiv(args) -> int:
    spec = _load(args)
    c1, c2 = _channel_ref(spec, args.first), _channel_ref(spec, args.second)
    rep = equivalence_report(c1, c2)
    if args.format == "json":
        print(json.dumps(_jsonable(rep), indent=2))
        return EXIT_OK
    if rep["equivalent"]:
        print(f"{args.first} and {args.second} are equivalent")
        print(f"  columns of {args.first} as combinations of columns of {args.second} (zero-extended):")
        outs = list(c2.outputs) + ["zero"]
        for j, y in enumerate(c1.outputs):
            coeffs = {outs[k]: row[j] for k, row in enumerate(rep["c1_from_c2"]) if row[j]}
            shown = ", ".join(f"{format_rational(w)}*{action_text(o)}" for o, w in coeffs.items()) or "0"
            print(f"    {action_text(y)} = {shown}")
    else:
        fail = rep.get("failing", {})
        ref = args.first if fail.get("channel") == "first" else args.second
        print(f"{args.first} and {args.second} are NOT equivalent")
        if fail:
            col = ", ".join(map(format_rational, fail["column"]))
            print(f"  column {action_text(fail['output'])} of {ref} ({col}) is not matched by the other channel")
    return EXIT_OK


def cmd_casestudy(args) -> int:
    if args.name not in CASESTUDIES:
        raise InputError(f"unknown case study {args.name!r}; choose from {', '.join(CASESTUDIES)}")
    checks = CASESTUDIES[args.name]()
    width = max(len(c.name) for c in checks)
    for c in checks:
        mark = "PASS" if c.passed else "FAIL"
        print(f"{mark}  {c.name:<{width}}  computed {c.computed}  expected {c.expected} ({c.tolerance})")
        if c.note:
            print(f"      note: {c.note}")
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if not failed else EXIT_FAIL


def cmd_export(args) -> int:
    spec = _load(args)
    print(json.dumps(spec_to_dict(spec), indent=2))
    return EXIT_OK


def _add_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--spec", help="game spec JSON file")
    p.add_argument("--builtin", help=f"built-in scenario ({', '.join(BUILTINS)})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="leakgames", description="Solve information leakage games exactly.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one game variant")
    p.add_argument("--game", required=True, type=str.upper, choices=GAMES)
    _add_source(p)
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("compare", help="solve all six games and check their ordering")
    _add_source(p)
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("equiv", help="decide equivalence of two channels of a spec")
    _add_source(p)
    p.add_argument("first", help='channel reference "d|a"')
    p.add_argument("second", help='channel reference "d|a"')
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("casestudy", help="regenerate the reference numbers of a scenario")
    p.add_argument("name")
    p.set_defaults(func=cmd_casestudy)

    p = sub.add_parser("export", help="print a spec as JSON")
    _add_source(p)
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (SpecParseError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY


if __name__ == "__main__":
    sys.exit(main())
