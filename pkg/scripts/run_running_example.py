"""Solve all six games on the running example and its C11 := C00 variant."""

import argparse

from leakgames.games import GAMES, payoff_matrix, solve, verify_hierarchy
from leakgames.numerics import decimal_string, format_rational
from leakgames.scenarios import running_example, running_example_swapped


def report(name, spec):
    print(f"== {name}")
    u = payoff_matrix(spec)
    print("payoffs:", [[format_rational(v) for v in row] for row in u])
    sols = {g: solve(spec, g) for g in GAMES}
    for g, sol in sols.items():
        extra = ""
        if sol.defender.kind == "mixed":
            extra = "  delta* = " + ", ".join(format_rational(w) for w in sol.defender.mix.weights)
        print(f"  {g:>3}: {format_rational(sol.value):>5}  {decimal_string(sol.value, 6)}{extra}")
    hier = verify_hierarchy(spec, solutions=sols)
    print("  hierarchy:", "ok" if hier.ok else hier.violations)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--only", choices=("base", "swapped"))
    args = parser.parse_args()
    if args.only != "swapped":
        report("running example", running_example())
    if args.only != "base":
        report("running example, C11 := C00", running_example_swapped())


if __name__ == "__main__":
    main()
