"""Password-checker study: payoff table, Game IV equilibrium and runtimes."""

import argparse
import time

from leakgames.choice import Mix
from leakgames.games import payoff_matrix, solve
from leakgames.numerics import decimal_string
from leakgames.scenarios import PASSWORD_TABLE, PasswordConfig, expected_iterations, password_game


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--constant-time", action="store_true", help="use the constant-time checker")
    args = parser.parse_args()

    cfg = PasswordConfig(constant_time=args.constant_time)
    spec = password_game(cfg)
    u = payoff_matrix(spec)
    print("order  " + "  ".join(f"{a:>8}" for a in spec.attacker_actions))
    for d, row in zip(spec.defender_actions, u):
        print(f"{d:>5}  " + "  ".join(f"{decimal_string(v, 6):>8}" for v in row))
        if not args.constant_time:
            print("  ref  " + "  ".join(f"{r:>8}" for r in PASSWORD_TABLE[d]))

    t0 = time.perf_counter()
    sol = solve(spec, "IV")
    print(f"\nGame IV value {sol.value} ~ {decimal_string(sol.value, 6)} ({time.perf_counter() - t0:.1f}s)")
    print("delta*:", {d: str(w) for d, w in sol.defender.mix.items()})
    print("alpha*:", {a: str(w) for a, w in sol.attacker.mix.items() if w})
    print("\nexpected iterations per guess under delta*:")
    for a in spec.attacker_actions:
        print(f"  {a}: {decimal_string(expected_iterations(cfg, sol.defender.mix, a), 6)}")
    point = Mix.point(spec.defender_actions, spec.defender_actions[0])
    print(f"order {spec.defender_actions[0]}, guess 101: "
          f"{decimal_string(expected_iterations(cfg, point, '101'), 6)} iterations")


if __name__ == "__main__":
    main()
