"""Check the ordering of game values on random specs and summarise the gaps."""

import argparse
import random
from collections import Counter
from fractions import Fraction

from leakgames.channel import Channel, Prior
from leakgames.games import GameSpec, verify_hierarchy
from leakgames.vulnerability import BAYES


def random_spec(rng, max_size=3, den=6):
    nd, na, ns, no = (rng.randint(2, max_size) for _ in range(4))

    def dist(n):
        w = [rng.randint(0, den) for _ in range(n)]
        if not any(w):
            w[0] = 1
        return tuple(Fraction(a, sum(w)) for a in w)

    X, Y = tuple(range(ns)), tuple(range(no))
    chans = {(d, a): Channel(X, Y, tuple(dist(no) for _ in X)) for d in range(nd) for a in range(na)}
    return GameSpec(tuple(range(nd)), tuple(range(na)), chans, Prior(X, dist(ns)), BAYES)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("-n", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    rng = random.Random(args.seed)
    strict = Counter()
    bad = 0
    for _ in range(args.n):
        rep = verify_hierarchy(random_spec(rng))
        bad += not rep.ok
        for lhs, rel, rhs, _ in rep.checks:
            if rel == ">=" and rep.values[lhs] > rep.values[rhs]:
                strict[f"{lhs} > {rhs}"] += 1
        if rep.values["III"] > rep.values["IV"]:
            strict["III > IV"] += 1
        elif rep.values["III"] < rep.values["IV"]:
            strict["III < IV"] += 1
    print(f"{args.n} specs, {bad} with violations")
    for k, v in sorted(strict.items()):
        print(f"  {k}: strict in {v}")


if __name__ == "__main__":
    main()
