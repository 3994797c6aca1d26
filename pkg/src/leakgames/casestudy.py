"""Regenerate the quoted numbers of the two built-in scenarios and compare
each against its reference value."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .choice import Mix
from .games import GAMES, payoff_matrix, solve, verify_hierarchy
from .numerics import decimal_string, format_rational, parse_rational
from .scenarios import (
    PASSWORD_REPORTED,
    RUNNING_PAYOFFS,
    PASSWORD_TABLE,
    LISTED_GAME_VALUES,
    PasswordConfig,
    expected_iterations,
    password_channel,
    password_game,
    running_example,
    running_example_swapped,
)
from .vulnerability import BAYES, posterior_vulnerability, prior_vulnerability

TOL_4DP = Fraction(5, 100000)
TOL_RUNTIME = Fraction(2, 10000)


@dataclass
class Check:
    name: str
    computed: str
    expected: str
    tolerance: str
    passed: bool
    note: str = ""


def _q(x: Fraction) -> str:
    return format_rational(x)


def _exact(name, computed, expected, note="") -> Check:
    return Check(name, _q(computed), _q(expected), "exact", computed == expected, note)


def _close(name, computed: Fraction, expected: str, tol: Fraction, note="") -> Check:
    ref = parse_rational(expected)
    return Check(
        name, decimal_string(computed, 6), expected, f"±{float(tol):g}", abs(computed - ref) <= tol, note
    )


def _at_most(name, computed: Fraction, bound: str, tol: Fraction, note="") -> Check:
    ref = parse_rational(bound)
    return Check(name, decimal_string(computed, 6), f"<= {bound}", f"+{float(tol):g}", computed <= ref + tol, note)


def running_example_checks() -> list[Check]:
    spec = running_example()
    D, A = spec.defender_actions, spec.attacker_actions
    u = payoff_matrix(spec)
    checks = [
        Check("payoff matrix", str([[_q(v) for v in r] for r in u]),
              str([[_q(v) for v in r] for r in RUNNING_PAYOFFS]), "exact", [tuple(r) for r in u] == list(RUNNING_PAYOFFS))
    ]
    sols = {g: solve(spec, g) for g in GAMES}

    g1 = sols["I"]
    checks.append(_exact("game I value", g1.value, LISTED_GAME_VALUES["I"]))
    checks.append(_exact("game I delta*(0) (LP)", g1.defender.mix[0], Fraction(2, 5)))
    checks.append(_exact("game I alpha*(0) (LP)", g1.attacker.mix[0], Fraction(2, 5)))
    cf = g1.certificates.get("closed_form")
    checks.append(Check("game I closed form (delta*(0), alpha*(0))", str(cf and tuple(map(_q, cf))),
                        "('2/5', '2/5')", "exact", cf == (Fraction(2, 5), Fraction(2, 5))))

    g2 = sols["II"]
    checks.append(_exact("game II value", g2.value, LISTED_GAME_VALUES["II"]))
    profiles = set(g2.certificates["optimal_profiles"])
    checks.append(Check("game II optimal profiles", str(sorted(profiles)), "[(0, 1), (1, 0)]", "exact",
                        profiles == {(0, 1), (1, 0)}))
    g3 = sols["III"]
    checks.append(_exact("game III value", g3.value, LISTED_GAME_VALUES["III"]))
    checks.append(Check("game III profile", str(g3.certificates["profile"]), "(1, 1)", "exact",
                        g3.certificates["profile"] == (1, 1)))

    g4 = sols["IV"]
    checks.append(_exact("game IV delta*(0)", g4.defender.mix[0], Fraction(4, 7)))
    checks.append(_exact("game IV alpha*(0)", g4.attacker.mix[0], Fraction(4, 7)))
    checks.append(_exact("game IV value (epigraph = extended game)", g4.value, Fraction(5, 7),
                         note=f"listed ordering gives {_q(LISTED_GAME_VALUES['IV'])}; U(4/7, q) = 5/7 for every q"))
    checks.append(Check("game IV value cross-check", _q(g4.certificates["extended_value"]), _q(g4.value),
                        "exact", g4.certificates["values_agree"] and g4.certificates["saddle"]))
    g5 = sols["V"]
    checks.append(Check("game V equals game IV", _q(g5.value), _q(g4.value), "exact",
                        g5.value == g4.value and g5.defender.mix == g4.defender.mix
                        and g5.attacker.mix == g4.attacker.mix))
    g6 = sols["VI"]
    checks.append(_exact("game VI value", g6.value, LISTED_GAME_VALUES["VI"]))
    p0 = g6.defender.function[A[0]][D[0]]
    p1 = g6.defender.function[A[1]][D[0]]
    checks.append(_exact("game VI defender p for a=0", p0, Fraction(1, 4),
                         note=f"computed p=1/4 occurs for a=1 (p={_q(p1)}); a=0 is minimised at p={_q(p0)}"))

    report = verify_hierarchy(spec, solutions=sols)
    checks.append(Check("hierarchy II>=I>=III, I>=IV=V>=VI", str({g: _q(v) for g, v in report.values.items()}),
                        "all inequalities hold", "exact", report.ok))

    swapped = running_example_swapped()
    checks.append(_exact("C11:=C00 game III value", solve(swapped, "III").value, Fraction(1, 2)))
    checks.append(_exact("C11:=C00 game IV value", solve(swapped, "IV").value, Fraction(2, 3),
                         note="min_p max(1 - p/2, (1 + p)/2) is attained at p=1/2"))
    return checks


def password_checks() -> list[Check]:
    cfg = PasswordConfig()
    spec = password_game(cfg)
    u = payoff_matrix(spec)
    off = [
        (d, a, u[i][j])
        for i, d in enumerate(spec.defender_actions)
        for j, a in enumerate(spec.attacker_actions)
        if abs(u[i][j] - parse_rational(PASSWORD_TABLE[d][j])) > TOL_4DP
    ]
    worst = max(
        abs(u[i][j] - parse_rational(PASSWORD_TABLE[d][j]))
        for i, d in enumerate(spec.defender_actions)
        for j in range(len(spec.attacker_actions))
    )
    checks = [
        Check("password payoff table (48 entries)", f"max |diff| = {decimal_string(worst, 6)}", "published table", "±5e-05",
              not off, "; ".join(f"{d}/{a}={decimal_string(v, 5)}" for d, a, v in off))
    ]
    pi = cfg.prior()
    checks.append(_close("prior Bayes vulnerability", prior_vulnerability(BAYES, pi),
                         PASSWORD_REPORTED["prior_vulnerability"], TOL_4DP))
    checks.append(_close("V[pi |> C_123,101]", posterior_vulnerability(BAYES, pi, spec.channel("123", "101")),
                         PASSWORD_REPORTED["posterior_123_101"], TOL_4DP))
    cons = PasswordConfig(constant_time=True)
    checks.append(_close("V[pi |> C_cons,101]", posterior_vulnerability(BAYES, pi, password_channel(cons, (1, 2, 3), "101")),
                         PASSWORD_REPORTED["posterior_cons_101"], TOL_4DP))

    sol = solve(spec, "IV")
    uniform = Mix.uniform(spec.defender_actions)
    checks.append(Check("game IV defender equilibrium", str([_q(w) for w in sol.defender.mix.weights]),
                        "uniform 1/6", "exact", sol.defender.mix == uniform))
    checks.append(_at_most("game IV value", sol.value, PASSWORD_REPORTED["game_iv_bound"], TOL_4DP))
    runtimes = [expected_iterations(cfg, sol.defender.mix, a) for a in spec.attacker_actions]
    checks.append(_at_most("max_a expected iterations under delta*", max(runtimes),
                           PASSWORD_REPORTED["iterations_bound"], TOL_RUNTIME))
    const = {expected_iterations(cons, sol.defender.mix, a) for a in spec.attacker_actions}
    checks.append(Check("constant-time expected iterations", str(sorted(map(_q, const))), "3", "exact", const == {3}))
    point = Mix.point(spec.defender_actions, "123")
    checks.append(_close("expected iterations C_123,101", expected_iterations(cfg, point, "101"),
                         PASSWORD_REPORTED["iterations_123_101"], TOL_RUNTIME))
    return checks


CASESTUDIES: dict[str, Callable[[], list[Check]]] = {
    "running-example": running_example_checks,
    "password": password_checks,
}
