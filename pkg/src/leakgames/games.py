"""Leakage games I-VI: payoffs, equilibrium solvers and the payoff hierarchy.

Rows of every payoff table are defender actions (minimiser), columns are
attacker actions (maximiser). Ties are broken by declaration order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping, Optional, Sequence

from .channel import Channel, ChannelError, Prior
from .choice import Mix, hidden_choice, visible_choice
from .numerics import EQ, GE, LE, LinearProgram, LPResult, lp_solve
from .vulnerability import BAYES, Measure, gain_for, posterior_vulnerability

GAMES = ("I", "II", "III", "IV", "V", "VI")
DEFAULT_GUESS_BUDGET = 65536

ZERO = Fraction(0)
ONE = Fraction(1)


class GameSpecError(ValueError):
    pass


class CapacityError(RuntimeError):
    """The guess-function enumeration for Game IV exceeds the budget."""


class HierarchyViolation(AssertionError):
    pass


@dataclass(frozen=True)
class GameSpec:
    defender_actions: tuple
    attacker_actions: tuple
    channels: Mapping[tuple, Channel]
    prior: Prior
    measure: Measure = BAYES

    def __post_init__(self):
        if not self.defender_actions or not self.attacker_actions:
            raise GameSpecError("both players need at least one action")
        for acts, who in ((self.defender_actions, "defender"), (self.attacker_actions, "attacker")):
            if len(set(acts)) != len(acts):
                raise GameSpecError(f"duplicate {who} actions")
        ref = None
        for d in self.defender_actions:
            for a in self.attacker_actions:
                ch = self.channels.get((d, a))
                if ch is None:
                    raise GameSpecError(f"no channel for ({d!r}, {a!r})")
                if ref is None:
                    ref = ch
                elif not ch.same_type(ref):
                    raise GameSpecError(f"channel ({d!r}, {a!r}) differs in type from the others")
        extra = set(self.channels) - set(itertools.product(self.defender_actions, self.attacker_actions))
        if extra:
            raise GameSpecError(f"channels given for unknown action pairs: {sorted(map(str, extra))}")
        if ref.inputs != self.prior.secrets:
            raise GameSpecError("prior is not indexed by the channels' secrets")
        gain_for(self.measure, self.prior.secrets)

    @property
    def secrets(self) -> tuple:
        return self.prior.secrets

    @property
    def outputs(self) -> tuple:
        return self.channel(self.defender_actions[0], self.attacker_actions[0]).outputs

    def channel(self, d: Hashable, a: Hashable) -> Channel:
        return self.channels[(d, a)]

    def replace_channel(self, d: Hashable, a: Hashable, channel: Channel) -> "GameSpec":
        chans = dict(self.channels)
        chans[(d, a)] = channel
        return GameSpec(self.defender_actions, self.attacker_actions, chans, self.prior, self.measure)


@dataclass(frozen=True)
class Strategy:
    """``kind`` is ``pure`` (an action), ``mixed`` (a :class:`Mix`) or
    ``function`` (a response map from the opponent's actions)."""

    player: str
    kind: str
    action: Optional[Hashable] = None
    mix: Optional[Mix] = None
    function: Optional[Mapping] = None

    def describe(self):
        if self.kind == "pure":
            return self.action
        if self.kind == "mixed":
            return self.mix.as_dict()
        return dict(self.function)


@dataclass
class Solution:
    game: str
    value: Fraction
    defender: Strategy
    attacker: Strategy
    certificates: dict = field(default_factory=dict)


# --------------------------------------------------------------------------
# payoffs


def payoff_matrix(spec: GameSpec) -> list[list[Fraction]]:
    return [
        [posterior_vulnerability(spec.measure, spec.prior, spec.channel(d, a)) for a in spec.attacker_actions]
        for d in spec.defender_actions
    ]


def visible_payoff(u: Sequence[Sequence[Fraction]], delta: Sequence[Fraction], alpha: Sequence[Fraction]) -> Fraction:
    return sum(
        (dw * aw * u[i][j] for i, dw in enumerate(delta) if dw for j, aw in enumerate(alpha) if aw),
        ZERO,
    )


def _mix(actions: Sequence[Hashable], weights: Sequence[Fraction]) -> Mix:
    return Mix(tuple(actions), tuple(weights))


def hidden_vulnerability(spec: GameSpec, delta: Mix, a: Hashable) -> Fraction:
    """``V[pi |> hidden_choice_delta C_{d a}]``."""
    family = {d: spec.channel(d, a) for d in spec.defender_actions}
    return posterior_vulnerability(spec.measure, spec.prior, hidden_choice(family, delta))


def visible_vulnerability(spec: GameSpec, delta: Mix, a: Hashable) -> Fraction:
    family = {d: spec.channel(d, a) for d in spec.defender_actions}
    return posterior_vulnerability(spec.measure, spec.prior, visible_choice(family, delta))


def hidden_payoff(spec: GameSpec, delta: Mix, alpha: Mix) -> Fraction:
    """Game IV payoff: average over the attacker, hidden choice over the defender."""
    return sum((w * hidden_vulnerability(spec, delta, a) for a, w in alpha.items() if w), ZERO)


# --------------------------------------------------------------------------
# Game I


def _lowest_argmin(values: Sequence[Fraction]) -> int:
    return min(range(len(values)), key=lambda i: (values[i], i))


def _lowest_argmax(values: Sequence[Fraction]) -> int:
    return min(range(len(values)), key=lambda i: (-values[i], i))


def matrix_game_defender_lp(u: Sequence[Sequence[Fraction]]) -> LinearProgram:
    """min t  s.t.  sum_d delta_d u[d][a] <= t for all a;  delta in the simplex."""
    nd, na = len(u), len(u[0])
    cons = [([u[d][a] for d in range(nd)] + [-1], LE, 0) for a in range(na)]
    cons.append(([1] * nd + [0], EQ, 1))
    return LinearProgram.build([0] * nd + [1], cons, "min", [(0, None)] * nd + [(None, None)])


def matrix_game_attacker_lp(u: Sequence[Sequence[Fraction]]) -> LinearProgram:
    """max v  s.t.  sum_a alpha_a u[d][a] >= v for all d;  alpha in the simplex."""
    nd, na = len(u), len(u[0])
    cons = [([u[d][a] for a in range(na)] + [-1], GE, 0) for d in range(nd)]
    cons.append(([1] * na + [0], EQ, 1))
    return LinearProgram.build([0] * na + [1], cons, "max", [(0, None)] * na + [(None, None)])


def solve_matrix_game(u: Sequence[Sequence[Fraction]]) -> tuple[Fraction, list[Fraction], list[Fraction], dict]:
    """Exact minimax of a finite zero-sum game via the primal/dual LP pair."""
    nd, na = len(u), len(u[0])
    primal = lp_solve(matrix_game_defender_lp(u))
    dual = lp_solve(matrix_game_attacker_lp(u))
    assert primal.optimal and dual.optimal, "matrix games always have an optimum"
    delta = list(primal.x[:nd])
    alpha = list(dual.x[:na])
    certs = {"defender_lp": primal, "attacker_lp": dual, "duality_gap": primal.value - dual.value}
    return primal.value, delta, alpha, certs


def closed_form_2x2(u: Sequence[Sequence[Fraction]]) -> Optional[tuple[Fraction, Fraction]]:
    """``(delta*(d0), alpha*(a0))`` for a 2x2 game, or None when the formula
    does not apply (zero denominator or values outside [0, 1])."""
    (u00, u01), (u10, u11) = u
    den = u00 - u01 - u10 + u11
    if den == 0:
        return None
    d0 = (u11 - u10) / den
    a0 = (u11 - u01) / den
    if not (0 <= d0 <= 1 and 0 <= a0 <= 1):
        return None
    return d0, a0


def solve_game_i(spec: GameSpec) -> Solution:
    u = payoff_matrix(spec)
    value, delta, alpha, certs = solve_matrix_game(u)
    # saddle certificate: no pure deviation helps either player
    certs["defender_guarantee"] = [visible_payoff(u, delta, [int(j == a) for j in range(len(alpha))]) for a in range(len(alpha))]
    certs["attacker_guarantee"] = [visible_payoff(u, [int(i == d) for i in range(len(delta))], alpha) for d in range(len(delta))]
    certs["saddle"] = max(certs["defender_guarantee"]) <= value <= min(certs["attacker_guarantee"])
    if len(u) == 2 and len(u[0]) == 2:
        certs["closed_form"] = closed_form_2x2(u)
    certs["payoffs"] = u
    return Solution(
        "I",
        value,
        Strategy("defender", "mixed", mix=_mix(spec.defender_actions, delta)),
        Strategy("attacker", "mixed", mix=_mix(spec.attacker_actions, alpha)),
        certs,
    )


# --------------------------------------------------------------------------
# Games II and III (sequential, visible choice)


def solve_game_ii(spec: GameSpec) -> Solution:
    u = payoff_matrix(spec)
    D, A = spec.defender_actions, spec.attacker_actions
    responses = [_lowest_argmax(row) for row in u]
    worst = [u[i][responses[i]] for i in range(len(D))]
    value = min(worst)
    d_star = _lowest_argmin(worst)
    a_star = responses[d_star]
    profiles = [
        (D[i], A[j]) for i in range(len(D)) if worst[i] == value for j in range(len(A)) if u[i][j] == value
    ]
    return Solution(
        "II",
        value,
        Strategy("defender", "pure", action=D[d_star]),
        Strategy("attacker", "function", function={D[i]: A[responses[i]] for i in range(len(D))}),
        {"payoffs": u, "profile": (D[d_star], A[a_star]), "optimal_profiles": profiles, "row_max": worst},
    )


def solve_game_iii(spec: GameSpec) -> Solution:
    u = payoff_matrix(spec)
    D, A = spec.defender_actions, spec.attacker_actions
    cols = [[u[i][j] for i in range(len(D))] for j in range(len(A))]
    responses = [_lowest_argmin(col) for col in cols]
    best = [cols[j][responses[j]] for j in range(len(A))]
    value = max(best)
    a_star = _lowest_argmax(best)
    d_star = responses[a_star]
    profiles = [
        (D[i], A[j]) for j in range(len(A)) if best[j] == value for i in range(len(D)) if u[i][j] == value
    ]
    return Solution(
        "III",
        value,
        Strategy("defender", "function", function={A[j]: D[responses[j]] for j in range(len(A))}),
        Strategy("attacker", "pure", action=A[a_star]),
        {"payoffs": u, "profile": (D[d_star], A[a_star]), "optimal_profiles": profiles, "column_min": best},
    )


# --------------------------------------------------------------------------
# Games IV, V, VI (hidden choice)


def _gain_vectors(spec: GameSpec, a: Hashable) -> list[list[tuple[Fraction, ...]]]:
    """``vec[y][w][d] = sum_x pi(x) g(w, x) C_{d a}(x, y)``.

    Posterior vulnerability of the hidden choice ``delta`` for attacker
    action ``a`` is ``sum_y max_w <delta, vec[y][w]>``.
    """
    gain = gain_for(spec.measure, spec.secrets)
    chans = [spec.channel(d, a) for d in spec.defender_actions]
    pi = spec.prior.probs
    out = []
    for j in range(len(spec.outputs)):
        per_w = []
        for grow in gain.gains:
            per_w.append(
                tuple(
                    sum((p * g * ch.rows[x][j] for x, (p, g) in enumerate(zip(pi, grow)) if p and g and ch.rows[x][j]), ZERO)
                    for ch in chans
                )
            )
        out.append(per_w)
    return out


def _epigraph_rows(vectors, n_def: int, s_index: int, width: int) -> list:
    """Rows ``<delta, v> - s <= 0`` for the distinct vectors ``v``."""
    rows = []
    for v in dict.fromkeys(vectors):
        coeffs = [ZERO] * width
        coeffs[:n_def] = v
        coeffs[s_index] = -ONE
        rows.append((coeffs, LE, 0))
    return rows


def hidden_epigraph_lp(spec: GameSpec, actions: Optional[Sequence[Hashable]] = None,
                       weights: Optional[Sequence[Fraction]] = None) -> LinearProgram:
    """Epigraph LP over the defender simplex for hidden choice.

    With ``weights=None`` it minimises ``max_a V[pi |> hidden_delta C_da]``
    over ``actions`` (variables: delta, t, s_{a,y}). With ``weights`` it
    minimises ``sum_a weights[a] * V[...]`` instead (no ``t`` row).
    Variable order: delta_d..., t, s_{a,y}... .
    """
    actions = list(spec.attacker_actions if actions is None else actions)
    nd, ny = len(spec.defender_actions), len(spec.outputs)
    t_index = nd
    width = nd + 1 + len(actions) * ny
    cons = []
    for k, a in enumerate(actions):
        vecs = _gain_vectors(spec, a)
        for j in range(ny):
            cons.extend(_epigraph_rows(vecs[j], nd, nd + 1 + k * ny + j, width))
        if weights is None:
            coeffs = [ZERO] * width
            for j in range(ny):
                coeffs[nd + 1 + k * ny + j] = ONE
            coeffs[t_index] = -ONE
            cons.append((coeffs, LE, 0))
    cons.append(([ONE] * nd + [ZERO] * (width - nd), EQ, 1))
    objective = [ZERO] * width
    if weights is None:
        objective[t_index] = ONE
    else:
        for k, w in enumerate(weights):
            for j in range(ny):
                objective[nd + 1 + k * ny + j] = w
    bounds = [(0, None)] * nd + [(None, None)] * (width - nd)
    return LinearProgram.build(objective, cons, "min", bounds)


def most_spread_optimum(lp: LinearProgram, value: Fraction, n_mix: int) -> LPResult:
    """Among optima of ``lp`` pick one minimising the largest of the first
    ``n_mix`` variables (a probability vector).

    Hidden-choice games often have a face of optimal defender mixes; this
    picks the least predictable one, and returns the uniform mix whenever
    it is optimal.
    """
    n = lp.n_vars
    width = n + 1
    cons = [(list(c.coeffs) + [ZERO], c.relation, c.rhs) for c in lp.constraints]
    sign = ONE if lp.sense == "min" else -ONE
    cons.append(([sign * c for c in lp.objective] + [ZERO], LE, sign * value))
    for i in range(n_mix):
        row = [ZERO] * width
        row[i] = ONE
        row[n] = -ONE
        cons.append((row, LE, 0))
    bounds = list(lp.bounds if lp.bounds is not None else [(ZERO, None)] * n) + [(None, None)]
    res = lp_solve(LinearProgram.build([ZERO] * n + [ONE], cons, "min", bounds))
    assert res.optimal
    x = res.x[:n]
    return LPResult(res.status, x, sum((c * v for c, v in zip(lp.objective, x)), ZERO), res.pivots)


def _defender_min_max(spec: GameSpec) -> tuple[Fraction, list[Fraction], LPResult]:
    lp = hidden_epigraph_lp(spec)
    res = lp_solve(lp)
    assert res.optimal
    nd = len(spec.defender_actions)
    res = most_spread_optimum(lp, res.value, nd)
    return res.value, list(res.x[:nd]), res


def _undominated(vectors: Sequence[tuple[Fraction, ...]]) -> list[int]:
    """Indices of vectors not weakly dominated by an earlier-kept or other vector.

    Equal vectors keep the lowest index.
    """
    keep = []
    for i, v in enumerate(vectors):
        dominated = False
        for k, w in enumerate(vectors):
            if k == i:
                continue
            if all(b >= c for b, c in zip(w, v)) and (w != v or k < i):
                dominated = True
                break
        if not dominated:
            keep.append(i)
    return keep


def extended_game(spec: GameSpec, budget: int = DEFAULT_GUESS_BUDGET, prune: bool = True):
    """Payoff table of the game where the attacker picks ``(a, guess function)``.

    Returns ``(columns, table)`` with ``columns[k] = (a, {y: w})`` and
    ``table[d][k]`` the expected gain of that column against pure ``d``.
    Guesses dominated at a single output are dropped when ``prune`` is set;
    this removes only weakly dominated columns, so the game value and at
    least one equilibrium are preserved.
    """
    gain = gain_for(spec.measure, spec.secrets)
    n_w, n_y = len(gain.guesses), len(spec.outputs)
    if n_w ** n_y > budget:
        raise CapacityError(
            f"guess functions |W|^|Y| = {n_w}^{n_y} = {n_w ** n_y} exceed the budget of {budget}"
        )
    nd = len(spec.defender_actions)
    columns, table_cols = [], []
    for a in spec.attacker_actions:
        vecs = _gain_vectors(spec, a)
        choices = [_undominated(vecs[j]) if prune else list(range(n_w)) for j in range(n_y)]
        for combo in itertools.product(*choices):
            col = [sum((vecs[j][w][d] for j, w in enumerate(combo)), ZERO) for d in range(nd)]
            columns.append((a, {spec.outputs[j]: gain.guesses[w] for j, w in enumerate(combo)}))
            table_cols.append(col)
    table = [[c[d] for c in table_cols] for d in range(nd)]
    return columns, table


def solve_game_iv(spec: GameSpec, budget: int = DEFAULT_GUESS_BUDGET) -> Solution:
    D, A = spec.defender_actions, spec.attacker_actions
    value, delta, epi = _defender_min_max(spec)
    dmix = _mix(D, delta)

    columns, table = extended_game(spec, budget)
    ext = lp_solve(matrix_game_attacker_lp(table))
    assert ext.optimal
    beta = ext.x[:-1]
    alpha = [ZERO] * len(A)
    for (a, _), b in zip(columns, beta):
        if b:
            alpha[A.index(a)] += b
    amix = _mix(A, alpha)

    per_action = [hidden_vulnerability(spec, dmix, a) for a in A]
    # the attacker's marginal must hold the defender to the value
    best_reply = lp_solve(hidden_epigraph_lp(spec, weights=alpha))
    certs = {
        "epigraph_lp": epi,
        "extended_lp": ext,
        "extended_value": ext.value,
        "extended_columns": len(columns),
        "values_agree": ext.value == value,
        "defender_per_action": dict(zip(A, per_action)),
        "defender_guarantee": max(per_action),
        "attacker_guarantee": best_reply.value,
        "saddle": max(per_action) == value == best_reply.value,
        "guess_strategy": [(columns[k][0], columns[k][1], b) for k, b in enumerate(beta) if b],
    }
    return Solution(
        "IV",
        value,
        Strategy("defender", "mixed", mix=dmix),
        Strategy("attacker", "mixed", mix=amix),
        certs,
    )


def solve_game_v(spec: GameSpec, budget: int = DEFAULT_GUESS_BUDGET) -> Solution:
    """Defender-first with hidden choice: the attacker's information set is
    all of D, so this is Game IV."""
    sol = solve_game_iv(spec, budget)
    sol.game = "V"
    sol.certificates["information_partition"] = [list(spec.defender_actions)]
    return sol


def defender_response_hidden(spec: GameSpec, a: Hashable) -> tuple[Fraction, list[Fraction]]:
    """``min_delta V[pi |> hidden_delta C_{d a}]`` and a minimising delta."""
    lp = hidden_epigraph_lp(spec, actions=[a], weights=[ONE])
    res = lp_solve(lp)
    assert res.optimal
    nd = len(spec.defender_actions)
    res = most_spread_optimum(lp, res.value, nd)
    return res.value, list(res.x[:nd])


def solve_game_vi(spec: GameSpec) -> Solution:
    D, A = spec.defender_actions, spec.attacker_actions
    responses = [defender_response_hidden(spec, a) for a in A]
    values = [m for m, _ in responses]
    k = _lowest_argmax(values)
    value = values[k]
    return Solution(
        "VI",
        value,
        Strategy("defender", "function", function={a: _mix(D, responses[i][1]) for i, a in enumerate(A)}),
        Strategy("attacker", "pure", action=A[k]),
        {
            "per_action": dict(zip(A, values)),
            "defender_mix": _mix(D, responses[k][1]),
            "optimal_actions": [a for a, m in zip(A, values) if m == value],
        },
    )


SOLVERS = {
    "I": solve_game_i,
    "II": solve_game_ii,
    "III": solve_game_iii,
    "IV": solve_game_iv,
    "V": solve_game_v,
    "VI": solve_game_vi,
}


def solve(spec: GameSpec, game: str, budget: int = DEFAULT_GUESS_BUDGET) -> Solution:
    game = game.upper()
    if game not in SOLVERS:
        raise ValueError(f"unknown game {game!r}; expected one of {', '.join(GAMES)}")
    if game in ("IV", "V"):
        return SOLVERS[game](spec, budget)
    return SOLVERS[game](spec)


# --------------------------------------------------------------------------
# hierarchy


@dataclass
class HierarchyReport:
    values: dict
    checks: list  # (lhs, relation, rhs, holds)
    incomparable: tuple = ("III", "IV")
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c[3] for c in self.checks)

    @property
    def violations(self) -> list:
        return [c for c in self.checks if not c[3]]


_ORDER = [
    ("II", ">=", "I"),
    ("I", ">=", "III"),
    ("I", ">=", "IV"),
    ("IV", "==", "V"),
    ("V", ">=", "VI"),
    ("III", ">=", "VI"),
]


def verify_hierarchy(spec: GameSpec, budget: int = DEFAULT_GUESS_BUDGET, strict: bool = False,
                     solutions: Optional[dict] = None) -> HierarchyReport:
    sols = solutions or {g: solve(spec, g, budget) for g in GAMES}
    values = {g: sols[g].value for g in GAMES}
    checks = []
    for lhs, rel, rhs in _ORDER:
        a, b = values[lhs], values[rhs]
        checks.append((lhs, rel, rhs, a >= b if rel == ">=" else a == b))
    report = HierarchyReport(values, checks)
    if strict and not report.ok:
        detail = "; ".join(f"{l}={values[l]} {r} {rr}={values[rr]} fails" for l, r, rr, _ in report.violations)
        raise HierarchyViolation(detail)
    return report
