import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leakgames.channel import Channel, Prior
from leakgames.choice import Mix
from leakgames.games import (
    GAMES,
    CapacityError,
    GameSpec,
    GameSpecError,
    HierarchyViolation,
    closed_form_2x2,
    extended_game,
    hidden_payoff,
    hidden_vulnerability,
    payoff_matrix,
    solve,
    solve_matrix_game,
    verify_hierarchy,
)
from leakgames.scenarios import running_example
from leakgames.vulnerability import BAYES, GainFunction

import oracles
import props
from strategies import fractions, game_specs, mixes

F = Fraction
PROPS = settings(max_examples=60, deadline=None)


def test_matching_pennies_closed_form():
    u = [[F(1), F(0)], [F(0), F(1)]]
    assert closed_form_2x2(u) == (F(1, 2), F(1, 2))
    value, delta, alpha, certs = solve_matrix_game(u)
    assert value == F(1, 2) and delta == alpha == [F(1, 2), F(1, 2)]
    assert certs["duality_gap"] == 0


def test_closed_form_declines_pure_saddle():
    assert closed_form_2x2([[F(1), F(2)], [F(3), F(4)]]) is None


@settings(max_examples=200, deadline=None)
@given(st.lists(fractions(0, 1), min_size=4, max_size=4))
def test_closed_form_agrees_with_lp(entries):
    u = [entries[:2], entries[2:]]
    value, delta, alpha, _ = solve_matrix_game(u)
    assert value == oracles.visible_matrix_game_2x2(u)
    lower = max(min(u[0][j], u[1][j]) for j in range(2))
    upper = min(max(r) for r in u)
    if lower < upper:
        assert closed_form_2x2(u) == (delta[0], alpha[0])


def test_running_example_game_iv_strategies():
    spec = running_example()
    sol = solve(spec, "IV")
    assert sol.value == F(5, 7)
    assert sol.defender.mix.weights == (F(4, 7), F(3, 7))
    assert sol.attacker.mix.weights == (F(4, 7), F(3, 7))
    # at delta*, the attacker is indifferent
    for q in (F(0), F(1, 3), F(1)):
        assert hidden_payoff(spec, sol.defender.mix, Mix((0, 1), (q, 1 - q))) == F(5, 7)


def test_running_example_game_vi_responses():
    sol = solve(running_example(), "VI")
    assert sol.value == F(1, 2) and sol.attacker.action == 0
    assert sol.defender.function[0].weights == (1, 0)
    assert sol.defender.function[1].weights == (F(1, 4), F(3, 4))


def test_game_v_is_game_iv():
    spec = running_example()
    iv, v = solve(spec, "IV"), solve(spec, "V")
    assert (v.value, v.defender.mix, v.attacker.mix) == (iv.value, iv.defender.mix, iv.attacker.mix)


def test_unknown_game():
    with pytest.raises(ValueError):
        solve(running_example(), "VII")


def test_spec_validation():
    X = (0, 1)
    c = Channel.identity(X)
    other = Channel.of(X, ["k"], [[1], [1]])
    with pytest.raises(GameSpecError):
        GameSpec((0,), (0, 1), {(0, 0): c}, Prior.uniform(X))
    with pytest.raises(GameSpecError):
        GameSpec((0,), (0, 1), {(0, 0): c, (0, 1): other}, Prior.uniform(X))
    with pytest.raises(GameSpecError):
        GameSpec((0, 0), (0,), {(0, 0): c}, Prior.uniform(X))


def test_capacity_error_names_bound():
    spec = running_example()
    with pytest.raises(CapacityError, match="2\\^2 = 4"):
        extended_game(spec, budget=3)
    with pytest.raises(CapacityError):
        solve(spec, "IV", budget=3)


def test_pruning_keeps_value():
    spec = running_example()
    cols_full, table_full = extended_game(spec, prune=False)
    cols, table = extended_game(spec)
    assert len(cols) <= len(cols_full)
    assert solve_matrix_game(table)[0] == solve_matrix_game(table_full)[0] == F(5, 7)


def test_gain_function_measure():
    spec = running_example()
    g = GainFunction.of(["w0", "w1", "skip"], spec.secrets, [[1, 0], [0, 1], ["3/4", "3/4"]])
    gspec = GameSpec(spec.defender_actions, spec.attacker_actions, spec.channels, spec.prior, g)
    report = verify_hierarchy(gspec)
    assert report.ok
    assert report.values["I"] >= F(3, 4)  # the safe guess is always available


def test_strict_hierarchy_raises_on_violation():
    spec = running_example()
    sols = {g: solve(spec, g) for g in GAMES}
    sols["VI"].value = F(2)
    with pytest.raises(HierarchyViolation):
        verify_hierarchy(spec, strict=True, solutions=sols)


@PROPS
@given(game_specs(n_def=2))
def test_hidden_game_matches_piecewise_oracle(spec):
    gains = [[int(w == x) for x in spec.secrets] for w in spec.secrets]
    chans = [tuple([list(spec.channel(d, a).rows) for d in spec.defender_actions]) for a in spec.attacker_actions]
    expected = oracles.hidden_two_action_value(spec.prior.probs, gains, chans)
    assert solve(spec, "IV").value == expected


@PROPS
@given(game_specs(n_def=2, n_att=2, n_secrets=2, n_out=2))
def test_hidden_game_grid_lower_bound(spec):
    # the solver's value is below max_a V at every grid point of the defender's simplex
    value = solve(spec, "IV").value
    grid = [max(hidden_vulnerability(spec, Mix((0, 1), (F(k, 24), 1 - F(k, 24))), a)
                for a in spec.attacker_actions) for k in range(25)]
    assert value <= min(grid)


@PROPS
@given(st.data())
def test_saddle_certificates(data):
    props.check_saddle_certificates(data)


@PROPS
@given(st.data())
def test_hidden_at_most_visible(data):
    props.check_hidden_below_visible(data)


@PROPS
@given(game_specs(measure="gain"))
def test_hierarchy_random_specs(spec):
    report = verify_hierarchy(spec)
    assert report.ok, report.violations


def _random_mix(rng, index):
    w = [rng.randint(0, 6) for _ in index]
    if not any(w):
        w[0] = 1
    return Mix(tuple(index), tuple(F(x, sum(w)) for x in w))


@PROPS
@given(game_specs(), st.randoms(use_true_random=False))
def test_deterministic_solutions_resist_mixed_deviations(spec, rng):
    D, A = spec.defender_actions, spec.attacker_actions
    u = payoff_matrix(spec)
    ui = lambda d, a: u[D.index(d)][A.index(a)]

    s2 = solve(spec, "II")
    d_star, resp = s2.defender.action, s2.attacker.function
    for _ in range(5):
        delta = _random_mix(rng, D)
        assert sum(w * ui(d, resp[d]) for d, w in delta.items()) >= s2.value
        sigma = _random_mix(rng, A)  # attacker's random reply to d*
        assert sum(w * ui(d_star, a) for a, w in sigma.items()) <= s2.value

    s3 = solve(spec, "III")
    a_star, resp = s3.attacker.action, s3.defender.function
    for _ in range(5):
        alpha = _random_mix(rng, A)
        assert sum(w * ui(resp[a], a) for a, w in alpha.items()) <= s3.value
        sigma = _random_mix(rng, D)
        assert sum(w * ui(d, a_star) for d, w in sigma.items()) >= s3.value

    s6 = solve(spec, "VI")
    a_star, resp = s6.attacker.action, s6.defender.function
    for _ in range(5):
        alpha = _random_mix(rng, A)
        assert sum(w * hidden_vulnerability(spec, resp[a], a) for a, w in alpha.items()) <= s6.value
        assert hidden_vulnerability(spec, _random_mix(rng, D), a_star) >= s6.value
