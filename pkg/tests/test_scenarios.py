from fractions import Fraction

import pytest

from leakgames.choice import Mix
from leakgames.games import payoff_matrix
from leakgames.scenarios import (
    PasswordConfig,
    bitstrings,
    check_run,
    expected_iterations,
    password_channel,
    password_game,
    running_example,
    running_example_swapped,
)

F = Fraction


def test_running_example_table():
    assert payoff_matrix(running_example()) == [[F(1, 2), 1], [1, F(2, 3)]]


def test_swapped_example_replaces_one_channel():
    spec, swapped = running_example(), running_example_swapped()
    assert swapped.channel(1, 1) == spec.channel(0, 0)
    assert payoff_matrix(swapped) == [[F(1, 2), 1], [1, F(1, 2)]]


def test_check_run():
    cfg = PasswordConfig()
    assert check_run(cfg, (1, 2, 3), "101", "101") == ("T", 3)
    assert check_run(cfg, (1, 2, 3), "101", "111") == ("F", 2)
    assert check_run(cfg, (3, 2, 1), "101", "111") == ("F", 2)
    assert check_run(cfg, (3, 2, 1), "101", "100") == ("F", 1)
    const = PasswordConfig(constant_time=True)
    assert check_run(const, (1, 2, 3), "101", "001") == ("F", 3)


def test_password_channels_are_deterministic():
    cfg = PasswordConfig()
    spec = password_game(cfg)
    assert len(spec.defender_actions) == 6 and spec.attacker_actions == bitstrings(3)
    for ch in spec.channels.values():
        assert all(sorted(row) == [0] * (len(row) - 1) + [1] for row in ch.rows)
    assert spec.outputs == (("F", 1), ("F", 2), ("F", 3), ("T", 3))


def test_password_channel_column():
    c = password_channel(PasswordConfig(), (1, 2, 3), "101")
    assert c.entry("101", ("T", 3)) == 1
    assert c.entry("001", ("F", 1)) == 1 and c.entry("000", ("F", 1)) == 1
    assert c.entry("111", ("F", 2)) == 1 and c.entry("100", ("F", 3)) == 1


def test_constant_time_runtime_is_n():
    cfg = PasswordConfig(constant_time=True)
    for g in bitstrings(3):
        assert expected_iterations(cfg, Mix.point(["123"], "123"), g) == 3


def test_bad_inputs():
    with pytest.raises(ValueError):
        PasswordConfig(orders=((1, 1, 2),))
    with pytest.raises(ValueError):
        password_channel(PasswordConfig(), (1, 2, 3), "10")
    with pytest.raises(ValueError):
        PasswordConfig(n=0)


def test_other_lengths_use_uniform_prior():
    cfg = PasswordConfig(n=2)
    spec = password_game(cfg)
    assert spec.prior.probs == (F(1, 4),) * 4 and len(spec.defender_actions) == 2
