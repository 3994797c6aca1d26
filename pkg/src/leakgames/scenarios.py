"""Built-in scenarios: the two-program running example and the timing-leaky
password checker."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .channel import Channel, Prior
from .choice import Mix
from .games import GameSpec
from .vulnerability import BAYES

# ---------------------------------------------------------------------------
# running example


def running_example() -> GameSpec:
    """Program 0 outputs ``x * a``; program 1 outputs ``x`` with probability
    ``a/3`` and its complement otherwise."""
    X = Y = (0, 1)
    third = Fraction(1, 3)
    chans = {
        (0, 0): Channel.of(X, Y, [[1, 0], [1, 0]]),
        (0, 1): Channel.of(X, Y, [[1, 0], [0, 1]]),
        (1, 0): Channel.of(X, Y, [[0, 1], [1, 0]]),
        (1, 1): Channel.of(X, Y, [[third, 2 * third], [2 * third, third]]),
    }
    return GameSpec((0, 1), (0, 1), chans, Prior.uniform(X), BAYES)


def running_example_swapped() -> GameSpec:
    """Running example with ``C11`` replaced by ``C00``."""
    spec = running_example()
    return spec.replace_channel(1, 1, spec.channel(0, 0))


# ---------------------------------------------------------------------------
# password checker

# rounded prior over 000..111 as published; sums to 1.0001
PASSWORD_PRIOR_WEIGHTS = ("0.0137", "0.0548", "0.2191", "0.4382", "0.0002", "0.0002", "0.0548", "0.2191")


def bitstrings(n: int) -> tuple[str, ...]:
    return tuple("".join(bits) for bits in itertools.product("01", repeat=n))


def order_label(order: Sequence[int]) -> str:
    return "".join(str(i) for i in order)


@dataclass(frozen=True)
class PasswordConfig:
    n: int = 3
    orders: Optional[tuple[tuple[int, ...], ...]] = None
    prior_weights: Optional[tuple] = None
    constant_time: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("bit length must be positive")
        for order in self.resolved_orders():
            if sorted(order) != list(range(1, self.n + 1)):
                raise ValueError(f"order {order} is not a permutation of 1..{self.n}")

    def resolved_orders(self) -> tuple[tuple[int, ...], ...]:
        if self.orders is not None:
            return tuple(tuple(o) for o in self.orders)
        return tuple(itertools.permutations(range(1, self.n + 1)))

    @property
    def secrets(self) -> tuple[str, ...]:
        return bitstrings(self.n)

    @property
    def guesses(self) -> tuple[str, ...]:
        return bitstrings(self.n)

    @property
    def outputs(self) -> tuple:
        if self.constant_time:
            return (("F", self.n), ("T", self.n))
        return tuple(("F", i) for i in range(1, self.n + 1)) + (("T", self.n),)

    def prior(self) -> Prior:
        if self.prior_weights is None:
            if self.n != 3:
                return Prior.uniform(self.secrets)
            return Prior.normalized(self.secrets, PASSWORD_PRIOR_WEIGHTS)
        return Prior.normalized(self.secrets, self.prior_weights)


def _check_inputs(cfg: PasswordConfig, order: Sequence[int], guess: str) -> None:
    if len(guess) != cfg.n or set(guess) - {"0", "1"}:
        raise ValueError(f"guess {guess!r} is not a {cfg.n}-bit string")
    if sorted(order) != list(range(1, cfg.n + 1)):
        raise ValueError(f"order {tuple(order)} is not a permutation of 1..{cfg.n}")


def check_run(cfg: PasswordConfig, order: Sequence[int], guess: str, secret: str) -> tuple[str, int]:
    """Verdict and iteration count of the bitwise checker.

    The early-exit checker stops at the first mismatching position in
    ``order``; the constant-time variant always runs all ``n`` iterations.
    """
    for step, i in enumerate(order, start=1):
        if guess[i - 1] != secret[i - 1]:
            return ("F", cfg.n if cfg.constant_time else step)
    return ("T", cfg.n)


def iterations(cfg: PasswordConfig, order: Sequence[int], guess: str, secret: str) -> int:
    return check_run(cfg, order, guess, secret)[1]


def password_channel(cfg: PasswordConfig, order: Sequence[int], guess: str) -> Channel:
    _check_inputs(cfg, order, guess)
    outs = cfg.outputs
    rows = []
    for x in cfg.secrets:
        obs = check_run(cfg, order, guess, x)
        rows.append([1 if y == obs else 0 for y in outs])
    return Channel.of(cfg.secrets, outs, rows)


def password_game(cfg: PasswordConfig = PasswordConfig()) -> GameSpec:
    orders = cfg.resolved_orders()
    D = tuple(order_label(o) for o in orders)
    A = cfg.guesses
    chans = {
        (order_label(o), a): password_channel(cfg, o, a) for o in orders for a in A
    }
    return GameSpec(D, A, chans, cfg.prior(), BAYES)


def _parse_order(label) -> tuple[int, ...]:
    return tuple(int(c) for c in label) if isinstance(label, str) else tuple(label)


def expected_iterations(cfg: PasswordConfig, delta: Mix, guess: str) -> Fraction:
    """``sum_d delta(d) sum_x pi(x) * iterations(d, guess, x)``."""
    pi = cfg.prior()
    total = Fraction(0)
    for label, w in delta.items():
        if not w:
            continue
        order = _parse_order(label)
        _check_inputs(cfg, order, guess)
        total += w * sum(
            (p * iterations(cfg, order, guess, x) for x, p in zip(pi.secrets, pi.probs)), Fraction(0)
        )
    return total


# Values as printed for the two scenarios, rounded to four decimals where
# the source rounds. Used for reporting and acceptance checks only.
RUNNING_PAYOFFS = ((Fraction(1, 2), Fraction(1)), (Fraction(1), Fraction(2, 3)))

LISTED_GAME_VALUES = {
    "II": Fraction(1),
    "I": Fraction(4, 5),
    "III": Fraction(2, 3),
    "IV": Fraction(4, 7),
    "V": Fraction(4, 7),
    "VI": Fraction(1, 2),
}

PASSWORD_TABLE = {
    "123": ("0.7257", "0.7257", "0.9311", "0.9311", "0.6577", "0.6577", "0.7122", "0.7122"),
    "132": ("0.8900", "0.9311", "0.8900", "0.9311", "0.7122", "0.7122", "0.7122", "0.7122"),
    "213": ("0.5068", "0.5068", "0.9311", "0.9311", "0.4934", "0.4934", "0.7668", "0.7668"),
    "231": ("0.5068", "0.5068", "0.7668", "0.9311", "0.5068", "0.5068", "0.7668", "0.9311"),
    "312": ("0.7257", "0.9311", "0.7257", "0.9311", "0.7122", "0.8766", "0.7122", "0.8766"),
    "321": ("0.6712", "0.7122", "0.7257", "0.9311", "0.6712", "0.7122", "0.7257", "0.9311"),
}

PASSWORD_REPORTED = {
    "prior_vulnerability": "0.4382",
    "posterior_123_101": "0.6577",
    "posterior_cons_101": "0.4384",
    "iterations_123_101": "1.2747",
    "game_iv_bound": "0.6573",
    "iterations_bound": "2.3922",
}
