"""Prior and posterior g-vulnerability; Bayes vulnerability is the identity gain."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Optional, Sequence, Union

from .channel import IncompatibleChannels, Matrix, Prior, joint_columns
from .numerics import RationalLike, as_rational


@dataclass(frozen=True)
class GainFunction:
    """Gain matrix indexed by guesses ``w`` (rows) and secrets ``x`` (columns)."""

    guesses: tuple
    secrets: tuple
    gains: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.gains) != len(self.guesses) or not self.guesses:
            raise ValueError("gain matrix needs one row per guess")
        if any(len(r) != len(self.secrets) for r in self.gains):
            raise ValueError("gain matrix rows must have one entry per secret")

    @classmethod
    def of(cls, guesses: Iterable[Hashable], secrets: Iterable[Hashable], gains) -> "GainFunction":
        return cls(
            tuple(guesses), tuple(secrets), tuple(tuple(as_rational(g) for g in row) for row in gains)
        )

    @classmethod
    def identity(cls, secrets: Sequence[Hashable]) -> "GainFunction":
        secrets = tuple(secrets)
        return cls.of(secrets, secrets, [[int(w == x) for x in secrets] for w in secrets])


class Bayes:
    """Probability of guessing the secret in one try."""

    def __repr__(self):
        return "Bayes()"

    def __eq__(self, other):
        return isinstance(other, Bayes)

    def __hash__(self):
        return hash("bayes")


BAYES = Bayes()
Measure = Union[Bayes, GainFunction]


def gain_for(measure: Measure, secrets: Sequence[Hashable]) -> GainFunction:
    """The gain function realising ``measure`` over ``secrets``."""
    if isinstance(measure, Bayes):
        return GainFunction.identity(secrets)
    if tuple(measure.secrets) != tuple(secrets):
        raise IncompatibleChannels("gain function is not indexed by the prior's secrets")
    return measure


def _best(values: Sequence[Fraction]) -> tuple[Fraction, int]:
    best, arg = values[0], 0
    for i, v in enumerate(values):
        if v > best:
            best, arg = v, i
    return best, arg


def expected_gains(gain: GainFunction, weights: Sequence[Fraction]) -> list[Fraction]:
    """``sum_x weights[x] * g(w, x)`` for each guess ``w``."""
    return [sum((g * p for g, p in zip(row, weights) if g and p), Fraction(0)) for row in gain.gains]


def prior_vulnerability(measure: Measure, prior: Prior) -> Fraction:
    if isinstance(measure, Bayes):
        return max(prior.probs)
    return max(expected_gains(gain_for(measure, prior.secrets), prior.probs))


def best_guess(measure: Measure, prior: Prior) -> Hashable:
    """Optimal guess for ``prior``; ties go to the lowest index."""
    gain = gain_for(measure, prior.secrets)
    return gain.guesses[_best(expected_gains(gain, prior.probs))[1]]


def posterior_vulnerability(measure: Measure, prior: Prior, channel: Matrix) -> Fraction:
    """Expected vulnerability of the posteriors.

    Computed on unnormalised joint columns, where each term equals
    ``p(y) * V(posterior_y)``; columns with ``p(y) = 0`` contribute nothing.
    """
    cols = joint_columns(prior, channel)
    if isinstance(measure, Bayes):
        return sum((max(col) for col in cols), Fraction(0))
    gain = gain_for(measure, prior.secrets)
    total = Fraction(0)
    for col in cols:
        if any(col):
            total += max(expected_gains(gain, col))
    return total


def guess_function(measure: Measure, prior: Prior, channel: Matrix) -> dict:
    """Optimal guess per output with positive probability (lowest index on ties)."""
    gain = gain_for(measure, prior.secrets)
    out = {}
    for y, col in zip(channel.outputs, joint_columns(prior, channel)):
        if any(col):
            out[y] = gain.guesses[_best(expected_gains(gain, col))[1]]
    return out


def leakage(measure: Measure, prior: Prior, channel: Matrix, kind: str = "additive") -> Fraction:
    post = posterior_vulnerability(measure, prior, channel)
    pre = prior_vulnerability(measure, prior)
    if kind == "additive":
        return post - pre
    if kind == "multiplicative":
        return post / pre
    raise ValueError(f"unknown leakage kind {kind!r}")
