"""Hidden and visible probabilistic choice between channels."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from .channel import Channel, ChannelError, IncompatibleChannels, Matrix
from .numerics import RationalLike, as_rational


class ChoiceTypeError(IncompatibleChannels):
    """Operands of a choice operator have mismatching types."""


@dataclass(frozen=True)
class Mix:
    """Convex coefficients over an ordered index set."""

    index: tuple
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.index) != len(self.weights):
            raise ChannelError("mix index and weights differ in length")
        if len(set(self.index)) != len(self.index):
            raise ChannelError("duplicate mix index")
        if any(w < 0 for w in self.weights) or sum(self.weights) != 1:
            raise ChannelError("mix weights must be non-negative and sum to 1")

    @classmethod
    def of(cls, weights: Mapping[Hashable, RationalLike]) -> "Mix":
        return cls(tuple(weights), tuple(as_rational(w) for w in weights.values()))

    @classmethod
    def point(cls, index: Sequence[Hashable], at: Hashable) -> "Mix":
        return cls(tuple(index), tuple(Fraction(int(i == at)) for i in index))

    @classmethod
    def uniform(cls, index: Sequence[Hashable]) -> "Mix":
        n = len(index)
        return cls(tuple(index), (Fraction(1, n),) * n)

    def __getitem__(self, i: Hashable) -> Fraction:
        return self.weights[self.index.index(i)]

    def items(self):
        return zip(self.index, self.weights)

    def as_dict(self) -> dict:
        return dict(self.items())


def _family(family: Mapping[Hashable, Matrix], mix: Mix) -> list[tuple[Fraction, Matrix]]:
    if set(family) != set(mix.index) or len(family) != len(mix.index):
        raise ChoiceTypeError("mix is not indexed by the channel family")
    return [(w, family[i]) for i, w in mix.items()]


def weighted_sum(terms: Iterable[tuple[RationalLike, Matrix]]) -> Matrix:
    """``sum_i w_i * M_i`` for same-typed matrices; no stochasticity check."""
    terms = [(as_rational(w), m) for w, m in terms]
    if not terms:
        raise ChoiceTypeError("empty family")
    first = terms[0][1]
    for _, m in terms:
        if not m.same_type(first):
            raise ChoiceTypeError("hidden choice needs channels of the same type")
    rows = [[Fraction(0)] * len(first.outputs) for _ in first.inputs]
    for w, m in terms:
        if not w:
            continue
        for r, src in zip(rows, m.rows):
            for j, a in enumerate(src):
                if a:
                    r[j] += w * a
    return Matrix(first.inputs, first.outputs, tuple(tuple(r) for r in rows))


def weighted_concat(terms: Iterable[tuple[Hashable, RationalLike, Matrix]]) -> Matrix:
    """Concatenate ``w_i * M_i`` over the tagged disjoint union of outputs."""
    terms = [(i, as_rational(w), m) for i, w, m in terms]
    if not terms:
        raise ChoiceTypeError("empty family")
    inputs = terms[0][2].inputs
    for _, _, m in terms:
        if m.inputs != inputs:
            raise ChoiceTypeError("visible choice needs compatible channels (same inputs)")
    outputs = tuple((y, i) for i, _, m in terms for y in m.outputs)
    rows = tuple(
        tuple(w * a for _, w, m in terms for a in m.rows[xi]) for xi in range(len(inputs))
    )
    return Matrix(inputs, outputs, rows)


def hidden_choice(family: Mapping[Hashable, Channel], mix: Mix) -> Channel:
    """Entry-wise convex combination; the result keeps the family's type."""
    return weighted_sum(_family(family, mix)).as_channel()


def visible_choice(family: Mapping[Hashable, Channel], mix: Mix) -> Channel:
    """Scaled concatenation; output ``(y, i)`` carries ``mix[i] * C_i(x, y)``."""
    terms = _family(family, mix)
    return weighted_concat((i, w, m) for i, (w, m) in zip(mix.index, terms)).as_channel()


def _binary_mix(p: RationalLike) -> Mix:
    p = as_rational(p)
    if not 0 <= p <= 1:
        raise ValueError(f"choice probability {p} outside [0, 1]")
    return Mix((1, 2), (p, 1 - p))


def binary_hidden(c1: Channel, c2: Channel, p: RationalLike) -> Channel:
    return hidden_choice({1: c1, 2: c2}, _binary_mix(p))


def binary_visible(c1: Channel, c2: Channel, p: RationalLike) -> Channel:
    return visible_choice({1: c1, 2: c2}, _binary_mix(p))


def hidden_mix_matrices(m1: Matrix, m2: Matrix, p: RationalLike) -> Matrix:
    """``p*M1 + (1-p)*M2`` on possibly non-stochastic matrices."""
    p = as_rational(p)
    return weighted_sum([(p, m1), (1 - p, m2)])


def visible_mix_matrices(m1: Matrix, m2: Matrix, p: RationalLike) -> Matrix:
    p = as_rational(p)
    return weighted_concat([(1, p, m1), (2, 1 - p, m2)])
