"""Channels, priors, hyper-distributions and channel equivalence."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Optional, Sequence

from .numerics import EQ, LinearProgram, RationalLike, as_rational, lp_solve

Label = Hashable

ZERO = Fraction(0)
ONE = Fraction(1)


class ChannelError(ValueError):
    pass


class IncompatibleChannels(ChannelError):
    pass


def _labels(labels: Iterable[Label], what: str) -> tuple:
    out = tuple(labels)
    if len(set(out)) != len(out):
        raise ChannelError(f"duplicate {what} labels")
    return out


@dataclass(frozen=True)
class Prior:
    secrets: tuple
    probs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.secrets) != len(self.probs):
            raise ChannelError("prior length does not match secrets")
        if any(p < 0 for p in self.probs):
            raise ChannelError("negative prior probability")
        if sum(self.probs) != 1:
            raise ChannelError(f"prior sums to {sum(self.probs)}, not 1")

    @classmethod
    def of(cls, secrets: Iterable[Label], probs: Iterable[RationalLike]) -> "Prior":
        return cls(_labels(secrets, "secret"), tuple(as_rational(p) for p in probs))

    @classmethod
    def uniform(cls, secrets: Iterable[Label]) -> "Prior":
        secrets = _labels(secrets, "secret")
        return cls(secrets, (Fraction(1, len(secrets)),) * len(secrets))

    @classmethod
    def normalized(
        cls, secrets: Iterable[Label], weights: Iterable[RationalLike], tolerance: RationalLike = "1/1000"
    ) -> "Prior":
        """Rescale ``weights`` to sum to one; refuse if they are further than
        ``tolerance`` from one."""
        w = [as_rational(p) for p in weights]
        total = sum(w)
        if abs(total - 1) > as_rational(tolerance):
            raise ChannelError(f"prior sums to {total}, outside tolerance")
        return cls(_labels(secrets, "secret"), tuple(p / total for p in w))

    def __getitem__(self, x: Label) -> Fraction:
        return self.probs[self.secrets.index(x)]

    def as_dict(self) -> dict:
        return dict(zip(self.secrets, self.probs))


@dataclass(frozen=True)
class Matrix:
    """Labelled rational matrix; rows are secrets, columns are outputs.

    Carries no stochasticity constraint, so it also represents scaled
    channels such as ``p * C`` used inside algebraic identities.
    """

    inputs: tuple
    outputs: tuple
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.rows) != len(self.inputs):
            raise ChannelError(f"{len(self.rows)} rows for {len(self.inputs)} inputs")
        for x, row in zip(self.inputs, self.rows):
            if len(row) != len(self.outputs):
                raise ChannelError(f"row {x!r} has {len(row)} entries, expected {len(self.outputs)}")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.inputs), len(self.outputs)

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.rows)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.column(j) for j in range(len(self.outputs))]

    def entry(self, x: Label, y: Label) -> Fraction:
        return self.rows[self.inputs.index(x)][self.outputs.index(y)]

    def scaled(self, c: RationalLike) -> "Matrix":
        c = as_rational(c)
        return Matrix(self.inputs, self.outputs, tuple(tuple(c * a for a in r) for r in self.rows))

    def same_type(self, other: "Matrix") -> bool:
        return self.inputs == other.inputs and self.outputs == other.outputs

    def is_stochastic(self) -> bool:
        return all(a >= 0 for r in self.rows for a in r) and all(sum(r) == 1 for r in self.rows)

    def as_channel(self) -> "Channel":
        return Channel(self.inputs, self.outputs, self.rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        if not self.same_type(other):
            raise IncompatibleChannels("matrix sum needs identical input and output labels")
        return Matrix(
            self.inputs,
            self.outputs,
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
        )

    def __rmul__(self, c: RationalLike) -> "Matrix":
        return self.scaled(c)

    def __eq__(self, other):
        # equality is by labels and entries; Channel and Matrix compare alike
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.same_type(other) and self.rows == other.rows

    def __hash__(self):
        return hash((self.inputs, self.outputs, self.rows))


class Channel(Matrix):
    """Row-stochastic matrix ``C(x, y)``."""

    def __post_init__(self):
        super().__post_init__()
        for x, row in zip(self.inputs, self.rows):
            if any(a < 0 for a in row):
                raise ChannelError(f"negative entry in row {x!r}")
            total = sum(row)
            if total != 1:
                raise ChannelError(f"row {x!r} sums to {total}")

    @classmethod
    def of(
        cls,
        inputs: Iterable[Label],
        outputs: Iterable[Label],
        entries: Sequence[Sequence[RationalLike]],
    ) -> "Channel":
        return cls(
            _labels(inputs, "input"),
            _labels(outputs, "output"),
            tuple(tuple(as_rational(a) for a in row) for row in entries),
        )

    @classmethod
    def identity(cls, labels: Sequence[Label]) -> "Channel":
        n = len(labels)
        return cls.of(labels, labels, [[1 if i == j else 0 for j in range(n)] for i in range(n)])


def channel_validate(inputs, outputs, entries) -> Channel:
    return Channel.of(inputs, outputs, entries)


@dataclass(frozen=True)
class Hyper:
    """Outer distribution on outputs plus one posterior per output with
    positive probability."""

    outer: dict
    posteriors: dict

    def joint(self) -> dict:
        return {
            (x, y): self.outer[y] * p
            for y, post in self.posteriors.items()
            for x, p in zip(post.secrets, post.probs)
        }


def _check_prior(prior: Prior, matrix: Matrix) -> None:
    if prior.secrets != matrix.inputs:
        raise IncompatibleChannels("prior is not indexed by the channel's inputs")


def joint_columns(prior: Prior, matrix: Matrix) -> list[tuple[Fraction, ...]]:
    """Columns of the joint matrix ``pi(x) * C(x, y)``."""
    _check_prior(prior, matrix)
    return [
        tuple(p * row[j] for p, row in zip(prior.probs, matrix.rows))
        for j in range(len(matrix.outputs))
    ]


def push_prior(prior: Prior, channel: Matrix) -> Hyper:
    outer, posteriors = {}, {}
    for y, col in zip(channel.outputs, joint_columns(prior, channel)):
        py = sum(col)
        if py == 0:
            continue
        outer[y] = py
        posteriors[y] = Prior(prior.secrets, tuple(v / py for v in col))
    return Hyper(outer, posteriors)


def fresh_label(existing: Iterable[Label]) -> tuple:
    taken = set(existing)
    k = 0
    while ("zero", k) in taken:
        k += 1
    return ("zero", k)


def zero_column_extension(channel: Channel) -> Channel:
    label = fresh_label(channel.outputs)
    return Channel(
        channel.inputs,
        channel.outputs + (label,),
        tuple(row + (ZERO,) for row in channel.rows),
    )


# --------------------------------------------------------------------------
# Equivalence


def _check_compatible(c1: Matrix, c2: Matrix) -> None:
    if c1.inputs != c2.inputs:
        raise IncompatibleChannels("channels do not share the same input list")


def refinement_map(target: Channel, source: Channel) -> Optional[list[list[Fraction]]]:
    """Find a row-stochastic ``R`` with ``source @ R == target``, or None.

    ``R[k][j]`` is the share of ``source`` column ``k`` routed to ``target``
    column ``j``; column ``j`` of ``target`` is then the combination of
    ``source`` columns with coefficients ``R[:, j]``.
    """
    _check_compatible(target, source)
    src = zero_column_extension(source)
    m = len(src.outputs)
    n = len(target.outputs)
    nvar = m * n
    cons = []
    for xi in range(len(target.inputs)):
        for j in range(n):
            coeffs = [ZERO] * nvar
            for k in range(m):
                coeffs[k * n + j] = src.rows[xi][k]
            cons.append((coeffs, EQ, target.rows[xi][j]))
    for k in range(m):
        coeffs = [ZERO] * nvar
        for j in range(n):
            coeffs[k * n + j] = ONE
        cons.append((coeffs, EQ, ONE))
    res = lp_solve(LinearProgram.build([0] * nvar, cons))
    if not res.optimal:
        return None
    return [list(res.x[k * n:(k + 1) * n]) for k in range(m)]


def channels_equivalent(c1: Channel, c2: Channel) -> bool:
    """True iff each channel is a post-processing of the other, which is
    exactly equality of posterior vulnerability for every prior and gain."""
    _check_compatible(c1, c2)
    return refinement_map(c1, c2) is not None and refinement_map(c2, c1) is not None


def reduced_form(channel: Matrix) -> dict:
    """Canonical reduced form: nonzero columns grouped by direction.

    Maps each normalised column (entries divided by the column sum) to the
    total mass of columns pointing that way. Two compatible channels are
    equivalent iff their reduced forms are equal.
    """
    out: dict = {}
    for col in channel.columns():
        s = sum(col)
        if s == 0:
            continue
        key = tuple(a / s for a in col)
        out[key] = out.get(key, ZERO) + s
    return out


def equivalence_report(c1: Channel, c2: Channel) -> dict:
    """Decision plus witnesses, for display.

    On success the refinement maps in both directions are returned; on
    failure the first column of either channel whose direction/mass is not
    matched by the other is named.
    """
    _check_compatible(c1, c2)
    r12 = refinement_map(c1, c2)
    r21 = refinement_map(c2, c1)
    report = {"equivalent": r12 is not None and r21 is not None}
    if report["equivalent"]:
        report["c1_from_c2"] = r12
        report["c2_from_c1"] = r21
        return report
    f1, f2 = reduced_form(c1), reduced_form(c2)
    for name, ch, mine, theirs in (("first", c1, f1, f2), ("second", c2, f2, f1)):
        for y, col in zip(ch.outputs, ch.columns()):
            s = sum(col)
            if s == 0:
                continue
            key = tuple(a / s for a in col)
            if theirs.get(key) != mine[key]:
                report["failing"] = {"channel": name, "output": y, "column": list(col)}
                return report
    return report
