"""Exact rational helpers and a dense two-phase simplex solver.

All arithmetic uses :class:`fractions.Fraction`, so every LP optimum is an
exact basic feasible solution. Bland's rule is used in both phases.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

try:  # exact C rationals for the tableau; Fraction is the fallback
    from gmpy2 import mpq as _q
except ImportError:  # pragma: no cover
    _q = Fraction

Rational = Fraction
RationalLike = Union[Fraction, int, str]

_FRACTION_RE = re.compile(r"^\s*[+-]?\d+\s*/\s*[+-]?\d+\s*$")
_DECIMAL_RE = re.compile(r"^\s*[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?\s*$")


class RationalParseError(ValueError):
    pass


class LPStructureError(ValueError):
    """Raised for malformed programs (as opposed to infeasible/unbounded ones)."""


def parse_rational(text: RationalLike) -> Fraction:
    """Parse ``"a/b"`` or a decimal literal into an exact fraction.

    >>> parse_rational("0.4382")
    Fraction(2191, 5000)
    >>> parse_rational("2/4")
    Fraction(1, 2)
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise RationalParseError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise RationalParseError(f"expected a string, got {type(text).__name__}")
    if _FRACTION_RE.match(text):
        num, den = text.split("/")
        if int(den) == 0:
            raise RationalParseError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    if _DECIMAL_RE.match(text):
        return Fraction(text.strip())
    raise RationalParseError(f"malformed rational literal {text!r}")


def as_rational(value: RationalLike) -> Fraction:
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass a string or Fraction")
    return parse_rational(value)


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def decimal_string(q: Fraction, digits: int = 12) -> str:
    """Round-half-even decimal rendering with a fixed number of digits."""
    scaled = round(q * 10**digits)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    whole, frac = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}" if digits else f"{sign}{whole}"


# --------------------------------------------------------------------------
# Linear programs

LE, EQ, GE = "<=", "==", ">="
_RELATIONS = (LE, EQ, GE)


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    relation: str
    rhs: Fraction


@dataclass(frozen=True)
class LinearProgram:
    """``sense`` objective over ``x`` subject to ``constraints`` and ``bounds``.

    ``bounds[i]`` is ``(lower, upper)``; ``None`` means unbounded on that
    side. Missing bounds default to ``(0, None)``.
    """

    objective: tuple[Fraction, ...]
    constraints: tuple[Constraint, ...] = ()
    sense: str = "min"
    bounds: Optional[tuple[tuple[Optional[Fraction], Optional[Fraction]], ...]] = None

    @classmethod
    def build(
        cls,
        objective: Sequence[RationalLike],
        constraints: Iterable[tuple[Sequence[RationalLike], str, RationalLike]] = (),
        sense: str = "min",
        bounds: Optional[Sequence[tuple[Optional[RationalLike], Optional[RationalLike]]]] = None,
    ) -> "LinearProgram":
        obj = tuple(as_rational(c) for c in objective)
        rows = tuple(
            Constraint(tuple(as_rational(a) for a in coeffs), rel, as_rational(rhs))
            for coeffs, rel, rhs in constraints
        )
        bnds = None
        if bounds is not None:
            bnds = tuple(
                (None if lo is None else as_rational(lo), None if hi is None else as_rational(hi))
                for lo, hi in bounds
            )
        lp = cls(obj, rows, sense, bnds)
        lp.check()
        return lp

    @property
    def n_vars(self) -> int:
        return len(self.objective)

    def check(self) -> None:
        n = self.n_vars
        if self.sense not in ("min", "max"):
            raise LPStructureError(f"unknown sense {self.sense!r}")
        for k, row in enumerate(self.constraints):
            if len(row.coeffs) != n:
                raise LPStructureError(
                    f"constraint {k} has width {len(row.coeffs)}, objective has {n}"
                )
            if row.relation not in _RELATIONS:
                raise LPStructureError(f"constraint {k}: unknown relation {row.relation!r}")
        if self.bounds is not None and len(self.bounds) != n:
            raise LPStructureError(f"{len(self.bounds)} bounds given for {n} variables")

    def is_feasible_point(self, x: Sequence[Fraction]) -> bool:
        for row in self.constraints:
            lhs = sum((a * v for a, v in zip(row.coeffs, x) if a), Fraction(0))
            if row.relation == LE and lhs > row.rhs:
                return False
            if row.relation == GE and lhs < row.rhs:
                return False
            if row.relation == EQ and lhs != row.rhs:
                return False
        for i, v in enumerate(x):
            lo, hi = self.bounds[i] if self.bounds is not None else (Fraction(0), None)
            if (lo is not None and v < lo) or (hi is not None and v > hi):
                return False
        return True


OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: Optional[tuple[Fraction, ...]] = None
    value: Optional[Fraction] = None
    pivots: int = field(default=0, compare=False)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


# --------------------------------------------------------------------------
# Simplex internals


class _Tableau:
    """Dense tableau ``A x = b`` with an explicit basis; minimisation."""

    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.pivots = 0

    def pivot(self, r: int, c: int, cost: list[Fraction], cost_rhs: list[Fraction]) -> None:
        prow = self.rows[r]
        piv = prow[c]
        if piv != 1:
            inv = 1 / piv
            for j, a in enumerate(prow):
                if a:
                    prow[j] = a * inv
            self.rhs[r] *= inv
        nz = [j for j, a in enumerate(prow) if a]
        prhs = self.rhs[r]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[c]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
                self.rhs[i] -= f * prhs
        f = cost[c]
        if f:
            for j in nz:
                cost[j] -= f * prow[j]
            cost_rhs[0] -= f * prhs
        self.basis[r] = c
        self.pivots += 1

    def reduced_costs(self, c: Sequence[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
        cost = list(c)
        value = [_q(0)]
        for i, b in enumerate(self.basis):
            f = cost[b]
            if f:
                row = self.rows[i]
                for j, a in enumerate(row):
                    if a:
                        cost[j] -= f * a
                value[0] -= f * self.rhs[i]
        return cost, value

    def run(self, cost: list[Fraction], cost_rhs: list[Fraction], allowed: int) -> bool:
        """Bland's-rule iterations over columns ``< allowed``. False if unbounded."""
        while True:
            entering = next((j for j in range(allowed) if cost[j] < 0), None)
            if entering is None:
                return True
            best_row, best_ratio = None, None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = self.rhs[i] / a
                    if (
                        best_ratio is None
                        or ratio < best_ratio
                        or (ratio == best_ratio and self.basis[i] < self.basis[best_row])
                    ):
                        best_row, best_ratio = i, ratio
            if best_row is None:
                return False
            self.pivot(best_row, entering, cost, cost_rhs)


@dataclass
class _StandardForm:
    rows: list[list[Fraction]]
    rhs: list[Fraction]
    cost: list[Fraction]
    # original variable i = offset + sum(sign * std_var)
    recover: list[tuple[Fraction, list[tuple[int, int]]]]
    # per row: a slack column usable as the starting basic variable, or -1
    start: list[int]


def _standardize(lp: LinearProgram) -> _StandardForm:
    n = lp.n_vars
    bounds = lp.bounds if lp.bounds is not None else ((Fraction(0), None),) * n
    sign_obj = 1 if lp.sense == "min" else -1

    # map each original variable to standard nonnegative columns
    columns: list[list[tuple[int, int]]] = []
    offsets: list[Fraction] = []
    extra_rows: list[tuple[int, Fraction]] = []
    k = 0
    for lo, hi in bounds:
        if lo is None and hi is None:
            columns.append([(k, 1), (k + 1, -1)])
            offsets.append(Fraction(0))
            k += 2
        elif lo is None:
            columns.append([(k, -1)])
            offsets.append(hi)
            k += 1
        else:
            if hi is not None:
                if hi < lo:
                    raise LPStructureError(f"empty bound interval [{lo}, {hi}]")
                extra_rows.append((k, hi - lo))
            columns.append([(k, 1)])
            offsets.append(lo)
            k += 1
    n_std = k

    raw: list[tuple[list[Fraction], str, Fraction]] = []
    for row in lp.constraints:
        coeffs = [Fraction(0)] * n_std
        rhs = row.rhs
        for i, a in enumerate(row.coeffs):
            if not a:
                continue
            rhs -= a * offsets[i]
            for j, s in columns[i]:
                coeffs[j] += s * a
        raw.append((coeffs, row.relation, rhs))
    for j, width in extra_rows:
        coeffs = [Fraction(0)] * n_std
        coeffs[j] = Fraction(1)
        raw.append((coeffs, LE, width))

    n_slack = sum(1 for _, rel, _ in raw if rel != EQ)
    total = n_std + n_slack
    rows, rhs, start = [], [], []
    s = n_std
    for coeffs, rel, b in raw:
        full = coeffs + [Fraction(0)] * n_slack
        slack = -1
        if rel == LE:
            full[s] = Fraction(1)
            slack = s
            s += 1
        elif rel == GE:
            full[s] = Fraction(-1)
            slack = s
            s += 1
        if b < 0:
            full = [-a for a in full]
            b = -b
        rows.append(full)
        rhs.append(b)
        start.append(slack if slack >= 0 and full[slack] == 1 else -1)

    cost = [Fraction(0)] * total
    for i, c in enumerate(lp.objective):
        for j, sg in columns[i]:
            cost[j] += sign_obj * sg * c
    recover = [(offsets[i], columns[i]) for i in range(n)]
    return _StandardForm(rows, rhs, cost, recover, start)


def _to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def lp_solve(lp: LinearProgram) -> LPResult:
    """Solve ``lp`` exactly. Returns an optimal basic feasible solution,
    or a result with status ``infeasible``/``unbounded``."""
    lp.check()
    sf = _standardize(lp)
    m = len(sf.rows)
    n = len(sf.cost)
    zero, one = _q(0), _q(1)
    sf.rows = [[_q(a) if a else zero for a in row] for row in sf.rows]
    sf.rhs = [_q(b) for b in sf.rhs]
    sf.cost = [_q(c) for c in sf.cost]

    basis = list(sf.start)
    n_art = basis.count(-1)

    rows = [r + [zero] * n_art for r in sf.rows]
    art = n
    for i in range(m):
        if basis[i] == -1:
            rows[i][art] = one
            basis[i] = art
            art += 1
    tab = _Tableau(rows, list(sf.rhs), basis)
    width = n + n_art

    if n_art:
        phase1 = [zero] * n + [one] * n_art
        cost, crhs = tab.reduced_costs(phase1)
        tab.run(cost, crhs, width)
        if -crhs[0] != 0:
            return LPResult(INFEASIBLE, pivots=tab.pivots)
        # drive zero-level artificials out of the basis
        i = 0
        while i < len(tab.rows):
            if tab.basis[i] >= n:
                col = next((j for j in range(n) if tab.rows[i][j] != 0), None)
                if col is None:
                    del tab.rows[i]
                    del tab.rhs[i]
                    del tab.basis[i]
                    continue
                tab.pivot(i, col, cost, crhs)
            i += 1
        for row in tab.rows:
            del row[n:]

    cost, crhs = tab.reduced_costs(sf.cost)
    if not tab.run(cost, crhs, n):
        return LPResult(UNBOUNDED, pivots=tab.pivots)

    std = [Fraction(0)] * n
    for i, b in enumerate(tab.basis):
        std[b] = _to_fraction(tab.rhs[i])
    x = []
    for offset, cols in sf.recover:
        x.append(offset + sum((sg * std[j] for j, sg in cols), Fraction(0)))
    value = sum((c * v for c, v in zip(lp.objective, x)), Fraction(0))
    return LPResult(OPTIMAL, tuple(x), value, tab.pivots)
