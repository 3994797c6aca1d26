"""Independent reference computations used by the tests.

None of these share code paths with the solvers: they work on plain lists
of Fractions and use enumeration or closed forms instead of the simplex.
"""

from fractions import Fraction
from itertools import product


def bayes_posterior(prior, rows):
    """Sum over columns of the largest joint entry."""
    n_out = len(rows[0])
    return sum(max(p * r[j] for p, r in zip(prior, rows)) for j in range(n_out))


def gain_posterior(prior, rows, gains):
    n_out = len(rows[0])
    return sum(
        max(sum(g[i] * prior[i] * rows[i][j] for i in range(len(prior))) for g in gains)
        for j in range(n_out)
    )


def mix_rows(weights, matrices):
    n, m = len(matrices[0]), len(matrices[0][0])
    return [[sum(w * M[i][j] for w, M in zip(weights, matrices)) for j in range(m)] for i in range(n)]


def box_lp_max(c, lo, hi):
    """``max c.x`` over a box is attained at a corner, coordinate-wise."""
    return sum(max(ci * l, ci * h) for ci, l, h in zip(c, lo, hi))


def pure_min_max(u):
    return min(max(row) for row in u)


def pure_max_min(u):
    cols = range(len(u[0]))
    return max(min(row[j] for row in u) for j in cols)


def _line(f, p0, p1):
    """Slope and intercept of the affine function through ``f`` at p0, p1."""
    a, b = f(p0), f(p1)
    slope = (b - a) / (p1 - p0)
    return slope, a - slope * p0


def hidden_two_action_value(prior, gains, chans_by_action):
    """``min_p max_a V_a(p)`` for two defender actions, exactly.

    ``chans_by_action[a] = (C_0, C_1)`` as row lists and
    ``V_a(p) = V[prior |> p C_0 + (1 - p) C_1]``. Each ``V_a`` is convex
    piecewise linear, so the optimum is at an endpoint, a breakpoint of some
    ``V_a``, or the crossing of two linear pieces. All candidates are
    enumerated and evaluated directly.
    """
    n = len(prior)
    m = len(chans_by_action[0][0][0])

    def value(a, p):
        c0, c1 = chans_by_action[a]
        return gain_posterior(prior, mix_rows([p, 1 - p], [c0, c1]), gains)

    # breakpoints: where two guesses tie on a column (each guess score is affine in p)
    cands = {Fraction(0), Fraction(1)}
    for c0, c1 in chans_by_action:
        for j in range(m):
            lines = []
            for g in gains:
                s0 = sum(g[i] * prior[i] * c1[i][j] for i in range(n))  # p = 0
                s1 = sum(g[i] * prior[i] * c0[i][j] for i in range(n))  # p = 1
                lines.append((s1 - s0, s0))
            for (k1, b1), (k2, b2) in product(lines, repeat=2):
                if k1 != k2:
                    p = (b2 - b1) / (k1 - k2)
                    if 0 <= p <= 1:
                        cands.add(p)
    pts = sorted(cands)
    # crossings of the V_a inside each interval where all are affine
    extra = set()
    for lo, hi in zip(pts, pts[1:]):
        lines = [_line(lambda p, a=a: value(a, p), lo, hi) for a in range(len(chans_by_action))]
        for (k1, b1), (k2, b2) in product(lines, repeat=2):
            if k1 != k2:
                p = (b2 - b1) / (k1 - k2)
                if lo <= p <= hi:
                    extra.add(p)
    cands |= extra
    return min(max(value(a, p) for a in range(len(chans_by_action))) for p in cands)


def visible_matrix_game_2x2(u):
    """Value of a 2x2 zero-sum game (row player minimises) by case analysis."""
    lower = max(min(u[0][j], u[1][j]) for j in range(2))
    upper = min(max(u[i]) for i in range(2))
    if lower == upper:
        return upper
    (a, b), (c, d) = u
    return (a * d - b * c) / (a + d - b - c)


def hidden_two_action_weighted_min(prior, gains, chans_by_action, alpha):
    """``min_p sum_a alpha[a] V_a(p)`` for two defender actions.

    The weighted sum is convex piecewise linear with breakpoints among
    those of the individual ``V_a``; evaluate at every candidate.
    """
    n = len(prior)
    m = len(chans_by_action[0][0][0])
    cands = {Fraction(0), Fraction(1)}
    for c0, c1 in chans_by_action:
        for j in range(m):
            lines = []
            for g in gains:
                s0 = sum(g[i] * prior[i] * c1[i][j] for i in range(n))
                s1 = sum(g[i] * prior[i] * c0[i][j] for i in range(n))
                lines.append((s1 - s0, s0))
            for (k1, b1), (k2, b2) in product(lines, repeat=2):
                if k1 != k2:
                    p = (b2 - b1) / (k1 - k2)
                    if 0 <= p <= 1:
                        cands.add(p)

    def total(p):
        return sum(
            w * gain_posterior(prior, mix_rows([p, 1 - p], list(cs)), gains)
            for w, cs in zip(alpha, chans_by_action) if w
        )

    return min(total(p) for p in cands)
