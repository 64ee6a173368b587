"""Brute-force cooperative-game oracle.

Used to validate the linear-time display formula: the coalition value of a
set of players is the best satisfaction any member offers the user, and the
Shapley value is averaged over every arrival order.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .game import Game

BRUTE_FORCE_CAP = 10


class BruteForceCapExceeded(RuntimeError):
    pass


class CoalitionValue:
    """``v(C) = max_{j in C} sigma_i(X_j)`` for a fixed game, profile and user."""

    def __init__(self, values):
        self.values = tuple(values)
        self.zero = Fraction(0) if all(isinstance(x, Fraction) for x in self.values) else 0.0

    @classmethod
    def of(cls, game: Game, profile, user) -> "CoalitionValue":
        return cls(game.user_vector(profile, user))

    def __call__(self, coalition) -> object:
        return max((self.values[j] for j in coalition), default=self.zero)


def coalition_value(game: Game, profile, user, coalition) -> object:
    n = game.n_players
    coalition = set(coalition)
    if not coalition <= set(range(n)):
        raise ValueError(f"coalition {sorted(coalition)} is not a subset of players 0..{n - 1}")
    return CoalitionValue.of(game, profile, user)(coalition)


def shapley_from_values(values, cap: int = BRUTE_FORCE_CAP) -> tuple:
    """Shapley values by enumerating all N! orders (lexicographic order)."""
    v = CoalitionValue(values)
    n = len(v.values)
    if n > cap:
        raise BruteForceCapExceeded(f"{n} players exceeds brute-force cap {cap}")
    exact = isinstance(v.zero, Fraction)
    if exact:
        # integer arithmetic over a common denominator, divided out at the end
        denom = math.lcm(*(x.denominator for x in v.values))
        vals = [int(x * denom) for x in v.values]
        zero = 0
    else:
        vals, zero = list(v.values), 0.0
    totals = [zero] * n
    for order in itertools.permutations(range(n)):
        prefix = frozenset()
        for j in order:
            joined = prefix | {j}
            totals[j] += _max_value(vals, joined, zero) - _max_value(vals, prefix, zero)
            prefix = joined
    count = math.factorial(n)
    if exact:
        return tuple(Fraction(t, count * denom) for t in totals)
    return tuple(t / count for t in totals)


def _max_value(vals, coalition, zero):
    return max((vals[j] for j in coalition), default=zero)


def shapley_bruteforce(game: Game, profile, user, cap: int = BRUTE_FORCE_CAP) -> tuple:
    return shapley_from_values(game.user_vector(profile, user), cap)


def permutation_counts(n: int, j: int, cap: int = BRUTE_FORCE_CAP):
    """Count orders of ``1..n`` by the largest index arriving before ``j``.

    Returns ``(b_j, [a_1, ..., a_{j-1}])`` where ``b_j`` counts orders in which
    every predecessor of ``j`` has a smaller index and ``a_r`` counts those in
    which the largest predecessor is exactly ``r``.  Both are obtained by
    enumeration and checked against ``b_r = n!/(n-r+1)``, ``a_r = b_{r+1} - b_r``.
    """
    if not 1 <= j <= n:
        raise ValueError(f"need 1 <= j <= n, got j={j}, n={n}")
    if n > cap:
        raise BruteForceCapExceeded(f"{n} exceeds brute-force cap {cap}")
    b = 0
    a = [0] * j  # a[r] for r = 1..j-1; a[0] counts the empty prefix
    for order in itertools.permutations(range(1, n + 1)):
        pos = order.index(j)
        top = max(order[:pos], default=0)
        if top < j:
            b += 1
            if top > 0:
                a[top] += 1
    a = a[1:]

    def closed_b(r):
        return Fraction(math.factorial(n), n - r + 1)

    assert b == closed_b(j), (n, j, b)
    for r, count in enumerate(a, start=1):
        assert count == closed_b(r + 1) - closed_b(r), (n, j, r, count)
    return b, a
