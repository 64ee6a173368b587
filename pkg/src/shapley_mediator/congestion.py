"""Congestion-game form of a Shapley-mediator recommendation game.

Every user's satisfaction axis is cut at the distinct satisfaction values
appearing anywhere in the game (plus 0 and 1).  Choosing an item means
claiming, for each user, every interval lying below that user's satisfaction
with the item; an interval of length ``d`` claimed by ``k`` players pays each
of them ``d / k``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .dynamics import PayoffVector
from .game import Game


@dataclass(frozen=True)
class CongestionGame:
    game: Game
    breakpoints: tuple  # epsilon_0 = 0 < epsilon_1 < ... < epsilon_B = 1

    @property
    def n_intervals(self) -> int:
        return len(self.breakpoints) - 1

    @property
    def resources(self) -> list:
        """Resources are ``(user_index, m)`` pairs, ``m = 1..B``."""
        return [(i, m) for i in range(self.game.n_users) for m in range(1, self.n_intervals + 1)]

    def length(self, m: int):
        return self.breakpoints[m] - self.breakpoints[m - 1]

    def weight(self, resource, load: int):
        """Per-player utility of ``resource`` when ``load`` players hold it."""
        if load == 0:
            return self.length(resource[1]) * 0
        return self.length(resource[1]) / load

    def resources_of(self, strategy) -> frozenset:
        """All ``(i, m)`` with ``sigma_i(strategy) >= epsilon_m``."""
        values = self.game.strategy_values(strategy)
        return frozenset(
            (i, m)
            for i, x in enumerate(values)
            for m in range(1, self.n_intervals + 1)
            if x >= self.breakpoints[m]
        )

    @property
    def strategy_map(self) -> dict:
        """``A`` restricted to every strategy some player can pick."""
        out = {}
        for j in range(self.game.n_players):
            for s in self.game.strategies(j):
                out.setdefault(s, self.resources_of(s))
        return out

    def loads(self, profile) -> Counter:
        counts = Counter()
        for s in profile:
            counts.update(self.resources_of(s))
        return counts


def build_congestion_game(game: Game) -> CongestionGame:
    values = {x for row in game.matrix.values() for x in row}
    if game.exact:
        values |= {Fraction(0), Fraction(1)}
    else:
        values |= {0.0, 1.0}
    return CongestionGame(game, tuple(sorted(values)))


def congestion_payoffs(cg: CongestionGame, profile) -> PayoffVector:
    profile = cg.game.validate_profile(profile)
    loads = cg.loads(profile)
    zero = cg.breakpoints[0] * 0
    out = []
    for s in profile:
        total = zero
        for r in sorted(cg.resources_of(s)):
            total += cg.weight(r, loads[r])
        out.append(total)
    return PayoffVector(tuple(out))


def congestion_potential(cg: CongestionGame, profile):
    """Rosenthal potential: sum over resources of ``w(1) + ... + w(load)``."""
    profile = cg.game.validate_profile(profile)
    total = cg.breakpoints[0] * 0
    for r, load in sorted(cg.loads(profile).items()):
        for k in range(1, load + 1):
            total += cg.weight(r, k)
    return total
