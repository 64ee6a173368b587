"""Payoffs, better-response dynamics, equilibria and the potential function."""

from __future__ import annotations

import csv
import functools
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .game import (
    DEFAULT_ENUMERATION_CAP,
    EnumerationCapExceeded,
    Game,
    SortedLevels,
)
from .mediators import Mediator, mediate

FLOAT_IMPROVEMENT = 1e-9


def improvement_threshold(game: Game):
    return 0 if game.exact else FLOAT_IMPROVEMENT


@dataclass(frozen=True)
class PayoffVector:
    payoffs: tuple

    @property
    def welfare(self):
        return sum(self.payoffs[1:], self.payoffs[0])

    def __getitem__(self, j):
        return self.payoffs[j]

    def __len__(self):
        return len(self.payoffs)


def _user_vectors(game: Game, profile):
    rows = game.profile_values(profile)
    return list(zip(*rows))


def payoff_vector(game: Game, kind, profile) -> PayoffVector:
    """Expected number of displays of every player's item over all users."""
    kind = Mediator.parse(kind)
    profile = game.validate_profile(profile)
    totals = None
    for values in _user_vectors(game, profile):
        dist = mediate(kind, values).per_player
        totals = list(dist) if totals is None else [a + b for a, b in zip(totals, dist)]
    return PayoffVector(tuple(totals))


def player_payoff(game: Game, kind, profile, player: int):
    return payoff_vector(game, kind, profile)[player]


def social_welfare(game: Game, kind, profile):
    return payoff_vector(game, kind, profile).welfare


def _deviate(profile, player, strategy):
    return profile[:player] + (strategy,) + profile[player + 1:]


def better_response(game: Game, kind, profile, player: int, best: bool = False):
    """An improving strategy for ``player``, or ``None`` if already best-responding.

    Returns the first improving strategy in menu order, or with ``best=True``
    the one with the largest gain (first in menu order among equals).
    """
    profile = game.validate_profile(profile)
    threshold = improvement_threshold(game)
    current = player_payoff(game, kind, profile, player)
    choice, choice_gain = None, None
    for s in game.strategies(player):
        if s == profile[player]:
            continue
        gain = player_payoff(game, kind, _deviate(profile, player, s), player) - current
        if gain > threshold:
            if not best:
                return s
            if choice_gain is None or gain > choice_gain:
                choice, choice_gain = s, gain
    return choice


def is_pne(game: Game, kind, profile) -> bool:
    """Exhaustive check of every unilateral deviation."""
    return all(
        better_response(game, kind, profile, j) is None for j in range(game.n_players)
    )


# -- potential ----------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def harmonic(k: int) -> Fraction:
    return sum((Fraction(1, t) for t in range(1, k + 1)), Fraction(0))


def user_potential(values) -> object:
    """``sum_m (s^m - s^{m-1}) * H_{N-m+1}`` over one user's sorted levels."""
    levels = SortedLevels.from_values(tuple(values)).levels
    n = len(levels) - 1
    exact = isinstance(levels[0], Fraction)
    total = levels[0]
    for m in range(1, n + 1):
        h = harmonic(n - m + 1)
        total += (levels[m] - levels[m - 1]) * (h if exact else float(h))
    return total


def potential_value(game: Game, profile):
    """Exact potential of the Shapley-mediator game at ``profile``."""
    profile = game.validate_profile(profile)
    vectors = _user_vectors(game, profile)
    total = user_potential(vectors[0])
    for values in vectors[1:]:
        total += user_potential(values)
    return total


# -- dynamics -----------------------------------------------------------------


@dataclass(frozen=True)
class Step:
    player: int
    old: object
    new: object
    payoff_delta: object
    potential_delta: object = None


@dataclass
class DynamicsTrace:
    initial: tuple
    steps: list = field(default_factory=list)
    terminal: tuple = ()
    converged: bool = False

    @property
    def step_count(self) -> int:
        return len(self.steps)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["step", "player", "from", "to", "payoff_delta", "potential_delta"])
        for k, s in enumerate(self.steps, start=1):
            writer.writerow([
                k,
                s.player,
                format_strategy(s.old),
                format_strategy(s.new),
                format_number(s.payoff_delta),
                "" if s.potential_delta is None else format_number(s.potential_delta),
            ])
        return buf.getvalue()


def format_strategy(strategy) -> str:
    if isinstance(strategy, frozenset):
        return "+".join(sorted(strategy))
    return str(strategy)


def format_profile(profile) -> str:
    return ",".join(format_strategy(s) for s in profile)


def format_number(x) -> str:
    """``p/q`` plus a 12-digit decimal for rationals, 12 significant digits otherwise."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x} ({float(x):.12f})"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.12g}"


def run_dynamics(
    game: Game,
    kind,
    initial,
    schedule: str = "round-robin",
    seed: int = 0,
    max_steps: int = 10_000,
    best: bool = False,
) -> DynamicsTrace:
    """Apply unilateral improvements until nobody improves or ``max_steps`` is hit.

    ``round-robin`` visits players in index order.  ``random`` draws the next
    player uniformly (from ``seed``) among those not yet known to be
    best-responding since the last move.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    if schedule not in ("round-robin", "random"):
        raise ValueError(f"unknown schedule {schedule!r}")
    kind = Mediator.parse(kind)
    profile = game.validate_profile(initial)
    trace = DynamicsTrace(initial=profile)
    rng = np.random.default_rng(seed)
    n = game.n_players
    track_potential = kind is Mediator.SHAPLEY
    stable: set[int] = set()
    turn = 0
    while len(trace.steps) < max_steps:
        if len(stable) == n:
            trace.converged = True
            break
        if schedule == "round-robin":
            player = turn % n
            turn += 1
        else:
            pending = [j for j in range(n) if j not in stable]
            player = pending[int(rng.integers(len(pending)))]
        move = better_response(game, kind, profile, player, best=best)
        if move is None:
            stable.add(player)
            continue
        new_profile = _deviate(profile, player, move)
        delta = (
            player_payoff(game, kind, new_profile, player)
            - player_payoff(game, kind, profile, player)
        )
        pot = None
        if track_potential:
            pot = potential_value(game, new_profile) - potential_value(game, profile)
        trace.steps.append(Step(player, profile[player], move, delta, pot))
        profile = new_profile
        # only a best response leaves the mover with nothing left to gain
        stable = {player} if best else set()
    else:
        # Budget exhausted: still report convergence if the final profile is stable.
        trace.converged = is_pne(game, kind, profile)
    trace.terminal = profile
    return trace


def find_improvement_cycle(game: Game, kind, start=None, max_steps: int = 100_000):
    """Follow round-robin first-improvement dynamics until a profile repeats.

    Returns the list of profiles forming the cycle (first == last), or
    ``None`` when the dynamics reach an equilibrium instead.
    """
    kind = Mediator.parse(kind)
    if start is None:
        start = tuple(s[0] for s in game.strategy_spaces())
    profile = game.validate_profile(start)
    seen = {profile: 0}
    path = [profile]
    n = game.n_players
    idle = 0
    turn = 0
    while len(path) <= max_steps:
        player = turn % n
        turn += 1
        move = better_response(game, kind, profile, player)
        if move is None:
            idle += 1
            if idle == n:
                return None
            continue
        idle = 0
        profile = _deviate(profile, player, move)
        if profile in seen:
            return path[seen[profile]:] + [profile]
        seen[profile] = len(path)
        path.append(profile)
    return None


# -- exhaustive tables ------------------------------------------------------


def _lcm(values) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


class PayoffTable:
    """Payoffs of every profile, computed in vectorised blocks.

    Exact games are rescaled to integers (common denominator of the matrix
    times ``lcm(1..N)``) so the Shapley, TOP, RAND and NONE payoffs are exact
    integer arrays; ``scale`` converts back.  Exact BTL falls back to
    per-profile rational arithmetic.  Float games use float arrays.
    """

    BLOCK = 1 << 15

    def __init__(self, game: Game, kind, cap: int = DEFAULT_ENUMERATION_CAP):
        self.game = game
        self.kind = Mediator.parse(kind)
        self.spaces = game.strategy_spaces()
        self.sizes = tuple(len(s) for s in self.spaces)
        total = math.prod(self.sizes)
        if total > cap:
            raise EnumerationCapExceeded(total, cap)
        self.size = total
        n_players = game.n_players
        self.exact = game.exact

        if self.exact:
            denom = _lcm(x.denominator for row in game.matrix.values() for x in row)
            self.value_scale = denom
            self.scale = denom * _lcm(range(1, n_players + 1))
            dtype = np.int64 if self.scale * game.n_users < 2**62 else object
            conv = lambda x: int(x * denom)  # noqa: E731
        else:
            self.value_scale = 1
            self.scale = 1
            dtype = np.float64
            conv = float
        self.dtype = dtype
        sat = [
            np.array([[conv(x) for x in game.strategy_values(s)] for s in space], dtype=dtype)
            for space in self.spaces
        ]
        payoffs = np.empty((total, n_players), dtype=object if (self.exact and self.kind is Mediator.BTL) else dtype)
        best = np.empty((total, game.n_users), dtype=dtype)
        for start in range(0, total, self.BLOCK):
            idx = np.arange(start, min(total, start + self.BLOCK))
            coords = np.unravel_index(idx, self.sizes) if n_players > 1 else (idx,)
            block = np.stack([sat[j][coords[j]] for j in range(n_players)], axis=-1)
            best[idx] = block.max(axis=-1)
            payoffs[idx] = self._block_payoffs(block)
        self.payoffs = payoffs.reshape(self.sizes + (n_players,))
        self.user_best = best.reshape(self.sizes + (game.n_users,))

    def _block_payoffs(self, block: np.ndarray) -> np.ndarray:
        """``block`` has shape (B, users, players) of scaled satisfaction values."""
        kind = self.kind
        n = block.shape[-1]
        if kind is Mediator.NONE:
            return np.zeros((block.shape[0], n), dtype=self.dtype)
        if kind is Mediator.SHAPLEY:
            order = np.argsort(block, axis=-1, kind="stable")
            asc = np.take_along_axis(block, order, axis=-1)
            diffs = np.diff(asc, axis=-1, prepend=np.zeros_like(asc[..., :1]))
            remaining = n - np.arange(n)  # N - m + 1 for m = 1..N
            if self.exact:
                per_level = diffs * np.array([self.scale // self.value_scale // r for r in remaining], dtype=self.dtype)
            else:
                per_level = diffs / remaining
            cum = np.cumsum(per_level, axis=-1)
            probs = np.empty_like(cum)
            np.put_along_axis(probs, order, cum, axis=-1)
            return probs.sum(axis=1)
        if kind in (Mediator.TOP, Mediator.RAND):
            if kind is Mediator.TOP:
                top = block.max(axis=-1, keepdims=True)
                chosen = (block == top) & (top > 0)
            else:
                chosen = block > 0
            count = chosen.sum(axis=-1, keepdims=True)
            if self.exact:
                unit = self.scale // np.maximum(count, 1)
                probs = np.where(chosen, unit, 0).astype(self.dtype)
            else:
                probs = np.where(chosen, 1.0 / np.maximum(count, 1), 0.0)
            return probs.sum(axis=1)
        # BTL
        if self.exact:
            out = np.empty((block.shape[0], n), dtype=object)
            for b in range(block.shape[0]):
                totals = [Fraction(0)] * n
                for row in block[b]:
                    s = int(sum(int(x) for x in row))
                    if s:
                        for j in range(n):
                            totals[j] += Fraction(int(row[j]), s)
                for j in range(n):
                    out[b, j] = totals[j] * self.scale
            return out
        total = block.sum(axis=-1, keepdims=True)
        probs = np.where(total > 0, block / np.where(total > 0, total, 1.0), 0.0)
        return probs.sum(axis=1)

    def value(self, x):
        """Convert a scaled table entry back to a payoff."""
        if self.exact:
            return Fraction(x) / self.scale
        return float(x)

    def profile_at(self, coords) -> tuple:
        return tuple(self.spaces[j][c] for j, c in enumerate(coords))

    def index_of(self, profile) -> tuple:
        return tuple(self.spaces[j].index(s) for j, s in enumerate(profile))

    def payoff(self, profile) -> PayoffVector:
        row = self.payoffs[self.index_of(profile)]
        return PayoffVector(tuple(self.value(x) for x in row))

    def welfare(self) -> np.ndarray:
        return self.payoffs.sum(axis=-1)

    def pne_mask(self) -> np.ndarray:
        threshold = 0 if self.exact else FLOAT_IMPROVEMENT * self.scale
        mask = np.ones(self.sizes, dtype=bool)
        for j in range(self.game.n_players):
            own = self.payoffs[..., j]
            best = own.max(axis=j, keepdims=True)
            mask &= np.asarray(best - own <= threshold, dtype=bool)
        return mask

    def profiles(self, mask: np.ndarray) -> list:
        return [self.profile_at(c) for c in zip(*np.nonzero(mask))]


def enumerate_pne(game: Game, kind, cap: int = DEFAULT_ENUMERATION_CAP) -> list:
    """All pure Nash equilibria, in lexicographic profile order."""
    table = PayoffTable(game, kind, cap)
    return table.profiles(table.pne_mask())
