"""Display rules mapping one user's satisfaction vector to a distribution.

Every mediator here looks only at ``(sigma_i(X_1), ..., sigma_i(X_N))`` for
the user at hand, so User-Independence holds by construction.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .game import Game, SortedLevels, enumerate_profiles

FLOAT_TOL = 1e-12


class Mediator(str, enum.Enum):
    TOP = "top"
    BTL = "btl"
    NONE = "none"
    RAND = "rand"
    SHAPLEY = "shapley"

    @classmethod
    def parse(cls, kind) -> "Mediator":
        if isinstance(kind, cls):
            return kind
        try:
            return cls(str(kind).lower())
        except ValueError:
            raise ValueError(f"unknown mediator {kind!r}") from None


@dataclass(frozen=True)
class DisplayDistribution:
    per_player: tuple
    none_prob: object

    @property
    def displayed(self):
        """Total probability of showing some player's item."""
        return sum(self.per_player, self.none_prob * 0)

    def as_tuple(self) -> tuple:
        return self.per_player + (self.none_prob,)


def _values_of(levels) -> tuple:
    if isinstance(levels, SortedLevels):
        return levels.values()
    return tuple(levels)


def _is_exact(values) -> bool:
    return all(isinstance(x, (Fraction, int)) for x in values)


def _zero_one(values):
    if _is_exact(values):
        return Fraction(0), Fraction(1)
    return 0.0, 1.0


def shapley_distribution(levels) -> DisplayDistribution:
    """Shapley values of the max-satisfaction cooperative game, in O(N log N).

    With ascending levels ``s^0 = 0 <= s^1 <= ... <= s^N``, the player at rank
    ``r`` gets ``sum_{m<=r} (s^m - s^{m-1}) / (N - m + 1)``.
    """
    if not isinstance(levels, SortedLevels):
        levels = SortedLevels.from_values(tuple(levels))
    lv = levels.levels
    n = levels.n_players
    zero, one = _zero_one(lv[1:])
    cum = [zero] * (n + 1)
    acc = zero
    for m in range(1, n + 1):
        acc = acc + (lv[m] - lv[m - 1]) / (n - m + 1)
        cum[m] = acc
    per_player = tuple(cum[r] for r in levels.rank)
    return DisplayDistribution(per_player, one - lv[n])


def _top(values):
    zero, one = _zero_one(values)
    best = max(values)
    if best == 0:
        return DisplayDistribution((zero,) * len(values), one)
    winners = [j for j, x in enumerate(values) if x == best]
    share = one / len(winners)
    return DisplayDistribution(tuple(share if x == best else zero for x in values), zero)


def _btl(values):
    zero, one = _zero_one(values)
    total = sum(values, zero)
    if total == 0:
        return DisplayDistribution((zero,) * len(values), one)
    return DisplayDistribution(tuple(x / total for x in values), zero)


def _rand(values):
    zero, one = _zero_one(values)
    positive = sum(1 for x in values if x > 0)
    if positive == 0:
        return DisplayDistribution((zero,) * len(values), one)
    share = one / positive
    return DisplayDistribution(tuple(share if x > 0 else zero for x in values), zero)


def _none(values):
    zero, one = _zero_one(values)
    return DisplayDistribution((zero,) * len(values), one)


def mediate(kind, levels) -> DisplayDistribution:
    """Display distribution of mediator ``kind`` for one user.

    ``levels`` is a :class:`SortedLevels` or the raw per-player satisfaction
    vector.  On the all-zero vector TOP, BTL and RAND show nothing.
    """
    kind = Mediator.parse(kind)
    if kind is Mediator.SHAPLEY:
        return shapley_distribution(levels)
    values = _values_of(levels)
    if not values:
        raise ValueError("at least one player is required")
    return {
        Mediator.TOP: _top,
        Mediator.BTL: _btl,
        Mediator.RAND: _rand,
        Mediator.NONE: _none,
    }[kind](values)


def display_distribution(game: Game, kind, profile, user) -> DisplayDistribution:
    return mediate(kind, game.user_vector(profile, user))


def sampler_marginal(levels) -> DisplayDistribution:
    """Exact outcome distribution of the threshold sampler.

    Integrates the sampler over the threshold ``Y``: on each interval between
    consecutive distinct satisfaction values the eligible set is fixed and
    shares the interval length uniformly.
    """
    values = _values_of(levels)
    zero, one = _zero_one(values)
    probs = [zero] * len(values)
    lo = zero
    for hi in sorted(set(values)):
        if hi <= lo:
            continue
        eligible = [j for j, x in enumerate(values) if x >= hi]
        share = (hi - lo) / len(eligible)
        for j in eligible:
            probs[j] += share
        lo = hi
    return DisplayDistribution(tuple(probs), one - max(values))


NONE_OUTCOME = -1


def shapley_sample(levels, rng: np.random.Generator) -> int:
    """Draw one display outcome: a player index, or ``NONE_OUTCOME``.

    Draw ``Y`` uniform on (0, 1]; show nothing if ``Y`` beats every
    satisfaction, otherwise pick uniformly among players with satisfaction at
    least ``Y``.
    """
    values = [float(x) for x in _values_of(levels)]
    y = 1.0 - rng.random()
    eligible = [j for j, x in enumerate(values) if x >= y]
    if not eligible:
        return NONE_OUTCOME
    return eligible[int(rng.random() * len(eligible))]


def shapley_sample_many(levels, rng: np.random.Generator, size: int) -> np.ndarray:
    """Vectorised :func:`shapley_sample`; same two-draw scheme per sample."""
    values = np.array([float(x) for x in _values_of(levels)])
    n = len(values)
    order = np.argsort(values, kind="stable")
    ascending = values[order]
    y = 1.0 - rng.random(size)
    u = rng.random(size)
    below = np.searchsorted(ascending, y, side="left")
    n_eligible = n - below
    pick = below + np.minimum((u * n_eligible).astype(np.int64), n_eligible - 1)
    out = np.full(size, NONE_OUTCOME, dtype=np.int64)
    hit = n_eligible > 0
    out[hit] = order[pick[hit]]
    return out


def empirical_distribution(samples: np.ndarray, n_players: int) -> np.ndarray:
    """Frequencies of players ``0..N-1`` followed by the no-display outcome."""
    counts = np.bincount(samples + 1, minlength=n_players + 1)
    return np.concatenate([counts[1:], counts[:1]]) / len(samples)


def total_variation(p, q) -> float:
    return 0.5 * float(np.abs(np.asarray(p, dtype=float) - np.asarray(q, dtype=float)).sum())


# -- axioms -----------------------------------------------------------------

AXIOMS = (
    "null_player",
    "symmetry",
    "user_independence",
    "leader_monotonicity",
    "efficiency",
    "complete",
)
FAIRNESS = AXIOMS[:4]


@dataclass
class Counterexample:
    axiom: str
    game: Game
    profile: tuple
    user: str
    values: tuple
    probabilities: tuple
    detail: str = ""

    def replay(self, kind) -> bool:
        """True if the violation still reproduces under ``kind``."""
        dist = display_distribution(self.game, kind, self.profile, self.user)
        if self.axiom == "user_independence":
            return _user_independence_violation(self.game, kind, self.profile, self.user) is not None
        return _violation(self.axiom, self.values, dist) is not None


@dataclass
class AxiomReport:
    kind: Mediator
    checked: int = 0
    counterexamples: dict = field(default_factory=dict)

    def passed(self, axiom: str) -> bool:
        return axiom not in self.counterexamples

    def verdicts(self) -> dict:
        return {a: ("pass" if self.passed(a) else "counterexample") for a in AXIOMS}

    @property
    def fair(self) -> bool:
        return all(self.passed(a) for a in FAIRNESS)


def _eq(a, b) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(a - b) <= FLOAT_TOL


def _violation(axiom: str, values, dist: DisplayDistribution) -> Optional[str]:
    p = dist.per_player
    n = len(values)
    if axiom == "null_player":
        for j in range(n):
            if values[j] == 0 and not _eq(p[j], 0 * p[j]):
                return f"player {j} has zero satisfaction but probability {p[j]}"
    elif axiom == "symmetry":
        for j in range(n):
            for m in range(j + 1, n):
                if values[j] == values[m] and not _eq(p[j], p[m]):
                    return f"players {j},{m} tie but get {p[j]} vs {p[m]}"
    elif axiom == "leader_monotonicity":
        best = max(values)
        for j in range(n):
            if values[j] != best:
                continue
            for m in range(n):
                if values[m] != best and not p[j] > p[m] + (0 if _is_exact(p) else FLOAT_TOL):
                    return f"leader {j} gets {p[j]}, non-leader {m} gets {p[m]}"
    elif axiom == "efficiency":
        if not _eq(dist.displayed, max(values)):
            return f"display mass {dist.displayed} != max satisfaction {max(values)}"
    elif axiom == "complete":
        # All-zero vectors are exempt: mediators may behave arbitrarily there.
        if max(values) > 0 and not _eq(dist.displayed, 1 + 0 * dist.displayed):
            return f"display mass {dist.displayed} != 1"
    return None


def _user_independence_violation(game: Game, kind, profile, user) -> Optional[str]:
    base = display_distribution(game, kind, profile, user)
    variants = []
    i = game.user_index(user)
    if game.n_users > 1:
        other = game.users[(i + 1) % game.n_users]
        variants.append(("removed " + other, game.without_user(other)))
    # Add a user who copies the reversed satisfaction ordering of the items.
    items = game.items
    extra = {k: game.matrix[items[-1 - idx]][i] for idx, k in enumerate(items)}
    fresh = "_extra_user"
    while fresh in game.users:
        fresh += "_"
    variants.append(("added " + fresh, game.with_user(fresh, extra)))
    for label, variant in variants:
        other_dist = display_distribution(variant, kind, profile, user)
        if not all(_eq(a, b) for a, b in zip(base.as_tuple(), other_dist.as_tuple())):
            return f"distribution changed after {label}"
    return None


def check_axioms(kind, games: Sequence[Game], trials: int = 1, rng=None) -> AxiomReport:
    """Test every axiom on sampled ``(game, profile, user)`` triples.

    Each game contributes ``trials`` profiles: all of them when the space is
    that small, otherwise ``trials`` uniform draws.  The first counterexample
    found per axiom is kept.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    kind = Mediator.parse(kind)
    rng = rng if rng is not None else np.random.default_rng(0)
    report = AxiomReport(kind)
    for game in games:
        spaces = game.strategy_spaces()
        if math.prod(len(s) for s in spaces) <= trials:
            profiles = list(enumerate_profiles(game))
        else:
            profiles = [
                tuple(s[int(rng.integers(len(s)))] for s in spaces) for _ in range(trials)
            ]
        for profile in profiles:
            for user in game.users:
                report.checked += 1
                values = game.user_vector(profile, user)
                dist = mediate(kind, values)
                for axiom in AXIOMS:
                    if axiom in report.counterexamples:
                        continue
                    if axiom == "user_independence":
                        detail = _user_independence_violation(game, kind, profile, user)
                    else:
                        detail = _violation(axiom, values, dist)
                    if detail is not None:
                        report.counterexamples[axiom] = Counterexample(
                            axiom, game, profile, user, values, dist.as_tuple(), detail
                        )
    return report
