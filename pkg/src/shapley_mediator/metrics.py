"""Welfare, user utility, and (user) price of anarchy."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .dynamics import (
    PayoffTable,
    find_improvement_cycle,
    format_number,
    format_profile,
    payoff_vector,
)
from .game import DEFAULT_ENUMERATION_CAP, Game
from .mediators import Mediator, mediate


@dataclass(frozen=True)
class UtilityConfig:
    """Utility a user gets when no item is shown (same for every user)."""

    plain_utility: object = Fraction(0)

    def __post_init__(self):
        if not 0 <= self.plain_utility <= 1:
            raise ValueError("plain utility must lie in [0, 1]")


ZERO_PLAIN = UtilityConfig(Fraction(0))
OPTIMAL_PLAIN = UtilityConfig(Fraction(1))


def _plain(config):
    if isinstance(config, UtilityConfig):
        return config.plain_utility
    return UtilityConfig(config).plain_utility


def social_welfare(game: Game, kind, profile):
    """Expected number of displays over all users."""
    return payoff_vector(game, kind, profile).welfare


def user_utility(game: Game, kind, profile, config=ZERO_PLAIN):
    """Expected satisfaction of all users, counting ``plain`` for no display."""
    plain = _plain(config)
    profile = game.validate_profile(profile)
    rows = game.profile_values(profile)
    total = None
    for values in zip(*rows):
        dist = mediate(kind, values)
        u = dist.none_prob * plain
        for p, x in zip(dist.per_player, values):
            u += p * x
        total = u if total is None else total + u
    return total


@dataclass
class PoAResult:
    mediator: str
    metric: str
    optimum: object
    worst_eq: object
    ratio: object
    optimum_profile: tuple = None
    worst_profile: tuple = None
    equilibria: list = field(default_factory=list)
    cycle: list = None

    @property
    def bounded(self) -> bool:
        return not (isinstance(self.ratio, float) and math.isinf(self.ratio))


def _ratio(optimum, worst):
    if worst == 0:
        return Fraction(1) if optimum == 0 else math.inf
    return optimum / worst


def _unbounded(game, kind, metric, optimum, optimum_profile) -> PoAResult:
    cycle = find_improvement_cycle(game, kind)
    return PoAResult(
        Mediator.parse(kind).value, metric, optimum, None, math.inf,
        optimum_profile=optimum_profile, cycle=cycle,
    )


def price_of_anarchy(game: Game, kind, cap: int = DEFAULT_ENUMERATION_CAP) -> PoAResult:
    """Best welfare over all profiles divided by the worst equilibrium welfare.

    Without any equilibrium the ratio is ``math.inf`` and ``cycle`` holds an
    improvement cycle witnessing it.
    """
    table = PayoffTable(game, kind, cap)
    welfare = table.welfare()
    opt_idx = np.unravel_index(int(np.argmax(welfare)), table.sizes)
    optimum = table.value(welfare[opt_idx])
    optimum_profile = table.profile_at(opt_idx)
    mask = table.pne_mask()
    if not mask.any():
        return _unbounded(game, kind, "welfare", optimum, optimum_profile)
    eq_coords = list(zip(*np.nonzero(mask)))
    worst_coords = min(eq_coords, key=lambda c: welfare[c])
    worst = table.value(welfare[worst_coords])
    return PoAResult(
        table.kind.value, "welfare", optimum, worst, _ratio(optimum, worst),
        optimum_profile=optimum_profile,
        worst_profile=table.profile_at(worst_coords),
        equilibria=[table.profile_at(c) for c in eq_coords],
    )


def best_user_utility(game: Game, config=ZERO_PLAIN, table: PayoffTable = None):
    """Upper bound on user utility over every mediator and profile.

    Each user gets at most ``max(sigma_i(X), plain)``, and showing the best
    item or nothing per user attains it.
    """
    plain = _plain(config)
    table = table or PayoffTable(game, Mediator.NONE)
    scaled_plain = plain * table.value_scale
    per_user = np.maximum(table.user_best, scaled_plain) if not table.exact else np.vectorize(
        lambda x: max(x, scaled_plain), otypes=[object]
    )(table.user_best)
    totals = per_user.sum(axis=-1)
    idx = np.unravel_index(int(np.argmax(totals)), table.sizes)
    value = totals[idx]
    if table.exact:
        value = Fraction(value) / table.value_scale
    else:
        value = float(value)
    return value, table.profile_at(idx)


def user_price_of_anarchy(
    game: Game, kind, config=ZERO_PLAIN, cap: int = DEFAULT_ENUMERATION_CAP
) -> PoAResult:
    table = PayoffTable(game, kind, cap)
    optimum, optimum_profile = best_user_utility(game, config, table)
    mask = table.pne_mask()
    if not mask.any():
        return _unbounded(game, kind, "user_utility", optimum, optimum_profile)
    equilibria = table.profiles(mask)
    utilities = [user_utility(game, kind, p, config) for p in equilibria]
    k = min(range(len(equilibria)), key=lambda t: utilities[t])
    worst = utilities[k]
    return PoAResult(
        table.kind.value, "user_utility", optimum, worst, _ratio(optimum, worst),
        optimum_profile=optimum_profile, worst_profile=equilibria[k], equilibria=equilibria,
    )


def results_to_csv(rows) -> str:
    """``rows`` are ``(game_id, PoAResult)`` pairs."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["game_id", "mediator", "metric", "optimum", "worst_eq", "ratio"])
    for game_id, r in rows:
        writer.writerow([
            game_id,
            r.mediator,
            r.metric,
            format_number(r.optimum),
            "" if r.worst_eq is None else format_number(r.worst_eq),
            "inf" if not r.bounded else format_number(r.ratio),
        ])
    return buf.getvalue()


def describe(result: PoAResult) -> str:
    lines = [
        f"{result.metric} PoA under {result.mediator}: optimum {format_number(result.optimum)}"
    ]
    if result.bounded:
        lines.append(
            f"worst equilibrium {format_number(result.worst_eq)} at ({format_profile(result.worst_profile)}),"
            f" ratio {format_number(result.ratio)}"
        )
    else:
        cyc = " -> ".join(f"({format_profile(p)})" for p in result.cycle or [])
        lines.append(f"no pure equilibrium; improvement cycle {cyc}")
    return "\n".join(lines)
