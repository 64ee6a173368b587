"""Pass/fail table checking every worked example and bound end to end."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import generators as gen
from .congestion import build_congestion_game, congestion_payoffs
from .coop import shapley_bruteforce
from .dynamics import enumerate_pne, format_number, payoff_vector, potential_value
from .game import sorted_levels
from .mediators import shapley_distribution
from .metrics import OPTIMAL_PLAIN, ZERO_PLAIN, price_of_anarchy, user_price_of_anarchy, user_utility
from .upoa_numeric import min_utility_curve, solve_stationary


@dataclass
class Row:
    check: str
    expected: str
    observed: str
    passed: bool


def _fmt(x) -> str:
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in x) + "]"
    if isinstance(x, Fraction):
        return format_number(x)
    return str(x)


def reproduce_paper(
    shapley_fn=shapley_distribution,
    oracle_games: int = 200,
    quarter_games: int = 100,
    curve_n_max: int = 1000,
    seed: int = 0,
) -> list:
    """Run the reproduction suite; ``shapley_fn`` can be swapped for fault injection."""
    rows = []

    def add(check, expected, observed, passed=None):
        if passed is None:
            passed = expected == observed
        rows.append(Row(check, _fmt(expected), _fmt(observed), bool(passed)))

    ex = gen.gen_example1()
    best = ("l2", "l3")
    worst = ("l1", "l3")
    probs = [shapley_fn(sorted_levels(ex, best, u)).per_player[0] for u in ex.users]
    add("example2 player-1 display probabilities", [Fraction(2, 5), Fraction(7, 20), Fraction(17, 20)], probs)
    add(
        "example2 shapley payoffs pi_1(l2,l3), pi_1(l1,l3)",
        [Fraction(8, 5), Fraction(7, 10)],
        [payoff_vector(ex, "shapley", best)[0], payoff_vector(ex, "shapley", worst)[0]],
    )
    add("example2 shapley equilibria", [best], enumerate_pne(ex, "shapley"))
    add("example2 user utility at equilibrium", Fraction("2.145"), user_utility(ex, "shapley", best))
    add(
        "example2 potential difference equals payoff difference",
        Fraction(9, 10),
        potential_value(ex, best) - potential_value(ex, worst),
    )
    add(
        "example1 TOP payoffs pi_1(l1,l3), pi_1(l2,l3)",
        [Fraction(2), Fraction(1)],
        [payoff_vector(ex, "top", worst)[0], payoff_vector(ex, "top", best)[0]],
    )
    add("example1 TOP equilibria", [worst], enumerate_pne(ex, "top"))
    add(
        "example1 TOP user utilities (l1,l3), (l2,l3)",
        [Fraction(2), Fraction(13, 5)],
        [user_utility(ex, "top", worst), user_utility(ex, "top", best)],
    )
    cg = build_congestion_game(ex)
    add(
        "congestion payoffs equal shapley payoffs (example1)",
        [payoff_vector(ex, "shapley", p).payoffs for p in (best, worst)],
        [congestion_payoffs(cg, p).payoffs for p in (best, worst)],
    )

    rng = np.random.default_rng(seed)
    mismatches = 0
    for _ in range(oracle_games):
        g = gen.random_game(rng, max_players=6)
        profile = gen.random_profile(g, rng)
        for u in g.users:
            closed = shapley_fn(sorted_levels(g, profile, u)).per_player
            if tuple(closed) != shapley_bruteforce(g, profile, u):
                mismatches += 1
    add(f"closed form equals permutation oracle ({oracle_games} games)", 0, mismatches)

    imp = gen.gen_impossibility(Fraction(9, 10), Fraction(1, 2))
    add("impossibility(0.9,0.5) TOP equilibria", 0, len(enumerate_pne(imp, "top")))
    add("impossibility(0.9,0.5) BTL equilibria", 0, len(enumerate_pne(imp, "btl")))
    n_sm = len(enumerate_pne(imp, "shapley"))
    add("impossibility(0.9,0.5) shapley has an equilibrium", ">0", n_sm, n_sm > 0)

    for n in range(2, 6):
        add(f"tight PoA instance N={n}", Fraction(2 * n - 1, n), price_of_anarchy(gen.gen_tight_poa(n), "shapley").ratio)

    r6 = user_price_of_anarchy(gen.gen_prop6(Fraction(1, 100)), "shapley", ZERO_PLAIN)
    add("prop6 UPoA_SM(eps=0.01) >= 100", ">=100", r6.ratio, r6.ratio >= 100)
    delta, eps = Fraction(1, 100), Fraction(1, 200)
    r7 = user_price_of_anarchy(gen.gen_prop7(delta, eps), "top", ZERO_PLAIN)
    add("prop7 UPoA_TOP = (1+eps)/(2 delta)", (1 + eps) / (2 * delta), r7.ratio)

    low = 0
    for _ in range(quarter_games):
        g = gen.random_game(rng)
        profile = gen.random_profile(g, rng)
        if user_utility(g, "shapley", profile, OPTIMAL_PLAIN) < Fraction(g.n_users, 4):
            low += 1
    add(f"U >= n/4 with optimal plain content ({quarter_games} games)", 0, low)

    one = solve_stationary(1)
    add("stationary point N=1", "(0.5, 0.75)", f"({one.sigma[0]:.12g}, {one.utility:.12g})",
        abs(one.sigma[0] - 0.5) < 1e-15 and abs(one.utility - 0.75) < 1e-15)
    curve = min_utility_curve(curve_n_max)
    u_min = min(p.utility for p in curve)
    add(f"min single-user utility over N<={curve_n_max} >= 0.568", ">=0.568", f"{u_min:.6f}", u_min >= 0.568)
    return rows


def rows_to_csv(rows) -> str:
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["check", "expected", "observed", "status"])
    for r in rows:
        writer.writerow([r.check, r.expected, r.observed, "pass" if r.passed else "FAIL"])
    return buf.getvalue()
