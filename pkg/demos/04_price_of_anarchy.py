"""
Welfare and user utility at equilibrium
=======================================

"""

from fractions import Fraction

import numpy as np

from shapley_mediator import (
    OPTIMAL_PLAIN,
    ZERO_PLAIN,
    gen_prop6,
    gen_prop7,
    gen_tight_poa,
    price_of_anarchy,
    random_game,
    user_price_of_anarchy,
)

# The welfare loss is at most 2 - 1/N and these instances reach it.
for n in range(2, 7):
    print(n, price_of_anarchy(gen_tight_poa(n), "shapley").ratio)

# Random games stay below the bound.
rng = np.random.default_rng(0)
ratios = [
    float(price_of_anarchy(g, "shapley").ratio / (2 - Fraction(1, g.n_players)))
    for g in (random_game(rng) for _ in range(300))
]
print("largest ratio / bound:", max(ratios))

# Users can lose a lot when showing nothing is worthless to them.
print("shapley, eps=0.01:", user_price_of_anarchy(gen_prop6(Fraction(1, 100)), "shapley", ZERO_PLAIN).ratio)
print("top, delta=0.01:", user_price_of_anarchy(gen_prop7(Fraction(1, 100), Fraction(1, 200)), "top", ZERO_PLAIN).ratio)

# With good plain content the loss is bounded.
worst = max(user_price_of_anarchy(random_game(rng), "shapley", OPTIMAL_PLAIN).ratio for _ in range(300))
print("worst user ratio with optimal plain content:", worst)
