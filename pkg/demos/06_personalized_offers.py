"""
Providers offering several items
================================

"""

import numpy as np

from shapley_mediator import enumerate_pne, make_game, payoff_vector, potential_value, random_game, random_profile, run_dynamics
from shapley_mediator.dynamics import format_profile

# Each provider may offer up to k items; a user sees the provider's best one.
game = make_game(
    {"a": ["0.9", "0.1"], "b": ["0.2", "0.8"], "c": ["0.6", "0.6"]},
    [["a", "b", "c"], ["c"]],
    budgets=[2, 1],
)
for s in game.strategies(0):
    profile = (s, game.strategies(1)[0])
    print(format_profile(profile), [str(x) for x in payoff_vector(game, "shapley", profile).payoffs])
print("equilibria:", [format_profile(p) for p in enumerate_pne(game, "shapley")])

# The potential argument carries over unchanged.
rng = np.random.default_rng(1)
g = random_game(rng, personalized=True, n_players=3)
start = random_profile(g, rng)
trace = run_dynamics(g, "shapley", start)
print("steps", trace.step_count, "terminal", format_profile(trace.terminal))
print("potential", potential_value(g, start), "->", potential_value(g, trace.terminal))
