"""
Better-response dynamics climb a potential
==========================================

"""

import numpy as np

from shapley_mediator import is_pne, potential_value, random_game, random_profile, run_dynamics

rng = np.random.default_rng(4)
game = random_game(rng, n_players=4, max_menu=5, max_users=6)
start = random_profile(game, rng)

# Every improving move raises the potential by exactly the mover's gain.
trace = run_dynamics(game, "shapley", start, schedule="random", seed=1)
print(trace.to_csv())
print("converged:", trace.converged, "equilibrium:", is_pne(game, "shapley", trace.terminal))
print("potential", potential_value(game, start), "->", potential_value(game, trace.terminal))

# Many random starts, both schedules.
steps = []
for k in range(200):
    g = random_game(rng)
    for schedule in ("round-robin", "random"):
        t = run_dynamics(g, "shapley", random_profile(g, rng), schedule=schedule, seed=k)
        assert t.converged and is_pne(g, "shapley", t.terminal)
        steps.append(t.step_count)
print("steps to converge: mean", np.mean(steps), "max", max(steps))
