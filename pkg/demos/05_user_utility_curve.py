"""
Worst single-user utility as the number of providers grows
==========================================================

"""

import numpy as np

from shapley_mediator import single_user_utility, solve_stationary
from shapley_mediator.upoa_numeric import batch_utility, min_utility_curve, random_monotone

# One provider: the worst level is 1/2 and the user keeps 3/4.
one = solve_stationary(1)
print(one.sigma, one.utility)

# For larger N the minimiser solves a symmetric linear system.
point = solve_stationary(8)
print(np.round(point.sigma, 4), round(point.utility, 6))

# Random feasible vectors never do worse.
samples = random_monotone(np.random.default_rng(0), 8, 100_000)
print("best random sample:", batch_utility(samples).min())

curve = min_utility_curve(1000)
u = np.array([p.utility for p in curve])
print("min utility", u.min(), "at N =", int(u.argmin()) + 1, "bound", 1 / u.min())
for n in (1, 2, 5, 10, 100, 1000):
    print(n, round(u[n - 1], 6))
assert single_user_utility(curve[-1].sigma) == curve[-1].utility
