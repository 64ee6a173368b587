"""
Showing the best item can leave providers with no stable choice
===============================================================

"""

from fractions import Fraction

from shapley_mediator import enumerate_pne, gen_impossibility, payoff_vector
from shapley_mediator.dynamics import find_improvement_cycle, format_profile

game = gen_impossibility(Fraction(9, 10), Fraction(1, 2))

# Under TOP and BTL every profile has a provider who wants to switch.
for kind in ("top", "btl", "shapley"):
    print(f"{kind:8s} equilibria:", [format_profile(p) for p in enumerate_pne(game, kind)])

# Following improvements under TOP goes round in a circle.
cycle = find_improvement_cycle(game, "top")
for profile in cycle:
    print(format_profile(profile), [str(x) for x in payoff_vector(game, "top", profile).payoffs])
