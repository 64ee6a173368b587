"""
Display probabilities under the Shapley mediator
================================================

"""

from fractions import Fraction

import numpy as np

from shapley_mediator import gen_example1, mediate, shapley_bruteforce, shapley_sample_many, sorted_levels
from shapley_mediator.mediators import empirical_distribution

# Two providers, three users.  Provider 1 picks l1 or l2, provider 2 only has l3.
game = gen_example1()
for item, row in game.matrix.items():
    print(item, [str(x) for x in row])

# Each user sees provider j with probability equal to j's Shapley value in the
# game where a coalition is worth its best item for that user.
profile = ("l2", "l3")
for user in game.users:
    dist = mediate("shapley", game.user_vector(profile, user))
    print(user, [str(p) for p in dist.per_player], "nothing:", dist.none_prob)

# The closed form only needs the sorted levels; brute force over all orders agrees.
for user in game.users:
    levels = sorted_levels(game, profile, user)
    assert mediate("shapley", levels).per_player == shapley_bruteforce(game, profile, user)

# Compare with the other mediators on one satisfaction vector.
values = (Fraction(3, 10), Fraction(1, 2), Fraction(7, 10))
for kind in ("top", "btl", "rand", "none", "shapley"):
    print(f"{kind:8s}", [str(p) for p in mediate(kind, values).as_tuple()])

# The sampler needs one uniform threshold and one uniform pick.
draws = shapley_sample_many(values, np.random.default_rng(0), 200_000)
print("empirical", np.round(empirical_distribution(draws, 3), 3))
