import math
from fractions import Fraction

import numpy as np
import pytest

from oracles import shapley_by_subsets
from shapley_mediator import (
    coalition_value,
    gen_example1,
    make_game,
    permutation_counts,
    random_game,
    random_profile,
    shapley_bruteforce,
    shapley_distribution,
    sorted_levels,
)
from shapley_mediator.coop import BruteForceCapExceeded, CoalitionValue, shapley_from_values

F = Fraction


def test_coalition_value_example2(example1):
    assert coalition_value(example1, ("l2", "l3"), "u3", {0, 1}) == F("0.9")
    assert coalition_value(example1, ("l2", "l3"), "u3", set()) == 0
    with pytest.raises(ValueError):
        coalition_value(example1, ("l2", "l3"), "u3", {2})


def test_coalition_value_singleton():
    v = CoalitionValue((F("0.3"), F("0.5"), F("0.7")))
    assert v({1}) == F("0.5")


def test_characteristic_function_properties():
    v = CoalitionValue((F("0.3"), F("0.5"), F("0.7"), F(0)))
    assert v(set()) == 0
    for j in range(4):
        assert v({j}) == v.values[j]
    import itertools

    subsets = [set(c) for r in range(5) for c in itertools.combinations(range(4), r)]
    for a in subsets:
        for b in subsets:
            if a <= b:
                assert v(a) <= v(b)


def test_bruteforce_three_levels():
    assert shapley_from_values((F("0.3"), F("0.5"), F("0.7"))) == (F("0.1"), F("0.2"), F("0.4"))


def test_bruteforce_single_player():
    assert shapley_from_values((F(2, 7),)) == (F(2, 7),)


def test_bruteforce_example2(example1):
    assert [shapley_bruteforce(example1, ("l2", "l3"), u)[0] for u in example1.users] == [
        F("0.4"), F("0.35"), F("0.85")
    ]


def test_bruteforce_cap():
    with pytest.raises(BruteForceCapExceeded):
        shapley_from_values((F(1, 2),) * 11)


@pytest.mark.parametrize("seed", range(60))
def test_bruteforce_matches_subset_oracle_and_closed_form(seed):
    rng = np.random.default_rng(seed)
    game = random_game(rng, max_players=6)
    profile = random_profile(game, rng)
    for u in game.users:
        brute = shapley_bruteforce(game, profile, u)
        assert brute == shapley_by_subsets(game.user_vector(profile, u))
        assert brute == shapley_distribution(sorted_levels(game, profile, u)).per_player
        assert sum(brute) == max(game.user_vector(profile, u))


def test_permutation_counts_examples():
    b, a = permutation_counts(3, 2)
    assert b == 3
    for n in range(1, 7):
        assert permutation_counts(n, 1) == (math.factorial(n - 1), [])
    b, a = permutation_counts(4, 3)
    b1, _ = permutation_counts(4, 1)
    b2, _ = permutation_counts(4, 2)
    assert a == [b2 - b1, b - b2]


def test_permutation_counts_rejects_bad_index():
    with pytest.raises(ValueError):
        permutation_counts(3, 4)
