from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import shapley_by_subsets
from shapley_mediator import (
    Mediator,
    check_axioms,
    gen_example1,
    make_game,
    mediate,
    random_game,
    shapley_distribution,
    shapley_sample,
    shapley_sample_many,
    sorted_levels,
)
from shapley_mediator.mediators import (
    NONE_OUTCOME,
    empirical_distribution,
    sampler_marginal,
    total_variation,
)

F = Fraction
fractions_01 = st.fractions(min_value=0, max_value=1, max_denominator=40)
vectors = st.lists(fractions_01, min_size=1, max_size=7)


def test_top_example1(example1):
    dist = mediate("top", example1.user_vector(("l1", "l3"), "u1"))
    assert dist.per_player == (0, 1)


def test_btl_symmetric():
    assert mediate("btl", (F(1, 2), F(1, 2))).as_tuple() == (F(1, 2), F(1, 2), 0)


def test_rand_positive_only():
    # uniform over the two positive entries
    dist = mediate("rand", (F("0.9"), F(0), F("0.3")))
    assert dist.as_tuple() == (F(1, 2), 0, F(1, 2), 0)


def test_none_mediator():
    assert mediate("none", (F(1), F(1, 2))).as_tuple() == (0, 0, 1)


@pytest.mark.parametrize("kind", ["top", "btl", "rand"])
def test_all_zero_shows_nothing(kind):
    assert mediate(kind, (F(0), F(0))).as_tuple() == (0, 0, 1)


def test_top_ties_uniform():
    dist = mediate("top", (F(1, 2), F(1, 5), F(1, 2)))
    assert dist.per_player == (F(1, 2), 0, F(1, 2))


def test_example2_probabilities(example1):
    probs = [
        shapley_distribution(sorted_levels(example1, ("l2", "l3"), u)).per_player[0]
        for u in example1.users
    ]
    assert probs == [F("0.4"), F("0.35"), F("0.85")]


def test_shapley_all_zero():
    dist = shapley_distribution((F(0),) * 4)
    assert dist.per_player == (0, 0, 0, 0)
    assert dist.none_prob == 1


def test_shapley_three_levels_against_subset_oracle():
    values = (F("0.3"), F("0.5"), F("0.7"))
    expected = shapley_by_subsets(values)
    assert expected == (F("0.1"), F("0.2"), F("0.4"))
    dist = shapley_distribution(values)
    assert dist.per_player == expected
    assert dist.none_prob == F("0.3")


@given(vectors)
def test_shapley_matches_subset_oracle(values):
    assert shapley_distribution(values).per_player == shapley_by_subsets(values)


@given(vectors)
def test_shapley_properties(values):
    dist = shapley_distribution(values)
    p = dist.per_player
    assert all(x >= 0 for x in p) and dist.none_prob >= 0
    assert sum(p) + dist.none_prob == 1
    assert sum(p) == max(values)
    for j, x in enumerate(values):
        if max(values) > 0:
            assert (p[j] == 0) == (x == 0)
        for m, y in enumerate(values):
            if x == y:
                assert p[j] == p[m]
            if x > y:
                assert p[j] > p[m]


@given(vectors, st.sampled_from(list(Mediator)))
def test_every_mediator_is_a_distribution(values, kind):
    dist = mediate(kind, values)
    assert all(x >= 0 for x in dist.as_tuple())
    assert sum(dist.as_tuple()) == 1


@given(vectors.filter(lambda v: max(v) > 0), st.sampled_from(["top", "btl"]))
def test_top_and_btl_complete(values, kind):
    assert mediate(kind, values).displayed == 1


@given(vectors)
def test_sampler_marginal_equals_closed_form(values):
    assert sampler_marginal(values) == shapley_distribution(values)


def test_float_distribution_close():
    values = (0.3, 0.5, 0.7)
    dist = shapley_distribution(values)
    assert np.allclose(dist.as_tuple(), (0.1, 0.2, 0.4, 0.3), atol=1e-12, rtol=0)


def test_sampler_degenerate_cases():
    rng = np.random.default_rng(0)
    assert {shapley_sample((F(0),) * 3, rng) for _ in range(200)} == {NONE_OUTCOME}
    draws = shapley_sample_many((F(1),) * 4, rng, 40_000)
    assert NONE_OUTCOME not in set(draws.tolist())
    freq = empirical_distribution(draws, 4)
    assert np.allclose(freq[:4], 0.25, atol=0.01)


def test_sampler_single_draws_match_vectorised_scheme():
    values = (F("0.3"), F("0.5"), F("0.7"))
    rng = np.random.default_rng(3)
    draws = np.array([shapley_sample(values, rng) for _ in range(20_000)])
    freq = empirical_distribution(draws, 3)
    assert total_variation(freq, (0.1, 0.2, 0.4, 0.3)) < 0.02


def test_sampler_million_draws():
    values = (F("0.3"), F("0.5"), F("0.7"))
    target = shapley_by_subsets(values) + (F("0.3"),)
    draws = shapley_sample_many(values, np.random.default_rng(2024), 1_000_000)
    assert total_variation(empirical_distribution(draws, 3), target) <= 0.005


def test_sampler_reproducible():
    values = (F("0.3"), F("0.5"), F("0.7"))
    a = shapley_sample_many(values, np.random.default_rng(9), 1000)
    b = shapley_sample_many(values, np.random.default_rng(9), 1000)
    assert (a == b).all()


# -- axioms -----------------------------------------------------------------


@pytest.fixture(scope="module")
def axiom_games():
    rng = np.random.default_rng(77)
    return [random_game(rng, grid=10) for _ in range(150)]


def test_shapley_passes_fairness_and_efficiency(axiom_games):
    report = check_axioms("shapley", axiom_games, trials=5, rng=np.random.default_rng(1))
    for axiom in ("null_player", "symmetry", "user_independence", "leader_monotonicity", "efficiency"):
        assert report.passed(axiom), report.counterexamples.get(axiom)
    assert not report.passed("complete")


@pytest.mark.parametrize("kind", ["top", "btl"])
def test_top_btl_fair(axiom_games, kind):
    report = check_axioms(kind, axiom_games, trials=5, rng=np.random.default_rng(1))
    assert report.fair, report.counterexamples
    assert report.passed("complete")


def test_none_fails_leader_monotonicity():
    game = make_game({"a": ["0.9"], "b": ["0.2"]}, [["a"], ["b"]])
    report = check_axioms("none", [game])
    cx = report.counterexamples["leader_monotonicity"]
    assert cx.probabilities == (0, 0, 1)
    assert cx.replay("none")
    assert report.passed("null_player") and report.passed("symmetry")


def test_rand_fails_leader_monotonicity():
    game = make_game({"a": ["0.9"], "b": ["0.3"]}, [["a"], ["b"]])
    report = check_axioms("rand", [game])
    cx = report.counterexamples["leader_monotonicity"]
    assert cx.probabilities[:2] == (F(1, 2), F(1, 2))
    assert cx.replay("rand")
    assert not cx.replay("shapley")


def test_check_axioms_rejects_zero_trials(example1):
    with pytest.raises(ValueError):
        check_axioms("top", [example1], trials=0)
