from fractions import Fraction

import numpy as np
import pytest

from oracles import potential_by_resources
from shapley_mediator import (
    Mediator,
    PayoffTable,
    better_response,
    build_congestion_game,
    enumerate_pne,
    enumerate_profiles,
    gen_impossibility,
    is_pne,
    make_game,
    payoff_vector,
    potential_value,
    random_game,
    random_profile,
    run_dynamics,
)
from shapley_mediator.dynamics import find_improvement_cycle, format_number, harmonic, user_potential

F = Fraction


def test_example2_payoffs(example1):
    assert payoff_vector(example1, "shapley", ("l2", "l3"))[0] == F(8, 5)
    assert payoff_vector(example1, "shapley", ("l1", "l3"))[0] == F(7, 10)


def test_payoffs_sum_to_welfare(example1):
    pv = payoff_vector(example1, "shapley", ("l2", "l3"))
    assert pv.welfare == sum(pv.payoffs)


def test_better_response_example2(example1):
    assert better_response(example1, "shapley", ("l1", "l3"), 0) == "l2"
    assert better_response(example1, "shapley", ("l2", "l3"), 0) is None


def test_pne_example2(example1):
    assert enumerate_pne(example1, "shapley") == [("l2", "l3")]
    assert is_pne(example1, "shapley", ("l2", "l3"))
    assert not is_pne(example1, "shapley", ("l1", "l3"))


def test_potential_single_user_hand_computed():
    # levels 0.3, 0.5, 0.7: 0.3*H3 + 0.2*H2 + 0.2*H1
    assert user_potential((F("0.3"), F("0.5"), F("0.7"))) == F("0.3") * F(11, 6) + F("0.2") * F(3, 2) + F("0.2")


def test_harmonic():
    assert harmonic(1) == 1 and harmonic(4) == F(25, 12)


def test_potential_difference_example2(example1):
    assert potential_value(example1, ("l2", "l3")) - potential_value(example1, ("l1", "l3")) == F(9, 10)


@pytest.mark.parametrize("seed", range(40))
def test_potential_matches_resource_oracle(seed):
    rng = np.random.default_rng(seed)
    game = random_game(rng)
    profile = random_profile(game, rng)
    cg = build_congestion_game(game)
    vectors = list(zip(*game.profile_values(profile)))
    assert potential_value(game, profile) == potential_by_resources(vectors, cg.breakpoints)


@pytest.mark.parametrize("personalized", [False, True])
def test_exact_potential_property(personalized):
    rng = np.random.default_rng(5)
    for _ in range(60):
        game = random_game(rng, personalized=personalized)
        profile = random_profile(game, rng)
        j = int(rng.integers(game.n_players))
        for s in game.strategies(j):
            new = profile[:j] + (s,) + profile[j + 1:]
            d_pi = payoff_vector(game, "shapley", new)[j] - payoff_vector(game, "shapley", profile)[j]
            assert d_pi == potential_value(game, new) - potential_value(game, profile)


def test_exact_potential_float_game():
    rng = np.random.default_rng(8)
    for _ in range(40):
        game = random_game(rng, exact=False)
        profile = random_profile(game, rng)
        j = int(rng.integers(game.n_players))
        for s in game.strategies(j):
            new = profile[:j] + (s,) + profile[j + 1:]
            d_pi = payoff_vector(game, "shapley", new)[j] - payoff_vector(game, "shapley", profile)[j]
            d_phi = potential_value(game, new) - potential_value(game, profile)
            assert abs(d_pi - d_phi) <= 1e-12


@pytest.mark.parametrize("seed", range(20))
def test_potential_maximisers_are_equilibria(seed):
    game = random_game(np.random.default_rng(seed))
    profiles = list(enumerate_profiles(game))
    values = [potential_value(game, p) for p in profiles]
    best = max(values)
    pne = set(enumerate_pne(game, "shapley"))
    assert {p for p, v in zip(profiles, values) if v == best} <= pne


@pytest.mark.parametrize("schedule", ["round-robin", "random"])
@pytest.mark.parametrize("best", [False, True])
def test_dynamics_converge(schedule, best):
    rng = np.random.default_rng(11)
    for k in range(40):
        game = random_game(rng)
        trace = run_dynamics(game, "shapley", random_profile(game, rng), schedule=schedule, seed=k, best=best)
        assert trace.converged
        assert is_pne(game, "shapley", trace.terminal)
        assert all(s.payoff_delta == s.potential_delta and s.payoff_delta > 0 for s in trace.steps)


def test_potential_gain_equals_sum_of_steps():
    rng = np.random.default_rng(12)
    for _ in range(20):
        game = random_game(rng, grid=10)
        start = random_profile(game, rng)
        trace = run_dynamics(game, "shapley", start)
        gain = potential_value(game, trace.terminal) - potential_value(game, start)
        assert gain == sum(s.potential_delta for s in trace.steps)


def test_dynamics_deterministic(example1):
    a = run_dynamics(example1, "shapley", ("l1", "l3"), schedule="random", seed=3)
    b = run_dynamics(example1, "shapley", ("l1", "l3"), schedule="random", seed=3)
    assert a.to_csv() == b.to_csv()


def test_dynamics_trace_csv(example1):
    trace = run_dynamics(example1, "shapley", ("l1", "l3"))
    assert trace.terminal == ("l2", "l3")
    lines = trace.to_csv().splitlines()
    assert lines[0] == "step,player,from,to,payoff_delta,potential_delta"
    assert lines[1] == "1,0,l1,l2,9/10 (0.900000000000),9/10 (0.900000000000)"


def test_dynamics_budget_exhausted():
    game = gen_impossibility(F("0.9"), F("0.5"))
    trace = run_dynamics(game, "top", ("l1", "l1"), max_steps=50)
    assert not trace.converged and trace.step_count == 50


def test_dynamics_rejects_bad_arguments(example1):
    with pytest.raises(ValueError):
        run_dynamics(example1, "shapley", ("l1", "l3"), schedule="zigzag")
    with pytest.raises(ValueError):
        run_dynamics(example1, "shapley", ("l1", "l3"), max_steps=0)


def test_improvement_cycle_under_top():
    game = gen_impossibility(F("0.9"), F("0.5"))
    cycle = find_improvement_cycle(game, "top")
    assert cycle is not None and cycle[0] == cycle[-1]
    for a, b in zip(cycle, cycle[1:]):
        moved = [j for j in range(2) if a[j] != b[j]]
        assert len(moved) == 1
        j = moved[0]
        assert payoff_vector(game, "top", b)[j] > payoff_vector(game, "top", a)[j]
    assert find_improvement_cycle(game, "shapley") is None


def test_format_number():
    assert format_number(F(2)) == "2"
    assert format_number(F(1, 3)) == "1/3 (0.333333333333)"
    assert format_number(0.1 + 0.2) == "0.3"


@pytest.mark.parametrize("kind", list(Mediator))
@pytest.mark.parametrize("exact", [True, False])
@pytest.mark.parametrize("personalized", [False, True])
def test_payoff_table_matches_generic_path(kind, exact, personalized):
    rng = np.random.default_rng(21)
    for _ in range(8):
        game = random_game(rng, exact=exact, personalized=personalized)
        table = PayoffTable(game, kind)
        for profile in enumerate_profiles(game):
            expected = payoff_vector(game, kind, profile).payoffs
            got = table.payoff(profile).payoffs
            if exact:
                assert got == expected
            else:
                assert np.allclose(got, expected, atol=1e-12, rtol=0)
        generic = [p for p in enumerate_profiles(game) if is_pne(game, kind, p)]
        assert enumerate_pne(game, kind) == generic


def test_payoff_table_index_round_trip(example1):
    table = PayoffTable(example1, "shapley")
    for p in enumerate_profiles(example1):
        assert table.profile_at(table.index_of(p)) == p


def test_ties_are_not_improvements():
    game = make_game({"a": ["1/2"], "b": ["1/2"]}, [["a", "b"], ["a"]])
    assert better_response(game, "shapley", ("a", "a"), 0) is None
    assert set(enumerate_pne(game, "shapley")) == {("a", "a"), ("b", "a")}
