import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shapley_mediator import make_game, min_utility_curve, single_user_utility, solve_stationary, user_utility, utility_gradient
from shapley_mediator.metrics import OPTIMAL_PLAIN
from shapley_mediator.upoa_numeric import (
    batch_utility,
    curve_to_csv,
    display_probabilities,
    random_monotone,
    stationary_system,
)


def test_single_player_stationary_point():
    point = solve_stationary(1)
    assert point.sigma[0] == 0.5 and point.utility == 0.75


def test_two_player_matrix():
    system = stationary_system(2)
    assert np.allclose(system.matrix, [[1.0, -0.5], [-0.5, 2.0]])
    assert np.array_equal(system.rhs, [0.0, 1.0])


@pytest.mark.parametrize("n", [1, 2, 3, 7, 30])
def test_hessian_matches_finite_differences(n):
    system = stationary_system(n)
    assert np.allclose(system.matrix, system.matrix.T)
    assert np.all(np.linalg.eigvalsh(system.matrix) > 0)
    s = np.sort(np.random.default_rng(n).random(n))
    h = 1e-6
    for k in range(n):
        e = np.zeros(n)
        e[k] = h
        column = (utility_gradient(s + e) - utility_gradient(s - e)) / (2 * h)
        assert np.allclose(column, system.matrix[:, k], atol=1e-6)


@pytest.mark.parametrize("n", [1, 2, 5, 40])
def test_gradient_matches_finite_differences(n):
    rng = np.random.default_rng(100 + n)
    for s in random_monotone(rng, n, 20):
        s = 0.05 + 0.9 * s
        h = 1e-7
        numeric = np.array([
            (single_user_utility(s + h * e) - single_user_utility(s - h * e)) / (2 * h)
            for e in np.eye(n)
        ])
        grad = utility_gradient(s)
        assert np.allclose(grad, numeric, rtol=1e-6, atol=1e-8)


def test_closed_form_matches_game_utility():
    rng = np.random.default_rng(7)
    for n in range(1, 6):
        for _ in range(10):
            levels = np.sort(rng.integers(0, 101, size=n)) / 100
            menus = [[f"l{j}"] for j in range(n)]
            matrix = {f"l{j}": [float(x)] for j, x in enumerate(levels)}
            game = make_game(matrix, menus)
            profile = tuple(m[0] for m in menus)
            expected = user_utility(game, "shapley", profile, OPTIMAL_PLAIN)
            assert abs(single_user_utility(levels) - expected) <= 1e-12


@settings(max_examples=50)
@given(st.lists(st.floats(0, 1), min_size=1, max_size=12))
def test_utility_at_least_quarter(values):
    s = np.sort(values)
    assert single_user_utility(s) >= 0.25 - 1e-12
    assert display_probabilities(s)[-1] <= s[-1] + 1e-12


def test_non_monotone_input_rejected():
    with pytest.raises(ValueError):
        single_user_utility([0.5, 0.2])
    with pytest.raises(ValueError):
        single_user_utility([0.5, 1.2])


def test_batch_matches_single():
    samples = random_monotone(np.random.default_rng(1), 6, 50)
    assert np.allclose(batch_utility(samples), [single_user_utility(s) for s in samples])


@pytest.mark.parametrize("n", [2, 5, 20, 100])
def test_stationary_point_is_feasible_minimum(n):
    point = solve_stationary(n, validate_samples=5000, seed=n)
    assert np.all(np.diff(point.sigma) >= 0)
    assert point.residual < 1e-10
    assert np.allclose(utility_gradient(point.sigma), 0, atol=1e-9)


def test_curve_small():
    curve = min_utility_curve(50)
    assert [p.n for p in curve] == list(range(1, 51))
    assert min(p.utility for p in curve) >= 0.568
    text = curve_to_csv(curve[:2])
    assert text.splitlines() == ["N,U_star,upoa_bound,residual", "1,0.750000,1.333333,0.000e+00", text.splitlines()[2]]


def test_invalid_sizes():
    with pytest.raises(ValueError):
        solve_stationary(0)
    with pytest.raises(ValueError):
        min_utility_curve(10_000)
