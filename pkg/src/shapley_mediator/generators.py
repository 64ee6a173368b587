"""Game instances: the worked example, the proof constructions, random games."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .game import Game, make_game


def _exact(x) -> Fraction:
    # floats go through their shortest repr so 0.9 becomes 9/10
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def gen_example1() -> Game:
    """Two players, three users; player 1 picks l1 or l2, player 2 has only l3."""
    return make_game(
        {
            "l1": ["0.1", "0.9", "0.2"],
            "l2": ["0.8", "0.7", "0.9"],
            "l3": ["0.9", "0.8", "0.1"],
        },
        menus=[["l1", "l2"], ["l3"]],
    )


def gen_impossibility(x, y) -> Game:
    """Symmetric two-player game with a cyclic x/y satisfaction pattern.

    Under any complete mediator the induced bimatrix game has no pure
    equilibrium unless ties are broken uniformly.
    """
    x, y = _exact(x), _exact(y)
    if not (0 < x <= 1 and 0 < y <= 1):
        raise ValueError("need 0 < x, y <= 1")
    zero = Fraction(0)
    items = ["l1", "l2", "l3"]
    return make_game(
        {"l1": [zero, y, x], "l2": [x, zero, y], "l3": [y, x, zero]},
        menus=[items, items],
    )


def tight_poa_share(n: int) -> Fraction:
    return Fraction(n, 2 * n - 1)


def gen_tight_poa(n: int) -> Game:
    """N players and N users; user i loves ``l_i`` and likes the shared ``l*``.

    Everyone on ``l*`` is an equilibrium whose welfare is ``N / (2 - 1/N)``
    times smaller than the optimum.
    """
    if n < 2:
        raise ValueError("need N >= 2")
    a = tight_poa_share(n)
    items = [f"l{k}" for k in range(1, n + 1)] + ["l*"]
    matrix = {
        f"l{k}": [Fraction(int(i == k)) for i in range(1, n + 1)] for k in range(1, n + 1)
    }
    matrix["l*"] = [a] * n
    return make_game(matrix, menus=[items] * n)


def gen_prop6(eps) -> Game:
    """One user, one player with a single item of satisfaction ``eps``."""
    eps = _exact(eps)
    if not 0 < eps <= 1:
        raise ValueError("need 0 < eps <= 1")
    return make_game({"l": [eps]}, menus=[["l"]])


def gen_prop7(delta, eps) -> Game:
    """Two users; TOP's only equilibrium serves both users poorly."""
    delta, eps = _exact(delta), _exact(eps)
    if not 0 < eps < delta <= 1:
        raise ValueError("need 0 < eps < delta <= 1")
    return make_game(
        {"l1": [1, 0], "l2": [delta, delta], "l3": [eps, eps]},
        menus=[["l1", "l2"], ["l3"]],
    )


def random_game(
    rng: np.random.Generator,
    max_players: int = 4,
    max_menu: int = 4,
    max_users: int = 5,
    grid: int = 100,
    personalized: bool = False,
    n_players: int = None,
    exact: bool = True,
    shared_items: bool = True,
) -> Game:
    """Random enumerable game with satisfactions on the grid ``k / grid``.

    Menus draw from a common item pool when ``shared_items`` is set, so
    players may compete with identical items.
    """
    n = n_players or int(rng.integers(1, max_players + 1))
    users = int(rng.integers(1, max_users + 1))
    menu_sizes = [int(rng.integers(1, max_menu + 1)) for _ in range(n)]
    if shared_items:
        pool = max(menu_sizes) + int(rng.integers(0, n + 1))
        names = [f"l{k}" for k in range(1, pool + 1)]
        menus = [
            [names[k] for k in sorted(rng.choice(pool, size=size, replace=False))]
            for size in menu_sizes
        ]
    else:
        menus, k = [], 0
        for size in menu_sizes:
            menus.append([f"l{k + t + 1}" for t in range(size)])
            k += size
        names = [f"l{t}" for t in range(1, k + 1)]
    used = sorted({i for m in menus for i in m}, key=lambda s: int(s[1:]))
    grid_values = rng.integers(0, grid + 1, size=(len(used), users))
    if exact:
        matrix = {
            item: [Fraction(int(v), grid) for v in row] for item, row in zip(used, grid_values)
        }
    else:
        matrix = {item: [float(v) / grid for v in row] for item, row in zip(used, grid_values)}
    budgets = None
    if personalized:
        budgets = [int(rng.integers(1, len(m) + 1)) for m in menus]
    return make_game(matrix, menus, budgets=budgets)


def random_profile(game: Game, rng: np.random.Generator) -> tuple:
    return tuple(s[int(rng.integers(len(s)))] for s in game.strategy_spaces())
