"""Recommendation-game data model.

A game has a set of users, a satisfaction matrix over items, and players that
each pick from a menu of items.  In ``single`` mode a strategy is one item
name; in ``personalized`` mode it is a ``frozenset`` of at most ``budget``
item names and each user sees the player's best item for them.

Satisfaction values written as decimal strings, ``"p/q"`` ratios or integers
are stored as :class:`fractions.Fraction`; JSON floats stay floats.  A game
whose entries are all fractions is *exact* and every downstream computation
on it is exact too.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterator, Sequence, Union

Number = Union[Fraction, float]
Strategy = Hashable  # str in single mode, frozenset[str] in personalized mode
Profile = tuple

SINGLE = "single"
PERSONALIZED = "personalized"

DEFAULT_ENUMERATION_CAP = 10**7


class GameError(ValueError):
    """Invalid game document or invalid strategy for a game."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class EnumerationCapExceeded(RuntimeError):
    """The profile space is larger than the configured enumeration cap."""

    def __init__(self, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(
            f"profile space has {size} profiles, cap is {cap}; use dynamics instead"
        )


def to_number(value, path: str = "") -> Number:
    """Parse a satisfaction entry, keeping it exact whenever possible."""
    if isinstance(value, bool):
        raise GameError(f"expected a number, got {value!r}", path)
    if isinstance(value, Fraction):
        x = value
    elif isinstance(value, int):
        x = Fraction(value)
    elif isinstance(value, float):
        if not math.isfinite(value):
            raise GameError(f"non-finite satisfaction {value!r}", path)
        x = value
    elif isinstance(value, str):
        try:
            x = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise GameError(f"cannot parse satisfaction {value!r}", path) from None
    else:
        raise GameError(f"expected a number or numeric string, got {value!r}", path)
    if not 0 <= x <= 1:
        raise GameError(f"satisfaction outside [0,1]: {value!r}", path)
    return x


@dataclass(frozen=True)
class Player:
    name: str
    menu: tuple[str, ...]
    budget: int = 1


@dataclass(frozen=True, eq=False)
class Game:
    """An immutable recommendation game.

    ``matrix[item]`` is the tuple of satisfaction levels of every user (in
    ``users`` order) for that item.
    """

    users: tuple[str, ...]
    players: tuple[Player, ...]
    matrix: dict
    mode: str = SINGLE

    def __post_init__(self):
        if not self.users:
            raise GameError("at least one user is required", "users")
        if len(set(self.users)) != len(self.users):
            raise GameError("duplicate user ids", "users")
        if not self.players:
            raise GameError("at least one player is required", "players")
        if self.mode not in (SINGLE, PERSONALIZED):
            raise GameError(f"unknown mode {self.mode!r}", "mode")
        n = len(self.users)
        for item, row in self.matrix.items():
            if len(row) != n:
                raise GameError(f"expected {n} entries", f"items.{item}")
            for u, x in zip(self.users, row):
                if not 0 <= x <= 1:
                    raise GameError(f"satisfaction outside [0,1]: {x}", f"items.{item}.{u}")
        for j, p in enumerate(self.players):
            path = f"players[{j}]"
            if not p.menu:
                raise GameError("empty menu", f"{path}.menu")
            if len(set(p.menu)) != len(p.menu):
                raise GameError("duplicate items in menu", f"{path}.menu")
            for item in p.menu:
                if item not in self.matrix:
                    raise GameError(f"unknown item reference {item!r}", f"{path}.menu")
            if self.mode == PERSONALIZED and not 1 <= p.budget <= len(p.menu):
                raise GameError(
                    f"budget out of range: {p.budget} not in [1, {len(p.menu)}]",
                    f"{path}.budget",
                )
        object.__setattr__(self, "_user_index", {u: i for i, u in enumerate(self.users)})

    @property
    def n_users(self) -> int:
        return len(self.users)

    @property
    def n_players(self) -> int:
        return len(self.players)

    @property
    def items(self) -> tuple[str, ...]:
        return tuple(self.matrix)

    @property
    def exact(self) -> bool:
        return all(isinstance(x, Fraction) for row in self.matrix.values() for x in row)

    @property
    def personalized(self) -> bool:
        return self.mode == PERSONALIZED

    def user_index(self, user) -> int:
        """Accept a user id or a 0-based index."""
        if isinstance(user, int) and not isinstance(user, bool):
            if not 0 <= user < self.n_users:
                raise GameError(f"user index {user} out of range")
            return user
        try:
            return self._user_index[user]
        except KeyError:
            raise GameError(f"unknown user {user!r}") from None

    def strategy_values(self, strategy: Strategy) -> tuple[Number, ...]:
        """Satisfaction of every user with ``strategy``."""
        if self.personalized:
            if isinstance(strategy, str):
                strategy = frozenset([strategy])
            rows = [self._row(item) for item in strategy]
            if not rows:
                return (Fraction(0),) * self.n_users
            return tuple(max(col) for col in zip(*rows))
        return self._row(strategy)

    def _row(self, item) -> tuple[Number, ...]:
        try:
            return self.matrix[item]
        except (KeyError, TypeError):
            raise GameError(f"unknown item {item!r}") from None

    def strategies(self, player: int) -> list:
        """Strategy space of ``player`` in lexicographic menu order.

        Personalized strategies are the non-empty subsets of the menu of size
        at most the budget, ordered by size and then by menu position.
        """
        p = self.players[player]
        if not self.personalized:
            return list(p.menu)
        return [
            frozenset(c)
            for size in range(1, p.budget + 1)
            for c in itertools.combinations(p.menu, size)
        ]

    def strategy_spaces(self) -> list[list]:
        return [self.strategies(j) for j in range(self.n_players)]

    def profile_count(self) -> int:
        return math.prod(len(s) for s in self.strategy_spaces())

    def validate_strategy(self, player: int, strategy: Strategy) -> Strategy:
        p = self.players[player]
        if not self.personalized:
            if strategy not in p.menu:
                raise GameError(f"{strategy!r} is not in the menu of {p.name}")
            return strategy
        if isinstance(strategy, str):
            strategy = frozenset([strategy])
        strategy = frozenset(strategy)
        if not strategy <= set(p.menu):
            raise GameError(f"{sorted(strategy)} is not a subset of the menu of {p.name}")
        if len(strategy) > p.budget:
            raise GameError(f"{sorted(strategy)} exceeds the budget of {p.name}")
        return strategy

    def validate_profile(self, profile: Sequence) -> Profile:
        if len(profile) != self.n_players:
            raise GameError(f"profile has {len(profile)} entries, expected {self.n_players}")
        return tuple(self.validate_strategy(j, s) for j, s in enumerate(profile))

    def parse_profile(self, text: str) -> Profile:
        """``"l2,l3"`` in single mode, ``"l1+l2,l3"`` in personalized mode."""
        parts = [p.strip() for p in text.split(",")]
        if self.personalized:
            parts = [frozenset(x for x in p.split("+") if x) for p in parts]
        return self.validate_profile(parts)

    def profile_values(self, profile: Profile) -> list[tuple[Number, ...]]:
        """Per-player satisfaction rows: ``values[j][i] = sigma_i(X_j)``."""
        return [self.strategy_values(s) for s in profile]

    def user_vector(self, profile: Profile, user) -> tuple[Number, ...]:
        """Satisfaction vector ``(sigma_i(X_1), ..., sigma_i(X_N))`` of one user."""
        i = self.user_index(user)
        return tuple(self.strategy_values(s)[i] for s in profile)

    def without_user(self, user) -> "Game":
        i = self.user_index(user)
        users = self.users[:i] + self.users[i + 1:]
        matrix = {k: row[:i] + row[i + 1:] for k, row in self.matrix.items()}
        return Game(users, self.players, matrix, self.mode)

    def with_user(self, user: str, row: dict) -> "Game":
        users = self.users + (user,)
        matrix = {k: v + (row[k],) for k, v in self.matrix.items()}
        return Game(users, self.players, matrix, self.mode)


def satisfaction_of_strategy(game: Game, user, strategy: Strategy) -> Number:
    """Satisfaction of ``user`` with a player's strategy (best item of a set)."""
    return game.strategy_values(strategy)[game.user_index(user)]


@dataclass(frozen=True)
class SortedLevels:
    """Ascending satisfaction levels with a leading 0, and each player's rank.

    ``levels[rank[j]]`` is player ``j``'s satisfaction; ties get consecutive
    ranks in player order.
    """

    levels: tuple
    rank: tuple[int, ...]

    @classmethod
    def from_values(cls, values: Sequence[Number]) -> "SortedLevels":
        order = sorted(range(len(values)), key=lambda j: values[j])
        rank = [0] * len(values)
        for pos, j in enumerate(order, start=1):
            rank[j] = pos
        zero = Fraction(0) if all(isinstance(x, Fraction) for x in values) else 0.0
        return cls((zero,) + tuple(values[j] for j in order), tuple(rank))

    @property
    def n_players(self) -> int:
        return len(self.rank)

    def values(self) -> tuple:
        return tuple(self.levels[r] for r in self.rank)


def sorted_levels(game: Game, profile: Profile, user) -> SortedLevels:
    return SortedLevels.from_values(game.user_vector(profile, user))


def enumerate_profiles(game: Game, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[Profile]:
    """Yield every profile once, in lexicographic menu order."""
    size = game.profile_count()
    if size > cap:
        raise EnumerationCapExceeded(size, cap)
    return itertools.product(*game.strategy_spaces())


def _format_number(x: Number):
    if isinstance(x, Fraction):
        return str(x)
    return x


def game_to_dict(game: Game) -> dict:
    players = []
    for p in game.players:
        rec = {"name": p.name, "menu": list(p.menu)}
        if game.personalized:
            rec["budget"] = p.budget
        players.append(rec)
    return {
        "mode": game.mode,
        "users": list(game.users),
        "items": {
            item: {u: _format_number(x) for u, x in zip(game.users, row)}
            for item, row in game.matrix.items()
        },
        "players": players,
    }


def serialize_game(game: Game) -> str:
    return json.dumps(game_to_dict(game), indent=2)


def game_from_dict(doc) -> Game:
    if not isinstance(doc, dict):
        raise GameError("game document must be a JSON object")
    mode = doc.get("mode", SINGLE)
    if mode not in (SINGLE, PERSONALIZED):
        raise GameError(f"unknown mode {mode!r}", "mode")

    users = doc.get("users")
    if not isinstance(users, list) or not users:
        raise GameError("expected a non-empty list", "users")
    if not all(isinstance(u, str) for u in users):
        raise GameError("user ids must be strings", "users")

    items = doc.get("items")
    if not isinstance(items, dict) or not items:
        raise GameError("expected a non-empty object", "items")
    matrix = {}
    for item, row in items.items():
        if not isinstance(row, dict):
            raise GameError("expected an object mapping users to values", f"items.{item}")
        unknown = set(row) - set(users)
        if unknown:
            raise GameError(f"unknown user(s) {sorted(unknown)}", f"items.{item}")
        missing = [u for u in users if u not in row]
        if missing:
            raise GameError(f"missing value(s) for {missing}", f"items.{item}")
        matrix[item] = tuple(to_number(row[u], f"items.{item}.{u}") for u in users)

    raw_players = doc.get("players")
    if not isinstance(raw_players, list) or not raw_players:
        raise GameError("expected a non-empty list", "players")
    players = []
    for j, rec in enumerate(raw_players):
        path = f"players[{j}]"
        if not isinstance(rec, dict):
            raise GameError("expected an object", path)
        menu = rec.get("menu")
        if not isinstance(menu, list) or not all(isinstance(x, str) for x in menu):
            raise GameError("expected a list of item names", f"{path}.menu")
        budget = rec.get("budget", 1)
        if isinstance(budget, bool) or not isinstance(budget, int):
            raise GameError("budget must be an integer", f"{path}.budget")
        if mode == SINGLE:
            budget = 1
        players.append(Player(str(rec.get("name", f"p{j + 1}")), tuple(menu), budget))

    return Game(tuple(users), tuple(players), matrix, mode)


def parse_game(document) -> Game:
    """Parse a game document given as bytes or str (UTF-8 JSON)."""
    if isinstance(document, bytes):
        document = document.decode("utf-8")
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise GameError(f"invalid JSON: {exc}") from None
    return game_from_dict(doc)


def load_game(path) -> Game:
    with open(path, "rb") as fh:
        return parse_game(fh.read())


def make_game(matrix, menus, users=None, budgets=None, names=None) -> Game:
    """Convenience constructor from plain Python data.

    ``matrix`` maps item -> list of per-user values; values go through the
    same parsing as file entries.
    """
    first = next(iter(matrix.values()))
    users = tuple(users or (f"u{i + 1}" for i in range(len(first))))
    mat = {
        item: tuple(to_number(x, f"items.{item}") for x in row) for item, row in matrix.items()
    }
    mode = SINGLE if budgets is None else PERSONALIZED
    budgets = budgets or [1] * len(menus)
    names = names or [f"p{j + 1}" for j in range(len(menus))]
    players = tuple(Player(nm, tuple(m), b) for nm, m, b in zip(names, menus, budgets))
    return Game(users, players, mat, mode)
