"""Finite strategic-form games and pure-strategy equilibrium analysis.

A :class:`StrategicGame` is a list of ordered strategy sets plus a payoff rule
mapping a profile (a tuple of strategy labels, one per player) to a payoff
vector.  Everything here is a pure function over immutable values.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Mapping, Sequence

from archgame._numeric import close, exceeds

Profile = tuple
PayoffRule = Callable[[Profile], Sequence]

DEFAULT_BUDGET = 10**7


class GameError(ValueError):
    """Invalid game, profile or parameter."""


class InvalidProfileError(GameError):
    def __init__(self, message: str, player: int | None = None):
        super().__init__(message)
        self.player = player


class BudgetExceededError(GameError):
    def __init__(self, required: int, budget: int):
        super().__init__(f"enumeration needs {required} profiles, budget is {budget}")
        self.required = required
        self.budget = budget


class PreconditionError(GameError):
    pass


@dataclass(frozen=True, eq=False)
class StrategicGame:
    """Finite N-player game in strategic form.

    ``payoff`` is called with a validated profile and must return one finite
    real per player.  Results are memoised per game instance.
    """

    strategy_sets: tuple[tuple, ...]
    payoff: PayoffRule = field(repr=False)
    name: str = ""

    def __post_init__(self):
        sets = tuple(tuple(s) for s in self.strategy_sets)
        if not sets:
            raise GameError("a game needs at least one player")
        for i, s in enumerate(sets):
            if not s:
                raise GameError(f"player {i} has an empty strategy set")
            if len(set(s)) != len(s):
                raise GameError(f"player {i} has duplicate strategy labels")
        object.__setattr__(self, "strategy_sets", sets)
        rule = self.payoff
        object.__setattr__(self, "_cached", lru_cache(maxsize=None)(lambda p: tuple(rule(p))))

    @classmethod
    def from_table(cls, strategy_sets: Sequence[Sequence], table: Mapping, name: str = "") -> "StrategicGame":
        """Build a game from an explicit ``profile -> payoff vector`` table."""
        table = {tuple(k): tuple(v) for k, v in table.items()}
        game = cls(tuple(tuple(s) for s in strategy_sets), lambda p: table[p], name=name)
        missing = [p for p in game.profiles() if p not in table]
        if missing:
            raise GameError(f"payoff table is missing {len(missing)} profiles, e.g. {missing[0]}")
        return game

    @property
    def n_players(self) -> int:
        return len(self.strategy_sets)

    def profile_count(self) -> int:
        return math.prod(len(s) for s in self.strategy_sets)

    def profiles(self):
        """All profiles in lexicographic order of strategy indices."""
        return itertools.product(*self.strategy_sets)

    def index_of(self, player: int, label) -> int:
        return self.strategy_sets[player].index(label)

    def validate(self, profile) -> Profile:
        profile = tuple(profile)
        if len(profile) != self.n_players:
            raise InvalidProfileError(
                f"profile has {len(profile)} entries, game has {self.n_players} players"
            )
        for i, (s, allowed) in enumerate(zip(profile, self.strategy_sets)):
            if s not in allowed:
                raise InvalidProfileError(f"player {i}: {s!r} is not one of {allowed}", player=i)
        return profile


def payoff_of(game: StrategicGame, profile) -> tuple:
    profile = game.validate(profile)
    payoffs = game._cached(profile)
    if len(payoffs) != game.n_players:
        raise GameError(f"payoff rule returned {len(payoffs)} values for {game.n_players} players")
    return payoffs


def deviate(profile: Profile, player: int, strategy) -> Profile:
    """``(s'_i, s_{-i})``"""
    return profile[:player] + (strategy,) + profile[player + 1:]


def best_responses(game: StrategicGame, profile, player: int) -> tuple:
    """Strategies maximising ``player``'s payoff against the others' choices.

    Ties are all returned, in strategy-index order.
    """
    profile = game.validate(profile)
    if not 0 <= player < game.n_players:
        raise InvalidProfileError(f"no player {player}", player=player)
    values = [(s, payoff_of(game, deviate(profile, player, s))[player]) for s in game.strategy_sets[player]]
    best = values[0][1]
    for _, v in values[1:]:
        if exceeds(v, best):
            best = v
    return tuple(s for s, v in values if not exceeds(best, v))


def is_pure_nash(game: StrategicGame, profile) -> bool:
    profile = game.validate(profile)
    return all(profile[i] in best_responses(game, profile, i) for i in range(game.n_players))


def is_strict_nash(game: StrategicGame, profile) -> bool:
    """Every player's strategy is the *unique* best response."""
    profile = game.validate(profile)
    return all(best_responses(game, profile, i) == (profile[i],) for i in range(game.n_players))


class Pareto(enum.Enum):
    A_DOMINATES = "a_dominates"
    B_DOMINATES = "b_dominates"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def pareto_relation(game: StrategicGame, a, b) -> Pareto:
    ua, ub = payoff_of(game, a), payoff_of(game, b)
    if all(close(x, y) for x, y in zip(ua, ub)):
        return Pareto.EQUAL
    a_weak = all(not exceeds(y, x) for x, y in zip(ua, ub))
    b_weak = all(not exceeds(x, y) for x, y in zip(ua, ub))
    if a_weak:
        return Pareto.A_DOMINATES
    if b_weak:
        return Pareto.B_DOMINATES
    return Pareto.INCOMPARABLE


@dataclass(frozen=True)
class EquilibriumReport:
    equilibria: tuple[Profile, ...]
    strict: tuple[bool, ...]
    pareto_dominant: tuple[Profile, ...]
    search_space_size: int

    @property
    def weak(self) -> tuple[Profile, ...]:
        return tuple(p for p, s in zip(self.equilibria, self.strict) if not s)


def enumerate_pure_nash(game: StrategicGame, budget: int = DEFAULT_BUDGET) -> EquilibriumReport:
    """Exhaustively filter every profile through :func:`is_pure_nash`.

    Raises :class:`BudgetExceededError` when the profile space is larger
    than ``budget``.
    """
    size = game.profile_count()
    if size > budget:
        raise BudgetExceededError(size, budget)
    eqs = tuple(p for p in game.profiles() if is_pure_nash(game, p))
    strict = tuple(is_strict_nash(game, p) for p in eqs)
    undominated = tuple(
        p for p in eqs
        if not any(pareto_relation(game, q, p) is Pareto.A_DOMINATES for q in eqs if q != p)
    )
    return EquilibriumReport(eqs, strict, undominated, size)


@dataclass(frozen=True)
class RiskVerdict:
    winner: Profile | None  # None on a tie
    nash_product_1: object
    nash_product_2: object

    @property
    def tie(self) -> bool:
        return self.winner is None


def risk_dominance_2p(game: StrategicGame, eq1, eq2) -> RiskVerdict:
    """Compare two strict equilibria of a two-player game by Nash product.

    The Nash product of an equilibrium is the product over players of the
    loss from deviating unilaterally to the strategy that player uses in the
    other equilibrium.  The larger product risk-dominates.
    """
    if game.n_players != 2:
        raise PreconditionError("risk dominance is only defined here for two players")
    eq1, eq2 = game.validate(eq1), game.validate(eq2)
    for eq in (eq1, eq2):
        if not is_strict_nash(game, eq):
            raise PreconditionError(f"{eq} is not a strict pure Nash equilibrium")
    if eq1 == eq2:
        raise PreconditionError("risk dominance compares two distinct equilibria")

    def product(eq, other):
        u = payoff_of(game, eq)
        return math.prod(u[i] - payoff_of(game, deviate(eq, i, other[i]))[i] for i in range(2))

    p1, p2 = product(eq1, eq2), product(eq2, eq1)
    if exceeds(p1, p2):
        winner = eq1
    elif exceeds(p2, p1):
        winner = eq2
    else:
        winner = None
    return RiskVerdict(winner, p1, p2)
