"""Best-response dynamics and basin-of-attraction censuses."""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Literal

import numpy as np

from archgame.game_core import (
    DEFAULT_BUDGET,
    BudgetExceededError,
    GameError,
    PreconditionError,
    Profile,
    RiskVerdict,
    StrategicGame,
    best_responses,
    deviate,
    enumerate_pure_nash,
    is_pure_nash,
    risk_dominance_2p,
)

TerminalKind = Literal["nash", "cycle", "budget_exhausted"]
ORDERS = ("fixed", "random", "simultaneous")


@dataclass(frozen=True)
class DynamicsConfig:
    """``order`` is ``"fixed"`` (players 0..N-1 round robin), ``"random"``
    (a fresh seeded permutation every round) or ``"simultaneous"`` (every
    player revises against the profile at the start of the round)."""

    order: str = "fixed"
    max_steps: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.order not in ORDERS:
            raise GameError(f"unknown update order {self.order!r}")
        if self.max_steps < 1:
            raise GameError("max_steps must be at least 1")

    def rng(self, run_index: int = 0) -> np.random.Generator:
        return np.random.default_rng([self.seed, run_index])


@dataclass(frozen=True)
class Move:
    player: int
    old: object
    new: object


@dataclass(frozen=True)
class DynamicsPath:
    profiles: tuple[Profile, ...]
    terminal_kind: TerminalKind
    moves: tuple[Move, ...]

    @property
    def updates_applied(self) -> int:
        return len(self.moves)

    @property
    def terminal(self) -> Profile:
        return self.profiles[-1]


def _schedule(n: int, config: DynamicsConfig, rng):
    while True:
        if config.order == "fixed":
            yield from range(n)
        else:
            yield from (int(i) for i in rng.permutation(n))


def run_dynamics(game: StrategicGame, initial, config: DynamicsConfig = DynamicsConfig(),
                 rng: np.random.Generator | None = None) -> DynamicsPath:
    """Let players revise toward best responses until nobody wants to move.

    A visited player moves only if its current strategy is not a best
    response, and then to the lowest-index best response.  Each player turn
    counts against ``max_steps``.  Deterministic orders report a revisited
    ``(profile, next player)`` pair as a cycle.
    """
    profile = game.validate(initial)
    if config.order == "simultaneous":
        return _run_simultaneous(game, profile, config)
    rng = config.rng() if rng is None else rng
    profiles, moves = [profile], []
    visited = set()
    turns = _schedule(game.n_players, config, rng)
    steps = 0
    while True:
        if is_pure_nash(game, profile):
            kind = "nash"
            break
        if steps >= config.max_steps:
            kind = "budget_exhausted"
            break
        i = next(turns)
        if config.order == "fixed":
            if (profile, i) in visited:
                kind = "cycle"
                break
            visited.add((profile, i))
        br = best_responses(game, profile, i)
        if profile[i] not in br:
            moves.append(Move(i, profile[i], br[0]))
            profile = deviate(profile, i, br[0])
            profiles.append(profile)
        steps += 1
    return DynamicsPath(tuple(profiles), kind, tuple(moves))


def _run_simultaneous(game: StrategicGame, profile: Profile, config: DynamicsConfig) -> DynamicsPath:
    """Jacobi rounds: all revisions are computed against the round's starting
    profile, then recorded one player at a time in index order."""
    profiles, moves = [profile], []
    seen = set()
    steps = 0
    while True:
        if is_pure_nash(game, profile):
            kind = "nash"
            break
        if steps >= config.max_steps:
            kind = "budget_exhausted"
            break
        if profile in seen:
            kind = "cycle"
            break
        seen.add(profile)
        start = profile
        for i in range(game.n_players):
            br = best_responses(game, start, i)
            if start[i] not in br:
                moves.append(Move(i, start[i], br[0]))
                profile = deviate(profile, i, br[0])
                profiles.append(profile)
        steps += game.n_players
    return DynamicsPath(tuple(profiles), kind, tuple(moves))


@dataclass(frozen=True)
class Census:
    counts: dict  # terminal profile -> count, in strategy-index order
    kinds: dict  # terminal profile -> terminal kind
    runs: int
    mode: str

    def fraction(self, profile) -> float:
        return self.counts.get(tuple(profile), 0) / self.runs

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["terminal_profile", "count", "fraction"])
        for p, c in self.counts.items():
            w.writerow([format_profile(p), c, f"{c / self.runs:.6f}"])
        return buf.getvalue()


def format_profile(profile: Iterable) -> str:
    return "(" + ",".join(map(str, profile)) + ")"


def basin_census(game: StrategicGame, config: DynamicsConfig = DynamicsConfig(), mode: str = "exhaustive",
                 samples: int = 1000, budget: int = DEFAULT_BUDGET, initials: Iterable | None = None) -> Census:
    """Tally where best-response dynamics end up.

    ``exhaustive`` starts once from every profile (subject to ``budget``);
    ``monte_carlo`` draws ``samples`` uniform initial profiles.  Run ``k``
    uses its own generator seeded by ``(config.seed, k)``.
    """
    if initials is not None:
        starts = [game.validate(p) for p in initials]
        mode = "given"
    elif mode == "exhaustive":
        size = game.profile_count()
        if size > budget:
            raise BudgetExceededError(size, budget)
        starts = list(game.profiles())
    elif mode == "monte_carlo":
        if samples < 1:
            raise GameError("monte carlo census needs at least one sample")
        starts = None
    else:
        raise GameError(f"unknown census mode {mode!r}")

    tally: Counter = Counter()
    kinds = {}
    runs = len(starts) if starts is not None else samples
    for k in range(runs):
        rng = config.rng(k)
        if starts is not None:
            start = starts[k]
        else:
            start = tuple(s[int(rng.integers(len(s)))] for s in game.strategy_sets)
        path = run_dynamics(game, start, config, rng)
        tally[path.terminal] += 1
        kinds[path.terminal] = path.terminal_kind

    def key(p):
        return tuple(game.index_of(i, s) for i, s in enumerate(p))

    ordered = sorted(tally, key=key)
    return Census({p: tally[p] for p in ordered}, {p: kinds[p] for p in ordered}, runs, mode)


@dataclass(frozen=True)
class PredictionComparison:
    risk: RiskVerdict
    risk_dominant: Profile | None
    largest_basin: tuple[Profile, ...]
    agree: bool


def compare_prediction(game: StrategicGame, census: Census) -> PredictionComparison:
    """Does the risk-dominant equilibrium have the (weakly) largest basin?"""
    report = enumerate_pure_nash(game)
    strict = [p for p, s in zip(report.equilibria, report.strict) if s]
    if game.n_players != 2 or len(strict) != 2:
        raise PreconditionError("needs a two-player game with exactly two strict equilibria")
    verdict = risk_dominance_2p(game, strict[0], strict[1])
    top = max(census.counts.get(p, 0) for p in strict)
    largest = tuple(p for p in strict if census.counts.get(p, 0) == top)
    agree = verdict.winner is None or verdict.winner in largest
    return PredictionComparison(verdict, verdict.winner, largest, agree)
