"""Symmetric N-player prisoner's dilemma built from a payoff schedule.

``f[k]`` is what a cooperator earns when ``k`` of the *other* players
cooperate, ``g[k]`` what a defector earns in the same situation.  The rate
allocation reading: C is a congestion-controlled transport session, D one
that ignores congestion control.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from archgame.game_core import GameError, PreconditionError, StrategicGame

COOPERATE = "C"
DEFECT = "D"
ACTIONS = (COOPERATE, DEFECT)


class ScheduleFormatError(GameError):
    pass


@dataclass(frozen=True)
class PDSchedule:
    n_players: int
    f: tuple
    g: tuple

    def __post_init__(self):
        f, g = tuple(self.f), tuple(self.g)
        if len(f) != len(g):
            raise ScheduleFormatError(f"f has {len(f)} entries but g has {len(g)}")
        if self.n_players < 2:
            raise ScheduleFormatError("a PD schedule needs at least two players")
        if len(f) != self.n_players:
            raise ScheduleFormatError(f"f and g need {self.n_players} entries (k = 0..N-1), got {len(f)}")
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "g", g)

    @classmethod
    def from_arrays(cls, f: Sequence, g: Sequence) -> "PDSchedule":
        if len(f) != len(g):
            raise ScheduleFormatError(f"f has {len(f)} entries but g has {len(g)}")
        return cls(len(f), tuple(f), tuple(g))

    def scaled(self, factor) -> "PDSchedule":
        return PDSchedule(self.n_players, tuple(factor * x for x in self.f), tuple(factor * x for x in self.g))


@dataclass(frozen=True)
class Violation:
    assumption: int
    k: int
    detail: str


@dataclass(frozen=True)
class ValidityReport:
    violations: tuple[Violation, ...]

    @property
    def valid(self) -> bool:
        return not self.violations

    def __str__(self):
        if self.valid:
            return "valid"
        return "; ".join(f"assumption {v.assumption} violated at k={v.k}: {v.detail}" for v in self.violations)


def validate_schedule(candidate: PDSchedule) -> ValidityReport:
    """Check the three structural assumptions of the rate allocation game.

    1. defection dominates: ``g[k] > f[k]`` for every k
    2. universal cooperation beats universal defection: ``f[N-1] > g[0]``
    3. a defector is hurt by more defectors: ``g[k] > g[0]`` for every k > 0
    """
    f, g, last = candidate.f, candidate.g, candidate.n_players - 1
    out = []
    for k in range(candidate.n_players):
        if not g[k] > f[k]:
            out.append(Violation(1, k, f"g[{k}]={g[k]} <= f[{k}]={f[k]}"))
    if not f[last] > g[0]:
        out.append(Violation(2, last, f"f[{last}]={f[last]} <= g[0]={g[0]}"))
    for k in range(1, candidate.n_players):
        if not g[k] > g[0]:
            out.append(Violation(3, k, f"g[{k}]={g[k]} <= g[0]={g[0]}"))
    return ValidityReport(tuple(out))


def require_valid(schedule: PDSchedule) -> None:
    report = validate_schedule(schedule)
    if not report.valid:
        raise PreconditionError(f"invalid PD schedule: {report}")


def stage_game(schedule: PDSchedule) -> StrategicGame:
    require_valid(schedule)
    f, g = schedule.f, schedule.g

    def rule(profile):
        cooperators = sum(a == COOPERATE for a in profile)
        return tuple(
            f[cooperators - 1] if a == COOPERATE else g[cooperators]
            for a in profile
        )

    return StrategicGame((ACTIONS,) * schedule.n_players, rule, name=f"pd{schedule.n_players}")


def fig1_schedule() -> PDSchedule:
    """Two flows on a 100-unit link: 50/50 if both cooperate, 90/10 if one
    defects, 15/15 after congestion collapse."""
    return PDSchedule(2, (10, 50), (15, 90))
