"""Infinitely repeated games played by finite-state strategy machines.

Every strategy the rate allocation analysis talks about (always cooperate,
always defect, the N-player tit-for-tat ``B_n``) is a finite automaton over
observed action profiles.  Because the joint machine state space is finite,
play is eventually periodic and discounted values have an exact closed form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Mapping, Sequence

from archgame._numeric import exceeds, is_exact
from archgame.game_core import GameError, Profile, StrategicGame, payoff_of
from archgame.pd_supergame import COOPERATE, DEFECT, PDSchedule, require_valid, stage_game

State = Hashable


@dataclass(frozen=True, eq=False)
class StrategyMachine:
    """Moore machine: ``emit(state)`` is the action, ``transition(state, profile)``
    the next state after observing the full action profile."""

    initial: State
    emit: Callable[[State], object]
    transition: Callable[[State, Profile], State]
    name: str = "machine"

    @classmethod
    def from_table(cls, initial, emit: Mapping, table: Mapping, name: str = "machine") -> "StrategyMachine":
        """Machine from explicit dicts: ``emit[state]`` and ``table[(state, profile)]``."""
        if initial not in emit:
            raise GameError(f"initial state {initial!r} has no emission")
        emit, table = dict(emit), {(s, tuple(p)): t for (s, p), t in table.items()}

        def step(state, profile):
            try:
                return table[(state, tuple(profile))]
            except KeyError:
                raise GameError(f"{name}: no transition from {state!r} on {profile}") from None

        return cls(initial, emit.__getitem__, step, name)

    def __repr__(self):
        return f"<{self.name}>"


@dataclass(frozen=True)
class Supergame:
    stage: StrategicGame
    discounts: tuple

    def __post_init__(self):
        d = tuple(self.discounts)
        if len(d) != self.stage.n_players:
            raise GameError(f"need {self.stage.n_players} discount factors, got {len(d)}")
        for i, a in enumerate(d):
            if not 0 < a < 1:
                raise GameError(f"discount factor of player {i} must lie in (0, 1), got {a}")
        object.__setattr__(self, "discounts", d)

    @classmethod
    def uniform(cls, stage: StrategicGame, alpha) -> "Supergame":
        return cls(stage, (alpha,) * stage.n_players)


def constant_machine(action) -> StrategyMachine:
    return StrategyMachine(0, lambda _s: action, lambda s, _p: s, name=f"{action}_inf")


def tit_for_tat_machine(n: int, n_players: int, me: int,
                        cooperate=COOPERATE, defect=DEFECT) -> StrategyMachine:
    """``B_n``: cooperate first, then cooperate iff at least ``n`` of the other
    players cooperated in the previous period."""
    if not 0 <= n <= n_players - 1:
        raise GameError(f"B_n needs 0 <= n <= {n_players - 1}, got {n}")
    if not 0 <= me < n_players:
        raise GameError(f"no player {me} among {n_players}")

    def step(_state, profile):
        others = sum(a == cooperate for j, a in enumerate(profile) if j != me)
        return cooperate if others >= n else defect

    return StrategyMachine(cooperate, lambda s: s, step, name=f"B_{n}")


def prefix_machine(prefix: Sequence, then: StrategyMachine, name: str | None = None) -> StrategyMachine:
    """Play ``prefix`` first, then whatever ``then`` would play.

    ``then`` watches the game from period 0, so it resumes with the state the
    real history has driven it to.
    """
    prefix = tuple(prefix)
    stop = len(prefix)

    def emit(state):
        t, inner = state
        return prefix[t] if t < stop else then.emit(inner)

    def step(state, profile):
        t, inner = state
        return min(t + 1, stop), then.transition(inner, profile)

    return StrategyMachine((0, then.initial), emit, step, name=name or f"{''.join(map(str, prefix))}+{then.name}")


@dataclass(frozen=True)
class PlayTrace:
    profiles: tuple[Profile, ...]
    machine_states: tuple[tuple, ...]
    lead_in: int
    period: int


def _orbit(supergame: Supergame, machines: Sequence[StrategyMachine]):
    """Joint states up to the first repeat: (states, lead_in, period)."""
    if len(machines) != supergame.stage.n_players:
        raise GameError(f"need {supergame.stage.n_players} machines, got {len(machines)}")
    state = tuple(m.initial for m in machines)
    seen: dict = {}
    states = []
    while state not in seen:
        seen[state] = len(states)
        states.append(state)
        profile = _emit(supergame, machines, state)
        state = tuple(m.transition(s, profile) for m, s in zip(machines, state))
    lead_in = seen[state]
    return states, lead_in, len(states) - lead_in


def _emit(supergame, machines, state) -> Profile:
    profile = tuple(m.emit(s) for m, s in zip(machines, state))
    return supergame.stage.validate(profile)


def simulate(supergame: Supergame, machines: Sequence[StrategyMachine], horizon: int) -> PlayTrace:
    if horizon < 1:
        raise GameError("horizon must be at least 1")
    states, lead_in, period = _orbit(supergame, machines)
    joint = [states[t] if t < lead_in else states[lead_in + (t - lead_in) % period] for t in range(horizon)]
    profiles = tuple(_emit(supergame, machines, s) for s in joint)
    return PlayTrace(profiles, tuple(joint), lead_in, period)


def discounted_value(supergame: Supergame, machines: Sequence[StrategyMachine], player: int):
    """Exact value of the infinite discounted payoff stream.

    Sum of the lead-in, plus the cycle sum scaled by ``alpha**L / (1 - alpha**P)``.
    Exact when the discount factor and stage payoffs are rationals.
    """
    alpha = supergame.discounts[player]
    states, lead_in, period = _orbit(supergame, machines)
    v = [payoff_of(supergame.stage, _emit(supergame, machines, s))[player] for s in states]
    head = sum(alpha ** t * v[t] for t in range(lead_in))
    cycle = sum(alpha ** j * v[lead_in + j] for j in range(period))
    return head + alpha ** lead_in * cycle / (1 - alpha ** period)


# ---------------------------------------------------------------- equilibrium

@dataclass(frozen=True)
class DeviationOutcome:
    player: int
    deviation: str
    value: object
    gain: object
    machine: StrategyMachine = field(repr=False, compare=False, default=None)


@dataclass(frozen=True)
class EquilibriumVerdict:
    is_equilibrium_wrt_deviations: bool
    binding_deviation: DeviationOutcome | None
    values: tuple
    outcomes: tuple[DeviationOutcome, ...] = field(repr=False, default=())


DeviationSet = Callable[[int, int], Sequence[StrategyMachine]]


def taylor_deviations(player: int, n_players: int) -> list[StrategyMachine]:
    """Always-cooperate, always-defect and every ``B_k``."""
    return [constant_machine(COOPERATE), constant_machine(DEFECT)] + [
        tit_for_tat_machine(k, n_players, player) for k in range(n_players)
    ]


def defection_bursts(max_k: int = 5) -> DeviationSet:
    """Defect for the first k periods (k = 1..max_k), then play ``B_{N-1}``."""

    def family(player, n_players):
        base = tit_for_tat_machine(n_players - 1, n_players, player)
        return [prefix_machine((DEFECT,) * k, base, name=f"D^{k}+B_{n_players - 1}") for k in range(1, max_k + 1)]

    return family


def extended_deviations(max_k: int = 5) -> DeviationSet:
    bursts = defection_bursts(max_k)
    return lambda i, n: taylor_deviations(i, n) + list(bursts(i, n))


def check_machine_profile(supergame: Supergame, machines: Sequence[StrategyMachine],
                          deviations: DeviationSet = taylor_deviations) -> EquilibriumVerdict:
    """Is ``machines`` immune to every single-player switch in ``deviations``?

    The binding deviation is the one with the largest strictly positive gain.
    """
    n = supergame.stage.n_players
    machines = list(machines)
    values = tuple(discounted_value(supergame, machines, i) for i in range(n))
    outcomes = []
    for i in range(n):
        for dev in deviations(i, n):
            trial = machines[:i] + [dev] + machines[i + 1:]
            value = discounted_value(supergame, trial, i)
            outcomes.append(DeviationOutcome(i, dev.name, value, value - values[i], dev))
    binding = None
    for o in outcomes:
        if exceeds(o.gain, 0) and (binding is None or exceeds(o.gain, binding.gain)):
            binding = o
    return EquilibriumVerdict(binding is None, binding, values, tuple(outcomes))


def pd_supergame(schedule: PDSchedule, alpha) -> Supergame:
    """Repeated stage game of ``schedule``; ``alpha`` is a scalar or per-player."""
    stage = stage_game(schedule)
    if isinstance(alpha, Sequence):
        return Supergame(stage, tuple(alpha))
    return Supergame.uniform(stage, alpha)


def check_conditional_cooperation(schedule: PDSchedule, alpha, deviations: DeviationSet = taylor_deviations,
                                  n: int | None = None) -> EquilibriumVerdict:
    """Check whether every player using ``B_n`` (default ``n = N-1``) is an equilibrium."""
    supergame = pd_supergame(schedule, alpha)
    N = schedule.n_players
    n = N - 1 if n is None else n
    machines = [tit_for_tat_machine(n, N, i) for i in range(N)]
    return check_machine_profile(supergame, machines, deviations)


def taylor_threshold(schedule: PDSchedule):
    """Smallest discount factor sustaining ``(B_{N-1}, ..., B_{N-1})``:
    ``(g[N-1] - f[N-1]) / (g[N-1] - g[0])``."""
    require_valid(schedule)
    top = schedule.n_players - 1
    num = schedule.g[top] - schedule.f[top]
    den = schedule.g[top] - schedule.g[0]
    if is_exact(num) and is_exact(den):
        return Fraction(num) / Fraction(den)
    return num / den


def defection_gain(schedule: PDSchedule, alpha, player: int = 0):
    """Gain of switching from ``B_{N-1}`` to always-defect when everyone else plays ``B_{N-1}``."""
    supergame = pd_supergame(schedule, alpha)
    N = schedule.n_players
    machines = [tit_for_tat_machine(N - 1, N, i) for i in range(N)]
    deviant = machines[:player] + [constant_machine(DEFECT)] + machines[player + 1:]
    return discounted_value(supergame, deviant, player) - discounted_value(supergame, machines, player)


def critical_alpha_numeric(schedule: PDSchedule, tol: float = 1e-12) -> float:
    """Bisect the zero of :func:`defection_gain` on (0, 1).

    The gain is positive for myopic players and strictly decreasing in the
    discount factor, so the root is unique.
    """
    require_valid(schedule)
    s = PDSchedule(schedule.n_players, tuple(map(float, schedule.f)), tuple(map(float, schedule.g)))
    lo, hi = 1e-15, 1 - 1e-15
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if defection_gain(s, mid) > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2
