"""Technology adoption as a stag hunt, and the insured variant.

Players choose A (adopt) or D (stay with the incumbent).  Adoption only pays
off if nobody defects.  The insured game adds B: adopt and buy a policy that
reimburses ``delta`` when adoption fails, for a premium ``epsilon``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from archgame._numeric import is_exact
from archgame.game_core import GameError, StrategicGame
from archgame.topology import Graph, adopter_components

ADOPT = "A"
INSURED = "B"
DEFECT = "D"


class ParameterError(GameError):
    pass


def _per_player(value, n: int, what: str) -> tuple:
    if isinstance(value, Sequence) and not isinstance(value, str):
        value = tuple(value)
        if len(value) != n:
            raise ParameterError(f"{what} needs {n} entries, got {len(value)}")
        return value
    return (value,) * n


@dataclass(frozen=True)
class AdoptionParams:
    """Per-player benefit ``beta`` and investment cost ``gamma``."""

    n_players: int
    beta: tuple
    gamma: tuple

    def __post_init__(self):
        if self.n_players < 1:
            raise ParameterError("need at least one player")
        beta = _per_player(self.beta, self.n_players, "beta")
        gamma = _per_player(self.gamma, self.n_players, "gamma")
        for i, (b, c) in enumerate(zip(beta, gamma)):
            if not c > 0:
                raise ParameterError(f"player {i}: investment cost gamma must be positive, got {c}")
            if not b - c > 0:
                raise ParameterError(f"player {i}: net benefit beta - gamma must be positive, got {b} - {c}")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "gamma", gamma)


@dataclass(frozen=True)
class InsuranceParams:
    """Premium ``epsilon`` and reimbursement ``delta`` per player.

    ``delta=None`` means the policy covers the benefit of universal adoption,
    i.e. ``delta_i = beta_i``.
    """

    epsilon: tuple
    delta: tuple | None = None

    def resolve(self, params: AdoptionParams, allow_partial: bool = False) -> tuple[tuple, tuple]:
        n = params.n_players
        eps = _per_player(self.epsilon, n, "epsilon")
        delta = params.beta if self.delta is None else _per_player(self.delta, n, "delta")
        for i in range(n):
            if not eps[i] > 0:
                raise ParameterError(f"player {i}: premium epsilon must be positive, got {eps[i]}")
            if not allow_partial and not delta[i] - params.gamma[i] - eps[i] > 0:
                raise ParameterError(
                    f"player {i}: insured adoption must guarantee a positive payoff, "
                    f"but delta - gamma - epsilon = {delta[i] - params.gamma[i] - eps[i]}"
                )
        return eps, delta


def _q(profile, i) -> bool:
    """Nobody other than ``i`` defects."""
    return all(s != DEFECT for j, s in enumerate(profile) if j != i)


def stag_hunt_game(params: AdoptionParams) -> StrategicGame:
    beta, gamma = params.beta, params.gamma

    def rule(profile):
        return tuple(
            0 if s == DEFECT else (beta[i] - gamma[i] if _q(profile, i) else -gamma[i])
            for i, s in enumerate(profile)
        )

    return StrategicGame(((ADOPT, DEFECT),) * params.n_players, rule, name="stag_hunt")


def insurance_game(params: AdoptionParams, ins: InsuranceParams, allow_partial: bool = False) -> StrategicGame:
    """Stag hunt with the insured-adoption strategy B.

    ``allow_partial`` skips the ``delta - gamma - epsilon > 0`` check, for
    experiments with partial coverage.
    """
    eps, delta = ins.resolve(params, allow_partial)
    beta, gamma = params.beta, params.gamma

    def one(profile, i):
        s = profile[i]
        if s == DEFECT:
            return 0
        ok = _q(profile, i)
        if s == ADOPT:
            return beta[i] - gamma[i] if ok else -gamma[i]
        return (beta[i] if ok else delta[i]) - gamma[i] - eps[i]

    return StrategicGame(
        ((ADOPT, INSURED, DEFECT),) * params.n_players,
        lambda p: tuple(one(p, i) for i in range(len(p))),
        name="insurance",
    )


def component_adoption_game(graph: Graph, params: AdoptionParams, exponent=2) -> StrategicGame:
    """Adopter payoff ``beta_i * (c_i / N) ** exponent - gamma_i`` where ``c_i``
    is the size of i's component among adopters; defectors get 0."""
    n = params.n_players
    if graph.n_nodes != n:
        raise ParameterError(f"graph has {graph.n_nodes} nodes but the game has {n} players")
    if not exponent >= 1:
        raise ParameterError(f"exponent must be >= 1, got {exponent}")
    beta, gamma = params.beta, params.gamma

    def share(c):
        if is_exact(exponent) and exponent == int(exponent):
            return Fraction(c, n) ** int(exponent)
        return (c / n) ** exponent

    def rule(profile):
        comps = adopter_components(graph, [i for i, s in enumerate(profile) if s == ADOPT])
        return tuple(
            beta[i] * share(comps[i][1]) - gamma[i] if s == ADOPT else 0
            for i, s in enumerate(profile)
        )

    return StrategicGame(((ADOPT, DEFECT),) * n, rule, name="component_adoption")


@dataclass(frozen=True)
class LedgerResult:
    premiums_collected: object
    reimbursements_paid: object

    @property
    def net(self):
        return self.premiums_collected - self.reimbursements_paid


def insurer_ledger(params: AdoptionParams, ins: InsuranceParams, profile) -> LedgerResult:
    """Insurer's books for one play: premiums from every B player, and
    reimbursement of every B player if anyone defected."""
    eps, delta = ins.resolve(params, allow_partial=True)
    profile = tuple(profile)
    if len(profile) != params.n_players or any(s not in (ADOPT, INSURED, DEFECT) for s in profile):
        raise ParameterError(f"{profile} is not a profile of the {params.n_players}-player insurance game")
    insured = [i for i, s in enumerate(profile) if s == INSURED]
    failed = DEFECT in profile
    premiums = sum((eps[i] for i in insured), 0)
    paid = sum((delta[i] for i in insured), 0) if failed else 0
    return LedgerResult(premiums, paid)

