"""Game-theoretic models of technological competition on networks.

Rate allocation as a prisoner's dilemma supergame, technology adoption as a
stag hunt, and insurance as a mechanism that makes adoption the unique
equilibrium.
"""

from archgame.game_core import (
    EquilibriumReport,
    StrategicGame,
    best_responses,
    enumerate_pure_nash,
    is_pure_nash,
    pareto_relation,
    payoff_of,
    risk_dominance_2p,
)

__all__ = [
    "EquilibriumReport",
    "StrategicGame",
    "best_responses",
    "enumerate_pure_nash",
    "is_pure_nash",
    "pareto_relation",
    "payoff_of",
    "risk_dominance_2p",
]
__version__ = "0.1.0"
