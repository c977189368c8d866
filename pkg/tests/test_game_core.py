import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from archgame.adoption import AdoptionParams, InsuranceParams, insurance_game, stag_hunt_game
from archgame.game_core import (
    BudgetExceededError,
    InvalidProfileError,
    Pareto,
    PreconditionError,
    StrategicGame,
    best_responses,
    enumerate_pure_nash,
    is_pure_nash,
    is_strict_nash,
    pareto_relation,
    payoff_of,
    risk_dominance_2p,
)
from archgame.pd_supergame import fig1_schedule, stage_game

from oracles import brute_nash, random_table_game


@pytest.fixture
def fig1():
    return stage_game(fig1_schedule())


def stag(n, beta=10, gamma=4):
    return stag_hunt_game(AdoptionParams(n, beta, gamma))


def test_payoff_of_fig1(fig1):
    assert payoff_of(fig1, ("C", "C")) == (50, 50)
    assert payoff_of(fig1, ("D", "D")) == (15, 15)


def test_payoff_of_one_player_constant():
    g = StrategicGame((("X",),), lambda p: (0,))
    assert payoff_of(g, ("X",)) == (0,)


def test_payoff_of_rejects_bad_label(fig1):
    with pytest.raises(InvalidProfileError, match="player 1") as err:
        payoff_of(fig1, ("C", "Z"))
    assert err.value.player == 1
    with pytest.raises(InvalidProfileError):
        payoff_of(fig1, ("C",))


def test_best_responses():
    assert best_responses(stage_game(fig1_schedule()), ("C", "C"), 0) == ("D",)
    assert best_responses(stag(3), ("A", "A", "A"), 0) == ("A",)
    ins = insurance_game(AdoptionParams(2, 10, 4), InsuranceParams(1, 10))
    assert best_responses(ins, ("D", "D"), 0) == ("B",)


def test_best_responses_keeps_ties():
    g = StrategicGame.from_table([("x", "y"), ("z",)], {("x", "z"): (1, 0), ("y", "z"): (1, 0)})
    assert best_responses(g, ("y", "z"), 0) == ("x", "y")
    assert not is_strict_nash(g, ("x", "z"))
    assert is_pure_nash(g, ("x", "z"))


def test_is_pure_nash_fig1(fig1):
    assert is_pure_nash(fig1, ("D", "D"))
    assert not is_pure_nash(fig1, ("C", "C"))
    assert not is_pure_nash(fig1, ("C", "D"))
    # independent filter agrees on every profile
    assert brute_nash(fig1.strategy_sets, lambda p: payoff_of(fig1, p)) == [("D", "D")]


def test_enumerate_examples(fig1):
    assert enumerate_pure_nash(fig1).equilibria == (("D", "D"),)
    sh = enumerate_pure_nash(stag(3))
    assert sh.equilibria == (("A",) * 3, ("D",) * 3)
    assert sh.pareto_dominant == (("A",) * 3,)
    assert sh.search_space_size == 8
    ins = insurance_game(AdoptionParams(2, 10, 4), InsuranceParams(1, 10))
    assert enumerate_pure_nash(ins).equilibria == (("A", "A"),)


def test_enumerate_budget():
    g = stag(5)
    with pytest.raises(BudgetExceededError) as err:
        enumerate_pure_nash(g, budget=31)
    assert err.value.required == 32


def test_enumerate_flags_weak_equilibria():
    g = StrategicGame.from_table([("a", "b"), ("c", "d")], {
        ("a", "c"): (1, 1), ("a", "d"): (1, 0), ("b", "c"): (1, 0), ("b", "d"): (0, 0)})
    rep = enumerate_pure_nash(g)
    # both players indifferent somewhere: (a,c) via row tie, (b,c) via both ties
    assert rep.equilibria == (("a", "c"), ("b", "c"))
    assert rep.strict == (False, False)
    assert rep.weak == rep.equilibria


def test_pareto_relation():
    g = stag(3)
    assert pareto_relation(g, ("A",) * 3, ("D",) * 3) is Pareto.A_DOMINATES
    assert pareto_relation(g, ("D",) * 3, ("A",) * 3) is Pareto.B_DOMINATES
    assert pareto_relation(g, ("A", "D", "A"), ("A", "D", "A")) is Pareto.EQUAL
    assert pareto_relation(stag(2), ("A", "D"), ("D", "A")) is Pareto.INCOMPARABLE


def test_risk_dominance_examples():
    v = risk_dominance_2p(stag(2, 10, 4), ("A", "A"), ("D", "D"))
    assert (v.nash_product_1, v.nash_product_2, v.winner) == (36, 16, ("A", "A"))
    v = risk_dominance_2p(stag(2, 6, 4), ("A", "A"), ("D", "D"))
    assert (v.nash_product_1, v.nash_product_2, v.winner) == (4, 16, ("D", "D"))


def test_risk_dominance_symmetric_tie():
    g = StrategicGame.from_table([("x", "y")] * 2, {
        ("x", "x"): (2, 2), ("x", "y"): (0, 0), ("y", "x"): (0, 0), ("y", "y"): (2, 2)})
    assert risk_dominance_2p(g, ("x", "x"), ("y", "y")).tie


def test_risk_dominance_preconditions(fig1):
    with pytest.raises(PreconditionError):
        risk_dominance_2p(fig1, ("C", "C"), ("D", "D"))
    with pytest.raises(PreconditionError):
        risk_dominance_2p(stag(3), ("A",) * 3, ("D",) * 3)


@pytest.mark.parametrize("beta", [5, 6, 7, 15 / 2, 8, 17 / 2, 9, 10, 20])
def test_risk_flip_at_twice_gamma(beta):
    v = risk_dominance_2p(stag(2, beta, 4), ("A", "A"), ("D", "D"))
    if beta < 8:
        assert v.winner == ("D", "D")
    elif beta == 8:
        assert v.tie
    else:
        assert v.winner == ("A", "A")


def test_random_games_match_brute_filter():
    rng = random.Random(11)
    for _ in range(300):
        n = rng.randint(1, 4)
        sizes = [rng.randint(1, 3) for _ in range(n)]
        sets, table = random_table_game(rng, n, sizes, lo=-2, hi=2)
        g = StrategicGame.from_table(sets, table)
        assert list(enumerate_pure_nash(g).equilibria) == brute_nash(sets, table.__getitem__)


game_shapes = st.lists(st.integers(1, 3), min_size=1, max_size=4)


@settings(max_examples=60, deadline=None)
@given(game_shapes, st.randoms(use_true_random=False), st.integers(1, 5), st.integers(-7, 7), st.data())
def test_affine_rescaling_invariance(sizes, rng, scale, shift, data):
    n = len(sizes)
    sets, table = random_table_game(rng, n, sizes, lo=-3, hi=3)
    who = data.draw(st.integers(0, n - 1))
    rescaled = {p: tuple(scale * u + shift if i == who else u for i, u in enumerate(v)) for p, v in table.items()}
    g, h = StrategicGame.from_table(sets, table), StrategicGame.from_table(sets, rescaled)
    assert enumerate_pure_nash(g).equilibria == enumerate_pure_nash(h).equilibria
    for p in g.profiles():
        assert is_pure_nash(g, p) == is_pure_nash(h, p)
        for i in range(n):
            assert best_responses(g, p, i) == best_responses(h, p, i)


@pytest.mark.parametrize("game", [stag(3), stag(4, 7, 5), stage_game(fig1_schedule()),
                                  insurance_game(AdoptionParams(3, 10, 4), InsuranceParams(1, 10))])
def test_symmetric_nash_set_closed_under_permutation(game):
    eqs = set(enumerate_pure_nash(game).equilibria)
    for p in eqs:
        for perm in itertools.permutations(range(game.n_players)):
            assert tuple(p[k] for k in perm) in eqs


def test_float_tolerance_ignores_rounding_noise():
    g = StrategicGame.from_table([("x", "y"), ("z",)], {("x", "z"): (0.1 + 0.2, 0), ("y", "z"): (0.3, 0)})
    assert best_responses(g, ("x", "z"), 0) == ("x", "y")
