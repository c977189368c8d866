import random

import pytest

from archgame.adoption import AdoptionParams, InsuranceParams, insurance_game, stag_hunt_game
from archgame.dynamics import DynamicsConfig, basin_census, compare_prediction, run_dynamics
from archgame.game_core import BudgetExceededError, StrategicGame, best_responses, is_pure_nash, payoff_of

from oracles import random_adoption, random_insurance


def ins(n, beta=10, gamma=4, eps=1, delta=10):
    return insurance_game(AdoptionParams(n, beta, gamma), InsuranceParams(eps, delta))


def stag(n=2, beta=10, gamma=4):
    return stag_hunt_game(AdoptionParams(n, beta, gamma))


def test_insurance_two_step_path():
    path = run_dynamics(ins(3), ("D", "D", "D"))
    assert path.profiles == (
        ("D", "D", "D"), ("B", "D", "D"), ("B", "B", "D"), ("B", "B", "A"), ("A", "B", "A"), ("A", "A", "A"))
    assert path.terminal_kind == "nash"
    assert path.updates_applied == 5


def test_stag_hunt_fixed_points_and_moves():
    assert run_dynamics(stag(), ("D", "D")).profiles == (("D", "D"),)
    assert run_dynamics(stag(), ("D", "A")).terminal == ("A", "A")


def test_cycle_detection():
    # matching pennies has no pure equilibrium
    mp = StrategicGame.from_table([("H", "T")] * 2, {
        ("H", "H"): (1, -1), ("H", "T"): (-1, 1), ("T", "H"): (-1, 1), ("T", "T"): (1, -1)})
    path = run_dynamics(mp, ("H", "H"))
    assert path.terminal_kind == "cycle"
    path = run_dynamics(mp, ("H", "H"), DynamicsConfig(order="random", max_steps=25, seed=1))
    assert path.terminal_kind == "budget_exhausted"


def test_config_validation():
    with pytest.raises(ValueError):
        DynamicsConfig(max_steps=0)
    with pytest.raises(ValueError):
        DynamicsConfig(order="sideways")


def test_census_examples():
    assert basin_census(stag()).counts == {("A", "A"): 2, ("D", "D"): 2}
    assert basin_census(ins(2)).counts == {("A", "A"): 9}
    c = basin_census(stag(3), initials=[("D", "D", "D")])
    assert c.counts == {("D", "D", "D"): 1}


def test_census_budget_and_csv():
    with pytest.raises(BudgetExceededError):
        basin_census(ins(3), budget=26)
    assert basin_census(stag()).to_csv() == (
        'terminal_profile,count,fraction\n"(A,A)",2,0.500000\n"(D,D)",2,0.500000\n')


def test_monte_carlo_is_deterministic():
    cfg = DynamicsConfig(order="random", seed=99)
    a = basin_census(stag(3, 7, 4), cfg, mode="monte_carlo", samples=200)
    b = basin_census(stag(3, 7, 4), cfg, mode="monte_carlo", samples=200)
    assert a.to_csv() == b.to_csv()
    assert a.runs == 200 and sum(a.counts.values()) == 200
    other = basin_census(stag(3, 7, 4), DynamicsConfig(order="random", seed=100), mode="monte_carlo", samples=200)
    assert set(other.counts) <= {("A",) * 3, ("D",) * 3}


@pytest.mark.parametrize("beta, dominant", [(6, ("D", "D")), (10, ("A", "A")), (8, None)])
def test_compare_prediction(beta, dominant):
    g = stag(2, beta, 4)
    cmp = compare_prediction(g, basin_census(g))
    assert cmp.risk_dominant == dominant
    assert cmp.largest_basin == (("A", "A"), ("D", "D"))
    assert cmp.agree


def test_updates_strictly_improve_and_terminate():
    rng = random.Random(7)
    for _ in range(40):
        n = rng.randint(2, 4)
        beta, gamma = random_adoption(rng, n)
        eps, delta = random_insurance(rng, gamma)
        for g in (stag_hunt_game(AdoptionParams(n, beta, gamma)),
                  insurance_game(AdoptionParams(n, beta, gamma), InsuranceParams(eps, delta))):
            cfg = DynamicsConfig(order=rng.choice(["fixed", "random"]), seed=rng.randrange(2**32),
                                 max_steps=4 * n * sum(len(s) for s in g.strategy_sets))
            start = tuple(rng.choice(s) for s in g.strategy_sets)
            path = run_dynamics(g, start, cfg)
            assert path.terminal_kind == "nash"
            assert is_pure_nash(g, path.terminal)
            for m, before in zip(path.moves, path.profiles):
                after = before[:m.player] + (m.new,) + before[m.player + 1:]
                assert payoff_of(g, after)[m.player] > payoff_of(g, before)[m.player]
                assert m.new == best_responses(g, before, m.player)[0]
            for before, after in zip(path.profiles, path.profiles[1:]):
                assert sum(x != y for x, y in zip(before, after)) == 1


def test_insurance_from_status_quo_any_order():
    rng = random.Random(8)
    for _ in range(40):
        n = rng.randint(2, 5)
        beta, gamma = random_adoption(rng, n)
        eps, delta = random_insurance(rng, gamma)
        g = insurance_game(AdoptionParams(n, beta, gamma), InsuranceParams(eps, delta))
        order = rng.choice(["fixed", "random"])
        path = run_dynamics(g, ("D",) * n, DynamicsConfig(order=order, seed=rng.randrange(10**6)))
        assert path.terminal == ("A",) * n
        seen = set()
        for m, before in zip(path.moves, path.profiles):
            assert m.new != "D"
            if m.player in seen:
                continue
            seen.add(m.player)
            others_defect = any(x == "D" for j, x in enumerate(before) if j != m.player)
            # the last defector to move sees no risk left and skips insurance
            assert (m.old, m.new) == (("D", "B") if others_defect else ("D", "A"))
        assert seen == set(range(n))


def test_insurance_two_step_simultaneous():
    rng = random.Random(9)
    for _ in range(40):
        n = rng.randint(1, 5)
        beta, gamma = random_adoption(rng, n)
        eps, delta = random_insurance(rng, gamma)
        g = insurance_game(AdoptionParams(n, beta, gamma), InsuranceParams(eps, delta))
        path = run_dynamics(g, ("D",) * n, DynamicsConfig(order="simultaneous"))
        if n == 1:
            continue  # a lone player faces no adoption risk
        assert [(m.player, m.old, m.new) for m in path.moves] == (
            [(i, "D", "B") for i in range(n)] + [(i, "B", "A") for i in range(n)])
        assert path.profiles[n] == ("B",) * n
        assert path.terminal_kind == "nash"


def test_same_seed_same_path():
    g = ins(4)
    cfg = DynamicsConfig(order="random", seed=5)
    assert run_dynamics(g, ("D",) * 4, cfg) == run_dynamics(g, ("D",) * 4, cfg)


def test_simultaneous_can_oscillate():
    # both players switch at once and swap roles every round
    path = run_dynamics(stag(), ("A", "D"), DynamicsConfig(order="simultaneous"))
    assert path.terminal_kind == "cycle"
    assert path.profiles == (("A", "D"), ("D", "D"), ("D", "A"), ("A", "A"), ("A", "D"))
