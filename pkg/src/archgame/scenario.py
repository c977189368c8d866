"""Scenario files and the analyses the command line runs on them.

A scenario is a JSON object::

    {
      "name": "fig1_supergame",
      "kind": "pd_supergame",
      "pd": {"n_players": 2, "f": [10, 50], "g": [15, 90]},
      "supergame": {"alpha": "3/5"},
      "analysis": "supergame_check"
    }

Numbers may be written as strings ``"p/q"`` to get exact rational arithmetic.
"""

from __future__ import annotations

import copy
import csv
import io
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from archgame._numeric import fmt, parse_number
from archgame.adoption import (
    AdoptionParams,
    InsuranceParams,
    component_adoption_game,
    insurance_game,
    insurer_ledger,
    stag_hunt_game,
)
from archgame.dynamics import ORDERS, DynamicsConfig, basin_census, compare_prediction, format_profile, run_dynamics
from archgame.game_core import DEFAULT_BUDGET, StrategicGame, enumerate_pure_nash, payoff_of
from archgame.pd_supergame import PDSchedule, stage_game, validate_schedule
from archgame.supergame import (
    check_conditional_cooperation,
    check_machine_profile,
    constant_machine,
    critical_alpha_numeric,
    extended_deviations,
    pd_supergame,
    taylor_deviations,
    taylor_threshold,
)
from archgame.topology import load_edge_list

KINDS = ("pd_stage", "pd_supergame", "stag_hunt", "insurance", "component_adoption")
ANALYSES = ("nash", "supergame_check", "dynamics", "census", "risk")

#: column order of ``sweep`` output
SWEEP_COLUMNS = ("param", "value", "analysis", "ne_count", "equilibria", "verdict",
                 "binding_deviation", "threshold", "risk_winner", "basin")


class ScenarioError(ValueError):
    """Malformed scenario; ``where`` names the offending field or line."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


@dataclass
class Scenario:
    name: str
    kind: str
    data: dict
    analysis: str
    base_dir: Path

    def stanza(self, key: str) -> dict:
        value = self.data.get(key)
        if not isinstance(value, dict):
            raise ScenarioError(key, f"scenario of kind {self.kind!r} needs a '{key}' object")
        return value

    def with_param(self, dotted: str, value) -> "Scenario":
        """Copy with ``a.b`` set to ``value``."""
        data = copy.deepcopy(self.data)
        node = data
        *parents, leaf = dotted.split(".")
        for p in parents:
            if not isinstance(node.get(p), dict):
                raise ScenarioError(dotted, f"no object '{p}' in scenario")
            node = node[p]
        if leaf not in node:
            raise ScenarioError(dotted, "no such numeric field in scenario")
        try:
            parse_number(node[leaf])
        except ValueError:
            raise ScenarioError(dotted, "field is not numeric") from None
        node[leaf] = value
        return Scenario(self.name, self.kind, data, self.analysis, self.base_dir)


def bundled_dir() -> Path:
    return Path(str(resources.files("archgame") / "scenarios"))


def resolve_path(ref: str) -> Path:
    """A file path, or the name of a bundled scenario."""
    p = Path(ref)
    if p.is_file():
        return p
    candidate = bundled_dir() / (ref if ref.endswith(".json") else ref + ".json")
    if candidate.is_file():
        return candidate
    raise ScenarioError(ref, "no such scenario file or bundled scenario")


def parse_scenario(text: str, base_dir: Path = Path("."), name: str = "scenario") -> Scenario:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"line {exc.lineno}", exc.msg) from None
    if not isinstance(data, dict):
        raise ScenarioError("line 1", "scenario must be a JSON object")
    kind = data.get("kind")
    if kind not in KINDS:
        raise ScenarioError("kind", f"expected one of {', '.join(KINDS)}, got {kind!r}")
    analysis = data.get("analysis", "nash")
    if analysis not in ANALYSES:
        raise ScenarioError("analysis", f"expected one of {', '.join(ANALYSES)}, got {analysis!r}")
    return Scenario(str(data.get("name", name)), kind, data, analysis, base_dir)


def load_scenario(ref: str) -> Scenario:
    path = resolve_path(ref)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(str(path), str(exc)) from None
    return parse_scenario(text, path.parent, path.stem)


# ---------------------------------------------------------------- building

def _num(stanza: dict, key: str, where: str, required: bool = True, default=None):
    if key not in stanza:
        if required:
            raise ScenarioError(f"{where}.{key}", "missing")
        return default
    value = stanza[key]
    try:
        if isinstance(value, list):
            return tuple(parse_number(v) for v in value)
        return parse_number(value)
    except ValueError as exc:
        raise ScenarioError(f"{where}.{key}", str(exc)) from None


def _int(stanza: dict, key: str, where: str, default=None):
    value = stanza.get(key, default)
    if value is None or isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"{where}.{key}", f"expected an integer, got {value!r}")
    return value


def build_schedule(sc: Scenario) -> PDSchedule:
    pd = sc.stanza("pd")
    f, g = _num(pd, "f", "pd"), _num(pd, "g", "pd")
    if not isinstance(f, tuple) or not isinstance(g, tuple):
        raise ScenarioError("pd", "f and g must be arrays")
    n = _int(pd, "n_players", "pd", default=len(f))
    return PDSchedule(n, f, g)


def build_adoption(sc: Scenario) -> AdoptionParams:
    sh = sc.stanza("stag_hunt")
    return AdoptionParams(_int(sh, "n_players", "stag_hunt"), _num(sh, "beta", "stag_hunt"),
                          _num(sh, "gamma", "stag_hunt"))


def build_insurance(sc: Scenario) -> InsuranceParams:
    ins = sc.stanza("insurance")
    return InsuranceParams(_num(ins, "epsilon", "insurance"), _num(ins, "delta", "insurance", required=False))


def build_game(sc: Scenario) -> StrategicGame:
    if sc.kind in ("pd_stage", "pd_supergame"):
        return stage_game(build_schedule(sc))
    params = build_adoption(sc)
    if sc.kind == "stag_hunt":
        return stag_hunt_game(params)
    if sc.kind == "insurance":
        return insurance_game(params, build_insurance(sc), bool(sc.stanza("insurance").get("allow_partial", False)))
    comp = sc.stanza("component")
    graph_file = comp.get("graph_file")
    if not isinstance(graph_file, str):
        raise ScenarioError("component.graph_file", "expected a path string")
    try:
        graph = load_edge_list(sc.base_dir / graph_file)
    except OSError as exc:
        raise ScenarioError("component.graph_file", str(exc)) from None
    except ValueError as exc:
        raise ScenarioError(f"component.graph_file ({graph_file})", str(exc)) from None
    return component_adoption_game(graph, params, _num(comp, "exponent", "component", required=False, default=2))


def build_dynamics_config(sc: Scenario, seed: int | None = None) -> DynamicsConfig:
    dyn = sc.data.get("dynamics", {})
    if not isinstance(dyn, dict):
        raise ScenarioError("dynamics", "expected an object")
    order = dyn.get("order", "fixed")
    if order not in ORDERS:
        raise ScenarioError("dynamics.order", f"expected one of {', '.join(ORDERS)}, got {order!r}")
    if "max_steps" in dyn:
        max_steps = _int(dyn, "max_steps", "dynamics")
    else:
        game = build_game(sc)
        max_steps = 4 * game.n_players * sum(len(s) for s in game.strategy_sets)
    base_seed = _int(dyn, "seed", "dynamics", default=0) if seed is None else seed
    if max_steps < 1:
        raise ScenarioError("dynamics.max_steps", "must be at least 1")
    return DynamicsConfig(order, max_steps, base_seed)


# ---------------------------------------------------------------- analyses

@dataclass
class AnalysisResult:
    title: str
    lines: list[str]
    tables: dict[str, tuple[tuple, list]] = field(default_factory=dict)
    summary: dict[str, Any] = field(default_factory=dict)

    def text(self) -> str:
        return "\n".join([f"== {self.title} =="] + self.lines) + "\n"


def table_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _vec(values) -> str:
    return "(" + ",".join(fmt(v) for v in values) + ")"


def payoff_matrix_lines(game: StrategicGame) -> list[str]:
    """Row player 0, column player 1; one ``u0,u1`` cell per profile."""
    rows, cols = game.strategy_sets
    cells = [[",".join(fmt(v) for v in payoff_of(game, (r, c))) for c in cols] for r in rows]
    width = max(max(len(x) for row in cells for x in row), max(len(str(c)) for c in cols))
    head = max(len(str(r)) for r in rows)
    out = [" " * head + "  " + "  ".join(str(c).rjust(width) for c in cols)]
    for r, row in zip(rows, cells):
        out.append(str(r).ljust(head) + "  " + "  ".join(x.rjust(width) for x in row))
    return out


def analyze_nash(sc: Scenario, budget: int = DEFAULT_BUDGET) -> AnalysisResult:
    game = build_game(sc)
    report = enumerate_pure_nash(game, budget)
    lines = [f"game: {sc.kind}, {game.n_players} players, {report.search_space_size} profiles"]
    payoff_rows = [(format_profile(p), _vec(payoff_of(game, p))) for p in game.profiles()]
    if game.n_players == 2:
        lines.append("payoffs:")
        lines += ["  " + x for x in payoff_matrix_lines(game)]
    eq_rows = []
    for p, strict in zip(report.equilibria, report.strict):
        row = [format_profile(p), _vec(payoff_of(game, p)), "strict" if strict else "weak",
               "yes" if p in report.pareto_dominant else "no"]
        if sc.kind == "insurance":
            row.append(fmt(insurer_ledger(build_adoption(sc), build_insurance(sc), p).net))
        eq_rows.append(row)
    n = len(report.equilibria)
    if n == 1:
        lines.append(f"unique pure Nash equilibrium: {format_profile(report.equilibria[0])}")
    else:
        lines.append(f"{n} pure Nash equilibria")
    for row in eq_rows:
        extra = f", insurer net {row[4]}" if len(row) > 4 else ""
        lines.append(f"  {row[0]} payoffs {row[1]} [{row[2]}]{' pareto-dominant' if row[3] == 'yes' else ''}{extra}")
    header = ("profile", "payoffs", "strict", "pareto_dominant") + (("insurer_net",) if sc.kind == "insurance" else ())
    return AnalysisResult(
        f"nash: {sc.name}", lines,
        {"equilibria": (header, eq_rows), "payoffs": (("profile", "payoffs"), payoff_rows)},
        {"ne_count": n, "equilibria": ";".join(format_profile(p) for p in report.equilibria)},
    )


def analyze_supergame(sc: Scenario) -> AnalysisResult:
    if sc.kind != "pd_supergame":
        raise ScenarioError("kind", "supergame_check needs kind 'pd_supergame'")
    schedule = build_schedule(sc)
    validity = validate_schedule(schedule)
    if not validity.valid:
        raise ScenarioError("pd", f"invalid schedule: {validity}")
    sg = sc.stanza("supergame")
    alpha = _num(sg, "alpha", "supergame")
    family = sg.get("deviations", "taylor")
    if family == "taylor":
        deviations = taylor_deviations
    elif family == "extended":
        deviations = extended_deviations(_int(sg, "max_burst", "supergame", default=5))
    else:
        raise ScenarioError("supergame.deviations", f"expected 'taylor' or 'extended', got {family!r}")
    profile = sg.get("profile", "tit_for_tat")
    try:
        if profile == "tit_for_tat":
            n = sg.get("n")
            verdict = check_conditional_cooperation(schedule, alpha, deviations,
                                                    None if n is None else _int(sg, "n", "supergame"))
            label = f"B_{schedule.n_players - 1 if n is None else n} for every player"
        elif profile == "always_cooperate":
            sgame = pd_supergame(schedule, alpha)
            verdict = check_machine_profile(sgame, [constant_machine("C")] * schedule.n_players, deviations)
            label = "C_inf for every player"
        else:
            raise ScenarioError("supergame.profile", f"expected 'tit_for_tat' or 'always_cooperate', got {profile!r}")
    except ValueError as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError("supergame", str(exc)) from None
    threshold = taylor_threshold(schedule)
    numeric = critical_alpha_numeric(schedule)
    ok = verdict.is_equilibrium_wrt_deviations
    lines = [
        f"profile: {label}; alpha = {fmt(alpha) if not isinstance(alpha, tuple) else _vec(alpha)}; deviations: {family}",
        f"threshold (g[N-1]-f[N-1])/(g[N-1]-g[0]) = {fmt(threshold)} ~ {float(threshold):.10f}",
        f"bisection critical alpha = {numeric:.10f}",
        "equilibrium value per player: " + _vec(verdict.values),
        f"verdict: {'equilibrium' if ok else 'not equilibrium'}",
    ]
    b = verdict.binding_deviation
    if b is not None:
        lines.append(f"binding deviation: player {b.player} -> {b.deviation}, value {fmt(b.value)}, gain {fmt(b.gain)}")
    rows = [(o.player, o.deviation, fmt(o.value), fmt(o.gain)) for o in verdict.outcomes]
    return AnalysisResult(
        f"supergame_check: {sc.name}", lines,
        {"deviations": (("player", "deviation", "value", "gain"), rows)},
        {"verdict": "equilibrium" if ok else "not_equilibrium",
         "binding_deviation": "" if b is None else b.deviation,
         "threshold": fmt(threshold)},
    )


def _initial(sc: Scenario, game: StrategicGame):
    dyn = sc.data.get("dynamics", {})
    init = dyn.get("initial")
    if init is None:
        return tuple(s[-1] for s in game.strategy_sets)
    if isinstance(init, str):
        init = [init] * game.n_players if len(init) == 1 else list(init)
    try:
        return game.validate(init)
    except ValueError as exc:
        raise ScenarioError("dynamics.initial", str(exc)) from None


def analyze_dynamics(sc: Scenario, seed: int | None = None) -> AnalysisResult:
    game = build_game(sc)
    config = build_dynamics_config(sc, seed)
    start = _initial(sc, game)
    path = run_dynamics(game, start, config)
    lines = [f"order: {config.order}, seed {config.seed}, max_steps {config.max_steps}",
             "path: " + " -> ".join(format_profile(p) for p in path.profiles),
             f"terminal: {format_profile(path.terminal)} ({path.terminal_kind}) after {path.updates_applied} updates"]
    rows = [(0, "", "", "", format_profile(path.profiles[0]))]
    for k, (m, p) in enumerate(zip(path.moves, path.profiles[1:]), start=1):
        rows.append((k, m.player, m.old, m.new, format_profile(p)))
    return AnalysisResult(
        f"dynamics: {sc.name}", lines,
        {"path": (("step", "player", "from", "to", "profile"), rows)},
        {"basin": f"{format_profile(path.terminal)}:{path.terminal_kind}"},
    )


def analyze_census(sc: Scenario, seed: int | None = None, budget: int = DEFAULT_BUDGET) -> AnalysisResult:
    game = build_game(sc)
    config = build_dynamics_config(sc, seed)
    dyn = sc.data.get("dynamics", {})
    mode = dyn.get("mode", "exhaustive")
    if mode not in ("exhaustive", "monte_carlo"):
        raise ScenarioError("dynamics.mode", f"expected 'exhaustive' or 'monte_carlo', got {mode!r}")
    samples = _int(dyn, "samples", "dynamics", default=1000)
    census = basin_census(game, config, mode=mode, samples=samples, budget=budget)
    lines = [f"mode: {census.mode}, runs: {census.runs}, order: {config.order}, seed {config.seed}",
             f"(basins under {config.order}-order best-response dynamics only)"]
    rows = []
    for p, c in census.counts.items():
        lines.append(f"  {format_profile(p)}: {c} ({c / census.runs:.6f}) [{census.kinds[p]}]")
        rows.append((format_profile(p), c, f"{c / census.runs:.6f}"))
    basin = ";".join(f"{p}:{f}" for p, _, f in rows)
    return AnalysisResult(f"census: {sc.name}", lines,
                          {"census": (("terminal_profile", "count", "fraction"), rows)},
                          {"basin": basin})


def analyze_risk(sc: Scenario, seed: int | None = None) -> AnalysisResult:
    game = build_game(sc)
    config = build_dynamics_config(sc, seed)
    try:
        census = basin_census(game, config)
        cmp = compare_prediction(game, census)
    except ValueError as exc:
        raise ScenarioError("kind", f"risk analysis: {exc}") from None
    report = enumerate_pure_nash(game)
    e1, e2 = [p for p, s in zip(report.equilibria, report.strict) if s]
    v = cmp.risk
    winner = "tie" if v.winner is None else format_profile(v.winner)
    lines = [f"Nash product {format_profile(e1)} = {fmt(v.nash_product_1)}",
             f"Nash product {format_profile(e2)} = {fmt(v.nash_product_2)}",
             f"risk-dominant: {winner}",
             "largest basin: " + ", ".join(format_profile(p) for p in cmp.largest_basin),
             f"prediction agrees with basins: {'yes' if cmp.agree else 'no'}"]
    rows = [(format_profile(e1), fmt(v.nash_product_1), "yes" if v.winner == e1 else "no"),
            (format_profile(e2), fmt(v.nash_product_2), "yes" if v.winner == e2 else "no")]
    return AnalysisResult(f"risk: {sc.name}", lines,
                          {"risk": (("equilibrium", "nash_product", "winner"), rows)},
                          {"risk_winner": winner})


def run_analysis(sc: Scenario, analysis: str | None = None, seed: int | None = None,
                 budget: int = DEFAULT_BUDGET) -> AnalysisResult:
    analysis = analysis or sc.analysis
    if analysis == "nash":
        return analyze_nash(sc, budget)
    if analysis == "supergame_check":
        return analyze_supergame(sc)
    if analysis == "dynamics":
        return analyze_dynamics(sc, seed)
    if analysis == "census":
        return analyze_census(sc, seed, budget)
    if analysis == "risk":
        return analyze_risk(sc, seed)
    raise ScenarioError("analysis", f"unknown analysis {analysis!r}")


def sweep(sc: Scenario, param: str, grid: list, analysis: str | None = None, seed: int | None = None,
          budget: int = DEFAULT_BUDGET) -> str:
    """One run per grid value; CSV with the fixed :data:`SWEEP_COLUMNS`."""
    if not grid:
        raise ScenarioError("--grid", "empty grid")
    rows = []
    for raw in grid:
        try:
            value = parse_number(raw)
        except ValueError as exc:
            raise ScenarioError("--grid", str(exc)) from None
        stored = raw if isinstance(raw, str) else value
        result = run_analysis(sc.with_param(param, stored), analysis, seed, budget)
        s = result.summary
        rows.append([param, fmt(value), analysis or sc.analysis] + [s.get(c, "") for c in SWEEP_COLUMNS[3:]])
    return table_csv(SWEEP_COLUMNS, rows)
