"""``archgame`` command line.

Exit status: 0 on success, 1 when an analysis refuses to run (enumeration
budget), 2 on bad input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from archgame.game_core import DEFAULT_BUDGET, BudgetExceededError
from archgame.scenario import AnalysisResult, ScenarioError, load_scenario, run_analysis, sweep, table_csv

DEMOS = {
    "fig1": [("fig1_stage", "nash"), ("fig1_supergame", "supergame_check")],
    "staghunt": [("staghunt_2p", "nash"), ("staghunt_2p", "risk"), ("staghunt_risk", "risk")],
    "insurance": [("insurance_demo", "nash"), ("insurance_two_step", "dynamics"), ("insurance_demo", "dynamics")],
}

COMMANDS = {
    "run": None,
    "nash": "nash",
    "supergame-check": "supergame_check",
    "dynamics": "dynamics",
    "census": "census",
    "risk": "risk",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="override the scenario's dynamics seed")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max profiles to enumerate")
    common.add_argument("--out", type=Path, default=None, help="directory for report and CSV files")
    common.add_argument("--format", choices=("text", "csv"), default="text", help="what to print on stdout")

    ap = argparse.ArgumentParser(prog="archgame", description="Technology competition games on networks")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common], help=f"{name} analysis of a scenario")
        p.add_argument("scenario", help="scenario file or bundled scenario name")
    p = sub.add_parser("sweep", parents=[common], help="rerun a scenario over a parameter grid")
    p.add_argument("scenario")
    p.add_argument("--param", required=True, help="dotted field name, e.g. supergame.alpha")
    p.add_argument("--grid", required=True, help="comma-separated values; p/q allowed")
    p.add_argument("--analysis", default=None, help="analysis to run (default: the scenario's)")
    p = sub.add_parser("demo", parents=[common], help="bundled walkthroughs")
    p.add_argument("which", choices=sorted(DEMOS))
    return ap


def _emit(results: list[tuple[str, AnalysisResult]], args) -> None:
    for stem, result in results:
        if args.format == "text":
            sys.stdout.write(result.text())
        else:
            header, rows = next(iter(result.tables.values()))
            sys.stdout.write(table_csv(header, rows))
        if args.out is not None:
            args.out.mkdir(parents=True, exist_ok=True)
            (args.out / f"{stem}.txt").write_text(result.text())
            for name, (header, rows) in result.tables.items():
                (args.out / f"{stem}_{name}.csv").write_text(table_csv(header, rows))


def _dispatch(args) -> None:
    if args.command == "demo":
        results = []
        for ref, analysis in DEMOS[args.which]:
            sc = load_scenario(ref)
            results.append((f"{sc.name}_{analysis}", run_analysis(sc, analysis, args.seed, args.budget)))
        _emit(results, args)
        return
    sc = load_scenario(args.scenario)
    if args.out is None and isinstance(sc.data.get("output"), str):
        args.out = Path(sc.data["output"])
    if args.command == "sweep":
        grid = [v.strip() for v in args.grid.split(",") if v.strip()]
        text = sweep(sc, args.param, grid, args.analysis, args.seed, args.budget)
        sys.stdout.write(text)
        if args.out is not None:
            args.out.mkdir(parents=True, exist_ok=True)
            (args.out / f"{sc.name}_sweep_{args.param.replace('.', '_')}.csv").write_text(text)
        return
    analysis = COMMANDS[args.command] or sc.analysis
    _emit([(f"{sc.name}_{analysis}", run_analysis(sc, analysis, args.seed, args.budget))], args)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _dispatch(args)
    except BudgetExceededError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 1
    except ScenarioError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
