"""Command line front end.

Examples:

    simrun --scenario calibrated --strategy location-prediction
    simrun --scenario calibrated --compare all --seeds 20 --out results/
    simrun --scenario scenarios/two_quads.toml --seeds 3,7,9 --trace all
    simrun --scenario calibrated --sweep-accuracy 0,0.25,0.5,0.75,1 --seeds 10

Exit codes: 0 success, 2 configuration problem, 3 simulation abort.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from .engine import SimulationError
from .experiments import (STRATEGY_ORDER, RunResult, accuracy_sweep, compare,
                          run_seeds)
from .scenario import PRESETS, ScenarioError, get_scenario
from .strategies import STRATEGY_IDS


def _parse_seeds(spec: str, base: int) -> List[int]:
    """'8' means eight seeds counted from the scenario seed; '3,7,9' is literal."""
    if "," in spec:
        return [int(x) for x in spec.split(",") if x.strip() != ""]
    n = int(spec)
    if n <= 0:
        raise ValueError("seed count must be positive")
    return list(range(base, base + n))


def _parse_strategies(spec: str) -> List[str]:
    if spec == "all":
        return list(STRATEGY_ORDER)
    ids = [s.strip() for s in spec.split(",") if s.strip()]
    for sid in ids:
        if sid not in STRATEGY_IDS:
            raise ScenarioError(f"unknown strategy {sid!r}; known: {sorted(STRATEGY_IDS)}")
    return ids


def _fmt(x, width=9, digits=1) -> str:
    if x is None:
        return " " * (width - 4) + "-   "
    return f"{x:{width}.{digits}f}"


def _print_aggregate(label: str, agg: dict) -> None:
    lat = agg["latency_ms"]
    ratio = agg["content_to_interest"]
    steady = agg["steady_rtt_ms"]
    print(f"{label:22s} runs={agg['runs']:<4d} handovers={agg['handovers']:<5d} "
          f"latency_ms={_fmt(lat and lat['mean'])} "
          f"ratio={_fmt(ratio and ratio['mean'], 7, 3)} "
          f"steady_rtt_ms={_fmt(steady and steady['mean'], 7)} "
          f"dropped={agg['dropped_sessions']}")


def _dump_traces(results: List[RunResult], out_dir: str, mode: str) -> None:
    if mode == "none":
        return
    keep = results if mode == "all" else results[:1]
    for r in keep:
        path = os.path.join(out_dir, f"trace_{r.strategy}_seed{r.seed}.csv")
        r.trace.to_csv(path)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="simrun",
        description="Discrete-event producer-mobility simulation runner.")
    p.add_argument("--scenario", default="calibrated",
                   help=f"preset name ({', '.join(sorted(PRESETS))}) or a TOML file")
    p.add_argument("--strategy", default=None,
                   help=f"override the scenario strategy ({', '.join(sorted(STRATEGY_IDS))})")
    p.add_argument("--seeds", default="1",
                   help="count ('8', seeds run from the scenario seed) or explicit list ('3,7,9')")
    p.add_argument("--compare", default=None, metavar="IDS",
                   help="run several strategies over the same seeds: 'all' or a comma list")
    p.add_argument("--sweep-accuracy", default=None, metavar="QS",
                   help="comma list of prediction accuracies to sweep, e.g. '0,0.5,1'")
    p.add_argument("--out", default=None, metavar="DIR",
                   help="write metrics.json and trace CSVs to this directory")
    p.add_argument("--trace", choices=("first", "all", "none"), default="first",
                   help="which per-seed trace CSVs to write under --out (default: first)")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scenario = get_scenario(args.scenario)
        if args.strategy:
            scenario = scenario.with_strategy(args.strategy).validate()
        env_seed = os.environ.get("SIM_SEED")
        if env_seed is not None:
            seeds = [int(env_seed)]
        else:
            seeds = _parse_seeds(args.seeds, scenario.run.seed)
    except (ScenarioError, ValueError) as exc:
        print(f"simrun: {exc}", file=sys.stderr)
        return 2

    out_dir = args.out
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)

    payload: dict = {"scenario": scenario.name, "seeds": seeds}
    try:
        if args.sweep_accuracy is not None:
            qs = [float(x) for x in args.sweep_accuracy.split(",") if x.strip()]
            rows = accuracy_sweep(scenario, qs, seeds)
            payload["sweep"] = [{"q": r["q"], **r["aggregate"]} for r in rows]
            for r in rows:
                _print_aggregate(f"q={r['q']:g}", r["aggregate"])
        elif args.compare is not None:
            ids = _parse_strategies(args.compare)
            outcome = compare(scenario, ids, seeds)
            payload["strategies"] = {sid: res["aggregate"]
                                     for sid, res in outcome.items()}
            for sid in ids:
                _print_aggregate(sid, outcome[sid]["aggregate"])
                if out_dir:
                    _dump_traces(outcome[sid]["results"], out_dir, args.trace)
        else:
            res = run_seeds(scenario, seeds)
            payload["aggregate"] = res["aggregate"]
            payload["reports"] = [r.report for r in res["results"]]
            _print_aggregate(scenario.strategy.id, res["aggregate"])
            if out_dir:
                _dump_traces(res["results"], out_dir, args.trace)
    except ScenarioError as exc:
        print(f"simrun: {exc}", file=sys.stderr)
        return 2
    except SimulationError as exc:
        print(f"simrun: simulation aborted: {exc}", file=sys.stderr)
        return 3

    if out_dir:
        with open(os.path.join(out_dir, "metrics.json"), "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
        print(f"wrote {os.path.join(out_dir, 'metrics.json')}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
