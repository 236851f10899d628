"""Batch drivers: single runs, seed sweeps, strategy comparisons."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from .engine import Simulation
from .metrics import aggregate_reports, build_report
from .scenario import Scenario
from .trace import EventTrace

# canonical presentation order
STRATEGY_ORDER = ("location-prediction", "no-management",
                  "interest-forwarding", "zone-flooding")


@dataclass
class RunResult:
    scenario: str
    strategy: str
    seed: int
    trace: EventTrace
    report: dict


def run_once(scenario: Scenario, strategy_id: Optional[str] = None,
             seed: Optional[int] = None) -> RunResult:
    sc = scenario.with_strategy(strategy_id) if strategy_id else scenario
    sim = Simulation(sc, seed)
    trace = sim.run()
    return RunResult(sc.name, sc.strategy.id, sim.seed, trace,
                     build_report(trace, sc.strategy.id, sim.seed))


def run_seeds(scenario: Scenario, seeds: Sequence[int],
              strategy_id: Optional[str] = None) -> Dict[str, object]:
    results = [run_once(scenario, strategy_id, s) for s in seeds]
    return {"results": results,
            "aggregate": aggregate_reports([r.report for r in results])}


def compare(scenario: Scenario, strategy_ids: Sequence[str],
            seeds: Sequence[int]) -> Dict[str, Dict[str, object]]:
    return {sid: run_seeds(scenario, seeds, sid) for sid in strategy_ids}


def accuracy_sweep(scenario: Scenario, qs: Sequence[float],
                   seeds: Sequence[int]) -> List[dict]:
    """Prediction-accuracy sweep under the anticipation strategy."""
    rows = []
    for q in qs:
        sc = scenario.with_accuracy(q).with_strategy("location-prediction")
        out = run_seeds(sc, seeds)
        rows.append({"q": q, "aggregate": out["aggregate"]})
    return rows
