"""Deterministic simulation of producer mobility in a named-data network.

A small library plus a ``simrun`` CLI. The pieces:

* :mod:`ndnmob.names`, :mod:`ndnmob.packets` -- names and packet kinds.
* :mod:`ndnmob.forwarding` -- per-node FIB/PIT/content-store pipeline.
* :mod:`ndnmob.mobility` -- random-walk motion and signal-strength model.
* :mod:`ndnmob.topology` -- AP grid over a two-tier wired backhaul.
* :mod:`ndnmob.scenario` -- TOML scenarios and calibrated presets.
* :mod:`ndnmob.strategies` -- mobility management schemes.
* :mod:`ndnmob.engine` -- the discrete-event loop.
* :mod:`ndnmob.trace`, :mod:`ndnmob.metrics` -- event log and measurements.
* :mod:`ndnmob.experiments` -- seed sweeps and strategy comparisons.
"""

from .engine import Simulation, SimulationError
from .experiments import (RunResult, STRATEGY_ORDER, accuracy_sweep, compare,
                          run_once, run_seeds)
from .metrics import (aggregate_reports, build_report, content_to_interest_ratio,
                      handover_events, handover_latencies_ms, outage_ms,
                      rtt_samples, steady_rtt_ms)
from .scenario import (PRESETS, Scenario, ScenarioError, get_scenario,
                       load_scenario, preset_calibrated, preset_calibrated_rtt,
                       preset_steady)
from .strategies import REGISTRY, STRATEGY_IDS
from .trace import EventTrace

__version__ = "0.1.0"

__all__ = [
    "EventTrace", "PRESETS", "REGISTRY", "RunResult", "STRATEGY_IDS",
    "STRATEGY_ORDER", "Scenario", "ScenarioError", "Simulation",
    "SimulationError", "accuracy_sweep", "aggregate_reports", "build_report",
    "compare", "content_to_interest_ratio", "get_scenario", "handover_events",
    "handover_latencies_ms", "load_scenario", "outage_ms", "preset_calibrated",
    "preset_calibrated_rtt", "preset_steady", "rtt_samples", "run_once",
    "run_seeds", "steady_rtt_ms", "__version__",
]
