"""Scenario configuration: dataclasses, TOML loading and built-in presets.

A scenario bundles everything one run needs: topology shape, mobility and
handover timing, workload, strategy settings and node placement. Presets
cover the layouts used by the test suite and the demos; TOML files with the
same field names can override any of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

try:
    import tomllib  # py311+
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as tomllib

from .mobility import MobilityParams
from .topology import TopologyParams


class ScenarioError(Exception):
    """Bad scenario configuration (unknown fields, invalid values)."""


HEADINGS = {"+x": 0.0, "+y": math.pi / 2, "-x": math.pi, "-y": 3 * math.pi / 2}


def parse_heading(value) -> float:
    if isinstance(value, str):
        try:
            return HEADINGS[value]
        except KeyError:
            raise ScenarioError(f"unknown heading {value!r}; use +x/-x/+y/-y or radians")
    return float(value) % (2 * math.pi)


@dataclass(slots=True)
class WorkloadConfig:
    rate_per_s: float = 20.0
    retx_timeout_ms: float = 1000.0
    payload_bytes: int = 1024
    jitter: bool = True          # random per-pair phase within one send gap


@dataclass(slots=True)
class StrategyConfig:
    id: str = "location-prediction"
    grace_ms: float = 10.0           # silence after ready before announcing
    ts_factor: float = 2.0           # copy lifetime in units of steady RTT
    ts_ms: Optional[float] = None    # explicit copy lifetime override
    zone_regrace_ms: float = 75.0    # renotify consumers this long after ready
    convergence_ms: float = 1100.0   # plain routing convergence after attach
    accuracy_mode: str = "geometric"  # or "forced"
    accuracy_q: float = 1.0          # P(prediction correct) in forced mode


@dataclass(slots=True)
class ProducerSpec:
    pid: str
    cell: int
    offset_m: Tuple[float, float] = (0.0, 0.0)   # start offset from the cell AP
    speed_kmh: float = 0.0
    heading_rad: float = 0.0


@dataclass(slots=True)
class ConsumerSpec:
    cid: str
    cell: int
    producers: List[str] = field(default_factory=list)


@dataclass(slots=True)
class RunConfig:
    duration_s: float = 3.0
    seed: int = 0


@dataclass(slots=True)
class Scenario:
    name: str = "custom"
    topology: TopologyParams = field(default_factory=TopologyParams)
    mobility: MobilityParams = field(default_factory=MobilityParams)
    workload: WorkloadConfig = field(default_factory=WorkloadConfig)
    strategy: StrategyConfig = field(default_factory=StrategyConfig)
    producers: List[ProducerSpec] = field(default_factory=list)
    consumers: List[ConsumerSpec] = field(default_factory=list)
    run: RunConfig = field(default_factory=RunConfig)

    def validate(self) -> "Scenario":
        cells = self.topology.grid * self.topology.grid
        pids = [p.pid for p in self.producers]
        if len(set(pids)) != len(pids):
            raise ScenarioError("duplicate producer ids")
        cids = [c.cid for c in self.consumers]
        if len(set(cids)) != len(cids):
            raise ScenarioError("duplicate consumer ids")
        if set(pids) & set(cids):
            raise ScenarioError("producer and consumer ids must not collide")
        for p in self.producers:
            if not 0 <= p.cell < cells:
                raise ScenarioError(f"producer {p.pid}: cell {p.cell} out of range")
        for c in self.consumers:
            if not 0 <= c.cell < cells:
                raise ScenarioError(f"consumer {c.cid}: cell {c.cell} out of range")
            for pid in c.producers:
                if pid not in pids:
                    raise ScenarioError(f"consumer {c.cid}: unknown producer {pid!r}")
        if self.workload.rate_per_s <= 0:
            raise ScenarioError("workload rate must be positive")
        if self.run.duration_s <= 0:
            raise ScenarioError("duration must be positive")
        if not 0.0 <= self.strategy.accuracy_q <= 1.0:
            raise ScenarioError("accuracy_q must be in [0, 1]")
        if self.strategy.accuracy_mode not in ("geometric", "forced"):
            raise ScenarioError("accuracy_mode must be 'geometric' or 'forced'")
        from .strategies import STRATEGY_IDS
        if self.strategy.id not in STRATEGY_IDS:
            raise ScenarioError(f"unknown strategy {self.strategy.id!r}; "
                                f"known: {sorted(STRATEGY_IDS)}")
        return self

    def with_strategy(self, strategy_id: str) -> "Scenario":
        return replace(self, strategy=replace(self.strategy, id=strategy_id))

    def with_accuracy(self, q: float, mode: str = "forced") -> "Scenario":
        return replace(self, strategy=replace(self.strategy, accuracy_q=q,
                                              accuracy_mode=mode))


# ---------------------------------------------------------------------------
# TOML loading

def _apply(obj, section: dict, fields: dict, where: str):
    for key, value in section.items():
        if key not in fields:
            raise ScenarioError(f"unknown key {key!r} in [{where}]")
        setattr(obj, key, fields[key](value))

_ident = lambda v: v


def load_scenario(path: str) -> Scenario:
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as e:
        raise ScenarioError(f"cannot read scenario file: {e}")
    except tomllib.TOMLDecodeError as e:
        raise ScenarioError(f"bad TOML in {path}: {e}")
    return scenario_from_dict(raw, name=path)


def scenario_from_dict(raw: dict, name: str = "custom") -> Scenario:
    sc = Scenario(name=raw.get("name", name))
    known = {"name", "topology", "mobility", "workload", "strategy",
             "run", "producers", "consumers"}
    unknown = set(raw) - known
    if unknown:
        raise ScenarioError(f"unknown top-level keys: {sorted(unknown)}")

    _apply(sc.topology, raw.get("topology", {}), {
        "grid": int, "pitch_m": float, "wireless_delay_ms": float,
        "ap_edge_delay_ms": float, "edge_core_delay_ms": float}, "topology")
    _apply(sc.mobility, raw.get("mobility", {}), {
        "v_max_kmh": float, "p_s": float, "dv_kmh": lambda v: (float(v[0]), float(v[1])),
        "dphi_rad": lambda v: (float(v[0]), float(v[1])), "epoch_s": float,
        "ref_power_dbm": float, "ref_distance_m": float, "th_dbm": float,
        "t_f": lambda v: v if v == "adaptive" else float(v),
        "t_f_bounds_s": lambda v: (float(v[0]), float(v[1])),
        "l2_ms": float, "detach_delay_ms": float, "attach_ready_ms": float}, "mobility")
    _apply(sc.workload, raw.get("workload", {}), {
        "rate_per_s": float, "retx_timeout_ms": float,
        "payload_bytes": int, "jitter": bool}, "workload")
    _apply(sc.strategy, raw.get("strategy", {}), {
        "id": str, "grace_ms": float, "ts_factor": float, "ts_ms": float,
        "zone_regrace_ms": float, "convergence_ms": float,
        "accuracy_mode": str, "accuracy_q": float}, "strategy")
    _apply(sc.run, raw.get("run", {}), {"duration_s": float, "seed": int}, "run")

    for p in raw.get("producers", []):
        extra = set(p) - {"id", "cell", "offset_m", "speed_kmh", "heading"}
        if extra:
            raise ScenarioError(f"unknown producer keys: {sorted(extra)}")
        sc.producers.append(ProducerSpec(
            pid=str(p["id"]), cell=int(p["cell"]),
            offset_m=tuple(float(x) for x in p.get("offset_m", (0.0, 0.0))),
            speed_kmh=float(p.get("speed_kmh", 0.0)),
            heading_rad=parse_heading(p.get("heading", 0.0))))
    for c in raw.get("consumers", []):
        extra = set(c) - {"id", "cell", "producers"}
        if extra:
            raise ScenarioError(f"unknown consumer keys: {sorted(extra)}")
        sc.consumers.append(ConsumerSpec(
            cid=str(c["id"]), cell=int(c["cell"]),
            producers=[str(x) for x in c.get("producers", [])]))
    return sc.validate()


# ---------------------------------------------------------------------------
# presets
#
# The calibrated layout places two static consumers and four producers so
# that every consumer/producer pair shares an edge router, and each producer
# starts 95 m from its access point heading straight at a neighbour cell at
# 25 km/h. The first move crosses the trigger distance, so every producer's
# first reattachment happens on the same deterministic schedule.

def _calibrated_nodes() -> Tuple[List[ConsumerSpec], List[ProducerSpec]]:
    consumers = [
        ConsumerSpec("c0", cell=4, producers=["p0", "p1"]),
        ConsumerSpec("c1", cell=11, producers=["p2", "p3"]),
    ]
    producers = [
        ProducerSpec("p0", cell=0, offset_m=(95.0, 0.0), speed_kmh=25.0,
                     heading_rad=parse_heading("+x")),
        ProducerSpec("p1", cell=5, offset_m=(0.0, -95.0), speed_kmh=25.0,
                     heading_rad=parse_heading("-y")),
        ProducerSpec("p2", cell=10, offset_m=(0.0, 95.0), speed_kmh=25.0,
                     heading_rad=parse_heading("+y")),
        ProducerSpec("p3", cell=15, offset_m=(-95.0, 0.0), speed_kmh=25.0,
                     heading_rad=parse_heading("-x")),
    ]
    return consumers, producers


def preset_calibrated() -> Scenario:
    consumers, producers = _calibrated_nodes()
    return Scenario(
        name="calibrated",
        strategy=StrategyConfig(accuracy_mode="forced", accuracy_q=1.0),
        producers=producers, consumers=consumers,
        run=RunConfig(duration_s=3.0))


def preset_calibrated_rtt() -> Scenario:
    sc = preset_calibrated()
    sc.name = "calibrated-rtt"
    sc.workload.jitter = False
    return sc


def preset_calibrated_q(q: float, jitter: bool = True) -> Scenario:
    sc = preset_calibrated()
    sc.name = f"calibrated-q{q:g}"
    sc.strategy.accuracy_q = q
    sc.workload.jitter = jitter
    return sc


def preset_steady() -> Scenario:
    """Same layout, nobody close to a cell edge: no reattachments happen."""
    consumers, producers = _calibrated_nodes()
    producers = [replace(p, offset_m=(0.0, 0.0), speed_kmh=0.0) for p in producers]
    return Scenario(name="steady", producers=producers, consumers=consumers,
                    workload=WorkloadConfig(jitter=False),
                    run=RunConfig(duration_s=2.0))


PRESETS = {
    "calibrated": preset_calibrated,
    "calibrated-rtt": preset_calibrated_rtt,
    "calibrated-q0": lambda: preset_calibrated_q(0.0, jitter=False),
    "calibrated-q0.5": lambda: preset_calibrated_q(0.5),
    "steady": preset_steady,
}


def get_scenario(ref: str) -> Scenario:
    """Resolve a preset name or a path to a TOML file."""
    if ref in PRESETS:
        return PRESETS[ref]().validate()
    if ref.endswith(".toml"):
        return load_scenario(ref)
    raise ScenarioError(f"unknown scenario {ref!r}; presets: {sorted(PRESETS)} "
                        f"(or pass a .toml path)")
