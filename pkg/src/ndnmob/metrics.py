"""Measurements over event traces.

Everything here is computed from trace rows alone, never from simulator
internals, so any metric can be recomputed offline from an exported CSV
and must come out identical.

Conventions used when reading a trace:

* A producer "reconnection" latency is the gap between a radio detach and
  the first interest the producer delivers afterwards (from any consumer).
  If no interest arrives before the next detach, the handover dropped the
  session.
* A round trip is measured from the first transmission of a sequence
  number to the data delivery at the consumer; retransmissions and flood
  copies do not restart the clock.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import trace as tr
from .packets import CTL


def _is_ctl(n) -> bool:
    return n is not None and len(n) > 2 and n[2] == CTL


def handover_events(trace: tr.EventTrace) -> List[dict]:
    """One record per radio detach, in detach order.

    Keys: pid, trigger_us, detach_us, attach_us, ready_us, latency_us
    (None when no interest reached the producer before the next detach),
    converge_us (None unless a routing-convergence row exists).
    """
    detaches: Dict[str, List[int]] = defaultdict(list)
    attaches: Dict[str, List[int]] = defaultdict(list)
    readies: Dict[str, List[int]] = defaultdict(list)
    triggers: Dict[str, List[int]] = defaultdict(list)
    converges: Dict[str, List[int]] = defaultdict(list)
    delivers: Dict[str, List[int]] = defaultdict(list)

    for t, event, node, kind, n, nonce, hf, ht, cause in trace.rows:
        if event == tr.DETACH:
            detaches[node].append(t)
        elif event == tr.ATTACH:
            attaches[node].append(t)
        elif event == tr.READY:
            readies[node].append(t)
        elif event == tr.TRIGGER:
            triggers[node].append(t)
        elif event == tr.CONVERGE:
            converges[node].append(t)
        elif event == tr.DELIVER and kind in ("interest", "interest_red") \
                and cause is None:
            delivers[node].append(t)

    def first_in(values: List[int], lo: int, hi: float) -> Optional[int]:
        for v in values:
            if lo <= v < hi:
                return v
        return None

    out: List[dict] = []
    for pid, dts in detaches.items():
        for i, d in enumerate(dts):
            end = dts[i + 1] if i + 1 < len(dts) else float("inf")
            hit = first_in(delivers[pid], d, end)
            trig = None
            for v in triggers[pid]:
                if v <= d:
                    trig = v
            out.append({
                "pid": pid,
                "trigger_us": trig,
                "detach_us": d,
                "attach_us": first_in(attaches[pid], d, end),
                "ready_us": first_in(readies[pid], d, end),
                "latency_us": None if hit is None else hit - d,
                "converge_us": first_in(converges[pid], d, end),
            })
    out.sort(key=lambda e: e["detach_us"])
    return out


def handover_latencies_ms(trace: tr.EventTrace) -> List[float]:
    return [e["latency_us"] / 1000.0 for e in handover_events(trace)
            if e["latency_us"] is not None]


def dropped_sessions(trace: tr.EventTrace) -> int:
    return sum(1 for e in handover_events(trace) if e["latency_us"] is None)


def outage_ms(trace: tr.EventTrace) -> List[float]:
    """Detach-to-convergence gaps (only present without a management scheme)."""
    return [(e["converge_us"] - e["detach_us"]) / 1000.0
            for e in handover_events(trace) if e["converge_us"] is not None]


def rtt_samples(trace: tr.EventTrace) -> List[dict]:
    """Per requested sequence: first transmission time and round trip.

    Keys: cid, pid, seq, t0_us, rtt_us (None when never answered).
    """
    first_tx: Dict[tuple, int] = {}
    order: List[tuple] = []
    rtt: Dict[tuple, int] = {}
    for t, event, node, kind, n, nonce, hf, ht, cause in trace.rows:
        if event == tr.ORIGIN and kind == "interest" and not _is_ctl(n) \
                and len(n) >= 4:
            key = (node, n[2], n[3])
            if key not in first_tx:
                first_tx[key] = t
                order.append(key)
        elif event == tr.DELIVER and kind == "data" and len(n) >= 4:
            key = (node, n[2], n[3])
            if key in first_tx and key not in rtt:
                rtt[key] = t - first_tx[key]
    return [{"cid": c, "pid": p, "seq": s, "t0_us": first_tx[(c, p, s)],
             "rtt_us": rtt.get((c, p, s))} for c, p, s in order]


def _mean_rtt_ms(samples: Sequence[dict]) -> Optional[float]:
    xs = [s["rtt_us"] for s in samples if s["rtt_us"] is not None]
    return float(np.mean(xs)) / 1000.0 if xs else None


def steady_rtt_ms(trace: tr.EventTrace) -> Optional[float]:
    """Mean round trip over requests sent before the first handover trigger."""
    first_trigger = None
    for t, event, *_ in trace.rows:
        if event == tr.TRIGGER:
            first_trigger = t
            break
    samples = rtt_samples(trace)
    if first_trigger is not None:
        samples = [s for s in samples if s["t0_us"] < first_trigger]
    return _mean_rtt_ms(samples)


def rtt_between_ms(trace: tr.EventTrace, start_ms: float,
                   end_ms: float = float("inf")) -> Optional[float]:
    """Mean round trip over requests first sent inside [start_ms, end_ms)."""
    lo, hi = start_ms * 1000, end_ms * 1000
    return _mean_rtt_ms([s for s in rtt_samples(trace)
                         if lo <= s["t0_us"] < hi])


def content_to_interest_ratio(trace: tr.EventTrace) -> float:
    tx, delivered = tr.data_interest_counts(trace)
    return delivered / tx if tx else 1.0


def control_counts(trace: tr.EventTrace) -> Dict[str, int]:
    c = Counter()
    for t, event, node, kind, n, nonce, hf, ht, cause in trace.rows:
        if event == tr.ORIGIN:
            if kind == "interest_pu":
                c["position_updates"] += 1
            elif kind == "prefix_announcement":
                c["announcements"] += 1
            elif kind == "interest" and _is_ctl(n):
                c[f"ctl_{n[3]}"] += 1
            elif kind == "interest" and cause == "flood":
                c["flood_copies"] += 1
        elif event == tr.SEND and kind == "prefix_announcement":
            c["announcement_hops"] += 1
        elif event == tr.RETX:
            c["retransmissions"] += 1
        elif event == tr.AGGREGATE:
            c["aggregations"] += 1
    return dict(c)


def drop_counts(trace: tr.EventTrace) -> Dict[str, int]:
    return dict(Counter(row[8] for row in trace.rows if row[1] == tr.DROP))


def build_report(trace: tr.EventTrace, strategy_id: Optional[str] = None,
                 seed: Optional[int] = None) -> dict:
    events = handover_events(trace)
    lats = [e["latency_us"] / 1000.0 for e in events if e["latency_us"] is not None]
    samples = rtt_samples(trace)
    tx, delivered = tr.data_interest_counts(trace)
    return {
        "strategy": strategy_id,
        "seed": seed,
        "handovers": len(events),
        "handover_latency_ms": lats,
        "dropped_sessions": sum(1 for e in events if e["latency_us"] is None),
        "outage_ms": [(e["converge_us"] - e["detach_us"]) / 1000.0
                      for e in events if e["converge_us"] is not None],
        "steady_rtt_ms": steady_rtt_ms(trace),
        "mean_rtt_ms": _mean_rtt_ms(samples),
        "unanswered": sum(1 for s in samples if s["rtt_us"] is None),
        "interests_tx": tx,
        "data_delivered": delivered,
        "content_to_interest": delivered / tx if tx else 1.0,
        "control": control_counts(trace),
        "drops": drop_counts(trace),
    }


def _stats(xs: Sequence[float]) -> Optional[dict]:
    if not xs:
        return None
    a = np.asarray(xs, dtype=float)
    return {"n": int(a.size), "mean": float(a.mean()), "std": float(a.std()),
            "min": float(a.min()), "max": float(a.max())}


def aggregate_reports(reports: Sequence[dict]) -> dict:
    """Pool per-run reports: latency samples are pooled across runs, scalar
    metrics are summarized over runs."""
    pooled_lat: List[float] = []
    pooled_outage: List[float] = []
    ratios: List[float] = []
    steady: List[float] = []
    control = Counter()
    drops = Counter()
    handovers = 0
    dropped = 0
    for r in reports:
        pooled_lat.extend(r["handover_latency_ms"])
        pooled_outage.extend(r["outage_ms"])
        ratios.append(r["content_to_interest"])
        if r["steady_rtt_ms"] is not None:
            steady.append(r["steady_rtt_ms"])
        control.update(r["control"])
        drops.update(r["drops"])
        handovers += r["handovers"]
        dropped += r["dropped_sessions"]
    return {
        "runs": len(reports),
        "handovers": handovers,
        "dropped_sessions": dropped,
        "latency_ms": _stats(pooled_lat),
        "outage_ms": _stats(pooled_outage),
        "content_to_interest": _stats(ratios),
        "steady_rtt_ms": _stats(steady),
        "control": dict(control),
        "drops": dict(drops),
    }
