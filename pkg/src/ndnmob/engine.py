"""Deterministic discrete-event core.

Time is integer microseconds. The event queue is a heap ordered by
(time, insertion counter), so equal-time events run in scheduling order
and a given scenario + seed always produces the identical trace.

Randomness comes from three named substreams derived from the run seed:
mobility draws, prediction-accuracy draws (forced mode), and workload
phase jitter. Nothing else in the engine consults a RNG.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .forwarding import (Aggregate, Deliver, Drop, Forward, LOCAL, Reply,
                         Router, Unsolicited, longest_prefix_match)
from .mobility import (AccessPoint, CONNECTED, L2_HANDOVER, PREDICTING,
                       REATTACHED, check_handover_trigger, displace,
                       nearest_ap, rss, update_direction, update_speed)
from .names import Name
from .packets import (BROADCAST_SCOPE, DATA, INTEREST, INTEREST_PU,
                      INTEREST_RED, PREFIX_ANNOUNCEMENT, Packet, data,
                      interest, is_control_name)
from .scenario import Scenario
from .strategies import REGISTRY
from . import trace as tr


class SimulationError(Exception):
    """The simulation reached a state the engine cannot continue from."""


# event kinds, in dispatch order
EV_ARRIVAL = 0
EV_EPOCH = 1
EV_DETACH = 2
EV_ATTACH = 3
EV_READY = 4
EV_ORIGIN = 5
EV_RETX = 6
EV_PIT = 7
EV_TIMER = 8


@dataclass(slots=True)
class ProducerState:
    pid: str
    position: Tuple[float, float]
    speed_kmh: float
    heading_rad: float
    attached: Optional[str]
    prefix: Name
    last_ap: Optional[str] = None
    phase: str = CONNECTED
    ready: bool = True
    position_time_us: int = 0
    rss_history: List[Tuple[int, float]] = field(default_factory=list)
    forced_target: Optional[AccessPoint] = None   # fixed at prediction time
    delivered_since_attach: int = 0
    detach_time_us: Optional[int] = None
    handover_count: int = 0


@dataclass(slots=True)
class SeqState:
    first_tx_us: int
    satisfied: bool = False
    retx_done: bool = False
    flood_born: bool = False      # first requested while the pair was flooding


@dataclass(slots=True)
class PairState:
    prefix: Name
    next_seq: int = 0
    outstanding: Dict[int, SeqState] = field(default_factory=dict)
    flooding: bool = False
    flood_cells: List[int] = field(default_factory=list)


@dataclass(slots=True)
class ConsumerState:
    cid: str
    ap_id: str
    pairs: Dict[str, PairState] = field(default_factory=dict)


def _us(ms: float) -> int:
    return round(ms * 1000)


class Simulation:
    def __init__(self, scenario: Scenario, seed: Optional[int] = None):
        from .topology import Topology
        scenario.validate()
        self.scenario = scenario
        self.seed = scenario.run.seed if seed is None else seed
        self.mobility = scenario.mobility
        self.topology = Topology(scenario.topology)
        self.aps = self.topology.aps

        fibs = self.topology.build_fibs()
        self.routers: Dict[str, Router] = {}
        for node in self.topology.node_ids():
            r = Router(node)
            r.fib = fibs[node]
            self.routers[node] = r

        self.producers: Dict[str, ProducerState] = {}
        for spec in scenario.producers:
            ap = self.topology.ap_at_cell(spec.cell)
            pos = (ap.position[0] + spec.offset_m[0],
                   ap.position[1] + spec.offset_m[1])
            prefix = ("net", ap.ap_id, spec.pid)
            self.routers[ap.ap_id].fib[prefix] = spec.pid
            self.producers[spec.pid] = ProducerState(
                pid=spec.pid, position=pos, speed_kmh=spec.speed_kmh,
                heading_rad=spec.heading_rad, attached=ap.ap_id, prefix=prefix)

        self.consumers: Dict[str, ConsumerState] = {}
        self._consumers_of: Dict[str, List[str]] = {}
        for spec in scenario.consumers:
            ap = self.topology.ap_at_cell(spec.cell)
            self.topology.install_host_route(fibs, ("net", spec.cid),
                                             ap.ap_id, spec.cid)
            cons = ConsumerState(cid=spec.cid, ap_id=ap.ap_id)
            for pid in spec.producers:
                cons.pairs[pid] = PairState(prefix=self.producers[pid].prefix)
                self._consumers_of.setdefault(pid, []).append(spec.cid)
            self.consumers[spec.cid] = cons

        self.rng_mobility = random.Random(f"{self.seed}:mobility")
        self.rng_accuracy = random.Random(f"{self.seed}:prediction-accuracy")
        self.rng_workload = random.Random(f"{self.seed}:workload")

        m = scenario.mobility
        self.epoch_us = _us(m.epoch_s * 1000)
        self.l2_us = _us(m.l2_ms)
        self.detach_delay_us = _us(m.detach_delay_ms)
        self.attach_ready_us = _us(m.attach_ready_ms)
        st = scenario.strategy
        self.grace_us = _us(st.grace_ms)
        self.zone_regrace_us = _us(st.zone_regrace_ms)
        self.convergence_us = _us(st.convergence_ms)
        # copy lifetime defaults to a multiple of the quad-local steady RTT
        base_rtt_us = 2 * (2 * self.topology.wireless_delay_us
                           + 2 * _us(scenario.topology.ap_edge_delay_ms))
        self.ts_us = _us(st.ts_ms) if st.ts_ms is not None else \
            round(st.ts_factor * base_rtt_us)

        self.gap_us = round(1e6 / scenario.workload.rate_per_s)
        self.retx_us = _us(scenario.workload.retx_timeout_ms)
        self.end_us = _us(scenario.run.duration_s * 1000)

        self.strategy = REGISTRY[st.id](self)
        self.trace = tr.EventTrace()
        self.now = 0
        self._heap: list = []
        self._heap_seq = 0
        self._nonce = 0

    # ------------------------------------------------------------------
    # plumbing

    def next_nonce(self) -> int:
        self._nonce += 1
        return self._nonce

    def schedule(self, at_us: int, kind: int, payload) -> None:
        if at_us > self.end_us:
            return
        self._heap_seq += 1
        heapq.heappush(self._heap, (at_us, self._heap_seq, kind, payload))

    def timer(self, delay_us: int, op: str, args: tuple) -> None:
        self.schedule(self.now + delay_us, EV_TIMER, (op, args))

    def consumers_of(self, pid: str) -> List[str]:
        return self._consumers_of.get(pid, [])

    def send(self, frm: str, to: str, pkt: Packet, cause: Optional[str] = None) -> None:
        self.trace.add(self.now, tr.SEND, frm, pkt.kind, pkt.name, pkt.nonce,
                       hop_from=frm, hop_to=to, cause=cause)
        delay = self.topology.delay_us(frm, to)
        self._heap_seq += 1
        heapq.heappush(self._heap, (self.now + delay, self._heap_seq,
                                    EV_ARRIVAL, (pkt, to, frm)))

    def host_send(self, host_id: str, pkt: Packet, cause: Optional[str] = None) -> bool:
        prod = self.producers.get(host_id)
        if prod is not None:
            if prod.attached is None:
                self.trace.add(self.now, tr.DROP, host_id, pkt.kind, pkt.name,
                               pkt.nonce, cause="detached")
                return False
            ap = prod.attached
        else:
            ap = self.consumers[host_id].ap_id
        self.trace.add(self.now, tr.ORIGIN, host_id, pkt.kind, pkt.name,
                       pkt.nonce, cause=cause)
        self.send(host_id, ap, pkt)
        return True

    def drop(self, node: str, pkt: Packet, cause: str) -> None:
        self.trace.add(self.now, tr.DROP, node, pkt.kind, pkt.name, pkt.nonce,
                       cause=cause)

    # ------------------------------------------------------------------
    # run loop

    def run(self) -> tr.EventTrace:
        for prod in self.producers.values():
            ap = self.topology.ap(prod.attached)
            prod.rss_history.append((0, rss(ap.position, prod.position, self.mobility)))
            self.schedule(self.epoch_us, EV_EPOCH, (prod.pid,))
        for spec in self.scenario.consumers:
            for pid in spec.producers:
                offset = self.rng_workload.randrange(self.gap_us) \
                    if self.scenario.workload.jitter else 0
                self.schedule(offset, EV_ORIGIN, (spec.cid, pid))

        heap = self._heap
        while heap:
            t, _, kind, payload = heapq.heappop(heap)
            if t > self.end_us:
                break
            self.now = t
            if kind == EV_ARRIVAL:
                self._arrival(*payload)
            elif kind == EV_EPOCH:
                self._epoch(*payload)
            elif kind == EV_DETACH:
                self._detach(*payload)
            elif kind == EV_ATTACH:
                self._attach(*payload)
            elif kind == EV_READY:
                self._ready(*payload)
            elif kind == EV_ORIGIN:
                self._origin(*payload)
            elif kind == EV_RETX:
                self._retx(*payload)
            elif kind == EV_PIT:
                self._pit_expiry(*payload)
            elif kind == EV_TIMER:
                op, args = payload
                if op == "disassoc":
                    self._disassoc(*args)
                else:
                    self.strategy.on_timer(op, args)
        return self.trace

    # ------------------------------------------------------------------
    # mobility

    def _position_at(self, prod: ProducerState, t_us: int) -> Tuple[float, float]:
        dt = (t_us - prod.position_time_us) / 1e6
        if dt <= 0.0 or prod.speed_kmh == 0.0:
            return prod.position
        return displace(prod.position, prod.speed_kmh, prod.heading_rad,
                        dt, self.topology.bounds)[0]

    def _advance(self, prod: ProducerState) -> None:
        dt = (self.now - prod.position_time_us) / 1e6
        if dt > 0.0:
            prod.position, prod.heading_rad = displace(
                prod.position, prod.speed_kmh, prod.heading_rad, dt,
                self.topology.bounds)
            prod.position_time_us = self.now

    def _epoch(self, pid: str) -> None:
        prod = self.producers[pid]
        self._advance(prod)
        m = self.mobility
        p = self.rng_mobility.random()
        dv = self.rng_mobility.uniform(*m.dv_kmh)
        dphi = self.rng_mobility.uniform(*m.dphi_rad)
        prod.speed_kmh = update_speed(prod.speed_kmh, dv, p, m)
        prod.heading_rad = update_direction(prod.heading_rad, dphi)

        if prod.phase == CONNECTED and prod.attached is not None:
            ap = self.topology.ap(prod.attached)
            level = rss(ap.position, prod.position, m)
            prod.rss_history.append((self.now, level))
            if len(prod.rss_history) > 8:
                del prod.rss_history[0]
            if check_handover_trigger(level, m):
                best = nearest_ap(self.aps, prod.position, exclude=(prod.attached,))
                if math.dist(best.position, prod.position) < \
                        math.dist(ap.position, prod.position):
                    prod.phase = PREDICTING
                    self.trace.add(self.now, tr.TRIGGER, pid, hop_from=prod.attached,
                                   cause=f"rss={level:.2f}")
                    self.strategy.on_rss_trigger(prod)
                    self.schedule(self.now + self.detach_delay_us, EV_DETACH, (pid,))
        self.schedule(self.now + self.epoch_us, EV_EPOCH, (pid,))

    def _detach(self, pid: str) -> None:
        prod = self.producers[pid]
        prod.last_ap = prod.attached
        prod.attached = None
        prod.ready = False
        prod.phase = L2_HANDOVER
        prod.detach_time_us = self.now
        self.trace.add(self.now, tr.DETACH, pid, hop_from=prod.last_ap)
        self.schedule(self.now + self.topology.wireless_delay_us, EV_TIMER,
                      ("disassoc", (prod.last_ap, pid)))
        self.schedule(self.now + self.l2_us, EV_ATTACH, (pid,))

    def _disassoc(self, ap_id: str, pid: str) -> None:
        self.routers[ap_id].fib.pop(("net", ap_id, pid), None)
        self.strategy.on_producer_unreachable(ap_id, pid)

    def _attach(self, pid: str) -> None:
        prod = self.producers[pid]
        self._advance(prod)
        target = prod.forced_target
        prod.forced_target = None
        if target is None:
            target = nearest_ap(self.aps, prod.position, exclude=(prod.last_ap,))
        prod.attached = target.ap_id
        prod.phase = REATTACHED
        self.trace.add(self.now, tr.ATTACH, pid, hop_to=target.ap_id)
        self.strategy.on_attach(prod, target.ap_id)
        self.schedule(self.now + self.attach_ready_us, EV_READY, (pid,))

    def _ready(self, pid: str) -> None:
        prod = self.producers[pid]
        ap_id = prod.attached
        prod.prefix = ("net", ap_id, pid)
        self.routers[ap_id].fib[prod.prefix] = pid
        prod.ready = True
        prod.phase = CONNECTED
        prod.delivered_since_attach = 0
        prod.handover_count += 1
        self.trace.add(self.now, tr.READY, pid, hop_to=ap_id)
        self.strategy.on_reattach(prod, ap_id)

    def predicted_nap(self, pid: str, geometric_choice):
        """Resolve the anticipated AP, honoring forced-accuracy mode."""
        st = self.scenario.strategy
        if st.accuracy_mode != "forced":
            return geometric_choice
        prod = self.producers[pid]
        pos = self._position_at(prod, self.now)
        actual = nearest_ap(self.aps, pos, exclude=(prod.attached,))
        prod.forced_target = actual
        if self.rng_accuracy.random() < st.accuracy_q:
            return actual
        skip = {actual.ap_id, prod.attached}
        home_cell = self.topology.ap(prod.attached).cell
        wrong = [self.topology.ap_at_cell(c)
                 for c in self.topology.neighbor_cells(home_cell)
                 if self.topology.ap_at_cell(c).ap_id not in skip]
        if not wrong:
            wrong = [ap for ap in self.aps if ap.ap_id not in skip]
        return wrong[self.rng_accuracy.randrange(len(wrong))]

    # ------------------------------------------------------------------
    # workload

    def _origin(self, cid: str, pid: str) -> None:
        pair = self.consumers[cid].pairs[pid]
        seq = pair.next_seq
        pair.next_seq += 1
        pair.outstanding[seq] = SeqState(first_tx_us=self.now,
                                         flood_born=pair.flooding)
        self.emit_interest(cid, pid, seq)
        self.schedule(self.now + self.retx_us, EV_RETX, (cid, pid, seq))
        self.schedule(self.now + self.gap_us, EV_ORIGIN, (cid, pid))

    def emit_interest(self, cid: str, pid: str, seq: int,
                      cause: Optional[str] = None) -> None:
        cons = self.consumers[cid]
        pair = cons.pairs[pid]
        if pair.flooding and cause is None:
            cause = "flood"
        for n in self.strategy.consumer_targets(cons, pid, pair, seq):
            pkt = interest(n, self.next_nonce())
            self.trace.add(self.now, tr.ORIGIN, cid, pkt.kind, n, pkt.nonce,
                           cause=cause)
            self.send(cid, cons.ap_id, pkt)

    def _retx(self, cid: str, pid: str, seq: int) -> None:
        st = self.consumers[cid].pairs[pid].outstanding.get(seq)
        if st is None or st.satisfied or st.retx_done:
            return
        st.retx_done = True
        self.trace.add(self.now, tr.RETX, cid, cause=f"{pid}/s{seq}")
        self.emit_interest(cid, pid, seq, cause="retx")

    # ------------------------------------------------------------------
    # packet handling

    def _arrival(self, pkt: Packet, to: str, frm: str) -> None:
        if to in self.producers:
            self._producer_arrival(self.producers[to], pkt, frm)
        elif to in self.consumers:
            self._consumer_arrival(self.consumers[to], pkt, frm)
        else:
            self._router_arrival(to, pkt, frm)

    def _producer_arrival(self, prod: ProducerState, pkt: Packet, frm: str) -> None:
        if prod.attached != frm or not prod.ready:
            self.trace.add(self.now, tr.DROP, prod.pid, pkt.kind, pkt.name,
                           pkt.nonce, cause="link-down")
            return
        self.trace.add(self.now, tr.RECV, prod.pid, pkt.kind, pkt.name,
                       pkt.nonce, hop_from=frm, hop_to=prod.pid)
        if pkt.kind not in (INTEREST, INTEREST_RED):
            self.drop(prod.pid, pkt, "unexpected")
            return
        self.trace.add(self.now, tr.DELIVER, prod.pid, pkt.kind, pkt.name, pkt.nonce)
        prod.delivered_since_attach += 1
        reply = data(pkt.name, pkt.nonce,
                     payload_size=self.scenario.workload.payload_bytes)
        self.send(prod.pid, frm, reply)

    def _consumer_arrival(self, cons: ConsumerState, pkt: Packet, frm: str) -> None:
        self.trace.add(self.now, tr.RECV, cons.cid, pkt.kind, pkt.name,
                       pkt.nonce, hop_from=frm, hop_to=cons.cid)
        if pkt.kind == DATA:
            self._consumer_data(cons, pkt)
        elif pkt.kind == INTEREST and is_control_name(pkt.name):
            self.trace.add(self.now, tr.DELIVER, cons.cid, pkt.kind, pkt.name,
                           pkt.nonce, cause="ctl")
            self.strategy.on_consumer_control(cons.cid, pkt)
        else:
            self.drop(cons.cid, pkt, "unexpected")

    def _consumer_data(self, cons: ConsumerState, pkt: Packet) -> None:
        n = pkt.name
        pair = cons.pairs.get(n[2]) if len(n) >= 4 else None
        try:
            seq = int(n[3][1:]) if pair is not None else None
        except ValueError:
            seq = None
        if pair is None or seq is None:
            self.drop(cons.cid, pkt, "unexpected")
            return
        st = pair.outstanding.get(seq)
        if st is None or st.satisfied:
            self.drop(cons.cid, pkt, "dup-data")
            return
        st.satisfied = True
        self.trace.add(self.now, tr.DELIVER, cons.cid, pkt.kind, n, pkt.nonce)
        # Data for a request first sent while flooding reveals the producer's
        # new location; data for an older request is a late answer from the
        # previous attachment and says nothing about where it went.
        if not pair.flooding or st.flood_born:
            pair.flooding = False
            pair.prefix = n[:3]

    def _router_arrival(self, node: str, pkt: Packet, frm: str) -> None:
        self.trace.add(self.now, tr.RECV, node, pkt.kind, pkt.name, pkt.nonce,
                       hop_from=frm, hop_to=node)
        router = self.routers[node]
        if pkt.kind == PREFIX_ANNOUNCEMENT:
            self._announcement(node, pkt, frm)
            return
        if pkt.kind == INTEREST_PU or (pkt.kind == INTEREST and
                                       is_control_name(pkt.name)):
            face = longest_prefix_match(router.fib, pkt.name)
            if face == LOCAL:
                self.trace.add(self.now, tr.DELIVER, node, pkt.kind, pkt.name,
                               pkt.nonce, cause="ctl")
                if pkt.kind == INTEREST_PU:
                    self.strategy.on_interest_pu(node, pkt)
                else:
                    self.strategy.on_ap_control(node, pkt)
            elif face is not None:
                self.send(node, face, pkt)
            else:
                self.drop(node, pkt, "no-route")
            return
        if pkt.kind == INTEREST:
            red = router.maybe_rewrite(pkt)
            if red is not None:
                actions = router.process_interest_red(red, frm, self.now,
                                                      add_in_face=True)
            else:
                actions = router.process_interest(pkt, frm, self.now)
        elif pkt.kind == INTEREST_RED:
            actions = router.process_interest_red(pkt, frm, self.now)
        elif pkt.kind == DATA:
            actions = router.process_data(pkt, frm, self.now)
        else:
            raise SimulationError(f"router {node} got unhandled kind {pkt.kind}")
        self.apply_actions(node, actions)

    def apply_actions(self, node: str, actions) -> None:
        router = self.routers[node]
        for act in actions:
            if isinstance(act, Forward):
                self.send(node, act.face, act.packet)
            elif isinstance(act, Reply):
                self.send(node, act.face, act.packet, cause="cs")
            elif isinstance(act, Deliver):
                if not self.strategy.on_local_interest(node, act.packet, act.in_face):
                    router.remove_entry(act.packet.name)
                    self.drop(node, act.packet, "no-producer")
            elif isinstance(act, Aggregate):
                self.trace.add(self.now, tr.AGGREGATE, node, None, act.name)
            elif isinstance(act, Drop):
                self.drop(node, act.packet, act.cause)
            elif isinstance(act, Unsolicited):
                if not self.strategy.on_unsolicited_data(node, act.packet):
                    self.drop(node, act.packet, "unsolicited")
            else:
                raise SimulationError(f"unknown action {act!r}")
        if router.new_entries:
            for entry in router.new_entries:
                self.schedule(entry.expiry_us, EV_PIT, (node, entry))
            router.new_entries.clear()

    def _pit_expiry(self, node: str, entry) -> None:
        if self.routers[node].expire_entry(entry, self.now):
            self.trace.add(self.now, tr.EXPIRE, node, None, entry.name,
                           cause="pit")

    def _announcement(self, node: str, pkt: Packet, frm: str) -> None:
        router = self.routers[node]
        seen_key = ("#ann",) + pkt.announced_prefix
        if router.nonce_seen(seen_key, pkt.nonce):
            self.drop(node, pkt, "dup-announce")
            return
        router.remember_nonce(seen_key, pkt.nonce)
        if pkt.name != BROADCAST_SCOPE:
            face = longest_prefix_match(router.fib, pkt.name)
            if face is not None and face != LOCAL:
                self.send(node, face, pkt)
                return
            # fall through: scope terminates here, handle like a flooded copy
        router.fib[pkt.announced_prefix] = frm
        if len(pkt.announced_prefix) >= 3:
            pid = pkt.announced_prefix[2]
            if pid in router.redirects:
                router.redirects[pid] = pkt.announced_prefix[:2]
        self.strategy.on_prefix_announcement(node, pkt)
        if pkt.name == BROADCAST_SCOPE:
            for nb in self.topology.wired_neighbors[node]:
                if nb != frm:
                    self.send(node, nb, pkt)
