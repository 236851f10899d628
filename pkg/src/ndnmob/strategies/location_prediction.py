"""Anticipatory reattachment handling built on position prediction.

Sequence for one reattachment:

1. At the signal trigger the producer dead-reckons where it will be and
   sends a position update to its current access point.
2. The AP picks the access point closest to the predicted position. From
   the moment the producer drops off, pending and newly arriving interests
   for it are renamed toward that AP and forwarded into the network as
   redirected interests; a copy of each is stored for a bounded time.
3. The anticipated AP buffers arriving redirected interests until the
   producer registers, then hands them over; satisfied state along the
   path was renamed by the redirects, so data flows straight to consumers
   without detouring through the old AP.
4. If nothing reaches the producer shortly after registration, the
   prediction was wrong: the producer floods a reachability announcement.
   Every AP still holding live copies or buffered redirects re-issues them
   toward the announced prefix, and the stale shortcuts heal.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..forwarding import longest_prefix_match
from ..mobility import nearest_ap, predict_future_position, prediction_horizon_s
from ..packets import BROADCAST_SCOPE, INTEREST_RED, interest_pu, prefix_announcement
from ..trace import DISCARD, FLUSH, STORE
from .base import Strategy


def select_nap(aps, predicted_point, exclude=()):
    """Access point closest to the predicted position (current one excluded)."""
    return nearest_ap(aps, predicted_point, exclude=exclude)


@dataclass(slots=True)
class _StoredCopy:
    orig_name: tuple
    nonce: int
    alive: bool = True


@dataclass(slots=True)
class _BufferedRed:
    pkt: object
    alive: bool = True


class LocationPrediction(Strategy):
    id = "location-prediction"

    def __init__(self, sim):
        super().__init__(sim)
        self.redirect_to = {}   # (ap_id, pid) -> anticipated 2-component prefix
        self.active = set()     # (ap_id, pid) currently redirecting
        self.stored = {}        # (ap_id, pid) -> [_StoredCopy] at the old AP
        self.buffered = {}      # (ap_id, pid) -> [_BufferedRed] at the new AP

    # producer side ------------------------------------------------------

    def on_rss_trigger(self, prod):
        sim = self.sim
        t_f = prediction_horizon_s(prod, sim.mobility, sim.now)
        coords = predict_future_position(prod.position, prod.speed_kmh,
                                         prod.heading_rad, t_f,
                                         sim.topology.bounds)
        name = ("net", prod.attached, "ctl", "pu", prod.pid)
        sim.host_send(prod.pid, interest_pu(name, sim.next_nonce(), coords))

    def on_reattach(self, prod, ap_id):
        key = (ap_id, prod.pid)
        for buf in self.buffered.pop(key, []):
            if not buf.alive:
                continue
            buf.alive = False
            self.sim.trace.add(self.sim.now, FLUSH, ap_id, buf.pkt.kind,
                               buf.pkt.name, buf.pkt.nonce, cause="buffer")
            self.sim.send(ap_id, prod.pid, buf.pkt, cause="flush")
        self.sim.timer(self.sim.grace_us, "lp-grace", (prod.pid,))

    # old access point -----------------------------------------------------

    def on_interest_pu(self, ap_id, pkt):
        pid = pkt.name[4]
        geo = select_nap(self.sim.aps, pkt.predicted_coords, exclude=(ap_id,))
        nap = self.sim.predicted_nap(pid, geo)
        self.redirect_to[(ap_id, pid)] = ("net", nap.ap_id)

    def on_producer_unreachable(self, ap_id, pid):
        key = (ap_id, pid)
        if key not in self.redirect_to:
            return
        self.active.add(key)
        router = self.sim.routers[ap_id]
        for entry in router.entries_under(("net", ap_id, pid)):
            self._redirect(ap_id, pid, entry.name, entry.in_faces[0][1])

    def on_local_interest(self, node_id, pkt, in_face):
        if len(pkt.name) < 3:
            return False
        pid = pkt.name[2]
        if pkt.kind == INTEREST_RED:
            # anticipated AP, producer not registered yet: hold the redirect
            key = (node_id, pid)
            bucket = self.buffered.setdefault(key, [])
            bucket.append(_BufferedRed(pkt))
            self.sim.trace.add(self.sim.now, STORE, node_id, pkt.kind,
                               pkt.name, pkt.nonce, cause="buffer")
            self.sim.timer(self.sim.ts_us, "lp-buffer-drop",
                           (node_id, pid, len(bucket) - 1))
            return True
        if (node_id, pid) in self.active:
            self._redirect(node_id, pid, pkt.name, pkt.nonce)
            return True
        return False

    def _redirect(self, ap_id, pid, orig_name, nonce):
        sim = self.sim
        router = sim.routers[ap_id]
        red = router.redirect_entry(orig_name, self.redirect_to[(ap_id, pid)], nonce)
        bucket = self.stored.setdefault((ap_id, pid), [])
        bucket.append(_StoredCopy(orig_name, nonce))
        sim.trace.add(sim.now, STORE, ap_id, "interest", orig_name, nonce,
                      cause="copy")
        sim.timer(sim.ts_us, "lp-store-drop", (ap_id, pid, len(bucket) - 1))
        face = longest_prefix_match(router.fib, red.name)
        if face is None:
            sim.drop(ap_id, red, "no-route")
            return
        sim.send(ap_id, face, red, cause="redirect")

    # recovery ---------------------------------------------------------------

    def on_prefix_announcement(self, node_id, pkt):
        prefix = pkt.announced_prefix
        if len(prefix) < 3:
            return
        pid, new_prefix = prefix[2], prefix[:2]
        key = (node_id, pid)
        sim = self.sim
        router = sim.routers[node_id]
        if key in self.active:
            self.redirect_to[key] = new_prefix
            for copy in self.stored.get(key, []):
                if not copy.alive:
                    continue
                copy.alive = False
                red = router.redirect_entry(copy.orig_name, new_prefix,
                                            sim.next_nonce())
                face = longest_prefix_match(router.fib, red.name)
                if face is not None:
                    sim.send(node_id, face, red, cause="recover")
        for buf in self.buffered.get(key, []):
            if not buf.alive or buf.pkt.name[:2] == new_prefix:
                continue
            buf.alive = False
            red = router.redirect_entry(buf.pkt.name, new_prefix, sim.next_nonce())
            face = longest_prefix_match(router.fib, red.name)
            if face is not None:
                sim.send(node_id, face, red, cause="recover")

    # timers --------------------------------------------------------------

    def on_timer(self, op, args):
        if op == "lp-grace":
            (pid,) = args
            prod = self.sim.producers[pid]
            if prod.ready and prod.delivered_since_attach == 0:
                pkt = prefix_announcement(BROADCAST_SCOPE, self.sim.next_nonce(),
                                          prod.prefix)
                self.sim.host_send(pid, pkt)
        elif op == "lp-buffer-drop":
            node_id, pid, idx = args
            bucket = self.buffered.get((node_id, pid))
            if bucket is None or idx >= len(bucket) or not bucket[idx].alive:
                return
            buf = bucket[idx]
            buf.alive = False
            self.sim.routers[node_id].remove_entry(buf.pkt.name)
            self.sim.trace.add(self.sim.now, DISCARD, node_id, buf.pkt.kind,
                               buf.pkt.name, buf.pkt.nonce, cause="buffer-expired")
        elif op == "lp-store-drop":
            node_id, pid, idx = args
            bucket = self.stored.get((node_id, pid))
            if bucket is None or idx >= len(bucket) or not bucket[idx].alive:
                return
            copy = bucket[idx]
            copy.alive = False
            self.sim.trace.add(self.sim.now, DISCARD, node_id, "interest",
                               copy.orig_name, copy.nonce, cause="copy-expired")
