"""Forwarding-by-the-old-AP baseline.

The previous access point queues interests for a departed producer. Once
the producer reports its new location (a control interest sent right after
the radio comes back up), the queue is drained: each held name is re-issued
as a fresh interest under the new registration, and a translation table
maps the answers back onto the held state. No other router learns anything,
so all later traffic keeps detouring through the old access point; chained
reattachments stack one detour per hop.
"""

from __future__ import annotations

from ..forwarding import longest_prefix_match
from ..names import rewrite_name
from ..packets import DATA, Packet, interest
from ..trace import FLUSH, STORE
from .base import Strategy


class InterestForwarding(Strategy):
    id = "interest-forwarding"

    def __init__(self, sim):
        super().__init__(sim)
        self.queueing = {}    # (ap_id, pid) -> [held names]
        self.tunnel_to = {}   # (ap_id, pid) -> current 2-component prefix
        self.tunnel_map = {}  # (ap_id, rewritten name) -> held name

    def on_producer_unreachable(self, ap_id, pid):
        sim = self.sim
        held = []
        for entry in sim.routers[ap_id].entries_under(("net", ap_id, pid)):
            held.append(entry.name)
            sim.trace.add(sim.now, STORE, ap_id, "interest", entry.name,
                          entry.in_faces[0][1], cause="queue")
        self.queueing[(ap_id, pid)] = held
        self.tunnel_to.pop((ap_id, pid), None)

    def on_local_interest(self, node_id, pkt, in_face):
        if len(pkt.name) < 3:
            return False
        key = (node_id, pkt.name[2])
        if key in self.queueing:
            self.queueing[key].append(pkt.name)
            self.sim.trace.add(self.sim.now, STORE, node_id, "interest",
                               pkt.name, pkt.nonce, cause="queue")
            return True
        if key in self.tunnel_to:
            self._tunnel(node_id, pkt.name)
            return True
        return False

    def _tunnel(self, ap_id, held_name):
        sim = self.sim
        prefix = self.tunnel_to[(ap_id, held_name[2])]
        new_name = rewrite_name(held_name, held_name[:2], prefix)
        self.tunnel_map[(ap_id, new_name)] = held_name
        router = sim.routers[ap_id]
        face = longest_prefix_match(router.fib, new_name)
        if face is None:
            sim.drop(ap_id, interest(new_name, 0), "no-route")
            return
        sim.send(ap_id, face, interest(new_name, sim.next_nonce()), cause="tunnel")

    def on_attach(self, prod, ap_id):
        # tell the old AP where to forward; sent before registration on
        # purpose: the radio is up, and the queue should start moving early
        name = ("net", prod.last_ap, "ctl", "ifup", prod.pid, ap_id)
        self.sim.host_send(prod.pid, interest(name, self.sim.next_nonce()))

    def on_ap_control(self, ap_id, pkt):
        if len(pkt.name) < 6 or pkt.name[3] != "ifup":
            return
        pid, new_ap = pkt.name[4], pkt.name[5]
        self.tunnel_to[(ap_id, pid)] = ("net", new_ap)
        for held in self.queueing.pop((ap_id, pid), []):
            self.sim.trace.add(self.sim.now, FLUSH, ap_id, "interest", held,
                               cause="queue-drain")
            self._tunnel(ap_id, held)

    def on_unsolicited_data(self, node_id, pkt):
        held = self.tunnel_map.pop((node_id, pkt.name), None)
        if held is None:
            return False
        renamed = Packet(DATA, held, pkt.nonce, payload_size=pkt.payload_size)
        router = self.sim.routers[node_id]
        self.sim.apply_actions(node_id, router.satisfy_local(renamed, self.sim.now))
        return True
