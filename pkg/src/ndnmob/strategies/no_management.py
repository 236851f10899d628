"""Baseline with no reattachment handling at all.

The previous access point simply drops traffic for a departed producer
until plain routing catches up, modeled as a fixed convergence delay after
the radio comes back up. When it fires, consumers start using the
producer's new registration and the old AP stops blackholing.
"""

from __future__ import annotations

from ..trace import CONVERGE, DROP
from .base import Strategy


class NoManagement(Strategy):
    id = "no-management"

    def __init__(self, sim):
        super().__init__(sim)
        self.outage = {}   # (ap_id, pid) -> detach time

    def on_producer_unreachable(self, ap_id, pid):
        sim = self.sim
        self.outage[(ap_id, pid)] = sim.now
        router = sim.routers[ap_id]
        for entry in router.entries_under(("net", ap_id, pid)):
            router.remove_entry(entry.name)
            sim.trace.add(sim.now, DROP, ap_id, "interest", entry.name,
                          entry.in_faces[0][1], cause="outage")

    def on_local_interest(self, node_id, pkt, in_face):
        if len(pkt.name) < 3:
            return False
        if (node_id, pkt.name[2]) not in self.outage:
            return False
        self.sim.routers[node_id].remove_entry(pkt.name)
        self.sim.drop(node_id, pkt, "outage")
        return True

    def on_attach(self, prod, ap_id):
        self.sim.timer(self.sim.convergence_us, "nm-converge",
                       (prod.pid, prod.last_ap))

    def on_timer(self, op, args):
        if op != "nm-converge":
            return
        pid, old_ap = args
        sim = self.sim
        self.outage.pop((old_ap, pid), None)
        prod = sim.producers[pid]
        sim.trace.add(sim.now, CONVERGE, pid, cause=f"via={old_ap}")
        for cid in sim.consumers_of(pid):
            sim.consumers[cid].pairs[pid].prefix = prod.prefix
