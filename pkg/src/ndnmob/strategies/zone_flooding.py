"""Consumer-driven flooding baseline.

Leaving producers tell their consumers which cell they are heading for.
Consumers then address every request to all access points in that zone
(the cell plus its grid neighbours) at once. APs without a matching
registration ignore their copy; the first answered copy ends the flood
and pins the pair to the answering access point. A second notification
goes out if the producer registers and still sees no traffic shortly
after, covering the case where it ended up outside the announced zone.
"""

from __future__ import annotations

from ..mobility import nearest_ap
from ..packets import interest
from ..topology import ap_name
from .base import Strategy


class ZoneFlooding(Strategy):
    id = "zone-flooding"

    def _notify(self, prod, anchor_cell: int):
        sim = self.sim
        for cid in sim.consumers_of(prod.pid):
            name = ("net", cid, "ctl", "ho", prod.pid, str(anchor_cell))
            sim.host_send(prod.pid, interest(name, sim.next_nonce()))

    def on_rss_trigger(self, prod):
        target = nearest_ap(self.sim.aps, prod.position, exclude=(prod.attached,))
        self._notify(prod, target.cell)

    def on_consumer_control(self, cid, pkt):
        if len(pkt.name) < 6 or pkt.name[3] != "ho":
            return
        pid, anchor = pkt.name[4], int(pkt.name[5])
        pair = self.sim.consumers[cid].pairs.get(pid)
        if pair is None:
            return
        pair.flooding = True
        pair.flood_cells = self.sim.topology.zone_cells(anchor)
        for seq, st in pair.outstanding.items():
            if not st.satisfied:
                self.sim.emit_interest(cid, pid, seq, cause="flood")

    def consumer_targets(self, consumer, pid, pair, seq):
        if not pair.flooding:
            return [pair.prefix + (f"s{seq}",)]
        return [("net", ap_name(cell), pid, f"s{seq}") for cell in pair.flood_cells]

    def on_local_interest(self, node_id, pkt, in_face):
        # zone copy at an AP where the producer is not (or not yet) present
        self.sim.routers[node_id].remove_entry(pkt.name)
        self.sim.drop(node_id, pkt, "zone-ignore")
        return True

    def on_reattach(self, prod, ap_id):
        self.sim.timer(self.sim.zone_regrace_us, "zf-renotify", (prod.pid,))

    def on_timer(self, op, args):
        if op != "zf-renotify":
            return
        (pid,) = args
        prod = self.sim.producers[pid]
        if prod.ready and prod.delivered_since_attach == 0:
            self._notify(prod, self.sim.topology.ap(prod.attached).cell)
