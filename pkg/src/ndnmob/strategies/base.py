"""Strategy interface: how access points and hosts react to reattachment.

The engine owns the event loop, the routers and the radio; a strategy gets
hooks at the decision points. All hooks are optional. Strategies must be
deterministic: any randomness they need comes from the engine's named
substreams.
"""

from __future__ import annotations

from typing import List, Optional

from ..names import Name


class Strategy:
    id = "base"

    def __init__(self, sim):
        self.sim = sim

    # producer-side events ------------------------------------------------

    def on_rss_trigger(self, prod) -> None:
        """Producer decided to leave its access point (still attached)."""

    def on_attach(self, prod, ap_id: str) -> None:
        """Radio is up at the new access point (registration still pending)."""

    def on_reattach(self, prod, ap_id: str) -> None:
        """Registration live: the producer is reachable again."""

    # access-point events --------------------------------------------------

    def on_interest_pu(self, ap_id: str, pkt) -> None:
        """Position-update control packet arrived at the producer's AP."""

    def on_producer_unreachable(self, ap_id: str, pid: str) -> None:
        """The AP learned that an attached producer dropped off."""

    def on_local_interest(self, node_id: str, pkt, in_face: str) -> bool:
        """An interest terminated at this AP with no local producer.

        Return True when consumed (queued, redirected, dropped with its own
        cause); False lets the engine drop it as unroutable.
        """
        return False

    def on_unsolicited_data(self, node_id: str, pkt) -> bool:
        """Data without matching state. True when the strategy used it."""
        return False

    def on_prefix_announcement(self, node_id: str, pkt) -> None:
        """A flooded reachability announcement passed this router."""

    def on_ap_control(self, ap_id: str, pkt) -> None:
        """Control interest addressed to this AP's own namespace."""

    # consumer-side events -------------------------------------------------

    def on_consumer_control(self, cid: str, pkt) -> None:
        """Control interest addressed to a consumer."""

    def consumer_targets(self, consumer, pid: str, pair, seq: int) -> List[Name]:
        """Names a consumer sends for sequence `seq` of one pair (1+ copies)."""
        return [pair.prefix + (f"s{seq}",)]

    # timers ----------------------------------------------------------------

    def on_timer(self, op: str, args: tuple) -> None:
        pass
