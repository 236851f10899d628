"""Grid radio layout over a two-tier wired backhaul.

A g x g grid of access points (pitch 200 m by default) is split into 2x2
quads; each quad hangs off one edge router and all edge routers meet at a
single core. Link delays are chosen so that a consumer and a producer
attached inside the same quad see a 25 ms one-way path:

    wireless 0.5 + AP-edge 12 + edge-AP 12 + wireless 0.5 = 25 ms

and crossing the core adds 2 ms per edge-core hop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .forwarding import LOCAL
from .mobility import AccessPoint
from .names import Name

CORE = "core"


@dataclass(slots=True)
class TopologyParams:
    grid: int = 4
    pitch_m: float = 200.0
    wireless_delay_ms: float = 0.5
    ap_edge_delay_ms: float = 12.0
    edge_core_delay_ms: float = 2.0


def ap_name(cell: int) -> str:
    return f"ap{cell:02d}"


class Topology:
    def __init__(self, params: Optional[TopologyParams] = None):
        self.params = params or TopologyParams()
        g = self.params.grid
        if g < 2 or g % 2:
            raise ValueError("grid size must be an even integer >= 2")
        pitch = self.params.pitch_m
        self.bounds: Tuple[float, float] = (g * pitch, g * pitch)

        self.aps: List[AccessPoint] = []
        self.edge_of: Dict[str, str] = {}
        for cell in range(g * g):
            r, c = divmod(cell, g)
            pos = (pitch * c + pitch / 2.0, pitch * r + pitch / 2.0)
            ap = AccessPoint(ap_name(cell), pos, cell)
            self.aps.append(ap)
            self.edge_of[ap.ap_id] = f"e{(r // 2) * (g // 2) + (c // 2)}"
        self.edges: List[str] = sorted({e for e in self.edge_of.values()})
        self._by_id = {ap.ap_id: ap for ap in self.aps}

        self.wireless_delay_us = round(self.params.wireless_delay_ms * 1000)
        d1 = round(self.params.ap_edge_delay_ms * 1000)
        d2 = round(self.params.edge_core_delay_ms * 1000)
        self.wired: Dict[Tuple[str, str], int] = {}
        self.wired_neighbors: Dict[str, List[str]] = {n: [] for n in self.node_ids()}
        for ap in self.aps:
            self._add_link(ap.ap_id, self.edge_of[ap.ap_id], d1)
        for e in self.edges:
            self._add_link(e, CORE, d2)

    def _add_link(self, a: str, b: str, delay_us: int) -> None:
        self.wired[(a, b)] = delay_us
        self.wired[(b, a)] = delay_us
        self.wired_neighbors[a].append(b)
        self.wired_neighbors[b].append(a)

    # lookups ------------------------------------------------------------

    def node_ids(self) -> List[str]:
        return [ap.ap_id for ap in self.aps] + self.edges + [CORE]

    def ap(self, ap_id: str) -> AccessPoint:
        return self._by_id[ap_id]

    def ap_at_cell(self, cell: int) -> AccessPoint:
        return self.aps[cell]

    def delay_us(self, a: str, b: str) -> int:
        d = self.wired.get((a, b))
        return self.wireless_delay_us if d is None else d

    def neighbor_cells(self, cell: int) -> List[int]:
        g = self.params.grid
        r, c = divmod(cell, g)
        out = []
        for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            rr, cc = r + dr, c + dc
            if 0 <= rr < g and 0 <= cc < g:
                out.append(rr * g + cc)
        return out

    def zone_cells(self, anchor_cell: int) -> List[int]:
        """Anchor cell plus its in-grid 4-neighborhood, ascending."""
        return sorted([anchor_cell] + self.neighbor_cells(anchor_cell))

    def next_hop_toward_ap(self, node_id: str, ap_id: str) -> str:
        if node_id == ap_id:
            return LOCAL
        if node_id in self._by_id:
            return self.edge_of[node_id]
        if node_id == CORE:
            return self.edge_of[ap_id]
        # edge router
        return ap_id if self.edge_of[ap_id] == node_id else CORE

    def build_fibs(self) -> Dict[str, Dict[Name, str]]:
        """Static routes: every router can reach every access-point prefix."""
        fibs: Dict[str, Dict[Name, str]] = {}
        for node in self.node_ids():
            fib: Dict[Name, str] = {}
            for ap in self.aps:
                prefix = ("net", ap.ap_id)
                fib[prefix] = self.next_hop_toward_ap(node, ap.ap_id)
            fibs[node] = fib
        return fibs

    def install_host_route(self, fibs: Dict[str, Dict[Name, str]],
                           prefix: Name, ap_id: str, host_face: str) -> None:
        """Route a host prefix (e.g. a consumer's) toward its access point."""
        for node, fib in fibs.items():
            hop = self.next_hop_toward_ap(node, ap_id)
            fib[prefix] = host_face if hop == LOCAL else hop

    def one_way_us(self, ap_a: str, ap_b: str) -> int:
        """Host-to-host propagation between two cells (both ends wireless)."""
        if ap_a == ap_b:
            return 2 * self.wireless_delay_us
        d = self.wired[(ap_a, self.edge_of[ap_a])] + self.wired[(ap_b, self.edge_of[ap_b])]
        if self.edge_of[ap_a] != self.edge_of[ap_b]:
            d += self.wired[(self.edge_of[ap_a], CORE)] + self.wired[(self.edge_of[ap_b], CORE)]
        return d + 2 * self.wireless_delay_us

    def distance_m(self, cell_a: int, cell_b: int) -> float:
        return math.dist(self.aps[cell_a].position, self.aps[cell_b].position)
