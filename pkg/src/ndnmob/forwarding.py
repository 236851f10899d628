"""Stateful forwarding: FIB, PIT, content store and the router pipeline.

Routers return action lists instead of touching the network directly, so
the pipeline can be unit-tested without an event loop. The engine applies
the actions (sending packets, delivering locally, recording drops).

Two details go beyond the textbook pipeline:

* A PIT entry renamed by a redirected interest remembers the name the
  upstream side used (``original_name``). Data matching the renamed entry
  is forwarded back under that earlier name, so consumers receive what
  they asked for even after in-network renames. Renames compose: only the
  first rename is remembered, which is exactly the boundary between the
  old-name and new-name regions of the path.

* Routers that have processed a redirected interest keep a redirect map
  (producer id -> current prefix). Later plain interests that still carry
  a stale prefix are rewritten on the spot and continue as redirected
  interests, which is what removes the detour through the producer's
  previous access point for all upcoming traffic.
"""

from __future__ import annotations

from collections import OrderedDict, deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .names import Name, is_prefix, name_str, rewrite_name
from .packets import DATA, INTEREST_RED, Packet, interest_red

# Sentinel face: the prefix terminates at this node (AP control plane, app).
LOCAL = ":local"

DEFAULT_PIT_LIFETIME_US = 4_000_000
DEFAULT_CS_CAPACITY = 1000
DEFAULT_NONCE_MEMORY = 10_000


def longest_prefix_match(fib: Dict[Name, str], n: Name) -> Optional[str]:
    """Return the face of the longest FIB prefix matching n, or None."""
    for k in range(len(n), 0, -1):
        face = fib.get(n[:k])
        if face is not None:
            return face
    return None


@dataclass(slots=True)
class PitEntry:
    name: Name
    in_faces: List[Tuple[str, int]]            # (face, nonce), arrival order
    expiry_us: int
    original_name: Optional[Name] = None       # name the upstream side expects
    alive: bool = True

    def nonces(self):
        return [n for _, n in self.in_faces]


class ContentStore:
    """FIFO-evicting exact-name cache of data packets."""

    def __init__(self, capacity: int = DEFAULT_CS_CAPACITY):
        self.capacity = capacity
        self._store: "OrderedDict[Name, Packet]" = OrderedDict()

    def get(self, n: Name) -> Optional[Packet]:
        return self._store.get(n)

    def insert(self, pkt: Packet) -> None:
        if self.capacity <= 0:
            return
        if pkt.name in self._store:
            self._store[pkt.name] = pkt
            return
        while len(self._store) >= self.capacity:
            self._store.popitem(last=False)
        self._store[pkt.name] = pkt

    def __len__(self):
        return len(self._store)


# Actions handed back to the engine.

@dataclass(slots=True)
class Forward:
    packet: Packet
    face: str


@dataclass(slots=True)
class Reply:          # content store hit
    packet: Packet
    face: str


@dataclass(slots=True)
class Deliver:        # name terminates here; strategy/app decides
    packet: Packet
    in_face: str


@dataclass(slots=True)
class Aggregate:
    name: Name


@dataclass(slots=True)
class Drop:
    packet: Packet
    cause: str


@dataclass(slots=True)
class Unsolicited:    # data without PIT state
    packet: Packet


class Router:
    """Forwarding state of one node (access point, edge or core router)."""

    def __init__(self, node_id: str, cs_capacity: int = DEFAULT_CS_CAPACITY,
                 pit_lifetime_us: int = DEFAULT_PIT_LIFETIME_US,
                 nonce_memory: int = DEFAULT_NONCE_MEMORY):
        self.node_id = node_id
        self.fib: Dict[Name, str] = {}
        self.pit: Dict[Name, PitEntry] = {}
        self.pit_by_original: Dict[Name, Name] = {}
        self.cs = ContentStore(cs_capacity)
        self.pit_lifetime_us = pit_lifetime_us
        self.redirects: Dict[str, Name] = {}    # producer id -> current prefix
        self._seen: set = set()                 # (name, nonce) loop memory
        self._seen_order: deque = deque()
        self._nonce_memory = nonce_memory
        self.new_entries: List[PitEntry] = []   # drained by the engine for expiry timers

    # nonce memory -----------------------------------------------------

    def nonce_seen(self, n: Name, nonce: int) -> bool:
        return (n, nonce) in self._seen

    def remember_nonce(self, n: Name, nonce: int) -> None:
        key = (n, nonce)
        if key in self._seen:
            return
        self._seen.add(key)
        self._seen_order.append(key)
        if len(self._seen_order) > self._nonce_memory:
            self._seen.discard(self._seen_order.popleft())

    # PIT helpers ------------------------------------------------------

    def _create_entry(self, n: Name, in_faces, now_us: int,
                      original_name: Optional[Name] = None) -> PitEntry:
        entry = PitEntry(n, list(in_faces), now_us + self.pit_lifetime_us,
                         original_name=original_name)
        self.pit[n] = entry
        if original_name is not None:
            self.pit_by_original[original_name] = n
        self.new_entries.append(entry)
        return entry

    def remove_entry(self, n: Name) -> Optional[PitEntry]:
        entry = self.pit.pop(n, None)
        if entry is not None:
            entry.alive = False
            if entry.original_name is not None:
                self.pit_by_original.pop(entry.original_name, None)
        return entry

    def find_entry(self, n: Name) -> Optional[PitEntry]:
        """Look up by current name, falling back to the pre-rename name."""
        entry = self.pit.get(n)
        if entry is not None:
            return entry
        key = self.pit_by_original.get(n)
        if key is not None:
            return self.pit.get(key)
        return None

    def _rename_entry(self, entry: PitEntry, new_name: Name) -> None:
        # keep the first original: that is the name the upstream still uses
        old_key = entry.name
        del self.pit[old_key]
        if entry.original_name is None:
            entry.original_name = old_key
        entry.name = new_name
        self.pit[new_name] = entry
        self.pit_by_original[entry.original_name] = new_name

    def entries_under(self, prefix: Name) -> List[PitEntry]:
        return [e for n, e in self.pit.items() if is_prefix(prefix, n)]

    def expire_entry(self, entry: PitEntry, now_us: int) -> bool:
        if entry.alive and now_us >= entry.expiry_us and self.pit.get(entry.name) is entry:
            self.remove_entry(entry.name)
            return True
        return False

    # pipeline ---------------------------------------------------------

    def process_interest(self, pkt: Packet, in_face: str, now_us: int) -> List[object]:
        n = pkt.name
        if self.nonce_seen(n, pkt.nonce):
            return [Drop(pkt, "duplicate-nonce")]
        cached = self.cs.get(n)
        if cached is not None:
            self.remember_nonce(n, pkt.nonce)
            return [Reply(Packet(DATA, cached.name, pkt.nonce, payload_size=cached.payload_size), in_face)]
        entry = self.pit.get(n)
        if entry is not None:
            self.remember_nonce(n, pkt.nonce)
            entry.in_faces.append((in_face, pkt.nonce))
            return [Aggregate(n)]
        face = longest_prefix_match(self.fib, n)
        if face is None:
            return [Drop(pkt, "no-route")]
        self.remember_nonce(n, pkt.nonce)
        self._create_entry(n, [(in_face, pkt.nonce)], now_us)
        if face == LOCAL:
            return [Deliver(pkt, in_face)]
        return [Forward(pkt, face)]

    def process_data(self, pkt: Packet, in_face: str, now_us: int) -> List[object]:
        entry = self.pit.get(pkt.name)
        if entry is None:
            return [Unsolicited(pkt)]
        self.cs.insert(pkt)
        out_name = entry.original_name if entry.original_name is not None else pkt.name
        actions: List[object] = []
        for face, nonce in entry.in_faces:
            if face == in_face or face == LOCAL:
                continue
            actions.append(Forward(Packet(DATA, out_name, nonce, payload_size=pkt.payload_size), face))
        self.remove_entry(pkt.name)
        return actions

    def process_interest_red(self, pkt: Packet, in_face: str, now_us: int,
                             add_in_face: bool = False) -> List[object]:
        """Handle a redirected interest (PIT rename, shortcut install, forward).

        add_in_face is set when the redirect was created at this router from
        a plain interest: the arrival face is then the consumer side and must
        receive the data; a redirect arriving over the wire must not add its
        face, otherwise data would detour back through the redirect origin.
        """
        n = pkt.name
        orig = pkt.original_name
        if self.nonce_seen(n, pkt.nonce):
            return [Drop(pkt, "duplicate-nonce")]
        self.remember_nonce(n, pkt.nonce)

        entry = self.find_entry(orig) if orig is not None else None
        created = False
        if entry is not None:
            if entry.name != n:
                self._rename_entry(entry, n)
            if add_in_face and (in_face, pkt.nonce) not in entry.in_faces:
                entry.in_faces.append((in_face, pkt.nonce))
        elif n in self.pit:
            self.pit[n].in_faces.append((in_face, pkt.nonce))
            return [Aggregate(n)]
        else:
            self._create_entry(n, [(in_face, pkt.nonce)], now_us,
                               original_name=orig if add_in_face else None)
            created = True

        # shortcut for upcoming traffic: prefix of the rewritten name
        new_prefix = n[:2]
        face = longest_prefix_match(self.fib, n)
        if face is not None:
            self.fib.setdefault(new_prefix, face)
        if len(n) > 2:
            self.redirects[n[2]] = new_prefix

        if face is None:
            if created:
                self.remove_entry(n)
            return [Drop(pkt, "no-route")]
        if face == LOCAL:
            return [Deliver(pkt, in_face)]
        return [Forward(pkt, face)]

    def maybe_rewrite(self, pkt: Packet) -> Optional[Packet]:
        """Rewrite a stale plain interest per the redirect map, or None."""
        n = pkt.name
        if len(n) < 3:
            return None
        target = self.redirects.get(n[2])
        if target is None or n[:2] == target:
            return None
        return interest_red(rewrite_name(n, n[:2], target), pkt.nonce, n)

    def redirect_entry(self, old_name: Name, new_prefix: Name, nonce: int) -> Packet:
        """Rename a pending entry toward new_prefix and build the redirect packet.

        Used by access-point strategies when the producer behind old_name is
        gone. The entry keeps its consumer-side faces; the returned packet is
        ready to forward toward the producer's anticipated location.
        """
        new_name = rewrite_name(old_name, old_name[:2], new_prefix)
        entry = self.find_entry(old_name)
        if entry is not None and entry.name != new_name:
            self._rename_entry(entry, new_name)
        if len(new_name) > 2:
            self.redirects[new_name[2]] = new_prefix
        return interest_red(new_name, nonce, old_name)

    def satisfy_local(self, pkt: Packet, now_us: int) -> List[object]:
        """Satisfy a pending entry with data produced or translated locally."""
        return self.process_data(pkt, LOCAL, now_us)

    def describe(self) -> str:
        return (f"{self.node_id}: fib={len(self.fib)} pit={len(self.pit)} "
                f"cs={len(self.cs)} redirects={ {k: name_str(v) for k, v in self.redirects.items()} }")
