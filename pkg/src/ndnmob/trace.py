"""Event trace: in-memory rows, lossless CSV round-trip, invariant checks.

Every externally visible thing the simulator does lands here as one row.
Times are integer microseconds internally and are written as milliseconds
with three decimals, which is exact in both directions.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .names import Name, name, name_str

COLUMNS = ("time_ms", "event", "node", "kind", "name", "nonce", "hop_from", "hop_to", "cause")

# event vocabulary
ORIGIN = "origin"        # packet created by a host
SEND = "send"            # hop_from -> hop_to transmission starts
RECV = "recv"            # transmission arrives
DELIVER = "deliver"      # packet accepted by the destination application
DROP = "drop"            # packet discarded (cause says why)
AGGREGATE = "aggregate"  # interest folded into an existing pending entry
EXPIRE = "expire"        # pending entry timed out
TRIGGER = "trigger"      # producer decided to leave its access point
DETACH = "detach"        # radio down
ATTACH = "attach"        # radio up at the new access point
READY = "ready"          # registration live, producer reachable again
STORE = "store"          # copy kept at the previous access point
FLUSH = "flush"          # buffered packet released to the producer
DISCARD = "discard"      # stored/buffered copy aged out
ANNOUNCE = "announce"    # reachability flooded after a silent reattachment
CONVERGE = "converge"    # routing caught up without any management scheme
RETX = "retx"            # consumer retransmission


Row = Tuple[int, str, str, Optional[str], Optional[Name], Optional[int],
            Optional[str], Optional[str], Optional[str]]


def format_time_ms(t_us: int) -> str:
    return f"{t_us // 1000}.{t_us % 1000:03d}"


def parse_time_ms(s: str) -> int:
    whole, _, frac = s.partition(".")
    frac = (frac + "000")[:3]
    return int(whole) * 1000 + int(frac)


class EventTrace:
    __slots__ = ("rows",)

    def __init__(self, rows: Optional[List[Row]] = None):
        self.rows: List[Row] = rows if rows is not None else []

    def add(self, t_us: int, event: str, node: str, kind: Optional[str] = None,
            pkt_name: Optional[Name] = None, nonce: Optional[int] = None,
            hop_from: Optional[str] = None, hop_to: Optional[str] = None,
            cause: Optional[str] = None) -> None:
        self.rows.append((t_us, event, node, kind, pkt_name, nonce, hop_from, hop_to, cause))

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def filter(self, event: Optional[str] = None, node: Optional[str] = None,
               kind: Optional[str] = None) -> List[Row]:
        out = []
        for r in self.rows:
            if event is not None and r[1] != event:
                continue
            if node is not None and r[2] != node:
                continue
            if kind is not None and r[3] != kind:
                continue
            out.append(r)
        return out

    def to_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(COLUMNS)
            for t, event, node, kind, n, nonce, hf, ht, cause in self.rows:
                w.writerow((format_time_ms(t), event, node, kind or "",
                            name_str(n) if n else "", "" if nonce is None else nonce,
                            hf or "", ht or "", cause or ""))

    @classmethod
    def from_csv(cls, path: str) -> "EventTrace":
        rows: List[Row] = []
        with open(path, newline="") as fh:
            r = csv.reader(fh)
            header = next(r)
            if tuple(header) != COLUMNS:
                raise ValueError(f"unexpected trace header: {header}")
            for rec in r:
                t, event, node, kind, n, nonce, hf, ht, cause = rec
                rows.append((parse_time_ms(t), event, node, kind or None,
                             name(n) if n else None, int(nonce) if nonce else None,
                             hf or None, ht or None, cause or None))
        return cls(rows)


# ---------------------------------------------------------------------------
# invariant checks (used by the test suite; kept here so demos can run them)

def check_causality(trace: EventTrace, delay_us) -> List[str]:
    """Every recv must match a send of the same packet, exactly delay later."""
    errors: List[str] = []
    pending: Dict[tuple, List[int]] = {}
    for t, event, node, kind, n, nonce, hf, ht, cause in trace.rows:
        if event == SEND:
            pending.setdefault((kind, n, nonce, hf, ht), []).append(t)
        elif event == RECV:
            key = (kind, n, nonce, hf, ht)
            sends = pending.get(key)
            if not sends:
                errors.append(f"recv without send: {key} at {t}")
                continue
            t_send = sends.pop(0)
            expect = t_send + delay_us(hf, ht)
            if t != expect:
                errors.append(f"recv at {t}, expected {expect}: {key}")
    return errors


def check_blackout(trace: EventTrace, producer_ids) -> List[str]:
    """Nothing may reach a producer while its radio is down."""
    errors: List[str] = []
    down: Dict[str, Optional[int]] = {p: None for p in producer_ids}
    for t, event, node, kind, n, nonce, hf, ht, cause in trace.rows:
        if event == DETACH and node in down:
            down[node] = t
        elif event == ATTACH and node in down:
            down[node] = None
        elif event in (RECV, DELIVER) and node in down and down[node] is not None:
            if t > down[node]:
                errors.append(f"{event} at detached producer {node} at {t}")
    return errors


def check_reverse_path(trace: EventTrace) -> List[str]:
    """Each data hop must reverse an earlier interest hop with the same nonce.

    Renaming en route keeps the nonce, so the check holds across redirected
    segments as well.
    """
    errors: List[str] = []
    seen_interest: set = set()
    for t, event, node, kind, n, nonce, hf, ht, cause in trace.rows:
        if event != SEND or nonce is None:
            continue
        if kind == "data":
            if (ht, hf, nonce) not in seen_interest:
                errors.append(f"data hop {hf}->{ht} nonce {nonce} at {t} reverses no interest hop")
        else:
            seen_interest.add((hf, ht, nonce))
    return errors


def data_interest_counts(trace: EventTrace) -> Tuple[int, int]:
    """(consumer data-interest transmissions, data packets delivered)."""
    tx = 0
    delivered = 0
    for t, event, node, kind, n, nonce, hf, ht, cause in trace.rows:
        if event == ORIGIN and kind == "interest" and n is not None and \
                not (len(n) > 2 and n[2] == "ctl"):
            tx += 1
        elif event == DELIVER and kind == "data":
            delivered += 1
    return tx, delivered
