"""Packet types exchanged by the simulator.

One Packet class carries a kind tag rather than a class per kind; the
forwarding pipeline dispatches on the tag. Field use by kind:

  INTEREST            name, nonce
  DATA                name, nonce (of the satisfied interest), payload_size
  INTEREST_PU         name, nonce, predicted_coords (x, y) in metres
  INTEREST_RED        name (rewritten), nonce, original_name
  PREFIX_ANNOUNCEMENT name (delivery scope), nonce, announced_prefix

For PREFIX_ANNOUNCEMENT the name field selects how the packet travels:
BROADCAST_SCOPE floods the wired backhaul, any other name routes it like
a normal interest toward that prefix's owner.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .names import Name, name

INTEREST = "interest"
DATA = "data"
INTEREST_PU = "interest_pu"
INTEREST_RED = "interest_red"
PREFIX_ANNOUNCEMENT = "prefix_announcement"

KINDS = (INTEREST, DATA, INTEREST_PU, INTEREST_RED, PREFIX_ANNOUNCEMENT)

BROADCAST_SCOPE = name("/broadcast")

# Control-plane interests live under a reserved component so the data
# namespace (/net/<ap>/<producer>/...) can never collide with them.
CTL = "ctl"


@dataclass(slots=True)
class Packet:
    kind: str
    name: Name
    nonce: int
    payload_size: int = 0
    predicted_coords: Optional[Tuple[float, float]] = None
    original_name: Optional[Name] = None
    announced_prefix: Optional[Name] = None


def interest(n: Name, nonce: int) -> Packet:
    return Packet(INTEREST, n, nonce)


def data(n: Name, nonce: int, payload_size: int = 1024) -> Packet:
    return Packet(DATA, n, nonce, payload_size=payload_size)


def interest_pu(n: Name, nonce: int, predicted_coords: Tuple[float, float]) -> Packet:
    """Pre-handover update sent by a producer to its current access point."""
    if predicted_coords is None or len(predicted_coords) != 2:
        raise ValueError("interest_pu requires (x, y) predicted coordinates")
    return Packet(INTEREST_PU, n, nonce, predicted_coords=(float(predicted_coords[0]), float(predicted_coords[1])))


def interest_red(n: Name, nonce: int, original_name: Name) -> Packet:
    """Redirected interest: carries the rewritten name plus the one it replaces."""
    if n == original_name:
        raise ValueError("redirected interest must differ from its original name")
    return Packet(INTEREST_RED, n, nonce, original_name=original_name)


def prefix_announcement(scope: Name, nonce: int, announced_prefix: Name) -> Packet:
    return Packet(PREFIX_ANNOUNCEMENT, scope, nonce, announced_prefix=announced_prefix)


def is_control_name(n: Name) -> bool:
    """Control interests carry the reserved CTL component in third position."""
    return len(n) > 2 and n[2] == CTL
