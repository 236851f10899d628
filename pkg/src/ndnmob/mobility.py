"""Random-walk mobility, signal-strength attachment and reattachment phases.

Producers move on a bounded field in one-second epochs. Per epoch the speed
either persists (perturbed and clamped) or drops to zero, and the heading
drifts by a bounded random angle. Walls reflect.

Signal strength follows log-distance path loss; a node considers leaving its
access point once the measured value falls to the threshold, provided some
other access point is actually closer (otherwise there is nothing to gain
and the node would oscillate at cell borders).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import List, Optional, Sequence, Tuple

TWO_PI = 2.0 * math.pi

# reattachment phases
CONNECTED = "connected"
PREDICTING = "predicting"        # trigger fired, still associated
L2_HANDOVER = "l2-handover"      # radio detached
REATTACHED = "reattached"        # associated, registration pending


@dataclass(slots=True)
class MobilityParams:
    v_max_kmh: float = 30.0
    p_s: float = 0.5                          # move/pause draw threshold
    dv_kmh: Tuple[float, float] = (-3.0, 3.0)
    dphi_rad: Tuple[float, float] = (-math.pi / 4, math.pi / 4)
    epoch_s: float = 1.0
    ref_power_dbm: float = -37.0              # measured at ref_distance
    ref_distance_m: float = 1.0
    th_dbm: float = -77.0                     # trigger threshold
    t_f: object = "adaptive"                  # seconds, or "adaptive"
    t_f_bounds_s: Tuple[float, float] = (1.0, 30.0)
    l2_ms: float = 100.0                      # radio outage
    detach_delay_ms: float = 50.0             # trigger -> radio loss
    attach_ready_ms: float = 10.0             # association -> registration live


@dataclass(slots=True)
class AccessPoint:
    ap_id: str
    position: Tuple[float, float]
    cell: int


@dataclass(slots=True)
class MobileState:
    node_id: str
    position: Tuple[float, float]
    speed_kmh: float
    heading_rad: float
    attached: Optional[str]
    phase: str = CONNECTED
    position_time_us: int = 0
    rss_history: List[Tuple[int, float]] = dc_field(default_factory=list)


def update_speed(v_old_kmh: float, dv_kmh: float, p: float,
                 params: MobilityParams) -> float:
    """Per-epoch speed update: perturb and clamp while moving, else stop."""
    if p <= params.p_s:
        return min(max(v_old_kmh + dv_kmh, 0.0), params.v_max_kmh)
    return 0.0


def update_direction(phi_old_rad: float, dphi_rad: float) -> float:
    return (phi_old_rad + dphi_rad) % TWO_PI


def _fold(x: float, width: float) -> Tuple[float, bool]:
    # reflect a coordinate into [0, width]; flipped=True when the motion
    # component along this axis changed sign an odd number of times
    m = x % (2.0 * width)
    if m > width:
        return 2.0 * width - m, True
    return m, False


def displace(position: Tuple[float, float], v_kmh: float, phi_rad: float,
             dt_s: float, bounds: Tuple[float, float]) -> Tuple[Tuple[float, float], float]:
    """Move for dt seconds with wall reflection; returns (position, heading)."""
    v = v_kmh / 3.6
    x = position[0] + v * dt_s * math.cos(phi_rad)
    y = position[1] + v * dt_s * math.sin(phi_rad)
    fx, flip_x = _fold(x, bounds[0])
    fy, flip_y = _fold(y, bounds[1])
    cos_c = -math.cos(phi_rad) if flip_x else math.cos(phi_rad)
    sin_c = -math.sin(phi_rad) if flip_y else math.sin(phi_rad)
    heading = math.atan2(sin_c, cos_c) % TWO_PI if (flip_x or flip_y) else phi_rad
    return (fx, fy), heading


def step_position(position, v_kmh, phi_rad, dt_s, bounds) -> Tuple[float, float]:
    return displace(position, v_kmh, phi_rad, dt_s, bounds)[0]


def predict_future_position(position, v_kmh, phi_rad, t_f_s, bounds) -> Tuple[float, float]:
    """Dead-reckon t_f seconds ahead under the current speed and heading."""
    return step_position(position, v_kmh, phi_rad, t_f_s, bounds)


def rss(ap_position: Tuple[float, float], node_position: Tuple[float, float],
        params: MobilityParams) -> float:
    """Log-distance received signal strength in dBm."""
    d = math.dist(ap_position, node_position)
    if d <= params.ref_distance_m:
        return params.ref_power_dbm
    return params.ref_power_dbm - 20.0 * math.log10(d / params.ref_distance_m)


def check_handover_trigger(rss_dbm: float, params: MobilityParams) -> bool:
    return rss_dbm <= params.th_dbm


def nearest_ap(aps: Sequence[AccessPoint], point: Tuple[float, float],
               exclude: Sequence[str] = ()) -> AccessPoint:
    """Closest access point to a point; ties break on ap_id."""
    best = None
    best_key = None
    skip = set(exclude)
    for ap in aps:
        if ap.ap_id in skip:
            continue
        dx = ap.position[0] - point[0]
        dy = ap.position[1] - point[1]
        key = (dx * dx + dy * dy, ap.ap_id)
        if best_key is None or key < best_key:
            best, best_key = ap, key
    if best is None:
        raise ValueError("no access point available")
    return best


def prediction_horizon_s(state: MobileState, params: MobilityParams,
                         now_us: int) -> float:
    """Lookahead for position prediction.

    Adaptive mode extrapolates the recent signal decay to the moment the
    link would be unusable; with fewer than two samples, or a non-decaying
    signal, the lower bound applies. A numeric t_f is used as-is (clamped).
    """
    lo, hi = params.t_f_bounds_s
    if params.t_f != "adaptive":
        return min(max(float(params.t_f), lo), hi)
    hist = state.rss_history
    if len(hist) < 2:
        return lo
    (t0, r0), (t1, r1) = hist[-2], hist[-1]
    dt = (t1 - t0) / 1e6
    if dt <= 0.0 or r1 >= r0:
        return lo
    decay_db_per_s = (r0 - r1) / dt
    # margin below the trigger point that ends the usable window
    usable_margin_db = 10.0
    t = (r1 - (params.th_dbm - usable_margin_db)) / decay_db_per_s
    return min(max(t, lo), hi)
