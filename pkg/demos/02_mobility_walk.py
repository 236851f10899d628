"""One producer's random walk, epoch by epoch.

Reimplements the engine's per-epoch loop in twenty lines so the mobility
pieces can be watched in isolation: speed/heading resampling, wall
reflection, signal decay toward the attached access point, and the
adaptive lookahead once the trigger fires.

Run: python3 demos/02_mobility_walk.py [seed]
"""

import random
import sys

from ndnmob import mobility as mob
from ndnmob.topology import Topology, TopologyParams


def main(seed=10):
    topo = Topology(TopologyParams())
    params = mob.MobilityParams()
    rng = random.Random(f"{seed}:mobility")

    home = topo.aps[5]
    state = mob.MobileState("p0", position=(home.position[0] + 92.0, home.position[1]),
                            speed_kmh=22.0, heading_rad=0.3, attached=home.ap_id)

    print(f"attached to {home.ap_id} at {home.position}, walls at {topo.bounds}")
    print(f"{'t':>4} {'speed':>6} {'heading':>8} {'x':>7} {'y':>7} {'rss':>7}")

    for t in range(1, 40):
        p, dv, dphi = rng.random(), rng.uniform(*params.dv_kmh), rng.uniform(*params.dphi_rad)
        state.position, state.heading_rad = mob.displace(
            state.position, state.speed_kmh, state.heading_rad, params.epoch_s, topo.bounds)
        state.speed_kmh = mob.update_speed(state.speed_kmh, dv, p, params)
        state.heading_rad = mob.update_direction(state.heading_rad, dphi)

        level = mob.rss(home.position, state.position, params)
        state.rss_history.append((t * 1_000_000, level))
        print(f"{t:>4} {state.speed_kmh:>6.1f} {state.heading_rad:>8.2f}"
              f" {state.position[0]:>7.1f} {state.position[1]:>7.1f} {level:>7.2f}")

        if mob.check_handover_trigger(level, params):
            horizon = mob.prediction_horizon_s(state, params, t * 1_000_000)
            future = mob.predict_future_position(
                state.position, state.speed_kmh, state.heading_rad, horizon, topo.bounds)
            guess = mob.nearest_ap(topo.aps, future, exclude=[home.ap_id])
            actual = mob.nearest_ap(topo.aps, state.position, exclude=[home.ap_id])
            print(f"\ntrigger: rss {level:.2f} dBm <= {params.th_dbm}")
            print(f"lookahead {horizon:.1f} s -> predicted position "
                  f"({future[0]:.0f}, {future[1]:.0f}) -> guess {guess.ap_id}")
            print(f"nearest other access point right now: {actual.ap_id}")
            break
    else:
        print("\nno trigger in 40 epochs; try another seed")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 10)
