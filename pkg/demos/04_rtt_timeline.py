"""Round-trip timeline across a handover: anticipation vs reactive.

Runs the jitter-free calibrated scenario under both schemes and prints
the round trip of every request one consumer/producer pair issued around
the first reconnection. The anticipation scheme pays once (the request
in flight during the radio gap) and returns to the flat 50 ms; the
reactive scheme keeps paying the detour through the old access point.

Run: python3 demos/04_rtt_timeline.py
"""

from ndnmob import get_scenario, run_once
from ndnmob.metrics import handover_events, rtt_samples


def timeline(strategy):
    res = run_once(get_scenario("calibrated-rtt"), strategy_id=strategy, seed=0)
    ev = handover_events(res.trace)[0]
    lo = ev["detach_us"] - 300_000
    hi = ev["detach_us"] + 500_000
    samples = [s for s in rtt_samples(res.trace)
               if s["cid"] == "c0" and s["pid"] == "p0" and lo <= s["t0_us"] < hi]
    return ev, samples


def main():
    for strategy in ("location-prediction", "interest-forwarding"):
        ev, samples = timeline(strategy)
        print(f"\n=== {strategy} (radio down {ev['detach_us'] / 1000:.1f}"
              f" .. {ev['attach_us'] / 1000:.1f} ms)")
        for s in samples:
            rtt = "lost" if s["rtt_us"] is None else f"{s['rtt_us'] / 1000:7.1f} ms"
            marker = " <- sent while detached" if ev["detach_us"] <= s["t0_us"] < ev["attach_us"] else ""
            print(f"  sent {s['t0_us'] / 1000:7.1f} ms  {s['seq']:>4}  rtt {rtt}{marker}")


if __name__ == "__main__":
    main()
