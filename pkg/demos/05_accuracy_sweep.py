"""Prediction-accuracy sweep.

Forces the new-AP guess to be correct with probability q and sweeps q.
Even coin-flip accuracy keeps the anticipation scheme ahead of the
reactive baseline, because a wrong guess still gets repaired by one
broadcast within the copy-hold window.

Run: python3 demos/05_accuracy_sweep.py
"""

import dataclasses

from ndnmob import accuracy_sweep, get_scenario, run_seeds

QS = (0.0, 0.25, 0.5, 0.75, 1.0)
SEEDS = range(8)
DURATION_S = 30.0


def main():
    sc = get_scenario("calibrated")
    sc = dataclasses.replace(sc, run=dataclasses.replace(sc.run, duration_s=DURATION_S))

    baseline = run_seeds(sc.with_strategy("interest-forwarding"), SEEDS)
    ref = baseline["aggregate"]["latency_ms"]["mean"]
    print(f"reactive-forwarding reference: {ref:.1f} ms mean reconnection\n")

    print(f"{'q':>5} {'events':>6} {'mean ms':>8} {'max ms':>8} {'ratio':>6} {'announces':>9}")
    for row in accuracy_sweep(sc, QS, SEEDS):
        agg = row["aggregate"]
        lat = agg["latency_ms"]
        print(f"{row['q']:>5.2f} {agg['handovers']:>6} {lat['mean']:>8.1f} {lat['max']:>8.1f}"
              f" {agg['content_to_interest']['mean']:>6.3f}"
              f" {agg['control'].get('announcements', 0):>9}")


if __name__ == "__main__":
    main()
