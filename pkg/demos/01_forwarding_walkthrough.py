"""Single-router forwarding walkthrough.

Pushes a handful of packets through one Router by hand and prints every
action it takes: longest-prefix forwarding, pending-entry aggregation, a
cache hit, and finally a redirected interest whose answer travels back
under the name the consumer asked for.

Run: python3 demos/01_forwarding_walkthrough.py
"""

from ndnmob.forwarding import Router
from ndnmob.names import name, name_str
from ndnmob.packets import data, interest, interest_red


def show(label, actions):
    print(f"\n--- {label}")
    for act in actions:
        print(f"    {act}")


def main():
    r = Router("rtr", cs_capacity=4)
    r.fib[name("/net/ap00")] = "face-a"
    r.fib[name("/net")] = "face-b"
    now = 0

    # plain interest: two prefixes match, the longer one wins
    pkt = interest(name("/net/ap00/p0/s0"), nonce=1)
    show("interest /net/ap00/p0/s0 from consumer side", r.process_interest(pkt, "face-c", now))

    # same name, different consumer: folded into the pending entry
    pkt = interest(name("/net/ap00/p0/s0"), nonce=2)
    show("same name again from another face", r.process_interest(pkt, "face-d", now))
    entry = r.find_entry(name("/net/ap00/p0/s0"))
    print(f"    pending faces now: {entry.in_faces}")

    # the answer fans out to both requesters and lands in the cache
    pkt = data(name("/net/ap00/p0/s0"), nonce=1)
    show("data returns from upstream", r.process_data(pkt, "face-a", now))

    # a repeat request is served from the cache, nothing forwarded
    pkt = interest(name("/net/ap00/p0/s0"), nonce=3)
    show("repeat request after caching", r.process_interest(pkt, "face-e", now))

    # redirection: an interest parked toward ap00 is renamed toward ap07
    pkt = interest(name("/net/ap00/p0/s1"), nonce=4)
    show("interest /net/ap00/p0/s1", r.process_interest(pkt, "face-c", now))
    r.fib[name("/net/ap07")] = "face-f"
    red = interest_red(name("/net/ap07/p0/s1"), original_name=name("/net/ap00/p0/s1"), nonce=4)
    show("redirect arrives: rename to /net/ap07/p0/s1", r.process_interest_red(red, "face-a", now))
    entry = r.find_entry(name("/net/ap00/p0/s1"))
    print(f"    entry now named {name_str(entry.name)}, faces {entry.in_faces}")

    # data under the new name goes back out under the original one
    pkt = data(name("/net/ap07/p0/s1"), nonce=4)
    show("data under the rewritten name", r.process_data(pkt, "face-f", now))

    print("\n--- final router state")
    print(r.describe())


if __name__ == "__main__":
    main()
