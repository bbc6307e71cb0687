"""Local clocks and multi-interval time sets; where the interval intuitions break."""

from sysactor import ClockMap, EventRecord, TimeSet, map_to_clock, parallel, strictly_sequential
from sysactor.fixtures import strict_chain_events, triple_events


def main():
    e = triple_events()
    print("E1 =", e["E1"].time, " E2 =", e["E2"].time, " E3 =", e["E3"].time)
    print("  E1||E2:", parallel([e["E1"], e["E2"]]), " E2||E3:", parallel([e["E2"], e["E3"]]),
          " E1||E3:", parallel([e["E1"], e["E3"]]))

    trio = [e["E1"], e["E2"], e["F3"]]
    print("\nReplace E3 by F3 =", e["F3"].time)
    print("  every pair parallel:", all(parallel(p) for p in ([trio[0], trio[1]], [trio[1], trio[2]], [trio[0], trio[2]])))
    print("  all three parallel: ", parallel(trio))

    c = strict_chain_events()
    print("\nP3, P2, P1 follow each other back to back:")
    print("  P2 right after P3:", strictly_sequential(c["P3"], c["P2"]),
          " P1 right after P2:", strictly_sequential(c["P2"], c["P1"]),
          " P1 right after P3:", strictly_sequential(c["P3"], c["P1"]))

    sync = [ClockMap("local", "lab", 2, 5)]
    ev = EventRecord("x", "X", "blink", TimeSet.interval("local", 0, 1))
    print("\nOn a clock running twice as fast, offset 5:", ev.time, "->", map_to_clock(ev.time, "lab", sync))


if __name__ == "__main__":
    main()
