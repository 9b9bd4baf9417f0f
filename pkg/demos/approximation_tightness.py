"""Where the coordinator's factor-2 guarantee is tight: cyclic demand.

On an n-cycle every node is both a source and a destination, so the
coordinator pays 2n - 2 pigeons while a single loop of n pigeons
suffices under multihop routing.  The observed ratio is exactly 2 - 2/n.
"""

from fractions import Fraction

from pigeonpost import certify, optimal_multihop, plan_coordinator
from pigeonpost.instances import cycle_graph


def main():
    print(f"{'n':>3} {'coordinator':>12} {'optimal':>8} {'ratio':>8}")
    for n in range(3, 9):
        g = cycle_graph(n)
        hub = plan_coordinator(g)
        best = optimal_multihop(g)
        ratio = Fraction(hub.count, best.count)
        assert ratio == 2 - Fraction(2, n)
        print(f"{n:>3} {hub.count:>12} {best.count:>8} {str(ratio):>8}")

    print()
    g = cycle_graph(6)
    cert = certify(g, optimal_multihop(g))
    print("certificate for the 6-cycle optimum:")
    print(cert.to_json())


if __name__ == "__main__":
    main()
