"""Order of the pole at q = 1/(1-u) across a grid of u values.

The order is n_E - n_V + 1 everywhere except at u_* = 1 - n_E/n_V, where
it jumps by one.  The scan makes the jump visible for each corpus graph.

    python scripts/enhancement_scan.py [--graphs P3 K4 K13] [--steps 12]
"""

import argparse
from fractions import Fraction

from bartholdi.algebra import format_rational
from bartholdi.corpus import BUILTIN_NAMES, builtin
from bartholdi.poles import mp_condition, pole_order_at


def grid(center: Fraction, steps: int) -> list[Fraction]:
    pts = {center + Fraction(k, 6) for k in range(-steps // 2, steps // 2 + 1)}
    return sorted(p for p in pts if p != 1)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--graphs", nargs="*", default=list(BUILTIN_NAMES))
    ap.add_argument("--steps", type=int, default=8)
    args = ap.parse_args()
    for name in args.graphs:
        g = builtin(name)
        us = Fraction(g.u_star)
        mp = mp_condition(g)
        row = []
        for u0 in grid(us, args.steps):
            order = pole_order_at(g, u0, 1)
            mark = "*" if u0 == us else ""
            row.append(f"{format_rational(u0)}{mark}:{order}")
        print(f"{name:<9} u_*={format_rational(us):<5} mp={format_rational(mp.value):<5} n_E={g.n_edges:<3} " + "  ".join(row))


if __name__ == "__main__":
    main()
