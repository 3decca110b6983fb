"""Critical-line verdicts for the regular corpus graphs over a range of u.

Shows where the spectral hypothesis fails (bipartite graphs) and where
(1-u)(t+u) < 0 pushes real poles off the critical circle even though the
hypothesis is met.

    python scripts/rh_scan.py [--tol 1e-9]
"""

import argparse
from fractions import Fraction

from bartholdi.algebra import format_rational
from bartholdi.corpus import REGULAR_NAMES, builtin
from bartholdi.errors import ForbiddenU
from bartholdi.poles import rh_check

U_VALUES = [Fraction(k, 4) for k in range(-14, 12, 3)]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tol", type=float, default=1e-9)
    tol = ap.parse_args().tol
    print("graph     " + " ".join(f"{format_rational(u):>9}" for u in U_VALUES))
    legend = {"holds": "ok", "violated": "OFF", "hypothesis_fails": "hyp-x"}
    for name in REGULAR_NAMES:
        g = builtin(name)
        cells = []
        for u0 in U_VALUES:
            try:
                r = rh_check(g, u0, tol)
                tag = legend[r["verdict"]] + ("" if r["c_positive"] else "(c<0)")
            except ForbiddenU:
                tag = "forbid"
            cells.append(f"{tag:>9}")
        print(f"{name:<9} " + " ".join(cells))


if __name__ == "__main__":
    main()
