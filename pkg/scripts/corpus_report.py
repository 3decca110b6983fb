"""Run every identity check over the builtin corpus and print a verdict table.

    python scripts/corpus_report.py [--max-len 6]
"""

import argparse
import time
from dataclasses import dataclass

from bartholdi.cli import SUITES, run_suite
from bartholdi.corpus import BUILTIN_NAMES, builtin


@dataclass
class Config:
    max_len: int = 6
    budget: int = 10**7
    u: list | None = None
    corrupt_w: bool = False


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-len", type=int, default=6)
    cfg = Config(max_len=ap.parse_args().max_len)
    print(f"{'graph':<10}" + "".join(f"{s:>13}" for s in SUITES) + f"{'seconds':>10}")
    for name in BUILTIN_NAMES:
        g = builtin(name)
        start = time.perf_counter()
        cells = []
        for suite in SUITES:
            rows = run_suite(g, suite, cfg, None)
            verdicts = {r["verdict"] for r in rows}
            if "violated" in verdicts:
                cells.append("VIOLATED")
            elif verdicts <= {"not_applicable"}:
                cells.append("n/a")
            else:
                held = sum(r["verdict"] == "holds" for r in rows)
                cells.append(f"{held}/{len(rows)}")
        elapsed = time.perf_counter() - start
        print(f"{name:<10}" + "".join(f"{c:>13}" for c in cells) + f"{elapsed:>10.2f}")


if __name__ == "__main__":
    main()
