"""Regenerate the CLI golden reports under tests/golden/."""

import io
from pathlib import Path

from bartholdi.cli import main

GOLDEN = {
    "k4_check_all.json": ["check", "--graph", "builtin:K4", "--suite", "all", "--max-len", "8"],
    "k4_poles_u0.json": ["poles", "--graph", "builtin:K4", "--u", "0"],
    "k4_poles_u_star.json": ["poles", "--graph", "builtin:K4", "--u", "-1/2"],
    "k4_zeta_u0.json": ["zeta", "--graph", "builtin:K4", "--u", "0"],
    "p3_info.json": ["info", "--graph", "builtin:P3"],
    "c4_poles_u0.txt": ["poles", "--graph", "builtin:C4", "--u", "0", "--format", "text"],
}


def render(argv):
    buf = io.StringIO()
    code = main(argv, stdout=buf)
    return code, buf.getvalue()


if __name__ == "__main__":
    out = Path(__file__).resolve().parent.parent / "tests" / "golden"
    out.mkdir(parents=True, exist_ok=True)
    for name, argv in GOLDEN.items():
        code, text = render(argv)
        (out / name).write_text(text)
        print(f"{name}: exit {code}, {len(text)} bytes")
