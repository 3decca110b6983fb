"""Command line front end: ``bartholdi {info,zeta,check,poles}``.

Exit codes: 0 success (every applicable verdict holds), 1 a verdict was
violated, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import __version__
from .algebra import BiPoly, format_rational, square_free_decomposition
from .errors import BartholdiError, BudgetExceeded, ForbiddenU, NotRegular, SingularQu
from .graph_core import Digraph, build_matrices, graph_info
from .graph_io import load_graph, looks_rational, parse_rational
from .oracle import DEFAULT_BUDGET, compare_to_determinant
from .poles import (
    DEFAULT_TOL,
    boundary_pole_simplicity,
    bump_eigenvectors,
    critical_strip_bounds,
    enhancement_check,
    mp_condition,
    poles_numeric,
    rh_check,
    sigma_lemma_checks,
)
from .zeta import (
    DEFAULT_U_SAMPLES,
    check_bu_inverse,
    check_completed_fe,
    check_det_bu_identity,
    check_expressions_agree,
    check_ihara_bartholdi_equivalence,
    check_q_functional_equation,
    check_q_functional_equation_sampled,
    check_u_functional_equation,
    edge_zeta_inverse,
    edge_zeta_inverse_at,
    vertex_determinant,
    bump_prefactor,
)

SCHEMA = "bartholdi-report/1"
SUITES = ("expressions", "fe-q", "fe-u", "det-bu", "bu-inv", "sigma", "oracle")
BU_INV_SAMPLES = (Fraction(1, 2), Fraction(1, 3), -3)


@dataclass
class Report:
    command: str
    inputs: dict
    result: dict
    exit_code: int = 0
    lines: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "tool": f"bartholdi {__version__}",
            "command": self.command,
            "inputs": _clean(self.inputs),
            "result": _clean(self.result),
        }

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.as_dict(), sort_keys=True, indent=2) + "\n"
        head = [f"# {self.command} ({SCHEMA}, bartholdi {__version__})"]
        for k, v in sorted(_clean(self.inputs).items()):
            head.append(f"# {k}: {json.dumps(v, sort_keys=True)}")
        body = self.lines or [f"{k}: {json.dumps(v, sort_keys=True)}" for k, v in sorted(_clean(self.result).items())]
        return "\n".join(head + body) + "\n"


def _clean(obj):
    """JSON-safe, deterministic view: exact numbers as strings, floats rounded."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return _clean(obj.item())
    if isinstance(obj, float):
        return _float(obj)
    if isinstance(obj, complex):
        return [_float(obj.real), _float(obj.imag)]
    if isinstance(obj, BiPoly):
        return str(obj)
    return str(obj)


def _exact(x):
    return format_rational(x) if isinstance(x, (int, Fraction)) else x


def _float(x: float):
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if abs(x) < 1e-12:
        return 0.0
    return float(f"{x:.12g}")


# --------------------------------------------------------------------------
# factorisation for display


def _const_one(coeffs: list) -> list:
    c0 = coeffs[0]
    return [Fraction(c) / c0 for c in coeffs]


def _factor_key(item):
    coeffs, _ = item
    return (len(coeffs), [Fraction(c) for c in coeffs])


def format_factors(factors: list[tuple[list, int]], lead=1) -> str:
    parts = []
    for coeffs, mult in sorted(factors, key=_factor_key):
        s = f"({BiPoly.from_q_coeffs(coeffs)})"
        parts.append(s if mult == 1 else f"{s}^{mult}")
    if lead != 1 or not parts:
        parts.insert(0, format_rational(lead))
    return "*".join(parts)


def square_free_factors(p: BiPoly) -> tuple:
    """Yun factors normalised to constant term 1 (no q-factor, since p(0) = 1)."""
    coeffs = p.q_coeffs()
    if len(coeffs) <= 1:
        return coeffs[0] if coeffs else 0, []
    _, parts = square_free_decomposition(coeffs)
    # every factor has constant term 1, so the leading constant is p(0)
    return coeffs[0], [(_const_one(a), i) for a, i in parts]


def irreducible_factors(p: BiPoly) -> tuple:
    """Factorisation over the rationals into irreducibles, constant terms normalised to 1."""
    import sympy

    coeffs = p.q_coeffs()
    if len(coeffs) <= 1:
        return coeffs[0] if coeffs else 0, []
    x = sympy.Symbol("q")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else c for c in reversed(coeffs)], x, domain="QQ")
    _, parts = poly.factor_list()
    out = []
    for f, mult in parts:
        low = [Fraction(str(c)) for c in reversed(f.all_coeffs())]
        out.append(([c / low[0] for c in low], mult))
    return coeffs[0], out


# --------------------------------------------------------------------------
# commands


def _graph_inputs(g: Digraph, source: str) -> dict:
    return {"graph": {"source": source, "n_vertices": g.n_vertices, "n_edges": g.n_edges}}


def cmd_info(g: Digraph, args) -> Report:
    info = graph_info(g)
    mp = mp_condition(g)
    result = {
        "n_vertices": g.n_vertices,
        "n_edges": g.n_edges,
        "degrees": list(g.degrees),
        "regular": info.is_regular,
        "t": info.t,
        "bipartite": info.is_bipartite,
        "tree": info.is_tree,
        "kappa": info.spanning_tree_count,
        "u_star": format_rational(g.u_star),
        "mp_value": format_rational(mp.value),
        "mp_condition": mp.condition_holds,
    }
    return Report("info", _graph_inputs(g, args.graph), result)


def cmd_zeta(g: Digraph, args) -> Report:
    u = None if args.symbolic or args.u is None else args.u[-1]
    inputs = _graph_inputs(g, args.graph) | {"u": "symbolic" if u is None else format_rational(u), "form": args.form}
    result: dict = {"form": args.form}
    if args.form == "edge":
        poly = edge_zeta_inverse(g) if u is None else edge_zeta_inverse_at(g, u)
        result["expression"] = "det(1 - q*(W + u*J))"
    else:
        k = g.n_edges - g.n_vertices
        det = vertex_determinant(g)
        x = bump_prefactor()
        if u is not None:
            det = det.evaluate(u=u)
            x = bump_prefactor(u)
        result["expression"] = "(1 - (1-u)^2*q^2)^(n_E - n_V) * det(1 - q*A + q^2*Q_u)"
        result["exponent"] = k
        result["prefactor"] = str(x)
        result["determinant"] = str(det)
        poly = x**k * det if k >= 0 else det.divexact(x ** (-k))
    result["polynomial"] = str(poly)
    result["degree_q"] = poly.degree_q()
    result["degree_u"] = poly.degree_u()
    if u is not None:
        lead, sf = square_free_factors(poly)
        result["square_free"] = format_factors(sf, lead)
        lead, irr = irreducible_factors(poly)
        result["factorization"] = format_factors(irr, lead)
    return Report("zeta", inputs, result)


def _row(suite: str, rep, **extra) -> dict:
    d = rep.as_dict()
    row = {"suite": suite, "check": d.pop("identity"), "verdict": d.pop("verdict")}
    row.update(extra)
    row.update({k: v for k, v in d.items() if v not in (None, [], {})})
    return row


def _status_row(suite: str, name: str, verdict: str, **extra) -> dict:
    return {"suite": suite, "check": name, "verdict": verdict, **extra}


def _corrupted_matrices(g: Digraph):
    m = build_matrices(g)
    w = m.W.copy()
    w[0, g.inverse(0)] = 1  # allow one backtrack: a deliberately wrong W
    return build_matrices(g, W=w)


def run_suite(g: Digraph, suite: str, args, matrices) -> list[dict]:
    us = args.u if args.u else list(DEFAULT_U_SAMPLES)
    rows: list[dict] = []
    regular = g.is_regular()
    if suite == "expressions":
        rows.append(_row(suite, check_expressions_agree(g, matrices)))
    elif suite == "fe-q":
        if not regular:
            return [_status_row(suite, "fe-q", "not_applicable", reason="graph is not regular")]
        for u in us:
            for fn in (check_q_functional_equation, check_completed_fe):
                try:
                    rep = fn(g, u, matrices) if fn is check_q_functional_equation else fn(g, u)
                    rows.append(_row(suite, rep))
                except (ForbiddenU, SingularQu) as exc:
                    name = "fe-q" if fn is check_q_functional_equation else "fe-completed"
                    rows.append(_status_row(suite, name, "skipped", params={"u": u}, reason=str(exc)))
        rows.append(_row(suite, check_q_functional_equation_sampled(g, matrices)))
    elif suite == "fe-u":
        if not regular:
            return [_status_row(suite, "fe-u", "not_applicable", reason="graph is not regular")]
        rows.append(_row(suite, check_u_functional_equation(g, matrices)))
        rows.append(_row(suite, check_ihara_bartholdi_equivalence(g, matrices)))
    elif suite == "det-bu":
        rows.append(_row(suite, check_det_bu_identity(g, matrices)))
        ev = bump_eigenvectors(g)
        rows.append(
            _status_row(
                suite,
                "bump-eigenvectors",
                "holds" if ev.relations_hold else "violated",
                dim_minus=ev.dim_minus,
                dim_plus=ev.dim_plus,
            )
        )
    elif suite == "bu-inv":
        for u in (args.u or BU_INV_SAMPLES):
            try:
                rows.append(_row(suite, check_bu_inverse(g, u, matrices)))
            except (ForbiddenU, SingularQu) as exc:
                rows.append(_status_row(suite, "bu-inverse", "skipped", params={"u": u}, reason=str(exc)))
    elif suite == "sigma":
        rep = sigma_lemma_checks(g)
        for name, ok in rep.results.items():
            rows.append(_status_row(suite, f"sigma-{name}", "holds" if ok else "violated", kappa=rep.kappa))
        enh = enhancement_check(g)
        rows.append(_status_row(suite, "enhancement", enh.status, **enh.details))
    elif suite == "oracle":
        try:
            for rep in compare_to_determinant(g, args.max_len, args.budget):
                rows.append(_row(suite, rep))
        except BudgetExceeded as exc:
            rows.append(_status_row(suite, "oracle", "skipped", reason=str(exc)))
    return rows


def cmd_check(g: Digraph, args) -> Report:
    suites = SUITES if args.suite == "all" else (args.suite,)
    matrices = _corrupted_matrices(g) if args.corrupt_w else None
    rows = []
    for s in suites:
        rows.extend(run_suite(g, s, args, matrices))
    violated = [r for r in rows if r["verdict"] == "violated"]
    inputs = _graph_inputs(g, args.graph) | {
        "suite": args.suite,
        "u": [format_rational(x) for x in args.u] if args.u else "default",
        "max_len": args.max_len,
        "budget": args.budget,
    }
    if args.corrupt_w:
        inputs["corrupt_w"] = True
    result = {"verdicts": rows, "violations": len(violated), "all_hold": not violated}
    lines = []
    for r in _clean(rows):
        params = r.get("params", {})
        tag = " ".join(f"{k}={v}" for k, v in sorted(params.items())) if isinstance(params, dict) else ""
        lines.append(f"[{r['verdict']}] {r['suite']}: {r['check']}" + (f" ({tag})" if tag else ""))
    lines.append(f"violations: {len(violated)}")
    return Report("check", inputs, result, exit_code=1 if violated else 0, lines=lines)


def cmd_poles(g: Digraph, args) -> Report:
    if not args.u:
        raise ForbiddenU("poles needs --u")
    u = args.u[-1]
    if u == 1:
        raise ForbiddenU("u = 1 is excluded")
    tol = args.tol
    bounds = critical_strip_bounds(g, u)
    rep = poles_numeric(g, u, tol)
    inside = all(bounds.contains(p.magnitude, tol) for p in rep.poles)
    k = g.n_edges - g.n_vertices
    at_star = u == g.u_star
    mp = mp_condition(g)
    expected = max(k + 1, 0) if not at_star else (k + 2 if mp.condition_holds else None)
    enh_ok = rep.order_plus == expected if expected is not None else rep.order_plus >= k + 2
    result = {
        "strip": {
            "R_min": _exact(bounds.R_min),
            "R_max": "unbounded" if bounds.R_max is None else _exact(bounds.R_max),
            "R_min_branch": bounds.min_branch,
            "R_max_branch": bounds.max_branch,
            "all_poles_inside": inside,
        },
        "r_G": rep.r_G,
        "r_G_prime": rep.r_G_prime,
        "degenerate_strip": rep.degenerate_strip,
        "poles_at_infinity": rep.poles_at_infinity,
        "poles": [
            {
                "value": p.value,
                "magnitude": p.magnitude,
                "multiplicity": p.multiplicity,
                "re_s": p.re_s,
                "kind": p.kind,
            }
            for p in rep.poles
        ],
        "order_plus": rep.order_plus,
        "order_minus": rep.order_minus,
        "enhancement": {
            "u_star": format_rational(g.u_star),
            "at_u_star": at_star,
            "expected_order_plus": expected if expected is not None else f">= {k + 2}",
            "verdict": "holds" if enh_ok else "violated",
        },
        "boundary": boundary_pole_simplicity(g, u, tol).as_dict(),
    }
    if g.is_regular():
        try:
            result["rh"] = rh_check(g, u, tol)
        except (ForbiddenU, NotRegular) as exc:
            result["rh"] = {"verdict": "not_applicable", "reason": str(exc)}
    else:
        result["rh"] = {"verdict": "not_applicable", "reason": "graph is not regular"}
    inputs = _graph_inputs(g, args.graph) | {"u": format_rational(u), "tol": tol}
    code = 0 if inside and enh_ok else 1
    return Report("poles", inputs, result, exit_code=code)


COMMANDS = {"info": cmd_info, "zeta": cmd_zeta, "check": cmd_check, "poles": cmd_poles}


# --------------------------------------------------------------------------
# argument handling


def _rational_arg(text: str):
    return parse_rational(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bartholdi", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"bartholdi {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("graph_pos", nargs="?", metavar="GRAPH", help="graph file or builtin:<name>")
    common.add_argument("--graph", help="graph file or builtin:<name>")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--u", action="append", type=str, help='exact rational "p/q"; repeatable for check')
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    common.add_argument("--max-len", type=int, default=8)

    sub.add_parser("info", parents=[common], help="graph invariants")
    z = sub.add_parser("zeta", parents=[common], help="inverse zeta polynomial")
    z.add_argument("--symbolic", action="store_true")
    z.add_argument("--form", choices=("edge", "vertex"), default="edge")
    c = sub.add_parser("check", parents=[common], help="verify identities")
    c.add_argument("--suite", choices=("all",) + SUITES, default="all")
    c.add_argument("--corrupt-w", action="store_true", help=argparse.SUPPRESS)
    sub.add_parser("poles", parents=[common], help="pole table, strip bounds, RH")
    return parser


def _join_negative_values(argv: list[str]) -> list[str]:
    # "--u -1/2" would otherwise be read as an unknown option
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a == "--u" and i + 1 < len(argv) and argv[i + 1].startswith("-") and looks_rational(argv[i + 1]):
            out.append(f"--u={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_negative_values(argv))
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        args.graph = args.graph or args.graph_pos
        if not args.graph:
            raise BartholdiError("no graph given (use --graph PATH or builtin:<name>)")
        args.u = [parse_rational(x) for x in args.u] if args.u else None
        if args.max_len < 1:
            raise BartholdiError("--max-len must be at least 1")
        g = load_graph(args.graph)
        report = COMMANDS[args.command](g, args)
    except BartholdiError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return 2
    stdout.write(report.render(args.format))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
