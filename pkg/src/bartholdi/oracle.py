"""Brute-force cycle counting, independent of every determinant routine.

Closed walks here are cyclic sequences of directed edges e_1 .. e_m with
t(e_i) = s(e_{i+1}) and t(e_m) = s(e_1).  A step onto the inverse of the
previous edge is a bump and is weighted by u; the wrap-around step
e_m -> e_1 is counted too, so a tail is a bump as well.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import comb

import numpy as np

from .algebra import ONE, ZERO, BiPoly, TruncatedSeries, log_inverse_series
from .errors import BudgetExceeded
from .graph_core import Digraph, build_matrices
from .zeta import IdentityReport, edge_zeta_inverse

DEFAULT_BUDGET = 10**8


@dataclass(frozen=True)
class WalkSeries:
    """T_m(u) for m = 1 .. Lmax, stored as BiPoly in u (index 0 unused)."""

    Lmax: int
    traces: tuple

    def __getitem__(self, m: int) -> BiPoly:
        if not 1 <= m <= self.Lmax:
            raise IndexError(m)
        return self.traces[m]

    def at_u(self, u0) -> list:
        return [self.traces[m].evaluate(q=0, u=u0) for m in range(1, self.Lmax + 1)]


@dataclass(frozen=True)
class CycleClass:
    representative: tuple[int, ...]
    bumps: int

    @property
    def length(self) -> int:
        return len(self.representative)


@dataclass(frozen=True)
class EulerTruncation:
    Lmax: int
    classes: tuple[CycleClass, ...]
    series: TruncatedSeries

    def count(self, length: int, bumps: int | None = None) -> int:
        return sum(1 for c in self.classes if c.length == length and (bumps is None or c.bumps == bumps))


def _check_lmax(lmax: int) -> None:
    if lmax < 1:
        raise ValueError("Lmax must be at least 1")


def trace_series_matrix(g: Digraph, Lmax: int) -> WalkSeries:
    """Tr(B_u^m) from exact powers of B_u, kept as a stack of integer matrices per power of u."""
    _check_lmax(Lmax)
    m = build_matrices(g)
    w = m.W.astype(object)
    j = m.J.astype(object)
    power = [w.copy(), j.copy()]  # B_u = W + u J
    traces = [ZERO]
    for step in range(1, Lmax + 1):
        if step > 1:
            nxt = [None] * (len(power) + 1)
            for k, mk in enumerate(power):
                a = mk.dot(w)
                b = mk.dot(j)
                nxt[k] = a if nxt[k] is None else nxt[k] + a
                nxt[k + 1] = b
            power = nxt
        traces.append(BiPoly.from_u_coeffs([int(np.trace(mk)) for mk in power]))
    return WalkSeries(Lmax, tuple(traces))


def walk_estimate(g: Digraph, Lmax: int) -> int:
    return max(g.degrees) ** Lmax * g.n_directed


def _guard(g: Digraph, Lmax: int, budget: int) -> None:
    est = walk_estimate(g, Lmax)
    if est > budget:
        raise BudgetExceeded(f"estimated {est} walk states exceed the budget {budget}")


def _closed_sequences(g: Digraph, Lmax: int, minimal_first: bool):
    """Yield (sequence, cyclic bump count) for every closed edge sequence of length <= Lmax.

    With ``minimal_first`` only sequences whose first edge has the smallest index
    are produced, which is all the rotation canonicaliser needs.
    """
    out_edges = g.out_edges
    inv = [g.inverse(a) for a in range(g.n_directed)]
    tgt = [g.target(a) for a in range(g.n_directed)]
    src = [g.source(a) for a in range(g.n_directed)]
    seq: list[int] = []

    def extend(bumps: int):
        last = seq[-1]
        first = seq[0]
        if tgt[last] == src[first]:
            yield tuple(seq), bumps + (first == inv[last])
        if len(seq) == Lmax:
            return
        for e in out_edges[tgt[last]]:
            if minimal_first and e < first:
                continue
            seq.append(e)
            yield from extend(bumps + (e == inv[last]))
            seq.pop()

    for e1 in range(g.n_directed):
        seq.append(e1)
        yield from extend(0)
        seq.pop()


def trace_series_walks(g: Digraph, Lmax: int, budget: int = DEFAULT_BUDGET) -> WalkSeries:
    """T_m(u) by depth-first enumeration of closed edge sequences."""
    _check_lmax(Lmax)
    _guard(g, Lmax, budget)
    counts: list[Counter] = [Counter() for _ in range(Lmax + 1)]
    for s, b in _closed_sequences(g, Lmax, minimal_first=False):
        counts[len(s)][b] += 1
    traces = [ZERO]
    for m in range(1, Lmax + 1):
        traces.append(BiPoly({(0, b): c for b, c in counts[m].items()}))
    return WalkSeries(Lmax, tuple(traces))


def _is_least_rotation(s: tuple) -> bool:
    return all(s <= s[k:] + s[:k] for k in range(1, len(s)))


def _is_primitive(s: tuple) -> bool:
    n = len(s)
    for p in range(1, n):
        if n % p == 0 and s == s[p:] + s[:p]:
            return False
    return True


def primitive_classes(g: Digraph, Lmax: int, budget: int = DEFAULT_BUDGET) -> list[CycleClass]:
    _check_lmax(Lmax)
    _guard(g, Lmax, budget)
    out = []
    for s, b in _closed_sequences(g, Lmax, minimal_first=True):
        if _is_least_rotation(s) and _is_primitive(s):
            out.append(CycleClass(s, b))
    return out


def euler_truncation(g: Digraph, Lmax: int, budget: int = DEFAULT_BUDGET) -> EulerTruncation:
    """prod_C (1 - q^|C| u^b(C))^{-1} over primitive classes, expanded to q^Lmax."""
    classes = primitive_classes(g, Lmax, budget)
    groups = Counter((c.length, c.bumps) for c in classes)
    series = TruncatedSeries(Lmax, (ONE,) + (ZERO,) * Lmax)
    for (length, bumps), n in sorted(groups.items()):
        # (1 - x)^{-n} = sum_j C(n+j-1, j) x^j with x = q^length u^bumps
        coeffs = [ZERO] * (Lmax + 1)
        for j in range(Lmax // length + 1):
            coeffs[j * length] = BiPoly({(0, j * bumps): comb(n + j - 1, j)})
        series = series * TruncatedSeries(Lmax, tuple(coeffs))
    return EulerTruncation(Lmax, tuple(classes), series)


def compare_to_determinant(g: Digraph, Lmax: int, budget: int = DEFAULT_BUDGET) -> list[IdentityReport]:
    """Both trace methods, the log-series of the determinant and the Euler truncation, exactly."""
    _check_lmax(Lmax)
    p = edge_zeta_inverse(g)
    by_matrix = trace_series_matrix(g, Lmax)
    by_walks = trace_series_walks(g, Lmax, budget)
    logs = log_inverse_series(p, Lmax)
    euler = euler_truncation(g, Lmax, budget)
    inverse = TruncatedSeries.from_poly(p, Lmax).inverse()

    def pack(series) -> BiPoly:
        # fold a q-indexed list of u-polynomials into one BiPoly for the witness
        out = ZERO
        for m, c in enumerate(series):
            for (_, j), v in c.items():
                out = out + BiPoly({(m, j): v})
        return out

    m_range = range(1, Lmax + 1)
    reports = [
        IdentityReport(
            "trace-matrix-vs-walks",
            {"Lmax": Lmax},
            pack([ZERO] + [by_matrix[m] - by_walks[m] for m in m_range]),
        ),
        IdentityReport(
            "log-series-vs-traces",
            {"Lmax": Lmax},
            pack([ZERO] + [logs[m] * m - by_matrix[m] for m in m_range]),
        ),
        IdentityReport(
            "euler-vs-inverse",
            {"Lmax": Lmax, "classes": len(euler.classes)},
            pack([euler.series[m] - inverse[m] for m in range(Lmax + 1)]),
        ),
    ]
    return reports
