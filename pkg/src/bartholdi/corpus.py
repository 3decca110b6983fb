"""Builtin graphs addressable as ``builtin:<name>`` and a random generator."""

from __future__ import annotations

import itertools
import random

from .graph_core import Digraph, build_digraph


def cycle(n: int) -> Digraph:
    return build_digraph(n, [(i, (i + 1) % n) for i in range(n)], name=f"C{n}")


def path(n: int) -> Digraph:
    return build_digraph(n, [(i, i + 1) for i in range(n - 1)], name=f"P{n}")


def complete(n: int) -> Digraph:
    return build_digraph(n, itertools.combinations(range(n), 2), name=f"K{n}")


def complete_bipartite(a: int, b: int) -> Digraph:
    edges = [(i, a + j) for i in range(a) for j in range(b)]
    return build_digraph(a + b, edges, name=f"K{a}{b}")


def petersen() -> Digraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return build_digraph(10, outer + spokes + inner, name="Petersen")


_BUILDERS = {
    "P2": lambda: path(2),
    "P3": lambda: path(3),
    "C3": lambda: cycle(3),
    "C4": lambda: cycle(4),
    "C5": lambda: cycle(5),
    "C6": lambda: cycle(6),
    "K4": lambda: complete(4),
    "K5": lambda: complete(5),
    "K33": lambda: complete_bipartite(3, 3),
    "K13": lambda: complete_bipartite(1, 3),
    "Petersen": petersen,
}

BUILTIN_NAMES = tuple(_BUILDERS)
REGULAR_NAMES = ("C3", "C4", "C5", "C6", "K4", "K5", "K33", "Petersen")


def builtin(name: str) -> Digraph:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise KeyError(f"unknown builtin graph {name!r}; choose from {', '.join(BUILTIN_NAMES)}") from None


def builtin_corpus() -> list[Digraph]:
    return [builtin(n) for n in BUILTIN_NAMES]


def random_connected_graph(rng: random.Random, n_vertices: int, extra_edge_prob: float = 0.3) -> Digraph:
    """Random spanning tree plus independent extra edges."""
    order = list(range(n_vertices))
    rng.shuffle(order)
    edges = set()
    for k in range(1, n_vertices):
        a, b = order[k], order[rng.randrange(k)]
        edges.add((min(a, b), max(a, b)))
    for a, b in itertools.combinations(range(n_vertices), 2):
        if (a, b) not in edges and rng.random() < extra_edge_prob:
            edges.add((a, b))
    return build_digraph(n_vertices, sorted(edges), name=f"random{n_vertices}")
