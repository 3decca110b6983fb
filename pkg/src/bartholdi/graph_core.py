"""Graph data model, validation and every matrix attached to a graph.

Directed edges are indexed 0..2n_E-1: index a < n_E is the canonical
orientation (small vertex -> large vertex) of the a-th undirected edge and
a + n_E is its inverse.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .algebra import ONE, BiPoly, U, det_fraction_free
from .errors import Disconnected, DuplicateEdge, SelfLoop, ValidationError


@dataclass(frozen=True)
class Digraph:
    n_vertices: int
    edges: tuple[tuple[int, int], ...]
    name: str = field(default="", compare=False)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_directed(self) -> int:
        return 2 * len(self.edges)

    def source(self, a: int) -> int:
        n = self.n_edges
        return self.edges[a][0] if a < n else self.edges[a - n][1]

    def target(self, a: int) -> int:
        n = self.n_edges
        return self.edges[a][1] if a < n else self.edges[a - n][0]

    def inverse(self, a: int) -> int:
        n = self.n_edges
        return a + n if a < n else a - n

    @cached_property
    def directed_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((self.source(a), self.target(a)) for a in range(self.n_directed))

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n_vertices
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return tuple(deg)

    @cached_property
    def out_edges(self) -> tuple[tuple[int, ...], ...]:
        """Directed edge indices grouped by source vertex."""
        out: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for a in range(self.n_directed):
            out[self.source(a)].append(a)
        return tuple(tuple(x) for x in out)

    @property
    def t_values(self) -> tuple[int, ...]:
        return tuple(d - 1 for d in self.degrees)

    @property
    def distinct_t(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.t_values)))

    @property
    def mean_degree(self) -> Fraction:
        return Fraction(2 * self.n_edges, self.n_vertices)

    @property
    def u_star(self) -> Fraction | int:
        v = 1 - Fraction(self.n_edges, self.n_vertices)
        return v.numerator if v.denominator == 1 else v

    @property
    def fingerprint(self) -> dict:
        return {"name": self.name, "n_vertices": self.n_vertices, "n_edges": self.n_edges}

    def is_regular(self) -> bool:
        return len(set(self.degrees)) == 1

    def regular_t(self) -> int | None:
        """t such that every vertex has degree t+1, or None when irregular."""
        return self.degrees[0] - 1 if self.is_regular() else None

    def adjacency_lists(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj


def build_digraph(vertex_count: int, edges: Iterable[Sequence[int]], name: str = "") -> Digraph:
    """Validate an undirected simple connected graph and fix its edge layout."""
    if vertex_count < 1:
        raise ValidationError("vertex count must be positive")
    canon: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for pair in edges:
        a, b = (int(x) for x in pair)
        for v in (a, b):
            if not 0 <= v < vertex_count:
                raise ValidationError(f"vertex {v} out of range 0..{vertex_count - 1}")
        if a == b:
            raise SelfLoop(a)
        e = (a, b) if a < b else (b, a)
        if e in seen:
            raise DuplicateEdge(e)
        seen.add(e)
        canon.append(e)
    if not canon:
        raise ValidationError("edge list is empty")
    g = Digraph(vertex_count, tuple(canon), name)
    reached = _reachable(g)
    if len(reached) != vertex_count:
        missing = min(set(range(vertex_count)) - reached)
        raise Disconnected(missing)
    return g


def _reachable(g: Digraph) -> set[int]:
    adj = g.adjacency_lists()
    seen = {0}
    todo = deque([0])
    while todo:
        v = todo.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


@dataclass(frozen=True, eq=False)
class GraphMatrices:
    A: np.ndarray
    D: np.ndarray
    Q: np.ndarray
    Q_u: np.ndarray  # object array of BiPoly
    L: np.ndarray
    L_tilde: np.ndarray
    Delta: np.ndarray
    Delta_tilde: np.ndarray
    W: np.ndarray
    J: np.ndarray
    B_u: np.ndarray  # object array of BiPoly
    D_check: np.ndarray
    Q_check_u: np.ndarray  # object array of BiPoly

    def B_at(self, u0) -> list[list]:
        """B_u with u specialised to a rational value, as nested lists."""
        from .algebra import as_rational

        u0 = as_rational(u0)
        w = self.W.tolist()
        j = self.J.tolist()
        return [[w[r][c] + u0 * j[r][c] for c in range(len(w))] for r in range(len(w))]


def build_matrices(g: Digraph, W: np.ndarray | None = None) -> GraphMatrices:
    """All matrices of the graph; ``W`` may be overridden (negative controls)."""
    n, m, nd = g.n_vertices, g.n_edges, g.n_directed
    A = np.zeros((n, n), dtype=np.int64)
    for a, b in g.edges:
        A[a, b] = A[b, a] = 1
    D = np.diag(np.array(g.degrees, dtype=np.int64))
    Qm = D - np.eye(n, dtype=np.int64)
    one_minus_u = ONE - U
    Q_u = np.empty((n, n), dtype=object)
    for i in range(n):
        for k in range(n):
            Q_u[i, k] = one_minus_u * (g.degrees[i] - one_minus_u) if i == k else BiPoly()
    L = np.zeros((m, n), dtype=np.int64)
    Lt = np.zeros((m, n), dtype=np.int64)
    for e, (s, t) in enumerate(g.edges):
        L[e, t] = 1
        L[e, s] = -1
        Lt[e, t] = Lt[e, s] = 1
    if W is None:
        W = np.zeros((nd, nd), dtype=np.int64)
        for a in range(nd):
            for b in g.out_edges[g.target(a)]:
                if b != g.inverse(a):
                    W[a, b] = 1
    J = np.zeros((nd, nd), dtype=np.int64)
    for a in range(nd):
        J[a, g.inverse(a)] = 1
    B_u = np.empty((nd, nd), dtype=object)
    for a in range(nd):
        for b in range(nd):
            B_u[a, b] = BiPoly.const(int(W[a, b])) + U * int(J[a, b])
    D_check = np.diag(np.array([g.degrees[g.source(a)] for a in range(nd)], dtype=np.int64))
    Q_check_u = np.empty((nd, nd), dtype=object)
    for a in range(nd):
        for b in range(nd):
            Q_check_u[a, b] = one_minus_u * (int(D_check[a, a]) - one_minus_u) if a == b else BiPoly()
    return GraphMatrices(
        A=A,
        D=D,
        Q=Qm,
        Q_u=Q_u,
        L=L,
        L_tilde=Lt,
        Delta=L.T @ L,
        Delta_tilde=Lt.T @ Lt,
        W=W,
        J=J,
        B_u=B_u,
        D_check=D_check,
        Q_check_u=Q_check_u,
    )


@dataclass(frozen=True)
class GraphInfo:
    is_regular: bool
    t: int | None
    is_bipartite: bool
    bipartition: tuple[tuple[int, ...], tuple[int, ...]] | None
    is_tree: bool
    spanning_tree_count: int


def bipartition(g: Digraph) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """2-colouring by BFS, or None when an odd cycle exists."""
    adj = g.adjacency_lists()
    colour = [-1] * g.n_vertices
    colour[0] = 0
    todo = deque([0])
    while todo:
        v = todo.popleft()
        for w in adj[v]:
            if colour[w] < 0:
                colour[w] = 1 - colour[v]
                todo.append(w)
            elif colour[w] == colour[v]:
                return None
    side0 = tuple(v for v in range(g.n_vertices) if colour[v] == 0)
    side1 = tuple(v for v in range(g.n_vertices) if colour[v] == 1)
    return side0, side1


def laplacian(g: Digraph) -> list[list[int]]:
    n = g.n_vertices
    lap = [[0] * n for _ in range(n)]
    for a, b in g.edges:
        lap[a][a] += 1
        lap[b][b] += 1
        lap[a][b] -= 1
        lap[b][a] -= 1
    return lap


def laplacian_cofactor(g: Digraph, i: int = 0, j: int = 0) -> int:
    """Signed (i, j) cofactor of the Laplacian, by fraction-free elimination."""
    lap = laplacian(g)
    minor = [row[:j] + row[j + 1:] for r, row in enumerate(lap) if r != i]
    if not minor:
        return 1
    c = det_fraction_free(minor)
    return c if (i + j) % 2 == 0 else -c


def spanning_tree_count(g: Digraph) -> int:
    return laplacian_cofactor(g, 0, 0)


def graph_info(g: Digraph) -> GraphInfo:
    parts = bipartition(g)
    return GraphInfo(
        is_regular=g.is_regular(),
        t=g.regular_t(),
        is_bipartite=parts is not None,
        bipartition=parts,
        is_tree=g.n_edges == g.n_vertices - 1,
        spanning_tree_count=spanning_tree_count(g),
    )
