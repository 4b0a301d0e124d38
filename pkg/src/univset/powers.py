"""Graphs pairing up representations p = a + a' over a candidate basis.

Every perfect d-th power p <= n picks the lexicographically first pair of
basis elements summing to it, giving one edge per represented power (a
self-loop when a = p - a, counting once toward the degree). Dense cores of
the graph and counts of distinct-edge walks quantify how much additive
structure the basis carries; since each label equals the sum of its edge's
endpoints, labels along a walk telescope: l_1 - l_2 + ... +- l_k =
v_0 + (-1)^(k-1) v_k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

from .errors import BudgetExceeded


def power_set(d: int, n: int) -> tuple[int, ...]:
    """Perfect d-th powers t^d <= n for t >= 1."""
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    out = []
    t = 1
    while t**d <= n:
        out.append(t**d)
        t += 1
    return tuple(out)


@dataclass(frozen=True)
class BasisGraph:
    """Vertices are basis integers; edge (a, a') with label p records the
    chosen representation p = a + a'. missing lists unrepresented powers."""

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    labels: tuple[int, ...]
    d: int
    n: int
    missing: tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.edges) != len(self.labels):
            raise ValueError("one label per edge")
        vset = set(self.vertices)
        for (u, v), p in zip(self.edges, self.labels):
            if u > v:
                raise ValueError(f"edge ({u}, {v}) not sorted")
            if u not in vset or v not in vset:
                raise ValueError(f"edge ({u}, {v}) leaves the vertex set")
            if u + v != p:
                raise ValueError(f"label {p} != endpoint sum {u + v}")

    @cached_property
    def adjacency(self) -> dict:
        adj = {v: [] for v in self.vertices}
        for i, (u, v) in enumerate(self.edges):
            adj[u].append((i, v))
            if v != u:
                adj[v].append((i, u))
        return adj

    def degree(self, v: int) -> int:
        # a loop contributes 1
        return len(self.adjacency[v])

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def density(self) -> float:
        return self.n_edges / self.n_vertices if self.n_vertices else 0.0

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [list(e) for e in self.edges],
            "labels": list(self.labels),
            "d": self.d,
            "n": self.n,
            "missing": list(self.missing),
        }


def build_basis_graph(A, d: int, n: int) -> BasisGraph:
    """One edge per power p = t^d <= n representable as a + a' with both
    parts in A; ties broken toward the lexicographically first pair."""
    avals = sorted(set(int(a) for a in A))
    aset = set(avals)
    edges, labels, missing = [], [], []
    for p in power_set(d, n):
        for a in avals:
            if 2 * a > p:
                missing.append(p)
                break
            if p - a in aset:
                edges.append((a, p - a))
                labels.append(p)
                break
        else:
            missing.append(p)
    return BasisGraph(
        vertices=tuple(avals), edges=tuple(edges), labels=tuple(labels),
        d=d, n=n, missing=tuple(missing),
    )


def min_degree_subgraph(g: BasisGraph, delta: float, *,
                        removal_order: str = "ascending") -> BasisGraph:
    """Iteratively delete vertices of degree < delta; the survivor (the
    delta-core, possibly empty) does not depend on the deletion order."""
    if removal_order not in ("ascending", "descending"):
        raise ValueError(f"unknown removal order {removal_order!r}")
    alive_v = set(g.vertices)
    alive_e = set(range(g.n_edges))
    deg = {v: g.degree(v) for v in g.vertices}
    while True:
        doomed = [v for v in alive_v if deg[v] < delta]
        if not doomed:
            break
        v = min(doomed) if removal_order == "ascending" else max(doomed)
        alive_v.discard(v)
        for i, other in g.adjacency[v]:
            if i in alive_e:
                alive_e.discard(i)
                if other != v and other in alive_v:
                    deg[other] -= 1
        deg[v] = 0
    kept = sorted(alive_e)
    return BasisGraph(
        vertices=tuple(sorted(alive_v)),
        edges=tuple(g.edges[i] for i in kept),
        labels=tuple(g.labels[i] for i in kept),
        d=g.d, n=g.n, missing=g.missing,
    )


def _walk_dfs(g: BasisGraph, start: int, k: int, target, emit, budget):
    """Count distinct-edge walks of length exactly k from start; target
    None counts all endpoints. Raises BudgetExceeded past budget edge
    traversals, carrying the count found so far."""
    if start not in g.adjacency:
        return 0
    count = 0
    steps = 0
    used = [False] * g.n_edges
    path = [start]
    labels = []

    def rec(v: int, depth: int):
        nonlocal count, steps
        if depth == k:
            if target is None or v == target:
                count += 1
                if emit is not None:
                    emit(tuple(path), tuple(labels))
            return
        for i, other in g.adjacency[v]:
            if used[i]:
                continue
            steps += 1
            if budget is not None and steps > budget:
                raise BudgetExceeded(
                    f"walk enumeration passed {budget} steps", partial_count=count
                )
            used[i] = True
            path.append(other)
            labels.append(g.labels[i])
            rec(other, depth + 1)
            labels.pop()
            path.pop()
            used[i] = False

    rec(start, 0)
    return count


def count_paths(g: BasisGraph, a: int, b: int, k: int, *,
                emit=None, budget: int | None = None) -> int:
    """Distinct-edge walks of length exactly k from a to b."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return _walk_dfs(g, a, k, b, emit, budget)


def count_walks_from(g: BasisGraph, a: int, k: int, *,
                     emit=None, budget: int | None = None) -> int:
    """Distinct-edge walks of length exactly k from a, any endpoint."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return _walk_dfs(g, a, k, None, emit, budget)


def lower_bound_exponent(d: int) -> float:
    """Exponent e(d) with |A| = Omega(n^e(d)) forced for any basis of the
    d-th powers up to n, via the count of three-term solutions."""
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    return 0.75 - 1.0 / (2.0 * math.sqrt(d)) - 1.0 / (2.0 * (d - 1))
