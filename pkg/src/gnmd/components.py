"""Connected components and degree-structure measurements."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sampler import SimpleGraph

__all__ = ["UnionFind", "ComponentReport", "connected_components", "report"]


class UnionFind:
    """Disjoint sets over [0, n) with path compression and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, v: int) -> int:
        parent = self.parent
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]

    def component_sizes(self) -> list[tuple[int, int]]:
        """(size, smallest member) per component, largest first."""
        smallest: dict[int, int] = {}
        for v in range(len(self.parent)):
            root = self.find(v)
            if root not in smallest:
                smallest[root] = v
        out = [(self.size[root], first) for root, first in smallest.items()]
        out.sort(key=lambda t: (-t[0], t[1]))
        return out


@dataclass(frozen=True)
class ComponentReport:
    """Component sizes and degree histogram of a simple graph.

    Attributes:
        sizes: Component sizes in descending order; sums to n.
        largest_fraction: sizes[0] / n.
        second_fraction: sizes[1] / n, or 0.0 for a connected graph.
        degree_counts: Number of vertices of each degree 0..d; sums to n,
            and the degree-weighted sum equals 2m (handshake identity).
        n: Vertex count.
        m: Edge count.
    """

    sizes: tuple[int, ...]
    largest_fraction: float
    second_fraction: float
    degree_counts: tuple[int, ...]
    n: int
    m: int


def connected_components(g: SimpleGraph) -> list[int]:
    """Component sizes of the graph, sorted descending.

    Single pass over the edge list with union-find; O((n + m) alpha(n)).
    """
    uf = UnionFind(g.n)
    union = uf.union
    for u, v in g.edges.tolist():
        union(u, v)
    return [size for size, _ in uf.component_sizes()]


def report(g: SimpleGraph) -> ComponentReport:
    """Component decomposition plus the degree histogram of the graph."""
    sizes = connected_components(g)
    total = sum(sizes)
    assert total == g.n, f"component sizes sum to {total}, expected {g.n}"
    degree_counts = np.bincount(g.degrees(), minlength=g.d + 1)
    weighted = int(np.arange(degree_counts.size) @ degree_counts)
    assert weighted == 2 * g.m, f"handshake failed: {weighted} != {2 * g.m}"
    return ComponentReport(
        sizes=tuple(sizes),
        largest_fraction=sizes[0] / g.n,
        second_fraction=(sizes[1] / g.n) if len(sizes) > 1 else 0.0,
        degree_counts=tuple(int(c) for c in degree_counts),
        n=g.n,
        m=g.m,
    )
