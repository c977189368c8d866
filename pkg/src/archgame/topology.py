"""Undirected AS graphs and connected components among adopters."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable


class EdgeListFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


@dataclass(frozen=True)
class Graph:
    n_nodes: int
    edges: frozenset  # of (u, v) with u < v

    def __post_init__(self):
        if self.n_nodes < 0:
            raise ValueError("negative node count")
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < self.n_nodes and 0 <= v < self.n_nodes):
                raise ValueError(f"edge ({u}, {v}) outside [0, {self.n_nodes})")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, n_nodes: int, edges: Iterable) -> "Graph":
        return cls(n_nodes, frozenset(tuple(e) for e in edges))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, frozenset((u, v) for u in range(n) for v in range(u + 1, n)))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(n, frozenset((u, u + 1) for u in range(n - 1)))


def parse_edge_list(text: str) -> Graph:
    """Parse ``u v`` lines with an optional leading ``nodes K`` header.

    Blank lines and ``#`` comments are skipped; duplicate edges collapse.
    Without a header the node count is one more than the largest id.
    """
    n_nodes = None
    edges = set()
    seen_edge = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "nodes":
            if seen_edge or n_nodes is not None or len(parts) != 2:
                raise EdgeListFormatError("'nodes K' must be a single header before any edge", lineno)
            try:
                n_nodes = int(parts[1])
            except ValueError:
                raise EdgeListFormatError(f"bad node count {parts[1]!r}", lineno) from None
            if n_nodes < 0:
                raise EdgeListFormatError("negative node count", lineno)
            continue
        if len(parts) != 2:
            raise EdgeListFormatError(f"expected 'u v', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListFormatError(f"non-integer node id in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise EdgeListFormatError(f"negative node id in {line!r}", lineno)
        if u == v:
            raise EdgeListFormatError(f"self-loop at node {u}", lineno)
        if n_nodes is not None and max(u, v) >= n_nodes:
            raise EdgeListFormatError(f"node id {max(u, v)} outside declared range [0, {n_nodes})", lineno)
        edges.add((min(u, v), max(u, v)))
        seen_edge = True
    if n_nodes is None:
        n_nodes = 1 + max((v for _, v in edges), default=-1)
    return Graph(n_nodes, frozenset(edges))


def load_edge_list(path) -> Graph:
    return parse_edge_list(Path(path).read_text())


class _DisjointSet:
    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.size = {x: 1 for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:  # path compression
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]


def adopter_components(graph: Graph, adopters: Iterable[int]) -> dict[int, tuple[int, int]]:
    """Map each adopter to ``(component id, component size)`` in the subgraph
    induced by ``adopters``.  The component id is its smallest node id."""
    adopters = set(adopters)
    for a in adopters:
        if not 0 <= a < graph.n_nodes:
            raise ValueError(f"node {a} outside [0, {graph.n_nodes})")
    ds = _DisjointSet(sorted(adopters))
    for u, v in graph.edges:
        if u in adopters and v in adopters:
            ds.union(u, v)
    label: dict[int, int] = {}
    for a in sorted(adopters):
        label.setdefault(ds.find(a), a)
    return {a: (label[ds.find(a)], ds.size[ds.find(a)]) for a in sorted(adopters)}
