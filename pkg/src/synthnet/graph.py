"""Undirected acquaintance graphs and per-skill endorsement digraphs."""

from __future__ import annotations

from typing import Iterable, Iterator


class GraphError(Exception):
    """Base class for structural errors on graphs and endorsement sets."""


class SelfLoopError(GraphError):
    pass


class UnknownVertexError(GraphError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class NotAnEdgeError(GraphError):
    """An arc was requested between two vertices that are not adjacent."""


class Graph:
    """Simple undirected graph on dense integer vertex ids ``0..n-1``.

    Vertices are numbered in insertion order and never removed. Each vertex
    keeps a neighbor set (for membership tests) and a neighbor list in edge
    insertion order (for O(1) uniform sampling of a neighbor).
    """

    __slots__ = ("_adj", "_nbrs", "_m")

    def __init__(self, n: int = 0):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        self._adj: list[set[int]] = [set() for _ in range(n)]
        self._nbrs: list[list[int]] = [[] for _ in range(n)]
        self._m = 0

    @classmethod
    def complete(cls, n: int) -> Graph:
        g = cls(n)
        for u in range(n):
            for v in range(u + 1, n):
                g.add_edge(u, v)
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        g = cls(n)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    def __len__(self) -> int:
        return len(self._adj)

    def __contains__(self, u) -> bool:
        return isinstance(u, int) and 0 <= u < len(self._adj)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return len(self) == len(other) and self._adj == other._adj

    def __repr__(self) -> str:
        return f"Graph(nodes={self.number_of_nodes()}, edges={self.number_of_edges()})"

    def number_of_nodes(self) -> int:
        return len(self._adj)

    def number_of_edges(self) -> int:
        return self._m

    def _check(self, u: int) -> None:
        if u not in self:
            raise UnknownVertexError(f"unknown vertex {u!r}")

    def add_vertex(self) -> int:
        self._adj.append(set())
        self._nbrs.append([])
        return len(self._adj) - 1

    def add_edge(self, u: int, v: int) -> bool:
        """Add the edge ``{u, v}``; return False if it was already present."""
        self._check(u)
        self._check(v)
        if u == v:
            raise SelfLoopError(f"self-loop on vertex {u}")
        if v in self._adj[u]:
            return False
        self._adj[u].add(v)
        self._adj[v].add(u)
        self._nbrs[u].append(v)
        self._nbrs[v].append(u)
        self._m += 1
        return True

    def has_edge(self, u: int, v: int) -> bool:
        return u in self and v in self._adj[u]

    def neighbors(self, u: int) -> set[int]:
        """Neighbor set of ``u``. Treat the returned set as read-only."""
        self._check(u)
        return self._adj[u]

    def neighbor_list(self, u: int) -> list[int]:
        self._check(u)
        return self._nbrs[u]

    def degree(self, u: int) -> int:
        self._check(u)
        return len(self._adj[u])

    def adjacency(self, u: int) -> tuple[frozenset[int], int]:
        """Return ``(N(u), d(u))``."""
        self._check(u)
        nbrs = self._adj[u]
        return frozenset(nbrs), len(nbrs)

    def degrees(self) -> list[int]:
        return [len(a) for a in self._adj]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, in lexicographic order."""
        for u, nbrs in enumerate(self._adj):
            for v in sorted(nbrs):
                if u < v:
                    yield u, v

    def edge_list(self) -> list[tuple[int, int]]:
        return list(self.edges())

    def is_connected(self) -> bool:
        n = len(self._adj)
        if n == 0:
            return True
        seen = bytearray(n)
        seen[0] = 1
        stack = [0]
        count = 1
        while stack:
            u = stack.pop()
            for v in self._adj[u]:
                if not seen[v]:
                    seen[v] = 1
                    count += 1
                    stack.append(v)
        return count == n

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple[Graph, list[int]]:
        """Induced subgraph relabelled to ``0..k-1`` in increasing original id.

        Returns the subgraph and the list mapping new ids to original ids.
        """
        keep = sorted(set(vertices))
        for u in keep:
            self._check(u)
        index = {u: i for i, u in enumerate(keep)}
        sub = Graph(len(keep))
        for u in keep:
            for v in sorted(self._adj[u]):
                if u < v and v in index:
                    sub.add_edge(index[u], index[v])
        return sub, keep

    def copy(self) -> Graph:
        g = Graph(0)
        g._adj = [set(a) for a in self._adj]
        g._nbrs = [list(a) for a in self._nbrs]
        g._m = self._m
        return g


class EndorsementSet:
    """One directed subgraph of ``base`` per skill.

    An arc ``(u, v)`` in digraph ``k`` means *u endorses v for skill k*; it is
    only allowed when ``{u, v}`` is an edge of the base graph. Both
    orientations of an edge may coexist in the same digraph.
    """

    def __init__(self, base: Graph, skill_count: int):
        if skill_count < 0:
            raise ValueError("skill count must be nonnegative")
        self.base = base
        self._arcs: list[set[tuple[int, int]]] = [set() for _ in range(skill_count)]

    @property
    def skill_count(self) -> int:
        return len(self._arcs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EndorsementSet):
            return NotImplemented
        return self._arcs == other._arcs and self.base == other.base

    def __repr__(self) -> str:
        return f"EndorsementSet(skills={self.skill_count}, arcs={self.number_of_arcs()})"

    def _check_skill(self, k: int) -> None:
        if not 0 <= k < len(self._arcs):
            raise IndexError(f"skill index {k} out of range [0, {len(self._arcs)})")

    def add_arc(self, k: int, u: int, v: int) -> bool:
        self._check_skill(k)
        if u == v:
            raise SelfLoopError(f"self-arc on vertex {u}")
        if not self.base.has_edge(u, v):
            # distinguishes a missing vertex from a missing edge
            self.base._check(u)
            self.base._check(v)
            raise NotAnEdgeError(f"arc {u}->{v} is not backed by a base edge")
        if (u, v) in self._arcs[k]:
            return False
        self._arcs[k].add((u, v))
        return True

    def remove_arc(self, k: int, u: int, v: int) -> bool:
        self._check_skill(k)
        try:
            self._arcs[k].remove((u, v))
        except KeyError:
            return False
        return True

    def has_arc(self, k: int, u: int, v: int) -> bool:
        self._check_skill(k)
        return (u, v) in self._arcs[k]

    def arcs(self, k: int) -> set[tuple[int, int]]:
        self._check_skill(k)
        return self._arcs[k]

    def sorted_arcs(self, k: int) -> list[tuple[int, int]]:
        return sorted(self.arcs(k))

    def number_of_arcs(self, k: int | None = None) -> int:
        if k is None:
            return sum(len(a) for a in self._arcs)
        return len(self.arcs(k))

    def in_degrees(self, k: int) -> list[int]:
        deg = [0] * len(self.base)
        for _, v in self.arcs(k):
            deg[v] += 1
        return deg

    def endorsed(self, k: int) -> set[int]:
        """Vertices with positive in-degree in digraph ``k``."""
        return {v for _, v in self.arcs(k)}

    def restrict(self, base: Graph, mapping: list[int]) -> EndorsementSet:
        """Arcs between kept vertices, relabelled through ``mapping`` (new -> old)."""
        index = {old: new for new, old in enumerate(mapping)}
        out = EndorsementSet(base, self.skill_count)
        for k, arcs in enumerate(self._arcs):
            for u, v in arcs:
                if u in index and v in index:
                    out.add_arc(k, index[u], index[v])
        return out

    def copy(self) -> EndorsementSet:
        out = EndorsementSet(self.base, 0)
        out._arcs = [set(a) for a in self._arcs]
        return out
