"""Simple undirected graphs on finite labelled vertex sets.

A :class:`Graph` keeps its vertex labels in a fixed order and maps them to
dense indices ``0..n-1``; edges are stored as index pairs ``(i, j)`` with
``i < j``, sorted lexicographically. That order is the edge order used when
building alternating matrices.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import deque
from typing import Hashable, Iterable, Iterator, Sequence

from .errors import EmptySubset, ParseError, TooLarge, UnknownVertex

Vertex = Hashable

MAX_ISO_VERTICES = 8


class Graph:
    __slots__ = ("vertices", "_index", "_edges", "_adj")

    def __init__(self, vertices: Iterable[Vertex], edges: Iterable[Iterable[Vertex]] = ()):
        self.vertices: tuple = tuple(vertices)
        self._index = {v: i for i, v in enumerate(self.vertices)}
        if len(self._index) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        pairs = set()
        for e in edges:
            e = tuple(e)
            if len(e) != 2:
                raise ValueError(f"edge {e!r} is not a pair")
            i, j = (self.index(v) for v in e)
            if i == j:
                raise ValueError(f"self-loop at {e[0]!r}")
            pairs.add((min(i, j), max(i, j)))
        self._edges = tuple(sorted(pairs))
        adj = [set() for _ in self.vertices]
        for i, j in self._edges:
            adj[i].add(j)
            adj[j].add(i)
        self._adj = tuple(frozenset(a) for a in adj)

    # construction helpers; labels default to 1..n as in [n]

    @classmethod
    def on(cls, n: int, edges: Iterable[Iterable[int]] = ()) -> Graph:
        return cls(range(1, n + 1), edges)

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls.on(n)

    @classmethod
    def complete(cls, n: int) -> Graph:
        return cls.on(n, itertools.combinations(range(1, n + 1), 2))

    @classmethod
    def path(cls, n: int) -> Graph:
        return cls.on(n, [(i, i + 1) for i in range(1, n)])

    @classmethod
    def cycle(cls, n: int) -> Graph:
        return cls.on(n, [(i, i % n + 1) for i in range(1, n + 1)])

    @classmethod
    def star(cls, n: int) -> Graph:
        """K_{1,n-1} with centre 1."""
        return cls.on(n, [(1, i) for i in range(2, n + 1)])

    @classmethod
    def perfect_matching(cls, k: int) -> Graph:
        """k disjoint edges {1,2}, {3,4}, ... on 2k vertices."""
        return cls.on(2 * k, [(2 * i + 1, 2 * i + 2) for i in range(k)])

    @classmethod
    def from_index_edges(cls, vertices: Sequence[Vertex], pairs: Iterable[tuple[int, int]]) -> Graph:
        return cls(vertices, [(vertices[i], vertices[j]) for i, j in pairs])

    # basic accessors

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def index_edges(self) -> tuple[tuple[int, int], ...]:
        return self._edges

    @property
    def edges(self) -> tuple[tuple[Vertex, Vertex], ...]:
        V = self.vertices
        return tuple((V[i], V[j]) for i, j in self._edges)

    def index(self, v: Vertex) -> int:
        try:
            return self._index[v]
        except (KeyError, TypeError):
            raise UnknownVertex(v) from None

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return self.index(v) in self._adj[self.index(u)]

    def has_index_edge(self, i: int, j: int) -> bool:
        return j in self._adj[i]

    def neighbors(self, v: Vertex) -> frozenset:
        return frozenset(self.vertices[j] for j in self._adj[self.index(v)])

    def index_neighbors(self, i: int) -> frozenset[int]:
        return self._adj[i]

    def degree(self, v: Vertex) -> int:
        return len(self._adj[self.index(v)])

    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self._adj)

    def __eq__(self, other):
        return isinstance(other, Graph) and self.vertices == other.vertices and self._edges == other._edges

    def __hash__(self):
        return hash((self.vertices, self._edges))

    def __repr__(self):
        return f"Graph({list(self.vertices)}, {[list(e) for e in self.edges]})"

    # operations

    def complement(self) -> Graph:
        n = self.n
        E = set(self._edges)
        return Graph.from_index_edges(self.vertices, [e for e in itertools.combinations(range(n), 2) if e not in E])

    def induced(self, S: Iterable[Vertex]) -> Graph:
        keep = sorted({self.index(v) for v in S})
        pos = {i: k for k, i in enumerate(keep)}
        verts = [self.vertices[i] for i in keep]
        pairs = [(pos[i], pos[j]) for i, j in self._edges if i in pos and j in pos]
        return Graph.from_index_edges(verts, pairs)

    def is_connected(self, S: Iterable[Vertex] | None = None) -> bool:
        """Whether the induced subgraph on ``S`` (default: all vertices) is connected."""
        idx = set(range(self.n)) if S is None else {self.index(v) for v in S}
        return self.index_connected(idx)

    def index_connected(self, idx: Iterable[int]) -> bool:
        idx = set(idx)
        if not idx:
            raise EmptySubset("connectivity of an empty vertex set")
        start = next(iter(idx))
        seen = {start}
        stack = [start]
        while stack:
            i = stack.pop()
            for j in self._adj[i]:
                if j in idx and j not in seen:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == len(idx)

    def distance(self, u: Vertex, v: Vertex) -> float:
        """Shortest-path length, ``math.inf`` when no path exists."""
        return self.index_distance(self.index(u), self.index(v))

    def index_distance(self, i: int, j: int, within: Iterable[int] | None = None) -> float:
        allowed = None if within is None else set(within)
        dist = {i: 0}
        queue = deque([i])
        while queue:
            a = queue.popleft()
            if a == j:
                return dist[a]
            for b in self._adj[a]:
                if b not in dist and (allowed is None or b in allowed):
                    dist[b] = dist[a] + 1
                    queue.append(b)
        return math.inf

    def relabel(self, mapping: dict) -> Graph:
        """Image of the graph under a vertex bijection; vertex order follows ``mapping``'s targets
        in the order of this graph's vertices."""
        return Graph([mapping[v] for v in self.vertices], [(mapping[a], mapping[b]) for a, b in self.edges])

    # serialization

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data: dict) -> Graph:
        try:
            return cls(data["vertices"], [tuple(e) for e in data["edges"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad graph JSON: {exc}") from None

    def to_edge_list(self) -> str:
        lines = [f"{self.n} {self.m}"] + [f"{i + 1} {j + 1}" for i, j in self._edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def parse_edge_list(cls, text: str) -> Graph:
        """``n m`` on the first line, then ``m`` lines ``i j`` with 1-based vertices."""
        lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        try:
            n, m = (int(x) for x in lines[0])
            pairs = [(int(a), int(b)) for a, b in lines[1:]]
        except (IndexError, ValueError):
            raise ParseError("expected 'n m' header followed by 'i j' lines") from None
        if len(pairs) != m:
            raise ParseError(f"header announces {m} edges, found {len(pairs)}")
        try:
            g = cls.on(n, pairs)
        except (UnknownVertex, ValueError) as exc:
            raise ParseError(f"bad edge: {exc}") from None
        if g.m != m:
            raise ParseError("duplicate edges")
        return g

    @classmethod
    def parse(cls, text: str) -> Graph:
        s = text.lstrip()
        if s.startswith("{"):
            try:
                return cls.from_json(json.loads(s))
            except json.JSONDecodeError as exc:
                raise ParseError(str(exc)) from None
        return cls.parse_edge_list(text)

    @classmethod
    def load(cls, path) -> Graph:
        with open(path) as fh:
            return cls.parse(fh.read())


def all_graphs(n: int) -> Iterator[Graph]:
    """Every labelled graph on [n], ordered by edge bitmask."""
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    for mask in range(1 << len(pairs)):
        yield Graph.on(n, [e for k, e in enumerate(pairs) if mask >> k & 1])


def graph_iso(G: Graph, H: Graph) -> dict | None:
    """A vertex bijection ``s`` with ``s(E(G)) = E(H)``, or None.

    Exhaustive over bijections, pruned by degree and adjacency consistency.
    """
    if G.n != H.n or G.m != H.m:
        return None
    n = G.n
    if n > MAX_ISO_VERTICES:
        raise TooLarge("graph isomorphism search", math.factorial(n), math.factorial(MAX_ISO_VERTICES))
    dG, dH = G.degrees(), H.degrees()
    if sorted(dG) != sorted(dH):
        return None
    # high-degree vertices first gives earlier contradictions
    order = sorted(range(n), key=lambda i: -dG[i])
    image = [-1] * n
    used = [False] * n

    def extend(k: int) -> bool:
        if k == n:
            return True
        i = order[k]
        for a in range(n):
            if used[a] or dH[a] != dG[i]:
                continue
            if all(G.has_index_edge(i, order[t]) == H.has_index_edge(a, image[order[t]]) for t in range(k)):
                image[i] = a
                used[a] = True
                if extend(k + 1):
                    return True
                used[a] = False
        image[i] = -1
        return False

    if not extend(0):
        return None
    return {G.vertices[i]: H.vertices[image[i]] for i in range(n)}


# Brute-force classical invariants. These are the reference values that the
# linear-algebraic and pullback-homomorphism routes are compared against.


def matching_number(G: Graph) -> int:
    best = 0

    def grow(start: int, used: int, size: int):
        nonlocal best
        best = max(best, size)
        for k in range(start, G.m):
            i, j = G.index_edges[k]
            if not used >> i & 1 and not used >> j & 1:
                grow(k + 1, used | 1 << i | 1 << j, size + 1)

    grow(0, 0, 0)
    return best


def independence_number(G: Graph) -> int:
    for k in range(G.n, 0, -1):
        for S in itertools.combinations(range(G.n), k):
            if not any(G.has_index_edge(a, b) for a, b in itertools.combinations(S, 2)):
                return k
    return 0


def clique_number(G: Graph) -> int:
    for k in range(G.n, 0, -1):
        for S in itertools.combinations(range(G.n), k):
            if all(G.has_index_edge(a, b) for a, b in itertools.combinations(S, 2)):
                return k
    return 0


def subgraph_embedding(H: Graph, G: Graph) -> dict | None:
    """An injection ``g: V(H) -> V(G)`` sending edges of H to edges of G, or None."""
    if H.n > G.n or H.m > G.m:
        return None
    for image in itertools.permutations(range(G.n), H.n):
        if all(G.has_index_edge(image[i], image[j]) for i, j in H.index_edges):
            return {H.vertices[i]: G.vertices[image[i]] for i in range(H.n)}
    return None
