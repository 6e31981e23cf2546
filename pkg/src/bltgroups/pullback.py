"""Pullback homomorphisms of graphs and the functor into Baer groups.

An injective partial function ``f: V(G) -> V(H)`` is a pullback homomorphism
when ``{f(i), f(j)} in E(H)`` forces ``{i, j} in E(G)``; equivalently the
induced subgraph ``H[im f]`` embeds into ``G[D(f)]`` along ``f^-1``. These
compose, so graphs with pullback homomorphisms form a category.

``blt_morphism`` sends ``f`` to the group map ``(u, w) -> (l(u), lt(w))``
where ``l`` moves vertex coordinates along ``f`` and ``lt`` moves edge
coordinates along the induced map on edges; coordinates outside the image are
zero. Edge coordinates use the representative ``(x, x')`` with ``x`` before
``x'`` in vertex order, so when ``f`` reverses the order of an edge's
endpoints the coordinate changes sign (``A_(x,x') = -A_(x',x)``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Hashable, Iterator, Sequence

import numpy as np

from .baer import BaerElement, BaerGroup
from .errors import CompositionMismatch, DomainMismatch, NotPullbackHom, ParseError, TooLarge
from .fp import PrimeField
from .graph import Graph

MAX_PULLBACK_VERTICES = 8
MAX_FUNCTOR_ORDER = 3**10


@dataclass(frozen=True)
class PartialInjection:
    domain: tuple
    codomain: tuple
    pairs: tuple[tuple[Hashable, Hashable], ...]

    def __init__(self, domain: Sequence, codomain: Sequence, pairs=()):
        domain, codomain = tuple(domain), tuple(codomain)
        pairs = list(pairs.items() if isinstance(pairs, dict) else pairs)
        mapping = dict(pairs)
        dpos = {x: k for k, x in enumerate(domain)}
        cset = set(codomain)
        if len(mapping) != len(pairs):
            raise ValueError("a domain element is mapped twice")
        for x, y in mapping.items():
            if x not in dpos or y not in cset:
                raise DomainMismatch(f"pair ({x!r}, {y!r}) outside domain/codomain")
        if len(set(mapping.values())) != len(mapping):
            raise ValueError("not injective")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "codomain", codomain)
        object.__setattr__(self, "pairs", tuple(sorted(mapping.items(), key=lambda xy: dpos[xy[0]])))

    @classmethod
    def identity(cls, X: Sequence) -> PartialInjection:
        return cls(X, X, [(x, x) for x in X])

    @classmethod
    def empty(cls, X: Sequence, Y: Sequence) -> PartialInjection:
        return cls(X, Y, [])

    def get(self, x):
        return dict(self.pairs).get(x)

    def __call__(self, x):
        return self.get(x)

    def inverse_map(self) -> dict:
        return {y: x for x, y in self.pairs}

    @property
    def defined(self) -> frozenset:
        """The domain of definition D(f)."""
        return frozenset(x for x, _ in self.pairs)

    @property
    def image(self) -> frozenset:
        return frozenset(y for _, y in self.pairs)

    def is_surjective(self) -> bool:
        return len(self.pairs) == len(self.codomain)

    def to_json(self) -> dict:
        return {"pairs": [[x, y] for x, y in self.pairs]}

    @classmethod
    def from_json(cls, data: dict, X: Sequence, Y: Sequence) -> PartialInjection:
        try:
            return cls(X, Y, [tuple(xy) for xy in data["pairs"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad mapping: {exc}") from None


def _check_typing(f: PartialInjection, G: Graph, H: Graph):
    if f.domain != G.vertices or f.codomain != H.vertices:
        raise DomainMismatch("partial injection is not typed G -> H")


def pullback_violation(f: PartialInjection, G: Graph, H: Graph) -> tuple | None:
    """First pair ``{i, j}`` of G (in pair order) whose image is an edge of H but which is not an edge of G."""
    _check_typing(f, G, H)
    for (x, y), (x2, y2) in itertools.combinations(f.pairs, 2):
        if H.has_edge(y, y2) and not G.has_edge(x, x2):
            return (x, x2), (y, y2)
    return None


def is_pullback_hom(f: PartialInjection, G: Graph, H: Graph) -> bool:
    return pullback_violation(f, G, H) is None


def embeds_inverse(f: PartialInjection, G: Graph, H: Graph) -> bool:
    """``H[im f]`` is a subgraph of ``G[D f]`` after relabelling by ``f^-1``."""
    _check_typing(f, G, H)
    K = H.induced(f.image)
    back = f.inverse_map()
    GD = G.induced(f.defined)
    return all(GD.has_edge(back[a], back[b]) for a, b in K.edges)


def compose(f: PartialInjection, g: PartialInjection) -> PartialInjection:
    """``f`` then ``g``: defined at x iff f(x) and g(f(x)) are."""
    if f.codomain != g.domain:
        raise CompositionMismatch("codomain of the first map is not the domain of the second")
    gm = dict(g.pairs)
    return PartialInjection(f.domain, g.codomain, [(x, gm[y]) for x, y in f.pairs if y in gm])


def partial_injections(X: Sequence, Y: Sequence) -> Iterator[PartialInjection]:
    """Every injective partial function ``X -> Y``, smallest domains of definition first."""
    X, Y = tuple(X), tuple(Y)
    for k in range(min(len(X), len(Y)) + 1):
        for xs in itertools.combinations(X, k):
            for ys in itertools.permutations(Y, k):
                yield PartialInjection(X, Y, list(zip(xs, ys)))


# ---------------------------------------------------------------------------
# the functor


@lru_cache(maxsize=512)
def blt_object(G: Graph, F: PrimeField) -> BaerGroup:
    # cached so that Cayley tables are shared between morphisms
    return BaerGroup.of_graph(G, F)


class BaerHom:
    """The group map induced by a pullback homomorphism.

    ``vertex_src[y]`` is the source vertex index feeding target coordinate
    ``y`` (or None); ``edge_src[e]`` is ``(k, sign)`` for the source edge
    coordinate feeding target edge ``e`` (or None).
    """

    def __init__(self, source: BaerGroup, target: BaerGroup, vertex_src, edge_src):
        self.source = source
        self.target = target
        self.vertex_src = tuple(vertex_src)
        self.edge_src = tuple(edge_src)

    def __call__(self, a: BaerElement) -> BaerElement:
        p = self.target.p
        v = tuple(0 if s is None else a.v[s] for s in self.vertex_src)
        u = tuple(0 if s is None else (s[1] * a.u[s[0]]) % p for s in self.edge_src)
        return BaerElement(v, u)

    def apply_array(self, X: np.ndarray) -> np.ndarray:
        """Images of the rows of ``X`` (elements as ``(v | u)`` digit rows)."""
        n = self.source.n
        out = np.zeros((X.shape[0], self.target.n + self.target.m), dtype=np.int64)
        for y, s in enumerate(self.vertex_src):
            if s is not None:
                out[:, y] = X[:, s]
        off = self.target.n
        for e, s in enumerate(self.edge_src):
            if s is not None:
                out[:, off + e] = (s[1] * X[:, n + s[0]]) % self.target.p
        return out

    def index_map(self) -> np.ndarray:
        """``index_map()[a]`` is the index of the image of source element ``a``."""
        return self.target.encode_array(self.apply_array(self.source.element_array))

    def __repr__(self):
        return f"BaerHom(vertices={self.vertex_src}, edges={self.edge_src})"


def blt_morphism(f: PartialInjection, G: Graph, H: Graph, F: PrimeField) -> BaerHom:
    bad = pullback_violation(f, G, H)
    if bad is not None:
        raise NotPullbackHom(*bad)
    back = {H.index(y): G.index(x) for x, y in f.pairs}
    vertex_src = [back.get(y) for y in range(H.n)]
    gpos = {e: k for k, e in enumerate(G.index_edges)}
    edge_src = []
    for a, b in H.index_edges:
        if a in back and b in back:
            xa, xb = back[a], back[b]
            k = gpos[(min(xa, xb), max(xa, xb))]
            edge_src.append((k, 1 if xa < xb else -1))
        else:
            edge_src.append(None)
    return BaerHom(blt_object(G, F), blt_object(H, F), vertex_src, edge_src)


def functor_law_check(f: PartialInjection, g: PartialInjection, G1: Graph, G2: Graph, G3: Graph, F: PrimeField) -> bool:
    """``BLT(f then g) = BLT(g) o BLT(f)``, compared on every element of ``BLT(G1)``."""
    Bf = blt_morphism(f, G1, G2, F)
    Bg = blt_morphism(g, G2, G3, F)
    Bfg = blt_morphism(compose(f, g), G1, G3, F)
    if Bf.source.order > MAX_FUNCTOR_ORDER:
        raise TooLarge("functor law check", Bf.source.order, MAX_FUNCTOR_ORDER)
    return bool(np.array_equal(Bfg.index_map(), Bg.index_map()[Bf.index_map()]))


# ---------------------------------------------------------------------------
# optimisation over pullback homomorphisms


def max_pullback_hom(
    G: Graph, H: Graph, objective: str = "order", surjective: bool = False
) -> tuple[int, PartialInjection] | None:
    """Maximum order (``|im f|``) or size (edges of ``H[im f]``) over pullback homomorphisms G -> H.

    Branch and bound over partial injections. With ``surjective`` only maps
    onto V(H) are considered, and None is returned when there is none.
    """
    if objective not in ("order", "size"):
        raise ValueError(f"objective must be 'order' or 'size', not {objective!r}")
    if max(G.n, H.n) > MAX_PULLBACK_VERTICES:
        raise TooLarge("pullback homomorphism search", max(G.n, H.n), MAX_PULLBACK_VERTICES)
    nG, nH = G.n, H.n
    img = [-1] * nG
    used = [False] * nH
    best_val = -1
    best_map: list[int] = []

    def bound(k: int, count: int, size: int) -> int:
        if objective == "order":
            return count + min(nG - k, nH - count)
        free = sum(1 for a, b in H.index_edges if not (used[a] and used[b]))
        return size + free

    def search(k: int, count: int, size: int):
        nonlocal best_val, best_map
        if surjective and nH - count > nG - k:
            return
        if k == nG:
            val = count if objective == "order" else size
            if (not surjective or count == nH) and val > best_val:
                best_val, best_map = val, list(img)
            return
        if bound(k, count, size) <= best_val:
            return
        for y in range(nH):
            if used[y]:
                continue
            gain = 0
            ok = True
            for x2 in range(k):
                y2 = img[x2]
                if y2 >= 0 and H.has_index_edge(y, y2):
                    if not G.has_index_edge(k, x2):
                        ok = False
                        break
                    gain += 1
            if not ok:
                continue
            img[k], used[y] = y, True
            search(k + 1, count + 1, size + gain)
            img[k], used[y] = -1, False
        search(k + 1, count, size)

    search(0, 0, 0)
    if best_val < 0:
        return None
    f = PartialInjection(
        G.vertices, H.vertices, [(G.vertices[x], H.vertices[y]) for x, y in enumerate(best_map) if y >= 0]
    )
    return best_val, f
