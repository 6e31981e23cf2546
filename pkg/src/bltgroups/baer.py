"""Baer's group of an alternating bilinear map over F_p.

Elements are pairs ``(v, u)`` with ``v`` in F_p^n and ``u`` in F_p^m, and

    (v1, u1) * (v2, u2) = (v1 + v2, u1 + u2 + phi(v1, v2) / 2).

For the map of a graph this gives a p-group of class 2 and exponent p of
order ``p^(n + m)``. The commutator convention is ``[a, b] = a^-1 b^-1 a b``,
under which ``[(v1, u1), (v2, u2)] = (0, phi(v1, v2))``.

Elements are indexed by reading the digits of ``(v | u)`` in base p, most
significant first; that index order is also the Cayley table order.
"""

from __future__ import annotations

import itertools
import string
from functools import cached_property
from typing import Callable, Iterator, NamedTuple

import numpy as np

from .altspace import AltTuple, build_tuple, phi, space_iso
from .errors import DimMismatch, TooLarge
from .fp import PrimeField, Vector
from .graph import Graph

# largest group order for which all pairs are materialized
MAX_TABLE_ORDER = 3**6
# largest source order for the exhaustive homomorphism check, and pairs per block
MAX_HOM_ORDER = 3**8
HOM_BLOCK = 2**20
# largest order for the generator-image isomorphism search
MAX_BRUTE_ISO_ORDER = 3**4


class BaerElement(NamedTuple):
    v: Vector
    u: Vector


class BaerGroup:
    def __init__(self, tup: AltTuple):
        self.tuple = tup
        self.F: PrimeField = tup.F
        self.p = tup.F.p
        self.n = tup.n
        self.m = tup.m

    @classmethod
    def of_graph(cls, G: Graph, F: PrimeField) -> BaerGroup:
        return cls(build_tuple(G, F))

    def __repr__(self):
        return f"BaerGroup(p={self.p}, n={self.n}, m={self.m})"

    @property
    def order(self) -> int:
        return self.p ** (self.n + self.m)

    @property
    def identity(self) -> BaerElement:
        return BaerElement((0,) * self.n, (0,) * self.m)

    def element(self, v, u) -> BaerElement:
        return BaerElement(tuple(x % self.p for x in v), tuple(x % self.p for x in u))

    def _check(self, *xs: BaerElement):
        for x in xs:
            if len(x.v) != self.n or len(x.u) != self.m:
                raise DimMismatch(f"element of shape ({len(x.v)}, {len(x.u)}) in group with n={self.n}, m={self.m}")

    def mul(self, a: BaerElement, b: BaerElement) -> BaerElement:
        self._check(a, b)
        p, h = self.p, self.F.half
        c = phi(self.tuple, a.v, b.v)
        return BaerElement(
            tuple((x + y) % p for x, y in zip(a.v, b.v)),
            tuple((x + y + h * z) % p for x, y, z in zip(a.u, b.u, c)),
        )

    def inverse(self, a: BaerElement) -> BaerElement:
        # phi(v, -v) = 0, so no correction term
        self._check(a)
        p = self.p
        return BaerElement(tuple(-x % p for x in a.v), tuple(-x % p for x in a.u))

    def commutator(self, a: BaerElement, b: BaerElement) -> BaerElement:
        return self.mul(self.mul(self.inverse(a), self.inverse(b)), self.mul(a, b))

    def power(self, a: BaerElement, k: int) -> BaerElement:
        self._check(a)
        if k < 0:
            a, k = self.inverse(a), -k
        out, base = self.identity, a
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def is_abelian(self) -> bool:
        return self.m == 0

    # indexing

    def elements(self) -> Iterator[BaerElement]:
        n = self.n
        for digits in itertools.product(range(self.p), repeat=n + self.m):
            yield BaerElement(digits[:n], digits[n:])

    def index(self, a: BaerElement) -> int:
        out = 0
        for d in a.v + a.u:
            out = out * self.p + d
        return out

    def element_at(self, idx: int) -> BaerElement:
        digits = []
        for _ in range(self.n + self.m):
            idx, d = divmod(idx, self.p)
            digits.append(d)
        digits.reverse()
        return BaerElement(tuple(digits[: self.n]), tuple(digits[self.n :]))

    def encode(self, a: BaerElement) -> str:
        """Base-p digit string of ``(v | u)``."""
        digits = a.v + a.u
        if self.p <= 36:
            return "".join((string.digits + string.ascii_lowercase)[d] for d in digits)
        return ".".join(map(str, digits))

    # vectorized arithmetic on (K, n + m) integer arrays

    @cached_property
    def _weights(self) -> np.ndarray:
        return self.p ** np.arange(self.n + self.m - 1, -1, -1, dtype=np.int64)

    @cached_property
    def element_array(self) -> np.ndarray:
        N = self.order
        if N > MAX_TABLE_ORDER**2:
            raise TooLarge("element array", N, MAX_TABLE_ORDER**2)
        idx = np.arange(N, dtype=np.int64)
        return (idx[:, None] // self._weights[None, :]) % self.p

    def encode_array(self, X: np.ndarray) -> np.ndarray:
        return X @ self._weights

    def mul_array(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        n, p = self.n, self.p
        out = (X + Y) % p
        if self.m:
            e = np.asarray(self.tuple.edges, dtype=np.int64)
            i, j = e[:, 0], e[:, 1]
            c = X[:, i] * Y[:, j] - X[:, j] * Y[:, i]
            out[:, n:] = (X[:, n:] + Y[:, n:] + self.F.half * c) % p
        return out

    @cached_property
    def table(self) -> np.ndarray:
        """``table[a, b]`` is the index of ``a * b``."""
        N = self.order
        if N > MAX_TABLE_ORDER:
            raise TooLarge("Cayley table", N * N, MAX_TABLE_ORDER**2)
        X = self.element_array
        A = np.repeat(X, N, axis=0)
        B = np.tile(X, (N, 1))
        return self.encode_array(self.mul_array(A, B)).reshape(N, N)

    def cayley_table_text(self) -> str:
        """Header ``order p n m`` then one ``a b a*b`` line per ordered pair."""
        T = self.table
        names = [self.encode(self.element_at(i)) for i in range(self.order)]
        lines = [f"{self.order} {self.p} {self.n} {self.m}"]
        for a in range(self.order):
            row = T[a]
            lines.extend(f"{names[a]} {names[b]} {names[row[b]]}" for b in range(self.order))
        return "\n".join(lines) + "\n"


def is_group_homomorphism(Gp: BaerGroup, Hp: BaerGroup, f: Callable[[BaerElement], BaerElement]) -> bool:
    """Whether ``f(a * b) = f(a) * f(b)`` for every pair of elements of ``Gp``.

    Small groups go through their Cayley tables; larger ones are processed in
    blocks of left factors so memory stays bounded.
    """
    N = Gp.order
    if N > MAX_HOM_ORDER:
        raise TooLarge("homomorphism check", N * N, MAX_HOM_ORDER**2)
    X = Gp.element_array
    if hasattr(f, "apply_array"):
        images = f.apply_array(X)
    else:
        images = np.array([tuple(y.v) + tuple(y.u) for y in map(f, Gp.elements())], dtype=np.int64)
        images = images.reshape(N, Hp.n + Hp.m)
    if images.size and (images.min() < 0 or images.max() >= Hp.p):
        return False
    img_idx = Hp.encode_array(images)
    if N <= MAX_TABLE_ORDER and Hp.order <= MAX_TABLE_ORDER:
        return bool(np.array_equal(img_idx[Gp.table], Hp.table[np.ix_(img_idx, img_idx)]))
    step = max(1, HOM_BLOCK // N)
    for start in range(0, N, step):
        rows = slice(start, min(N, start + step))
        k = rows.stop - rows.start
        prod = Gp.encode_array(Gp.mul_array(np.repeat(X[rows], N, axis=0), np.tile(X, (k, 1))))
        lhs = img_idx[prod]
        rhs = Hp.encode_array(Hp.mul_array(np.repeat(images[rows], N, axis=0), np.tile(images, (k, 1))))
        if not np.array_equal(lhs, rhs):
            return False
    return True


def group_iso(G: Graph, H: Graph, F: PrimeField) -> bool:
    """Whether the Baer groups of two graphs are isomorphic.

    Decided on the level of alternating spaces: two Baer groups are
    isomorphic exactly when their bilinear maps are.
    """
    if G.n != H.n or G.m != H.m:
        return False
    return space_iso(G, H, F) is not None


def _generators(T: np.ndarray) -> list[int]:
    """A greedy generating set of the group with table ``T`` (identity is index 0)."""
    N = T.shape[0]
    sub = {0}
    gens: list[int] = []
    while len(sub) < N:
        g = next(x for x in range(N) if x not in sub)
        gens.append(g)
        frontier = list(sub)
        while frontier:
            nxt = []
            for x in frontier:
                for h in gens:
                    y = int(T[x, h])
                    if y not in sub:
                        sub.add(y)
                        nxt.append(y)
            frontier = nxt
    return gens


def group_iso_bruteforce(Gp: BaerGroup, Hp: BaerGroup) -> dict | None:
    """An explicit isomorphism as an index map, found by trying every image of a generating set.

    A map defined along the Cayley graph by ``f(x g) = f(x) f(g)`` is a
    homomorphism iff it is consistent on every edge; bijectivity is checked
    on top. Only for tiny groups.
    """
    if Gp.order != Hp.order:
        return None
    N = Gp.order
    if N > MAX_BRUTE_ISO_ORDER:
        raise TooLarge("brute-force group isomorphism", N, MAX_BRUTE_ISO_ORDER)
    TG, TH = Gp.table, Hp.table
    gens = _generators(TG)
    for imgs in itertools.permutations(range(1, N), len(gens)):
        f = {0: 0}
        for g, h in zip(gens, imgs):
            f[g] = h
        queue = [0] + list(gens)
        ok = True
        k = 0
        while k < len(queue) and ok:
            x = queue[k]
            k += 1
            for g, h in zip(gens, imgs):
                y, fy = int(TG[x, g]), int(TH[f[x], h])
                if y in f:
                    if f[y] != fy:
                        ok = False
                        break
                else:
                    f[y] = fy
                    queue.append(y)
        if ok and len(f) == N and len(set(f.values())) == N:
            return f
    return None
