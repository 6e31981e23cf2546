"""Graphs as tuples and spaces of alternating matrices.

For a graph G on n vertices with edges ``(i_1, j_1) < ... < (i_m, j_m)`` the
tuple ``A_G`` holds the elementary alternating matrices ``A_{i_k, j_k}`` (1 at
``(i, j)``, -1 at ``(j, i)``) and defines the alternating bilinear map
``phi_G(v, u) = (v^t A_1 u, ..., v^t A_m u)``. The span of the tuple is the
alternating matrix space of G.

Isomorphism of spaces is congruence: ``span_G = T^t span_H T`` for some
invertible T. Since ``T^t A_{k,l} T = w_k w_l^t - w_l w_k^t`` with ``w_k`` the
k-th row of T, and a matrix lies in ``span_G`` iff it vanishes on every
non-edge of G, the condition reduces to 2x2 minors of T (see
:func:`obs21_check`).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import DimMismatch, NotAlternating, ShapeMismatch, TooLarge
from .fp import (
    GL_GUARD_BITS,
    FpMatrix,
    PrimeField,
    Vector,
    det_rows,
    enumerate_gl,
    in_span,
    permutation_matrix,
    rank_rows,
    row_echelon,
)
from .graph import Graph

# log2 bound on span members visited by max_rank
SPAN_GUARD_BITS = 20
# number of subspaces visited by the isotropic search
SUBSPACE_GUARD = 50_000
# upper bound on candidate matrices visited by the minor-condition scan
SCAN_GUARD = 2**26
# rows per compatibility table
ROW_DOMAIN_GUARD = 4096


def elementary_alternating(n: int, i: int, j: int, p: int) -> FpMatrix:
    """``A_{i,j}`` for 0-based ``i != j``."""
    rows = [[0] * n for _ in range(n)]
    rows[i][j] = 1
    rows[j][i] = p - 1
    return FpMatrix(p, rows, n)


@dataclass(frozen=True)
class AltTuple:
    """The ordered tuple ``A_G`` of a graph over F_p."""

    F: PrimeField
    n: int
    edges: tuple[tuple[int, int], ...]
    vertices: tuple = ()

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def mats(self) -> tuple[FpMatrix, ...]:
        return tuple(elementary_alternating(self.n, i, j, self.F.p) for i, j in self.edges)

    def to_json(self) -> dict:
        V = self.vertices or tuple(range(1, self.n + 1))
        return {
            "p": self.F.p,
            "n": self.n,
            "m": self.m,
            "vertices": list(V),
            "edge_order": [[V[i], V[j]] for i, j in self.edges],
            "matrices": [A.to_json() for A in self.mats],
        }

    @classmethod
    def from_json(cls, data: dict) -> AltTuple:
        F = PrimeField(int(data["p"]))
        V = tuple(data["vertices"])
        pos = {v: k for k, v in enumerate(V)}
        edges = tuple((pos[a], pos[b]) for a, b in data["edge_order"])
        t = cls(F, int(data["n"]), edges, V)
        if "matrices" in data and [FpMatrix.from_json(M) for M in data["matrices"]] != list(t.mats):
            raise ShapeMismatch("matrices disagree with edge order")
        return t


def build_tuple(G: Graph, F: PrimeField) -> AltTuple:
    return AltTuple(F, G.n, G.index_edges, G.vertices)


def phi(t: AltTuple, v: Sequence[int], u: Sequence[int]) -> Vector:
    if len(v) != t.n or len(u) != t.n:
        raise DimMismatch(f"vectors of length {len(v)}, {len(u)} for n = {t.n}")
    p = t.F.p
    return tuple((v[i] * u[j] - v[j] * u[i]) % p for i, j in t.edges)


@dataclass(frozen=True)
class AltSpace:
    """A subspace of alternating n x n matrices given by a basis.

    Spaces built from a graph keep it in ``graph`` so membership can be
    decided from the support alone.
    """

    F: PrimeField
    n: int
    basis: tuple[FpMatrix, ...]
    graph: Graph | None = None

    @classmethod
    def of_graph(cls, G: Graph, F: PrimeField) -> AltSpace:
        return cls(F, G.n, build_tuple(G, F).mats, G)

    @classmethod
    def spanned_by(cls, F: PrimeField, n: int, mats: Sequence[FpMatrix]) -> AltSpace:
        """Extract a basis from an arbitrary spanning list."""
        basis: list[FpMatrix] = []
        for M in mats:
            if not M.is_alternating():
                raise NotAlternating(repr(M))
            if not in_span([_flat(B) for B in basis], _flat(M), F.p):
                basis.append(M)
        return cls(F, n, tuple(basis))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, B: FpMatrix) -> bool:
        return in_span([_flat(A) for A in self.basis], _flat(B), self.F.p)

    def congruent(self, T: FpMatrix) -> AltSpace:
        """``T^t (self) T``."""
        Tt = T.transpose()
        return AltSpace.spanned_by(self.F, T.ncols, [Tt @ B @ T for B in self.basis])

    def same_span(self, other: AltSpace) -> bool:
        return self.dim == other.dim and all(self.contains(B) for B in other.basis)


def _flat(M: FpMatrix) -> tuple[int, ...]:
    return tuple(x for r in M.rows for x in r)


def membership_test(sp: AltSpace, B: FpMatrix) -> bool:
    """Whether ``B`` lies in a graph's alternating space.

    For graph spaces this is the support test: ``B`` vanishes off the edges.
    """
    if B.shape != (sp.n, sp.n):
        raise DimMismatch(f"{B.shape} matrix for n = {sp.n}")
    if not B.is_alternating():
        raise NotAlternating(repr(B))
    if sp.graph is None:
        return sp.contains(B)
    H = sp.graph
    R = B.rows
    return all(R[k][l] == 0 or H.has_index_edge(k, l) for k in range(sp.n) for l in range(k + 1, sp.n))


def _non_edges(H: Graph) -> list[tuple[int, int]]:
    return [e for e in itertools.combinations(range(H.n), 2) if not H.has_index_edge(*e)]


def obs21_check(G: Graph, H: Graph, T: FpMatrix) -> bool:
    """Every 2x2 minor of T on rows ``{i,j}`` in E(G), columns ``{k,l}`` not in E(H) vanishes.

    For invertible T of matching dimension this says ``T^t span_G T = span_H``.
    Invertibility is not checked here.
    """
    n = G.n
    if H.n != n or T.shape != (n, n):
        raise DimMismatch(f"T of shape {T.shape} for graphs on {G.n}, {H.n} vertices")
    p, R = T.p, T.rows
    holes = _non_edges(H)
    for i, j in G.index_edges:
        a, b = R[i], R[j]
        for k, l in holes:
            if (a[k] * b[l] - a[l] * b[k]) % p:
                return False
    return True


def _congruence_into(src: Graph, dst: Graph, T: FpMatrix) -> bool:
    """``T^t span_src T`` is contained in ``span_dst``."""
    return obs21_check(src, dst, T)


def permutation_witness(G: Graph, H: Graph, sigma: dict, F: PrimeField) -> FpMatrix:
    """The permutation matrix P of a graph isomorphism ``sigma: V(G) -> V(H)``.

    Satisfies ``span_G = P^t span_H P``.
    """
    return permutation_matrix([H.index(sigma[v]) for v in G.vertices], F.p)


# ---------------------------------------------------------------------------
# the minor-condition scan


def _row_order(G: Graph) -> list[int]:
    """Vertex order where each vertex has as many earlier G-neighbours as possible."""
    order: list[int] = []
    left = set(range(G.n))
    while left:
        placed = set(order)
        v = max(sorted(left), key=lambda i: (len(G.index_neighbors(i) & placed), len(G.index_neighbors(i))))
        order.append(v)
        left.remove(v)
    return order


class ConformingScan:
    """All ``T in M(n, F_p)`` satisfying the minor condition of ``obs21_check(G, H, T)``.

    Rows of T are assigned one vertex at a time; rows ``a, b`` of an edge of G
    must be *compatible* (every minor on the non-edge columns of H vanishes),
    so each new row is drawn from the intersection of the compatibility sets of
    its already-placed neighbours. This is an exhaustive scan of all
    ``p^(n^2)`` matrices with every violated minor cutting off its subtree.
    """

    def __init__(self, G: Graph, H: Graph, F: PrimeField, exhaustive: bool = True):
        if G.n != H.n:
            raise DimMismatch(f"graphs on {G.n} and {H.n} vertices")
        self.G, self.H, self.F = G, H, F
        n, p = G.n, F.p
        self.n = n
        if p**n > ROW_DOMAIN_GUARD:
            raise TooLarge("row domain of the minor-condition scan", p**n, ROW_DOMAIN_GUARD)
        self.domain: list[Vector] = list(itertools.product(range(p), repeat=n))
        holes = _non_edges(H)
        D = self.domain
        N = len(D)
        compat: list[list[int]] = [[] for _ in range(N)]
        for x in range(N):
            a = D[x]
            for y in range(x, N):
                b = D[y]
                if all((a[k] * b[l] - a[l] * b[k]) % p == 0 for k, l in holes):
                    compat[x].append(y)
                    if y != x:
                        compat[y].append(x)
        self.compat = [frozenset(c) for c in compat]
        self.order = _row_order(G)
        pos = {v: t for t, v in enumerate(self.order)}
        # for each depth, the depths of earlier neighbours
        self.back = [
            sorted(pos[u] for u in G.index_neighbors(v) if pos[u] < t) for t, v in enumerate(self.order)
        ]
        widest = max((len(c) for c in self.compat), default=1)
        self.bound = 1
        for t in range(n):
            self.bound *= widest if self.back[t] else N
        # sampling only walks one branch, so only exhaustive use is guarded
        if exhaustive and self.bound > SCAN_GUARD:
            raise TooLarge("minor-condition scan", self.bound, SCAN_GUARD)

    def first_rows(self) -> list[int]:
        return list(range(len(self.domain)))

    def rows(self, first: Sequence[int] | None = None) -> Iterator[tuple[Vector, ...]]:
        """Yield conforming matrices as row tuples in vertex order.

        ``first`` restricts the row placed first (for partitioned scans).
        """
        n, D, compat, back, order = self.n, self.domain, self.compat, self.back, self.order
        if n == 0:
            yield ()
            return
        full = range(len(D))
        chosen = [0] * n
        out: list[Vector] = [()] * n

        def place(t: int) -> Iterator[tuple[Vector, ...]]:
            if t == n:
                yield tuple(out)
                return
            if back[t]:
                cands = compat[chosen[back[t][0]]]
                for s in back[t][1:]:
                    cands = cands & compat[chosen[s]]
                cands = sorted(cands)
            else:
                cands = full if t else (full if first is None else first)
            v = order[t]
            for x in cands:
                chosen[t] = x
                out[v] = D[x]
                yield from place(t + 1)

        yield from place(0)

    def sample(self, rng) -> tuple[Vector, ...]:
        """One conforming matrix, rows drawn uniformly from the allowed sets in scan order.

        The zero row is compatible with every row, so the descent never dead-ends.
        """
        n, D = self.n, self.domain
        chosen = [0] * n
        out: list[Vector] = [()] * n
        for t, v in enumerate(self.order):
            if self.back[t]:
                cands = self.compat[chosen[self.back[t][0]]]
                for s in self.back[t][1:]:
                    cands = cands & self.compat[chosen[s]]
                x = rng.choice(sorted(cands))
            else:
                x = rng.randrange(len(D))
            chosen[t] = x
            out[v] = D[x]
        return tuple(out)

    def __iter__(self) -> Iterator[FpMatrix]:
        p, n = self.F.p, self.n
        for R in self.rows():
            yield FpMatrix(p, R, n)


def conforming_matrices(G: Graph, H: Graph, F: PrimeField) -> Iterator[FpMatrix]:
    return iter(ConformingScan(G, H, F))


def space_iso(G: Graph, H: Graph, F: PrimeField, method: str = "auto", prefilter: bool = True) -> FpMatrix | None:
    """Some invertible T with ``span_G = T^t span_H T``, or None.

    ``method="gl"`` scans GL(n, F_p); ``"minors"`` scans the matrices satisfying
    the 2x2-minor condition and keeps the first invertible one; ``"auto"``
    picks ``gl`` when the group is small enough. With ``prefilter`` graphs with
    different edge counts are rejected without search; without it both
    inclusions are tested for every candidate.
    """
    if G.n != H.n:
        return None
    if prefilter and G.m != H.m:
        return None
    n, p = G.n, F.p
    if method == "auto":
        method = "gl" if n * n * math.log2(p) <= GL_GUARD_BITS else "minors"
    if method == "gl":
        candidates: Iterator[FpMatrix] = enumerate_gl(n, F)
    elif method == "minors":
        candidates = (T for T in ConformingScan(H, G, F) if det_rows(T.rows, p))
    else:
        raise ValueError(f"unknown method {method!r}")
    # the identity first, so equal graphs get the obvious witness
    for T in itertools.chain([FpMatrix.identity(p, n)], candidates):
        if _congruence_into(H, G, T) and (G.m == H.m or _congruence_into(G, H, _inverse(T))):
            return T
    return None


def _inverse(T: FpMatrix) -> FpMatrix:
    n, p = T.nrows, T.p
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(T.rows)]
    R, piv = row_echelon(aug, p)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return FpMatrix(p, [r[n:] for r in R], n)


# ---------------------------------------------------------------------------
# invariant bridges


def _combination_rows(sp: AltSpace, coeffs: Sequence[int]) -> list[list[int]]:
    n, p = sp.n, sp.F.p
    rows = [[0] * n for _ in range(n)]
    if sp.graph is not None:
        for c, (i, j) in zip(coeffs, sp.graph.index_edges):
            if c:
                rows[i][j] = c
                rows[j][i] = p - c
        return rows
    for c, B in zip(coeffs, sp.basis):
        if c:
            for i in range(n):
                for j in range(n):
                    rows[i][j] = (rows[i][j] + c * B.rows[i][j]) % p
    return rows


def max_rank(sp: AltSpace) -> int:
    """Largest rank of a matrix in the space, by exhausting all members.

    Only members whose first nonzero coefficient is 1 are visited (rank is
    invariant under scaling). Stops early at the largest even rank ``<= n``.
    """
    d, p = sp.dim, sp.F.p
    if d * math.log2(p) > SPAN_GUARD_BITS:
        raise TooLarge("span enumeration", p**d, 2**SPAN_GUARD_BITS)
    ceiling = sp.n - sp.n % 2
    best = 0
    for lead in range(d):
        for tail in itertools.product(range(p), repeat=d - lead - 1):
            coeffs = (0,) * lead + (1,) + tail
            r = rank_rows(_combination_rows(sp, coeffs), p)
            if r > best:
                best = r
                if best == ceiling:
                    return best
    return best


def gaussian_binomial(n: int, k: int, p: int) -> int:
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def rref_subspaces(n: int, k: int, p: int) -> Iterator[list[Vector]]:
    """One reduced-echelon basis for every k-dimensional subspace of F_p^n."""
    for pivots in itertools.combinations(range(n), k):
        pset = set(pivots)
        free = [[c for c in range(piv + 1, n) if c not in pset] for piv in pivots]
        slots = [(r, c) for r in range(k) for c in free[r]]
        for vals in itertools.product(range(p), repeat=len(slots)):
            rows = [[0] * n for _ in range(k)]
            for r, piv in enumerate(pivots):
                rows[r][piv] = 1
            for (r, c), x in zip(slots, vals):
                rows[r][c] = x
            yield [tuple(r) for r in rows]


def _isotropic(sp: AltSpace, U: Sequence[Vector]) -> bool:
    p = sp.F.p
    if sp.graph is not None:
        pairs = sp.graph.index_edges
        return all(
            (u[i] * w[j] - u[j] * w[i]) % p == 0 for u, w in itertools.combinations(U, 2) for i, j in pairs
        )
    for B in sp.basis:
        for u, w in itertools.combinations(U, 2):
            if sum(u[i] * B.rows[i][j] * w[j] for i in range(sp.n) for j in range(sp.n)) % p:
                return False
    return True


def independence_number_via_isotropic(sp: AltSpace) -> int:
    """Largest dimension of a totally isotropic subspace of F_p^n.

    Subspaces are visited one reduced-echelon basis each, largest dimension
    first; the first isotropic one decides the answer.
    """
    n, p = sp.n, sp.F.p
    total = sum(gaussian_binomial(n, k, p) for k in range(n + 1))
    if total > SUBSPACE_GUARD:
        raise TooLarge("subspace enumeration", total, SUBSPACE_GUARD)
    for k in range(n, 1, -1):
        if any(_isotropic(sp, U) for U in rref_subspaces(n, k, p)):
            return k
    return min(n, 1)
