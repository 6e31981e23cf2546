"""Exact linear algebra over prime fields F_p.

Residues are plain ``int`` values kept in ``[0, p)``; vectors are tuples of
residues and matrices are immutable :class:`FpMatrix` values wrapping a tuple
of row tuples. Indices are 0-based throughout.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import BadPrime, IndexOutOfRange, NonSquare, ShapeMismatch, TooLarge, ZeroInverse

Vector = tuple[int, ...]
Rows = tuple[tuple[int, ...], ...]

# p * p must fit in a signed 64-bit word
MAX_PRIME = 2**31 - 1
# log2 of the number of candidate matrices enumerate_gl may touch
GL_GUARD_BITS = 25


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field Z/pZ for an odd prime ``p``."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise BadPrime(f"p = {self.p!r} is not prime")
        if self.p == 2:
            raise BadPrime("p = 2 is not allowed: the group law needs 1/2 to exist")
        if self.p > MAX_PRIME:
            raise BadPrime(f"p = {self.p} exceeds {MAX_PRIME}")

    @property
    def half(self) -> int:
        return (self.p + 1) // 2

    def inv(self, a: int) -> int:
        return inv(a, self)

    def elements(self) -> range:
        return range(self.p)

    def vectors(self, n: int) -> Iterator[Vector]:
        """All of F_p^n in lexicographic order."""
        return itertools.product(range(self.p), repeat=n)


def _modulus(F: PrimeField | int) -> int:
    return F.p if isinstance(F, PrimeField) else F


def inv(a: int, F: PrimeField | int) -> int:
    p = _modulus(F)
    a %= p
    if a == 0:
        raise ZeroInverse(f"0 has no inverse mod {p}")
    return pow(a, p - 2, p)


@dataclass(frozen=True)
class FpMatrix:
    """An immutable ``nrows x ncols`` matrix over F_p."""

    p: int
    rows: Rows
    ncols: int

    def __init__(self, p: int, rows: Iterable[Sequence[int]], ncols: int | None = None):
        rows = tuple(tuple(int(x) % p for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ShapeMismatch("ragged rows")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "ncols", ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def __repr__(self):
        return f"FpMatrix(p={self.p}, {[list(r) for r in self.rows]})"

    @classmethod
    def zeros(cls, p: int, nrows: int, ncols: int | None = None) -> FpMatrix:
        ncols = nrows if ncols is None else ncols
        return cls(p, [[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, p: int, n: int) -> FpMatrix:
        return cls(p, [[int(i == j) for j in range(n)] for i in range(n)], n)

    @property
    def T(self) -> FpMatrix:
        return self.transpose()

    def transpose(self) -> FpMatrix:
        if not self.rows:
            return FpMatrix.zeros(self.p, self.ncols, 0)
        return FpMatrix(self.p, zip(*self.rows), self.nrows)

    def __add__(self, other: FpMatrix) -> FpMatrix:
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} + {other.shape}")
        return FpMatrix(self.p, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self) -> FpMatrix:
        return FpMatrix(self.p, [[-a for a in r] for r in self.rows], self.ncols)

    def __sub__(self, other: FpMatrix) -> FpMatrix:
        return self + (-other)

    def scale(self, c: int) -> FpMatrix:
        return FpMatrix(self.p, [[c * a for a in r] for r in self.rows], self.ncols)

    def __matmul__(self, other: FpMatrix) -> FpMatrix:
        if self.ncols != other.nrows:
            raise ShapeMismatch(f"{self.shape} @ {other.shape}")
        p = self.p
        cols = list(zip(*other.rows)) if other.rows else []
        out = [[sum(a * b for a, b in zip(r, c)) % p for c in cols] for r in self.rows]
        return FpMatrix(p, out, other.ncols)

    def apply(self, v: Sequence[int]) -> Vector:
        """Matrix-vector product ``M v``."""
        if len(v) != self.ncols:
            raise ShapeMismatch(f"{self.shape} @ vector of length {len(v)}")
        return tuple(sum(a * b for a, b in zip(r, v)) % self.p for r in self.rows)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> FpMatrix:
        return FpMatrix(self.p, [[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def support(self) -> frozenset[tuple[int, int]]:
        return frozenset((i, j) for i, r in enumerate(self.rows) for j, x in enumerate(r) if x)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_alternating(self) -> bool:
        """Zero diagonal and ``M^t = -M``; over odd p this is ``v^t M v = 0`` for all v."""
        if not self.is_square():
            return False
        p, R = self.p, self.rows
        n = len(R)
        return all(R[i][i] == 0 for i in range(n)) and all(
            (R[i][j] + R[j][i]) % p == 0 for i in range(n) for j in range(i + 1, n)
        )

    def to_json(self) -> dict:
        return {"p": self.p, "rows": self.nrows, "cols": self.ncols, "entries": [list(r) for r in self.rows]}

    @classmethod
    def from_json(cls, data: dict) -> FpMatrix:
        p = int(data["p"])
        entries = data["entries"]
        m = cls(p, entries, int(data.get("cols", len(entries[0]) if entries else 0)))
        if "rows" in data and int(data["rows"]) != m.nrows:
            raise ShapeMismatch("row count does not match entries")
        if any(not 0 <= x < p for r in entries for x in r):
            raise ShapeMismatch(f"entries must lie in [0, {p})")
        return m


def det_rows(R: Sequence[Sequence[int]], p: int) -> int:
    """Determinant of a square row tuple mod p.

    Sizes up to 4 use cofactor expansion (no allocation in the hot path of the
    proof-lab scans); larger sizes use elimination.
    """
    n = len(R)
    if n == 0:
        return 1
    if n == 1:
        return R[0][0] % p
    if n == 2:
        return (R[0][0] * R[1][1] - R[0][1] * R[1][0]) % p
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = R
        return (a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)) % p
    if n == 4:
        (a0, a1, a2, a3), (b0, b1, b2, b3), (c0, c1, c2, c3), (d0, d1, d2, d3) = R
        # 2x2 minors of the bottom two rows
        m01 = c0 * d1 - c1 * d0
        m02 = c0 * d2 - c2 * d0
        m03 = c0 * d3 - c3 * d0
        m12 = c1 * d2 - c2 * d1
        m13 = c1 * d3 - c3 * d1
        m23 = c2 * d3 - c3 * d2
        return (
            a0 * (b1 * m23 - b2 * m13 + b3 * m12)
            - a1 * (b0 * m23 - b2 * m03 + b3 * m02)
            + a2 * (b0 * m13 - b1 * m03 + b3 * m01)
            - a3 * (b0 * m12 - b1 * m02 + b2 * m01)
        ) % p
    return _det_elim(R, p)


def _det_elim(R: Sequence[Sequence[int]], p: int) -> int:
    A = [[x % p for x in r] for r in R]
    n = len(A)
    d = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = -d
        d = d * A[c][c] % p
        iv = pow(A[c][c], p - 2, p)
        for r in range(c + 1, n):
            if A[r][c]:
                f = A[r][c] * iv % p
                A[r] = [(x - f * y) % p for x, y in zip(A[r], A[c])]
    return d % p


def det(M: FpMatrix) -> int:
    if not M.is_square():
        raise NonSquare(f"determinant of a {M.nrows}x{M.ncols} matrix")
    return det_rows(M.rows, M.p)


def row_echelon(R: Sequence[Sequence[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    A = [[x % p for x in r] for r in R]
    ncols = len(A[0]) if A else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        iv = pow(A[r][c], p - 2, p)
        A[r] = [x * iv % p for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A, pivots


def rank_rows(R: Sequence[Sequence[int]], p: int) -> int:
    return len(row_echelon(R, p)[1]) if R else 0


def rank(M: FpMatrix) -> int:
    return rank_rows(M.rows, M.p)


def in_span(vectors: Sequence[Sequence[int]], target: Sequence[int], p: int) -> bool:
    """Whether ``target`` is an F_p-combination of ``vectors``."""
    if not any(x % p for x in target):
        return True
    if not vectors:
        return False
    return rank_rows(list(vectors) + [target], p) == rank_rows(vectors, p)


def minor2(M: FpMatrix, i: int, j: int, k: int, l: int) -> int:
    """``M[i,k] M[j,l] - M[i,l] M[j,k]`` mod p (rows i, j; columns k, l)."""
    n, c = M.shape
    if not (0 <= i < n and 0 <= j < n and 0 <= k < c and 0 <= l < c):
        raise IndexOutOfRange(f"({i}, {j}, {k}, {l}) outside {M.shape}")
    R = M.rows
    return (R[i][k] * R[j][l] - R[i][l] * R[j][k]) % M.p


def gl_order(n: int, p: int) -> int:
    out = 1
    for i in range(n):
        out *= p**n - p**i
    return out


def enumerate_gl(n: int, F: PrimeField | int) -> Iterator[FpMatrix]:
    """Every invertible ``n x n`` matrix over F_p, each exactly once.

    Rows are chosen one at a time from outside the span of the previous rows,
    so singular prefixes are never extended. Output order is lexicographic in
    the row tuples.
    """
    p = _modulus(F)
    if n * n * math.log2(p) > GL_GUARD_BITS:
        raise TooLarge(f"GL({n}, {p}) enumeration", p ** (n * n), 2**GL_GUARD_BITS)
    allvecs = list(itertools.product(range(p), repeat=n))

    def extend(prefix: list[Vector], span: set[Vector]) -> Iterator[FpMatrix]:
        if len(prefix) == n:
            yield FpMatrix(p, prefix, n)
            return
        for v in allvecs:
            if v in span:
                continue
            new_span = {tuple((a + c * b) % p for a, b in zip(s, v)) for s in span for c in range(p)}
            prefix.append(v)
            yield from extend(prefix, new_span)
            prefix.pop()

    yield from extend([], {(0,) * n})


def permutation_matrix(perm: Sequence[int], p: int) -> FpMatrix:
    """``P`` with ``P e_i = e_{perm[i]}``."""
    n = len(perm)
    return FpMatrix(p, [[int(perm[j] == i) for j in range(n)] for i in range(n)], n)
