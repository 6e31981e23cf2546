"""Mechanical checks of the singularity argument behind the isomorphism theorem.

Given graphs G, H on [n] and a matrix T whose 2x2 minors on rows ``{i,j}`` in
E(G) and columns ``{k,l}`` outside E(H) vanish, the family K(G, H, T) consists
of matrices ``M <= T`` (nonzero entries agree with T) whose support is a
union of blocks ``S_k x sigma(S_k)`` for a permutation sigma and a partition
``S_1, ..., S_r`` of [n] with ``r < n``, each ``S_k`` connected in G, each
``sigma(S_k)`` connected in the complement of H, and every block of rank 1.
Every such M is singular. When G and H are not isomorphic, the maximal
members of K split ``det(T)`` as a sum of their determinants, which forces
``det(T) = 0``.

This module enumerates K, checks the splitting conditions permutation by
permutation, checks the block-merging claim used in the maximality argument,
and scans all conforming T for a given pair of graphs.
"""

from __future__ import annotations

import hashlib
import heapq
import itertools
import logging
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from .altspace import ConformingScan, obs21_check
from .errors import BLTError, DimMismatch, GraphsIsomorphic, HypothesisViolated, ShapeMismatch, TooLarge
from .fp import FpMatrix, PrimeField, det_rows, rank_rows
from .graph import Graph, graph_iso

log = logging.getLogger(__name__)

MAX_K_VERTICES = 5
MAX_FAILURES_KEPT = 20

Perm = tuple[int, ...]
Partition = tuple[tuple[int, ...], ...]


class LemmaContradiction(BLTError, AssertionError):
    """The splitting conditions hold but the determinant identity does not."""


# ---------------------------------------------------------------------------
# combinatorial enumeration


def set_partitions(n: int) -> Iterator[Partition]:
    """All partitions of ``range(n)`` via restricted growth strings, in lexicographic string order."""
    if n == 0:
        yield ()
        return
    a = [0] * n

    def grow(i: int, top: int) -> Iterator[Partition]:
        if i == n:
            blocks: list[list[int]] = [[] for _ in range(top + 1)]
            for x, b in enumerate(a):
                blocks[b].append(x)
            yield tuple(tuple(b) for b in blocks)
            return
        for b in range(top + 2):
            a[i] = b
            yield from grow(i + 1, max(top, b))

    a[0] = 0
    yield from grow(1, 0)


def perm_sign(sigma: Sequence[int]) -> int:
    return _perm_sign(tuple(sigma))


@lru_cache(maxsize=1024)
def _perm_sign(sigma: Perm) -> int:
    sign = 1
    seen = [False] * len(sigma)
    for i in range(len(sigma)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = sigma[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def leibniz_term(M: FpMatrix, sigma: Sequence[int]) -> int:
    """``sgn(sigma) * prod_i M[i, sigma(i)]`` mod p."""
    out = perm_sign(sigma)
    for i, s in enumerate(sigma):
        out *= M.rows[i][s]
        if not out:
            return 0
    return out % M.p


def precedes(M: FpMatrix, N: FpMatrix) -> bool:
    """``M <= N``: every nonzero entry of M equals the entry of N."""
    if M.shape != N.shape:
        raise ShapeMismatch(f"{M.shape} vs {N.shape}")
    return all(a == 0 or a == b for r, s in zip(M.rows, N.rows) for a, b in zip(r, s))


def strictly_precedes(M: FpMatrix, N: FpMatrix) -> bool:
    return M != N and precedes(M, N)


# ---------------------------------------------------------------------------
# the family K(G, H, T)


@dataclass(frozen=True)
class KPattern:
    """A witnessed candidate ``(sigma, partition, M)`` for membership in K(G, H, T).

    ``maximal`` is filled in by :func:`enumerate_k` and ignored by equality.
    """

    sigma: Perm
    partition: Partition
    M: FpMatrix
    maximal: bool = field(default=False, compare=False)

    def blocks(self) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
        for S in self.partition:
            yield S, tuple(sorted(self.sigma[x] for x in S))


def k_conditions(G: Graph, H: Graph, T: FpMatrix, cand: KPattern) -> dict[str, bool]:
    """Each defining condition of K(G, H, T) evaluated separately."""
    n = G.n
    if H.n != n or T.shape != (n, n) or cand.M.shape != (n, n) or len(cand.sigma) != n:
        raise DimMismatch("candidate, T and graphs disagree on n")
    if sorted(x for S in cand.partition for x in S) != list(range(n)) or any(not S for S in cand.partition):
        raise ValueError(f"{cand.partition} is not a partition of range({n})")
    if sorted(cand.sigma) != list(range(n)):
        raise ValueError(f"{cand.sigma} is not a permutation")
    Hc = H.complement()
    blocks = list(cand.blocks())
    support = {(i, j) for S, sS in blocks for i in S for j in sS}
    M = cand.M
    return {
        "fewer_blocks": len(cand.partition) < n,
        "blocks_connected_in_G": all(G.index_connected(S) for S, _ in blocks),
        "images_connected_in_complement_H": all(Hc.index_connected(sS) for _, sS in blocks),
        "below_T": precedes(M, T),
        "support_is_blocks": M.support() == support,
        "blocks_rank_one": all(rank_rows([[M.rows[i][j] for j in sS] for i in S], M.p) == 1 for S, sS in blocks),
    }


def k_membership(G: Graph, H: Graph, T: FpMatrix, cand: KPattern) -> bool:
    if not obs21_check(G, H, T):
        raise HypothesisViolated("minor condition", "T does not satisfy the 2x2 minor condition for (G, H)")
    return all(k_conditions(G, H, T, cand).values())


@lru_cache(maxsize=256)
def _shapes(G: Graph, H: Graph) -> tuple[tuple[Perm, Partition, tuple], ...]:
    """(sigma, partition, blocks) triples meeting the T-independent conditions."""
    n = G.n
    Hc = H.complement()
    parts = [P for P in set_partitions(n) if len(P) < n and all(G.index_connected(S) for S in P)]
    out = []
    for sigma in itertools.permutations(range(n)):
        for P in parts:
            blocks = tuple((S, tuple(sorted(sigma[x] for x in S))) for S in P)
            if all(len(sS) == 1 or Hc.index_connected(sS) for _, sS in blocks):
                out.append((sigma, P, blocks))
    return tuple(out)


def enumerate_k(G: Graph, H: Graph, T: FpMatrix) -> list[KPattern]:
    """Every matrix of K(G, H, T) once, with the first witness in (sigma, partition) order.

    M is forced by its witness: it equals T on the blocks and is zero
    elsewhere, so a witness yields a member iff T is nonzero on the blocks
    and every block of T has rank 1. Maximal members under ``<=`` are flagged.
    """
    n, p = G.n, T.p
    if n > MAX_K_VERTICES:
        raise TooLarge("K(G,H,T) enumeration", math.factorial(n) * math.factorial(n), math.factorial(MAX_K_VERTICES) ** 2)
    if H.n != n or T.shape != (n, n):
        raise DimMismatch("T and graphs disagree on n")
    R = T.rows
    found: dict[tuple, tuple[Perm, Partition]] = {}
    for sigma, P, blocks in _shapes(G, H):
        ok = True
        for S, sS in blocks:
            sub = [[R[i][j] for j in sS] for i in S]
            if any(x == 0 for r in sub for x in r) or (len(S) > 1 and rank_rows(sub, p) != 1):
                ok = False
                break
        if not ok:
            continue
        rows = [[0] * n for _ in range(n)]
        for S, sS in blocks:
            for i in S:
                for j in sS:
                    rows[i][j] = R[i][j]
        key = tuple(map(tuple, rows))
        if key not in found:
            found[key] = (sigma, P)
    mats = [FpMatrix(p, key, n) for key in found]
    out = []
    for k, (key, (sigma, P)) in enumerate(found.items()):
        maximal = not any(strictly_precedes(mats[k], N) for N in mats)
        out.append(KPattern(sigma, P, mats[k], maximal))
    return out


def maximal_members(G: Graph, H: Graph, T: FpMatrix) -> list[FpMatrix]:
    return [c.M for c in enumerate_k(G, H, T) if c.maximal]


# ---------------------------------------------------------------------------
# determinant splitting


@dataclass(frozen=True)
class DivideReport:
    below_T: bool
    covers_terms: bool
    disjoint_terms: bool
    identity: bool

    @property
    def conditions(self) -> bool:
        return self.below_T and self.covers_terms and self.disjoint_terms

    @property
    def ok(self) -> bool:
        return self.conditions and self.identity


def lemma_divide_conditions(T: FpMatrix, parts: Sequence[FpMatrix]) -> DivideReport:
    """Evaluate the three splitting conditions over all of S_n, and the identity ``det T = sum det T_i``.

    Raises :class:`LemmaContradiction` if the conditions hold but the identity fails.
    """
    n, p = T.nrows, T.p
    if not T.is_square() or any(P.shape != T.shape for P in parts):
        raise ShapeMismatch("parts must share the square shape of T")
    if n > MAX_K_VERTICES:
        raise TooLarge("permutation scan", math.factorial(n), math.factorial(MAX_K_VERTICES))
    below = all(precedes(P, T) for P in parts)
    covers = disjoint = True
    for sigma in itertools.permutations(range(n)):
        terms = [leibniz_term(P, sigma) for P in parts]
        t = leibniz_term(T, sigma)
        if t and t not in terms:
            covers = False
        if sum(1 for x in terms if x) > 1:
            disjoint = False
    identity = det_rows(T.rows, p) == sum(det_rows(P.rows, p) for P in parts) % p
    report = DivideReport(below, covers, disjoint, identity)
    if report.conditions and not identity:
        raise LemmaContradiction(f"conditions hold but det(T) != sum det(T_i) for T = {T}")
    return report


def lemma_divide_check(T: FpMatrix, parts: Sequence[FpMatrix]) -> bool:
    return lemma_divide_conditions(T, parts).ok


def maximal_split_report(G: Graph, H: Graph, T: FpMatrix) -> DivideReport:
    """The splitting conditions for the maximal members of K(G, H, T)."""
    return lemma_divide_conditions(T, maximal_members(G, H, T))


# ---------------------------------------------------------------------------
# merging overlapping rank-one blocks


def _block(T: FpMatrix, S: Sequence[int], sigma: Sequence[int]) -> list[list[int]]:
    cols = sorted(sigma[x] for x in S)
    return [[T.rows[i][j] for j in cols] for i in sorted(S)]


def _good_block(T: FpMatrix, S: Sequence[int], sigma: Sequence[int]) -> bool:
    sub = _block(T, S, sigma)
    return all(x for r in sub for x in r) and rank_rows(sub, T.p) == 1


def claim_union_check(
    G: Graph, H: Graph, T: FpMatrix, sigma: Sequence[int], S1: Sequence[int], S2: Sequence[int]
) -> bool:
    """Check the conclusion for two overlapping good blocks: their union is again good.

    Raises :class:`HypothesisViolated` naming the first failed hypothesis (a)-(f).
    """
    Hc = H.complement()
    S1, S2 = set(S1), set(S2)
    if not obs21_check(G, H, T):
        raise HypothesisViolated("a", "2x2 minor condition")
    if not S1 & S2:
        raise HypothesisViolated("b", "S1 and S2 are disjoint")
    if not (G.index_connected(S1) and G.index_connected(S2)):
        raise HypothesisViolated("c", "a block is not connected in G")
    if not (Hc.index_connected({sigma[x] for x in S1}) and Hc.index_connected({sigma[x] for x in S2})):
        raise HypothesisViolated("d", "an image block is not connected in the complement of H")
    if not _good_block(T, S1, sigma):
        raise HypothesisViolated("e", "T(S1, sigma(S1)) is not all-nonzero of rank 1")
    if not _good_block(T, S2, sigma):
        raise HypothesisViolated("f", "T(S2, sigma(S2)) is not all-nonzero of rank 1")
    U = S1 | S2
    return G.index_connected(U) and Hc.index_connected({sigma[x] for x in U}) and _good_block(T, U, sigma)


def claim_instances(G: Graph, H: Graph, T: FpMatrix) -> Iterator[tuple[Perm, tuple[int, ...], tuple[int, ...]]]:
    """Every ``(sigma, S1, S2)`` with ``S1 < S2`` (as sorted tuples) meeting hypotheses (b)-(f) for T."""
    n = G.n
    Hc = H.complement()
    subsets = [S for k in range(1, n + 1) for S in itertools.combinations(range(n), k)]
    connected = [S for S in subsets if G.index_connected(S)]
    for sigma in itertools.permutations(range(n)):
        good = [
            S for S in connected if Hc.index_connected({sigma[x] for x in S}) and _good_block(T, S, sigma)
        ]
        for S1, S2 in itertools.combinations(good, 2):
            if set(S1) & set(S2):
                yield sigma, S1, S2


# ---------------------------------------------------------------------------
# the singularity oracle


@dataclass
class PropKeyReport:
    mode: str
    p: int
    n: int
    conforming_count: int = 0
    invertible_count: int = 0
    max_det_seen: int = 0
    lemma23_checked: int = 0
    lemma23_nontrivial: int = 0
    failures: list = field(default_factory=list)
    failure_count: int = 0

    @property
    def passed(self) -> bool:
        return self.failure_count == 0

    def add_failure(self, entry: dict):
        self.failure_count += 1
        if len(self.failures) < MAX_FAILURES_KEPT:
            self.failures.append(entry)

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "p": self.p,
            "n": self.n,
            "conforming_count": self.conforming_count,
            "invertible_count": self.invertible_count,
            "max_det_seen": self.max_det_seen,
            "lemma23_checked": self.lemma23_checked,
            "lemma23_nontrivial": self.lemma23_nontrivial,
            "failure_count": self.failure_count,
            "failures": self.failures,
        }


def _rank_key(rows, seed: int) -> bytes:
    h = hashlib.blake2b(repr(rows).encode(), digest_size=8, key=seed.to_bytes(8, "little"))
    return h.digest()


def _scan_part(G: Graph, H: Graph, p: int, first: Sequence[int] | None, keep: int, seed: int):
    """Scan one slice of the conforming family; return counts, the top det, invertible witnesses
    and the ``keep`` matrices with smallest seeded hash (a partition-independent sample)."""
    scan = ConformingScan(G, H, PrimeField(p))
    count = inv = 0
    top = 0
    witnesses = []
    # min-heap on the complemented key keeps the `keep` smallest keys
    heap: list[tuple[bytes, tuple]] = []
    for R in scan.rows(first):
        count += 1
        d = det_rows(R, p)
        if d:
            inv += 1
            top = max(top, d)
            if len(witnesses) < MAX_FAILURES_KEPT:
                witnesses.append(R)
        if keep:
            key = _rank_key(R, seed)
            item = (bytes(255 - b for b in key), R)
            if len(heap) < keep:
                heapq.heappush(heap, item)
            elif item > heap[0]:
                heapq.heapreplace(heap, item)
    sample = [(bytes(255 - b for b in k), R) for k, R in heap]
    return count, inv, top, witnesses, sample


def prop_key_oracle(
    G: Graph,
    H: Graph,
    F: PrimeField,
    lemma_checks: int | None = 100,
    samples: int | None = None,
    seed: int = 0,
    jobs: int = 1,
) -> PropKeyReport:
    """Check that no conforming T is invertible for a non-isomorphic pair.

    Exhaustive by default; with ``samples`` draws that many conforming T at
    random instead. For ``lemma_checks`` of the visited T (a seeded,
    order-independent selection), the maximal members of K(G, H, T) are
    checked against the splitting conditions over all of S_n.

    The singularity claim needs ``|E(G)| >= |E(H)|``; with fewer edges in G,
    ``T^t span_G T`` can sit properly inside ``span_H`` for invertible T.
    """
    if G.n != H.n:
        raise DimMismatch(f"graphs on {G.n} and {H.n} vertices")
    if graph_iso(G, H) is not None:
        raise GraphsIsomorphic("the graphs are isomorphic; the oracle does not apply")
    p, n = F.p, G.n
    report = PropKeyReport("sampled" if samples else "exhaustive", p, n)
    if samples:
        rng = random.Random(seed)
        scan = ConformingScan(G, H, F, exhaustive=False)
        chosen = []
        for _ in range(samples):
            R = scan.sample(rng)
            report.conforming_count += 1
            d = det_rows(R, p)
            if d:
                report.invertible_count += 1
                report.max_det_seen = max(report.max_det_seen, d)
                report.add_failure({"kind": "invertible", "T": [list(r) for r in R], "det": d})
            if lemma_checks is None or len(chosen) < lemma_checks:
                chosen.append(R)
    else:
        scan = ConformingScan(G, H, F)
        firsts = scan.first_rows()
        # lemma_checks=None checks every conforming T
        keep = scan.bound if lemma_checks is None else lemma_checks
        if jobs > 1:
            chunks = [firsts[k::jobs] for k in range(jobs)]
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                parts = list(pool.map(_scan_part, [G] * jobs, [H] * jobs, [p] * jobs, chunks, [keep] * jobs, [seed] * jobs))
        else:
            parts = [_scan_part(G, H, p, None, keep, seed)]
        pooled = []
        for count, inv, top, witnesses, sample in parts:
            report.conforming_count += count
            report.invertible_count += inv
            report.max_det_seen = max(report.max_det_seen, top)
            report.failure_count += inv
            for R in witnesses[: MAX_FAILURES_KEPT - len(report.failures)]:
                report.failures.append({"kind": "invertible", "T": [list(r) for r in R], "det": det_rows(R, p)})
            pooled.extend(sample)
        pooled.sort()
        chosen = [R for _, R in pooled[:keep]]
    log.info("scanned %d conforming matrices, %d invertible", report.conforming_count, report.invertible_count)
    for k, R in enumerate(chosen, 1):
        if k % 1000 == 0:
            log.info("splitting checks: %d of %d", k, len(chosen))
        T = FpMatrix(p, R, n)
        fam = maximal_members(G, H, T)
        rep = lemma_divide_conditions(T, fam)
        report.lemma23_checked += 1
        if fam:
            report.lemma23_nontrivial += 1
        if not rep.ok:
            report.add_failure({"kind": "lemma", "T": [list(r) for r in R], "report": rep.__dict__})
    return report


def sample_claim_instances(rng: random.Random, graphs: Sequence[Graph], F: PrimeField, trials: int):
    """Random ``(G, H, T, sigma, S1, S2)`` instances meeting hypotheses (a)-(f).

    Each trial draws G, H from ``graphs`` and a conforming T, then yields every
    overlapping pair of good blocks of T.
    """
    for _ in range(trials):
        G, H = rng.choice(graphs), rng.choice(graphs)
        scan = ConformingScan(G, H, F, exhaustive=False)
        T = FpMatrix(F.p, scan.sample(rng), G.n)
        for sigma, S1, S2 in claim_instances(G, H, T):
            yield G, H, T, sigma, S1, S2
