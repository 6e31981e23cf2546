from __future__ import annotations

import itertools
import sys

import pytest

from bltgroups.fp import PrimeField
from bltgroups.graph import Graph, all_graphs


def canonical_form(G: Graph) -> tuple:
    """Lexicographically smallest sorted edge list over all relabelings (test-only oracle)."""
    n = G.n
    best = None
    for perm in itertools.permutations(range(n)):
        e = tuple(sorted(tuple(sorted((perm[i], perm[j]))) for i, j in G.index_edges))
        if best is None or e < best:
            best = e
    return (n, best)


def iso_classes(n: int) -> list[Graph]:
    seen = {}
    for G in all_graphs(n):
        seen.setdefault(canonical_form(G), G)
    return list(seen.values())


def leibniz_det(rows, p: int) -> int:
    """Determinant by the permutation expansion, independent of elimination."""
    n = len(rows)
    total = 0
    for sigma in itertools.permutations(range(n)):
        inversions = sum(1 for a, b in itertools.combinations(range(n), 2) if sigma[a] > sigma[b])
        term = -1 if inversions % 2 else 1
        for i in range(n):
            term *= rows[i][sigma[i]]
        total += term
    return total % p


def uf_connected(n: int, edges, S) -> bool:
    """Union-find connectivity of the subgraph induced on S."""
    S = set(S)
    parent = {x: x for x in S}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        if a in S and b in S:
            parent[find(a)] = find(b)
    return len({find(x) for x in S}) == 1


@pytest.fixture(scope="session")
def F3():
    return PrimeField(3)


@pytest.fixture(scope="session")
def F5():
    return PrimeField(5)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num][1])
