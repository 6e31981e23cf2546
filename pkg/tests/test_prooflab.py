from __future__ import annotations

import itertools
import random

import pytest

from bltgroups import prooflab
from bltgroups.altspace import ConformingScan, obs21_check
from bltgroups.errors import DimMismatch, GraphsIsomorphic, HypothesisViolated, ShapeMismatch, TooLarge
from bltgroups.fp import FpMatrix, PrimeField, det, rank_rows
from bltgroups.graph import Graph
from bltgroups.prooflab import (
    KPattern,
    LemmaContradiction,
    claim_instances,
    claim_union_check,
    enumerate_k,
    k_conditions,
    k_membership,
    lemma_divide_check,
    lemma_divide_conditions,
    leibniz_term,
    maximal_members,
    maximal_split_report,
    perm_sign,
    precedes,
    prop_key_oracle,
    sample_claim_instances,
    set_partitions,
    strictly_precedes,
)

from conftest import leibniz_det, uf_connected

P4, STAR = Graph.path(4), Graph.star(4)


def _p4_star_family(limit=None):
    scan = ConformingScan(P4, STAR, PrimeField(3))
    for k, R in enumerate(scan.rows()):
        if limit is not None and k >= limit:
            return
        yield FpMatrix(3, R, 4)


def test_set_partitions_bell_numbers():
    assert [sum(1 for _ in set_partitions(n)) for n in range(7)] == [1, 1, 2, 5, 15, 52, 203]
    for P in set_partitions(4):
        assert sorted(x for S in P for x in S) == [0, 1, 2, 3]


def test_perm_sign_and_leibniz():
    for n in range(1, 5):
        for sigma in itertools.permutations(range(n)):
            inversions = sum(1 for a, b in itertools.combinations(range(n), 2) if sigma[a] > sigma[b])
            assert perm_sign(sigma) == (-1) ** inversions
    rng = random.Random(0)
    for _ in range(50):
        M = FpMatrix(5, [[rng.randrange(5) for _ in range(4)] for _ in range(4)])
        assert sum(leibniz_term(M, s) for s in itertools.permutations(range(4))) % 5 == det(M)


def test_precedes_examples():
    N = FpMatrix(3, [[1, 2], [0, 1]])
    assert precedes(FpMatrix.zeros(3, 2), N)
    assert precedes(N, N) and not strictly_precedes(N, N)
    assert not precedes(FpMatrix(3, [[2, 2], [0, 1]]), N)
    assert strictly_precedes(FpMatrix(3, [[1, 0], [0, 1]]), N)
    with pytest.raises(ShapeMismatch):
        precedes(FpMatrix.zeros(3, 3), N)


def _hand_T():
    # rows restricted to the non-centre columns are all multiples of (1, 2, 1)
    return FpMatrix(3, [[1, 1, 2, 1], [0, 2, 1, 2], [1, 0, 0, 0], [0, 1, 2, 1]])


def test_k_membership_hand_instance():
    T = _hand_T()
    assert obs21_check(P4, STAR, T)
    M = FpMatrix(3, [[0, 1, 2, 0], [0, 2, 1, 0], [1, 0, 0, 0], [0, 0, 0, 1]])
    good = KPattern((1, 2, 0, 3), ((0, 1), (2,), (3,)), M)
    assert all(k_conditions(P4, STAR, T, good).values())
    assert k_membership(P4, STAR, T, good)
    # sigma = id sends {1, 2} onto the centre's edge, not connected in the complement of the star
    M_id = FpMatrix(3, [[1, 1, 0, 0], [0, 2, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1]])
    bad = KPattern((0, 1, 2, 3), ((0, 1), (2,), (3,)), M_id)
    cond = k_conditions(P4, STAR, T, bad)
    assert cond["fewer_blocks"] and cond["blocks_connected_in_G"] and cond["below_T"]
    assert not cond["images_connected_in_complement_H"]
    assert not cond["support_is_blocks"]
    assert not k_membership(P4, STAR, T, bad)
    singletons = KPattern((0, 1, 2, 3), ((0,), (1,), (2,), (3,)), FpMatrix.identity(3, 4))
    assert not k_conditions(P4, STAR, T, singletons)["fewer_blocks"]
    members = enumerate_k(P4, STAR, T)
    assert good.M in {c.M for c in members}
    assert sum(det(c.M) for c in members) % 3 == det(T) == 0


def test_k_membership_requires_conforming_T():
    T = FpMatrix.identity(3, 4)
    assert not obs21_check(Graph.complete(4), Graph.empty(4), T)
    cand = KPattern((0, 1, 2, 3), ((0, 1, 2, 3),), T)
    with pytest.raises(HypothesisViolated):
        k_membership(Graph.complete(4), Graph.empty(4), T, cand)
    with pytest.raises(DimMismatch):
        k_conditions(P4, STAR, FpMatrix.identity(3, 3), cand)


def test_k_empty_cases():
    rng = random.Random(1)
    for _ in range(30):
        T = FpMatrix(3, [[rng.randrange(3) for _ in range(4)] for _ in range(4)])
        assert enumerate_k(P4, Graph.complete(4), T) == []
        assert enumerate_k(Graph.empty(4), P4, T) == []


def _member_oracle(G, H, T, M):
    """Brute-force Definition-style membership: try every permutation and partition."""
    n = G.n
    Hc = H.complement()
    if not precedes(M, T):
        return False
    supp = {(i, j) for i in range(n) for j in range(n) if M.rows[i][j]}
    for sigma in itertools.permutations(range(n)):
        for P in set_partitions(n):
            if len(P) >= n:
                continue
            blocks = [(S, [sigma[x] for x in S]) for S in P]
            if not all(uf_connected(n, G.index_edges, S) for S, _ in blocks):
                continue
            if not all(uf_connected(n, Hc.index_edges, sS) for _, sS in blocks):
                continue
            if supp != {(i, j) for S, sS in blocks for i in S for j in sS}:
                continue
            if all(rank_rows([[M.rows[i][j] for j in sorted(sS)] for i in S], 3) == 1 for S, sS in blocks):
                return True
    return False


def test_enumerate_k_matches_filter_everything_oracle():
    scan = ConformingScan(P4, STAR, PrimeField(3))
    fam = [FpMatrix(3, R, 4) for R in scan.rows() if sum(1 for r in R for x in r if x) <= 8]
    rng = random.Random(9)
    with_members = [T for T in rng.sample(fam, 3000) if enumerate_k(P4, STAR, T)]
    picks = rng.sample(fam, 4) + rng.sample(with_members, 8) + [_hand_T()]
    nontrivial = 0
    for T in picks:
        got = {c.M for c in enumerate_k(P4, STAR, T)}
        supp = sorted(T.support())
        want = set()
        for mask in range(1 << len(supp)):
            rows = [[0] * 4 for _ in range(4)]
            for b, (i, j) in enumerate(supp):
                if mask >> b & 1:
                    rows[i][j] = T.rows[i][j]
            M = FpMatrix(3, rows, 4)
            if _member_oracle(P4, STAR, T, M):
                want.add(M)
        assert got == want
        nontrivial += bool(got)
    assert nontrivial


def test_k_members_singular_and_maximal_flags():
    checked = 0
    for T in itertools.islice(_p4_star_family(), 0, 438129, 997):
        members = enumerate_k(P4, STAR, T)
        mats = [c.M for c in members]
        assert len(set(mats)) == len(mats)
        for c in members:
            assert det(c.M) == 0
            assert k_membership(P4, STAR, T, c)
            assert c.maximal == (not any(strictly_precedes(c.M, N) for N in mats))
        checked += 1
    assert checked > 400


def test_lemma_divide_examples():
    T = FpMatrix(5, [[1, 0, 0], [0, 2, 0], [0, 0, 3]])
    assert lemma_divide_check(T, [T])
    # two masks sharing the diagonal term break disjointness
    A = FpMatrix(5, [[1, 0, 0], [0, 2, 0], [0, 0, 0]])
    B = FpMatrix(5, [[1, 0, 0], [0, 0, 0], [0, 0, 3]])
    rep = lemma_divide_conditions(T, [T, T])
    assert not rep.disjoint_terms and not rep.ok
    rep = lemma_divide_conditions(T, [A, B])
    assert not rep.covers_terms
    # split the 6 permutations of an all-nonzero 3x3 into parts with disjoint supports per term
    U = FpMatrix(5, [[1, 2, 3], [4, 1, 2], [3, 4, 1]])
    even = FpMatrix(5, [[1, 2, 3], [0, 0, 0], [0, 0, 0]])
    parts = []
    for j in range(3):
        rows = [[0] * 3 for _ in range(3)]
        rows[0][j] = U.rows[0][j]
        for i in (1, 2):
            for k in range(3):
                if k != j:
                    rows[i][k] = U.rows[i][k]
        parts.append(FpMatrix(5, rows))
    rep = lemma_divide_conditions(U, parts)
    assert rep.ok
    assert det(U) == sum(leibniz_det(P.rows, 5) for P in parts) % 5
    assert not lemma_divide_conditions(U, [even]).covers_terms
    with pytest.raises(ShapeMismatch):
        lemma_divide_conditions(U, [FpMatrix.zeros(5, 2)])
    with pytest.raises(TooLarge):
        lemma_divide_conditions(FpMatrix.identity(3, 6), [])


def test_lemma_contradiction_is_raised(monkeypatch):
    T = FpMatrix(5, [[1, 0], [0, 2]])
    # a determinant routine that disagrees with itself makes the identity fail
    values = iter([1, 0])
    monkeypatch.setattr(prooflab, "det_rows", lambda R, p: next(values))
    with pytest.raises(LemmaContradiction):
        lemma_divide_conditions(T, [T])


def test_maximal_split_on_family_sample():
    for T in itertools.islice(_p4_star_family(), 0, 438129, 211):
        rep = maximal_split_report(P4, STAR, T)
        assert rep.ok, T


def test_claim_examples():
    G, H = P4, STAR
    # S1 = S2 and nested sets reduce to the hypotheses
    rng = random.Random(5)
    found = 0
    for _ in range(400):
        T = FpMatrix(3, ConformingScan(G, H, PrimeField(3)).sample(rng), 4)
        for sigma, S1, S2 in claim_instances(G, H, T):
            assert claim_union_check(G, H, T, sigma, S1, S1)
            if set(S1) <= set(S2):
                assert claim_union_check(G, H, T, sigma, S1, S2)
            found += 1
    assert found


def test_claim_hypotheses_named():
    ones = FpMatrix(3, [[1] * 4] * 4)
    T = _hand_T()
    ident = (0, 1, 2, 3)
    cases = [
        ("a", Graph.complete(4), Graph.empty(4), FpMatrix.identity(3, 4), ident, (0,), (0, 1)),
        ("b", P4, STAR, ones, ident, (0,), (1,)),
        ("c", P4, STAR, ones, ident, (0, 2), (0,)),
        ("d", P4, STAR, ones, ident, (0, 1), (0,)),
        ("e", P4, STAR, T, ident, (1, 2), (1,)),
        ("f", P4, STAR, T, (1, 2, 3, 0), (0, 1), (1, 2)),
    ]
    for which, G, H, M, sigma, S1, S2 in cases:
        with pytest.raises(HypothesisViolated) as e:
            claim_union_check(G, H, M, sigma, S1, S2)
        assert e.value.which == which
    assert claim_union_check(P4, STAR, T, (1, 2, 0, 3), (0, 1), (1,))


def test_claim_sampled_instances():
    graphs = [P4, STAR, Graph.cycle(4), Graph.on(4, [(1, 2), (3, 4)]), Graph.on(4, [(1, 2), (2, 3), (1, 3)])]
    rng = random.Random(17)
    count = 0
    for G, H, T, sigma, S1, S2 in sample_claim_instances(rng, graphs, PrimeField(3), 40):
        assert claim_union_check(G, H, T, sigma, S1, S2)
        count += 1
    assert count > 100


def test_prop_key_p4_star():
    rep = prop_key_oracle(P4, STAR, PrimeField(3))
    assert rep.conforming_count == 438129
    assert rep.invertible_count == 0 and rep.max_det_seen == 0
    assert rep.lemma23_checked == 100 and rep.lemma23_nontrivial > 0
    assert rep.passed and rep.failures == []


def test_prop_key_partition_independent():
    a = prop_key_oracle(Graph.complete(3), Graph.empty(3), PrimeField(3), lemma_checks=30, seed=4)
    b = prop_key_oracle(Graph.complete(3), Graph.empty(3), PrimeField(3), lemma_checks=30, seed=4, jobs=3)
    assert a.to_json() == b.to_json()
    assert a.passed


def test_prop_key_sampled_and_errors():
    rep = prop_key_oracle(Graph.cycle(4), Graph.on(4, [(1, 2), (1, 3), (2, 3), (1, 4)]), PrimeField(3), samples=300, seed=2)
    assert rep.mode == "sampled" and rep.conforming_count == 300 and rep.passed
    with pytest.raises(GraphsIsomorphic):
        prop_key_oracle(P4, Graph.on(4, [(2, 1), (1, 3), (3, 4)]), PrimeField(3))
    with pytest.raises(DimMismatch):
        prop_key_oracle(P4, Graph.path(3), PrimeField(3))


def test_prop_key_edge_count_direction():
    F = PrimeField(3)
    one, two = Graph.on(3, [(1, 2)]), Graph.on(3, [(1, 2), (2, 3)])
    # more edges on the G side: every conforming T is singular
    assert prop_key_oracle(two, one, F, lemma_checks=None).passed
    # fewer edges on the G side: the identity already conforms and is invertible
    rep = prop_key_oracle(one, two, F, lemma_checks=0)
    assert rep.invertible_count > 0 and not rep.passed


def test_conforming_count_transpose_duality():
    """T conforms for (G, H) iff T^t conforms for (complement H, complement G)."""
    F = PrimeField(3)
    K3K1 = Graph.on(4, [(2, 3), (2, 4), (3, 4)])
    a = sum(1 for _ in ConformingScan(P4, STAR, F).rows())
    b = sum(1 for _ in ConformingScan(STAR.complement(), P4.complement(), F).rows())
    assert STAR.complement() == K3K1 and a == b == 438129
    rng = random.Random(8)
    for _ in range(200):
        T = FpMatrix(3, [[rng.choice([0, 1, 1, 2]) for _ in range(4)] for _ in range(4)])
        assert obs21_check(P4, STAR, T) == obs21_check(K3K1, P4.complement(), T.T)
