import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covercraft.gf import MatrixGF, field_make
from covercraft.matroid import (
    BasePacking,
    LinearMatroid,
    MatroidError,
    brute_force_packing_number,
    check_packing,
    count_minimal,
    edmonds_bound,
    max_disjoint_bases,
    packing_subset,
)

import oracles


def matroid(q, vecs):
    return LinearMatroid(field_make(q), np.array(vecs, dtype=np.int64).reshape(len(vecs), -1))


SIX = [(1, 0), (0, 1), (1, 1), (1, 0), (0, 1), (1, 1)]


def test_rank_examples():
    m = matroid(2, [(1, 0), (0, 1), (1, 0)])
    assert m.rank([]) == 0
    assert m.rank([0, 1]) == 2
    assert m.rank([0, 2]) == 1
    with pytest.raises(MatroidError):
        m.rank([3])


def test_from_matrix_uses_columns():
    m = LinearMatroid.from_matrix(MatrixGF(field_make(3), np.array([[1, 0, 1], [0, 1, 1]])))
    assert m.size == 3 and m.dimension == 2
    assert m.vectors.tolist() == [[1, 0], [0, 1], [1, 1]]


def test_bad_entries():
    with pytest.raises(MatroidError):
        matroid(2, [(1, 2)])


def test_six_vectors_pack_three_bases():
    m = matroid(2, SIX)
    k, packing = max_disjoint_bases(m)
    assert k == 3 and check_packing(m, packing)
    assert edmonds_bound(m, m.ground()) == 3 == brute_force_packing_number(m)


def test_repeated_vector():
    m = matroid(2, [(1,)] * 4)
    assert max_disjoint_bases(m)[0] == 4


def test_single_basis():
    m = matroid(3, [(1, 0), (0, 1)])
    k, packing = max_disjoint_bases(m)
    assert k == 1 and packing.bases == [(0, 1)]


def test_rank_zero_rejected():
    m = matroid(3, [(0, 0), (0, 0)])
    with pytest.raises(MatroidError):
        max_disjoint_bases(m)
    with pytest.raises(MatroidError):
        edmonds_bound(m, m.ground())


def test_check_packing_rejects():
    m = matroid(2, SIX)
    assert not check_packing(m, BasePacking(m.ground(), [(0, 1), (1, 2)]))  # overlap
    assert not check_packing(m, BasePacking(m.ground(), [(0, 3)]))  # dependent
    assert not check_packing(m, BasePacking((0, 1), [(0, 2)]))  # outside X


def test_packing_subset_examples():
    m = matroid(2, SIX)
    ps = packing_subset(m, 3)
    assert ps is not None and ps.hypothesis
    assert ps.subset == m.ground()
    assert len(ps.packing.bases) == 3 and check_packing(m, ps.packing)
    one = packing_subset(m, 1)
    assert one is not None and len(one.packing.bases) == 1
    assert m.independent(one.packing.bases[0])
    with pytest.raises(MatroidError):
        packing_subset(m, 0)


def test_packing_subset_sparse_is_none():
    # no subset X with r(X) >= 1 has |X| >= 2 r(X)
    assert packing_subset(matroid(3, [(1, 0), (0, 1)]), 2) is None


vectors = st.sampled_from([2, 3]).flatmap(
    lambda p: st.tuples(
        st.just(p),
        st.integers(1, 3).flatmap(
            lambda n: st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=1, max_size=7))))


@settings(max_examples=150, deadline=None)
@given(vectors)
def test_packing_matches_oracles(case):
    p, vecs = case
    m = matroid(p, vecs)
    if m.rank(m.ground()) == 0:
        return
    k, packing = max_disjoint_bases(m)
    assert check_packing(m, packing) and len(packing.bases) == k
    assert k == edmonds_bound(m, m.ground())
    assert k == brute_force_packing_number(m)
    assert k == oracles.packing_number(p, vecs)


@settings(max_examples=100, deadline=None)
@given(vectors, st.integers(1, 3))
def test_loop_free_dense_sets_pack(case, k):
    p, vecs = case
    m = matroid(p, vecs)
    loop_free = all(any(v) for v in vecs)
    ps = packing_subset(m, k)
    if loop_free and len(vecs) >= m.rank(m.ground()) * k:
        assert ps is not None
    if ps is not None:
        assert m.rank(ps.subset) >= 1 and len(ps.packing.bases) == k
        assert check_packing(m, BasePacking(ps.subset, ps.packing.bases))
        assert count_minimal(m, ps.subset, k)


def test_loops_break_the_packing_claim():
    # a loop adds size without rank; the dense-set hypothesis holds but no 2 bases exist
    m = matroid(3, [(1,), (0,)])
    assert m.size >= m.rank(m.ground()) * 2
    assert packing_subset(m, 2) is None


def test_count_minimal_examples():
    m = matroid(2, SIX)
    assert count_minimal(m, m.ground(), 3)
    # two copies of (1,0) already meet |Y| >= r(Y) * 2
    assert not count_minimal(m, m.ground(), 2)


@settings(max_examples=100, deadline=None)
@given(vectors, st.data())
def test_rank_submodular_monotone(case, data):
    p, vecs = case
    m = matroid(p, vecs)
    idx = list(range(len(vecs)))
    a = data.draw(st.sets(st.sampled_from(idx)))
    b = data.draw(st.sets(st.sampled_from(idx)))
    assert m.rank(a | b) + m.rank(a & b) <= m.rank(a) + m.rank(b)
    assert m.rank(a & b) <= m.rank(a) <= m.rank(a | b)
    assert m.rank(a) <= len(a)
    if a:
        assert m.rank(a) == oracles.rank_mod_p(p, [vecs[i] for i in sorted(a)])


def test_edmonds_equals_partition_on_all_small_gf2_families():
    vecs = [v for v in itertools.product(range(2), repeat=2) if any(v)]
    for size in range(1, 6):
        for family in itertools.combinations_with_replacement(vecs, size):
            m = matroid(2, list(family))
            assert max_disjoint_bases(m)[0] == edmonds_bound(m, m.ground()) == brute_force_packing_number(m)
