import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covercraft import using_backend
from covercraft.gf import MatrixGF, all_vectors, canonical_normals, field_make
from covercraft.parity import (
    CUBE_LIMIT,
    CombinatorialCube,
    F2GroupAlgebraElement,
    ParityError,
    ajt_brute,
    ajt_cube,
    ajt_cube_witness,
    ajt_parity,
    ajt_parity_shift,
    choosability_witness,
    cover_product_zero,
    cube_intersection,
    cube_set,
    ga_multiply,
    naive_cover_check,
    parity_cover_check,
    rows_cover_nowhere_zero,
    two_family_cover_search,
)

import oracles

E = F2GroupAlgebraElement


def mat(q, rows):
    return MatrixGF(field_make(q), np.array(rows))


# group algebra --------------------------------------------------------------

def test_algebra_examples():
    a = E(3, 2, np.array([1, 0, 1, 0, 0, 1, 0, 0, 1], dtype=bool))
    assert E.one(3, 2) * a == a
    x = E.delta(2, 1, 1) + E.one(2, 1)
    assert (x * x).is_zero()
    g = a.group
    for u, v in itertools.product(range(9), repeat=2):
        assert E.delta(3, 2, u) * E.delta(3, 2, v) == E.delta(3, 2, g.add(u, v))


def test_algebra_group_mismatch():
    with pytest.raises(ParityError):
        ga_multiply(E.one(3, 1), E.one(3, 2))
    with pytest.raises(ParityError):
        E.one(3, 1) + E.one(5, 1)


def elements(p, n):
    return st.lists(st.booleans(), min_size=p**n, max_size=p**n).map(lambda c: E(p, n, np.array(c, dtype=bool)))


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([(3, 1), (3, 2), (5, 1), (2, 3)]).flatmap(
    lambda pn: st.tuples(elements(*pn), elements(*pn), elements(*pn))))
def test_algebra_laws(triple):
    a, b, c = triple
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert (a + b) * c == a * c + b * c
    assert a + a == E.zero(a.p, a.n)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([(3, 2), (5, 1)]).flatmap(lambda pn: elements(*pn)))
def test_hex_round_trip(a):
    text = a.to_hex()
    assert text.splitlines()[0] == f"{a.p} {a.n}"
    assert E.from_hex(text) == a


# covering criteria ----------------------------------------------------------

def test_cover_examples():
    lines = [list(x) for x in canonical_normals(3, 2)]
    assert len(lines) == 4
    assert cover_product_zero(lines, 3) and parity_cover_check(lines, 3) and naive_cover_check(lines, 3)
    assert not cover_product_zero([[1, 0]], 3) and not parity_cover_check([[1, 0]], 3)
    assert not cover_product_zero([], 3, 2) and not parity_cover_check([], 3, 2)
    assert not parity_cover_check([[1, 2]], 3)


def test_binary_field_rejected():
    with pytest.raises(ParityError):
        cover_product_zero([[1, 0]], 2)
    with pytest.raises(ParityError):
        parity_cover_check([[1, 0]], 2)
    with pytest.raises(ParityError):
        cover_product_zero([[1]], 4)


def family(p, n, max_size=8):
    return st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=0, max_size=max_size)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([(3, 2), (3, 3), (5, 2), (7, 1)]).flatmap(lambda pn: st.tuples(st.just(pn), family(*pn))))
def test_criteria_agree(case):
    (p, n), xs = case
    naive = oracles.naive_covers(p, n, xs)
    assert naive_cover_check(xs, p, n) == naive
    assert cover_product_zero(xs, p, n) == naive
    assert parity_cover_check(xs, p, n) == naive
    assert (not oracles.zero_one_parity(p, n, xs)) == naive


@pytest.mark.parametrize("p,n", [(3, 2), (3, 3), (5, 2)])
def test_criteria_singletons_and_pairs(p, n):
    vecs = [list(v) for v in all_vectors(p, n)]
    for x in vecs:
        assert cover_product_zero([x], p) == parity_cover_check([x], p) == naive_cover_check([x], p)
    for x, y in itertools.combinations_with_replacement(vecs, 2):
        naive = naive_cover_check([x, y], p)
        assert cover_product_zero([x, y], p) == naive
        assert parity_cover_check([x, y], p) == naive


# cube sets ------------------------------------------------------------------

def test_cube_examples():
    assert sorted(cube_set([[1, 0], [0, 1]], 3).points) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert sorted(cube_set([[1], [1]], 3).points) == [(0,), (2,)]
    assert sorted(cube_set([[1, 2], [1, 2]], 5).points) == [(0, 0), (2, 4)]
    assert cube_set([], 3, 2).points == [(0, 0)]
    with pytest.raises(ParityError):
        cube_set([[1]] * (CUBE_LIMIT + 1), 3)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([(3, 2), (5, 2), (3, 3), (7, 1)]).flatmap(lambda pn: st.tuples(st.just(pn), family(*pn, 10))))
def test_cube_matches_oracle(case):
    (p, n), xs = case
    cs = cube_set(xs, p, n)
    assert set(cs.points) == oracles.zero_one_parity(p, n, xs)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(3, 2), (5, 2)]).flatmap(lambda pn: st.tuples(st.just(pn), family(*pn, 12))))
def test_cube_backends_agree(case):
    (p, n), xs = case
    with using_backend("numpy"):
        a = cube_set(xs, p, n).bits
    with using_backend("numba"):
        b = cube_set(xs, p, n).bits
    assert a == b


# AJT ------------------------------------------------------------------------

def test_ajt_examples():
    assert ajt_brute(mat(3, [[1, 0], [0, 1]])).tolist() == [1, 1]
    assert ajt_brute(mat(3, [[1, 1], [1, 2]])) is None
    x = ajt_brute(mat(5, [[1, 1], [1, 4]]))
    assert x is not None
    assert ajt_brute(mat(5, [[1, 1], [1, 2]])) is not None
    assert not ajt_parity(mat(3, [[1, 1], [1, 2]])) and not ajt_cube(mat(3, [[1, 1], [1, 2]]))
    assert ajt_parity(mat(5, [[1, 1], [1, 2]])) and ajt_cube(mat(5, [[1, 1], [1, 2]]))


def test_ajt_identity_gf3_n1():
    m = mat(3, [[1]])
    assert ajt_parity_shift(m) == 1  # intersection sizes 2, 1, 1 for v = 0, 1, 2
    assert ajt_cube_witness(m).sides == ((0, 2),)  # first odd cube; {1,2} is odd too
    cs = cube_set([[1]], 3)
    assert [cube_intersection(CombinatorialCube((s,)), cs) for s in [(0, 1), (0, 2), (1, 2)]] == [2, 1, 1]


def test_ajt_domain():
    with pytest.raises(ParityError):
        ajt_brute(mat(3, [[1, 1]]))
    with pytest.raises(ParityError):
        ajt_parity(mat(3, np.zeros((0, 0), dtype=int)))
    with pytest.raises(ParityError):
        ajt_parity(mat(2, [[1]]))
    with pytest.raises(ParityError):
        CombinatorialCube(((1, 1),))


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([3, 5]), st.integers(1, 3), st.data())
def test_ajt_three_way(p, n, data):
    rows = data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=n, max_size=n))
    m = mat(p, rows)
    expect = oracles.ajt_bruteforce(p, rows)
    x = ajt_brute(m)
    assert (x is not None) == expect
    if x is not None:
        f = m.field
        assert np.all(x != 0) and np.all(f.matvec(m.entries, x) != 0)
    assert ajt_parity(m) == expect
    assert ajt_cube(m) == expect
    assert rows_cover_nowhere_zero(m) == (not expect)


@pytest.mark.parametrize("p", [3, 5])
def test_non_ajt_all_cubes_even_n2(p):
    pairs = list(itertools.combinations(range(p), 2))
    for entries in all_vectors(p, 4):
        m = mat(p, entries.reshape(2, 2))
        cs = cube_set(m.entries, p, 2)
        odd = any(cube_intersection(CombinatorialCube((a, b)), cs) & 1 for a in pairs for b in pairs)
        assert odd == (ajt_brute(m) is not None)


def test_cube_witness_is_odd():
    rng = random.Random(7)
    for _ in range(50):
        p = rng.choice([3, 5])
        n = rng.randint(1, 3)
        m = mat(p, [[rng.randrange(p) for _ in range(n)] for _ in range(n)])
        w = ajt_cube_witness(m)
        if w is not None:
            assert cube_intersection(w, cube_set(m.entries, p, n)) % 2 == 1


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([3, 4, 5, 7]), st.integers(1, 3), st.data())
def test_row_rescaling_invariance(q, n, data):
    f = field_make(q)
    rows = np.array(data.draw(st.lists(st.lists(st.integers(0, q - 1), min_size=n, max_size=n),
                                       min_size=n, max_size=n)))
    scales = data.draw(st.lists(st.integers(1, q - 1), min_size=n, max_size=n))
    scaled = np.array([f.mul[c, r] for c, r in zip(scales, rows)])
    assert (ajt_brute(MatrixGF(f, rows)) is None) == (ajt_brute(MatrixGF(f, scaled)) is None)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 5]), st.integers(1, 3), st.data())
def test_ajt_backends_agree(p, n, data):
    rows = data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=n, max_size=n))
    m = mat(p, rows)
    with using_backend("numpy"):
        a = ajt_brute(m)
    with using_backend("numba"):
        b = ajt_brute(m)
    assert (a is None and b is None) or a.tolist() == b.tolist()


def test_choosability():
    m = mat(5, [[1, 0], [0, 1]])
    for v in all_vectors(5, 2):
        x = choosability_witness(m, v)
        assert x is not None and np.all(x != 0) and np.all(m.field.vsub(x, v) != 0)
    assert choosability_witness(mat(3, [[1, 1], [1, 2]]), [0, 0]) is None


# two families ---------------------------------------------------------------

def test_two_family_gf3():
    fam = two_family_cover_search(2, 3)
    assert fam is not None
    assert fam.first == [(1, 0), (0, 1)]
    assert sorted(fam.second) == [(1, 1), (1, 2)]
    assert fam.matrix.rank() == 2 and fam.matrix_is_ajt is False
    assert ajt_brute(fam.matrix) is None
    assert naive_cover_check(fam.first + fam.second, 3)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_two_family_dimension_one(p):
    assert two_family_cover_search(1, p) is None


def test_two_family_gf5():
    # no nonsingular non-AJT 2x2 exists over GF(5), so no pair of families covers
    assert two_family_cover_search(2, 5) is None
    assert not any(
        ajt_brute(mat(5, e.reshape(2, 2))) is None and mat(5, e.reshape(2, 2)).rank() == 2
        for e in all_vectors(5, 4)
    )
