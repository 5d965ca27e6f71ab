import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covercraft import using_backend
from covercraft.graphs import (
    Graph,
    GraphError,
    colorable_naive,
    colorable_via_cover,
    colorable_via_parity,
    coloring_witnesses,
    complete_graph,
    edge_minimal_without_flow,
    edge_vectors,
    flow_space,
    nz_flow_exists,
    parse_graph,
    petersen,
    triangle,
)
from covercraft.groups import parse_group

import oracles


def all_graphs(n):
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph.from_pairs(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])


def test_edge_vectors():
    assert edge_vectors(Graph(2, ((0, 1),)), 3).tolist() == [[1, 2]]
    assert edge_vectors(Graph(2, ((1, 0),)), 5).tolist() == [[4, 1]]
    assert edge_vectors(Graph(2, ((0, 1),)), 2).tolist() == [[1, 1]]


@pytest.mark.parametrize("n,edges", [(2, ((0, 0),)), (2, ((0, 2),)), (-1, ())])
def test_graph_validation(n, edges):
    with pytest.raises(GraphError):
        Graph(n, edges)


def test_parse_graph():
    g = parse_graph("# triangle\n3 3\n0 1\n1 2\n2 0\n")
    assert g.edges == ((0, 1), (1, 2), (2, 0))
    assert parse_graph(g.to_text()) == g
    for bad in ["", "3 2\n0 1\n", "3\n", "2 1\n0 x\n"]:
        with pytest.raises(GraphError):
            parse_graph(bad)


# colorings ------------------------------------------------------------------

def test_triangle_witnesses():
    w = coloring_witnesses(triangle(), 3)
    assert w.shape[0] == 6  # 27 points, 21 on some edge hyperplane
    assert all(len(set(row.tolist())) == 3 for row in w)
    assert colorable_via_cover(triangle(), 3) and not colorable_via_cover(triangle(), 2)


def test_k4_needs_four_colors():
    k4 = complete_graph(4)
    assert not colorable_via_cover(k4, 3) and colorable_via_cover(k4, 4)
    assert not colorable_via_parity(k4, 3)
    assert colorable_naive(k4, 4) == [0, 1, 2, 3]


@pytest.mark.parametrize("n", range(1, 6))
@pytest.mark.parametrize("q", [2, 3])
def test_colorings_match_oracle(n, q):
    for g in all_graphs(n):
        expect = oracles.colorable(n, g.edges, q)
        naive = colorable_naive(g, q)
        assert (naive is not None) == expect
        if naive is not None:
            assert all(naive[u] != naive[v] for u, v in g.edges)
        assert colorable_via_cover(g, q) == expect
        if q == 3:
            assert colorable_via_parity(g, q) == expect


def test_parity_rescaling():
    g = complete_graph(4)
    for scales in itertools.product([1, 2], repeat=6):
        assert not colorable_via_parity(g, 3, scales)
    assert colorable_via_parity(triangle(), 3, [2, 1, 2])
    with pytest.raises(GraphError):
        colorable_via_parity(triangle(), 3, [1, 0, 1])
    with pytest.raises(ValueError):
        colorable_via_parity(triangle(), 4)


def test_odd_cycle():
    c5 = Graph.from_pairs(5, [(i, (i + 1) % 5) for i in range(5)])
    assert colorable_via_parity(c5, 3) and colorable_via_cover(c5, 3)
    assert not colorable_via_cover(c5, 2)
    assert colorable_naive(petersen(), 3) is not None


# flows ----------------------------------------------------------------------

@pytest.mark.parametrize("g,dim", [(complete_graph(4), 3), (petersen(), 6),
                                   (Graph.from_pairs(4, [(0, 1), (1, 2), (1, 3)]), 0),
                                   (Graph.from_pairs(4, [(0, 1), (2, 3)]), 0),
                                   (Graph.from_pairs(2, [(0, 1), (0, 1), (0, 1)]), 2)])
def test_flow_dimension(g, dim):
    space = flow_space(g, parse_group("C3"))
    assert space.dimension == dim == len(g.edges) - g.n_vertices + g.components()


@pytest.mark.parametrize("g,group,exists", [
    (complete_graph(4), "C3", False),
    (complete_graph(4), "C4", True),
    (complete_graph(4), "C2*C2", True),
    (complete_graph(4), "C2", False),
    (petersen(), "C3", False),
    (petersen(), "C4", False),
    (petersen(), "C2*C2", False),
    (petersen(), "C5", True),
    (Graph.from_pairs(2, [(0, 1)]), "C5", False),
    (triangle(), "C2", True),
])
def test_flow_facts(g, group, exists):
    r = nz_flow_exists(g, parse_group(group))
    assert (r.flow is not None) == exists
    if exists:
        assert r.space.conserves(r.flow) and 0 not in r.flow


def test_petersen_c5_count():
    r = nz_flow_exists(petersen(), parse_group("C5"))
    assert r.nowhere_zero_count == 240 and r.scanned == 5**6


def test_bridge_blocks_flows():
    # two triangles joined by a bridge
    g = Graph.from_pairs(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
    for spec in ["C3", "C4", "C5", "C2*C2"]:
        assert nz_flow_exists(g, parse_group(spec)).flow is None


def test_flow_count_isomorphism_invariant():
    # the number of nowhere-zero flows depends only on |A|
    for g in [complete_graph(4), triangle()]:
        assert (nz_flow_exists(g, parse_group("C4")).nowhere_zero_count
                == nz_flow_exists(g, parse_group("C2*C2")).nowhere_zero_count)


small_graphs = st.integers(2, 5).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
                                             .filter(lambda e: e[0] != e[1]), max_size=7)))


@settings(max_examples=100, deadline=None)
@given(small_graphs, st.sampled_from([2, 3, 4]))
def test_flow_count_matches_oracle(case, m):
    n, edges = case
    g = Graph(n, tuple(edges))
    r = nz_flow_exists(g, parse_group(f"C{m}"))
    assert r.nowhere_zero_count == oracles.count_nz_flows_cyclic(n, edges, m)
    assert r.scanned == m ** (len(edges) - n + g.components())


@settings(max_examples=60, deadline=None)
@given(small_graphs, st.sampled_from(["C3", "C4", "C2*C2", "C5"]), st.data())
def test_orientation_independence(case, spec, data):
    n, edges = case
    g = Graph(n, tuple(edges))
    flips = data.draw(st.sets(st.integers(0, max(0, len(edges) - 1)))) if edges else set()
    h = g
    for i in flips:
        h = h.flip(i)
    grp = parse_group(spec)
    a, b = nz_flow_exists(g, grp), nz_flow_exists(h, grp)
    assert (a.flow is None) == (b.flow is None)
    assert a.nowhere_zero_count == b.nowhere_zero_count


@pytest.mark.parametrize("g,spec", [(petersen(), "C4"), (complete_graph(4), "C3"), (triangle(), "C5")])
def test_backends_and_workers_agree(g, spec):
    grp = parse_group(spec)
    with using_backend("numpy"):
        a = nz_flow_exists(g, grp).to_json()
    with using_backend("numba"):
        b = nz_flow_exists(g, grp).to_json()
        c = nz_flow_exists(g, grp, workers=4).to_json()
    assert a == b == c


def test_edge_minimal_without_flow():
    k4 = complete_graph(4)
    assert not edge_minimal_without_flow(triangle(), parse_group("C3"))
    cut = Graph.from_pairs(2, [(0, 1)])
    assert edge_minimal_without_flow(cut, parse_group("C3"))
    expected = all(nz_flow_exists(k4.delete_edge(i), parse_group("C3")).flow is not None for i in range(6))
    assert edge_minimal_without_flow(k4, parse_group("C3")) == expected
