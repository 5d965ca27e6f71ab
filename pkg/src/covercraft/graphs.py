"""Graph colorings as hyperplane covers, and nowhere-zero flows."""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .gf import all_vectors, field_make, uncovered_mask
from .groups import FiniteAbelianGroup, element_limit
from .parity import CUBE_LIMIT, _odd_prime_field, cube_set


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """Loopless multigraph; edge i is oriented edges[i][0] -> edges[i][1]."""

    n_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n_vertices < 0:
            raise GraphError("negative vertex count")
        for u, v in self.edges:
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise GraphError(f"edge ({u}, {v}) has an endpoint outside 0..{self.n_vertices - 1}")
            if u == v:
                raise GraphError(f"loop at vertex {u}")

    @classmethod
    def from_pairs(cls, n_vertices: int, pairs: Sequence[Sequence[int]]) -> "Graph":
        """Default orientation: lower index -> higher index."""
        return cls(n_vertices, tuple((min(int(u), int(v)), max(int(u), int(v))) for u, v in pairs))

    def flip(self, i: int) -> "Graph":
        edges = list(self.edges)
        u, v = edges[i]
        edges[i] = (v, u)
        return Graph(self.n_vertices, tuple(edges))

    def delete_edge(self, i: int) -> "Graph":
        return Graph(self.n_vertices, self.edges[:i] + self.edges[i + 1:])

    def components(self) -> int:
        parent = list(range(self.n_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            parent[find(u)] = find(v)
        return len({find(x) for x in range(self.n_vertices)})

    def to_text(self) -> str:
        lines = [f"{self.n_vertices} {len(self.edges)}"] + [f"{u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    """``V E`` then E lines ``u v``; edges keep the orientation u -> v."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise GraphError("graph file must start with a 'V E' line")
    try:
        n, m = int(rows[0][0]), int(rows[0][1])
        edges = [(int(a), int(b)) for a, b in rows[1:]]
    except ValueError as exc:
        raise GraphError(f"bad graph file: {exc}") from None
    if len(edges) != m:
        raise GraphError(f"header announces {m} edges, found {len(edges)}")
    return Graph(n, tuple(edges))


def triangle() -> Graph:
    return complete_graph(3)


def complete_graph(n: int) -> Graph:
    return Graph.from_pairs(n, list(itertools.combinations(range(n), 2)))


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(i + 5, (i + 2) % 5 + 5) for i in range(5)]
    return Graph.from_pairs(10, outer + spokes + inner)


BUILTIN_GRAPHS = {"triangle": triangle, "k4": lambda: complete_graph(4), "petersen": petersen}


# ---------------------------------------------------------------------------
# colorings
# ---------------------------------------------------------------------------

def edge_vectors(g: Graph, q: int) -> np.ndarray:
    """One row per edge: +1 at its first endpoint, -1 at its second."""
    f = field_make(q)
    out = np.zeros((len(g.edges), g.n_vertices), dtype=np.int64)
    for i, (u, v) in enumerate(g.edges):
        out[i, u] = 1
        out[i, v] = f.neg[1]
    return out


def colorable_naive(g: Graph, q: int) -> list[int] | None:
    """First proper coloring with colors 0..q-1 by backtracking."""
    adj: list[set[int]] = [set() for _ in range(g.n_vertices)]
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    colors = [-1] * g.n_vertices

    def place(x: int) -> bool:
        if x == g.n_vertices:
            return True
        for c in range(q):
            if all(colors[y] != c for y in adj[x] if y < x):
                colors[x] = c
                if place(x + 1):
                    return True
        colors[x] = -1
        return False

    return list(colors) if place(0) else None


def _check_space(q: int, n: int):
    if q**n > max(element_limit(), 1 << 16):
        raise GraphError(f"W = GF({q})^{n} has {q**n} points, above the limit")


def coloring_witnesses(g: Graph, q: int) -> np.ndarray:
    """Points of W = GF(q)^V outside every edge hyperplane v_e^perp."""
    f = field_make(q)
    _check_space(q, g.n_vertices)
    mask = uncovered_mask(f, g.n_vertices, edge_vectors(g, q), None)
    return all_vectors(q, g.n_vertices)[mask]


def colorable_via_cover(g: Graph, q: int) -> bool:
    if not g.edges and q >= 1:
        return True
    if q < 2:
        return False
    return coloring_witnesses(g, q).shape[0] > 0


def colorable_via_parity(g: Graph, q: int, scales: Sequence[int] | None = None) -> bool:
    """Some point of W reached by an odd number of 0-1 combinations of the
    (optionally rescaled) edge vectors."""
    f = _odd_prime_field(q)
    if len(g.edges) > CUBE_LIMIT:
        raise GraphError(f"parity test limited to {CUBE_LIMIT} edges")
    vecs = edge_vectors(g, q)
    if scales is not None:
        if len(scales) != len(g.edges) or any(int(s) % q == 0 for s in scales):
            raise GraphError("need one nonzero scale per edge")
        vecs = f.mul[np.asarray(scales, dtype=np.int64)[:, None] % q, vecs]
    if g.n_vertices == 0:
        return True
    _check_space(q, g.n_vertices)
    return bool(cube_set(vecs, q, g.n_vertices).parity.any())


# ---------------------------------------------------------------------------
# flows
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FlowSpace:
    graph: Graph
    group: FiniteAbelianGroup
    tree_edges: tuple[int, ...]
    free_edges: tuple[int, ...]
    coef: np.ndarray  # tree edge value = sum_j coef[t, j] * free value j
    components: int

    @property
    def dimension(self) -> int:
        return len(self.free_edges)

    @property
    def size(self) -> int:
        return self.group.order ** self.dimension

    def flow_at(self, index: int) -> tuple[int, ...]:
        """Edge values (element indices) of flow number ``index``; the
        first free edge is the most significant digit."""
        order = self.group.order
        free = [0] * self.dimension
        for j in range(self.dimension - 1, -1, -1):
            free[j] = index % order
            index //= order
        values = [0] * len(self.graph.edges)
        for j, e in enumerate(self.free_edges):
            values[e] = free[j]
        for t, e in enumerate(self.tree_edges):
            acc = 0
            for j in range(self.dimension):
                c = self.coef[t, j]
                if c == 1:
                    acc = self.group.add(acc, free[j])
                elif c == -1:
                    acc = self.group.add(acc, self.group.neg(free[j]))
            values[e] = acc
        return tuple(values)

    def conserves(self, values: Sequence[int]) -> bool:
        g = self.group
        net = [0] * self.graph.n_vertices
        for (u, v), x in zip(self.graph.edges, values):
            net[u] = g.add(net[u], x)
            net[v] = g.add(net[v], g.neg(x))
        return all(x == 0 for x in net)


def flow_space(g: Graph, group: FiniteAbelianGroup) -> FlowSpace:
    """Parameterize the A-flows by their values on the non-tree edges of a
    spanning forest; tree edges are solved by peeling leaves."""
    parent = list(range(g.n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree, free = [], []
    for i, (u, v) in enumerate(g.edges):
        ru, rv = find(u), find(v)
        if ru == rv:
            free.append(i)
        else:
            parent[ru] = rv
            tree.append(i)
    m = len({find(x) for x in range(g.n_vertices)})
    d = len(free)
    if d != len(g.edges) - g.n_vertices + m:
        raise AssertionError("forest parameterization has the wrong dimension")
    if group.order**d > max(element_limit(), 1 << 16) * 16:
        raise GraphError(f"flow space has {group.order ** d} points, above the limit")

    # symbolic edge values as integer coefficient rows over the free edges
    value: dict[int, np.ndarray] = {}
    for j, e in enumerate(free):
        row = np.zeros(d, dtype=np.int64)
        row[j] = 1
        value[e] = row
    incident: list[list[int]] = [[] for _ in range(g.n_vertices)]
    for i in tree:
        u, v = g.edges[i]
        incident[u].append(i)
        incident[v].append(i)
    leaves = [x for x in range(g.n_vertices) if len(incident[x]) == 1]
    while leaves:
        x = leaves.pop()
        if len(incident[x]) != 1:
            continue
        t = incident[x][0]
        # conservation at x: sum of out-values minus in-values is zero
        net = np.zeros(d, dtype=np.int64)
        for i, (u, v) in enumerate(g.edges):
            if i == t or i not in value:
                continue
            if u == x:
                net += value[i]
            if v == x:
                net -= value[i]
        u, v = g.edges[t]
        value[t] = -net if u == x else net
        for y in (u, v):
            incident[y].remove(t)
            if len(incident[y]) == 1:
                leaves.append(y)
    coef = np.array([value[t] for t in tree], dtype=np.int64).reshape(len(tree), d)
    if coef.size and np.abs(coef).max() > 1:
        raise AssertionError("fundamental-cycle coefficients must be 0 or +-1")
    return FlowSpace(g, group, tuple(tree), tuple(free), coef, m)


@dataclass
class FlowResult:
    space: FlowSpace
    flow: tuple[int, ...] | None
    nowhere_zero_count: int
    scanned: int

    def to_json(self) -> dict:
        grp = self.space.group
        return {
            "group": str(grp),
            "dimension": self.space.dimension,
            "flow_space_size": self.scanned,
            "nowhere_zero_flows": self.nowhere_zero_count,
            "exists": self.flow is not None,
            "flow": None if self.flow is None else [list(grp.element(x)) for x in self.flow],
        }


def nz_flow_exists(g: Graph, group: FiniteAbelianGroup, workers: int = 1) -> FlowResult:
    """Enumerate the flow group looking for a flow outside every B_e.

    The scan is split by the first free edge's value; the witness is the
    smallest index in the mixed-radix order whatever ``workers`` is."""
    space = flow_space(g, group)
    order = group.order
    total = space.size
    add = group.add_table
    neg = group.neg_table
    if space.dimension == 0:
        chunks = [(0, 1)]
    else:
        step = total // order
        chunks = [(a * step, (a + 1) * step) for a in range(order)]
    scan = lambda lo_hi: _kernels.flow_scan(space.coef, order, add, neg, lo_hi[0], lo_hi[1])
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(scan, chunks))
    else:
        parts = [scan(c) for c in chunks]
    count = sum(p[0] for p in parts)
    zeros = sum(p[2] for p in parts)
    firsts = [p[1] for p in parts if p[1] >= 0]
    if zeros != 1:
        # the B_e meet only in the zero flow
        raise AssertionError(f"{zeros} flows vanish on every edge, expected exactly the zero flow")
    flow = space.flow_at(min(firsts)) if firsts else None
    if flow is not None and (not space.conserves(flow) or 0 in flow):
        raise AssertionError("witness flow fails conservation or vanishes somewhere")
    return FlowResult(space, flow, count, total)


def edge_minimal_without_flow(g: Graph, group: FiniteAbelianGroup) -> bool:
    """No nowhere-zero flow on g, but one after deleting any single edge."""
    if nz_flow_exists(g, group).flow is not None:
        return False
    return all(nz_flow_exists(g.delete_edge(i), group).flow is not None for i in range(len(g.edges)))
