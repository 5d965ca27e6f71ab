"""Hyperplane coverings of GF(q)^n and nowhere-zero combinations of bases."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .covering import UNATTAINABLE, Candidate, CoverProblem, SearchBudget, Unattainable, _default_budget
from .gf import (
    AffineHyperplane,
    FieldError,
    FieldSpec,
    MatrixGF,
    all_vectors,
    canonical_normals,
    field_make,
    incidence_mask,
    rank,
    solve_affine,
    span_points,
    uncovered_mask,
)
from .groups import bits_from_mask, indices_of, popcount

PLAIN_ENUMERATION_LIMIT = 10**6
_CHUNK = 1 << 16


# ---------------------------------------------------------------------------
# combinations of vectors
# ---------------------------------------------------------------------------

def _stack_bases(bases: Sequence[MatrixGF]) -> tuple[FieldSpec, np.ndarray]:
    if not bases:
        raise FieldError("need at least one basis")
    f = bases[0].field
    n = bases[0].shape[0]
    for b in bases:
        if b.field != f:
            raise FieldError("bases over different fields")
        if b.shape != (n, n):
            raise FieldError(f"each basis must be an {n}x{n} matrix, got {b.shape}")
        if b.rank() != n:
            raise FieldError("a listed basis matrix is singular")
    return f, np.hstack([b.entries for b in bases])


def _odometer(q: int, width: int, start: int, stop: int) -> np.ndarray:
    """Nowhere-zero coefficient vectors number start..stop-1, coordinate 0 fastest."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((idx.size, width), dtype=np.int64)
    for j in range(width):
        out[:, j] = idx % (q - 1) + 1
        idx //= q - 1
    return out


def _combine(f: FieldSpec, cols: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """Vector indices of cols @ coeffs for each row of ``coeffs``."""
    n = cols.shape[0]
    acc = np.zeros((coeffs.shape[0], n), dtype=np.int64)
    for j in range(cols.shape[1]):
        acc = f.add[acc, f.mul[coeffs[:, j][:, None], cols[:, j][None, :]]]
    return acc @ (f.q ** np.arange(n, dtype=np.int64))


def nowhere_zero_solve(f: FieldSpec, cols: np.ndarray, v) -> np.ndarray | None:
    """First x with every entry nonzero and cols @ x = v, or None."""
    cols = np.asarray(cols, dtype=np.int64)
    n, width = cols.shape
    target = f.vec_index(np.asarray(v, dtype=np.int64).reshape(n))
    if width == 0:
        return np.zeros(0, dtype=np.int64) if target == 0 else None
    total = (f.q - 1) ** width
    if f.q == 2:
        x = np.ones(width, dtype=np.int64)
        return x if int(_combine(f, cols, x[None, :])[0]) == target else None
    if total <= PLAIN_ENUMERATION_LIMIT:
        for start in range(0, total, _CHUNK):
            coeffs = _odometer(f.q, width, start, min(total, start + _CHUNK))
            hits = np.flatnonzero(_combine(f, cols, coeffs) == target)
            if hits.size:
                return coeffs[hits[0]]
        return None
    return _meet_in_the_middle(f, cols, target)


def _meet_in_the_middle(f: FieldSpec, cols: np.ndarray, target: int) -> np.ndarray | None:
    n, width = cols.shape
    half = width // 2
    left, right = cols[:, :half], cols[:, half:]
    n_left = (f.q - 1) ** half
    n_right = (f.q - 1) ** (width - half)
    first_left: dict[int, int] = {}
    for start in range(0, n_left, _CHUNK):
        stop = min(n_left, start + _CHUNK)
        sums = _combine(f, left, _odometer(f.q, half, start, stop))
        for off, s in enumerate(sums.tolist()):
            first_left.setdefault(s, start + off)
    vecs = all_vectors(f.q, n)
    weights = f.q ** np.arange(n, dtype=np.int64)
    tvec = vecs[target]
    for start in range(0, n_right, _CHUNK):
        stop = min(n_right, start + _CHUNK)
        coeffs = _odometer(f.q, width - half, start, stop)
        sums = _combine(f, right, coeffs)
        need = f.sub[tvec[None, :], vecs[sums]] @ weights
        for off, s in enumerate(need.tolist()):
            li = first_left.get(s)
            if li is not None:
                lc = _odometer(f.q, half, li, li + 1)[0]
                return np.concatenate([lc, coeffs[off]])
    return None


def nowhere_zero_combination(bases: Sequence[MatrixGF], v) -> np.ndarray | None:
    """Coefficients, all nonzero, on the columns of the listed bases (in
    order) combining to ``v``; None when no such combination exists."""
    f, cols = _stack_bases(bases)
    return nowhere_zero_solve(f, cols, v)


def zero_one_representable(f: FieldSpec, vectors: Sequence, v, nonempty: bool = False) -> tuple[int, ...] | None:
    """Indices of a sub-multiset of ``vectors`` summing to ``v``."""
    vecs = [np.asarray(x, dtype=np.int64) for x in vectors]
    v = np.asarray(v, dtype=np.int64)
    n = v.size
    zero = f.vec_index(np.zeros(n, dtype=np.int64))
    target = f.vec_index(v)
    if target == zero and not nonempty:
        return ()
    points = all_vectors(f.q, n)
    reach: dict[int, tuple[int, ...]] = {zero: ()}
    for j, x in enumerate(vecs):
        xi = f.vec_index(x)
        for s, subset in list(reach.items()):
            t = f.vec_index(f.add[points[s], points[xi]])
            cand = subset + (j,)
            if t == target and (cand or not nonempty):
                return cand
            reach.setdefault(t, cand)
    return None


# ---------------------------------------------------------------------------
# hyperplane covers
# ---------------------------------------------------------------------------

@dataclass
class HyperplaneCoverResult:
    n: int
    q: int
    affine: bool
    value: int | Unattainable | None
    witness: list[AffineHyperplane] | None
    nodes_expanded: int
    status: str
    all_witnesses: list[list[AffineHyperplane]] | None = None

    def to_json(self) -> dict:
        return {
            "invariant": "l" if self.affine else "h",
            "n": self.n,
            "q": self.q,
            "value": str(self.value) if isinstance(self.value, Unattainable) else self.value,
            "witness": [h.to_json() for h in self.witness] if self.witness is not None else None,
            "nodes_expanded": self.nodes_expanded,
            "status": self.status,
        }


def _hyperplane_catalogue(q: int, n: int, affine: bool):
    f = field_make(q)
    cands = []
    for nrm in canonical_normals(q, n):
        direction = bits_from_mask(incidence_mask(f, n, nrm, 0))
        for c in range(q if affine else 1):
            bits = direction if c == 0 else bits_from_mask(incidence_mask(f, n, nrm, c))
            cands.append(Candidate(bits, AffineHyperplane.of(f, nrm, c), direction))
    by_point: dict[int, list[Candidate]] = {u: [] for u in range(q**n)}
    for cand in cands:
        for u in indices_of(cand.bits):
            by_point[u].append(cand)
    return cands, by_point


def _hyperplane_problem(q: int, n: int, affine: bool, trivial: bool = True) -> CoverProblem:
    _, by_point = _hyperplane_catalogue(q, n, affine)

    def trivial_intersection(chosen):
        acc = (1 << q**n) - 1
        for c in chosen:
            acc &= c.direction
        return acc == 1

    return CoverProblem(
        (1 << q**n) - 1, by_point.__getitem__, q ** (n - 1),
        trivial_intersection if trivial else None, irredundant=True,
    )


def min_hyperplane_cover(n: int, q: int, affine: bool = False, budget: SearchBudget | None = None,
                         all_witnesses: bool = False) -> HyperplaneCoverResult:
    """h_q(n) (linear) or l_q(n) (affine): fewest hyperplanes forming an
    irredundant cover whose corresponding hyperplanes meet in {0}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    problem = _hyperplane_problem(q, n, affine)
    n_linear = len(canonical_normals(q, n))
    # linear: an irredundant cover never repeats a hyperplane, so the
    # catalogue size makes the search exhaustive. affine: the n(q-1)
    # hyperplanes x_i = c (c != 0) plus x_1+...+x_n = 0 always qualify.
    default_max = q * n + 1 if affine else n_linear
    budget = _default_budget(budget, default_max)
    k, chosen, nodes, status = problem.minimize(q if affine else q + 1, budget.max_cosets, budget)
    if status != "exact":
        exhaustive = status == "none" and not affine and budget.max_cosets >= n_linear
        if exhaustive:
            return HyperplaneCoverResult(n, q, affine, UNATTAINABLE, None, nodes, "unattainable")
        return HyperplaneCoverResult(n, q, affine, None, None, nodes, "inconclusive")
    witness = [c.tag for c in chosen]
    if k <= n:
        raise AssertionError(f"minimal hyperplane cover of size {k} <= n = {n}")
    result = HyperplaneCoverResult(n, q, affine, k, witness, nodes, "exact")
    if all_witnesses:
        result.all_witnesses = [[c.tag for c in sol] for sol in enumerate_covers(problem, k)]
    return result


def enumerate_covers(problem: CoverProblem, k: int) -> list[list[Candidate]]:
    """Every irredundant cover with at most k members accepted by the
    problem's leaf filter, deduplicated as sets."""
    seen: set[frozenset] = set()
    out: list[list[Candidate]] = []

    def rec(covered, chosen, privates):
        missing = problem.target & ~covered
        if not missing:
            if problem.leaf_ok is None or problem.leaf_ok(chosen):
                key = frozenset((c.bits, c.direction) for c in chosen)
                if key not in seen:
                    seen.add(key)
                    out.append(list(chosen))
            return
        slots = k - len(chosen)
        if slots <= 0 or popcount(missing) > slots * problem.max_size:
            return
        u = (missing & -missing).bit_length() - 1
        for cand in problem.candidates_for(u):
            nxt = problem._extend_privates(privates, cand, covered)
            if nxt is None:
                continue
            chosen.append(cand)
            rec(covered | cand.bits, chosen, nxt)
            chosen.pop()

    rec(0, [], [])
    return out


def irredundant_affine_covers(n: int, q: int, max_k: int) -> list[list[AffineHyperplane]]:
    """All irredundant covers of GF(q)^n by at most ``max_k`` affine
    hyperplanes, with no condition on their intersection."""
    problem = _hyperplane_problem(q, n, affine=True, trivial=False)
    return [[c.tag for c in sol] for sol in enumerate_covers(problem, max_k)]


def _system_arrays(system: Sequence[AffineHyperplane]) -> tuple[FieldSpec, int, np.ndarray, np.ndarray]:
    if not system:
        raise ValueError("empty hyperplane system")
    f = system[0].field
    n = system[0].hyperplane.dim
    for h in system:
        if h.field != f or h.hyperplane.dim != n:
            raise ValueError("hyperplanes from different spaces")
    normals = np.array([h.hyperplane.normal for h in system], dtype=np.int64)
    offsets = np.array([h.offset for h in system], dtype=np.int64)
    return f, n, normals, offsets


def is_irredundant_cover(system: Sequence[AffineHyperplane]) -> bool:
    f, n, normals, offsets = _system_arrays(system)
    if uncovered_mask(f, n, normals, offsets).any():
        return False
    for i in range(len(system)):
        keep = np.arange(len(system)) != i
        if not uncovered_mask(f, n, normals[keep], offsets[keep]).any():
            return False
    return True


def intersection_codim(system: Sequence[AffineHyperplane]) -> int:
    f, _, normals, _ = _system_arrays(system)
    return rank(f, normals)


def codim_ratio_check(system: Sequence[AffineHyperplane]) -> bool:
    """codim of the intersection of the corresponding hyperplanes < 2k/3.

    Guaranteed only over non-prime fields; over prime fields the value is
    still computed so callers can report it."""
    if not is_irredundant_cover(system):
        raise ValueError("system is not an irredundant covering of its space")
    return 3 * intersection_codim(system) < 2 * len(system)


# ---------------------------------------------------------------------------
# bases with no nowhere-zero representation -> affine covers
# ---------------------------------------------------------------------------

class PreconditionError(ValueError):
    pass


@dataclass
class AffineCoverInstance:
    field: FieldSpec
    k: int
    n: int
    particular: np.ndarray
    kernel: np.ndarray
    blocking: tuple[int, ...]
    covers: bool
    irredundant: bool
    intersection_codim: int

    @property
    def dim(self) -> int:
        return self.kernel.shape[0]

    @property
    def ratio(self) -> float | None:
        return len(self.blocking) / self.dim if self.dim else None

    @property
    def bound_ratio(self) -> float | None:
        return self.k / (self.k - 1) if self.k > 1 else None

    def to_json(self) -> dict:
        return {
            "q": self.field.q,
            "k": self.k,
            "n": self.n,
            "dim_U": self.dim,
            "blocking_coordinates": list(self.blocking),
            "covers": self.covers,
            "irredundant": self.irredundant,
            "intersection_codim": self.intersection_codim,
            "ratio": self.ratio,
            "k_over_k_minus_1": self.bound_ratio,
        }


def bases_to_affine_cover(bases: Sequence[MatrixGF], v, point_limit: int = 1 << 16) -> AffineCoverInstance:
    """U = {x : Mx = v} covered by the coordinate hyperplanes x_j = 0.

    Requires that v has no nowhere-zero representation; the cover is then
    thinned to a minimal blocking set of coordinates and audited."""
    f, cols = _stack_bases(bases)
    n, width = cols.shape
    v = np.asarray(v, dtype=np.int64).reshape(n)
    if nowhere_zero_solve(f, cols, v) is not None:
        raise PreconditionError("v has a nowhere-zero combination; no covering instance")
    sol = solve_affine(f, cols, v)
    if sol is None:  # full-rank M always reaches v
        raise AssertionError("bases do not span the target")
    part, kern = sol
    if f.q ** kern.shape[0] > point_limit:
        raise ValueError(f"U has {f.q ** kern.shape[0]} points, above the limit {point_limit}")
    pts = span_points(f, part, kern)
    zero_sets = [pts[:, j] == 0 for j in range(width)]
    blocking = list(range(width))
    for j in range(width):
        rest = [i for i in blocking if i != j]
        if rest and np.logical_or.reduce([zero_sets[i] for i in rest]).all():
            blocking = rest
    covered = np.logical_or.reduce([zero_sets[i] for i in blocking])
    irredundant = True
    for j in blocking:
        others = [zero_sets[i] for i in blocking if i != j]
        if others and np.logical_or.reduce(others).all():
            irredundant = False
    # directions of the H_j inside U: kernel vectors with coordinate j = 0
    sub = kern[:, blocking].T if kern.size else np.zeros((0, 0), dtype=np.int64)
    codim = rank(f, sub) if sub.size else 0
    return AffineCoverInstance(f, len(bases), n, part, kern, tuple(blocking), bool(covered.all()), irredundant, codim)
