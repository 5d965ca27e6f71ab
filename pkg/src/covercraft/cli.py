"""covercraft command line.

Exit codes: 0 completed, 1 counterexample to a checked property,
2 invalid input, 3 budget or limit exhausted.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Callable

import numpy as np

from . import evidence as evidence_mod
from .covering import (
    BudgetExhausted,
    SearchBudget,
    audit,
    blocking_number,
    min_trivial_intersection_cover,
    phi,
    verify_coset_index_bound,
)
from .gf import MatrixGF, all_vectors, field_make, uncovered_mask
from .graphs import colorable_naive, colorable_via_cover, colorable_via_parity, coloring_witnesses, nz_flow_exists
from .groups import is_prime, lambda_of, parse_group, tau_of
from .io import (
    dumps,
    load_graph,
    load_matrix,
    parse_coset_system,
    parse_hyperplanes,
    parse_vector,
    read_text,
    split_bases,
    to_text,
)
from .linear import (
    PreconditionError,
    bases_to_affine_cover,
    codim_ratio_check,
    intersection_codim,
    is_irredundant_cover,
    min_hyperplane_cover,
    nowhere_zero_combination,
    zero_one_representable,
)
from .matroid import LinearMatroid, max_disjoint_bases, packing_subset
from .parity import (
    ajt_brute,
    ajt_cube_witness,
    ajt_parity_shift,
    rows_cover_nowhere_zero,
    two_family_cover_search,
)
from .suites import DEFAULT_SEED, SUITES, SuiteContext, run_suite

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3


class Outcome:
    def __init__(self, payload: dict, code: int = EXIT_OK):
        self.payload = payload
        self.code = code


def _budget(args) -> SearchBudget:
    return SearchBudget(args.max_cosets, args.node_limit, args.time_limit_sec, args.threads)


def _status_code(status: str) -> int:
    return EXIT_BUDGET if status == "inconclusive" else EXIT_OK


def _ints(spec: str | None) -> list[int] | None:
    if spec is None:
        return None
    return [int(t) for t in spec.replace(",", " ").split()]


# ---------------------------------------------------------------------------
# group / cover
# ---------------------------------------------------------------------------

def cmd_group_phi(args) -> Outcome:
    g = parse_group(args.group)
    r = phi(g, _budget(args))
    out = {"command": "group phi", "group": str(g), "tau": tau_of(g.order), **r.to_json()}
    return Outcome(out, _status_code(r.status))


def cmd_group_min(args, mode: str) -> Outcome:
    g = parse_group(args.group)
    r = min_trivial_intersection_cover(g, mode, _budget(args))
    bound = 1 + lambda_of(g.order)
    out = {"command": f"group {'fmin' if mode == 'cosets' else 'gmin'}", "group": str(g), "mode": mode,
           "lower_bound_1_plus_lambda": bound, **r.to_json()}
    code = _status_code(r.status)
    if r.status == "exact":
        out["index_bound_holds"] = verify_coset_index_bound(r.witness)
        out["lower_bound_holds"] = r.value >= bound
        if not (out["index_bound_holds"] and out["lower_bound_holds"]):
            code = EXIT_COUNTEREXAMPLE
    return Outcome(out, code)


def cmd_group_blocking(args) -> Outcome:
    r = blocking_number(args.n, args.p, _budget(args))
    return Outcome({"command": "group blocking", "expected": 1 + args.n * (args.p - 1), **r.to_json()},
                   _status_code(r.status))


def cmd_cover_audit(args) -> Outcome:
    system, target = parse_coset_system(read_text(args.file))
    rep = audit(system, target)
    return Outcome({"command": "cover audit", "group": str(system.group), "k": len(system), **rep.to_json()})


# ---------------------------------------------------------------------------
# AJT
# ---------------------------------------------------------------------------

def _ajt_methods(m: MatrixGF) -> dict:
    x = ajt_brute(m)
    out = {"ajt": x is not None, "witness": None if x is None else x.tolist(),
           "rows_cover_nowhere_zero": rows_cover_nowhere_zero(m), "rank": m.rank()}
    agree = [out["ajt"], not out["rows_cover_nowhere_zero"]]
    q = m.field.q
    if is_prime(q) and q > 2:
        v = ajt_parity_shift(m)
        cube = ajt_cube_witness(m)
        out["parity_shift"] = None if v is None else all_vectors(q, m.shape[0])[v].tolist()
        out["odd_cube"] = None if cube is None else [list(s) for s in cube.sides]
        agree += [v is not None, cube is not None]
    out["methods_agree"] = len(set(agree)) == 1
    return out


def cmd_ajt_check(args) -> Outcome:
    m = load_matrix(args.file)
    out = {"command": "ajt check", "q": m.field.q, **_ajt_methods(m)}
    return Outcome(out, EXIT_OK if out["methods_agree"] else EXIT_COUNTEREXAMPLE)


def cmd_ajt_scan(args) -> Outcome:
    f = field_make(args.q)
    n = args.n
    total = f.q ** (n * n)
    rng = random.Random(f"{args.seed}:ajt-scan")
    if total <= args.exhaustive_limit:
        mats = (np.array(all_vectors(f.q, n * n)[i]).reshape(n, n) for i in range(total))
        mode, count = "exhaustive", total
    else:
        mats = (np.array([rng.randrange(f.q) for _ in range(n * n)]).reshape(n, n) for _ in range(args.samples))
        mode, count = "sampled", args.samples
    non_ajt = nonsingular_non_ajt = 0
    disagreements, examples = [], []
    for entries in mats:
        m = MatrixGF(f, entries)
        res = _ajt_methods(m)
        if not res["methods_agree"]:
            disagreements.append(entries.tolist())
        if not res["ajt"]:
            non_ajt += 1
            if res["rank"] == n:
                nonsingular_non_ajt += 1
                if len(examples) < 5:
                    examples.append(entries.tolist())
    out = {"command": "ajt scan", "q": f.q, "n": n, "mode": mode, "matrices": count, "non_ajt": non_ajt,
           "nonsingular_non_ajt": nonsingular_non_ajt, "nonsingular_non_ajt_examples": examples,
           "disagreements": disagreements[:5]}
    if is_prime(f.q):
        fam = two_family_cover_search(n, f.q)
        out["two_family_cover"] = None if fam is None else fam.to_json()
    code = EXIT_OK
    if disagreements or (f.q > 3 and nonsingular_non_ajt):
        code = EXIT_COUNTEREXAMPLE
    return Outcome(out, code)


# ---------------------------------------------------------------------------
# hyperplanes / bases
# ---------------------------------------------------------------------------

def cmd_hyperplane_cover_check(args) -> Outcome:
    hs = parse_hyperplanes(read_text(args.file))
    f = hs[0].field
    n = hs[0].hyperplane.dim
    normals = np.array([h.hyperplane.normal for h in hs], dtype=np.int64)
    offsets = np.array([h.offset for h in hs], dtype=np.int64)
    missing = np.flatnonzero(uncovered_mask(f, n, normals, offsets))
    out = {"command": "hyperplane cover-check", "q": f.q, "n": n, "k": len(hs),
           "covers": missing.size == 0,
           "uncovered_witness": None if missing.size == 0 else all_vectors(f.q, n)[missing[0]].tolist(),
           "irredundant": is_irredundant_cover(hs) if missing.size == 0 else False,
           "intersection_codim": intersection_codim(hs)}
    return Outcome(out)


def cmd_hyperplane_min(args) -> Outcome:
    r = min_hyperplane_cover(args.n, args.q, args.affine, _budget(args))
    out = {"command": "hyperplane min", **r.to_json()}
    if r.status == "exact":
        out["ratio_over_n"] = r.value / args.n
    return Outcome(out, _status_code(r.status))


def cmd_hyperplane_ratio(args) -> Outcome:
    hs = parse_hyperplanes(read_text(args.file))
    q = hs[0].field.q
    holds = codim_ratio_check(hs)
    applies = not is_prime(q)
    out = {"command": "hyperplane ratio", "q": q, "k": len(hs), "codim": intersection_codim(hs),
           "codim_below_two_thirds_k": holds, "hypothesis_applies": applies}
    return Outcome(out, EXIT_COUNTEREXAMPLE if applies and not holds else EXIT_OK)


def _targets(m: MatrixGF, spec: str | None):
    n = m.shape[0]
    v = parse_vector(spec, m.field.q, n)
    return [v] if v is not None else list(all_vectors(m.field.q, n))


def cmd_basis_additive(args) -> Outcome:
    m = load_matrix(args.file)
    cols = m.columns
    rows = []
    for v in _targets(m, args.v):
        sub = zero_one_representable(m.field, cols, v, nonempty=args.nonempty)
        rows.append({"v": v.tolist(), "subset": None if sub is None else list(sub)})
    return Outcome({"command": "basis additive", "q": m.field.q, "results": rows,
                    "all_representable": all(r["subset"] is not None for r in rows)})


def cmd_basis_nowhere_zero(args) -> Outcome:
    m = load_matrix(args.file)
    bases = split_bases(m)
    rows = []
    for v in _targets(m, args.v):
        x = nowhere_zero_combination(bases, v)
        rows.append({"v": v.tolist(), "coefficients": None if x is None else x.tolist()})
    ok = all(r["coefficients"] is not None for r in rows)
    out = {"command": "basis nowhere-zero", "q": m.field.q, "k": len(bases), "results": rows, "all_representable": ok}
    # non-prime fields: two bases always suffice, so a miss refutes that
    code = EXIT_COUNTEREXAMPLE if not ok and not is_prime(m.field.q) and len(bases) >= 2 else EXIT_OK
    return Outcome(out, code)


def cmd_basis_to_affine_cover(args) -> Outcome:
    m = load_matrix(args.file)
    bases = split_bases(m)
    v = parse_vector(args.v, m.field.q, m.shape[0])
    if v is None:
        raise PreconditionError("--v is required")
    inst = bases_to_affine_cover(bases, v)
    code = EXIT_OK if inst.covers and inst.irredundant else EXIT_COUNTEREXAMPLE
    return Outcome({"command": "basis to-affine-cover", **inst.to_json()}, code)


# ---------------------------------------------------------------------------
# matroids / graphs
# ---------------------------------------------------------------------------

def cmd_matroid_rank(args) -> Outcome:
    mat = LinearMatroid.from_matrix(load_matrix(args.file))
    subset = _ints(args.subset)
    subset = list(mat.ground()) if subset is None else subset
    return Outcome({"command": "matroid rank", "subset": subset, "rank": mat.rank(subset)})


def cmd_matroid_pack(args) -> Outcome:
    mat = LinearMatroid.from_matrix(load_matrix(args.file))
    out = {"command": "matroid pack"}
    if args.k is not None:
        ps = packing_subset(mat, args.k)
        out["packing_subset"] = None if ps is None else ps.to_json()
        hypothesis = mat.size >= mat.rank(mat.ground()) * args.k and mat.rank(mat.ground()) >= 1
        loop_free = all(mat.vectors[i].any() for i in mat.ground())
        code = EXIT_COUNTEREXAMPLE if ps is None and hypothesis and loop_free else EXIT_OK
        return Outcome(out, code)
    subset = _ints(args.subset)
    value, packing = max_disjoint_bases(mat, subset)
    out.update({"value": value, **packing.to_json()})
    return Outcome(out)


def cmd_graph_color(args) -> Outcome:
    g = load_graph(args.file)
    q = args.q
    naive = colorable_naive(g, q)
    out = {"command": "graph color", "q": q, "vertices": g.n_vertices, "edges": len(g.edges),
           "coloring": naive, "colorable_naive": naive is not None}
    agree = [naive is not None]
    if q >= 2 and field_ok(q):
        out["colorable_via_cover"] = colorable_via_cover(g, q)
        out["cover_witnesses"] = int(coloring_witnesses(g, q).shape[0])
        agree.append(out["colorable_via_cover"])
    if is_prime(q) and q > 2:
        out["colorable_via_parity"] = colorable_via_parity(g, q)
        agree.append(out["colorable_via_parity"])
    out["methods_agree"] = len(set(agree)) == 1
    return Outcome(out, EXIT_OK if out["methods_agree"] else EXIT_COUNTEREXAMPLE)


def field_ok(q: int) -> bool:
    try:
        field_make(q)
    except ValueError:
        return False
    return True


def cmd_graph_flow(args) -> Outcome:
    g = load_graph(args.file)
    r = nz_flow_exists(g, parse_group(args.group), workers=args.threads)
    return Outcome({"command": "graph flow", **r.to_json()})


# ---------------------------------------------------------------------------
# suites / evidence
# ---------------------------------------------------------------------------

def cmd_suite(args) -> Outcome:
    if args.name not in SUITES:
        raise KeyError(args.name)
    ctx = SuiteContext(seed=args.seed, workers=args.threads, node_limit=args.node_limit,
                       time_limit=args.time_limit_sec)
    rep = run_suite(args.name, ctx)
    payload = rep.to_json()
    if not args.no_cache:
        evidence_mod.store({"schema": 1, **payload}, args.cache_dir)
    if rep.passed:
        code = EXIT_OK
    else:
        code = EXIT_BUDGET if rep.inconclusive else EXIT_COUNTEREXAMPLE
    return Outcome({"command": "suite", **payload}, code)


def cmd_evidence(args) -> Outcome:
    return Outcome({"command": "evidence", **evidence_mod.evidence_report(args.cache_dir)})


# ---------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("budget and output")
    g.add_argument("--max-cosets", type=int, default=None, help="largest cover size tried")
    g.add_argument("--node-limit", type=int, default=10**7, help="search nodes before giving up")
    g.add_argument("--time-limit-sec", type=float, default=None, help="wall-clock limit for searches")
    g.add_argument("--threads", type=int, default=1, help="worker threads; never changes results")
    g.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for sampled checks")
    g.add_argument("--format", choices=("json", "text"), default="json")
    g.add_argument("--cache-dir", default=None, help="suite result cache (default $COVERCRAFT_CACHE)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="covercraft", description=__doc__.splitlines()[0])
    top = parser.add_subparsers(dest="cmd", required=True)

    def leaf(sub, name: str, fn: Callable, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        _common(p)
        p.set_defaults(fn=fn)
        return p

    grp = top.add_parser("group", help="coset covering invariants of a finite abelian group").add_subparsers(
        dest="sub", required=True)
    leaf(grp, "phi", cmd_group_phi, "fewest cosets covering G minus the identity").add_argument("group")
    p = leaf(grp, "fmin", lambda a: cmd_group_min(a, a.mode), "f(G): irredundant coset cover, trivial intersection")
    p.add_argument("group")
    p.add_argument("--mode", choices=("cosets", "subgroups"), default="cosets")
    leaf(grp, "gmin", lambda a: cmd_group_min(a, "subgroups"), "g(G): subgroup version of fmin").add_argument("group")
    p = leaf(grp, "blocking", cmd_group_blocking, "blocking number of AG(n, p)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)

    cov = top.add_parser("cover", help="coset systems").add_subparsers(dest="sub", required=True)
    leaf(cov, "audit", cmd_cover_audit, "audit a coset system JSON file").add_argument("file")

    ajt = top.add_parser("ajt", help="AJT matrices").add_subparsers(dest="sub", required=True)
    leaf(ajt, "check", cmd_ajt_check, "test one square matrix by every method").add_argument("file")
    p = leaf(ajt, "scan", cmd_ajt_scan, "scan n x n matrices over GF(q)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--exhaustive-limit", type=int, default=20000)

    hyp = top.add_parser("hyperplane", help="hyperplane covers of GF(q)^n").add_subparsers(dest="sub", required=True)
    leaf(hyp, "cover-check", cmd_hyperplane_cover_check, "coverage and irredundancy of a system").add_argument("file")
    p = leaf(hyp, "min", cmd_hyperplane_min, "h_q(n), or l_q(n) with --affine")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--affine", action="store_true")
    leaf(hyp, "ratio", cmd_hyperplane_ratio, "codim < 2k/3 check").add_argument("file")

    bas = top.add_parser("basis", help="combinations of bases").add_subparsers(dest="sub", required=True)
    p = leaf(bas, "additive", cmd_basis_additive, "0-1 combinations of the columns")
    p.add_argument("file")
    p.add_argument("--v", default=None, help="target vector; all vectors when omitted")
    p.add_argument("--nonempty", action="store_true")
    p = leaf(bas, "nowhere-zero", cmd_basis_nowhere_zero, "nowhere-zero combinations of n x n column blocks")
    p.add_argument("file")
    p.add_argument("--v", default=None)
    p = leaf(bas, "to-affine-cover", cmd_basis_to_affine_cover, "affine cover built from an unreachable v")
    p.add_argument("file")
    p.add_argument("--v", default=None)

    mat = top.add_parser("matroid", help="column matroids").add_subparsers(dest="sub", required=True)
    p = leaf(mat, "rank", cmd_matroid_rank, "rank of a column subset")
    p.add_argument("file")
    p.add_argument("--subset", default=None)
    p = leaf(mat, "pack", cmd_matroid_pack, "disjoint bases, or a packing subset with --k")
    p.add_argument("file")
    p.add_argument("--subset", default=None)
    p.add_argument("--k", type=int, default=None)

    gr = top.add_parser("graph", help="colorings and flows").add_subparsers(dest="sub", required=True)
    p = leaf(gr, "color", cmd_graph_color, "q-colorability by three criteria")
    p.add_argument("file", help="graph file, '-' for stdin, or @triangle/@k4/@petersen")
    p.add_argument("--q", type=int, required=True)
    p = leaf(gr, "flow", cmd_graph_flow, "nowhere-zero A-flow")
    p.add_argument("file")
    p.add_argument("--group", required=True)

    p = leaf(top, "suite", cmd_suite, "run a canned experiment suite")
    p.add_argument("name", help=", ".join(SUITES))
    p.add_argument("--no-cache", action="store_true", help="do not store the report")
    leaf(top, "evidence", cmd_evidence, "conjecture evidence from cached suites")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        outcome = args.fn(args)
    except BudgetExhausted as exc:
        outcome = Outcome({"error": "budget exhausted", "detail": str(exc)}, EXIT_BUDGET)
    except AssertionError as exc:
        outcome = Outcome({"error": "property violated", "detail": str(exc)}, EXIT_COUNTEREXAMPLE)
    except KeyError as exc:
        outcome = Outcome({"error": "unknown name", "detail": str(exc)}, EXIT_INVALID)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        outcome = Outcome({"error": "invalid input", "detail": str(exc)}, EXIT_INVALID)
    outcome.payload.setdefault("command", " ".join(filter(None, (args.cmd, getattr(args, "sub", None)))))
    if args.format == "text":
        sys.stdout.write(to_text({"schema": 1, **outcome.payload}) + "\n")
    else:
        sys.stdout.write(dumps(outcome.payload))
    return outcome.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
