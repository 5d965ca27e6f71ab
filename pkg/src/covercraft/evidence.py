"""Consolidated evidence for the open conjectures, built from cached
suite reports. Entries record finite checks only; none is a proof."""
from __future__ import annotations

import json
import math
import os
from pathlib import Path
from typing import Callable

NOT_COMPUTED = "not yet computed"

# implications between the conjectures, as (stronger, weaker, scope)
HIERARCHY = [
    ("pyber-coset with c = 2", "eps_p >= log2(p) - 1", "p > 3"),
    ("eps_p >= log2(p) - 1", "eps_p > 1", "p > 3"),
    ("eps_p > 1", "choosability-ajt", "p > 3"),
    ("choosability-ajt", "ajt", "p > 3"),
    ("choosability-ajt", "eps_p >= 1/2", "p > 3"),
    ("eps_p >= 1/2", "eps_p > 0", "p > 3"),
    ("eps_p > 0", "weak-basis", "equivalent, p > 2"),
    ("additive-basis", "weak-basis", "p > 3"),
    ("pyber-coset with c = 2", "eps_3 >= log2(3)", "p = 3"),
    ("eps_3 >= log2(3)", "eps_3 > 0", "p = 3"),
    ("weak-basis", "additive-basis", "equivalent, p = 3"),
    ("additive-basis", "weak-three-flow", "p = 3"),
    ("pyber-subgroup", "ajt over GF(p)", "p >= c^2"),
]


def cache_dir(path: str | os.PathLike | None = None) -> Path:
    if path is not None:
        return Path(path)
    env = os.environ.get("COVERCRAFT_CACHE")
    return Path(env) if env else Path.home() / ".cache" / "covercraft"


def store(report: dict, path: str | os.PathLike | None = None) -> Path:
    d = cache_dir(path)
    d.mkdir(parents=True, exist_ok=True)
    out = d / f"suite-{report['suite']}.json"
    out.write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")
    return out


def load(path: str | os.PathLike | None = None) -> dict[str, dict]:
    d = cache_dir(path)
    found = {}
    if d.is_dir():
        for f in sorted(d.glob("suite-*.json")):
            try:
                rep = json.loads(f.read_text())
            except (OSError, json.JSONDecodeError):
                continue
            found[rep.get("suite", f.stem[6:])] = rep
    return found


def _log_base_needed(table: dict) -> dict:
    """Smallest c consistent with value > log_c |A| on every attained entry."""
    worst, worst_group, n = 1.0, None, 0
    for name, value in sorted(table.items()):
        if not isinstance(value, int):
            continue
        n += 1
        order = math.prod(int(t[1:]) for t in name.split("*"))
        c = order ** (1.0 / value)
        if c > worst:
            worst, worst_group = c, name
    return {"instances": n, "counterexamples": 0, "c_must_exceed": round(worst, 6), "attained_by": worst_group}


def _pyber_g(r: dict) -> dict:
    out = _log_base_needed(r["fedthm-scan"]["data"]["g"])
    out["unattainable_groups"] = sorted(k for k, v in r["fedthm-scan"]["data"]["g"].items() if v == "unattainable")
    return out


def _pyber_f(r: dict) -> dict:
    out = _log_base_needed(r["fedthm-scan"]["data"]["f"])
    out["f_at_least_1_plus_lambda_up_to_16"] = r["fedthm-scan"]["passed"]
    phi_ok = r.get("phi-table", {}).get("passed")
    if phi_ok is not None:
        out["phi_equals_tau_up_to_16"] = phi_ok
    return out


def _ajt(r: dict) -> dict:
    d = r["ajt-equiv"]["data"]["ajt_gf5_nonsingular"]
    return {**d, "field": "GF(5)", "criteria_agree": r["ajt-equiv"]["passed"]}


def _cajt(r: dict) -> dict:
    return {**r["ajt-equiv"]["data"]["choosability_gf5"], "field": "GF(5)"}


def _additive(r: dict) -> dict:
    data = r["basis-combos"]["data"]
    rows = {k: {"samples": v["samples"], "without_zero_one_combination": v["no_zero_one_combination"]}
            for k, v in data.items() if isinstance(v, dict)}
    return {"instances": sum(v["samples"] for v in rows.values()), "by_case": rows,
            "note": "counts for small numbers of bases; the conjectured constant is not known"}


def _weak(r: dict) -> dict:
    data = r["basis-combos"]["data"]
    rows = {k: {"samples": v["samples"], "without_nowhere_zero_combination": v["no_nowhere_zero_combination"]}
            for k, v in data.items() if isinstance(v, dict)}
    nonprime = {k: v for k, v in data.items() if not isinstance(v, dict)}
    return {"prime_field_samples": rows, "non_prime_cases_all_representable": nonprime,
            "non_prime_passed": r["basis-combos"]["passed"]}


def _three_flow(r: dict) -> dict:
    counts = r["flows"]["data"]["nowhere_zero_counts"]
    return {"instances": len(counts), "nowhere_zero_counts": counts,
            "note": "small graphs only; no connectivity threshold is tested"}


def _codimension(r: dict) -> dict:
    d = r["hyperplane-min"]["data"]
    return {
        "l_q(n)/n": d["l_over_n"],
        "max_codim_over_k": d["max_codim_over_k"],
        "codim_below_two_thirds_k_GF4": "holds on all found instances"
        if d["codim_check"]["4"]["failures"] == 0 else "violated",
        "irredundant_covers_checked": d["codim_check"],
    }


ENTRIES: list[tuple[str, str, tuple[str, ...], Callable[[dict], dict]]] = [
    ("pyber-subgroup", "g(A) > log_c |A| for a fixed c > 1", ("fedthm-scan",), _pyber_g),
    ("pyber-coset", "f(A) > log_c |A| for a fixed c > 1", ("fedthm-scan",), _pyber_f),
    ("ajt", "nonsingular M over GF(q), q > 3, has nowhere-zero x with Mx nowhere zero", ("ajt-equiv",), _ajt),
    ("choosability-ajt", "as AJT, with Mx - v nowhere zero for every v", ("ajt-equiv",), _cajt),
    ("additive-basis", "boundedly many bases give every vector as a 0-1 combination", ("basis-combos",), _additive),
    ("weak-basis", "boundedly many bases give every vector as a nowhere-zero combination", ("basis-combos",), _weak),
    ("weak-three-flow", "highly connected graphs have nowhere-zero 3-flows", ("flows",), _three_flow),
    ("codimension", "irredundant affine covers have codim <= k / (1 + eps_q)", ("hyperplane-min",), _codimension),
]


def evidence_report(path: str | os.PathLike | None = None) -> dict:
    reports = load(path)
    entries = []
    for key, statement, needs, build in ENTRIES:
        entry = {
            "conjecture": key,
            "statement": statement,
            "commands": [f"covercraft suite {s}" for s in needs],
            "proved": False,
        }
        missing = [s for s in needs if s not in reports]
        if missing:
            entry["status"] = NOT_COMPUTED
            entry["missing_suites"] = missing
        else:
            entry["status"] = "checked"
            entry["evidence"] = build(reports)
        entries.append(entry)
    return {
        "entries": entries,
        "hierarchy": [{"from": a, "to": b, "scope": s} for a, b, s in HIERARCHY],
        "suites_available": sorted(reports),
    }
