"""File formats and JSON output shared by the command line."""
from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

from .covering import CosetSystem
from .gf import AffineHyperplane, FieldError, MatrixGF, field_make, parse_matrix
from .graphs import BUILTIN_GRAPHS, Graph, parse_graph
from .groups import Coset, GroupError, Subgroup, bits_from_indices, parse_group, subgroup_generated

SCHEMA = 1


def read_text(path: str) -> str:
    """Contents of ``path``; ``-`` reads standard input."""
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _plain(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(payload: dict) -> str:
    return json.dumps({"schema": SCHEMA, **payload}, sort_keys=True, indent=2, default=_plain) + "\n"


def to_text(payload: dict, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(to_text(value, indent + 1))
        else:
            lines.append(f"{pad}{key}: {json.dumps(value, default=_plain)}")
    return "\n".join(ln for ln in lines if ln)


def load_matrix(path: str) -> MatrixGF:
    return parse_matrix(read_text(path))


def load_graph(path: str) -> Graph:
    """A graph file, or ``@name`` for a built-in graph."""
    if path.startswith("@"):
        name = path[1:].lower()
        if name not in BUILTIN_GRAPHS:
            raise GroupError(f"unknown built-in graph {name!r}; known: {', '.join(sorted(BUILTIN_GRAPHS))}")
        return BUILTIN_GRAPHS[name]()
    return parse_graph(read_text(path))


def parse_coset_system(text: str) -> tuple[CosetSystem, list[int] | None]:
    """JSON {"group": "C2*C2", "cosets": [...], "target": [...]}.

    Each coset gives its subgroup as "subgroup_elements" (indices) or
    "subgroup_generators" (indices or coordinate lists), and a
    "representative" (index or coordinate list)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GroupError(f"coset system is not valid JSON: {exc}") from None
    if not isinstance(data, dict) or "group" not in data or "cosets" not in data:
        raise GroupError("coset system needs 'group' and 'cosets'")
    group = parse_group(str(data["group"]))

    def elem(x) -> int:
        return int(x) if isinstance(x, int) else group.index(x)

    cosets = []
    for c in data["cosets"]:
        if "subgroup_elements" in c:
            sub = Subgroup(group, bits_from_indices(elem(x) for x in c["subgroup_elements"]))
            if not sub.is_closed():
                raise GroupError("subgroup_elements is not closed under addition")
        elif "subgroup_generators" in c:
            sub = subgroup_generated(group, [elem(x) for x in c["subgroup_generators"]])
        else:
            raise GroupError("each coset needs subgroup_elements or subgroup_generators")
        cosets.append(Coset.make(sub, elem(c.get("representative", 0))))
    target = data.get("target")
    return CosetSystem(group, tuple(cosets)), (None if target is None else [elem(x) for x in target])


def parse_hyperplanes(text: str) -> list[AffineHyperplane]:
    """JSON {"q":4, "hyperplanes":[{"normal":[..], "offset":c}, ..]}, or a
    matrix file whose rows are normals of linear hyperplanes."""
    stripped = text.strip()
    if stripped.startswith("{") and '"hyperplanes"' in stripped:
        data = json.loads(stripped)
        f = field_make(int(data["q"]))
        out = [AffineHyperplane.of(f, h["normal"], int(h.get("offset", 0))) for h in data["hyperplanes"]]
    else:
        m = parse_matrix(stripped)
        out = [AffineHyperplane.of(m.field, row, 0) for row in m.entries]
    if not out:
        raise FieldError("no hyperplanes given")
    return out


def parse_vector(spec: str | None, q: int, n: int) -> np.ndarray | None:
    if spec is None:
        return None
    parts = [p for p in spec.replace(",", " ").split() if p]
    if len(parts) != n:
        raise FieldError(f"vector needs {n} entries, got {len(parts)}")
    v = np.array([int(p) for p in parts], dtype=np.int64)
    if v.min() < 0 or v.max() >= q:
        raise FieldError(f"vector entries must lie in [0, {q})")
    return v


def split_bases(m: MatrixGF) -> list[MatrixGF]:
    """Consecutive n x n column blocks of an n x nk matrix."""
    n, cols = m.shape
    if n == 0 or cols % n:
        raise FieldError(f"an n x nk matrix is needed to split into bases, got {n}x{cols}")
    return [MatrixGF(m.field, m.entries[:, i:i + n]) for i in range(0, cols, n)]
