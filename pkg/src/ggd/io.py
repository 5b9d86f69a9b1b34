"""Reading and writing graphs and numeric tables.

Supported formats:

* TUDataset plain-text directories (``DS_A.txt``, ``DS_graph_indicator.txt``,
  ``DS_graph_labels.txt`` and optionally ``DS_node_labels.txt`` /
  ``DS_node_attributes.txt``).
* A small JSON graph format ``{"n": 3, "edges": [[0, 1, 1.0], ...],
  "features": [[...], ...], "label": 1}``.
* Headerless CSV for matrices and feature tables.

Every float is written with 17 significant digits so that values survive a
write/read round trip bit for bit.
"""
from __future__ import annotations

import json
import math
import re
from pathlib import Path
from typing import Sequence

import numpy as np

from .exceptions import GraphFormatError
from .graph import Graph

_SPLIT = re.compile(r"[,\s]+")


def fmt_float(x: float) -> str:
    """Format a float with 17 significant digits (round-trip exact)."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite value {x}")
    return format(x, ".17g")


def _read_rows(path: Path, parse) -> list[list]:
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append([parse(tok) for tok in _SPLIT.split(line) if tok])
            except ValueError as exc:
                raise GraphFormatError(f"{path.name}:{lineno}: {exc}") from None
    return rows


def _int_token(tok: str) -> int:
    if not re.fullmatch(r"[+-]?\d+", tok):
        raise ValueError(f"expected an integer, got {tok!r}")
    return int(tok)


def _find_prefix(root: Path) -> str:
    hits = sorted(root.glob("*_A.txt"))
    if not hits:
        raise GraphFormatError(f"no *_A.txt file in {root}")
    if len(hits) > 1:
        raise GraphFormatError(f"several *_A.txt files in {root}")
    return hits[0].name[: -len("_A.txt")]


def load_tudataset(directory) -> list[Graph]:
    """Load every graph of a TUDataset directory.

    Edges are unweighted (weight 1); the two directed copies of each edge in
    ``DS_A.txt`` are merged.  Node labels, when present, are one-hot encoded
    into the node features, followed by the node attributes if those exist.
    """
    root = Path(directory)
    ds = _find_prefix(root)

    def need(suffix: str) -> Path:
        p = root / f"{ds}_{suffix}.txt"
        if not p.exists():
            raise GraphFormatError(f"missing mandatory file {p.name}")
        return p

    edges = _read_rows(need("A"), _int_token)
    indicator = [r[0] for r in _read_rows(need("graph_indicator"), _int_token)]
    graph_labels = [r[0] for r in _read_rows(need("graph_labels"), _int_token)]

    node_feats = []
    nl_path = root / f"{ds}_node_labels.txt"
    if nl_path.exists():
        node_labels = np.array([r[0] for r in _read_rows(nl_path, _int_token)])
        if len(node_labels) != len(indicator):
            raise GraphFormatError("node_labels length differs from graph_indicator")
        classes = np.unique(node_labels)
        node_feats.append((node_labels[:, None] == classes[None, :]).astype(np.float64))
    na_path = root / f"{ds}_node_attributes.txt"
    if na_path.exists():
        attrs = _read_rows(na_path, float)
        if len(attrs) != len(indicator) or len({len(r) for r in attrs}) != 1:
            raise GraphFormatError("node_attributes must have one row of equal width per node")
        node_feats.append(np.asarray(attrs, dtype=np.float64))
    features = np.hstack(node_feats) if node_feats else None

    ind = np.asarray(indicator, dtype=np.int64)
    n_graphs = len(graph_labels)
    if len(ind) == 0 or ind.min() < 1 or ind.max() > n_graphs:
        raise GraphFormatError("graph_indicator refers to graphs outside graph_labels")
    if np.any(np.diff(ind) < 0):
        raise GraphFormatError("graph_indicator must be non-decreasing")
    counts = np.bincount(ind - 1, minlength=n_graphs)
    offsets = np.concatenate([[0], np.cumsum(counts)])

    per_graph: list[set[tuple[int, int]]] = [set() for _ in range(n_graphs)]
    for row in edges:
        if len(row) != 2:
            raise GraphFormatError(f"edge row must have two entries, got {row}")
        i, j = row[0] - 1, row[1] - 1
        if not (0 <= i < len(ind) and 0 <= j < len(ind)):
            raise GraphFormatError(f"edge ({i + 1}, {j + 1}) refers to an unknown node")
        if ind[i] != ind[j]:
            raise GraphFormatError(f"edge ({i + 1}, {j + 1}) crosses a graph boundary")
        if i == j:
            continue
        gi = ind[i] - 1
        per_graph[gi].add((min(i, j) - offsets[gi], max(i, j) - offsets[gi]))

    graphs = []
    for gi in range(n_graphs):
        lo, hi = offsets[gi], offsets[gi + 1]
        e = sorted(per_graph[gi])
        feats = None if features is None else features[lo:hi]
        graphs.append(Graph.from_edges(int(hi - lo), e, feats, graph_labels[gi]))
    return graphs


def graph_to_json(g: Graph) -> str:
    parts = [f'"n": {g.node_count}']
    edges = ", ".join(f"[{u}, {v}, {fmt_float(w)}]" for u, v, w in g.edges)
    parts.append(f'"edges": [{edges}]')
    if g.features is not None:
        rows = ", ".join("[" + ", ".join(fmt_float(x) for x in row) + "]" for row in g.features)
        parts.append(f'"features": [{rows}]')
    if g.label is not None:
        parts.append(f'"label": {g.label}')
    return "{" + ", ".join(parts) + "}"


def graph_from_obj(obj) -> Graph:
    if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
        raise GraphFormatError("graph JSON must be an object with 'n' and 'edges'")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise GraphFormatError("'n' must be an integer")
    edges = obj["edges"]
    if not isinstance(edges, list):
        raise GraphFormatError("'edges' must be a list")
    for e in edges:
        if (not isinstance(e, list) or len(e) != 3 or not all(isinstance(x, int) for x in e[:2])
                or not isinstance(e[2], (int, float)) or isinstance(e[2], bool)):
            raise GraphFormatError(f"edge must be [u, v, w] with integer endpoints, got {e!r}")
    feats = obj.get("features")
    if feats is not None:
        try:
            feats = np.asarray(feats, dtype=np.float64)
        except (TypeError, ValueError):
            raise GraphFormatError("features must be a rectangular numeric array") from None
        if feats.ndim != 2:
            raise GraphFormatError("features must be a list of equal-length rows")
    label = obj.get("label")
    if label is not None and (not isinstance(label, int) or isinstance(label, bool)):
        raise GraphFormatError("'label' must be an integer")
    return Graph.from_edges(n, edges, feats, label)


def save_graph_json(g: Graph, path) -> None:
    Path(path).write_text(graph_to_json(g) + "\n")


def load_graph_json(path) -> Graph:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"{path}: malformed JSON ({exc})") from None
    return graph_from_obj(obj)


def load_graph(spec: str) -> Graph:
    """Load a graph from ``file.json`` or from ``dataset_dir#index`` (0-based)."""
    if "#" in spec:
        directory, _, idx = spec.rpartition("#")
        try:
            i = int(idx)
        except ValueError:
            raise GraphFormatError(f"bad graph index in {spec!r}") from None
        graphs = load_tudataset(directory)
        if not 0 <= i < len(graphs):
            raise GraphFormatError(f"graph index {i} out of range (dataset has {len(graphs)})")
        return graphs[i]
    return load_graph_json(spec)


def load_graphs(spec: str) -> list[Graph]:
    """Load a graph collection: a TUDataset directory, a JSON list file, or a directory of JSON files."""
    p = Path(spec)
    if p.is_dir():
        if list(p.glob("*_A.txt")):
            return load_tudataset(p)
        files = sorted(p.glob("*.json"))
        if not files:
            raise GraphFormatError(f"{spec}: no TUDataset files or JSON graphs found")
        return [load_graph_json(f) for f in files]
    try:
        obj = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"{spec}: malformed JSON ({exc})") from None
    if isinstance(obj, list):
        return [graph_from_obj(o) for o in obj]
    return [graph_from_obj(obj)]


def matrix_to_csv(m: np.ndarray) -> str:
    m = np.atleast_2d(np.asarray(m, dtype=np.float64))
    return "".join(",".join(fmt_float(x) for x in row) + "\n" for row in m)


def write_matrix_csv(m: np.ndarray, path) -> None:
    Path(path).write_text(matrix_to_csv(m))


def read_matrix_csv(path) -> np.ndarray:
    rows = _read_rows(Path(path), float)
    if not rows or len({len(r) for r in rows}) != 1:
        raise GraphFormatError(f"{path}: expected a non-empty rectangular numeric table")
    return np.asarray(rows, dtype=np.float64)


def write_rows_csv(header: Sequence[str], rows, path) -> None:
    def cell(x):
        return fmt_float(x) if isinstance(x, (float, np.floating)) else str(x)

    lines = [",".join(header)] + [",".join(cell(x) for x in row) for row in rows]
    Path(path).write_text("\n".join(lines) + "\n")
