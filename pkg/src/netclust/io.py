"""Edge-list graph files and JSON dataset manifests.

A dataset is a ``manifest.json``::

    {"format_version": "1", "p": 25, "T": 20, "directed": false,
     "graph_files": ["graph_000.txt", ...]}

with one edge-list file per graph. Each non-blank, non-``#`` line is
``u,v,w`` (0-based node ids, real weight) or ``u,v`` (weight 1). Pairs not
listed have weight 0. Undirected files may list an edge once.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import AsymmetryError, NodeIdOutOfRange, ParseError
from .tensor import GraphTensor

FORMAT_VERSION = "1"


def atomic_write_text(path, text: str):
    """Write via a temp file in the same directory, then rename over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, obj):
    atomic_write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def format_edge_list(a, directed=False) -> str:
    """Edge-list text for one adjacency matrix (``repr`` floats, exact)."""
    a = np.asarray(a, dtype=float)
    if directed:
        us, vs = np.nonzero(a)
    else:
        us, vs = np.nonzero(np.tril(a))
    lines = [f"{u},{v},{float(a[u, v])!r}" for u, v in zip(us, vs)]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_edge_list(text: str, p: int, directed=False, path="<string>"):
    a = np.zeros((p, p))
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [s.strip() for s in line.split(",")]
        if len(parts) not in (2, 3):
            raise ParseError(path, lineno, f"expected 'u,v[,w]', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise ParseError(path, lineno, f"bad number in {raw!r}") from None
        if not np.isfinite(w):
            raise ParseError(path, lineno, "non-finite weight")
        if not (0 <= u < p and 0 <= v < p):
            raise NodeIdOutOfRange(f"{path}:{lineno}: node id outside [0, {p})")
        key = (u, v)
        if key in seen and seen[key] != w:
            raise ParseError(path, lineno, f"conflicting weights for {u},{v}")
        seen[key] = w
        if not directed and (v, u) in seen and seen[(v, u)] != w:
            raise AsymmetryError(
                f"{path}:{lineno}: {u},{v} and {v},{u} carry different weights")
        a[u, v] = w
        if not directed:
            a[v, u] = w
    return a


def read_manifest(manifest_path) -> dict:
    manifest_path = Path(manifest_path)
    with open(manifest_path) as fh:
        try:
            m = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(manifest_path, exc.lineno, exc.msg) from None
    for key in ("p", "T", "directed", "graph_files"):
        if key not in m:
            raise ParseError(manifest_path, 0, f"missing key {key!r}")
    if len(m["graph_files"]) != m["T"]:
        raise ParseError(manifest_path, 0, "len(graph_files) != T")
    return m


def load_dataset(manifest_path) -> GraphTensor:
    """Read a manifest and its edge-list files into a :class:`GraphTensor`."""
    manifest_path = Path(manifest_path)
    m = read_manifest(manifest_path)
    p, directed = int(m["p"]), bool(m["directed"])
    slices = []
    for rel in m["graph_files"]:
        f = manifest_path.parent / rel
        slices.append(parse_edge_list(f.read_text(), p, directed, path=f))
    if not slices:
        raise ParseError(manifest_path, 0, "dataset has no graphs")
    return GraphTensor(np.array(slices), directed=directed,
                       node_labels=m.get("node_labels"))


def save_dataset(x: GraphTensor, out_dir, prefix="graph",
                 manifest_name="manifest.json", extra=None) -> Path:
    """Write ``x`` as edge lists plus a manifest; returns the manifest path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    width = max(3, len(str(x.T - 1)))
    files = []
    for t in range(x.T):
        name = f"{prefix}_{t:0{width}d}.txt"
        atomic_write_text(out_dir / name, format_edge_list(x.slices[t], x.directed))
        files.append(name)
    manifest = {"format_version": FORMAT_VERSION, "p": x.p, "T": x.T,
                "directed": x.directed, "graph_files": files}
    if x.node_labels is not None:
        manifest["node_labels"] = list(x.node_labels)
    if extra:
        manifest.update(extra)
    write_json(out_dir / manifest_name, manifest)
    return out_dir / manifest_name
