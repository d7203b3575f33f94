"""Instance file format and seeded random generators.

An instance file is a JSON document with fields ``kind``, ``n``, ``p``,
the kind-specific structure, and the n x p attribute matrix ``y`` in
row-major order:

    {"kind": "scheduling", "n": 8, "p": 4,
     "deadlines": [...], "y": [[...], ...]}

Kind-specific fields: ``k`` (uniform), ``edges`` (graphic, 1-based
vertex pairs, element i is edges[i-1]), ``deadlines`` (scheduling),
``blocks`` (partition).  The bundled 8-job scheduling instance is the
golden example used throughout the test suite.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

from .matroid import InputError, MatroidInstance, MatroidKind
from .uncertainty import AttributeMatrix

__all__ = [
    "SchemaError",
    "load_instance",
    "parse_instance",
    "instance_to_dict",
    "save_instance",
    "toy_instance",
    "generate_instance",
]


class SchemaError(InputError):
    """Structurally malformed instance document (vs. semantic inconsistency)."""


def parse_instance(doc: dict[str, Any]) -> tuple[MatroidInstance, AttributeMatrix]:
    """Build an instance + attribute matrix from a parsed JSON document."""
    try:
        kind = MatroidKind(str(doc["kind"]).lower())
        n = int(doc["n"])
        y = np.asarray(doc["y"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed instance document: {exc}") from exc
    if y.ndim != 2 or y.shape[0] != n:
        raise SchemaError(f"attribute matrix must have {n} rows, got shape {y.shape}")
    if "p" in doc and int(doc["p"]) != y.shape[1]:
        raise SchemaError("field p disagrees with the attribute matrix width")
    try:
        if kind is MatroidKind.UNIFORM:
            instance = MatroidInstance(kind=kind, n=n, uniform_k=int(doc["k"]))
        elif kind is MatroidKind.GRAPHIC:
            edges = tuple((int(u), int(v)) for u, v in doc["edges"])
            instance = MatroidInstance(kind=kind, n=n, edges=edges)
        elif kind is MatroidKind.SCHEDULING:
            instance = MatroidInstance(
                kind=kind, n=n, deadlines=tuple(int(d) for d in doc["deadlines"])
            )
        else:
            blocks = tuple(tuple(int(e) for e in block) for block in doc["blocks"])
            instance = MatroidInstance(kind=kind, n=n, blocks=blocks)
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"missing or mistyped kind-specific field: {exc}") from exc
    return instance, AttributeMatrix(y)


def instance_to_dict(
    instance: MatroidInstance, Y: AttributeMatrix
) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "kind": instance.kind.value,
        "n": instance.n,
        "p": Y.p,
    }
    if instance.kind is MatroidKind.UNIFORM:
        doc["k"] = instance.uniform_k
    elif instance.kind is MatroidKind.GRAPHIC:
        doc["edges"] = [list(e) for e in instance.edges]
    elif instance.kind is MatroidKind.SCHEDULING:
        doc["deadlines"] = list(instance.deadlines)
    else:
        doc["blocks"] = [list(b) for b in instance.blocks]
    doc["y"] = Y.y.tolist()
    return doc


def load_instance(path: str | Path) -> tuple[MatroidInstance, AttributeMatrix]:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read instance file {path}: {exc}") from exc
    return parse_instance(doc)


def save_instance(
    path: str | Path, instance: MatroidInstance, Y: AttributeMatrix
) -> None:
    doc = instance_to_dict(instance, Y)
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def toy_instance() -> tuple[MatroidInstance, AttributeMatrix]:
    """The bundled 8-job scheduling instance with 4 attribute columns."""
    text = resources.files("matroid_elicit").joinpath("data/scheduling8.json").read_text()
    return parse_instance(json.loads(text))


def generate_instance(
    kind: MatroidKind | str,
    n: int,
    p: int,
    seed: int,
) -> tuple[MatroidInstance, AttributeMatrix]:
    """Seeded random instance with integer attribute values in [1, 9].

    Structure per kind: uniform takes k = ceil(n/2); graphic draws a
    random connected multigraph with n edges (a spanning tree plus
    random extras, no self-loops); scheduling draws deadlines uniform
    in [1, n//2 + 1]; partition splits 1..n into ceil(n/3) nonempty
    blocks with capacity one each.
    """
    kind = MatroidKind(kind)
    if n < 2 or p < 2:
        raise InputError("generation needs n >= 2 and p >= 2")
    rng = np.random.default_rng(seed)
    y = rng.integers(1, 10, size=(n, p)).astype(float)
    if kind is MatroidKind.UNIFORM:
        instance = MatroidInstance(kind=kind, n=n, uniform_k=(n + 1) // 2)
    elif kind is MatroidKind.SCHEDULING:
        deadlines = rng.integers(1, n // 2 + 2, size=n)
        instance = MatroidInstance(kind=kind, n=n, deadlines=tuple(int(d) for d in deadlines))
    elif kind is MatroidKind.GRAPHIC:
        num_vertices = max(2, n // 2 + 1)
        edges: list[tuple[int, int]] = []
        order = rng.permutation(num_vertices) + 1
        for i in range(1, num_vertices):
            # attach each vertex to a random earlier one: random spanning tree
            j = int(rng.integers(0, i))
            edges.append((int(order[j]), int(order[i])))
        while len(edges) < n:
            u = int(rng.integers(1, num_vertices + 1))
            v = int(rng.integers(1, num_vertices + 1))
            if u != v:
                edges.append((u, v))
        instance = MatroidInstance(kind=kind, n=n, edges=tuple(edges))
    else:
        d = max(1, -(-n // 3))  # ceil(n/3)
        perm = rng.permutation(n) + 1
        blocks: list[list[int]] = [[int(perm[i])] for i in range(d)]
        for e in perm[d:]:
            blocks[int(rng.integers(0, d))].append(int(e))
        instance = MatroidInstance(
            kind=kind, n=n, blocks=tuple(tuple(sorted(b)) for b in blocks)
        )
    return instance, AttributeMatrix(y)
