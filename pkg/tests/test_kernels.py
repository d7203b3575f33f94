"""Compiled vs pure geometry kernel: identical decisions on the same input."""

import importlib

import numpy as np
import pytest

from matroid_elicit import _facetadj_py as pure

compiled = pytest.importorskip(
    "matroid_elicit._facetadj", reason="compiled kernel not built"
)


def random_case(rng, k, m, dim):
    """Tight sets and normals resembling a real cut facet."""
    normals = rng.integers(-9, 10, size=(m, dim)).astype(float)
    tight = np.zeros((k, m), dtype=bool)
    for i in range(k):
        size = int(rng.integers(dim - 1, min(m, dim + 3) + 1))
        tight[i, rng.choice(m, size=size, replace=False)] = True
    return tight, normals


def as_pairs(ii, jj):
    return {(int(i), int(j)) for i, j in zip(ii, jj)}


def test_backends_agree_on_random_inputs():
    rng = np.random.default_rng(0)
    for _ in range(100):
        dim = int(rng.integers(2, 8))
        m = int(rng.integers(dim + 1, 20))
        k = int(rng.integers(2, 25))
        tight, normals = random_case(rng, k, m, dim)
        got_c = as_pairs(*compiled.facet_adjacency_pairs(tight, normals, dim))
        got_p = as_pairs(*pure.facet_adjacency_pairs(tight, normals, dim))
        assert got_c == got_p


def test_backends_agree_on_rank():
    rng = np.random.default_rng(1)
    for _ in range(200):
        rows = int(rng.integers(0, 8))
        cols = int(rng.integers(1, 8))
        mat = rng.integers(-5, 6, size=(rows, cols)).astype(float)
        assert compiled.ge_rank(mat) == pure.ge_rank(mat)
        assert pure.ge_rank(mat) == np.linalg.matrix_rank(mat) if rows else True


def test_rank_detects_dependent_rows():
    mat = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 1.0, 0.0]])
    assert compiled.ge_rank(mat) == 2
    assert pure.ge_rank(mat) == 2


def test_env_override_selects_pure(monkeypatch):
    import subprocess
    import sys

    code = (
        "import matroid_elicit.kernels as k; print(k.BACKEND)"
    )
    out = subprocess.run(
        [sys.executable, "-c", code],
        env={"MATROID_ELICIT_PURE": "1", "PATH": "/usr/bin:/bin"},
        capture_output=True,
        text=True,
    )
    assert out.stdout.strip() == "pure"


def test_default_backend_is_compiled():
    import matroid_elicit.kernels as kernels

    assert kernels.BACKEND == "compiled"


def test_simplex_adjacency_via_both_backends():
    # tight sets of the 3-simplex: every vertex pair shares dim-1 facets
    dim = 3
    normals = np.vstack([np.eye(dim), -np.ones((1, dim))])
    tight = np.array(
        [
            [1, 1, 1, 0],
            [0, 1, 1, 1],
            [1, 0, 1, 1],
            [1, 1, 0, 1],
        ],
        dtype=bool,
    )
    for impl in (compiled, pure):
        pairs = as_pairs(*impl.facet_adjacency_pairs(tight, normals, dim))
        assert pairs == {(i, j) for i in range(4) for j in range(i + 1, 4)}
