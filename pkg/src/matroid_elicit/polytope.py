"""Incremental maintenance of the sigma-space uncertainty polytope.

The region starts as the standard simplex and shrinks by one halfspace
per accepted preference answer.  Vertices and their adjacency are
maintained incrementally:

* vertices strictly inside the halfspace survive with their mutual
  adjacency intact;
* each edge crossing the hyperplane spawns one new vertex on it,
  adjacent to the surviving endpoint;
* adjacency among vertices lying on the new facet is decided by the
  tight-set rank test: two vertices are adjacent iff the normals of
  their shared tight halfspaces have rank dim - 1.

A brute-force vertex enumerator over the accumulated halfspaces serves
as the verification oracle for the incremental path.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, NamedTuple, Protocol

import numpy as np

from . import kernels

__all__ = [
    "EPS",
    "MERGE_RADIUS",
    "Halfspace",
    "UncertaintyPolytope",
    "ContradictionError",
    "UninformativeCutWarning",
    "PreconditionError",
    "initial_simplex",
    "classify_vertices",
    "edge_intersection",
    "cut",
    "brute_force_vertex_enum",
]

EPS = 1e-9
MERGE_RADIUS = 1e-7

ORACLE_DIM_CAP = 6
ORACLE_HALFSPACE_CAP = 30


class ContradictionError(RuntimeError):
    """A cut would empty the region: the answer stream is inconsistent."""


class UninformativeCutWarning(UserWarning):
    """The requested cut removes no vertex; the region is unchanged."""


class PreconditionError(ValueError):
    """Caller violated a geometric precondition (classify first)."""


class Halfspace(Protocol):
    """Anything with a normal vector ``a`` and offset ``c`` (a.s + c >= 0)."""

    a: np.ndarray
    c: float


class Classification(NamedTuple):
    feasible: np.ndarray  # strictly inside (slack > eps)
    infeasible: np.ndarray  # strictly outside (slack < -eps)
    on_boundary: np.ndarray  # |slack| <= eps


@dataclass(frozen=True)
class UncertaintyPolytope:
    """Halfspaces, vertices with tight sets, and vertex adjacency.

    Immutable: ``cut`` returns a new polytope.  ``normals``/``offsets``
    hold one row per halfspace (the p simplex facets first, then one
    per accepted preference constraint).  ``adjacency`` is an (E, 2)
    array of vertex index pairs with i < j, lexicographically sorted.
    """

    dim: int
    normals: np.ndarray
    offsets: np.ndarray
    vertices: np.ndarray
    tight_sets: tuple[frozenset[int], ...]
    adjacency: np.ndarray

    @property
    def num_halfspaces(self) -> int:
        return self.normals.shape[0]

    @property
    def num_vertices(self) -> int:
        return self.vertices.shape[0]

    def slack(self, h: Halfspace) -> np.ndarray:
        """Signed slack of every vertex against a halfspace."""
        return self.vertices @ np.asarray(h.a, dtype=float) + float(h.c)

    def adjacency_pairs(self) -> set[tuple[int, int]]:
        return {(int(i), int(j)) for i, j in self.adjacency}

    def neighbors(self, v: int) -> list[int]:
        adj = self.adjacency
        out = adj[adj[:, 0] == v, 1].tolist() + adj[adj[:, 1] == v, 0].tolist()
        return sorted(int(x) for x in out)

    def contains(self, sigma: np.ndarray, eps: float = EPS) -> bool:
        sigma = np.asarray(sigma, dtype=float)
        return bool(((self.normals @ sigma + self.offsets) >= -eps).all())

    def debug_dump(self) -> str:
        """One line per vertex (coordinates, tight indices), then adjacency."""
        lines = []
        for i in range(self.num_vertices):
            coords = " ".join(f"{x:.9f}" for x in self.vertices[i])
            tight = ",".join(str(t) for t in sorted(self.tight_sets[i]))
            lines.append(f"vertex {i}: ({coords}) tight=[{tight}]")
        pairs = " ".join(f"{i}-{j}" for i, j in self.adjacency)
        lines.append(f"adjacency: {pairs}")
        return "\n".join(lines)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=float)
    arr.flags.writeable = False
    return arr


def _sorted_pairs(pairs: Iterable[tuple[int, int]]) -> np.ndarray:
    norm = sorted({(min(i, j), max(i, j)) for i, j in pairs if i != j})
    if not norm:
        return np.empty((0, 2), dtype=np.intp)
    return np.asarray(norm, dtype=np.intp)


def initial_simplex(p: int) -> UncertaintyPolytope:
    """Standard simplex in R^(p-1): origin plus the p-1 unit vectors,
    every pair adjacent, facets sigma_j >= 0 then 1 - sum(sigma) >= 0."""
    if p < 2:
        raise PreconditionError(f"need p >= 2 attribute vectors, got {p}")
    dim = p - 1
    normals = np.vstack([np.eye(dim), -np.ones((1, dim))])
    offsets = np.zeros(p)
    offsets[-1] = 1.0
    vertices = np.vstack([np.zeros((1, dim)), np.eye(dim)])
    coord_facets = set(range(dim))
    tight: list[frozenset[int]] = [frozenset(coord_facets)]
    for j in range(dim):
        tight.append(frozenset((coord_facets - {j}) | {dim}))
    adjacency = _sorted_pairs(combinations(range(p), 2))
    return UncertaintyPolytope(
        dim=dim,
        normals=_freeze(normals),
        offsets=_freeze(offsets),
        vertices=_freeze(vertices),
        tight_sets=tuple(tight),
        adjacency=adjacency,
    )


def classify_vertices(
    P: UncertaintyPolytope, h: Halfspace, eps: float = EPS
) -> Classification:
    """Partition vertex indices by signed slack against the halfspace."""
    g = P.slack(h)
    return Classification(
        feasible=np.flatnonzero(g > eps),
        infeasible=np.flatnonzero(g < -eps),
        on_boundary=np.flatnonzero(np.abs(g) <= eps),
    )


def edge_intersection(
    sigma_u: np.ndarray,
    sigma_v: np.ndarray,
    h: Halfspace,
    eps: float = EPS,
) -> np.ndarray:
    """Point where the hyperplane of ``h`` meets the segment [u, v].

    Requires u strictly feasible and v strictly infeasible.  With
    g(s) = a.s + c the parameter is theta = g(v) / (g(v) - g(u)), and
    the point theta*u + (1-theta)*v has g = 0 by linearity.
    """
    a = np.asarray(h.a, dtype=float)
    gu = float(sigma_u @ a + h.c)
    gv = float(sigma_v @ a + h.c)
    if gu <= eps or gv >= -eps:
        raise PreconditionError(
            f"edge_intersection needs g(u) > eps > -eps > g(v), got {gu}, {gv}"
        )
    theta = gv / (gv - gu)
    return theta * np.asarray(sigma_u, dtype=float) + (1.0 - theta) * np.asarray(
        sigma_v, dtype=float
    )


def _recomputed_tight(point: np.ndarray, normals: np.ndarray, offsets: np.ndarray,
                      eps: float) -> frozenset[int]:
    slack = normals @ point + offsets
    return frozenset(int(i) for i in np.flatnonzero(np.abs(slack) <= eps))


def _sq_distances(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Pairwise squared distances via the dot-product identity."""
    d2 = (
        (A * A).sum(axis=1)[:, None]
        + (B * B).sum(axis=1)[None, :]
        - 2.0 * (A @ B.T)
    )
    return np.maximum(d2, 0.0)


def cut(
    P: UncertaintyPolytope,
    h: Halfspace,
    eps: float = EPS,
    merge_radius: float = MERGE_RADIUS,
) -> UncertaintyPolytope:
    """Intersect the polytope with ``{s : a.s + c >= 0}``.

    Raises ContradictionError if every vertex is strictly infeasible
    (the answer stream is inconsistent).  If no vertex is strictly
    infeasible the cut cannot change the region; it is skipped with an
    UninformativeCutWarning and the polytope is returned unchanged.
    """
    a = np.asarray(h.a, dtype=float)
    c = float(h.c)
    g = P.vertices @ a + c
    strict_feas = g > eps
    strict_infeas = g < -eps
    if not strict_infeas.any():
        warnings.warn(
            "cut removes no vertex; region unchanged", UninformativeCutWarning
        )
        return P
    survivors = np.flatnonzero(~strict_infeas)
    if survivors.size == 0:
        raise ContradictionError("cut would empty the region")

    old_to_new = -np.ones(P.num_vertices, dtype=np.intp)
    old_to_new[survivors] = np.arange(survivors.size)
    h_index = P.num_halfspaces
    normals = np.vstack([P.normals, a[None, :]])
    offsets = np.append(P.offsets, c)

    # crossing edges, oriented (strictly feasible u, strictly infeasible v)
    au, av = P.adjacency[:, 0], P.adjacency[:, 1]
    fwd = strict_feas[au] & strict_infeas[av]
    bwd = strict_feas[av] & strict_infeas[au]
    us = np.concatenate([au[fwd], av[bwd]])
    vs = np.concatenate([av[fwd], au[bwd]])
    gu, gv = g[us], g[vs]
    theta = gv / (gv - gu)
    points = theta[:, None] * P.vertices[us] + (1.0 - theta)[:, None] * P.vertices[vs]
    parents_arr = old_to_new[us]

    # a crossing point within the merge radius of a surviving vertex is that
    # vertex up to tolerance (cut through or vanishingly close to it);
    # record the crossing edge instead of a duplicate vertex
    extra_pairs: list[tuple[int, int]] = []
    keep = np.ones(points.shape[0], dtype=bool)
    if points.shape[0]:
        d2 = _sq_distances(points, P.vertices[survivors])
        hit = d2.argmin(axis=1)
        hit_d2 = d2[np.arange(points.shape[0]), hit]
        for idx in np.flatnonzero(hit_d2 <= merge_radius**2):
            pair = (int(parents_arr[idx]), int(hit[idx]))
            if pair[0] != pair[1]:
                extra_pairs.append(pair)
            keep[idx] = False
    points = points[keep]
    parents_arr = parents_arr[keep]

    # merge coincident crossing points: exact duplicates via rounding
    # buckets, then a pairwise pass over the few representatives
    buckets: dict[tuple, int] = {}
    new_coords: list[np.ndarray] = []
    new_parents: list[set[int]] = []
    for point, parent in zip(points, parents_arr):
        key = tuple(np.round(point, 8))
        slot = buckets.get(key)
        if slot is None:
            buckets[key] = len(new_coords)
            new_coords.append(point)
            new_parents.append({int(parent)})
        else:
            new_parents[slot].add(int(parent))
    if len(new_coords) > 1:
        reps = np.asarray(new_coords)
        d2 = _sq_distances(reps, reps)
        merged_into = np.arange(len(new_coords))
        for i in range(len(new_coords)):
            if merged_into[i] != i:
                continue
            close = np.flatnonzero(
                (d2[i] <= merge_radius**2) & (merged_into == np.arange(len(new_coords)))
            )
            for j in close:
                if j > i:
                    merged_into[j] = i
                    new_parents[i] |= new_parents[j]
        keep_idx = [i for i in range(len(new_coords)) if merged_into[i] == i]
        new_coords = [new_coords[i] for i in keep_idx]
        new_parents = [new_parents[i] for i in keep_idx]

    n_surv = survivors.size
    if new_coords:
        vertices = np.vstack([P.vertices[survivors], np.asarray(new_coords)])
    else:
        vertices = P.vertices[survivors].copy()

    # tight sets: survivors keep theirs (boundary ones gain the new facet);
    # new vertices get a full recomputation so degenerate incidences are kept
    tight: list[frozenset[int]] = []
    for old in survivors:
        ts = P.tight_sets[old]
        if abs(g[old]) <= eps:
            ts = ts | {h_index}
        tight.append(ts)
    if new_coords:
        new_slack = np.asarray(new_coords) @ normals.T + offsets
        for row in np.abs(new_slack) <= eps:
            tight.append(frozenset(int(i) for i in np.flatnonzero(row)))

    # adjacency: surviving pairs, parent edges, then the rank test on the
    # new facet (Props 1-3 fast paths + the general tight-set criterion)
    pairs: set[tuple[int, int]] = set()
    surv_mask = ~strict_infeas
    both = surv_mask[P.adjacency[:, 0]] & surv_mask[P.adjacency[:, 1]]
    for u, v in P.adjacency[both]:
        pairs.add((int(old_to_new[u]), int(old_to_new[v])))
    pairs.update(extra_pairs)
    for offset, parents in enumerate(new_parents):
        w = n_surv + offset
        for parent in parents:
            pairs.add((parent, w))

    facet = [i for i, ts in enumerate(tight) if h_index in ts]
    if len(facet) >= 2:
        facet_arr = np.asarray(facet, dtype=np.intp)
        tmask = np.zeros((len(facet), normals.shape[0]), dtype=bool)
        for row, vi in enumerate(facet):
            tmask[row, sorted(tight[vi])] = True
        ii, jj = kernels.facet_adjacency_pairs(tmask, normals, P.dim)
        for i, j in zip(ii, jj):
            pairs.add((int(facet_arr[i]), int(facet_arr[j])))

    return UncertaintyPolytope(
        dim=P.dim,
        normals=_freeze(normals),
        offsets=_freeze(offsets),
        vertices=_freeze(vertices),
        tight_sets=tuple(tight),
        adjacency=_sorted_pairs(pairs),
    )


def brute_force_vertex_enum(
    normals: np.ndarray,
    offsets: np.ndarray,
    dim: int,
    eps: float = EPS,
    merge_radius: float = MERGE_RADIUS,
) -> tuple[np.ndarray, tuple[frozenset[int], ...], np.ndarray]:
    """Vertex enumeration oracle over an explicit halfspace list.

    Solves every dim-subset of halfspace boundaries with a well-
    conditioned normal matrix, keeps the feasible solutions, merges
    duplicates, and derives adjacency from recomputed tight sets via an
    SVD rank test (independent of the incremental kernel's elimination).
    Intentionally capped: this is the verification oracle, not the
    production path.
    """
    normals = np.asarray(normals, dtype=float)
    offsets = np.asarray(offsets, dtype=float)
    m = normals.shape[0]
    if dim > ORACLE_DIM_CAP or m > ORACLE_HALFSPACE_CAP:
        raise PreconditionError(
            f"oracle capped at dim <= {ORACLE_DIM_CAP}, m <= {ORACLE_HALFSPACE_CAP}"
        )
    row_norms = np.linalg.norm(normals, axis=1)
    row_norms[row_norms == 0] = 1.0
    unit_normals = normals / row_norms[:, None]
    unit_offsets = offsets / row_norms

    combos = np.asarray(list(combinations(range(m), dim)), dtype=np.intp)
    points: list[np.ndarray] = []
    chunk = 20000
    for lo in range(0, combos.shape[0], chunk):
        sel = combos[lo : lo + chunk]
        mats = unit_normals[sel]  # (N, dim, dim)
        dets = np.abs(np.linalg.det(mats))
        good = dets > 1e-9
        if not good.any():
            continue
        rhs = -unit_offsets[sel[good]]
        sols = np.linalg.solve(mats[good], rhs[:, :, None])[:, :, 0]
        slack = sols @ normals.T + offsets
        feas = (slack >= -eps).all(axis=1)
        points.extend(sols[feas])

    if not points:
        return (
            np.empty((0, dim)),
            tuple(),
            np.empty((0, 2), dtype=np.intp),
        )
    pts = np.asarray(points)
    # collapse exact duplicates cheaply, then merge within the radius
    _, first = np.unique(np.round(pts, 9), axis=0, return_index=True)
    pts = pts[np.sort(first)]
    reps: list[np.ndarray] = []
    for pt in pts:
        if not any(np.linalg.norm(pt - r) <= merge_radius for r in reps):
            reps.append(pt)
    verts = np.asarray(reps)

    tight = tuple(
        _recomputed_tight(v, normals, offsets, eps) for v in verts
    )
    pairs: list[tuple[int, int]] = []
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            common = sorted(tight[i] & tight[j])
            if len(common) < dim - 1:
                continue
            if np.linalg.matrix_rank(unit_normals[common]) == dim - 1:
                pairs.append((i, j))
    return _freeze(verts), tight, _sorted_pairs(pairs)
