"""Baseline localizer: seed K4 search, canonical placement, queue propagation.

A node is localized once it has accumulated enough localized neighbors in
general position; with exact distances the placement is the unique
least-squares solution of the linearized sphere system.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import (DegenerateAnchorsError, DegenerateDistancesError,
                     InconsistentDistancesError, NoSeedError)
from .model import DEFAULT_EPS, NetworkInstance, PointFormation

# Scale-free non-coplanarity threshold: the Cayley-Menger determinant of a
# 4-point distance tuple, normalized by (max distance)^6, must exceed this.
DEFAULT_TAU = 1e-12


def cayley_menger(d2: np.ndarray) -> float:
    """Cayley-Menger determinant of a squared-distance matrix (4 points)."""
    k = d2.shape[0]
    m = np.ones((k + 1, k + 1))
    m[0, 0] = 0.0
    m[1:, 1:] = d2
    return float(np.linalg.det(m))


def _pairwise_sq(instance: NetworkInstance, quad) -> np.ndarray:
    d2 = np.zeros((4, 4))
    for i, j in itertools.combinations(range(4), 2):
        d = instance.dist(quad[i], quad[j])
        d2[i, j] = d2[j, i] = d * d
    return d2


@dataclass(frozen=True)
class SeedTetrahedron:
    """Non-degenerate 4-clique with its canonical-frame positions."""

    vertices: tuple[int, int, int, int]
    positions: np.ndarray

    def volume(self) -> float:
        a, b, c, d = self.positions
        return abs(np.linalg.det(np.stack([b - a, c - a, d - a]))) / 6.0


@dataclass
class LocalizationTrace:
    """Placement order with the anchors that fixed each non-seed node."""

    steps: list[tuple[int, np.ndarray, tuple[int, ...]]] = field(default_factory=list)
    formation: PointFormation | None = None

    @property
    def localized_count(self) -> int:
        return len(self.steps)


def is_degenerate_tetra(dists: np.ndarray, tau: float = DEFAULT_TAU) -> bool:
    """True if the 6-distance tuple is not realizable as a proper tetrahedron."""
    d2 = np.asarray(dists, dtype=float)
    cm = cayley_menger(d2)
    dmax = float(np.sqrt(d2.max()))
    if dmax == 0:
        return True
    return abs(cm) / dmax ** 6 <= tau


def find_seed_k4(instance: NetworkInstance,
                 tau: float = DEFAULT_TAU) -> SeedTetrahedron | None:
    """Lexicographically smallest 4-clique realizing a proper tetrahedron."""
    n = instance.n
    for i in range(n):
        ni = sorted(v for v in instance.neighbors(i) if v > i)
        for a, j in enumerate(ni):
            common_ij = [v for v in ni[a + 1:] if instance.has_edge(j, v)]
            for b, k in enumerate(common_ij):
                for l in common_ij[b + 1:]:
                    if not instance.has_edge(k, l):
                        continue
                    quad = (i, j, k, l)
                    d2 = _pairwise_sq(instance, quad)
                    if is_degenerate_tetra(d2, tau):
                        continue
                    pos = place_seed(np.sqrt(d2), tau=tau)
                    return SeedTetrahedron(vertices=quad, positions=pos)
    return None


def place_seed(dists: np.ndarray, tau: float = DEFAULT_TAU,
               eps: float = DEFAULT_EPS) -> np.ndarray:
    """Canonical-frame positions for 4 points given their 6 distances.

    First point at the origin, second on the positive x-axis, third in the
    y > 0 half plane, fourth with z > 0.
    """
    d = np.asarray(dists, dtype=float)
    d2 = d * d
    if is_degenerate_tetra(d2, tau):
        raise DegenerateDistancesError("distance tuple is (near-)coplanar")
    p = np.zeros((4, 3))
    p[1, 0] = d[0, 1]
    x2 = (d2[0, 1] + d2[0, 2] - d2[1, 2]) / (2 * d[0, 1])
    y2sq = d2[0, 2] - x2 * x2
    if y2sq <= 0:
        raise DegenerateDistancesError("first three distances are collinear")
    p[2] = (x2, np.sqrt(y2sq), 0.0)
    x3 = (d2[0, 1] + d2[0, 3] - d2[1, 3]) / (2 * d[0, 1])
    y3 = (d2[0, 3] - d2[2, 3] + p[2, 0] ** 2 + p[2, 1] ** 2
          - 2 * x3 * p[2, 0]) / (2 * p[2, 1])
    z3sq = d2[0, 3] - x3 * x3 - y3 * y3
    if z3sq <= 0:
        raise DegenerateDistancesError("fourth point is coplanar with the rest")
    p[3] = (x3, y3, np.sqrt(z3sq))
    got = np.linalg.norm(p[:, None, :] - p[None, :, :], axis=-1)
    if np.max(np.abs(got - d)) > max(eps, 1e-7 * d.max()):
        raise DegenerateDistancesError("distances are not realizable in R^3")
    return p


def solve_spheres(anchors: np.ndarray, dists: np.ndarray,
                  eps: float = DEFAULT_EPS) -> list[np.ndarray]:
    """Intersection of spheres |x - a_i| = r_i via linearized differences.

    Returns one point when the anchors affinely span the full space, the
    two mirror points when they span a hyperplane, and raises otherwise.
    """
    a = np.asarray(anchors, dtype=float)
    r = np.asarray(dists, dtype=float)
    m, d = a.shape
    if m < d:
        raise DegenerateAnchorsError(f"need at least {d} anchors in R^{d}")
    A = 2.0 * (a[1:] - a[0])
    b = (r[0] ** 2 - r[1:] ** 2) + (np.sum(a[1:] ** 2, axis=1)
                                    - np.sum(a[0] ** 2))
    u, s, vt = np.linalg.svd(A, full_matrices=True)
    tol = max(s[0], 1.0) * 1e-8 if len(s) else 0.0
    rank = int(np.sum(s > tol))
    scale = max(float(r.max()), 1.0)

    def _residual_ok(x: np.ndarray) -> bool:
        res = np.abs(np.linalg.norm(a - x, axis=1) - r)
        return bool(np.max(res) <= max(eps, 1e-9 * scale))

    if rank == d:
        x, *_ = np.linalg.lstsq(A, b, rcond=None)
        if not _residual_ok(x):
            raise InconsistentDistancesError("sphere system has no common point")
        return [x]
    if rank == d - 1:
        x0 = vt[:rank].T @ ((u.T @ b)[:rank] / s[:rank])
        nrm = vt[-1]
        nz = np.nonzero(np.abs(nrm) > 1e-12)[0]
        if len(nz) and nrm[nz[0]] < 0:
            nrm = -nrm
        w = x0 - a[0]
        beta = float(nrm @ w)
        gamma = float(w @ w) - r[0] ** 2
        disc = beta * beta - gamma
        if disc < -max(eps, 1e-9 * scale ** 2):
            raise InconsistentDistancesError("spheres do not intersect")
        disc = max(disc, 0.0)
        t1 = -beta + np.sqrt(disc)
        t2 = -beta - np.sqrt(disc)
        cands = [x0 + t1 * nrm, x0 + t2 * nrm]
        cands = [x for x in cands if _residual_ok(x)]
        if not cands:
            raise InconsistentDistancesError("sphere system has no common point")
        return cands
    raise DegenerateAnchorsError(
        f"anchors span a flat of dimension {rank} < {d - 1}")


def multilaterate(anchors, dists, eps: float = DEFAULT_EPS) -> np.ndarray:
    """Unique point at the given distances from >= d+1 spanning anchors."""
    a = np.asarray(anchors, dtype=float)
    d = a.shape[1]
    if a.shape[0] < d + 1:
        raise DegenerateAnchorsError(
            f"need at least {d + 1} anchors in R^{d}, got {a.shape[0]}")
    s = np.linalg.svd(a[1:] - a[0], compute_uv=False)
    if s[-1] <= max(s[0], 1.0) * 1e-8:
        raise DegenerateAnchorsError("anchors do not affinely span the space")
    sol = solve_spheres(a, np.asarray(dists, dtype=float), eps=eps)
    return sol[0]


def quadrilaterate(instance: NetworkInstance, eps: float = DEFAULT_EPS,
                   tau: float = DEFAULT_TAU) -> LocalizationTrace:
    """Propagate positions from a seed tetrahedron through the queue.

    Whenever a node accumulates four or more localized neighbors it is
    placed from all of them at once, provided they affinely span R^3;
    nodes that never do stay unlocalized in the returned partial formation.
    """
    seed = find_seed_k4(instance, tau=tau)
    if seed is None:
        raise NoSeedError("no non-coplanar K4 exists in the instance")
    formation = PointFormation(3, ids=(nd.id for nd in instance.nodes))
    trace = LocalizationTrace()
    count = {nd.id: 0 for nd in instance.nodes}
    queue: list[int] = []
    for v, pos in zip(seed.vertices, seed.positions):
        formation.mark(v, pos)
        trace.steps.append((v, np.asarray(pos), ()))
        queue.append(v)
    head = 0
    while head < len(queue):
        u = queue[head]
        head += 1
        for v in sorted(instance.neighbors(u)):
            if formation.is_localized(v):
                continue
            count[v] += 1
            if count[v] < 4:
                continue
            anchors = sorted(w for w in instance.neighbors(v)
                             if formation.is_localized(w))
            pts = formation.array(anchors)
            rs = np.array([instance.dist(v, w) for w in anchors])
            try:
                pos = multilaterate(pts, rs, eps=eps)
            except (DegenerateAnchorsError, InconsistentDistancesError):
                continue
            formation.mark(v, pos)
            trace.steps.append((v, pos, tuple(anchors)))
            queue.append(v)
    trace.formation = formation
    return trace
