"""Core data model: unit disk graphs, groupings, formations, scenario generation.

Distances are radio-radius-normalized lengths. A deployment is exact by
default: edge distances equal the Euclidean distances of the hidden true
positions. Localizers must only ever see the output of
:func:`strip_ground_truth`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InvalidConfigError, InvalidInputError

DEFAULT_EPS = 1e-9

LOCALIZED = "localized"
UNLOCALIZED = "unlocalized"

COLLINEAR = "collinear"
COPLANAR = "coplanar"


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator so identical seeds reproduce bit-exactly."""
    return np.random.Generator(np.random.Philox(seed))


# ---------------------------------------------------------------------------
# node / instance
# ---------------------------------------------------------------------------

@dataclass
class NodeRecord:
    """One sensor node.

    ``true_pos`` is hidden ground truth (never read by localizers).
    ``pos1``/``pos2``/``pos3`` hold per-dimension localizer outputs when a
    pipeline run chooses to annotate node copies with them.
    """

    id: int
    true_pos: tuple[float, float, float] | None = None
    line_group: int | None = None
    plane_group: int | None = None
    pos1: float | None = None
    pos2: tuple[float, float] | None = None
    pos3: tuple[float, float, float] | None = None


class NetworkInstance:
    """Immutable unit disk graph with measured edge distances.

    Edges are stored undirected with ``u < v``, no duplicates, no self
    loops, and ``0 < dist <= radius``.
    """

    def __init__(self, nodes: Sequence[NodeRecord],
                 edges: Iterable[tuple[int, int, float]], radius: float):
        if radius <= 0 or not math.isfinite(radius):
            raise InvalidInputError("radius must be positive and finite")
        nodes = tuple(nodes)
        ids = [nd.id for nd in nodes]
        if ids != list(range(len(nodes))):
            raise InvalidInputError("node ids must be contiguous 0..n-1")
        norm_edges = []
        seen = set()
        for u, v, d in edges:
            if u == v:
                raise InvalidInputError(f"self-loop at node {u}")
            if not (0 <= u < len(nodes) and 0 <= v < len(nodes)):
                raise InvalidInputError(f"edge ({u},{v}) out of range")
            if u > v:
                u, v = v, u
            if (u, v) in seen:
                raise InvalidInputError(f"duplicate edge ({u},{v})")
            if not (0.0 < d <= radius + DEFAULT_EPS):
                raise InvalidInputError(
                    f"edge ({u},{v}) has dist {d!r} outside (0, radius]")
            seen.add((u, v))
            norm_edges.append((u, v, float(d)))
        norm_edges.sort()
        self.nodes = nodes
        self.edges = tuple(norm_edges)
        self.radius = float(radius)
        self._adj: dict[int, frozenset[int]] | None = None
        self._dist: dict[tuple[int, int], float] | None = None

    # -- basic accessors ----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def m(self) -> int:
        return len(self.edges)

    def _build_lookups(self) -> None:
        adj: dict[int, set[int]] = {nd.id: set() for nd in self.nodes}
        dist: dict[tuple[int, int], float] = {}
        for u, v, d in self.edges:
            adj[u].add(v)
            adj[v].add(u)
            dist[(u, v)] = d
        self._adj = {u: frozenset(s) for u, s in adj.items()}
        self._dist = dist

    def neighbors(self, u: int) -> frozenset[int]:
        if self._adj is None:
            self._build_lookups()
        return self._adj[u]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbors(u)

    def dist(self, u: int, v: int) -> float:
        if self._dist is None:
            self._build_lookups()
        key = (u, v) if u < v else (v, u)
        return self._dist[key]

    def has_positions(self) -> bool:
        return all(nd.true_pos is not None for nd in self.nodes)

    def positions(self) -> np.ndarray:
        if not self.has_positions():
            raise InvalidInputError("instance has no ground-truth positions")
        return np.array([nd.true_pos for nd in self.nodes], dtype=float)

    def line_group_ids(self) -> list[int]:
        return sorted({nd.line_group for nd in self.nodes
                       if nd.line_group is not None})

    def plane_group_ids(self) -> list[int]:
        return sorted({nd.plane_group for nd in self.nodes
                       if nd.plane_group is not None})

    def validate_exact(self, eps: float = DEFAULT_EPS) -> None:
        """Check edges are exactly the pairs within radius, dists exact."""
        pos = self.positions()
        d = np.linalg.norm(pos[:, None, :] - pos[None, :, :], axis=-1)
        n = self.n
        expected = {(u, v) for u in range(n) for v in range(u + 1, n)
                    if d[u, v] <= self.radius + eps}
        actual = {(u, v) for u, v, _ in self.edges}
        if expected != actual:
            raise InvalidInputError("edge set does not match UDG of positions")
        for u, v, w in self.edges:
            if abs(w - d[u, v]) > eps:
                raise InvalidInputError(
                    f"edge ({u},{v}) dist {w} != true distance {d[u, v]}")


def build_udg(points: Sequence[Sequence[float]], radius: float, *,
              noise_sigma: float = 0.0,
              rng: np.random.Generator | None = None) -> NetworkInstance:
    """Unit disk graph of ``points`` in R^1/R^2/R^3.

    Edges connect exactly the pairs within ``radius``; recorded distances
    are exact unless ``noise_sigma`` > 0, in which case each measured
    distance is scaled by ``1 + sigma * N(0, 1)`` (clipped into
    ``(0, radius]``).
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[1] not in (1, 2, 3):
        raise InvalidInputError("points must be in R^1, R^2 or R^3")
    if pts.size and not np.all(np.isfinite(pts)):
        raise InvalidInputError("non-finite coordinate in points")
    full = np.zeros((pts.shape[0], 3))
    full[:, :pts.shape[1]] = pts
    edges = udg_edges(full, radius)
    if noise_sigma > 0.0:
        if rng is None:
            rng = make_rng(0)
        noisy = []
        for u, v, d in edges:
            w = d * (1.0 + noise_sigma * rng.standard_normal())
            w = min(max(w, 1e-12), radius)
            noisy.append((u, v, w))
        edges = noisy
    nodes = [NodeRecord(id=i, true_pos=tuple(full[i])) for i in range(len(full))]
    return NetworkInstance(nodes, edges, radius)


def udg_edges(positions: np.ndarray, radius: float,
              eps: float = DEFAULT_EPS) -> list[tuple[int, int, float]]:
    """All pairs within ``radius`` with their exact distances."""
    pos = np.asarray(positions, dtype=float)
    n = len(pos)
    if n < 2:
        return []
    d = np.linalg.norm(pos[:, None, :] - pos[None, :, :], axis=-1)
    iu, iv = np.triu_indices(n, k=1)
    keep = d[iu, iv] <= radius + eps
    return [(int(u), int(v), float(d[u, v]))
            for u, v in zip(iu[keep], iv[keep])]


def strip_ground_truth(instance: NetworkInstance) -> NetworkInstance:
    """Localizer-facing view: graph, dists and groupings without positions."""
    nodes = [replace(nd, true_pos=None) for nd in instance.nodes]
    return NetworkInstance(nodes, instance.edges, instance.radius)


# ---------------------------------------------------------------------------
# grouping functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupingFunction:
    """Map node id -> group id in 1..k at one level (``collinear``/``coplanar``)."""

    level: str
    assignment: Mapping[int, int]
    k: int
    label_of_group: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.level not in (COLLINEAR, COPLANAR):
            raise InvalidInputError(f"unknown grouping level {self.level!r}")
        used = set(self.assignment.values())
        if used != set(range(1, self.k + 1)):
            raise InvalidInputError("group ids must be exactly 1..k, no empty group")

    @classmethod
    def from_labels(cls, level: str, labels: Mapping[int, int]) -> "GroupingFunction":
        """Relabel arbitrary distinct group labels to canonical 1..k."""
        if not labels:
            raise InvalidInputError("empty grouping")
        distinct = sorted(set(labels.values()))
        remap = {lab: i + 1 for i, lab in enumerate(distinct)}
        assignment = {node: remap[lab] for node, lab in labels.items()}
        label_of = {gid: lab for lab, gid in remap.items()}
        return cls(level=level, assignment=assignment, k=len(distinct),
                   label_of_group=label_of)

    @classmethod
    def from_instance(cls, instance: NetworkInstance, level: str) -> "GroupingFunction":
        attr = "line_group" if level == COLLINEAR else "plane_group"
        labels = {}
        for nd in instance.nodes:
            lab = getattr(nd, attr)
            if lab is None:
                raise InvalidInputError(
                    f"node {nd.id} has no {attr}; grouping must be total")
            labels[nd.id] = lab
        return cls.from_labels(level, labels)

    def members(self, gid: int) -> list[int]:
        return sorted(u for u, g in self.assignment.items() if g == gid)

    def group_of(self, u: int) -> int:
        return self.assignment[u]


# ---------------------------------------------------------------------------
# point formations and hyperplanes
# ---------------------------------------------------------------------------

class PointFormation:
    """Node id -> position table in R^dim, meaningful up to isometry."""

    def __init__(self, dim: int, ids: Iterable[int] = ()):
        if dim not in (1, 2, 3):
            raise InvalidInputError("formation dim must be 1, 2 or 3")
        self.dim = dim
        self.rows: dict[int, np.ndarray] = {}
        self.status: dict[int, str] = {u: UNLOCALIZED for u in ids}

    def mark(self, u: int, pos) -> None:
        p = np.atleast_1d(np.asarray(pos, dtype=float))
        if p.shape != (self.dim,) or not np.all(np.isfinite(p)):
            raise InvalidInputError(
                f"position for node {u} must be a finite point in R^{self.dim}")
        self.rows[u] = p
        self.status[u] = LOCALIZED

    def is_localized(self, u: int) -> bool:
        return self.status.get(u) == LOCALIZED

    def localized_ids(self) -> list[int]:
        return sorted(u for u, s in self.status.items() if s == LOCALIZED)

    def localized_fraction(self) -> float:
        if not self.status:
            return 0.0
        return len(self.localized_ids()) / len(self.status)

    def position(self, u: int) -> np.ndarray:
        return self.rows[u]

    def array(self, ids: Sequence[int]) -> np.ndarray:
        return np.array([self.rows[u] for u in ids], dtype=float)

    def distance_matrix(self, ids: Sequence[int] | None = None) -> np.ndarray:
        if ids is None:
            ids = self.localized_ids()
        pts = self.array(ids)
        return np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)


@dataclass(frozen=True)
class Hyperplane:
    """Normalized equation ``normal . x = offset`` with canonical sign."""

    normal: tuple[float, ...]
    offset: float

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=float)
        nrm = np.linalg.norm(n)
        if nrm == 0 or not np.all(np.isfinite(n)):
            raise InvalidInputError("hyperplane normal must be nonzero and finite")
        n = n / nrm
        b = self.offset / nrm
        nz = np.nonzero(np.abs(n) > 1e-12)[0]
        if len(nz) == 0:
            raise InvalidInputError("degenerate hyperplane normal")
        if n[nz[0]] < 0:
            n = -n
            b = -b
        object.__setattr__(self, "normal", tuple(float(x) for x in n))
        object.__setattr__(self, "offset", float(b))

    @property
    def dim(self) -> int:
        return len(self.normal)

    def residual(self, point) -> float:
        p = np.asarray(point, dtype=float)
        return float(np.dot(self.normal, p) - self.offset)

    @classmethod
    def from_points(cls, points) -> "Hyperplane":
        """Unique hyperplane through d affinely independent points in R^d."""
        from .errors import DegeneratePointsError
        pts = np.asarray(points, dtype=float)
        d = pts.shape[1]
        if pts.shape[0] != d:
            raise DegeneratePointsError(
                f"need exactly {d} points in R^{d}, got {pts.shape[0]}")
        diffs = pts[1:] - pts[0]
        if d == 1:
            raise DegeneratePointsError("no hyperplane exists in R^1 from 1 point")
        _, s, vt = np.linalg.svd(diffs)
        if len(s) == d - 1 and s[-1] <= 1e-9 * max(s[0], 1.0):
            raise DegeneratePointsError("points are affinely dependent")
        normal = vt[-1]
        return cls(normal=tuple(normal), offset=float(normal @ pts[0]))


# ---------------------------------------------------------------------------
# building scenario generation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BuildingConfig:
    """Corridor-grid building deployment.

    ``corridors_per_floor`` is either an int (corridors parallel to the
    x-axis) or a pair ``(nx, ny)`` adding y-parallel corridors. Consecutive
    corridors are offset by half a node spacing when ``stagger`` is set so
    that neighboring chains interleave.
    """

    floors: int = 1
    floor_spacing: float = 0.8
    corridors_per_floor: int | tuple[int, int] = 1
    node_spacing: float = 0.9
    radius: float = 1.0
    connector_columns: tuple[tuple[float, float], ...] = ()
    rng_seed: int = 0
    corridor_spacing: float = 0.45
    extent: float = 4.5
    stagger: bool = True
    noise_sigma: float = 0.0

    def counts(self) -> tuple[int, int]:
        c = self.corridors_per_floor
        if isinstance(c, int):
            return (c, 0)
        nx, ny = c
        return (int(nx), int(ny))

    def validate(self) -> None:
        nx, ny = self.counts()
        if self.floors < 1:
            raise InvalidConfigError("floors must be >= 1")
        if nx + ny < 1:
            raise InvalidConfigError("need at least one corridor per floor")
        if nx < 0 or ny < 0:
            raise InvalidConfigError("corridor counts must be nonnegative")
        if self.radius <= 0:
            raise InvalidConfigError("radius must be positive")
        if not (0 < self.node_spacing <= self.radius):
            raise InvalidConfigError("node_spacing must be in (0, radius]")
        if self.floors > 1 and not (0 < self.floor_spacing <= self.radius):
            raise InvalidConfigError("floor_spacing must be in (0, radius]")
        if self.extent <= 0 or self.corridor_spacing <= 0:
            raise InvalidConfigError("extent and corridor_spacing must be positive")
        if max(nx - 1, 0) * self.corridor_spacing > 100 * self.extent:
            raise InvalidConfigError("floor geometry does not fit a bounded box")
        if self.noise_sigma < 0:
            raise InvalidConfigError("noise_sigma must be >= 0")

    def to_json_dict(self) -> dict:
        return {
            "floors": self.floors,
            "floor_spacing": self.floor_spacing,
            "corridors_per_floor": list(self.counts()),
            "node_spacing": self.node_spacing,
            "radius": self.radius,
            "connector_columns": [list(c) for c in self.connector_columns],
            "rng_seed": self.rng_seed,
            "corridor_spacing": self.corridor_spacing,
            "extent": self.extent,
            "stagger": self.stagger,
            "noise_sigma": self.noise_sigma,
        }

    @classmethod
    def from_json_dict(cls, d: Mapping) -> "BuildingConfig":
        kwargs = dict(d)
        if "corridors_per_floor" in kwargs:
            c = kwargs["corridors_per_floor"]
            kwargs["corridors_per_floor"] = tuple(c) if isinstance(c, (list, tuple)) else int(c)
        if "connector_columns" in kwargs:
            kwargs["connector_columns"] = tuple(
                (float(x), float(y)) for x, y in kwargs["connector_columns"])
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise InvalidConfigError(f"bad building config: {exc}") from exc


# Stairwell densification: corridors within this perpendicular distance of a
# connector column get extra nodes at these offsets along the corridor, so
# that nodes on the floor above gain several cross-floor anchors.
_STAIR_REACH = 0.6
_STAIR_OFFSETS = (-0.45, 0.0, 0.45)
_MIN_NODE_SEP = 0.05


def _corridor_coords(offset: float, extent: float, spacing: float,
                     stair_points: Sequence[float]) -> list[float]:
    coords = []
    t = offset
    while t <= extent + 1e-12:
        coords.append(round(t, 12))
        t += spacing
    for s in stair_points:
        if -1e-12 <= s <= extent + 1e-12:
            if all(abs(s - c) > _MIN_NODE_SEP for c in coords):
                coords.append(round(s, 12))
    coords.sort()
    return coords


def generate_building(config: BuildingConfig) -> NetworkInstance:
    """Deterministic corridor-grid deployment per the config.

    Nodes are placed along corridor lines at ``node_spacing`` intervals per
    floor; floors stack at ``floor_spacing``; connector columns densify the
    corridors passing near them. ``line_group`` ids are unique across the
    whole building, ``plane_group`` is the floor index (both 1-based).
    """
    config.validate()
    nx, ny = config.counts()
    half = config.node_spacing / 2.0
    nodes: list[NodeRecord] = []
    line_gid = 0
    for f in range(config.floors):
        z = f * config.floor_spacing
        plane_gid = f + 1
        floor_positions: list[tuple[float, float]] = []

        def _emit(x: float, y: float) -> None:
            nonlocal nodes
            for (px, py) in floor_positions:
                if abs(px - x) <= _MIN_NODE_SEP and abs(py - y) <= _MIN_NODE_SEP:
                    return
            floor_positions.append((x, y))
            nodes.append(NodeRecord(id=len(nodes), true_pos=(x, y, z),
                                    line_group=line_gid, plane_group=plane_gid))

        for i in range(nx):
            line_gid += 1
            y = i * config.corridor_spacing
            offset = half if (config.stagger and i % 2 == 1) else 0.0
            stair = [sx + t for (sx, sy) in config.connector_columns
                     if abs(y - sy) <= _STAIR_REACH for t in _STAIR_OFFSETS]
            for x in _corridor_coords(offset, config.extent,
                                      config.node_spacing, stair):
                _emit(x, y)
        for j in range(ny):
            line_gid += 1
            x = j * config.corridor_spacing
            offset = half if (config.stagger and j % 2 == 1) else 0.0
            stair = [sy + t for (sx, sy) in config.connector_columns
                     if abs(x - sx) <= _STAIR_REACH for t in _STAIR_OFFSETS]
            for y in _corridor_coords(offset, config.extent,
                                      config.node_spacing, stair):
                _emit(x, y)

    if not nodes:
        raise InvalidConfigError("configuration produces no nodes")
    positions = np.array([nd.true_pos for nd in nodes])
    edges = udg_edges(positions, config.radius)
    if config.noise_sigma > 0:
        rng = make_rng(config.rng_seed)
        edges = [(u, v, min(max(d * (1 + config.noise_sigma * rng.standard_normal()),
                                1e-12), config.radius))
                 for u, v, d in edges]
    return NetworkInstance(nodes, edges, config.radius)


def flagship_building_config(seed: int = 42) -> BuildingConfig:
    """The 3-floor sparse corridor building with a single stairwell column."""
    return BuildingConfig(
        floors=3,
        floor_spacing=0.8,
        corridors_per_floor=4,
        node_spacing=0.9,
        radius=1.0,
        connector_columns=((3.6, 0.675),),
        rng_seed=seed,
        corridor_spacing=0.45,
        extent=6.3,
        stagger=True,
    )


# ---------------------------------------------------------------------------
# edge classification
# ---------------------------------------------------------------------------

EDGE_COLLINEAR = "collinear"
EDGE_INTERLINEAR = "interlinear"
EDGE_INTERPLANAR = "interplanar"


def classify_edge(instance: NetworkInstance, u: int, v: int) -> str:
    """collinear, interlinear-but-coplanar, or interplanar."""
    a, b = instance.nodes[u], instance.nodes[v]
    if a.plane_group is None or a.line_group is None \
            or b.plane_group is None or b.line_group is None:
        raise InvalidInputError("both grouping levels required to classify edges")
    if a.plane_group != b.plane_group:
        return EDGE_INTERPLANAR
    if a.line_group != b.line_group:
        return EDGE_INTERLINEAR
    return EDGE_COLLINEAR


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------

def network_to_json_dict(instance: NetworkInstance) -> dict:
    nodes = []
    for nd in instance.nodes:
        rec = {"id": nd.id}
        if nd.line_group is not None:
            rec["line_group"] = nd.line_group
        if nd.plane_group is not None:
            rec["plane_group"] = nd.plane_group
        if nd.true_pos is not None:
            rec["pos"] = list(nd.true_pos)
        nodes.append(rec)
    return {
        "radius": instance.radius,
        "nodes": nodes,
        "edges": [{"u": u, "v": v, "dist": d} for u, v, d in instance.edges],
    }


def network_from_json_dict(data: Mapping) -> NetworkInstance:
    try:
        radius = float(data["radius"])
        nodes = []
        for rec in data["nodes"]:
            pos = rec.get("pos")
            if pos is not None:
                pos = tuple(float(x) for x in pos)
                if len(pos) == 2:
                    pos = (pos[0], pos[1], 0.0)
            nodes.append(NodeRecord(
                id=int(rec["id"]),
                true_pos=pos,
                line_group=rec.get("line_group"),
                plane_group=rec.get("plane_group"),
            ))
        nodes.sort(key=lambda nd: nd.id)
        edges = [(int(e["u"]), int(e["v"]), float(e["dist"]))
                 for e in data["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"malformed network JSON: {exc}") from exc
    return NetworkInstance(nodes, edges, radius)


def save_network(instance: NetworkInstance, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(network_to_json_dict(instance), fh, indent=1)


def load_network(path: str) -> NetworkInstance:
    with open(path) as fh:
        return network_from_json_dict(json.load(fh))
