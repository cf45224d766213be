"""Group-aware localization: 1D chains, group-relative placement, full driver.

Each hyperplanar group is first localized internally in dimension d-1, then
groups are placed relative to each other in dimension d by fixing support
vertices from cross-group distance measurements and mapping the whole group
through one distance-preserving transform.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import (AmbiguousPlacementError, ChordInconsistencyError,
                     DegenerateAnchorsError, DegeneratePointsError,
                     DegenerateSupportsError, HyperlocError,
                     InconsistentDistancesError, InvalidInputError,
                     NonIsometricCorrespondenceError, NotLocalizableError)
from .intervals import Graph, LinearOrder, unit_interval_order
from .model import (COLLINEAR, COPLANAR, DEFAULT_EPS, GroupingFunction,
                    Hyperplane, NetworkInstance, PointFormation)
from .quadloc import solve_spheres

# Placements that bring a non-adjacent pair this far inside the radio radius
# are rejected as inconsistent with the unit disk model.
NONEDGE_MARGIN = 1e-7


def localize_path(path: LinearOrder, weights: Sequence[float]) -> PointFormation:
    """Embed a simple path on a line: cumulative sums of its edge lengths."""
    seq = path.sequence
    if len(weights) != max(len(seq) - 1, 0):
        raise InvalidInputError("need one weight per path edge")
    formation = PointFormation(1, ids=seq)
    x = 0.0
    for i, u in enumerate(seq):
        if i > 0:
            x += float(weights[i - 1])
        formation.mark(u, (x,))
    return formation


def localize_collinear_group(instance: NetworkInstance,
                             members: Sequence[int],
                             eps: float = DEFAULT_EPS) -> PointFormation:
    """1D embedding of one collinear group's induced subgraph.

    Orders the vertices, accumulates path-edge lengths, then validates every
    chord: a violated chord means the order is not geometrically monotone
    (or the grouping itself is wrong).
    """
    graph = Graph.from_instance(instance, members)
    order = unit_interval_order(graph)
    seq = order.sequence
    weights = [instance.dist(a, b) for a, b in zip(seq, seq[1:])]
    formation = localize_path(order, weights)
    for u, v in graph.edges:
        got = abs(float(formation.position(u)[0] - formation.position(v)[0]))
        if abs(got - instance.dist(u, v)) > eps:
            raise ChordInconsistencyError(
                f"chord ({u},{v}) embeds at {got}, measured {instance.dist(u, v)}",
                edge=(u, v))
    return formation


def localize_support_vertex(anchors, dists, d: int,
                            eps: float = DEFAULT_EPS) -> list[np.ndarray]:
    """Candidate ambient positions of a node from cross-group anchors.

    With anchors spanning only a (d-1)-flat the result is the mirror pair
    across that flat; with anchors affinely spanning R^d it is unique.
    """
    a = np.asarray(anchors, dtype=float)
    if a.ndim != 2 or a.shape[1] != d:
        raise InvalidInputError(f"anchors must be points in R^{d}")
    if a.shape[0] < d:
        raise DegenerateAnchorsError(f"need at least {d} anchors in R^{d}")
    return solve_spheres(a, np.asarray(dists, dtype=float), eps=eps)


def fit_hyperplane(points) -> Hyperplane:
    """Unique canonicalized hyperplane through d affinely independent points."""
    return Hyperplane.from_points(points)


@dataclass(frozen=True)
class GroupTransform:
    """Distance-preserving affine map from R^(d-1) into R^d."""

    linear: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.linear, dtype=float)
        gram = q.T @ q
        if np.max(np.abs(gram - np.eye(q.shape[1]))) > 1e-8:
            raise InvalidInputError("transform columns are not orthonormal")

    @property
    def source_dim(self) -> int:
        return self.linear.shape[1]

    @property
    def target_dim(self) -> int:
        return self.linear.shape[0]

    def apply(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return pts @ self.linear.T + self.translation

    @classmethod
    def canonical_embedding(cls, d: int) -> "GroupTransform":
        lin = np.vstack([np.eye(d - 1), np.zeros((1, d - 1))])
        return cls(linear=lin, translation=np.zeros(d))


def compute_group_transform(local, ambient,
                            eps: float = DEFAULT_EPS) -> GroupTransform:
    """Transform mapping d local (d-1)-dim points onto d ambient points.

    The correspondence must be isometric: pairwise local distances equal
    pairwise ambient distances. The linear part is the polar-orthonormalized
    solution of the difference-basis system.
    """
    loc = np.atleast_2d(np.asarray(local, dtype=float))
    amb = np.atleast_2d(np.asarray(ambient, dtype=float))
    d = amb.shape[1]
    if loc.shape != (d, d - 1) or amb.shape != (d, d):
        raise InvalidInputError(
            f"need {d} local points in R^{d - 1} and {d} ambient points in R^{d}")
    scale = max(1.0, float(np.abs(amb).max()), float(np.abs(loc).max()))
    tol = max(eps, eps * scale)
    dl = np.linalg.norm(loc[:, None, :] - loc[None, :, :], axis=-1)
    da = np.linalg.norm(amb[:, None, :] - amb[None, :, :], axis=-1)
    if np.max(np.abs(dl - da)) > tol:
        raise NonIsometricCorrespondenceError(
            "pairwise local and ambient distances disagree")
    lmat = (loc[1:] - loc[0]).T
    s = np.linalg.svd(lmat, compute_uv=False)
    if s[-1] <= 1e-9 * max(s[0], 1.0):
        raise DegenerateSupportsError("local support points are affinely dependent")
    mmat = (amb[1:] - amb[0]).T
    q0 = mmat @ np.linalg.inv(lmat)
    u, _, vt = np.linalg.svd(q0, full_matrices=False)
    q = u @ vt
    t = amb[0] - q @ loc[0]
    transform = GroupTransform(linear=q, translation=t)
    if np.max(np.linalg.norm(transform.apply(loc) - amb, axis=1)) > tol:
        raise NonIsometricCorrespondenceError(
            "no distance-preserving map fits the correspondence")
    return transform


@dataclass
class GroupLocalState:
    """Placement record of one hyperplanar group."""

    group: int
    status: str = "unlocalized"
    support_vertices: list[tuple[int, np.ndarray]] = field(default_factory=list)
    plane: Hyperplane | None = None
    transform: GroupTransform | None = None


# ---------------------------------------------------------------------------
# group-vs-group localization
# ---------------------------------------------------------------------------

class _GroupSolver:
    """Single run of the two-phase group placement over one grouping level."""

    def __init__(self, instance: NetworkInstance, grouping: GroupingFunction,
                 local_formations: Mapping[int, PointFormation], d: int,
                 eps: float, seed_group: int | None):
        if d not in (2, 3):
            raise InvalidInputError("group localization runs in d=2 or d=3")
        self.inst = instance
        self.grouping = grouping
        self.local = local_formations
        self.d = d
        self.eps = eps
        self.scope = set(grouping.assignment.keys())
        self.members = {g: grouping.members(g) for g in range(1, grouping.k + 1)}
        for g, f in local_formations.items():
            if f.dim != d - 1:
                raise InvalidInputError(
                    f"group {g} local formation has dim {f.dim}, expected {d - 1}")
        self.formation = PointFormation(d, ids=self.scope)
        self.states = {g: GroupLocalState(group=g) for g in self.members}
        if seed_group is None:
            seed_group = min(self.members,
                             key=lambda g: (-len(self.members[g]), g))
        elif seed_group not in self.members:
            raise InvalidInputError(f"unknown seed group {seed_group}")
        self.seed = seed_group

    # -- helpers ------------------------------------------------------------

    def _scoped_neighbors(self, u: int) -> list[int]:
        return sorted(v for v in self.inst.neighbors(u) if v in self.scope)

    def _localized_anchor_split(self, u: int, group_filter: int | None):
        anchors, dists = [], []
        for v in self._scoped_neighbors(u):
            if not self.formation.is_localized(v):
                continue
            if group_filter is not None and \
                    self.grouping.group_of(v) != group_filter:
                continue
            anchors.append(self.formation.position(v))
            dists.append(self.inst.dist(u, v))
        return np.array(anchors, dtype=float), np.array(dists, dtype=float)

    def _group_adjacent_to(self, g: int, h: int) -> bool:
        mem_h = set(self.members[h])
        for u in self.members[g]:
            if any(v in mem_h for v in self.inst.neighbors(u)):
                return True
        return False

    def _local_row(self, g: int, u: int) -> np.ndarray | None:
        f = self.local.get(g)
        if f is None or not f.is_localized(u):
            return None
        return f.position(u)

    def _commit_seed(self) -> None:
        g = self.seed
        transform = GroupTransform.canonical_embedding(self.d)
        self._apply_transform(g, transform, supports=[])

    def _apply_transform(self, g: int, transform: GroupTransform,
                         supports: list[tuple[int, np.ndarray]]) -> None:
        state = self.states[g]
        for u in self.members[g]:
            row = self._local_row(g, u)
            if row is not None:
                self.formation.mark(u, transform.apply(row)[0])
        state.status = "localized"
        state.transform = transform
        state.support_vertices = supports
        if supports and len(supports) >= self.d:
            pts = np.array([p for _, p in supports[:self.d]])
            try:
                state.plane = fit_hyperplane(pts)
            except DegeneratePointsError:
                state.plane = None
        else:
            normal = np.zeros(self.d)
            normal[-1] = 1.0
            if transform.source_dim == self.d - 1:
                # plane spanned by the transform's columns
                cols = transform.linear
                if self.d - cols.shape[1] == 1:
                    u_, _, _ = np.linalg.svd(cols)
                    normal = u_[:, -1]
            state.plane = Hyperplane(normal=tuple(normal),
                                     offset=float(normal @ transform.translation))

    # -- mirror/sign resolution ----------------------------------------------

    def _pick_independent_supports(self, g: int,
                                   supports: list[tuple[int, list[np.ndarray]]]):
        chosen: list[tuple[int, list[np.ndarray]]] = []
        locs: list[np.ndarray] = []
        for u, cands in supports:
            row = self._local_row(g, u)
            if row is None:
                continue
            trial = locs + [row]
            if len(trial) > 1:
                diffs = np.array(trial[1:]) - trial[0]
                if np.linalg.matrix_rank(diffs, tol=1e-9) < len(trial) - 1:
                    continue
            chosen.append((u, cands))
            locs.append(row)
            if len(chosen) == self.d:
                return chosen, np.array(locs)
        return None, None

    def _try_place_group(self, g: int,
                         supports: list[tuple[int, list[np.ndarray]]]) -> bool:
        chosen, locs = self._pick_independent_supports(g, supports)
        if chosen is None:
            return False
        survivors = []
        for combo in itertools.product(*[range(len(c)) for _, c in chosen]):
            ambient = np.array([chosen[i][1][ci] for i, ci in enumerate(combo)])
            try:
                transform = compute_group_transform(locs, ambient, eps=self.eps)
            except (NonIsometricCorrespondenceError, DegenerateSupportsError):
                continue
            placed = self._check_placement(g, transform)
            if placed is not None:
                survivors.append((combo, transform))
        if not survivors:
            raise InconsistentDistancesError(
                "no mirror-candidate combination reproduces the measurements",
                group=g)
        if len(survivors) > 1:
            if self._is_reflection_gauge():
                survivors.sort(key=lambda s: s[0])
            else:
                raise AmbiguousPlacementError(
                    "multiple placements survive all distance constraints",
                    group=g)
        combo, transform = survivors[0]
        sup_pts = [(u, transform.apply(self._local_row(g, u))[0])
                   for u, _ in chosen]
        self._apply_transform(g, transform, supports=sup_pts)
        return True

    def _check_placement(self, g: int, transform: GroupTransform):
        """Positions for group g if they satisfy every measured edge to the
        localized set and violate no unit-disk non-edge; else None."""
        ids, pts = [], []
        for u in self.members[g]:
            row = self._local_row(g, u)
            if row is not None:
                ids.append(u)
                pts.append(transform.apply(row)[0])
        if not ids:
            return None
        pts = np.array(pts)
        loc_ids = self.formation.localized_ids()
        if loc_ids:
            loc_pts = self.formation.array(loc_ids)
            dmat = np.linalg.norm(pts[:, None, :] - loc_pts[None, :, :], axis=-1)
            for i, u in enumerate(ids):
                nbrs = self.inst.neighbors(u)
                for j, v in enumerate(loc_ids):
                    if v in nbrs:
                        if abs(dmat[i, j] - self.inst.dist(u, v)) > \
                                max(self.eps, 1e-9):
                            return None
                    elif dmat[i, j] <= self.inst.radius - NONEDGE_MARGIN:
                        return None
        return pts

    def _is_reflection_gauge(self) -> bool:
        """True while every localized node lies in one hyperplane, so a
        mirror across it is still a global isometry (free choice)."""
        ids = self.formation.localized_ids()
        if len(ids) <= self.d:
            return True
        pts = self.formation.array(ids)
        diffs = pts[1:] - pts[0]
        return np.linalg.matrix_rank(diffs, tol=1e-9) < self.d

    # -- phases ---------------------------------------------------------------

    def _scan_group(self, g: int, group_filter: int | None,
                    min_anchors: int) -> bool:
        supports: list[tuple[int, list[np.ndarray]]] = []
        for u in self.members[g]:
            anchors, dists = self._localized_anchor_split(u, group_filter)
            if len(anchors) < min_anchors:
                continue
            try:
                cands = localize_support_vertex(anchors, dists, self.d,
                                                eps=self.eps)
            except (DegenerateAnchorsError, InconsistentDistancesError):
                continue
            supports.append((u, cands))
            if len(supports) >= self.d and \
                    self._try_place_group(g, supports):
                return True
        return False

    def run(self) -> tuple[PointFormation, dict[int, GroupLocalState]]:
        self._commit_seed()
        # Phase A: groups adjacent to the seed, supports anchored in the seed.
        for g in sorted(self.members):
            if g == self.seed or not self._group_adjacent_to(g, self.seed):
                continue
            self._scan_group(g, group_filter=self.seed, min_anchors=self.d)
        localized_groups = [g for g, st in self.states.items()
                            if st.status == "localized"]
        if len(self.members) > 1 and localized_groups == [self.seed]:
            raise NotLocalizableError(
                "no group could be localized against the seed group")
        # Phase B: remaining groups from nodes notified d+1 times, repeated
        # until no further group can be placed.
        progress = True
        while progress:
            progress = False
            for g in sorted(self.members):
                if self.states[g].status == "localized":
                    continue
                if self._scan_group(g, group_filter=None,
                                    min_anchors=self.d + 1):
                    progress = True
        return self.formation, self.states


def localize_groups(instance: NetworkInstance, grouping: GroupingFunction,
                    local_formations: Mapping[int, PointFormation], d: int,
                    eps: float = DEFAULT_EPS, seed_group: int | None = None
                    ) -> tuple[PointFormation, dict[int, GroupLocalState]]:
    """Place every hyperplanar group of one level in ambient dimension d.

    Phase A fixes support vertices of seed-adjacent groups from d anchors in
    the seed group (a mirror pair each); once d affinely independent supports
    exist, the surviving mirror combination determines the group plane and
    its transform. Phase B places the remaining groups from nodes with d+1
    localized-neighbor notifications. Raises a not-localizable error when
    phase A places nothing beyond the seed.
    """
    solver = _GroupSolver(instance, grouping, local_formations, d, eps,
                          seed_group)
    return solver.run()


# ---------------------------------------------------------------------------
# hierarchical corridor -> floor -> building driver
# ---------------------------------------------------------------------------

@dataclass
class HierarchicalResult:
    """Stage outputs of the corridor/floor/building pipeline."""

    formation: PointFormation
    pos1: dict[int, float]
    pos2: dict[int, tuple[float, float]]
    line_states: dict[int, str]
    floor_states: dict[int, GroupLocalState]

    def localized_fraction(self) -> float:
        return self.formation.localized_fraction()

    def annotated_nodes(self, instance: NetworkInstance) -> list:
        """Node record copies with pos1/pos2/pos3 filled from the stages."""
        from dataclasses import replace
        out = []
        for nd in instance.nodes:
            pos3 = None
            if self.formation.is_localized(nd.id):
                pos3 = tuple(float(c) for c in self.formation.position(nd.id))
            out.append(replace(nd, pos1=self.pos1.get(nd.id),
                               pos2=self.pos2.get(nd.id), pos3=pos3))
        return out


def _annotate(exc: HyperlocError, stage: str, group: int | None):
    if exc.stage is None:
        exc.stage = stage
    if exc.group is None and group is not None:
        exc.group = group
    return exc


def hierarchical_localize(instance: NetworkInstance,
                          eps: float = DEFAULT_EPS,
                          seed_floor: int | None = None) -> HierarchicalResult:
    """Corridors in 1D, corridors per floor in 2D, floors in 3D.

    Requires both grouping levels on every node. Output positions satisfy
    every measured edge distance; nodes of groups that never acquire enough
    supports stay unlocalized.
    """
    lines = GroupingFunction.from_instance(instance, COLLINEAR)
    planes = GroupingFunction.from_instance(instance, COPLANAR)

    # stage 1: each corridor on its own axis
    line_formations: dict[int, PointFormation] = {}
    line_states: dict[int, str] = {}
    for g in range(1, lines.k + 1):
        label = lines.label_of_group.get(g, g)
        try:
            line_formations[g] = localize_collinear_group(
                instance, lines.members(g), eps=eps)
            line_states[label] = "localized"
        except HyperlocError as exc:
            raise _annotate(exc, "collinear", label)

    pos1 = {u: float(f.position(u)[0])
            for g, f in line_formations.items() for u in f.localized_ids()}

    # stage 2: corridors against each other, one floor at a time
    floor_formations: dict[int, PointFormation] = {}
    for fg in range(1, planes.k + 1):
        label = planes.label_of_group.get(fg, fg)
        floor_nodes = planes.members(fg)
        sub_labels = {u: instance.nodes[u].line_group for u in floor_nodes}
        sub_grouping = GroupingFunction.from_labels(COLLINEAR, sub_labels)
        local = {}
        for g in range(1, sub_grouping.k + 1):
            orig_label = sub_grouping.label_of_group[g]
            global_gid = next(gg for gg in range(1, lines.k + 1)
                              if lines.label_of_group.get(gg, gg) == orig_label)
            local[g] = line_formations[global_gid]
        try:
            formation2, _ = localize_groups(instance, sub_grouping, local, d=2,
                                            eps=eps)
        except HyperlocError as exc:
            raise _annotate(exc, "floor", label)
        floor_formations[fg] = formation2

    pos2 = {u: tuple(f.position(u))
            for fg, f in floor_formations.items() for u in f.localized_ids()}

    # stage 3: floors against each other in 3D
    try:
        formation3, floor_states = localize_groups(
            instance, planes, floor_formations, d=3, eps=eps,
            seed_group=seed_floor)
    except HyperlocError as exc:
        raise _annotate(exc, "building", None)

    states_by_label = {planes.label_of_group.get(g, g): st
                       for g, st in floor_states.items()}
    return HierarchicalResult(formation=formation3, pos1=pos1, pos2=pos2,
                              line_states=line_states,
                              floor_states=states_by_label)


def verify_formation(instance: NetworkInstance, formation: PointFormation,
                     eps: float = DEFAULT_EPS) -> float:
    """Largest |embedded - measured| edge residual over localized pairs."""
    worst = 0.0
    for u, v, d in instance.edges:
        if formation.is_localized(u) and formation.is_localized(v):
            got = float(np.linalg.norm(formation.position(u)
                                       - formation.position(v)))
            worst = max(worst, abs(got - d))
    return worst
