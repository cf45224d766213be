"""Constructive hardness gadget: hypergraph 2-coloring vs line groupability.

A 3-uniform hypergraph is materialized as a 2D unit disk deployment on a
set of axis-parallel lines: one black vertical line per hypergraph vertex,
a black main line and support line, and a red/blue mirrored pair of edge
lines per hyperedge. Each edge's three member lines carry flag triangles on
the edge-line pair, joined by chains of relay tokens; the recorded graph
pins which placements of the movable parts (per-line vertical/horizontal
flips, per-chain side choice) realize the graph exactly with every node on
a line. A per-line vertical flip encodes the vertex color (the side of the
edge-line pair its flags vacate), and the geometry rejects exactly the
configurations whose induced coloring makes some hyperedge monochromatic.

Within the desk-scale caps every 3-uniform hypergraph is 2-colorable (the
smallest non-2-colorable one has seven edges), so the canonical layout can
be built from a brute-forced proper coloring and is itself a valid
configuration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import HyperlocError, InvalidInputError, SizeCapError
from .model import Hyperplane, NetworkInstance, NodeRecord, udg_edges

MAX_VERTICES = 8
MAX_EDGES = 4
COLORING_CAP = 20

RADIUS = 1.0
VSPACE = 2.5            # vertex-line spacing, inside the open interval (2, 3)
FOOT_Y = 0.95           # first vertex-line node above/below the main line
LOW_FILL_TOP = 3.4      # vertex-line chain stops a safe unit below edge lines
APEX_DX = 0.8           # flag apex offset: facing apexes sit 2.5 - 1.6 apart
BASE_DY = 0.5           # flag base nodes at edge-line height +- this
EDGE_Y0 = 4.5           # first edge-line offset from the main line
EDGE_DY = 2.0           # consecutive same-color edge-line spacing
TOKEN_END = 1.25        # chain endpoints this far from their member lines
TOKEN_STEP = 0.85
SUPPORT_Y = 0.3

RED, BLUE = 0, 1
COLOR_NAMES = {RED: "red", BLUE: "blue"}


# ---------------------------------------------------------------------------
# hypergraphs and 2-colorings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Hypergraph3U:
    """3-uniform hypergraph on vertices 0..n-1."""

    n_vertices: int
    edges: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.n_vertices < 0:
            raise InvalidInputError("vertex count must be nonnegative")
        norm = []
        seen = set()
        for e in self.edges:
            t = tuple(sorted(int(v) for v in e))
            if len(set(t)) != 3:
                raise InvalidInputError(f"edge {e} must have 3 distinct vertices")
            if not all(0 <= v < self.n_vertices for v in t):
                raise InvalidInputError(f"edge {e} out of vertex range")
            if t in seen:
                raise InvalidInputError(f"duplicate edge {t}")
            seen.add(t)
            norm.append(t)
        object.__setattr__(self, "edges", tuple(norm))

    @classmethod
    def from_text(cls, text: str) -> "Hypergraph3U":
        """Line 1: ``n m``; then m lines of three 0-based vertex indices."""
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise InvalidInputError("empty hypergraph file")
        try:
            n, m = (int(t) for t in lines[0].split())
            edges = [tuple(int(t) for t in ln.split()) for ln in lines[1:m + 1]]
        except ValueError as exc:
            raise InvalidInputError(f"malformed hypergraph text: {exc}") from exc
        if len(edges) != m:
            raise InvalidInputError("edge count does not match header")
        return cls(n_vertices=n, edges=tuple(edges))

    def to_text(self) -> str:
        out = [f"{self.n_vertices} {len(self.edges)}"]
        out += [" ".join(str(v) for v in e) for e in self.edges]
        return "\n".join(out) + "\n"


def is_proper_coloring(h: Hypergraph3U, colors: Sequence[int]) -> bool:
    return all(len({colors[a], colors[b], colors[c]}) > 1
               for a, b, c in h.edges)


def two_colorings(h: Hypergraph3U, cap: int = COLORING_CAP) -> list[tuple[int, ...]]:
    """Exhaustive list of proper 2-colorings (no monochromatic edge)."""
    if h.n_vertices > cap:
        raise SizeCapError(f"two_colorings capped at {cap} vertices")
    out = []
    for mask in range(1 << h.n_vertices):
        colors = tuple((mask >> v) & 1 for v in range(h.n_vertices))
        if is_proper_coloring(h, colors):
            out.append(colors)
    return out


# ---------------------------------------------------------------------------
# gadget construction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FlipConfiguration:
    """Per vertex line: vertical-flip bit and horizontal-flip bit."""

    vertical: tuple[bool, ...]
    horizontal: tuple[bool, ...]


@dataclass
class _GadgetNode:
    kind: str                   # fixed | line | apex | token
    x: float
    y: float
    owner: int = -1             # hypergraph vertex for line/apex, wire id for token
    plane: int = -1             # canonical hyperplane index


@dataclass
class _Wire:
    edge_index: int
    half: str                   # "A" (left..mid) or "B" (mid..right)
    end_vertices: tuple[int, int]
    end_apexes: tuple[int, int]  # node id of coupled apex, node id of probed apex
    token_ids: tuple[int, ...]
    canonical_sign: int


@dataclass
class GadgetInstance:
    """Generated deployment plus the bookkeeping tying it back to H."""

    hypergraph: Hypergraph3U
    instance: NetworkInstance
    hyperplanes: list[tuple[Hyperplane, str, str]]   # (plane, color, label)
    dim: int = 2
    base_coloring: tuple[int, ...] = ()
    order: tuple[int, ...] = ()                      # vertex per line position
    vertex_line_of: dict[int, int] = field(default_factory=dict)
    edge_line_pair: dict[int, tuple[int, int]] = field(default_factory=dict)
    flag_nodes: dict[tuple[int, int], tuple[int, ...]] = field(default_factory=dict)
    assignment: dict[int, int] = field(default_factory=dict)
    _nodes: list[_GadgetNode] = field(default_factory=list)
    _wires: list[_Wire] = field(default_factory=list)
    _apex_of: dict[tuple[int, int], int] = field(default_factory=dict)
    _side_of: dict[tuple[int, int], int] = field(default_factory=dict)

    def coloring_of(self, config: FlipConfiguration) -> tuple[int, ...]:
        """Vertex colors induced by a configuration: the color of the edge
        line side a vertex line's flags vacate."""
        return tuple(c ^ int(v) for c, v in
                     zip(self.base_coloring, config.vertical))


def _line_x(pos: int) -> float:
    return VSPACE * pos


def _edge_line_y(f: int) -> float:
    return EDGE_Y0 + EDGE_DY * f


def _sign(color: int) -> int:
    # flags of a red vertex sit on the blue (lower) side and vice versa
    return 1 if color == BLUE else -1


def _choose_order(h: Hypergraph3U) -> tuple[int, ...]:
    """Left-to-right layout of the vertex lines.

    Prefers orders where each edge's positionally middle vertex serves as
    the middle of no other edge and as an endpoint of none, keeping its
    horizontal flip free to witness that edge's constraint.
    """
    n = h.n_vertices
    if not h.edges or n > 8:
        return tuple(range(n))
    best, best_score = None, -1
    for perm in itertools.permutations(range(n)):
        pos = {v: i for i, v in enumerate(perm)}
        mids, ends = [], set()
        for e in h.edges:
            by_pos = sorted(e, key=lambda v: pos[v])
            mids.append(by_pos[1])
            ends.update((by_pos[0], by_pos[2]))
        clean = sum(1 for m in mids if mids.count(m) == 1 and m not in ends)
        if clean > best_score:
            best, best_score = perm, clean
            if clean == len(h.edges):
                break
    return tuple(best)


def build_gadget(h: Hypergraph3U) -> GadgetInstance:
    """Materialize the reduction gadget for a capped 3-uniform hypergraph."""
    if h.n_vertices > MAX_VERTICES:
        raise SizeCapError(
            f"gadget capped at {MAX_VERTICES} vertices, got {h.n_vertices}")
    if len(h.edges) > MAX_EDGES:
        raise SizeCapError(
            f"gadget capped at {MAX_EDGES} edges, got {len(h.edges)}")
    if h.n_vertices == 0:
        raise InvalidInputError("hypergraph must have at least one vertex")
    base = None
    for mask in range(1 << h.n_vertices):
        colors = tuple((mask >> v) & 1 for v in range(h.n_vertices))
        if is_proper_coloring(h, colors):
            base = colors
            break
    if base is None:
        raise HyperlocError("capped hypergraph is unexpectedly non-2-colorable")

    order = _choose_order(h)
    pos_of = {v: i for i, v in enumerate(order)}
    x_of = {v: _line_x(pos_of[v]) for v in range(h.n_vertices)}
    x_first = 0.0
    x_last = _line_x(h.n_vertices - 1)

    nodes: list[_GadgetNode] = []
    wires: list[_Wire] = []
    apex_of: dict[tuple[int, int], int] = {}
    side_of: dict[tuple[int, int], int] = {}
    flag_nodes: dict[tuple[int, int], list[int]] = {}

    # hyperplanes: vertex lines, main, support, edge-line pairs
    hyperplanes: list[tuple[Hyperplane, str, str]] = []
    vertex_line_of = {}
    for v in range(h.n_vertices):
        vertex_line_of[v] = len(hyperplanes)
        hyperplanes.append((Hyperplane(normal=(1.0, 0.0), offset=x_of[v]),
                            "black", f"vertex-{v}"))
    main_idx = len(hyperplanes)
    hyperplanes.append((Hyperplane(normal=(0.0, 1.0), offset=0.0),
                        "black", "main"))
    support_idx = len(hyperplanes)
    hyperplanes.append((Hyperplane(normal=(0.0, 1.0), offset=SUPPORT_Y),
                        "black", "support"))
    edge_line_pair = {}
    for f in range(len(h.edges)):
        yf = _edge_line_y(f)
        r_idx = len(hyperplanes)
        hyperplanes.append((Hyperplane(normal=(0.0, 1.0), offset=yf),
                            "red", f"r{f + 1}"))
        b_idx = len(hyperplanes)
        hyperplanes.append((Hyperplane(normal=(0.0, 1.0), offset=-yf),
                            "blue", f"b{f + 1}"))
        edge_line_pair[f] = (r_idx, b_idx)

    def add(kind, x, y, owner=-1, plane=-1) -> int:
        nodes.append(_GadgetNode(kind=kind, x=float(x), y=float(y),
                                 owner=owner, plane=plane))
        return len(nodes) - 1

    # main line: vertex-line feet, thirds fill, and a left extension whose
    # first two interior points pair with the support line into a K4
    main_xs = {x_of[v] for v in range(h.n_vertices)}
    for p in range(h.n_vertices - 1):
        main_xs.add(_line_x(p) + VSPACE / 3.0)
        main_xs.add(_line_x(p) + 2.0 * VSPACE / 3.0)
    left_ext = [x_first - 2.5, x_first - 2.0, x_first - 1.25, x_first - 0.625]
    main_xs.update(left_ext)
    main_xs.update({x_last + VSPACE / 3.0, x_last + 2.0 * VSPACE / 3.0})
    for x in sorted(main_xs):
        add("fixed", x, 0.0, plane=main_idx)
    support_ids = [add("fixed", x_first - 2.0, SUPPORT_Y, plane=support_idx),
                   add("fixed", x_first - 1.25, SUPPORT_Y, plane=support_idx)]

    # vertex lines: symmetric chain from the feet up to a safe height
    chain = [FOOT_Y]
    step = (LOW_FILL_TOP - FOOT_Y) / 3.0
    for k in range(1, 4):
        chain.append(FOOT_Y + step * k)
    for v in range(h.n_vertices):
        for mag in chain:
            for s in (1.0, -1.0):
                add("line", x_of[v], s * mag, owner=v,
                    plane=vertex_line_of[v])

    # flags: one triangle per (vertex, covering edge); the apex vacates the
    # mirror slot, whose color is the vertex color
    roles: dict[tuple[int, int], str] = {}
    edge_members: dict[int, tuple[int, int, int]] = {}
    for fi, e in enumerate(h.edges):
        left, mid, right = sorted(e, key=lambda v: pos_of[v])
        edge_members[fi] = (left, mid, right)
        roles[(left, fi)] = "left"
        roles[(mid, fi)] = "mid"
        roles[(right, fi)] = "right"
    for (v, fi), role in roles.items():
        yf = _edge_line_y(fi)
        sgn = _sign(base[v])
        left, mid, right = edge_members[fi]
        if role == "left":
            side = 1
        elif role == "right":
            side = -1
        else:
            side = -1 if base[mid] != base[left] else 1
        side_of[(v, fi)] = side
        r_idx, b_idx = edge_line_pair[fi]
        apex_plane = r_idx if sgn > 0 else b_idx
        apex = add("apex", x_of[v] + side * APEX_DX, sgn * yf, owner=v,
                   plane=apex_plane)
        apex_of[(v, fi)] = apex
        b1 = add("line", x_of[v], sgn * (yf - BASE_DY), owner=v,
                 plane=vertex_line_of[v])
        b2 = add("line", x_of[v], sgn * (yf + BASE_DY), owner=v,
                 plane=vertex_line_of[v])
        flag_nodes[(v, fi)] = [apex, b1, b2]

    # relay token chains along each edge-line pair between its members
    for fi, (left, mid, right) in edge_members.items():
        yf = _edge_line_y(fi)
        for half, (va, vb) in (("A", (left, mid)), ("B", (mid, right))):
            sgn = _sign(base[va]) if half == "A" else _sign(base[vb])
            x_start = x_of[va] + TOKEN_END
            x_end = x_of[vb] - TOKEN_END
            span = x_end - x_start
            count = max(1, int(np.ceil(span / TOKEN_STEP)) + 1)
            xs = np.linspace(x_start, x_end, count) if span > 0 else [x_start]
            wire_id = len(wires)
            r_idx, b_idx = edge_line_pair[fi]
            plane = r_idx if sgn > 0 else b_idx
            token_ids = tuple(add("token", x, sgn * yf, owner=wire_id,
                                  plane=plane) for x in xs)
            if half == "A":
                coupled, probed = apex_of[(va, fi)], apex_of[(vb, fi)]
            else:
                coupled, probed = apex_of[(vb, fi)], apex_of[(va, fi)]
            wires.append(_Wire(edge_index=fi, half=half,
                               end_vertices=(va, vb),
                               end_apexes=(coupled, probed),
                               token_ids=token_ids, canonical_sign=sgn))

    positions = np.array([(nd.x, nd.y) for nd in nodes])
    edges = udg_edges(np.column_stack([positions, np.zeros(len(nodes))]),
                      RADIUS)
    records = [NodeRecord(id=i, true_pos=(nd.x, nd.y, 0.0),
                          line_group=nd.plane + 1)
               for i, nd in enumerate(nodes)]
    instance = NetworkInstance(records, edges, RADIUS)

    g = GadgetInstance(
        hypergraph=h, instance=instance, hyperplanes=hyperplanes, dim=2,
        base_coloring=base, order=order, vertex_line_of=vertex_line_of,
        edge_line_pair=edge_line_pair,
        flag_nodes={k: tuple(v) for k, v in flag_nodes.items()},
        assignment={i: nd.plane for i, nd in enumerate(nodes)},
        _nodes=nodes, _wires=wires, _apex_of=apex_of, _side_of=side_of)
    _audit_gadget(g)
    return g


def _audit_gadget(g: GadgetInstance) -> None:
    """Build-time checks of the stated geometric constraints."""
    h = g.hypergraph
    n_lines = h.n_vertices
    if n_lines >= 2 and not (2.0 < VSPACE < 3.0):
        raise HyperlocError("vertex-line spacing outside (2, 3)")
    n_horizontal = sum(1 for _, _, label in g.hyperplanes
                       if label in ("main", "support") or label[0] in "rb")
    if n_horizontal != 2 * len(h.edges) + 2:
        raise HyperlocError("horizontal line count is not 2|F| + 2")
    inst = g.instance
    # support K4 with two main-line nodes
    sup = [i for i, nd in enumerate(g._nodes)
           if nd.kind == "fixed" and nd.y == SUPPORT_Y]
    partners = [i for i, nd in enumerate(g._nodes)
                if nd.kind == "fixed" and nd.y == 0.0
                and any(abs(nd.x - g._nodes[s].x) < 1e-9 for s in sup)]
    quad = sup + partners
    if len(quad) != 4 or not all(inst.has_edge(a, b) for a, b
                                 in itertools.combinations(quad, 2)):
        raise HyperlocError("support line does not form a K4 with the main line")
    # main-line chain gaps stay under one unit
    main_xs = sorted(nd.x for nd in g._nodes
                     if nd.kind == "fixed" and nd.y == 0.0)
    if any(b - a > RADIUS for a, b in zip(main_xs, main_xs[1:])):
        raise HyperlocError("main-line nodes are not uniformly distributed")
    # each apex neighbors exactly its two base nodes on the vertex line
    for (v, fi), (apex, b1, b2) in g.flag_nodes.items():
        line_nbrs = [w for w in inst.neighbors(apex)
                     if g._nodes[w].kind == "line"]
        if sorted(line_nbrs) != sorted((b1, b2)):
            raise HyperlocError(
                f"flag apex of vertex {v}, edge {fi} does not neighbor "
                "exactly its two base nodes")
    # coupled chain ends touch their apex, probed ends do not
    for w in g._wires:
        if not inst.has_edge(w.token_ids[0 if w.half == "A" else -1],
                             w.end_apexes[0]):
            raise HyperlocError("chain is not coupled to its endpoint flag")
        if inst.has_edge(w.token_ids[-1 if w.half == "A" else 0],
                         w.end_apexes[1]):
            raise HyperlocError("chain must not touch the probed flag")
    # minimum separation so the 3D lift keeps copies isolated
    pos = inst.positions()
    d = np.linalg.norm(pos[:, None, :] - pos[None, :, :], axis=-1)
    np.fill_diagonal(d, np.inf)
    if d.min() < 0.1:
        raise HyperlocError("node separation too small for the 3D lift")


# ---------------------------------------------------------------------------
# configuration enumeration
# ---------------------------------------------------------------------------

def _config_positions(g: GadgetInstance, config: FlipConfiguration,
                      wire_signs: Sequence[int]) -> np.ndarray:
    """2D node positions implied by per-line flips and per-chain side choices."""
    line_x = {v: _line_x(i) for i, v in enumerate(g.order)}
    pos = np.empty((len(g._nodes), 2))
    for i, nd in enumerate(g._nodes):
        x, y = nd.x, nd.y
        if nd.kind == "line":
            if config.vertical[nd.owner]:
                y = -y
        elif nd.kind == "apex":
            if config.vertical[nd.owner]:
                y = -y
            if config.horizontal[nd.owner]:
                x = 2.0 * line_x[nd.owner] - x
        elif nd.kind == "token":
            y = wire_signs[nd.owner] * abs(y)
        pos[i, 0] = x
        pos[i, 1] = y
    return pos


def _adjacency_of(instance: NetworkInstance) -> np.ndarray:
    want = np.zeros((instance.n, instance.n), dtype=bool)
    for u, v, _ in instance.edges:
        want[u, v] = want[v, u] = True
    return want


def _positions_valid(want: np.ndarray, pts: np.ndarray) -> bool:
    """Exact unit-disk realization check: edges iff within radius."""
    d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)
    np.fill_diagonal(d, np.inf)
    adj = d <= RADIUS + 1e-9
    return bool(np.array_equal(adj, want))


class _ConfigChecker:
    """Compiled pairwise tables driving the 4^|X| enumeration."""

    def __init__(self, g: GadgetInstance):
        self.g = g
        h = g.hypergraph
        self.n = h.n_vertices
        inst = g.instance
        nodes = g._nodes
        self.x_of = {v: _line_x(g.order.index(v)) for v in range(self.n)}

        def apex_pos(aid: int, vstate: int, hstate: int) -> np.ndarray:
            nd = nodes[aid]
            x, y = nd.x, nd.y
            if vstate:
                y = -y
            if hstate:
                x = 2.0 * self.x_of[nd.owner] - x
            return np.array([x, y])

        self._apex_pos = apex_pos
        # consecutive-line apex compatibility tables
        self.pair_tables: list[tuple[int, int, np.ndarray]] = []
        apexes_by_vertex: dict[int, list[int]] = {v: [] for v in range(self.n)}
        for (v, fi), aid in g._apex_of.items():
            apexes_by_vertex[v].append(aid)
        for p in range(self.n - 1):
            va, vb = g.order[p], g.order[p + 1]
            pairs = [(a, b) for a in apexes_by_vertex[va]
                     for b in apexes_by_vertex[vb]]
            if not pairs:
                continue
            table = np.ones((4, 4), dtype=bool)
            for sa, sb in itertools.product(range(4), range(4)):
                ok = True
                for a, b in pairs:
                    pa = apex_pos(a, sa & 1, sa >> 1)
                    pb = apex_pos(b, sb & 1, sb >> 1)
                    within = np.linalg.norm(pa - pb) <= RADIUS + 1e-9
                    if within != inst.has_edge(a, b):
                        ok = False
                        break
                table[sa, sb] = ok
            self.pair_tables.append((va, vb, table))
        # per-chain feasibility tables over both endpoint line states
        self.wire_tables: list[tuple[int, int, np.ndarray]] = []
        for w in g._wires:
            va, vb = w.end_vertices
            fi = w.edge_index
            yf = _edge_line_y(fi)
            txs = np.array([nodes[t].x for t in w.token_ids])
            apex_ids = [g._apex_of[(va, fi)], g._apex_of[(vb, fi)]]
            table = np.zeros((4, 4, 2), dtype=bool)
            for sa, sb, bit in itertools.product(range(4), range(4), range(2)):
                sign = 1 if bit else -1
                tpos = np.column_stack([txs, np.full(len(txs), sign * yf)])
                ok = True
                for aid, state in zip(apex_ids, (sa, sb)):
                    ap = apex_pos(aid, state & 1, state >> 1)
                    dd = np.linalg.norm(tpos - ap, axis=1)
                    for tid, dist in zip(w.token_ids, dd):
                        if (dist <= RADIUS + 1e-9) != inst.has_edge(tid, aid):
                            ok = False
                            break
                    if not ok:
                        break
                table[sa, sb, bit] = ok
            self.wire_tables.append((va, vb, table))

    def wire_signs(self, config: FlipConfiguration) -> list[int] | None:
        signs = []
        for (va, vb, table), w in zip(self.wire_tables, self.g._wires):
            sa = int(config.vertical[va]) | (int(config.horizontal[va]) << 1)
            sb = int(config.vertical[vb]) | (int(config.horizontal[vb]) << 1)
            feas = [bit for bit in (0, 1) if table[sa, sb, bit]]
            if not feas:
                return None
            signs.append(1 if feas[0] else -1)
        return signs

    def plausible(self, config: FlipConfiguration) -> bool:
        for va, vb, table in self.pair_tables:
            sa = int(config.vertical[va]) | (int(config.horizontal[va]) << 1)
            sb = int(config.vertical[vb]) | (int(config.horizontal[vb]) << 1)
            if not table[sa, sb]:
                return False
        return True


def enumerate_groupings(g: GadgetInstance,
                        max_vertices: int = MAX_VERTICES
                        ) -> list[FlipConfiguration]:
    """All flip configurations whose implied placements realize the unit
    disk graph exactly, every node on its assigned line."""
    h = g.hypergraph
    if h.n_vertices > max_vertices:
        raise SizeCapError("configuration enumeration beyond the size cap")
    checker = _ConfigChecker(g)
    want = _adjacency_of(g.instance)
    z = getattr(g, "_lift_z", None)
    valid = []
    n = h.n_vertices
    for bits in range(4 ** n):
        vert = tuple(bool((bits >> (2 * v)) & 1) for v in range(n))
        horiz = tuple(bool((bits >> (2 * v + 1)) & 1) for v in range(n))
        config = FlipConfiguration(vertical=vert, horizontal=horiz)
        if not checker.plausible(config):
            continue
        signs = checker.wire_signs(config)
        if signs is None:
            continue
        pos = _config_positions(g, config, signs)
        if g.dim == 3:
            pts = np.column_stack([np.tile(pos, (2, 1)), z])
        else:
            pts = pos
        if _positions_valid(want, pts):
            valid.append(config)
    return valid


# ---------------------------------------------------------------------------
# equivalence report and 3D lift
# ---------------------------------------------------------------------------

def verify_equivalence(h: Hypergraph3U) -> dict:
    """Brute-force both sides of the reduction and report agreement."""
    colorings = two_colorings(h)
    colorable = bool(colorings)
    g = build_gadget(h)
    configs = enumerate_groupings(g)
    groupable = bool(configs)
    correspondence = [
        {
            "vertical": [int(b) for b in c.vertical],
            "horizontal": [int(b) for b in c.horizontal],
            "coloring": [COLOR_NAMES[ci] for ci in g.coloring_of(c)],
        }
        for c in configs
    ]
    return {
        "colorable": colorable,
        "groupable": groupable,
        "agree": colorable == groupable,
        "n_colorings": len(colorings),
        "n_valid_configs": len(configs),
        "correspondence": correspondence,
    }


def lift_to_3d(g: GadgetInstance) -> GadgetInstance:
    """Copy every node to z = 1; each node is adjacent to its own copy and
    to no other copy, flags become triangle prisms, lines become planes."""
    if g.dim != 2:
        raise InvalidInputError("lift starts from a 2D gadget")
    base = g.instance
    n = base.n
    nodes = []
    for nd in base.nodes:
        x, y, _ = nd.true_pos
        nodes.append(NodeRecord(id=nd.id, true_pos=(x, y, 0.0),
                                line_group=nd.line_group))
    for nd in base.nodes:
        x, y, _ = nd.true_pos
        nodes.append(NodeRecord(id=nd.id + n, true_pos=(x, y, 1.0),
                                line_group=nd.line_group))
    edges = []
    for u, v, d in base.edges:
        edges.append((u, v, d))
        edges.append((u + n, v + n, d))
    for i in range(n):
        edges.append((i, i + n, 1.0))
    inst3 = NetworkInstance(nodes, edges, RADIUS)
    inst3.validate_exact()
    planes3 = [(Hyperplane(normal=(p.normal[0], p.normal[1], 0.0),
                           offset=p.offset), color, label)
               for p, color, label in g.hyperplanes]
    lifted = GadgetInstance(
        hypergraph=g.hypergraph, instance=inst3, hyperplanes=planes3, dim=3,
        base_coloring=g.base_coloring, order=g.order,
        vertex_line_of=g.vertex_line_of, edge_line_pair=g.edge_line_pair,
        flag_nodes=g.flag_nodes, assignment=g.assignment,
        _nodes=g._nodes, _wires=g._wires, _apex_of=g._apex_of,
        _side_of=g._side_of)
    lifted._lift_z = np.concatenate([np.zeros(n), np.ones(n)])  # type: ignore[attr-defined]
    return lifted
