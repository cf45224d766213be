"""Forbidden-subgraph detection (claw, net) and linear-order extraction.

These operate on the induced subgraph of one collinear group, which on a
valid deployment is a connected unit interval graph and therefore admits a
Hamiltonian path readable off a proper-interval vertex ordering.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInputError, NoHamiltonianPathError, SizeLimitError


class Graph:
    """Small immutable undirected graph keyed by arbitrary integer ids."""

    def __init__(self, nodes: Iterable[int], edges: Iterable[tuple[int, int]]):
        self.nodes = tuple(sorted(set(nodes)))
        idx = {u: i for i, u in enumerate(self.nodes)}
        self._idx = idx
        adj = {u: set() for u in self.nodes}
        seen = set()
        for u, v in edges:
            if u == v or u not in idx or v not in idx:
                raise InvalidInputError(f"bad edge ({u},{v})")
            key = (min(u, v), max(u, v))
            if key in seen:
                continue
            seen.add(key)
            adj[u].add(v)
            adj[v].add(u)
        self.adj = {u: frozenset(s) for u, s in adj.items()}
        self.edges = tuple(sorted(seen))

    @property
    def n(self) -> int:
        return len(self.nodes)

    def degree(self, u: int) -> int:
        return len(self.adj[u])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def adjacency_matrix(self) -> np.ndarray:
        n = self.n
        a = np.zeros((n, n), dtype=bool)
        for u, v in self.edges:
            i, j = self._idx[u], self._idx[v]
            a[i, j] = a[j, i] = True
        return a

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {self.nodes[0]}
        stack = [self.nodes[0]]
        while stack:
            u = stack.pop()
            for v in self.adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == self.n

    @classmethod
    def from_instance(cls, instance, node_ids: Iterable[int] | None = None) -> "Graph":
        ids = set(node_ids) if node_ids is not None \
            else {nd.id for nd in instance.nodes}
        edges = [(u, v) for u, v, _ in instance.edges if u in ids and v in ids]
        return cls(ids, edges)


@dataclass(frozen=True)
class InducedClaw:
    """K_{1,3}: center adjacent to three pairwise non-adjacent leaves."""

    center: int
    leaves: tuple[int, int, int]


@dataclass(frozen=True)
class InducedNet:
    """Triangle with one pendant per triangle vertex, pendants independent."""

    triangle: tuple[int, int, int]
    pendants: tuple[int, int, int]


def find_claw(graph: Graph) -> InducedClaw | None:
    """First induced claw by (center, sorted leaves), or None.

    Vectorized pre-test per center: a claw exists iff the complement of the
    neighborhood contains a triangle.
    """
    a = graph.adjacency_matrix()
    nodes = graph.nodes
    for ci, c in enumerate(nodes):
        nb = np.nonzero(a[ci])[0]
        if len(nb) < 3:
            continue
        comp = ~a[np.ix_(nb, nb)]
        np.fill_diagonal(comp, False)
        # triangle in comp <=> some pair of non-adjacent leaves shares a third
        if not np.any((comp.astype(np.uint8) @ comp.astype(np.uint8)) * comp):
            continue
        for i, j, k in itertools.combinations(range(len(nb)), 3):
            if comp[i, j] and comp[i, k] and comp[j, k]:
                leaves = (nodes[nb[i]], nodes[nb[j]], nodes[nb[k]])
                return InducedClaw(center=c, leaves=leaves)
    return None


def find_net(graph: Graph) -> InducedNet | None:
    """First induced net by (sorted triangle, pendants), or None."""
    a = graph.adjacency_matrix()
    nodes = graph.nodes
    idx = {u: i for i, u in enumerate(nodes)}
    n = graph.n
    for ai in range(n):
        for bi in range(ai + 1, n):
            if not a[ai, bi]:
                continue
            for ci in range(bi + 1, n):
                if not (a[ai, ci] and a[bi, ci]):
                    continue
                tri = (ai, bi, ci)
                cand = []
                ok = True
                for t in tri:
                    others = [o for o in tri if o != t]
                    p = a[t] & ~a[others[0]] & ~a[others[1]]
                    for o in tri:
                        p[o] = False
                    cand.append(np.nonzero(p)[0])
                    if len(cand[-1]) == 0:
                        ok = False
                        break
                if not ok:
                    continue
                for x in cand[0]:
                    for y in cand[1]:
                        if a[x, y] or x == y:
                            continue
                        for z in cand[2]:
                            if z == x or z == y or a[x, z] or a[y, z]:
                                continue
                            return InducedNet(
                                triangle=(nodes[ai], nodes[bi], nodes[ci]),
                                pendants=(nodes[x], nodes[y], nodes[z]))
    return None


# ---------------------------------------------------------------------------
# brute-force oracles
# ---------------------------------------------------------------------------

def claw_oracle(graph: Graph) -> InducedClaw | None:
    """Exhaustive 4-subset scan; first claw by (center, sorted leaves)."""
    best = None
    for quad in itertools.combinations(graph.nodes, 4):
        for c in quad:
            leaves = tuple(sorted(u for u in quad if u != c))
            if all(graph.has_edge(c, u) for u in leaves) and \
                    not any(graph.has_edge(u, v)
                            for u, v in itertools.combinations(leaves, 2)):
                key = (c, leaves)
                if best is None or key < best:
                    best = key
    if best is None:
        return None
    return InducedClaw(center=best[0], leaves=best[1])


def net_oracle(graph: Graph) -> InducedNet | None:
    """Exhaustive 6-subset scan; first net by (triangle, pendants)."""
    nodes = graph.nodes
    idx = {u: i for i, u in enumerate(nodes)}
    bits = []
    for u in nodes:
        b = 0
        for v in graph.adj[u]:
            b |= 1 << idx[v]
        bits.append(b)
    best = None
    for six in itertools.combinations(range(len(nodes)), 6):
        for tri in itertools.combinations(six, 3):
            a, b, c = tri
            if not (bits[a] >> b) & 1 or not (bits[a] >> c) & 1 \
                    or not (bits[b] >> c) & 1:
                continue
            rest = [u for u in six if u not in tri]
            for pend in itertools.permutations(rest):
                x, y, z = pend
                if (bits[x] >> a) & 1 and not (bits[x] >> b) & 1 \
                        and not (bits[x] >> c) & 1 \
                        and (bits[y] >> b) & 1 and not (bits[y] >> a) & 1 \
                        and not (bits[y] >> c) & 1 \
                        and (bits[z] >> c) & 1 and not (bits[z] >> a) & 1 \
                        and not (bits[z] >> b) & 1 \
                        and not (bits[x] >> y) & 1 and not (bits[x] >> z) & 1 \
                        and not (bits[y] >> z) & 1:
                    key = (tri, pend)
                    if best is None or key < best:
                        best = key
    if best is None:
        return None
    tri, pend = best
    return InducedNet(triangle=tuple(nodes[i] for i in tri),
                      pendants=tuple(nodes[i] for i in pend))


def hamiltonian_oracle(graph: Graph) -> list[int] | None:
    """Exhaustive Hamiltonian path search, lexicographically smallest.

    Capped at n <= 12; raises a size-limit error beyond that.
    """
    if graph.n > 12:
        raise SizeLimitError(f"hamiltonian_oracle capped at n=12, got {graph.n}")
    if graph.n == 0:
        return []
    if graph.n == 1:
        return [graph.nodes[0]]
    n = graph.n
    nodes = graph.nodes
    adj_bits = []
    idx = {u: i for i, u in enumerate(nodes)}
    for u in nodes:
        bits = 0
        for v in graph.adj[u]:
            bits |= 1 << idx[v]
        adj_bits.append(bits)
    dead: set[tuple[int, int]] = set()

    def dfs(last: int, mask: int, path: list[int]) -> list[int] | None:
        if mask == (1 << n) - 1:
            return path
        if (last, mask) in dead:
            return None
        nxt = adj_bits[last] & ~mask
        while nxt:
            b = nxt & -nxt
            nxt ^= b
            v = b.bit_length() - 1
            res = dfs(v, mask | b, path + [v])
            if res is not None:
                return res
        dead.add((last, mask))
        return None

    for start in range(n):
        res = dfs(start, 1 << start, [start])
        if res is not None:
            return [nodes[i] for i in res]
    return None


# ---------------------------------------------------------------------------
# proper-interval ordering via three LBFS sweeps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearOrder:
    """A Hamiltonian path of a group's induced subgraph."""

    sequence: tuple[int, ...]


def _lbfs(graph: Graph, start: int, tie_order: Sequence[int] | None) -> list[int]:
    """Lexicographic BFS; ties broken by latest position in ``tie_order``
    (LBFS+), falling back to smallest id."""
    if tie_order is None:
        prio = {u: -u for u in graph.nodes}
    else:
        prio = {u: i for i, u in enumerate(tie_order)}
    label: dict[int, list[int]] = {u: [] for u in graph.nodes}
    visited: set[int] = set()
    order = []
    remaining = set(graph.nodes)
    current = start
    for step in range(graph.n):
        if step == 0:
            u = start
        else:
            best = None
            for v in remaining:
                key = (label[v], prio[v])
                if best is None or key > best[0]:
                    best = (key, v)
            u = best[1]
        order.append(u)
        visited.add(u)
        remaining.discard(u)
        stamp = graph.n - step
        for w in graph.adj[u]:
            if w not in visited:
                label[w].append(stamp)
    return order


def unit_interval_order(graph: Graph) -> LinearOrder:
    """Hamiltonian path consistent with a 1D realization of the graph.

    Runs the standard three-sweep lexicographic BFS to produce a
    proper-interval vertex ordering, then validates that consecutive
    vertices are adjacent. The validation, not the sweep, is the contract:
    failure signals the group is not a realizable collinear group.
    """
    if graph.n == 0:
        raise InvalidInputError("empty graph")
    if not graph.is_connected():
        raise InvalidInputError("group subgraph must be connected")
    if graph.n == 1:
        return LinearOrder(sequence=(graph.nodes[0],))
    s1 = _lbfs(graph, graph.nodes[0], None)
    s2 = _lbfs(graph, s1[-1], s1)
    s3 = _lbfs(graph, s2[-1], s2)
    seq = list(s3)
    for a, b in zip(seq, seq[1:]):
        if not graph.has_edge(a, b):
            raise NoHamiltonianPathError(
                f"ordering breaks at ({a},{b}); no monotone 1D order found")
    if seq[0] > seq[-1]:
        seq.reverse()
    return LinearOrder(sequence=tuple(seq))
