import numpy as np
import pytest

from hyperloc.errors import (InvalidInputError, NoHamiltonianPathError,
                             SizeLimitError)
from hyperloc.intervals import (Graph, claw_oracle, find_claw, find_net,
                                hamiltonian_oracle, net_oracle,
                                unit_interval_order)
from hyperloc.model import build_udg, make_rng


def random_unit_interval_graph(rng, n):
    gaps = rng.uniform(0.15, 0.95, n - 1)
    xs = np.concatenate([[0.0], np.cumsum(gaps)])
    return Graph.from_instance(build_udg(xs[:, None], 1.0))


def random_graph(rng, n, p):
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)
             if rng.random() < p]
    return Graph(range(n), edges)


NET = Graph(range(6), [(0, 1), (1, 2), (0, 2), (0, 3), (1, 4), (2, 5)])


class TestFindClaw:
    def test_star(self):
        claw = find_claw(Graph(range(4), [(0, 1), (0, 2), (0, 3)]))
        assert claw.center == 0 and claw.leaves == (1, 2, 3)

    def test_path4_has_none(self):
        assert find_claw(Graph(range(4), [(0, 1), (1, 2), (2, 3)])) is None

    def test_unit_interval_graphs_claw_free(self):
        rng = make_rng(2)
        for _ in range(25):
            assert find_claw(random_unit_interval_graph(rng, 30)) is None

    def test_oracle_confirms_claw_free_n30(self):
        g = random_unit_interval_graph(make_rng(21), 30)
        assert find_claw(g) is None and claw_oracle(g) is None

    def test_matches_oracle_on_random_graphs(self):
        rng = make_rng(3)
        for _ in range(40):
            g = random_graph(rng, int(rng.integers(4, 14)), 0.35)
            assert find_claw(g) == claw_oracle(g)


class TestFindNet:
    def test_canonical_net_found(self):
        net = find_net(NET)
        assert net.triangle == (0, 1, 2)
        assert net.pendants == (3, 4, 5)

    def test_triangle_too_small(self):
        assert find_net(Graph(range(3), [(0, 1), (1, 2), (0, 2)])) is None

    def test_unit_interval_graphs_net_free(self):
        rng = make_rng(4)
        for _ in range(25):
            assert find_net(random_unit_interval_graph(rng, 30)) is None

    def test_oracle_confirms_net_free_n30(self):
        g = random_unit_interval_graph(make_rng(22), 30)
        assert find_net(g) is None and net_oracle(g) is None

    def test_matches_oracle_on_random_graphs(self):
        rng = make_rng(5)
        for _ in range(30):
            g = random_graph(rng, int(rng.integers(6, 12)), 0.4)
            assert find_net(g) == net_oracle(g)


class TestUnitIntervalOrder:
    def test_path(self):
        order = unit_interval_order(Graph([0, 1, 2], [(0, 1), (1, 2)]))
        assert order.sequence == (0, 1, 2)

    def test_collinear_deployment_sorted(self):
        inst = build_udg(np.array([0, 0.4, 0.8, 1.2, 1.6])[:, None], 1.0)
        g = Graph.from_instance(inst)
        order = unit_interval_order(g)
        assert order.sequence == (0, 1, 2, 3, 4)
        assert hamiltonian_oracle(g) is not None

    def test_claw_raises(self):
        with pytest.raises(NoHamiltonianPathError):
            unit_interval_order(Graph(range(4), [(0, 1), (0, 2), (0, 3)]))

    def test_disconnected_rejected(self):
        with pytest.raises(InvalidInputError):
            unit_interval_order(Graph(range(4), [(0, 1), (2, 3)]))

    def test_vertices_appear_once_and_consecutive_adjacent(self):
        rng = make_rng(6)
        for _ in range(50):
            g = random_unit_interval_graph(rng, int(rng.integers(2, 40)))
            seq = unit_interval_order(g).sequence
            assert sorted(seq) == list(g.nodes)
            assert all(g.has_edge(a, b) for a, b in zip(seq, seq[1:]))


class TestHamiltonianOracle:
    def test_triangle_lex_smallest(self):
        assert hamiltonian_oracle(
            Graph(range(3), [(0, 1), (1, 2), (0, 2)])) == [0, 1, 2]

    def test_claw_none(self):
        assert hamiltonian_oracle(
            Graph(range(4), [(0, 1), (0, 2), (0, 3)])) is None

    def test_size_cap(self):
        g = Graph(range(13), [(i, i + 1) for i in range(12)])
        with pytest.raises(SizeLimitError):
            hamiltonian_oracle(g)

    def test_connected_unit_interval_always_has_path(self):
        rng = make_rng(7)
        for _ in range(60):
            g = random_unit_interval_graph(rng, int(rng.integers(2, 11)))
            path = hamiltonian_oracle(g)
            assert path is not None
            assert all(g.has_edge(a, b) for a, b in zip(path, path[1:]))

    def test_order_agrees_with_oracle_feasibility(self):
        rng = make_rng(8)
        for _ in range(40):
            g = random_unit_interval_graph(rng, int(rng.integers(2, 11)))
            if hamiltonian_oracle(g) is not None:
                unit_interval_order(g)  # must not raise
