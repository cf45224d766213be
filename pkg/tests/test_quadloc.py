import itertools

import numpy as np
import pytest

from hyperloc.errors import (DegenerateAnchorsError, DegenerateDistancesError,
                             InconsistentDistancesError, NoSeedError)
from hyperloc.evaluate import random_dense_instance
from hyperloc.model import (BuildingConfig, build_udg, generate_building,
                            make_rng, strip_ground_truth)
from hyperloc.quadloc import (cayley_menger, find_seed_k4, multilaterate,
                              place_seed, quadrilaterate, solve_spheres)


def regular_tetra_dists():
    d = np.ones((4, 4))
    np.fill_diagonal(d, 0.0)
    return d


class TestFindSeedK4:
    def test_regular_tetrahedron(self):
        pts = [(0, 0, 0), (1, 0, 0), (0.5, np.sqrt(3) / 2, 0),
               (0.5, np.sqrt(3) / 6, np.sqrt(6) / 3)]
        seed = find_seed_k4(build_udg(pts, 1.0))
        assert seed.vertices == (0, 1, 2, 3)
        assert seed.volume() > 1e-3

    def test_coplanar_floor_has_none(self):
        cfg = BuildingConfig(floors=1, corridors_per_floor=3, node_spacing=0.9,
                             corridor_spacing=0.45, extent=3.6)
        inst = generate_building(cfg)
        assert find_seed_k4(inst) is None

    def test_random_dense_membership_and_volume(self):
        inst = random_dense_instance(50, seed=3)
        seed = find_seed_k4(inst)
        assert seed is not None
        for a, b in itertools.combinations(seed.vertices, 2):
            assert inst.has_edge(a, b)
        # independent determinant evaluation of the realized volume
        p = seed.positions
        vol = abs(np.linalg.det(np.stack([p[1] - p[0], p[2] - p[0],
                                          p[3] - p[0]]))) / 6.0
        d2 = np.zeros((4, 4))
        for i, j in itertools.combinations(range(4), 2):
            d2[i, j] = d2[j, i] = inst.dist(seed.vertices[i],
                                            seed.vertices[j]) ** 2
        assert cayley_menger(d2) == pytest.approx(288.0 * vol ** 2, rel=1e-6)


class TestPlaceSeed:
    def test_regular_tetrahedron_canonical(self):
        p = place_seed(regular_tetra_dists())
        expected = np.array([[0, 0, 0], [1, 0, 0],
                             [0.5, np.sqrt(3) / 2, 0],
                             [0.5, np.sqrt(3) / 6, np.sqrt(6) / 3]])
        assert np.allclose(p, expected, atol=1e-12)

    def test_coplanar_distances_rejected(self):
        pts = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0.0]])
        d = np.linalg.norm(pts[:, None] - pts[None, :], axis=-1)
        with pytest.raises(DegenerateDistancesError):
            place_seed(d)

    def test_random_points_reproduced_isometrically(self):
        rng = make_rng(9)
        for _ in range(20):
            pts = rng.standard_normal((4, 3))
            d = np.linalg.norm(pts[:, None] - pts[None, :], axis=-1)
            if cayley_menger(d ** 2) / max(d.max(), 1e-9) ** 6 < 1e-6:
                continue
            p = place_seed(d)
            got = np.linalg.norm(p[:, None] - p[None, :], axis=-1)
            assert np.max(np.abs(got - d)) < 1e-9
            assert p[3, 2] > 0 and p[2, 1] > 0


class TestMultilaterate:
    def test_algebraic_example(self):
        anchors = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
        dists = [np.sqrt(3), np.sqrt(2), np.sqrt(2), np.sqrt(2)]
        assert multilaterate(anchors, dists) == pytest.approx((1, 1, 1))

    def test_coplanar_anchors_rejected(self):
        anchors = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)]
        with pytest.raises(DegenerateAnchorsError):
            multilaterate(anchors, [0.5, 0.5, 0.5, 0.5])

    def test_round_trip_five_anchors(self):
        rng = make_rng(10)
        for _ in range(25):
            anchors = rng.standard_normal((5, 3))
            hidden = rng.standard_normal(3)
            dists = np.linalg.norm(anchors - hidden, axis=1)
            assert np.linalg.norm(multilaterate(anchors, dists) - hidden) < 1e-9

    def test_inconsistent_distances(self):
        anchors = np.array([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)], float)
        with pytest.raises(InconsistentDistancesError):
            multilaterate(anchors, [3.0, 2.9, 2.9, 0.1])

    def test_sphere_pair_candidates(self):
        sol = solve_spheres(np.array([[0.0, 0], [2, 0]]),
                            np.array([np.sqrt(2), np.sqrt(2)]))
        assert sorted(tuple(np.round(s, 9)) for s in sol) == [(1, -1), (1, 1)]


class TestQuadrilaterate:
    def test_dense_instance_fully_localized(self):
        from hyperloc.evaluate import align_isometry
        inst = random_dense_instance(50, seed=0)
        assert 2.0 * inst.m / inst.n >= 10.0
        trace = quadrilaterate(strip_ground_truth(inst))
        assert trace.formation.localized_fraction() == 1.0
        assert align_isometry(trace.formation, inst).rmse < 1e-6

    def test_sparse_building_fails_or_partial(self):
        from hyperloc.model import flagship_building_config
        inst = generate_building(flagship_building_config())
        try:
            trace = quadrilaterate(strip_ground_truth(inst))
            assert trace.localized_count < inst.n
        except NoSeedError:
            pass

    def test_lone_tetrahedron(self):
        pts = [(0, 0, 0), (1, 0, 0), (0.5, np.sqrt(3) / 2, 0),
               (0.5, np.sqrt(3) / 6, np.sqrt(6) / 3)]
        trace = quadrilaterate(build_udg(pts, 1.0))
        assert trace.localized_count == 4
        assert all(a == () for _, _, a in trace.steps)

    def test_no_seed_error(self):
        inst = build_udg([(0, 0, 0), (0.5, 0, 0), (1.0, 0, 0)], 1.0)
        with pytest.raises(NoSeedError):
            quadrilaterate(inst)

    def test_distance_consistency_and_causality(self):
        inst = random_dense_instance(50, seed=1)
        trace = quadrilaterate(strip_ground_truth(inst))
        f = trace.formation
        for u, v, d in inst.edges:
            if f.is_localized(u) and f.is_localized(v):
                got = np.linalg.norm(f.position(u) - f.position(v))
                assert abs(got - d) < 1e-8
        placed = []
        for u, _, anchors in trace.steps:
            assert all(a in placed for a in anchors)
            placed.append(u)

    def test_termination_smoke_large_sparse(self):
        cfg = BuildingConfig(floors=3, floor_spacing=0.8, corridors_per_floor=4,
                             node_spacing=0.9, corridor_spacing=0.45,
                             extent=0.9 * 41, connector_columns=((18.0, 0.675),),
                             stagger=True)
        inst = generate_building(cfg)
        assert inst.n >= 500
        trace = quadrilaterate(strip_ground_truth(inst))
        assert 0 <= trace.localized_count <= inst.n
