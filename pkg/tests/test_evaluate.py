import numpy as np
import pytest

from hyperloc.errors import InvalidConfigError, TooFewPointsError
from hyperloc.evaluate import (BenchConfig, ScenarioConfig, align_isometry,
                               bench_scaling, random_dense_instance,
                               run_experiment)
from hyperloc.model import PointFormation, make_rng


def formation_from(points):
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    f = PointFormation(pts.shape[1], range(len(pts)))
    for i, p in enumerate(pts):
        f.mark(i, p)
    return f


def brute_force_rmse_2d(a, b, steps=720, rounds=4):
    """Grid-refined search over rotations and reflections, translation
    solved by centroid matching."""
    a = a - a.mean(axis=0)
    bc = b - b.mean(axis=0)
    best = np.inf
    for reflect in (1.0, -1.0):
        ar = a * np.array([1.0, reflect])
        lo, hi = 0.0, 2 * np.pi
        for _ in range(rounds):
            thetas = np.linspace(lo, hi, steps)
            vals = []
            for th in thetas:
                rot = np.array([[np.cos(th), -np.sin(th)],
                                [np.sin(th), np.cos(th)]])
                vals.append(np.sqrt(np.mean(
                    np.sum((ar @ rot.T - bc) ** 2, axis=1))))
            k = int(np.argmin(vals))
            best = min(best, vals[k])
            width = (hi - lo) / steps
            lo, hi = thetas[k] - 2 * width, thetas[k] + 2 * width
    return best


class TestAlignIsometry:
    def test_reflection_gives_zero_rmse(self):
        truth = np.array([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0.3, 0.4, 0.8)])
        mirrored = truth * np.array([-1, 1, 1])
        res = align_isometry(formation_from(mirrored),
                             dict(enumerate(truth)))
        assert res.rmse < 1e-12
        assert np.linalg.det(res.rotation) == pytest.approx(-1.0)

    def test_translation_gives_zero_rmse(self):
        truth = np.array([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
        res = align_isometry(formation_from(truth + np.array([5.0, 0, 0])),
                             dict(enumerate(truth)))
        assert res.rmse < 1e-12

    def test_self_alignment_zero(self):
        rng = make_rng(20)
        pts = rng.standard_normal((8, 3))
        res = align_isometry(formation_from(pts), dict(enumerate(pts)))
        assert res.rmse < 1e-12

    def test_perturbation_bounds(self):
        rng = make_rng(21)
        truth = rng.standard_normal((10, 3))
        noise = rng.standard_normal((10, 3))
        noise *= 1e-3 / np.linalg.norm(noise, axis=1, keepdims=True)
        res = align_isometry(formation_from(truth + noise),
                             dict(enumerate(truth)))
        assert 0.0 < res.rmse <= 1e-3

    def test_too_few_points(self):
        with pytest.raises(TooFewPointsError):
            align_isometry(formation_from([(0, 0, 0), (1, 1, 1)]),
                           {0: (0, 0, 0), 1: (1, 1, 1)})

    def test_matches_brute_force_rotation_search_2d(self):
        rng = make_rng(22)
        for _ in range(5):
            k = int(rng.integers(4, 7))
            a = rng.standard_normal((k, 2))
            b = rng.standard_normal((k, 2))
            res = align_isometry(formation_from(a), dict(enumerate(b)))
            assert res.rmse == pytest.approx(brute_force_rmse_2d(a, b),
                                             abs=1e-6)


class TestRunExperiment:
    def test_flagship_head_to_head(self):
        rep = run_experiment(ScenarioConfig.flagship())
        quad, group = rep.outcomes["quad"], rep.outcomes["group"]
        assert group.localized_fraction == 1.0
        assert group.rmse < 1e-6
        assert quad.error_code == "no-seed" or quad.localized_fraction < 1.0

    def test_dense_scenario_both_accurate(self):
        rep = run_experiment(ScenarioConfig.dense_building())
        for name in ("quad", "group"):
            oc = rep.outcomes[name]
            assert oc.error_code is None
            assert oc.rmse < 1e-6

    def test_seed_repetition_identical(self):
        a = run_experiment(ScenarioConfig.flagship(seed=9))
        b = run_experiment(ScenarioConfig.flagship(seed=9))
        da, db = a.to_json_dict(), b.to_json_dict()
        for rep in (da, db):
            for alg in rep["algorithms"].values():
                alg.pop("wall_time_ms")
        assert da == db

    def test_dense_random_instance_degree_floor(self):
        inst = random_dense_instance(50, seed=4)
        assert 2.0 * inst.m / inst.n >= 10.0


class TestBenchScaling:
    def test_rejects_empty_or_nonpositive(self):
        with pytest.raises(InvalidConfigError):
            bench_scaling(BenchConfig(sizes=()))
        with pytest.raises(InvalidConfigError):
            bench_scaling(BenchConfig(sizes=(0,)))

    def test_small_sweep_columns_deterministic(self):
        cfg = BenchConfig(sizes=(60, 120), algorithms=("group",),
                          timeout_s=60.0)
        rows1 = bench_scaling(cfg)
        rows2 = bench_scaling(cfg)
        cols1 = [(r["n"], r["m"], r["k"], r["r"]) for r in rows1]
        cols2 = [(r["n"], r["m"], r["k"], r["r"]) for r in rows2]
        assert cols1 == cols2
        assert all(r["error"] == "" for r in rows1)
        assert all(r["wall_time_ms"] is not None for r in rows1)
