"""Isometry-aware accuracy metrics, experiment runner, scaling benchmarks."""

from __future__ import annotations

import multiprocessing
import time
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import HyperlocError, InvalidConfigError, TooFewPointsError
from .grouploc import hierarchical_localize
from .model import (BuildingConfig, NetworkInstance, PointFormation,
                    build_udg, flagship_building_config, generate_building,
                    make_rng, strip_ground_truth)
from .quadloc import quadrilaterate


@dataclass(frozen=True)
class AlignmentResult:
    """Optimal rigid alignment (reflections allowed) of a formation onto truth."""

    rotation: np.ndarray
    translation: np.ndarray
    rmse: float
    residuals: dict[int, float]

    def apply(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return pts @ self.rotation.T + self.translation


def align_isometry(formation: PointFormation,
                   truth: Mapping[int, Sequence[float]] | NetworkInstance
                   ) -> AlignmentResult:
    """Least-squares orthogonal alignment over commonly localized nodes.

    Centroid subtraction plus SVD of the cross-covariance; the orthogonal
    factor may be a reflection, matching the sign ambiguity of anchor-free
    localization.
    """
    if isinstance(truth, NetworkInstance):
        truth = {nd.id: nd.true_pos for nd in truth.nodes
                 if nd.true_pos is not None}
    d = formation.dim
    ids = [u for u in formation.localized_ids() if u in truth]
    if len(ids) < d + 1:
        raise TooFewPointsError(
            f"need at least {d + 1} common localized nodes, got {len(ids)}")
    a = formation.array(ids)
    b = np.array([np.asarray(truth[u], dtype=float)[:d] for u in ids])
    ca, cb = a.mean(axis=0), b.mean(axis=0)
    h = (a - ca).T @ (b - cb)
    u, _, vt = np.linalg.svd(h)
    rot = (u @ vt).T
    t = cb - rot @ ca
    mapped = a @ rot.T + t
    res = np.linalg.norm(mapped - b, axis=1)
    return AlignmentResult(rotation=rot, translation=t,
                           rmse=float(np.sqrt(np.mean(res ** 2))),
                           residuals={uid: float(r) for uid, r in zip(ids, res)})


# ---------------------------------------------------------------------------
# scenarios
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScenarioConfig:
    """One experiment scenario: a generated instance plus algorithms to run."""

    name: str = "scenario"
    kind: str = "building"
    building: BuildingConfig | None = None
    n: int = 50
    target_degree: float = 35.0
    seed: int = 0
    algorithms: tuple[str, ...] = ("quad", "group")

    @classmethod
    def flagship(cls, seed: int = 42) -> "ScenarioConfig":
        return cls(name="flagship-3floor", kind="building",
                   building=flagship_building_config(seed), seed=seed)

    @classmethod
    def dense_building(cls, seed: int = 7) -> "ScenarioConfig":
        # two floors: dense enough that seed propagation reaches every node
        cfg = BuildingConfig(floors=2, floor_spacing=0.8, corridors_per_floor=4,
                             node_spacing=0.45, radius=1.0,
                             connector_columns=((3.6, 0.675),), rng_seed=seed,
                             corridor_spacing=0.45, extent=5.4, stagger=True)
        return cls(name="dense-building", kind="building", building=cfg,
                   seed=seed)

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "ScenarioConfig":
        kwargs = dict(data)
        if "building" in kwargs and kwargs["building"] is not None:
            kwargs["building"] = BuildingConfig.from_json_dict(kwargs["building"])
        if "algorithms" in kwargs:
            kwargs["algorithms"] = tuple(kwargs["algorithms"])
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise InvalidConfigError(f"bad scenario config: {exc}") from exc


def random_dense_instance(n: int, target_degree: float = 35.0,
                          seed: int = 0) -> NetworkInstance:
    """Dense random 3D deployment with unit radius.

    Box side chosen so the expected degree hits the target; resamples until
    the minimum degree is 5, the average degree is at least 10 and the
    graph is connected (instance-level preconditions, not outcome checks).
    """
    rng = make_rng(seed)
    side = (n * 4.0 / 3.0 * np.pi / target_degree) ** (1.0 / 3.0)
    for _ in range(200):
        pts = rng.uniform(0.0, side, size=(n, 3))
        inst = build_udg(pts, 1.0)
        deg = np.zeros(n, dtype=int)
        for u, v, _ in inst.edges:
            deg[u] += 1
            deg[v] += 1
        if deg.min() < 5 or 2.0 * inst.m / n < 10.0:
            continue
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in inst.neighbors(u):
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        if len(seen) == n:
            return inst
    raise InvalidConfigError("could not sample a dense connected instance")


def build_scenario_instance(config: ScenarioConfig) -> NetworkInstance:
    if config.kind == "building":
        bc = config.building or flagship_building_config(config.seed)
        return generate_building(bc)
    if config.kind == "dense_random":
        return random_dense_instance(config.n, config.target_degree, config.seed)
    raise InvalidConfigError(f"unknown scenario kind {config.kind!r}")


# ---------------------------------------------------------------------------
# experiment runner
# ---------------------------------------------------------------------------

@dataclass
class AlgorithmOutcome:
    localized_fraction: float = 0.0
    rmse: float | None = None
    wall_time_ms: float = 0.0
    error_code: str | None = None


@dataclass
class ExperimentReport:
    scenario: str
    n: int
    m: int
    k: int
    r: int
    outcomes: dict[str, AlgorithmOutcome] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "instance": {"n": self.n, "m": self.m, "k": self.k, "r": self.r},
            "algorithms": {
                name: {
                    "localized_fraction": oc.localized_fraction,
                    "rmse": oc.rmse,
                    "wall_time_ms": oc.wall_time_ms,
                    "error": oc.error_code,
                } for name, oc in self.outcomes.items()
            },
        }

    def csv_rows(self) -> list[str]:
        rows = []
        for name, oc in self.outcomes.items():
            rmse = "" if oc.rmse is None else f"{oc.rmse:.3e}"
            err = oc.error_code or ""
            rows.append(f"{self.scenario},{name},{self.n},{self.m},{self.k},"
                        f"{self.r},{oc.localized_fraction:.6f},{rmse},"
                        f"{oc.wall_time_ms:.3f},{err}")
        return rows


CSV_HEADER = "scenario,algo,n,m,k,r,localized_fraction,rmse,wall_time_ms,error"


def run_algorithm(name: str, instance: NetworkInstance) -> PointFormation:
    stripped = strip_ground_truth(instance)
    if name == "quad":
        return quadrilaterate(stripped).formation
    if name == "group":
        return hierarchical_localize(stripped).formation
    raise InvalidConfigError(f"unknown algorithm {name!r}")


def run_experiment(config: ScenarioConfig) -> ExperimentReport:
    """Generate, strip, run each algorithm, align against hidden truth."""
    instance = build_scenario_instance(config)
    k = len(instance.plane_group_ids())
    r = len(instance.line_group_ids())
    report = ExperimentReport(scenario=config.name, n=instance.n,
                              m=instance.m, k=k, r=r)
    for name in config.algorithms:
        outcome = AlgorithmOutcome()
        t0 = time.monotonic()
        try:
            formation = run_algorithm(name, instance)
            outcome.localized_fraction = formation.localized_fraction()
            if len(formation.localized_ids()) >= formation.dim + 1:
                outcome.rmse = align_isometry(formation, instance).rmse
        except HyperlocError as exc:
            outcome.error_code = exc.code
        outcome.wall_time_ms = (time.monotonic() - t0) * 1e3
        report.outcomes[name] = outcome
    return report


# ---------------------------------------------------------------------------
# scaling benchmark
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BenchConfig:
    sizes: tuple[int, ...] = (100, 200, 400, 800)
    floors: int = 3
    corridors_per_floor: int = 4
    algorithms: tuple[str, ...] = ("group", "quad")
    seed: int = 0
    timeout_s: float = 60.0
    jobs: int = 1


def _bench_building(n_target: int, floors: int, corridors: int,
                    seed: int) -> BuildingConfig:
    per_corridor = max(2, round(n_target / (floors * corridors)))
    extent = (per_corridor - 1) * 0.9
    return BuildingConfig(floors=floors, floor_spacing=0.8,
                          corridors_per_floor=corridors, node_spacing=0.9,
                          radius=1.0,
                          connector_columns=((round(extent / 2 / 0.9) * 0.9, 0.675),),
                          rng_seed=seed, corridor_spacing=0.45, extent=extent,
                          stagger=True)


def _timed_run(payload) -> float:
    name, instance = payload
    run_algorithm(name, instance)  # warm-up discarded
    t0 = time.monotonic()
    try:
        run_algorithm(name, instance)
    except HyperlocError:
        pass
    return (time.monotonic() - t0) * 1e3


def _bench_row(name: str, instance: NetworkInstance, k: int, r: int,
               timeout_s: float) -> dict:
    """One timed run in a worker process so a timeout can kill it."""
    row = {"n": instance.n, "m": instance.m, "k": k, "r": r,
           "algo": name, "wall_time_ms": None, "error": ""}
    ctx = multiprocessing.get_context("fork")
    with ctx.Pool(processes=1) as pool:
        async_res = pool.apply_async(_timed_run, ((name, instance),))
        try:
            row["wall_time_ms"] = async_res.get(timeout=timeout_s)
        except multiprocessing.TimeoutError:
            pool.terminate()
            row["error"] = "timeout"
        except HyperlocError as exc:
            row["error"] = exc.code
    return row


def bench_scaling(config: BenchConfig) -> list[dict]:
    """Wall-time sweep over instance sizes; per-run timeouts are recorded,
    not fatal. Returns one row per (size, algorithm)."""
    if not config.sizes or min(config.sizes) <= 0:
        raise InvalidConfigError("bench sizes must be positive")
    tasks = []
    for size in config.sizes:
        bc = _bench_building(size, config.floors, config.corridors_per_floor,
                             config.seed)
        instance = generate_building(bc)
        k = len(instance.plane_group_ids())
        r = len(instance.line_group_ids())
        for name in config.algorithms:
            tasks.append((name, instance, k, r, config.timeout_s))
    if config.jobs > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            return list(pool.map(lambda t: _bench_row(*t), tasks))
    return [_bench_row(*t) for t in tasks]


def bench_rows_to_csv(rows: Sequence[Mapping]) -> list[str]:
    out = ["n,m,k,r,algo,wall_time_ms,error"]
    for row in rows:
        wt = "" if row["wall_time_ms"] is None else f"{row['wall_time_ms']:.3f}"
        out.append(f"{row['n']},{row['m']},{row['k']},{row['r']},"
                   f"{row['algo']},{wt},{row['error']}")
    return out
