"""Seeded, parallel Monte Carlo orchestration for sweep points and sweeps.

Drops are the unit of parallelism.  Each drop derives all of its random
streams from (master_seed, point_id, drop_index, tag), so results are
bit-identical for any worker count and any execution order; aggregation is
an ordered fold over drop indices.
"""

from __future__ import annotations

import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import streams
from .association import analytical_active_density, build_schedule
from .config import (ConfigError, DEPLOYMENT_HEXAGONAL, EngineParams,
                     ScenarioConfig, SweepSpec)
from .kernels import associate_scan, link_rows
from .metrics import (CoverageEstimate, SweepPointResult, coverage_from_counts,
                      estimate_active_density, reliable_ue_density)
from .propagation import draw_shadow_fields, k_factor_linear, sample_fading_powers
from .scenario import generate_hexagonal, resolve_region, sample_hppp
from .uplink import compute_uplink_sinrs

_SCAN_CHUNK = 65536


@dataclass(frozen=True)
class SweepPoint:
    bs_density: float
    deployment: str
    variant: str
    antenna_height_diff: float  # meters


@dataclass(frozen=True)
class DropResult:
    drop_index: int
    n_bs: int
    n_ue: int
    n_active: int
    area_km2: float
    sinr_db: np.ndarray  # one sample per active BS


def _empty_samples() -> np.ndarray:
    return np.empty(0, dtype=np.float64)


def run_drop(cfg: ScenarioConfig, point: SweepPoint, point_id: int,
             drop_index: int) -> DropResult:
    """One Monte Carlo drop: deploy, realize links, associate, schedule, SINR."""
    region = resolve_region(point.bs_density, cfg.ue_density, cfg.region_policy)
    seed = cfg.master_seed

    if point.deployment == DEPLOYMENT_HEXAGONAL:
        rng_off = streams.substream(seed, point_id, drop_index, streams.TAG_HEX_OFFSET)
        offset = tuple(rng_off.random(2) * region.side_km)
        bs_xy = generate_hexagonal(point.bs_density, region, offset)
    else:
        rng_bs = streams.substream(seed, point_id, drop_index, streams.TAG_BS_POSITIONS)
        bs_xy = sample_hppp(point.bs_density, region, rng_bs)

    rng_ue = streams.substream(seed, point_id, drop_index, streams.TAG_UE_POSITIONS)
    ue_xy = sample_hppp(cfg.ue_density, region, rng_ue)

    n_bs = bs_xy.shape[0]
    n_ue = ue_xy.shape[0]
    if n_bs == 0 or n_ue == 0:
        return DropResult(drop_index, n_bs, n_ue, 0, region.area_km2, _empty_samples())

    rng_shadow = streams.substream(seed, point_id, drop_index, streams.TAG_SHADOW)
    shadow = draw_shadow_fields(n_ue, n_bs, cfg.shadow, point.variant, rng_shadow)
    los_key = streams.los_pair_key(seed, point_id, drop_index)

    serving, serving_ln_gain = _associate_all(
        bs_xy, ue_xy, region.side_km, point.antenna_height_diff,
        cfg, shadow, los_key)

    rng_sched = streams.substream(seed, point_id, drop_index, streams.TAG_SCHEDULING)
    schedule = build_schedule(serving, n_bs, rng_sched)
    n_active = schedule.active_bs.size
    if n_active == 0:
        return DropResult(drop_index, n_bs, n_ue, 0, region.area_km2, _empty_samples())

    gains, w_km, los = _scheduled_links(
        bs_xy, ue_xy, region.side_km, point.antenna_height_diff,
        cfg, shadow, los_key, schedule.scheduled_ue, schedule.active_bs)

    rng_fading = streams.substream(seed, point_id, drop_index, streams.TAG_FADING)
    fading = sample_fading_powers(los, k_factor_linear(w_km), point.variant, rng_fading)
    samples = compute_uplink_sinrs(gains, fading, cfg.pc, cfg.noise_dbm)
    sinr_db = 10.0 * np.log10(samples.sinr_linear)
    return DropResult(drop_index, n_bs, n_ue, n_active, region.area_km2, sinr_db)


def _kernel_shadow_args(cfg: ScenarioConfig, shadow):
    if shadow.enabled:
        return (shadow.s_ue_db, shadow.s_bs_db,
                np.sqrt(shadow.tau), np.sqrt(1.0 - shadow.tau),
                True, float(shadow.s_bs_db.max()))
    zero = np.zeros(1)
    return zero, zero, 0.0, 0.0, False, 0.0


def _associate_all(bs_xy, ue_xy, side_km, l_m, cfg, shadow, los_key):
    pl = cfg.pathloss
    n_ue = ue_xy.shape[0]
    serving = np.empty(n_ue, dtype=np.int64)
    serving_ln_gain = np.empty(n_ue, dtype=np.float64)
    bs_x = np.ascontiguousarray(bs_xy[:, 0])
    bs_y = np.ascontiguousarray(bs_xy[:, 1])
    l2 = (l_m / 1000.0) ** 2
    d1_km2 = (pl.d1_m / 1000.0) ** 2
    s_ue, s_bs, sq_tau, sq_1m_tau, use_shadow, s_bs_max = _kernel_shadow_args(cfg, shadow)
    for start in range(0, n_ue, _SCAN_CHUNK):
        stop = min(start + _SCAN_CHUNK, n_ue)
        associate_scan(
            bs_x, bs_y,
            np.ascontiguousarray(ue_xy[start:stop, 0]),
            np.ascontiguousarray(ue_xy[start:stop, 1]),
            start, side_km, l2,
            np.log(pl.a_los), np.log(pl.a_nlos), pl.alpha_los, pl.alpha_nlos,
            pl.r1_m, pl.r2_m, d1_km2, np.uint64(los_key),
            s_ue[start:stop] if use_shadow else s_ue, s_bs,
            sq_tau, sq_1m_tau, use_shadow, s_bs_max,
            serving[start:stop], serving_ln_gain[start:stop])
    return serving, serving_ln_gain


def _scheduled_links(bs_xy, ue_xy, side_km, l_m, cfg, shadow, los_key,
                     scheduled_ue, active_bs):
    pl = cfg.pathloss
    n = scheduled_ue.size
    gains = np.empty((n, n), dtype=np.float64)
    w_km = np.empty((n, n), dtype=np.float64)
    los = np.empty((n, n), dtype=np.bool_)
    s_ue, s_bs, sq_tau, sq_1m_tau, use_shadow, _ = _kernel_shadow_args(cfg, shadow)
    link_rows(
        scheduled_ue.astype(np.int64),
        np.ascontiguousarray(ue_xy[scheduled_ue, 0]),
        np.ascontiguousarray(ue_xy[scheduled_ue, 1]),
        active_bs.astype(np.int64),
        np.ascontiguousarray(bs_xy[active_bs, 0]),
        np.ascontiguousarray(bs_xy[active_bs, 1]),
        side_km, (l_m / 1000.0) ** 2,
        np.log(pl.a_los), np.log(pl.a_nlos), pl.alpha_los, pl.alpha_nlos,
        pl.r1_m, pl.r2_m, (pl.d1_m / 1000.0) ** 2, np.uint64(los_key),
        s_ue[scheduled_ue] if use_shadow else s_ue,
        s_bs[active_bs] if use_shadow else s_bs,
        sq_tau, sq_1m_tau, use_shadow,
        gains, w_km, los)
    return gains, w_km, los


def _drop_task(args) -> DropResult:
    cfg, point, point_id, drop_index = args
    return run_drop(cfg, point, point_id, drop_index)


@dataclass
class _PointAccumulator:
    """Ordered fold over drop results for one sweep point."""

    thresholds_db: tuple[float, ...]
    area_km2: float = 0.0
    n_drops: int = 0
    active_counts: list = field(default_factory=list)
    successes: dict = field(default_factory=dict)
    n_samples: int = 0

    def __post_init__(self):
        self.successes = {g: 0 for g in self.thresholds_db}

    def add(self, drop: DropResult) -> None:
        self.area_km2 = drop.area_km2
        self.n_drops += 1
        self.active_counts.append(drop.n_active)
        self.n_samples += drop.sinr_db.size
        for g in self.thresholds_db:
            self.successes[g] += int(np.count_nonzero(drop.sinr_db > g))

    def ci_met(self, target: float) -> bool:
        if self.n_samples == 0:
            return False
        return all(coverage_from_counts(self.successes[g], self.n_samples).ci_half_width
                   <= target for g in self.thresholds_db)

    def result(self, cfg: ScenarioConfig, point: SweepPoint, converged: bool) -> SweepPointResult:
        density, se = estimate_active_density(self.active_counts, self.area_km2)
        coverage = {}
        reliable = {}
        for g in self.thresholds_db:
            if self.n_samples > 0:
                cov = coverage_from_counts(self.successes[g], self.n_samples)
            else:
                # degenerate point (e.g. every drop empty); flagged via n=0
                cov = CoverageEstimate(float("nan"), float("nan"), 0)
            coverage[g] = cov
            reliable[g] = reliable_ue_density(density, cov.estimate)
        return SweepPointResult(
            bs_density=point.bs_density,
            deployment=point.deployment,
            variant=point.variant,
            antenna_height_diff=point.antenna_height_diff,
            area_km2=self.area_km2,
            n_drops=self.n_drops,
            active_density=density,
            active_density_se=se,
            analytical_active_density=analytical_active_density(
                point.bs_density, cfg.ue_density, cfg.idle_mode_q),
            coverage=coverage,
            reliable_density=reliable,
            ci_converged=converged,
        )


def sweep_points(sweep: SweepSpec) -> list[SweepPoint]:
    """Grid order: density, then deployment, then variant, then antenna height."""
    return [
        SweepPoint(lam, dep, var, height)
        for lam in sweep.bs_densities
        for dep in sweep.deployments
        for var in sweep.channel_variants
        for height in sweep.antenna_height_diffs
    ]


def _run_point(cfg: ScenarioConfig, point: SweepPoint, point_id: int,
               params: EngineParams, executor) -> SweepPointResult:
    acc = _PointAccumulator(thresholds_db=cfg.sinr_thresholds_db)
    min_drops = min(cfg.drops, params.max_drops)
    follow_up = max(32, cfg.drops // 2)
    next_index = 0
    while True:
        if next_index < min_drops:
            batch_end = min_drops
        elif acc.ci_met(params.ci_target) or next_index >= params.max_drops:
            break
        else:
            batch_end = min(next_index + follow_up, params.max_drops)
        tasks = [(cfg, point, point_id, i) for i in range(next_index, batch_end)]
        if executor is None:
            results = map(_drop_task, tasks)
        else:
            results = executor.map(_drop_task, tasks,
                                   chunksize=max(1, len(tasks) // (8 * params.workers)))
        for drop in results:
            acc.add(drop)
        next_index = batch_end
    return acc.result(cfg, point, converged=acc.ci_met(params.ci_target))


def run_sweep(cfg: ScenarioConfig, sweep: SweepSpec | None = None,
              params: EngineParams | None = None,
              progress: bool = False) -> list[SweepPointResult]:
    """Run every sweep point; output order follows the grid regardless of workers."""
    cfg.validate()
    if sweep is None:
        sweep = SweepSpec.single_point(cfg)
    if params is None:
        params = EngineParams()
    points = sweep_points(sweep)
    if not points:
        raise ConfigError("sweep: empty grid")
    results = []
    executor = None
    try:
        if params.workers > 1:
            executor = ProcessPoolExecutor(max_workers=params.workers)
        for point_id, point in enumerate(points):
            t0 = time.perf_counter()
            res = _run_point(cfg, point, point_id, params, executor)
            if progress:
                dt = time.perf_counter() - t0
                print(f"[udnsim] point {point_id + 1}/{len(points)} "
                      f"lambda={point.bs_density:g} {point.deployment}/{point.variant} "
                      f"L={point.antenna_height_diff:g}m drops={res.n_drops} "
                      f"active={res.active_density:.4g}/km2 "
                      f"{'ok' if res.ci_converged else 'budget-exhausted'} "
                      f"({dt:.1f}s)", file=sys.stderr, flush=True)
            results.append(res)
    finally:
        if executor is not None:
            executor.shutdown()
    return results
