"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Heavy sweeps are shared through session fixtures.  Every tolerance is
stated inline next to its assertion.  Criteria 1-11 only exercise the
Python package; figure regeneration is covered by the frontend's own test
suite plus test_acceptance_figures.py.
"""

import dataclasses
import math
import subprocess
import sys

import numpy as np
import pytest
import scipy.integrate
import scipy.stats

from udnsim.association import analytical_active_density, associate_from_gains, build_schedule
from udnsim.cli import CSV_HEADER
from udnsim.config import (EngineParams, PathLossParams, PowerControlParams,
                           RegionPolicy, ScenarioConfig, SweepSpec)
from udnsim.engine import run_sweep
from udnsim.metrics import Z95
from udnsim.propagation import (los_probability, path_loss, rician_power_pdf,
                                sample_fading_powers)
from udnsim.streams import substream
from udnsim.uplink import compute_uplink_sinrs, ue_tx_power_mw

MASTER_SEED = 42
WORKERS = 2  # fixture runs; determinism itself is criterion 11


def _report(criterion: int, name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    extra = f" ({detail})" if detail else ""
    print(f"[criterion {criterion:2d}] {status} - {name}{extra}")
    assert ok, f"criterion {criterion}: {name}{extra}"


def _cfg(**overrides) -> ScenarioConfig:
    return dataclasses.replace(ScenarioConfig(master_seed=MASTER_SEED), **overrides)


# --------------------------------------------------------------------------
# shared sweeps

@pytest.fixture(scope="session")
def eq5_sweep():
    """Criteria 1-2: baseline case over the seven-density grid."""
    cfg = _cfg(drops=200)
    sweep = SweepSpec((10.0, 30.0, 100.0, 300.0, 1000.0, 3000.0, 10000.0),
                      ("hppp",), ("3gpp",), (0.0,))
    return run_sweep(cfg, sweep, EngineParams(max_drops=1000, ci_target=0.01,
                                              workers=WORKERS))


C3_GRID = (0.1, 0.5, 2.0, 8.0, 25.0, 70.0, 150.0, 400.0, 1000.0, 2500.0,
           5000.0, 10000.0)
C3_CONFIG_TEXT = f"""\
master_seed: {MASTER_SEED}
drops: 200
antenna_height_diff: 0.0
sweep:
  bs_densities: [{', '.join(str(x) for x in C3_GRID)}]
engine:
  ci_target: 0.005
  max_drops: 600
"""


@pytest.fixture(scope="session")
def c3_csvs(tmp_path_factory):
    """Criterion 3's sweep run through the CLI with 1 and 8 workers."""
    base = tmp_path_factory.mktemp("c3")
    cfg_path = base / "c3.yaml"
    cfg_path.write_text(C3_CONFIG_TEXT)
    outputs = {}
    for workers in (1, 8):
        out = base / f"c3_w{workers}.csv"
        proc = subprocess.run(
            [sys.executable, "-m", "udnsim", "run", "--config", str(cfg_path),
             "--out", str(out), "--workers", str(workers), "--quiet"],
            capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr[-2000:]
        outputs[workers] = out.read_bytes()
    return outputs


def _parse_csv(data: bytes):
    lines = data.decode().splitlines()
    assert lines[0] == CSV_HEADER
    rows = []
    for line in lines[1:]:
        f = line.split(",")
        rows.append(dict(lam=float(f[0]), deployment=f[1], variant=f[2],
                         L=float(f[3]), gamma=float(f[4]), active=float(f[5]),
                         eq5=float(f[6]), p=float(f[7]), ci=float(f[8]),
                         rho=float(f[9]), n=int(f[10]), drops=int(f[11])))
    return rows


@pytest.fixture(scope="session")
def c456_sweep():
    """Criteria 4-6: height-difference effects at gamma in {0, 10}.

    min_expected_bs is raised so every point gets a region large enough
    that far-field interference truncation is converged away; the default
    desk-scale region biases the knife-edge density comparison of
    criterion 6 by more than its CI (verified by area-doubling runs).
    """
    cfg = _cfg(drops=2500,
               region_policy=RegionPolicy(min_expected_bs=1200,
                                          min_expected_ue=100))
    sweep = SweepSpec((200.0, 600.0, 1000.0, 10000.0), ("hppp",), ("3gpp",),
                      (0.0, 8.5))
    results = run_sweep(cfg, sweep, EngineParams(max_drops=2500, ci_target=0.002,
                                                 workers=WORKERS))
    return {(r.bs_density, r.antenna_height_diff): r for r in results}


@pytest.fixture(scope="session")
def c7_sweep():
    cfg = _cfg(drops=1000, channel_variant="3gpp-advanced")
    sweep = SweepSpec((100.0, 300.0), ("hppp",), ("3gpp-advanced",), (0.0,))
    return run_sweep(cfg, sweep, EngineParams(max_drops=1000, ci_target=0.01,
                                              workers=WORKERS))


@pytest.fixture(scope="session")
def c8_sweep():
    cfg = _cfg(drops=1200, channel_variant="3gpp-advanced",
               antenna_height_diff=8.5)
    sweep = SweepSpec((10.0, 10000.0), ("hppp", "hexagonal"),
                      ("3gpp-advanced",), (8.5,))
    results = run_sweep(cfg, sweep, EngineParams(max_drops=1200, ci_target=0.003,
                                                 workers=WORKERS))
    return {(r.bs_density, r.deployment): r for r in results}


# --------------------------------------------------------------------------
# criteria

def test_criterion_1_eq5_agreement(eq5_sweep):
    # empirical active density within 5% of the closed form at every density
    worst = 0.0
    ok = True
    for res in eq5_sweep:
        rel = abs(res.active_density - res.analytical_active_density) \
            / res.analytical_active_density
        worst = max(worst, rel)
        ok &= rel <= 0.05
    _report(1, "closed-form active-density agreement (5%)", ok,
            f"worst relative error {worst:.3f}")


def test_criterion_2_monotone_bounded(eq5_sweep):
    rho = 300.0
    ok = True
    for res in eq5_sweep:
        ok &= res.active_density <= rho + Z95 * res.active_density_se
    for a, b in zip(eq5_sweep, eq5_sweep[1:]):
        slack = Z95 * (a.active_density_se + b.active_density_se)
        ok &= b.active_density >= a.active_density - slack
    _report(2, "active density non-decreasing and bounded by the UE density", ok)


def test_criterion_3_non_monotone_coverage(c3_csvs):
    rows = [r for r in _parse_csv(c3_csvs[8]) if r["gamma"] == 0.0]
    assert [r["lam"] for r in rows] == list(C3_GRID)
    ok = True
    details = []
    for a, b in zip(rows, rows[1:]):
        diff = b["p"] - a["p"]
        combined = a["ci"] + b["ci"]
        if b["lam"] <= 70.0:
            expected_rise = True
        elif b["lam"] <= 400.0:
            expected_rise = False
        else:
            expected_rise = True
        significant = abs(diff) > combined
        correct = (diff > 0) == expected_rise
        ok &= significant and correct
        details.append(f"{a['lam']:g}->{b['lam']:g}:{diff:+.3f}")
    _report(3, "coverage rises to ~70, falls to ~400, rises again", ok,
            " ".join(details))


def test_criterion_4_antenna_height_loss(c456_sweep):
    flat = c456_sweep[(10000.0, 0.0)]
    tall = c456_sweep[(10000.0, 8.5)]
    loss0 = (flat.coverage[0.0].estimate - tall.coverage[0.0].estimate) * 100.0
    loss10 = (flat.coverage[10.0].estimate - tall.coverage[10.0].estimate) * 100.0
    ok = abs(loss0 - 13.0) <= 5.0 and abs(loss10 - 32.0) <= 5.0
    _report(4, "height difference costs 13 pp (0 dB) and 32 pp (10 dB) "
               "at 10^4 BSs/km^2, tolerance 5 pp", ok,
            f"measured {loss0:.1f} pp and {loss10:.1f} pp")


def test_criterion_5_high_reliability_scarcity(c456_sweep):
    res = c456_sweep[(1000.0, 8.5)]
    rho = res.reliable_density[10.0]
    _report(5, "reliably working UEs below 50 /km^2 at 10 dB, L=8.5 m, "
               "lambda=10^3", rho < 50.0, f"measured {rho:.1f} /km^2")


def test_criterion_6_densification_harm(c456_sweep):
    low = c456_sweep[(200.0, 8.5)]
    high = c456_sweep[(600.0, 8.5)]
    rho_low = low.reliable_density[10.0]
    rho_high = high.reliable_density[10.0]
    combined = (low.reliable_density_half_width(10.0)
                + high.reliable_density_half_width(10.0))
    ok = rho_high < rho_low - combined
    _report(6, "reliable-UE density decreases from lambda=200 to 600 "
               "(10 dB, L=8.5 m)", ok,
            f"rho(200)={rho_low:.2f}, rho(600)={rho_high:.2f}, "
            f"combined CI {combined:.2f}")


def test_criterion_7_advanced_active_density_deficit(c7_sweep):
    ok = True
    details = []
    for res in c7_sweep:
        ci = Z95 * res.active_density_se
        deficit = res.analytical_active_density - res.active_density
        ok &= deficit > ci
        details.append(f"lambda={res.bs_density:g}: deficit {deficit:.1f} "
                       f"(CI {ci:.1f})")
    _report(7, "correlated shadowing pushes active density below the "
               "closed form", ok, "; ".join(details))


def test_criterion_8_hexagonal_crossover(c8_sweep):
    gap = {}
    ci = {}
    for lam in (10.0, 10000.0):
        hexa = c8_sweep[(lam, "hexagonal")].coverage[0.0]
        rand = c8_sweep[(lam, "hppp")].coverage[0.0]
        gap[lam] = hexa.estimate - rand.estimate
        ci[lam] = hexa.ci_half_width + rand.ci_half_width
    ok = gap[10.0] > ci[10.0] and gap[10000.0] < gap[10.0]
    _report(8, "hexagonal layout helps sparse networks, less so ultra-dense",
            ok, f"gap(10)={gap[10.0]:.4f} (CI {ci[10.0]:.4f}), "
                f"gap(10^4)={gap[10000.0]:.4f}")


def test_criterion_9_distribution_suite():
    checks = []
    # LoS fading power density normalizes on [0, 50]
    for k in (0.1, 1.0, 10.0, 20.0):
        total, _ = scipy.integrate.quad(rician_power_pdf, 0.0, 50.0, args=(k,),
                                        limit=200)
        checks.append(abs(total - 1.0) < 1e-4)
    # sampler: unit mean within 1%, KS below 0.01 against the quadrature CDF
    rng = substream(MASTER_SEED, 0, 0, 99)
    los = np.ones(100_000, dtype=bool)
    h = sample_fading_powers(los, np.full(los.shape, 10.0), "3gpp-advanced", rng)
    checks.append(abs(h.mean() - 1.0) < 0.01)
    grid = np.linspace(0.0, 60.0, 24001)
    cdf = scipy.integrate.cumulative_trapezoid(rician_power_pdf(grid, 10.0),
                                               grid, initial=0.0)
    stat, _ = scipy.stats.kstest(h, lambda x: np.interp(x, grid, cdf))
    checks.append(stat < 0.01)
    # shadowing moments at 1e5 samples
    rng = substream(MASTER_SEED, 0, 1, 99)
    n = 100_000
    w = math.sqrt(0.5)
    s_ue, s_b1, s_b2 = (rng.normal(0, 10.0, n) for _ in range(3))
    s1 = w * s_ue + w * s_b1
    s2 = w * s_ue + w * s_b2
    checks.append(abs(s1.std() - 10.0) < 0.1)
    checks.append(abs(np.corrcoef(s1, s2)[0, 1] - 0.5) < 0.02)
    # LoS probability at the breakpoint distance
    pl = PathLossParams()
    checks.append(abs(los_probability(pl.d1_m / 1000.0) - 0.5) < 1e-9)
    _report(9, "distribution property suite", all(checks),
            f"{sum(checks)}/{len(checks)} checks")


def test_criterion_10_hand_oracle():
    # 3 BSs, 3 UEs, forced LoS states, unit fading, no shadowing; everything
    # below the dashed line is computed from scratch with plain floats
    side = 1.0
    l_km = 0.0085
    bs = [(0.20, 0.20), (0.80, 0.20), (0.50, 0.80)]
    ue = [(0.25, 0.20), (0.45, 0.25), (0.50, 0.75)]
    forced_los = [[True, False, False],
                  [False, True, False],
                  [False, False, True]]
    a_l, a_nl = 10.0 ** -10.38, 10.0 ** -14.54
    al_exp, anl_exp = 2.09, 3.75
    p0_mw, eta, n_rb = 10.0 ** -7.6, 0.8, 55
    noise = 10.0 ** -9.1

    def dist(p, q):
        dx = abs(p[0] - q[0])
        dx = min(dx, side - dx)
        dy = abs(p[1] - q[1])
        dy = min(dy, side - dy)
        return math.sqrt(dx * dx + dy * dy + l_km * l_km)

    gains_hand = [[(a_l * dist(u, b) ** -al_exp) if los else
                   (a_nl * dist(u, b) ** -anl_exp)
                   for b, los in zip(bs, flags)]
                  for u, flags in zip(ue, forced_los)]
    serving_hand = [row.index(max(row)) for row in gains_hand]
    powers_hand = [p0_mw * gains_hand[i][serving_hand[i]] ** -eta * n_rb
                   for i in range(3)]
    sinr_hand = []
    for j in range(3):
        signal = powers_hand[j] * gains_hand[j][j]
        interference = sum(powers_hand[i] * gains_hand[i][j]
                           for i in range(3) if i != j)
        sinr_hand.append(signal / (interference + noise))
    # ------------------------------------------------------------------
    w = np.array([[dist(u, b) for b in bs] for u in ue])
    gains = path_loss(w, np.array(forced_los))
    serving = associate_from_gains(gains)
    schedule = build_schedule(serving, 3, np.random.default_rng(0))
    assert list(serving) == serving_hand == [0, 1, 2]
    assert np.array_equal(schedule.active_bs, [0, 1, 2])
    sub = gains[np.ix_(schedule.scheduled_ue, schedule.active_bs)]
    out = compute_uplink_sinrs(sub, np.ones((3, 3)),
                               PowerControlParams(-76.0, 0.8, 55), -91.0)
    power_err = max(abs(out.tx_power_mw[i] - powers_hand[i]) / powers_hand[i]
                    for i in range(3))
    sinr_err = max(abs(out.sinr_linear[i] - sinr_hand[i]) / sinr_hand[i]
                   for i in range(3))
    ok = power_err < 1e-12 and sinr_err < 1e-12
    _report(10, "hand-computed 3x3 scenario reproduced to 1e-12", ok,
            f"power err {power_err:.2e}, sinr err {sinr_err:.2e}")


def test_criterion_11_byte_identical_csv(c3_csvs):
    ok = c3_csvs[1] == c3_csvs[8] and len(c3_csvs[1]) > 0
    _report(11, "same seed, workers 1 vs 8: byte-identical CSV", ok,
            f"{len(c3_csvs[1])} bytes")
