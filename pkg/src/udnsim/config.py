"""Scenario configuration: parameter dataclasses, defaults and validation.

The default parameter set is the standard 3GPP evaluation case for this
kind of system-level study: two-piece LoS/NLoS path loss referenced at
1 km, two-piece exponential LoS probability, 4G-style fractional path
loss compensation on the uplink, and an idle-mode exponent q = 3.5.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

DEPLOYMENT_HPPP = "hppp"
DEPLOYMENT_HEXAGONAL = "hexagonal"
DEPLOYMENTS = (DEPLOYMENT_HPPP, DEPLOYMENT_HEXAGONAL)

VARIANT_3GPP = "3gpp"
VARIANT_3GPP_ADVANCED = "3gpp-advanced"
VARIANTS = (VARIANT_3GPP, VARIANT_3GPP_ADVANCED)

PATHLOSS_PRESET_3GPP_CASE = "3gpp-case"


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending key."""


@dataclass(frozen=True)
class PathLossParams:
    """Two-piece path loss with distance-dependent LoS probability.

    Gains are linear and referenced at a 3D distance of 1 km; exponents
    apply to distances in km.  The LoS probability switches form at
    ``d1_m`` (derived as R1/ln(10) for the 3gpp-case preset) and the
    breakpoint constants R1, R2, d1 are in meters.
    """

    a_los: float = 10.0 ** -10.38
    a_nlos: float = 10.0 ** -14.54
    alpha_los: float = 2.09
    alpha_nlos: float = 3.75
    r1_m: float = 156.0
    r2_m: float = 30.0
    d1_m: float = 156.0 / math.log(10.0)


@dataclass(frozen=True)
class PowerControlParams:
    """Fractional path loss compensation settings."""

    p0_dbm: float = -76.0
    eta: float = 0.8
    n_rb: int = 55


@dataclass(frozen=True)
class ShadowParams:
    """Correlated log-normal shadowing (dB domain), used by the advanced variant."""

    sigma_shad_db: float = 10.0
    tau: float = 0.5


@dataclass(frozen=True)
class RegionPolicy:
    """Adaptive sizing of the square torus region.

    The side is chosen so the region holds at least ``min_expected_bs``
    BSs and ``min_expected_ue`` UEs in expectation, then shrunk (never
    below the UE floor) if the expected BS count would exceed
    ``max_bs_cap``.  ``fixed_side_km`` overrides everything.
    """

    min_expected_bs: int = 200
    min_expected_ue: int = 100
    max_bs_cap: int = 20000
    fixed_side_km: float | None = None


@dataclass(frozen=True)
class ScenarioConfig:
    """Full model parameterization for one simulated scenario."""

    bs_density: float = 300.0
    ue_density: float = 300.0
    deployment: str = DEPLOYMENT_HPPP
    antenna_height_diff: float = 0.0  # meters
    channel_variant: str = VARIANT_3GPP
    pathloss: PathLossParams = field(default_factory=PathLossParams)
    pc: PowerControlParams = field(default_factory=PowerControlParams)
    shadow: ShadowParams = field(default_factory=ShadowParams)
    noise_dbm: float = -91.0
    idle_mode_q: float = 3.5
    sinr_thresholds_db: tuple[float, ...] = (0.0, 10.0)
    region_policy: RegionPolicy = field(default_factory=RegionPolicy)
    drops: int = 200  # minimum drops per sweep point
    master_seed: int = 42

    def validate(self) -> None:
        _require(self.bs_density > 0, "bs_density", "must be > 0")
        _require(self.ue_density > 0, "ue_density", "must be > 0")
        _require(self.deployment in DEPLOYMENTS, "deployment",
                 f"must be one of {DEPLOYMENTS}")
        _require(self.antenna_height_diff >= 0, "antenna_height_diff",
                 "must be >= 0 (meters)")
        _require(self.channel_variant in VARIANTS, "channel_variant",
                 f"must be one of {VARIANTS}")
        pl = self.pathloss
        for name in ("a_los", "a_nlos", "alpha_los", "alpha_nlos"):
            _require(getattr(pl, name) > 0, f"pathloss.{_YAML_PL_NAMES[name]}",
                     "must be > 0")
        _require(pl.r1_m > 0, "pathloss.R1", "must be > 0 (meters)")
        _require(pl.r2_m > 0, "pathloss.R2", "must be > 0 (meters)")
        _require(pl.d1_m > 0, "pathloss.d1", "must be > 0 (meters)")
        _require(0 < self.pc.eta <= 1, "pc.eta", "must be in (0, 1]")
        _require(self.pc.n_rb >= 1, "pc.n_rb", "must be a positive integer")
        _require(self.shadow.sigma_shad_db >= 0, "shadow.sigma_shad",
                 "must be >= 0 (dB)")
        _require(0 <= self.shadow.tau <= 1, "shadow.tau", "must be in [0, 1]")
        _require(self.idle_mode_q > 0, "idle_mode_q", "must be > 0")
        _require(len(self.sinr_thresholds_db) > 0, "sinr_thresholds_db",
                 "must be a non-empty list")
        rp = self.region_policy
        _require(rp.min_expected_bs > 0, "region_policy.min_expected_bs", "must be > 0")
        _require(rp.min_expected_ue > 0, "region_policy.min_expected_ue", "must be > 0")
        _require(rp.max_bs_cap > 0, "region_policy.max_bs_cap", "must be > 0")
        if rp.fixed_side_km is not None:
            _require(rp.fixed_side_km > 0, "region_policy.fixed_side_km", "must be > 0")
        _require(self.drops >= 1, "drops", "must be a positive integer")
        _require(0 <= self.master_seed < 2 ** 64, "master_seed",
                 "must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class SweepSpec:
    """Grids swept by the engine; the cross product defines the sweep points."""

    bs_densities: tuple[float, ...]
    deployments: tuple[str, ...]
    channel_variants: tuple[str, ...]
    antenna_height_diffs: tuple[float, ...]

    @staticmethod
    def single_point(cfg: ScenarioConfig) -> "SweepSpec":
        return SweepSpec(
            bs_densities=(cfg.bs_density,),
            deployments=(cfg.deployment,),
            channel_variants=(cfg.channel_variant,),
            antenna_height_diffs=(cfg.antenna_height_diff,),
        )

    def n_points(self) -> int:
        return (len(self.bs_densities) * len(self.deployments)
                * len(self.channel_variants) * len(self.antenna_height_diffs))


@dataclass(frozen=True)
class EngineParams:
    """Drop budget and convergence control for one sweep point.

    Drops run in deterministic batches until the minimum count is reached
    and every threshold's coverage confidence half-width is at or below
    ``ci_target``, or ``max_drops`` is exhausted.
    """

    max_drops: int = 20000
    ci_target: float = 0.01
    workers: int = 1


# YAML key names follow the configuration schema verbatim; internal
# attribute names stay snake_case.
_YAML_PL_NAMES = {
    "a_los": "A_los", "a_nlos": "A_nlos",
    "alpha_los": "alpha_los", "alpha_nlos": "alpha_nlos",
    "r1_m": "R1", "r2_m": "R2", "d1_m": "d1",
}


def _require(cond: bool, key: str, what: str) -> None:
    if not cond:
        raise ConfigError(f"{key}: {what}")


def _expect_mapping(value, key: str) -> dict:
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise ConfigError(f"{key}: expected a mapping of keys, got {type(value).__name__}")
    return value


def _reject_unknown(section: dict, allowed: set[str], prefix: str) -> None:
    unknown = set(section) - allowed
    if unknown:
        name = sorted(unknown)[0]
        path = f"{prefix}.{name}" if prefix else name
        raise ConfigError(f"{path}: unknown key")


def _number(section: dict, key: str, default, prefix: str, *, integer: bool = False):
    if key not in section:
        return default
    value = section[key]
    path = f"{prefix}.{key}" if prefix else key
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number")
    if integer:
        if isinstance(value, float) and not value.is_integer():
            raise ConfigError(f"{path}: expected an integer")
        return int(value)
    return float(value)


def _pathloss_from_dict(section: dict) -> PathLossParams:
    allowed = set(_YAML_PL_NAMES.values()) | {"preset"}
    _reject_unknown(section, allowed, "pathloss")
    preset = section.get("preset", PATHLOSS_PRESET_3GPP_CASE)
    if preset != PATHLOSS_PRESET_3GPP_CASE:
        raise ConfigError(f"pathloss.preset: unknown preset {preset!r}")
    params = PathLossParams()
    kwargs = {}
    for attr, yaml_key in _YAML_PL_NAMES.items():
        if yaml_key in section:
            kwargs[attr] = _number(section, yaml_key, None, "pathloss")
    params = replace(params, **kwargs)
    # d1 tracks R1 unless explicitly pinned
    if "R1" in section and "d1" not in section:
        params = replace(params, d1_m=params.r1_m / math.log(10.0))
    return params


def scenario_from_dict(doc: dict | None) -> ScenarioConfig:
    """Build a validated ScenarioConfig from a parsed configuration mapping.

    Unknown keys are rejected with a diagnostic naming the key; absent keys
    fall back to the default parameter set.
    """
    doc = _expect_mapping(doc, "<root>")
    allowed = {
        "bs_density", "ue_density", "deployment", "antenna_height_diff",
        "channel_variant", "pathloss", "pc", "shadow", "noise_dbm",
        "idle_mode_q", "sinr_thresholds_db", "region_policy", "drops",
        "master_seed", "sweep", "engine",
    }
    _reject_unknown(doc, allowed, "")

    pc_sec = _expect_mapping(doc.get("pc"), "pc")
    _reject_unknown(pc_sec, {"P0_dbm", "eta", "n_rb"}, "pc")
    pc = PowerControlParams(
        p0_dbm=_number(pc_sec, "P0_dbm", -76.0, "pc"),
        eta=_number(pc_sec, "eta", 0.8, "pc"),
        n_rb=_number(pc_sec, "n_rb", 55, "pc", integer=True),
    )

    sh_sec = _expect_mapping(doc.get("shadow"), "shadow")
    _reject_unknown(sh_sec, {"sigma_shad", "tau"}, "shadow")
    shadow = ShadowParams(
        sigma_shad_db=_number(sh_sec, "sigma_shad", 10.0, "shadow"),
        tau=_number(sh_sec, "tau", 0.5, "shadow"),
    )

    rp_sec = _expect_mapping(doc.get("region_policy"), "region_policy")
    _reject_unknown(rp_sec, {"min_expected_bs", "min_expected_ue",
                             "max_bs_cap", "fixed_side_km"}, "region_policy")
    fixed_side = rp_sec.get("fixed_side_km")
    if fixed_side is not None:
        fixed_side = _number(rp_sec, "fixed_side_km", None, "region_policy")
    region_policy = RegionPolicy(
        min_expected_bs=_number(rp_sec, "min_expected_bs", 200, "region_policy", integer=True),
        min_expected_ue=_number(rp_sec, "min_expected_ue", 100, "region_policy", integer=True),
        max_bs_cap=_number(rp_sec, "max_bs_cap", 20000, "region_policy", integer=True),
        fixed_side_km=fixed_side,
    )

    thresholds = doc.get("sinr_thresholds_db", [0.0, 10.0])
    if not isinstance(thresholds, (list, tuple)):
        raise ConfigError("sinr_thresholds_db: expected a list of numbers")
    for t in thresholds:
        if isinstance(t, bool) or not isinstance(t, (int, float)):
            raise ConfigError("sinr_thresholds_db: expected a list of numbers")

    deployment = doc.get("deployment", DEPLOYMENT_HPPP)
    variant = doc.get("channel_variant", VARIANT_3GPP)

    cfg = ScenarioConfig(
        bs_density=_number(doc, "bs_density", 300.0, ""),
        ue_density=_number(doc, "ue_density", 300.0, ""),
        deployment=deployment,
        antenna_height_diff=_number(doc, "antenna_height_diff", 0.0, ""),
        channel_variant=variant,
        pathloss=_pathloss_from_dict(_expect_mapping(doc.get("pathloss"), "pathloss")),
        pc=pc,
        shadow=shadow,
        noise_dbm=_number(doc, "noise_dbm", -91.0, ""),
        idle_mode_q=_number(doc, "idle_mode_q", 3.5, ""),
        sinr_thresholds_db=tuple(float(t) for t in thresholds),
        region_policy=region_policy,
        drops=_number(doc, "drops", 200, "", integer=True),
        master_seed=_number(doc, "master_seed", 42, "", integer=True),
    )
    cfg.validate()
    return cfg


def sweep_from_dict(doc: dict | None, cfg: ScenarioConfig) -> SweepSpec:
    doc = _expect_mapping(doc, "<root>")
    section = _expect_mapping(doc.get("sweep"), "sweep")
    allowed = {"bs_densities", "deployments", "channel_variants", "antenna_height_diffs"}
    _reject_unknown(section, allowed, "sweep")

    def _floats(key: str, default: tuple[float, ...]) -> tuple[float, ...]:
        if key not in section:
            return default
        values = section[key]
        if not isinstance(values, (list, tuple)) or not values:
            raise ConfigError(f"sweep.{key}: expected a non-empty list")
        out = []
        for v in values:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError(f"sweep.{key}: expected numbers")
            if float(v) < 0:
                raise ConfigError(f"sweep.{key}: values must be >= 0")
            out.append(float(v))
        return tuple(out)

    deployments = tuple(section.get("deployments", (cfg.deployment,)))
    for d in deployments:
        if d not in DEPLOYMENTS:
            raise ConfigError(f"sweep.deployments: must be one of {DEPLOYMENTS}")
    variants = tuple(section.get("channel_variants", (cfg.channel_variant,)))
    for v in variants:
        if v not in VARIANTS:
            raise ConfigError(f"sweep.channel_variants: must be one of {VARIANTS}")

    densities = _floats("bs_densities", (cfg.bs_density,))
    for lam in densities:
        if lam <= 0:
            raise ConfigError("sweep.bs_densities: values must be > 0")
    return SweepSpec(
        bs_densities=densities,
        deployments=deployments,
        channel_variants=variants,
        antenna_height_diffs=_floats("antenna_height_diffs", (cfg.antenna_height_diff,)),
    )


def engine_from_dict(doc: dict | None) -> EngineParams:
    doc = _expect_mapping(doc, "<root>")
    section = _expect_mapping(doc.get("engine"), "engine")
    _reject_unknown(section, {"max_drops", "ci_target", "workers"}, "engine")
    params = EngineParams(
        max_drops=_number(section, "max_drops", 20000, "engine", integer=True),
        ci_target=_number(section, "ci_target", 0.01, "engine"),
        workers=_number(section, "workers", 1, "engine", integer=True),
    )
    if params.max_drops < 1:
        raise ConfigError("engine.max_drops: must be a positive integer")
    if not (0 < params.ci_target <= 1):
        raise ConfigError("engine.ci_target: must be in (0, 1]")
    if params.workers < 1:
        raise ConfigError("engine.workers: must be a positive integer")
    return params


def scenario_to_dict(cfg: ScenarioConfig, sweep: SweepSpec | None = None,
                     engine: EngineParams | None = None) -> dict:
    """Serialize to the configuration-file schema (round-trips through parsing)."""
    doc = {
        "bs_density": cfg.bs_density,
        "ue_density": cfg.ue_density,
        "deployment": cfg.deployment,
        "antenna_height_diff": cfg.antenna_height_diff,
        "channel_variant": cfg.channel_variant,
        "pathloss": {
            "A_los": cfg.pathloss.a_los,
            "A_nlos": cfg.pathloss.a_nlos,
            "alpha_los": cfg.pathloss.alpha_los,
            "alpha_nlos": cfg.pathloss.alpha_nlos,
            "R1": cfg.pathloss.r1_m,
            "R2": cfg.pathloss.r2_m,
            "d1": cfg.pathloss.d1_m,
        },
        "pc": {"P0_dbm": cfg.pc.p0_dbm, "eta": cfg.pc.eta, "n_rb": cfg.pc.n_rb},
        "shadow": {"sigma_shad": cfg.shadow.sigma_shad_db, "tau": cfg.shadow.tau},
        "noise_dbm": cfg.noise_dbm,
        "idle_mode_q": cfg.idle_mode_q,
        "sinr_thresholds_db": list(cfg.sinr_thresholds_db),
        "region_policy": {
            "min_expected_bs": cfg.region_policy.min_expected_bs,
            "min_expected_ue": cfg.region_policy.min_expected_ue,
            "max_bs_cap": cfg.region_policy.max_bs_cap,
            "fixed_side_km": cfg.region_policy.fixed_side_km,
        },
        "drops": cfg.drops,
        "master_seed": cfg.master_seed,
    }
    if sweep is not None:
        doc["sweep"] = {
            "bs_densities": list(sweep.bs_densities),
            "deployments": list(sweep.deployments),
            "channel_variants": list(sweep.channel_variants),
            "antenna_height_diffs": list(sweep.antenna_height_diffs),
        }
    if engine is not None:
        doc["engine"] = {
            "max_drops": engine.max_drops,
            "ci_target": engine.ci_target,
            "workers": engine.workers,
        }
    return doc
