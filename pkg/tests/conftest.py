import dataclasses

import pytest

from udnsim.config import EngineParams, RegionPolicy, ScenarioConfig, SweepSpec


@pytest.fixture
def default_cfg() -> ScenarioConfig:
    return ScenarioConfig()


def tiny_cfg(**overrides) -> ScenarioConfig:
    """Small, fast scenario for engine-level tests."""
    base = ScenarioConfig(
        region_policy=RegionPolicy(min_expected_bs=50, min_expected_ue=50,
                                   max_bs_cap=20000),
        drops=20,
        master_seed=7,
    )
    return dataclasses.replace(base, **overrides)


def quick_engine(**overrides) -> EngineParams:
    defaults = dict(max_drops=20, ci_target=0.5, workers=1)
    defaults.update(overrides)
    return EngineParams(**defaults)


def single_sweep(cfg: ScenarioConfig) -> SweepSpec:
    return SweepSpec.single_point(cfg)
