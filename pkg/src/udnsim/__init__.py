"""Monte Carlo simulator for uplink IoT ultra-dense cellular networks.

Generates BS/UE point patterns on a torus, realizes LoS/NLoS multi-piece
path loss channels (optionally with Rician LoS fading and correlated
shadowing), associates UEs by maximum long-term received signal strength,
applies fractional path loss compensation uplink power control, and
aggregates coverage probability, active-BS density and the density of
reliably working UEs over seeded, reproducible drops.
"""

__version__ = "0.1.0"

from .config import (
    ConfigError,
    EngineParams,
    PathLossParams,
    PowerControlParams,
    RegionPolicy,
    ScenarioConfig,
    ShadowParams,
    SweepSpec,
)
from .scenario import Region, resolve_region, sample_hppp, generate_hexagonal
from .association import analytical_active_density
from .engine import SweepPoint, run_drop, run_sweep
from .metrics import SweepPointResult

__all__ = [
    "ConfigError",
    "EngineParams",
    "PathLossParams",
    "PowerControlParams",
    "Region",
    "RegionPolicy",
    "ScenarioConfig",
    "ShadowParams",
    "SweepPoint",
    "SweepPointResult",
    "SweepSpec",
    "analytical_active_density",
    "generate_hexagonal",
    "resolve_region",
    "run_drop",
    "run_sweep",
    "sample_hppp",
    "__version__",
]
