"""Aggregation of drop outputs into the headline network metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

Z95 = 1.959963984540054


@dataclass(frozen=True)
class CoverageEstimate:
    estimate: float
    ci_half_width: float
    n: int


@dataclass(frozen=True)
class SweepPointResult:
    """Aggregated metrics for one (density, deployment, variant, height) point."""

    bs_density: float
    deployment: str
    variant: str
    antenna_height_diff: float
    area_km2: float
    n_drops: int
    active_density: float
    active_density_se: float
    analytical_active_density: float
    coverage: dict[float, CoverageEstimate]       # threshold dB -> estimate
    reliable_density: dict[float, float]          # threshold dB -> rho tilde
    ci_converged: bool

    def reliable_density_half_width(self, gamma_db: float) -> float:
        """Propagated 95% half-width of the reliable-UE density."""
        cov = self.coverage[gamma_db]
        return math.hypot(cov.estimate * Z95 * self.active_density_se,
                          self.active_density * cov.ci_half_width)


def wilson_half_width(successes: int, n: int, z: float = Z95) -> float:
    """Half-width of the Wilson score interval (well-behaved near 0 and 1)."""
    if n < 1:
        raise ValueError("wilson_half_width requires n >= 1")
    p = successes / n
    z2 = z * z
    return (z / (1.0 + z2 / n)) * math.sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n))


def estimate_coverage(sinr_linear, gamma_db: float) -> CoverageEstimate:
    """Fraction of samples whose SINR exceeds the threshold, with a Wilson CI."""
    samples = np.asarray(sinr_linear, dtype=np.float64)
    if samples.size == 0:
        raise ValueError("estimate_coverage requires at least one SINR sample")
    successes = int(np.count_nonzero(10.0 * np.log10(samples) > gamma_db))
    return coverage_from_counts(successes, samples.size)


def coverage_from_counts(successes: int, n: int) -> CoverageEstimate:
    if n < 1:
        raise ValueError("coverage estimate requires at least one sample")
    return CoverageEstimate(estimate=successes / n,
                            ci_half_width=wilson_half_width(successes, n),
                            n=n)


def estimate_active_density(n_active_per_drop, area_km2: float) -> tuple[float, float]:
    """Mean active-BS density across drops and its standard error."""
    counts = np.asarray(n_active_per_drop, dtype=np.float64)
    if counts.size == 0:
        raise ValueError("estimate_active_density requires at least one drop")
    densities = counts / area_km2
    mean = float(densities.mean())
    se = float(densities.std(ddof=1) / math.sqrt(counts.size)) if counts.size > 1 else 0.0
    return mean, se


def reliable_ue_density(active_density: float, p_cov: float) -> float:
    """Density of UEs concurrently operating above the SINR threshold."""
    return active_density * p_cov
