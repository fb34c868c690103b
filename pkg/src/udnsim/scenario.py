"""Square torus regions and BS/UE point pattern generation.

Positions are 2D coordinates in km on a wrap-around (torus) region, which
removes boundary bias from interference sums without guard rings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import ConfigError, RegionPolicy


@dataclass(frozen=True)
class Region:
    """Square torus; all points live in [0, side_km) x [0, side_km)."""

    side_km: float

    @property
    def area_km2(self) -> float:
        return self.side_km * self.side_km


@dataclass(frozen=True)
class Deployment:
    """One drop's point sets."""

    bs_xy: np.ndarray  # (n_bs, 2) km
    ue_xy: np.ndarray  # (n_ue, 2) km
    region: Region


def resolve_region(bs_density: float, ue_density: float, policy: RegionPolicy) -> Region:
    """Pick the torus side for given densities under the region policy.

    side = sqrt(max(min_expected_bs/lambda, min_expected_ue/rho)), shrunk to
    respect the expected-BS cap but never below the UE floor.  A fixed side
    in the policy bypasses the adaptive rule entirely.
    """
    if policy.fixed_side_km is not None:
        return Region(side_km=float(policy.fixed_side_km))
    ue_floor_area = policy.min_expected_ue / ue_density
    area = max(policy.min_expected_bs / bs_density, ue_floor_area)
    if bs_density * area > policy.max_bs_cap:
        area = policy.max_bs_cap / bs_density
        if area < ue_floor_area:
            raise ConfigError(
                "region_policy: infeasible; expected BS count at the minimum "
                f"UE area ({bs_density * ue_floor_area:.0f}) exceeds max_bs_cap "
                f"({policy.max_bs_cap})")
    return Region(side_km=math.sqrt(area))


def sample_hppp(density: float, region: Region, rng: np.random.Generator) -> np.ndarray:
    """Homogeneous Poisson point process: Poisson count, uniform positions."""
    if density < 0:
        raise ValueError("density must be >= 0")
    n = int(rng.poisson(density * region.area_km2))
    return rng.random((n, 2)) * region.side_km


def hex_spacing(density: float) -> float:
    """Ideal inter-site distance of a triangular lattice with the given density."""
    return math.sqrt(2.0 / (math.sqrt(3.0) * density))


def generate_hexagonal(density: float, region: Region,
                       offset_xy: tuple[float, float] = (0.0, 0.0)) -> np.ndarray:
    """Deterministic triangular lattice of cell sites on the torus.

    Row and column counts are snapped so the staggered pattern tiles the
    torus exactly (even row count, alternate rows shifted by half a column
    spacing); the realized site count stays within 10% of density * area
    once the region holds at least ~50 sites.  ``offset_xy`` translates the
    whole pattern (wrapped), so per-drop random offsets decorrelate UE
    positions from lattice symmetry points.
    """
    if density <= 0:
        raise ConfigError("bs_density: hexagonal deployment requires density > 0")
    side = region.side_km
    target = density * region.area_km2
    d = hex_spacing(density)
    row_pitch = d * math.sqrt(3.0) / 2.0
    if row_pitch > side or d > side:
        raise ConfigError(
            "region: too small to hold one hexagonal site "
            f"(side {side:.4f} km < site pitch {max(d, row_pitch):.4f} km)")
    n_rows = max(2, 2 * round(side / row_pitch / 2.0))
    n_cols = max(1, round(target / n_rows))
    dx = side / n_cols
    dy = side / n_rows
    cols = np.arange(n_cols) * dx
    rows = np.arange(n_rows) * dy
    x = (cols[None, :] + (np.arange(n_rows)[:, None] % 2) * (dx / 2.0)).ravel()
    y = np.repeat(rows, n_cols)
    pts = np.column_stack([x, y])
    pts[:, 0] = np.mod(pts[:, 0] + offset_xy[0], side)
    pts[:, 1] = np.mod(pts[:, 1] + offset_xy[1], side)
    return pts


def torus_distance_2d(p, q, region: Region) -> float:
    """Minimum-image Euclidean distance on the torus (km)."""
    half = region.side_km / 2.0
    dx = abs(p[0] - q[0])
    if dx > half:
        dx = region.side_km - dx
    dy = abs(p[1] - q[1])
    if dy > half:
        dy = region.side_km - dy
    return math.hypot(dx, dy)


def pairwise_distance_2d(a_xy: np.ndarray, b_xy: np.ndarray, side_km: float) -> np.ndarray:
    """Minimum-image distances between all rows of a and b; shape (len(a), len(b))."""
    d = np.abs(a_xy[:, None, :] - b_xy[None, :, :])
    d = np.minimum(d, side_km - d)
    return np.sqrt(d[..., 0] ** 2 + d[..., 1] ** 2)
