"""Per-link channel realization: 3D distance, LoS state, path loss, shadowing, fading.

Distances fed to the path loss are in km (gains are referenced at 1 km);
the LoS probability breakpoints and the Rician K-factor formula operate on
meters.  LoS is drawn exactly once per BS-UE pair per drop via the
counter-based pair hash, so association, power control and interference
all see the same channel state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import i0e

from .config import PathLossParams, ShadowParams, VARIANT_3GPP_ADVANCED
from .streams import pair_uniforms

LN10_OVER_10 = math.log(10.0) / 10.0
# floor on squared 3D distance (1 micrometre) to keep a coincident point finite
MIN_W2_KM2 = 1e-18


def distance_3d(r_km: float, l_m: float) -> float:
    """3D separation from 2D distance and antenna height difference."""
    l_km = l_m / 1000.0
    return math.sqrt(r_km * r_km + l_km * l_km)


def los_probability(w_km, params: PathLossParams = PathLossParams()):
    """Two-piece exponential LoS probability over 3D distance, clamped to [0, 1].

    Near piece (w <= d1): 1 - 5 exp(-R1/w); far piece: 5 exp(-w/R2).
    The two pieces do not quite meet at d1 (0.5 vs ~0.523); the jump is
    inherent to the model constants and left as printed.
    """
    w_m = np.asarray(w_km, dtype=np.float64) * 1000.0
    if np.any(w_m <= 0):
        raise ValueError("los_probability requires w > 0")
    near = 1.0 - 5.0 * np.exp(-params.r1_m / w_m)
    far = 5.0 * np.exp(-w_m / params.r2_m)
    p = np.where(w_m <= params.d1_m, near, far)
    p = np.clip(p, 0.0, 1.0)
    return float(p) if np.isscalar(w_km) else p


def path_loss(w_km, is_los, params: PathLossParams = PathLossParams()):
    """Linear path gain A * w^(-alpha) with the LoS or NLoS constants."""
    w = np.asarray(w_km, dtype=np.float64)
    if np.any(w <= 0):
        raise ValueError("path_loss requires w > 0")
    g = np.where(is_los,
                 params.a_los * w ** -params.alpha_los,
                 params.a_nlos * w ** -params.alpha_nlos)
    return float(g) if np.isscalar(w_km) else g


def k_factor_db(w_km):
    """Rician K-factor in dB, 13 - 0.03 w with w in meters, floored at 0 dB.

    The linear formula goes negative past ~433 m; K is a power ratio so it
    is floored there (LoS probability at that range is already ~0).
    """
    w_m = np.asarray(w_km, dtype=np.float64) * 1000.0
    k = np.maximum(13.0 - 0.03 * w_m, 0.0)
    return float(k) if np.isscalar(w_km) else k


def k_factor_linear(w_km):
    k = 10.0 ** (np.asarray(k_factor_db(w_km)) / 10.0)
    return float(k) if np.isscalar(w_km) else k


def rician_power_pdf(h, k_linear: float):
    """Density of the unit-mean LoS fading power for a given K-factor.

    Non-central chi-squared form: (K+1) exp(-K-(K+1)h) I0(2 sqrt(K(K+1)h)),
    evaluated with the exponentially scaled Bessel function for stability.
    """
    h = np.asarray(h, dtype=np.float64)
    k = float(k_linear)
    arg = 2.0 * np.sqrt(k * (k + 1.0) * np.clip(h, 0.0, None))
    return (k + 1.0) * i0e(arg) * np.exp(-k - (k + 1.0) * h + arg)


def sample_fading_powers(los_mask: np.ndarray, k_linear: np.ndarray,
                         variant: str, rng: np.random.Generator) -> np.ndarray:
    """Unit-mean multi-path fading power per link.

    Baseline variant: exponential (Rayleigh power) everywhere.  Advanced
    variant: LoS links get Rician power |sqrt(K/(K+1)) + sqrt(1/(K+1)) z|^2
    with z a standard circular complex Gaussian; NLoS links stay exponential.
    Draw order is fixed (normals, then exponentials) for reproducibility.
    """
    shape = np.shape(los_mask)
    if variant != VARIANT_3GPP_ADVANCED:
        return rng.exponential(1.0, size=shape)
    zr = rng.normal(0.0, math.sqrt(0.5), size=shape)
    zi = rng.normal(0.0, math.sqrt(0.5), size=shape)
    h_nlos = rng.exponential(1.0, size=shape)
    k = np.asarray(k_linear, dtype=np.float64)
    mean_amp = np.sqrt(k / (k + 1.0))
    scatter = np.sqrt(1.0 / (k + 1.0))
    h_los = (mean_amp + scatter * zr) ** 2 + (scatter * zi) ** 2
    return np.where(los_mask, h_los, h_nlos)


@dataclass(frozen=True)
class ShadowFields:
    """Per-drop shadowing components in dB; empty arrays when disabled."""

    s_ue_db: np.ndarray
    s_bs_db: np.ndarray
    tau: float

    @property
    def enabled(self) -> bool:
        return self.s_ue_db.size > 0

    def combine_db(self, ue_indices, bs_indices) -> np.ndarray:
        """Correlated per-link shadowing: sqrt(tau) S_ue + sqrt(1-tau) S_bs."""
        return (math.sqrt(self.tau) * self.s_ue_db[ue_indices]
                + math.sqrt(1.0 - self.tau) * self.s_bs_db[bs_indices])


def draw_shadow_fields(n_ue: int, n_bs: int, params: ShadowParams,
                       variant: str, rng: np.random.Generator) -> ShadowFields:
    """Fresh zero-mean components each drop; disabled outside the advanced variant."""
    if variant != VARIANT_3GPP_ADVANCED:
        return ShadowFields(np.empty(0), np.empty(0), params.tau)
    s_ue = rng.normal(0.0, params.sigma_shad_db, size=n_ue)
    s_bs = rng.normal(0.0, params.sigma_shad_db, size=n_bs)
    return ShadowFields(s_ue, s_bs, params.tau)


def realize_link_gains(bs_xy: np.ndarray, ue_xy: np.ndarray, side_km: float,
                       l_m: float, params: PathLossParams, los_key: int,
                       shadow: ShadowFields,
                       ue_index_offset: int = 0) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Materialize every BS-UE link of a drop (reference path, O(n_ue * n_bs) memory).

    Returns (gain, w_km, is_los) with shape (n_ue, n_bs).  The long-term
    gain is path loss times the linear shadowing factor; multi-path fading
    is never part of it.  The chunked kernel in ``kernels`` computes the
    same quantities without materializing the matrices.
    """
    n_ue = ue_xy.shape[0]
    n_bs = bs_xy.shape[0]
    l_km = l_m / 1000.0
    d = np.abs(ue_xy[:, None, :] - bs_xy[None, :, :])
    d = np.minimum(d, side_km - d)
    w2 = d[..., 0] ** 2 + d[..., 1] ** 2 + l_km * l_km
    w = np.sqrt(np.maximum(w2, MIN_W2_KM2))
    u = pair_uniforms(los_key,
                      np.arange(ue_index_offset, ue_index_offset + n_ue)[:, None],
                      np.arange(n_bs)[None, :])
    is_los = u < los_probability(w, params)
    gain = path_loss(w, is_los, params)
    if shadow.enabled:
        s_db = shadow.combine_db(np.arange(n_ue)[:, None], np.arange(n_bs)[None, :])
        gain = gain * 10.0 ** (s_db / 10.0)
    return gain, w, is_los
