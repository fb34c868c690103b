"""Uplink power control and SINR evaluation on the shared resource block."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import PowerControlParams


@dataclass(frozen=True)
class UplinkSamples:
    """Per-scheduled-UE uplink quantities, aligned with the schedule order."""

    tx_power_mw: np.ndarray
    signal_mw: np.ndarray
    interference_mw: np.ndarray
    noise_mw: float
    sinr_linear: np.ndarray


def ue_tx_power_mw(long_term_gain, p0_dbm: float, eta: float, n_rb: int):
    """Fractional path loss compensation transmit power in mW.

    10^(P0/10) * gain^(-eta) * N_RB, compensating the serving link's
    long-term gain (path loss and shadowing, never multi-path fading).
    """
    g = np.asarray(long_term_gain, dtype=np.float64)
    if np.any(g <= 0):
        raise ValueError("ue_tx_power_mw requires a positive long-term gain")
    p = 10.0 ** (p0_dbm / 10.0) * g ** -eta * n_rb
    return float(p) if np.isscalar(long_term_gain) else p


def compute_uplink_sinrs(gains: np.ndarray, fading: np.ndarray,
                         pc: PowerControlParams, noise_dbm: float) -> UplinkSamples:
    """SINR of every scheduled UE at its serving BS.

    ``gains[i, j]`` is the long-term gain from scheduled UE i to active BS j,
    ``fading[i, j]`` the multi-path power of that link; UE i is served by
    active BS i (diagonal).  The interference at BS j sums the other
    scheduled UEs' received powers in UE index order.
    """
    n = gains.shape[0]
    if gains.shape != (n, n) or fading.shape != (n, n):
        raise ValueError("gains and fading must be square and aligned with the schedule")
    serving_gain = np.diagonal(gains)
    tx_power = ue_tx_power_mw(serving_gain, pc.p0_dbm, pc.eta, pc.n_rb)
    received = tx_power[:, None] * gains * fading  # (tx UE i, rx BS j)
    signal = np.diagonal(received).copy()
    off_diagonal = received.copy()
    np.fill_diagonal(off_diagonal, 0.0)
    interference = off_diagonal.sum(axis=0)  # n-1 terms, fixed UE index order
    noise_mw = 10.0 ** (noise_dbm / 10.0)
    sinr = signal / (interference + noise_mw)
    return UplinkSamples(tx_power_mw=tx_power, signal_mw=signal,
                         interference_mw=interference, noise_mw=noise_mw,
                         sinr_linear=sinr)
