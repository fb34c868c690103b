"""User association, BS idle mode and single-RB scheduling."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import ConfigError


@dataclass(frozen=True)
class Schedule:
    """Active BSs (ascending index) and the one UE each transmits on the RB."""

    active_bs: np.ndarray     # (n_active,) BS indices, ascending
    scheduled_ue: np.ndarray  # (n_active,) UE indices, aligned with active_bs
    served_counts: np.ndarray  # (n_bs,) UEs associated per BS


def associate_from_gains(gains: np.ndarray) -> np.ndarray:
    """Serving BS per UE: argmax of long-term gain, lowest index on ties.

    ``gains`` has shape (n_ue, n_bs) and must hold long-term gains only
    (path loss and shadowing, no multi-path fading).
    """
    if gains.ndim != 2 or gains.shape[1] == 0:
        raise ConfigError("associate: no candidate BSs")
    return np.argmax(gains, axis=1)


def build_schedule(serving_bs: np.ndarray, n_bs: int,
                   rng: np.random.Generator) -> Schedule:
    """Idle-mode schedule: BSs with no UE sleep, the rest pick one served UE
    uniformly at random, giving exactly one uplink transmission per active BS.
    """
    counts = np.bincount(serving_bs, minlength=n_bs)
    active = np.flatnonzero(counts)
    if active.size == 0:
        return Schedule(active_bs=active,
                        scheduled_ue=np.empty(0, dtype=np.int64),
                        served_counts=counts)
    # stable sort groups UEs by serving BS while preserving UE order in groups
    order = np.argsort(serving_bs, kind="stable")
    starts = np.cumsum(counts) - counts
    picks = rng.integers(0, counts[active])
    scheduled = order[starts[active] + picks]
    return Schedule(active_bs=active, scheduled_ue=scheduled, served_counts=counts)


def analytical_active_density(bs_density: float, ue_density: float, q: float) -> float:
    """Closed-form active-BS density under idle mode.

    lambda * [1 - (1 + rho/(q lambda))^(-q)]; tends to rho as lambda grows
    and to lambda when UEs are plentiful.
    """
    if bs_density <= 0 or ue_density <= 0 or q <= 0:
        raise ValueError("analytical_active_density requires positive arguments")
    return bs_density * (1.0 - (1.0 + ue_density / (q * bs_density)) ** -q)
