"""Reproducible random-stream derivation for parallel Monte Carlo drops.

Every random quantity in a drop comes from a stream derived from
``(master_seed, sweep_point_id, drop_index, substream_tag)``, so drops can
execute in any order, on any number of workers, with bit-identical output.

Count draws, positions, shadowing, fading and scheduling use numpy
generators seeded from the full tuple.  Per-link LoS draws instead use a
counter-based hash of ``(drop key, ue index, bs index)``: the uniform for a
pair is a pure function of its indices, so it can be evaluated lazily, in
chunks, or re-derived later in the drop, always yielding the same value.
"""

from __future__ import annotations

import numpy as np

# substream tags (the fixed tag set for one drop)
TAG_BS_POSITIONS = 0
TAG_UE_POSITIONS = 1
TAG_LOS = 2
TAG_SHADOW = 3
TAG_FADING = 4
TAG_SCHEDULING = 5
TAG_HEX_OFFSET = 6

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_PAIR_UE = 0x9E3779B97F4A7C15
_PAIR_BS = 0xC2B2AE3D27D4EB4F
# 2**-53, maps the top 53 bits of a u64 to [0, 1)
_INV53 = 1.1102230246251565e-16


def substream(master_seed: int, point_id: int, drop_index: int, tag: int) -> np.random.Generator:
    """Independent generator for one (point, drop, tag) combination."""
    return np.random.default_rng([master_seed, point_id, drop_index, tag])


def mix64(value: int) -> int:
    """SplitMix64 finalizer; full-avalanche 64-bit bijection."""
    z = value & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def los_pair_key(master_seed: int, point_id: int, drop_index: int) -> int:
    """64-bit key for the drop's per-link LoS hash stream."""
    z = mix64(master_seed + _GOLDEN)
    z = mix64(z ^ mix64(point_id + 2 * _GOLDEN))
    z = mix64(z ^ mix64(drop_index + 3 * _GOLDEN))
    return mix64(z ^ mix64(TAG_LOS + 4 * _GOLDEN))


def pair_uniform(key: int, ue_index: int, bs_index: int) -> float:
    """Uniform [0, 1) draw for one UE-BS pair; pure in its arguments."""
    z = mix64((key + _PAIR_UE * (ue_index + 1)) & _MASK64)
    z = mix64((z + _PAIR_BS * (bs_index + 1)) & _MASK64)
    return (z >> 11) * _INV53


def pair_uniforms(key: int, ue_indices: np.ndarray, bs_indices: np.ndarray) -> np.ndarray:
    """Vectorized ``pair_uniform`` over broadcastable index arrays."""
    with np.errstate(over="ignore"):
        k = np.uint64(key)
        z = k + np.uint64(_PAIR_UE) * (ue_indices.astype(np.uint64) + np.uint64(1))
        z = _mix64_array(z)
        z = z + np.uint64(_PAIR_BS) * (bs_indices.astype(np.uint64) + np.uint64(1))
        z = _mix64_array(z)
    return (z >> np.uint64(11)).astype(np.float64) * _INV53


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))
