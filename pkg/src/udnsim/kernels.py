"""Numba kernels for the per-drop link scan.

The association scan visits every BS-UE pair without materializing the
link matrix.  Because the per-pair LoS uniform is a counter-based hash
(pure in the pair indices), two exact shortcuts apply:

* a pair whose best possible gain (LoS constants, largest shadowing
  component) cannot beat the UE's current best is skipped outright; its
  LoS draw is simply never observed, which changes nothing downstream;
* for far pairs, NLoS can usually be certified from the hash value with a
  divisor polynomial bound on 5 exp(-w/R2), avoiding the exponential.

Both shortcuts leave the selected serving BS and its gain bit-identical to
the brute-force scan (asserted in the test suite).  ``link_rows`` then
re-derives the exact same per-pair quantities for the small scheduled-UE
by active-BS matrix used in the SINR stage.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

U64_1 = np.uint64(1)
_PAIR_UE = np.uint64(0x9E3779B97F4A7C15)
_PAIR_BS = np.uint64(0xC2B2AE3D27D4EB4F)
_INV53 = 1.1102230246251565e-16
_LN10_OVER_10 = 0.23025850929940458
_MIN_W2 = 1e-18


@njit(cache=True, inline="always")
def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@njit(cache=True, inline="always")
def _pair_uniform(key, ue_index, bs_index):
    z = _mix64(key + _PAIR_UE * (np.uint64(ue_index) + U64_1))
    z = _mix64(z + _PAIR_BS * (np.uint64(bs_index) + U64_1))
    return (z >> np.uint64(11)) * _INV53


@njit(cache=True, inline="always")
def _torus_w2(xu, yu, xb, yb, side, half, l2):
    dx = abs(xu - xb)
    if dx > half:
        dx = side - dx
    dy = abs(yu - yb)
    if dy > half:
        dy = side - dy
    w2 = dx * dx + dy * dy + l2
    if w2 < _MIN_W2:
        w2 = _MIN_W2
    return w2


@njit(cache=True, inline="always")
def _los_draw_exact(u01, w2, d1_km2, r1_m, r2_m):
    w_m = math.sqrt(w2) * 1000.0
    if w2 <= d1_km2:
        prl = 1.0 - 5.0 * math.exp(-r1_m / w_m)
        if prl < 0.0:
            prl = 0.0
    else:
        prl = 5.0 * math.exp(-w_m / r2_m)
        if prl > 1.0:
            prl = 1.0
    return u01 < prl


@njit(cache=True)
def associate_scan(bs_x, bs_y, ue_x, ue_y, ue_index_offset, side, l2,
                   ln_a_los, ln_a_nlos, alpha_los, alpha_nlos,
                   r1_m, r2_m, d1_km2, los_key,
                   s_ue_db, s_bs_db, sqrt_tau, sqrt_1m_tau, use_shadow, s_bs_max,
                   serving_out, serving_ln_gain_out):
    """Max long-term-gain association for a block of UEs against all BSs.

    Writes the winning BS index and its natural-log gain per UE.  Ties are
    impossible to observe under continuous gains but the strict comparison
    keeps the lowest BS index if they occur.
    """
    half = 0.5 * side
    n_bs = bs_x.shape[0]
    n_ue = ue_x.shape[0]
    inv_r2 = 1000.0 / r2_m
    for u in range(n_ue):
        xu = ue_x[u]
        yu = ue_y[u]
        gu = np.uint64(ue_index_offset + u)
        su = sqrt_tau * s_ue_db[u] if use_shadow else 0.0
        # largest shadowing any BS could contribute on this row
        row_margin = _LN10_OVER_10 * (su + sqrt_1m_tau * s_bs_max) if use_shadow else 0.0
        best = -1.0e308
        best_b = 0
        w2_skip = 1.0e308   # beyond this not even a LoS draw can win
        w2_nlos = 1.0e308   # beyond this an NLoS draw cannot win
        for b in range(n_bs):
            w2 = _torus_w2(xu, yu, bs_x[b], bs_y[b], side, half, l2)
            if w2 > w2_skip:
                continue
            u01 = _pair_uniform(los_key, gu, np.uint64(b))
            if w2 > d1_km2:
                # 5 exp(-x) <= 5 / (1 + x + x^2/2 + x^3/6 + x^4/24); if the
                # hash value clears the bound the pair is certainly NLoS
                x = math.sqrt(w2) * inv_r2
                x2 = x * x
                denom = (1.0 + x + 0.5 * x2 + 0.16666666666666666 * x2 * x
                         + 0.041666666666666664 * x2 * x2)
                if u01 * denom >= 5.0:
                    is_los = False
                else:
                    is_los = _los_draw_exact(u01, w2, d1_km2, r1_m, r2_m)
            else:
                is_los = _los_draw_exact(u01, w2, d1_km2, r1_m, r2_m)
            if is_los:
                ln_g = ln_a_los - alpha_los * 0.5 * math.log(w2)
            else:
                if w2 > w2_nlos:
                    continue
                ln_g = ln_a_nlos - alpha_nlos * 0.5 * math.log(w2)
            if use_shadow:
                ln_g += _LN10_OVER_10 * (su + sqrt_1m_tau * s_bs_db[b])
            if ln_g > best:
                best = ln_g
                best_b = b
                adj = best - row_margin
                cut_los = math.exp(2.0 * (ln_a_los - adj) / alpha_los)
                cut_nlos = math.exp(2.0 * (ln_a_nlos - adj) / alpha_nlos)
                w2_nlos = cut_nlos
                w2_skip = cut_los if cut_los > cut_nlos else cut_nlos
        serving_out[u] = best_b
        serving_ln_gain_out[u] = best


@njit(cache=True)
def link_rows(ue_global_idx, ue_x, ue_y, bs_global_idx, bs_x, bs_y,
              side, l2, ln_a_los, ln_a_nlos, alpha_los, alpha_nlos,
              r1_m, r2_m, d1_km2, los_key,
              s_ue_db, s_bs_db, sqrt_tau, sqrt_1m_tau, use_shadow,
              gain_out, w_out, los_out):
    """Exact link realization for selected UEs x selected BSs.

    Re-derives the same LoS draw and gain expression as ``associate_scan``
    for each pair, so a pair seen in both places has identical channel
    state within the drop.
    """
    half = 0.5 * side
    n_ue = ue_x.shape[0]
    n_bs = bs_x.shape[0]
    for i in range(n_ue):
        gu = np.uint64(ue_global_idx[i])
        su = sqrt_tau * s_ue_db[i] if use_shadow else 0.0
        for j in range(n_bs):
            w2 = _torus_w2(ue_x[i], ue_y[i], bs_x[j], bs_y[j], side, half, l2)
            u01 = _pair_uniform(los_key, gu, np.uint64(bs_global_idx[j]))
            is_los = _los_draw_exact(u01, w2, d1_km2, r1_m, r2_m)
            if is_los:
                ln_g = ln_a_los - alpha_los * 0.5 * math.log(w2)
            else:
                ln_g = ln_a_nlos - alpha_nlos * 0.5 * math.log(w2)
            if use_shadow:
                ln_g += _LN10_OVER_10 * (su + sqrt_1m_tau * s_bs_db[j])
            gain_out[i, j] = math.exp(ln_g)
            w_out[i, j] = math.sqrt(w2)
            los_out[i, j] = is_los
