"""Compiled inner loops for plan scoring and the SFLA local search.

All kernels consume the caller's ``numpy.random.Generator`` in a fixed
order, so runs stay reproducible under a seed.
"""

import math

import numpy as np
from numba import njit

from .radio import BER_FLOOR, MOD_CODE_MAX, MOD_CODE_MIN, POWER_CODE_MAX

LOG10_HALF = math.log10(0.5)


@njit(cache=True)
def score_row(ber_flat, rate, power_mw, stride, n_mod, power_scale, w, power, modulation, out):
    """Write (f_rate, f_ber, f_power, mean_ber, fitness) of one plan into ``out``."""
    n = power.shape[0]
    ber_sum = 0.0
    rate_sum = 0.0
    mw_sum = 0.0
    for i in range(n):
        p = power[i]
        m0 = modulation[i] - MOD_CODE_MIN
        ber_sum += ber_flat[i * stride + p * n_mod + m0]
        rate_sum += rate[m0]
        mw_sum += power_mw[p]
    pbe = ber_sum / n
    f_rate = rate_sum / n
    f_power = 1.0 - mw_sum * power_scale
    clamped = min(max(pbe, BER_FLOOR), 0.5)
    f_ber = 1.0 - LOG10_HALF / math.log10(clamped)
    out[0] = f_rate
    out[1] = f_ber
    out[2] = f_power
    out[3] = pbe
    out[4] = w[0] * f_rate + w[1] * f_ber + w[2] * f_power


@njit(cache=True)
def score_one(ber_flat, rate, power_mw, stride, n_mod, power_scale, w, power, modulation):
    out = np.empty(5)
    score_row(ber_flat, rate, power_mw, stride, n_mod, power_scale, w, power, modulation, out)
    return out[4]


@njit(cache=True)
def score_many(ber_flat, rate, power_mw, stride, n_mod, power_scale, w, power, modulation):
    """Fitness of each row of ``(k, n)`` power and modulation code stacks."""
    k = power.shape[0]
    fits = np.empty(k)
    out = np.empty(5)
    for j in range(k):
        score_row(ber_flat, rate, power_mw, stride, n_mod, power_scale, w, power[j], modulation[j], out)
        fits[j] = out[4]
    return fits


@njit(cache=True)
def jump_into(dst, worst, guide, rng, absolute, s_max):
    """Leap ``worst`` relative to ``guide`` into ``dst`` (all shaped ``(2, n)``).

    One uniform draw per scalar, power row first. ``s_max <= 0`` means no
    step limit.
    """
    n = worst.shape[1]
    for row in range(2):
        lo = 0 if row == 0 else MOD_CODE_MIN
        hi = POWER_CODE_MAX if row == 0 else MOD_CODE_MAX
        for i in range(n):
            gap = guide[row, i] - worst[row, i]
            if absolute:
                gap = abs(gap)
            step = int(math.floor(rng.random() * gap + 0.5))
            if s_max > 0:
                step = min(max(step, -s_max), s_max)
            v = worst[row, i] + step
            dst[row, i] = min(max(v, lo), hi)


@njit(cache=True)
def random_into(dst, rng):
    n = dst.shape[1]
    for i in range(n):
        dst[0, i] = rng.integers(0, POWER_CODE_MAX + 1)
    for i in range(n):
        dst[1, i] = rng.integers(MOD_CODE_MIN, MOD_CODE_MAX + 1)


@njit(cache=True)
def improve(X, fit, members, guide, rng, iterations, absolute, s_max,
            ber_flat, rate, power_mw, stride, n_mod, power_scale, w):
    """Local search of one memeplex (population indices ``members``), in place.

    Returns how many times the random-replacement branch fired.
    """
    n = X.shape[2]
    cand = np.empty((2, n), dtype=X.dtype)
    restarts = 0
    for _ in range(iterations):
        b = members[0]
        wst = members[0]
        for idx in members:
            if fit[idx] > fit[b]:
                b = idx
            if fit[idx] <= fit[wst]:
                wst = idx
        jump_into(cand, X[wst], X[b], rng, absolute, s_max)
        f = score_one(ber_flat, rate, power_mw, stride, n_mod, power_scale, w, cand[0], cand[1])
        if f > fit[wst]:
            X[wst] = cand
            fit[wst] = f
            continue
        jump_into(cand, X[wst], guide, rng, absolute, s_max)
        f = score_one(ber_flat, rate, power_mw, stride, n_mod, power_scale, w, cand[0], cand[1])
        if f > fit[wst]:
            X[wst] = cand
            fit[wst] = f
            continue
        random_into(cand, rng)
        X[wst] = cand
        fit[wst] = score_one(ber_flat, rate, power_mw, stride, n_mod, power_scale, w, cand[0], cand[1])
        restarts += 1
    return restarts


@njit(cache=True)
def shuffle_cycle(X, fit, m, guide, rng, iterations, absolute, s_max,
                  ber_flat, rate, power_mw, stride, n_mod, power_scale, w):
    """Local search over the ``m`` interleaved memeplexes of a best-first population."""
    size = X.shape[0]
    restarts = 0
    for k in range(m):
        members = np.arange(k, size, m)
        restarts += improve(X, fit, members, guide, rng, iterations, absolute, s_max,
                            ber_flat, rate, power_mw, stride, n_mod, power_scale, w)
    return restarts
