"""Peak location and envelope fitting on population trajectories.

Everything here takes a vectorized callable ``f(times) -> values`` so peaks
found on a coarse grid can be refined by evaluating the trajectory again.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import curve_fit, minimize_scalar
from scipy.signal import find_peaks

REFINE_XTOL = 1e-6


def _scalar(f):
    return lambda x: float(np.asarray(f(np.array([x])))[0])


def refine_maximum(f, lo: float, mid: float, hi: float, xtol: float = REFINE_XTOL) -> tuple[float, float]:
    """Golden-section refinement of a maximum bracketed by ``lo < mid < hi``."""
    neg = lambda x: -_scalar(f)(x)  # noqa: E731
    try:
        res = minimize_scalar(neg, bracket=(lo, mid, hi), method="golden", tol=xtol)
        x = float(res.x)
        if not lo <= x <= hi:
            raise ValueError("left the bracket")
    except ValueError:
        res = minimize_scalar(neg, bounds=(lo, hi), method="bounded", options={"xatol": xtol * max(abs(mid), 1.0)})
        x = float(res.x)
    value = -neg(x)
    mid_value = _scalar(f)(mid)
    if mid_value > value:
        return mid, mid_value
    return x, value


def local_maxima(f, times, min_prominence: float = 0.0, xtol: float = REFINE_XTOL):
    """Interior local maxima of ``f`` found on ``times`` and refined.

    Returns arrays ``(peak_times, peak_values)``.
    """
    t = np.asarray(times, dtype=float)
    y = np.asarray(f(t), dtype=float)
    idx, _ = find_peaks(y, prominence=min_prominence if min_prominence > 0 else None)
    tp, vp = [], []
    for i in idx:
        x, v = refine_maximum(f, t[i - 1], t[i], t[i + 1], xtol)
        tp.append(x)
        vp.append(v)
    return np.array(tp), np.array(vp)


def local_minima(f, times, min_prominence: float = 0.0, xtol: float = REFINE_XTOL):
    tp, vp = local_maxima(lambda x: -np.asarray(f(x)), times, min_prominence, xtol)
    return tp, -vp


def first_transfer_peak(f, times, fraction: float = 0.9, prominence: float = 0.5, xtol: float = REFINE_XTOL):
    """First refined local maximum reaching ``fraction`` of the largest sampled value.

    Peaks must also stand ``prominence`` (relative to that largest value)
    above their surroundings, which skips ripples riding on a rising slope.
    Returns ``(time, value)`` or ``None`` if no interior peak qualifies.
    """
    t = np.asarray(times, dtype=float)
    y = np.asarray(f(t), dtype=float)
    if y.size < 3:
        return None
    top = float(np.max(y))
    if top <= 0:
        return None
    idx, _ = find_peaks(y, height=fraction * top, prominence=prominence * top)
    if idx.size == 0:
        return None
    i = int(idx[0])
    return refine_maximum(f, t[i - 1], t[i], t[i + 1], xtol)


def half_cycle_peaks(f, t_max: float, rate: float, parity: int = 1, points: int = 41):
    """Maxima of ``f`` near ``k pi / rate`` for ``k`` of the given parity.

    Each maximum is searched within a quarter half-cycle of its nominal time,
    so the result tracks one branch of peaks even where it shrinks to zero.
    """
    if rate <= 0:
        raise ValueError("rate must be positive")
    half = math.pi / rate
    width = half / 4
    tp, vp = [], []
    k = parity
    while k * half <= t_max:
        centre = k * half
        grid = np.linspace(max(centre - width, 0.0), min(centre + width, t_max), points)
        y = np.asarray(f(grid), dtype=float)
        i = int(np.argmax(y))
        if 0 < i < points - 1:
            x, v = refine_maximum(f, grid[i - 1], grid[i], grid[i + 1])
        else:
            x, v = float(grid[i]), float(y[i])
        tp.append(x)
        vp.append(v)
        k += 2
    return np.array(tp), np.array(vp)


def _cos2(t, rate):
    return np.cos(rate * t / 2) ** 2


def fit_beat_envelope(peak_times, peak_values, max_rate: float | None = None, n_grid: int = 4000):
    """Fit ``cos^2(delta t / 2)`` to envelope samples; returns ``(|delta|, rms)``.

    ``delta`` is found by a grid search before least-squares polishing, so no
    starting guess is needed.
    """
    t = np.asarray(peak_times, dtype=float)
    y = np.asarray(peak_values, dtype=float)
    if t.size < 2:
        raise ValueError("need at least two envelope samples")
    span = float(np.max(t))
    lo = 0.1 * math.pi / span
    hi = max_rate if max_rate is not None else math.pi / float(np.min(np.diff(np.sort(t))))
    grid = np.geomspace(lo, hi, n_grid)
    sse = ((_cos2(t[None, :], grid[:, None]) - y[None, :]) ** 2).sum(axis=1)
    start = grid[int(np.argmin(sse))]
    (rate,), _ = curve_fit(_cos2, t, y, p0=[start])
    rate = abs(float(rate))
    rms = float(np.sqrt(np.mean((_cos2(t, rate) - y) ** 2)))
    return rate, rms
