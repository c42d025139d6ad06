"""Integration of the positive part of a sampled signal."""
from typing import List, NamedTuple, Tuple

import numpy as np

from .errors import InputError


class PositivePart(NamedTuple):
    value: float
    intervals: List[Tuple[float, float]]
    running: np.ndarray


def positive_part_integral(t, y, eps=0.0) -> PositivePart:
    """Integrate ``max(y, 0)`` over the piecewise-linear interpolant of ``y``.

    Segments whose endpoints change sign are split at the linearly
    interpolated zero, so the result is the trapezoid rule with each
    sign-change bracket refined once. Samples with ``y <= eps`` count as
    non-positive when reporting intervals, and a segment contributes only if
    one of its endpoints exceeds ``eps``.

    Returns
    -------
    PositivePart
        ``value``, the list of ``(t_start, t_end)`` intervals where
        ``y > eps``, and the running (cumulative) integral on ``t``.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if t.shape != y.shape or t.ndim != 1:
        raise InputError("t and y must be 1-d arrays of equal length")
    if len(t) < 2:
        return PositivePart(0.0, [], np.zeros_like(t))

    y0, y1 = y[:-1], y[1:]
    h = np.diff(t)
    active = (y0 > eps) | (y1 > eps)
    both = (y0 >= 0) & (y1 >= 0)
    cross = ~both & ((y0 > 0) | (y1 > 0))
    seg = np.zeros_like(h)
    seg[both] = 0.5 * h[both] * (y0[both] + y1[both])
    top = np.maximum(y0[cross], y1[cross])
    seg[cross] = 0.5 * h[cross] * top * top / np.abs(y0[cross] - y1[cross])
    seg[~active] = 0.0
    running = np.concatenate([[0.0], np.cumsum(seg)])

    above = y > eps
    intervals = []
    idx = np.flatnonzero(np.diff(above.astype(np.int8)))
    edges = [0] if above[0] else []
    edges += list(idx + 1)
    if above[-1]:
        edges.append(len(y))

    def crossing(i):
        # zero of the linear interpolant between samples i and i + 1
        if y[i] == y[i + 1]:
            return t[i]
        return t[i] + (t[i + 1] - t[i]) * y[i] / (y[i] - y[i + 1])

    for start, stop in zip(edges[::2], edges[1::2]):
        a = t[0] if start == 0 else crossing(start - 1)
        b = t[-1] if stop == len(y) else crossing(stop - 1)
        intervals.append((float(a), float(b)))
    return PositivePart(float(running[-1]), intervals, running)
