"""Shared oracle helpers: independent, scalar-Python reference implementations
used to cross-check the vectorized code paths."""

import math

import numpy as np

from bluedots import MetricKind
from bluedots.density import GRID_SIZE


def oracle_metric(spec, p1, p2) -> float:
    """Weighted-L1 distance computed with plain Python floats."""
    x1, y1 = float(p1[0]), float(p1[1])
    x2, y2 = float(p2[0]), float(p2[1])
    if spec.kind is MetricKind.UNIFORM:
        w = 2.0
    else:
        if spec.x_reference == "midpoint":
            ref = (x1 + x2) / 2.0
        else:
            ref = (x1 - x2) / 2.0
        ref = min(max(ref, 0.0), 1.0)
        t = ref * (GRID_SIZE - 1)
        i0 = min(int(t), GRID_SIZE - 2)
        frac = t - i0
        v = spec.density.values
        d = float(v[i0]) + (float(v[i0 + 1]) - float(v[i0])) * frac
        w = 1.0 + d / spec.density.d_max
    return w * abs(x1 - x2) + abs(y1 - y2)


def oracle_nearest_dot_scan(layout, sites, spec) -> np.ndarray:
    """Exhaustive nearest-dot search, ties to the lowest dot index."""
    xs = [float(v) for v in layout.x]
    ys = [float(v) for v in layout.y]
    owners = []
    for sx, sy in sites:
        sx, sy = float(sx), float(sy)
        best, best_d = 0, math.inf
        for i in range(len(xs)):
            d = oracle_metric(spec, (xs[i], ys[i]), (sx, sy))
            if d < best_d:
                best, best_d = i, d
        owners.append(best)
    return np.array(owners, dtype=np.intp)


def oracle_pairwise_min_distance(layout) -> float:
    pts = layout.points()
    best = math.inf
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            best = min(best, math.hypot(pts[i, 0] - pts[j, 0], pts[i, 1] - pts[j, 1]))
    return best


def oracle_overlap(layout) -> float:
    """Hinge-overlap computed with scalar loops."""
    pts = layout.points()
    r = layout.domain.radius
    total = 0.0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = math.hypot(pts[i, 0] - pts[j, 0], pts[i, 1] - pts[j, 1])
            total += max(0.0, 1.0 - d / (2.0 * r))
    return total / len(pts)
