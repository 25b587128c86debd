"""Kernel density estimation on the normalized axis and plot-height rules.

The density estimate drives two things: the automatic plot height (tall
enough to stack the dots at the densest data coordinate) and the varying
height profile used by the centrality variant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

GRID_SIZE = 512
# Smallest bandwidth we allow: one grid cell. Guards against zero-spread
# samples where Silverman's rule collapses.
BANDWIDTH_FLOOR = 1.0 / GRID_SIZE


@dataclass(frozen=True)
class DensityEstimate:
    """Gaussian KDE evaluated on a fixed 512-point grid over [0, 1].

    Linear interpolation between grid points defines d(x) for any x; queries
    outside [0, 1] clamp to the nearest endpoint.
    """

    grid: np.ndarray
    values: np.ndarray
    bandwidth: float
    d_max: float

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.float64)
        if grid.shape != (GRID_SIZE,) or values.shape != (GRID_SIZE,):
            raise ValueError(f"grid and values must have shape ({GRID_SIZE},)")
        if np.any(values < 0):
            raise ValueError("density values must be non-negative")
        if not (self.d_max > 0):
            raise ValueError("d_max must be positive")
        for name, a in (("grid", grid), ("values", values)):
            a = np.array(a, copy=True)
            a.flags.writeable = False
            object.__setattr__(self, name, a)

    def evaluate(self, x) -> np.ndarray:
        """Linearly interpolated density at x (scalar or array), clamped to [0, 1]."""
        x = np.clip(np.asarray(x, dtype=np.float64), 0.0, 1.0)
        t = x * (GRID_SIZE - 1)
        i0 = np.minimum(t.astype(np.intp), GRID_SIZE - 2)
        frac = t - i0
        v = self.values
        return v[i0] + (v[i0 + 1] - v[i0]) * frac


def silverman_bandwidth(xs: np.ndarray) -> float:
    """0.9 * min(std, IQR/1.34) * n^(-1/5), floored at one grid cell."""
    xs = np.asarray(xs, dtype=np.float64)
    n = xs.size
    std = float(np.std(xs))
    q75, q25 = np.percentile(xs, [75, 25])
    iqr = float(q75 - q25)
    spread = min(std, iqr / 1.34)
    return max(0.9 * spread * n ** (-0.2), BANDWIDTH_FLOOR)


def estimate_density(xs, bandwidth: Optional[float] = None) -> DensityEstimate:
    """Gaussian-kernel KDE of normalized values on the 512-point grid.

    Kernel mass falling outside [0, 1] is reflected back at both endpoints,
    so the result stays a density on the normalized domain.
    """
    xs = np.asarray(xs, dtype=np.float64)
    if xs.ndim != 1 or xs.size == 0:
        raise ValueError("xs must be a non-empty 1-D array")
    if np.any(xs < 0) or np.any(xs > 1):
        raise ValueError("xs must lie in [0, 1]")
    if bandwidth is None:
        bandwidth = silverman_bandwidth(xs)
    elif not (bandwidth > 0):
        raise ValueError(f"bandwidth must be positive, got {bandwidth}")
    bw = float(bandwidth)

    grid = np.linspace(0.0, 1.0, GRID_SIZE)
    # Direct summation over the sample plus its reflections at 0 and 1.
    sources = np.concatenate([xs, -xs, 2.0 - xs])
    z = (grid[:, None] - sources[None, :]) / bw
    kernel = np.exp(-0.5 * z * z)
    values = kernel.sum(axis=1) / (xs.size * bw * np.sqrt(2.0 * np.pi))
    return DensityEstimate(
        grid=grid,
        values=values,
        bandwidth=bw,
        d_max=float(np.max(values)),
    )


def automatic_height(d_max: float, n: int, r: float) -> float:
    """Plot height that fits the dots stacked at the densest coordinate.

    r^2 * d_max * n, floored at 2r so at least one dot diameter of vertical
    room always exists.
    """
    if not (d_max > 0 and n > 0 and r > 0):
        raise ValueError("d_max, n and r must all be positive")
    return max(r * r * d_max * n, 2.0 * r)


def height_profile(d: DensityEstimate, n: int, r: float) -> Callable[[np.ndarray], np.ndarray]:
    """Varying height h(x) = max(2r, r^2 * d(x) * n) for the centrality variant."""
    if not (n > 0 and r > 0):
        raise ValueError("n and r must be positive")

    def profile(x):
        return np.maximum(2.0 * r, r * r * d.evaluate(x) * n)

    return profile
