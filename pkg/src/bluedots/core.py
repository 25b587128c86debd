"""Domain types, coordinate normalization, and the dot-to-dot distance metrics.

Everything downstream (density estimation, the relaxation solver, analysis,
rendering) agrees on the conventions defined here: the encoding axis is
horizontal, normalized to [0, 1]; the non-encoding axis is vertical, spanning
[0, height] in the same normalized unit; dot order is positional and never
permuted.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .density import DensityEstimate


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class DataSet:
    """Ordered univariate sample, optionally tagged with class labels."""

    values: np.ndarray
    labels: Optional[tuple] = None
    name: Optional[str] = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("values must be a non-empty 1-D sequence")
        bad = np.flatnonzero(~np.isfinite(values))
        if bad.size:
            raise ValueError(f"non-finite value at index {int(bad[0])}")
        object.__setattr__(self, "values", _readonly(values))
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != values.size:
                raise ValueError(
                    f"labels length {len(labels)} != values length {values.size}"
                )
            object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def n_classes(self) -> int:
        return 0 if self.labels is None else len(set(self.labels))


@dataclass(frozen=True)
class PlotDomain:
    """Plot geometry: raw x-range plus normalized height and dot radius.

    The affine map (x - x_min) / (x_max - x_min) sends the raw range onto
    [0, 1]; ``height`` and ``radius`` are expressed in that normalized unit.
    """

    x_min: float
    x_max: float
    height: float
    radius: float

    def __post_init__(self):
        if not (self.x_min < self.x_max):
            raise ValueError(f"x_min {self.x_min} must be < x_max {self.x_max}")
        if not (self.height > 0):
            raise ValueError(f"height must be positive, got {self.height}")
        if not (self.radius > 0):
            raise ValueError(f"radius must be positive, got {self.radius}")

    def normalize_x(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=np.float64)
        return (values - self.x_min) / (self.x_max - self.x_min)

    def denormalize_x(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.float64)
        return self.x_min + xs * (self.x_max - self.x_min)


@dataclass(frozen=True)
class DotLayout:
    """Dot positions for one plot: x pinned to the data, y free in [0, height].

    Dot i corresponds to data value i; operations preserve order and count,
    and never touch x.
    """

    x: np.ndarray
    y: np.ndarray
    domain: PlotDomain
    labels: Optional[tuple] = None
    seed: int = 0
    iterations_run: int = 0

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.float64)
        if x.ndim != 1 or x.size == 0:
            raise ValueError("x must be a non-empty 1-D array")
        if y.shape != x.shape:
            raise ValueError(f"y shape {y.shape} != x shape {x.shape}")
        if self.labels is not None and len(self.labels) != x.size:
            raise ValueError("labels length does not match dot count")
        object.__setattr__(self, "x", _readonly(x))
        object.__setattr__(self, "y", _readonly(y))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))

    def __len__(self) -> int:
        return int(self.x.size)

    def points(self) -> np.ndarray:
        """Dots as an (n, 2) array in normalized coordinates."""
        return np.column_stack([self.x, self.y])

    def replace_y(self, y: np.ndarray, iterations_run: Optional[int] = None) -> "DotLayout":
        return DotLayout(
            x=self.x,
            y=y,
            domain=self.domain,
            labels=self.labels,
            seed=self.seed,
            iterations_run=self.iterations_run if iterations_run is None else iterations_run,
        )


class MetricKind(Enum):
    UNIFORM = "uniform"
    DENSITY_WARPED = "density_warped"


# Where the density-warped metric samples the density: at the midpoint of the
# two x coordinates, or at half their difference (the literal alternative).
X_REF_MIDPOINT = "midpoint"
X_REF_HALF_DIFFERENCE = "half_difference"


@dataclass(frozen=True)
class MetricSpec:
    """Which distance governs Voronoi assignment and the layout cost.

    UNIFORM weighs the encoding axis by a constant 2. DENSITY_WARPED weighs it
    by 1 + d(x_ref)/d_max in (1, 2], so the warped metric agrees with the
    uniform one where the data is densest and relaxes toward plain L1 where it
    is sparse.
    """

    kind: MetricKind = MetricKind.UNIFORM
    density: Optional["DensityEstimate"] = None
    x_reference: str = X_REF_MIDPOINT

    def __post_init__(self):
        if self.kind is MetricKind.DENSITY_WARPED:
            if self.density is None:
                raise ValueError("DENSITY_WARPED metric requires a density estimate")
            if float(np.min(self.density.values)) <= 0.0:
                raise ValueError("density must be strictly positive on [0, 1]")
        if self.x_reference not in (X_REF_MIDPOINT, X_REF_HALF_DIFFERENCE):
            raise ValueError(f"unknown x_reference {self.x_reference!r}")

    def encoding_weight(self, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        """Weight applied to |x1 - x2| in the metric, elementwise."""
        if self.kind is MetricKind.UNIFORM:
            return np.broadcast_to(np.float64(2.0), np.broadcast_shapes(np.shape(x1), np.shape(x2)))
        if self.x_reference == X_REF_MIDPOINT:
            ref = (np.asarray(x1, dtype=np.float64) + np.asarray(x2, dtype=np.float64)) / 2.0
        else:
            ref = (np.asarray(x1, dtype=np.float64) - np.asarray(x2, dtype=np.float64)) / 2.0
        return 1.0 + self.density.evaluate(ref) / self.density.d_max


def normalize(data: DataSet) -> tuple[np.ndarray, tuple[float, float]]:
    """Map data values affinely onto [0, 1]; return (xs, (x_min, x_max)).

    Constant data maps every value to 0.5 with a synthesized unit raw range,
    so downstream geometry stays well-defined.
    """
    values = data.values
    x_min = float(np.min(values))
    x_max = float(np.max(values))
    if x_min == x_max:
        return np.full(values.shape, 0.5), (x_min - 0.5, x_max + 0.5)
    return (values - x_min) / (x_max - x_min), (x_min, x_max)


def metric_distance(spec: MetricSpec, p1: Sequence[float], p2: Sequence[float]) -> float:
    """Distance between two normalized points under the active metric.

    Weighted L1: weight * |x1 - x2| + |y1 - y2|, with the weight from
    ``spec.encoding_weight``.
    """
    x1, y1 = float(p1[0]), float(p1[1])
    x2, y2 = float(p2[0]), float(p2[1])
    w = float(spec.encoding_weight(np.float64(x1), np.float64(x2)))
    return w * abs(x1 - x2) + abs(y1 - y2)
