"""Data-constrained Lloyd relaxation over site-sampled Voronoi cells.

Dots start as a jitter plot (x pinned to the data, y uniform), then iterate:
assign every domain site to its nearest dot under the active metric, move
each dot to the mean of its sites, and re-impose the encoding coordinate.
Only the vertical coordinate ever changes; the horizontal one is the data.

Sites are drawn once per run, so the Monte Carlo cost estimate has a fixed
objective across iterations. Because x is frozen, the encoding-axis part of
every dot-to-site distance is constant for the whole run and is precomputed.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .core import DataSet, DotLayout, MetricKind, MetricSpec, PlotDomain
from .density import height_profile

# Sites per assignment chunk; keeps the working distance block cache-sized.
_CHUNK_ELEMENTS = 131072

UPDATE_MEAN = "mean"
UPDATE_MEDIAN = "median"


@dataclass(frozen=True)
class SolverConfig:
    n_sites: int = 8192
    max_iterations: int = 40
    # Vertical-displacement threshold in units of height; 0 disables the
    # early exit and always runs max_iterations.
    convergence_eps: float = 1e-4
    seed: int = 0
    metric: MetricSpec = field(default_factory=MetricSpec)
    # Mean matches the cell-average update of the relaxation; median is kept
    # as an experiment knob for the L1 metric's true minimizer.
    update: str = UPDATE_MEAN

    def __post_init__(self):
        if self.n_sites <= 0:
            raise ValueError("n_sites must be positive")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be non-negative")
        if self.convergence_eps < 0:
            raise ValueError("convergence_eps must be non-negative")
        if self.update not in (UPDATE_MEAN, UPDATE_MEDIAN):
            raise ValueError(f"unknown update rule {self.update!r}")


@dataclass(frozen=True)
class VoronoiAssignment:
    """Each site mapped to the index of its nearest dot under the metric."""

    sites: np.ndarray
    owner: np.ndarray

    def __post_init__(self):
        sites = np.asarray(self.sites, dtype=np.float64)
        owner = np.asarray(self.owner, dtype=np.intp)
        if sites.ndim != 2 or sites.shape[1] != 2:
            raise ValueError("sites must be an (m, 2) array")
        if owner.shape != (sites.shape[0],):
            raise ValueError("owner must map every site")
        for name, a in (("sites", sites), ("owner", owner)):
            a = np.array(a, copy=True)
            a.flags.writeable = False
            object.__setattr__(self, name, a)


@dataclass(frozen=True)
class RelaxTrace:
    """Per-run artifacts needed by the analysis module: the initialization
    and the fixed site set the run was scored against."""

    initial: DotLayout
    sites: np.ndarray


class _SiteAssigner:
    """Nearest-dot search with the constant encoding-axis term precomputed."""

    def __init__(self, x: np.ndarray, sites: np.ndarray, metric: MetricSpec):
        self.n = x.size
        sx = sites[:, 0]
        self.sy = np.ascontiguousarray(sites[:, 1])
        dx = np.abs(x[None, :] - sx[:, None])
        w = metric.encoding_weight(x[None, :], sx[:, None])
        self.xpart = np.ascontiguousarray(w * dx)
        self.chunk = max(1, _CHUNK_ELEMENTS // self.n)
        self._buf = np.empty((self.chunk, self.n))

    def assign(self, y: np.ndarray) -> np.ndarray:
        m = self.sy.size
        owner = np.empty(m, dtype=np.intp)
        for a in range(0, m, self.chunk):
            b = min(a + self.chunk, m)
            buf = self._buf[: b - a]
            np.subtract(self.sy[a:b, None], y[None, :], out=buf)
            np.abs(buf, out=buf)
            buf += self.xpart[a:b]
            owner[a:b] = buf.argmin(axis=1)
        return owner


def _uniform_sites(rng: np.random.Generator, n_sites: int, height: float) -> np.ndarray:
    return np.column_stack([rng.random(n_sites), rng.random(n_sites) * height])


def _initial_y(rng: np.random.Generator, xs: np.ndarray, domain: PlotDomain, profile=None) -> np.ndarray:
    u = rng.random(xs.size)
    h = domain.height
    if profile is None:
        return u * h
    band = np.minimum(np.asarray(profile(xs), dtype=np.float64), h)
    return (h - band) / 2.0 + u * band


def _centrality_profile(config: SolverConfig, n: int, domain: PlotDomain):
    if config.metric.kind is MetricKind.DENSITY_WARPED:
        return height_profile(config.metric.density, n, domain.radius)
    return None


def jitter_init(xs, domain: PlotDomain, seed: int, profile=None) -> DotLayout:
    """Random jitter baseline: y i.i.d. uniform on [0, h], x untouched.

    With a height ``profile`` the draw is confined to the vertically centered
    band [h/2 - profile(x)/2, h/2 + profile(x)/2] instead.
    """
    xs = np.asarray(xs, dtype=np.float64)
    rng = np.random.default_rng(seed)
    y = _initial_y(rng, xs, domain, profile)
    return DotLayout(x=xs, y=y, domain=domain, seed=seed, iterations_run=0)


def assign_sites(dots: DotLayout, sites, metric: MetricSpec) -> VoronoiAssignment:
    """Map each site to its nearest dot; ties go to the lowest dot index."""
    sites = np.asarray(sites, dtype=np.float64)
    if sites.ndim != 2 or sites.shape[1] != 2:
        raise ValueError("sites must be an (m, 2) array")
    if len(dots) == 0:
        raise ValueError("cannot assign sites to an empty dot list")
    owner = _SiteAssigner(dots.x, sites, metric).assign(dots.y)
    return VoronoiAssignment(sites=sites, owner=owner)


def _cell_means(owner: np.ndarray, site_y: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    counts = np.bincount(owner, minlength=n)
    sums = np.bincount(owner, weights=site_y, minlength=n)
    means = sums / np.maximum(counts, 1)
    return means, counts


def _cell_medians(owner: np.ndarray, site_y: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    counts = np.bincount(owner, minlength=n)
    medians = np.zeros(n)
    order = np.argsort(owner, kind="stable")
    bounds = np.concatenate([[0], np.cumsum(counts)])
    sorted_y = site_y[order]
    for i in range(n):
        a, b = bounds[i], bounds[i + 1]
        if b > a:
            medians[i] = np.median(sorted_y[a:b])
    return medians, counts


def lloyd_step(dots: DotLayout, assignment: VoronoiAssignment, update: str = UPDATE_MEAN) -> DotLayout:
    """One relaxation step: dot -> average of its cell's sites, x re-imposed.

    Dots whose cell is empty are left unchanged. y is clamped to [0, h].
    """
    n = len(dots)
    site_y = assignment.sites[:, 1]
    if update == UPDATE_MEAN:
        target, counts = _cell_means(assignment.owner, site_y, n)
    else:
        target, counts = _cell_medians(assignment.owner, site_y, n)
    new_y = np.where(counts > 0, target, dots.y)
    np.clip(new_y, 0.0, dots.domain.height, out=new_y)
    return dots.replace_y(new_y)


def _converged(y_old: np.ndarray, y_new: np.ndarray, eps: float, h: float) -> bool:
    return float(np.max(np.abs(y_new - y_old))) < eps * h


def relax_traced(data: DataSet, domain: PlotDomain, config: SolverConfig) -> tuple[DotLayout, RelaxTrace]:
    """Full relaxation run, also returning the initialization and site set."""
    xs = domain.normalize_x(data.values)
    n = xs.size
    if config.n_sites < n:
        raise ValueError(f"n_sites {config.n_sites} < number of dots {n}")
    rng = np.random.default_rng(config.seed)
    profile = _centrality_profile(config, n, domain)
    y = _initial_y(rng, xs, domain, profile)
    initial = DotLayout(
        x=xs, y=y, domain=domain, labels=data.labels, seed=config.seed, iterations_run=0
    )
    sites = _uniform_sites(rng, config.n_sites, domain.height)

    layout = initial
    iterations = 0
    if config.max_iterations > 0:
        assigner = _SiteAssigner(xs, sites, config.metric)
        for _ in range(config.max_iterations):
            owner = assigner.assign(layout.y)
            stepped = lloyd_step(layout, VoronoiAssignment(sites=sites, owner=owner), config.update)
            iterations += 1
            done = _converged(layout.y, stepped.y, config.convergence_eps, domain.height)
            layout = stepped
            if done:
                break
    return layout.replace_y(layout.y, iterations_run=iterations), RelaxTrace(initial=initial, sites=sites)


def relax(data: DataSet, domain: PlotDomain, config: SolverConfig) -> DotLayout:
    """Lay out the data as a blue-noise dot plot (single class)."""
    return relax_traced(data, domain, config)[0]


def _class_schedule(labels: Sequence, n: int) -> list[np.ndarray]:
    """Index groups visited each outer iteration: every class alone, then
    class unions, the full union always last.

    For up to 3 classes every non-singleton union is visited (smallest
    first); beyond that only the full union is, since the number of unions
    grows exponentially.
    """
    classes = sorted(set(labels))
    by_class = {c: np.flatnonzero([lab == c for lab in labels]) for c in classes}
    groups = [by_class[c] for c in classes]
    k = len(classes)
    if k <= 3:
        for size in range(2, k + 1):
            for combo in combinations(classes, size):
                groups.append(np.sort(np.concatenate([by_class[c] for c in combo])))
    else:
        groups.append(np.arange(n))
    return groups


def relax_multiclass(data: DataSet, domain: PlotDomain, config: SolverConfig) -> DotLayout:
    """Relaxation for labeled data: blue noise within every class and within
    class unions simultaneously.

    Each outer iteration runs one assign+step restricted to each class (all
    sites competed for by that class's dots only), then over the unions,
    ending with the full union, on which convergence is measured.
    """
    if data.labels is None:
        raise ValueError("relax_multiclass requires class labels")
    if data.n_classes < 2:
        warnings.warn("single class present; falling back to single-class relax")
        return relax(data, domain, config)

    xs = domain.normalize_x(data.values)
    n = xs.size
    if config.n_sites < n:
        raise ValueError(f"n_sites {config.n_sites} < number of dots {n}")
    rng = np.random.default_rng(config.seed)
    profile = _centrality_profile(config, n, domain)
    y = np.array(_initial_y(rng, xs, domain, profile))
    sites = _uniform_sites(rng, config.n_sites, domain.height)
    site_y = sites[:, 1]
    h = domain.height

    groups = _class_schedule(data.labels, n)
    assigners = [_SiteAssigner(xs[idx], sites, config.metric) for idx in groups]
    cell_stat = _cell_means if config.update == UPDATE_MEAN else _cell_medians

    iterations = 0
    for _ in range(config.max_iterations):
        union_disp = 0.0
        for idx, assigner in zip(groups, assigners):
            owner = assigner.assign(y[idx])
            target, counts = cell_stat(owner, site_y, idx.size)
            new_sub = np.where(counts > 0, target, y[idx])
            np.clip(new_sub, 0.0, h, out=new_sub)
            if idx.size == n:
                union_disp = float(np.max(np.abs(new_sub - y[idx])))
            y[idx] = new_sub
        iterations += 1
        if union_disp < config.convergence_eps * h:
            break
    return DotLayout(
        x=xs, y=y, domain=domain, labels=data.labels, seed=config.seed, iterations_run=iterations
    )


def relax_unconstrained(n: int, domain: PlotDomain, config: SolverConfig) -> DotLayout:
    """Plain 2D Lloyd relaxation with no data constraint.

    Both coordinates start uniform and both are updated, so the result is not
    a plot of anything; it serves as an upper-bound comparator for spectral
    quality.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    if config.n_sites < n:
        raise ValueError(f"n_sites {config.n_sites} < number of dots {n}")
    rng = np.random.default_rng(config.seed)
    h = domain.height
    x = rng.random(n)
    y = rng.random(n) * h
    sites = _uniform_sites(rng, config.n_sites, h)
    site_x, site_y = sites[:, 0], sites[:, 1]

    iterations = 0
    for _ in range(config.max_iterations):
        # x moves too, so the encoding-axis term cannot be precomputed here.
        assigner = _SiteAssigner(x, sites, config.metric)
        owner = assigner.assign(y)
        counts = np.bincount(owner, minlength=n)
        mean_x = np.bincount(owner, weights=site_x, minlength=n) / np.maximum(counts, 1)
        mean_y = np.bincount(owner, weights=site_y, minlength=n) / np.maximum(counts, 1)
        new_x = np.clip(np.where(counts > 0, mean_x, x), 0.0, 1.0)
        new_y = np.clip(np.where(counts > 0, mean_y, y), 0.0, h)
        disp = max(float(np.max(np.abs(new_x - x))), float(np.max(np.abs(new_y - y))))
        x, y = new_x, new_y
        iterations += 1
        if disp < config.convergence_eps * h:
            break
    return DotLayout(x=x, y=y, domain=domain, seed=config.seed, iterations_run=iterations)
