"""Deterministic SVG emission of dot layouts.

All internal math keeps y pointing up; the flip to screen coordinates
happens only here. Identical inputs produce byte-identical documents.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .core import DotLayout
from .density import GRID_SIZE

DEFAULT_PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


@dataclass(frozen=True)
class StrokeStyle:
    color: str = "#444444"
    width_px: float = 1.0


@dataclass(frozen=True)
class RenderStyle:
    dot_radius_px: float = 4.0
    canvas_width_px: int = 800
    palette: Sequence[str] = DEFAULT_PALETTE
    background: str = "#ffffff"
    envelope: Optional[StrokeStyle] = None

    def __post_init__(self):
        if not (self.dot_radius_px > 0):
            raise ValueError("dot_radius_px must be positive")
        if self.canvas_width_px <= 0:
            raise ValueError("canvas_width_px must be positive")
        if len(self.palette) == 0:
            raise ValueError("palette must not be empty")


def _fmt(v: float) -> str:
    return f"{v:.6f}"


def _class_indices(layout: DotLayout) -> np.ndarray:
    if layout.labels is None:
        return np.zeros(len(layout), dtype=np.intp)
    classes = sorted(set(layout.labels))
    index = {c: i for i, c in enumerate(classes)}
    return np.array([index[lab] for lab in layout.labels], dtype=np.intp)


def _check_palette(style: RenderStyle, class_idx: np.ndarray) -> None:
    needed = int(class_idx.max()) + 1
    if needed > len(style.palette):
        raise ValueError(
            f"palette has {len(style.palette)} colors but {needed} classes are present"
        )


def _pixel_map(layout: DotLayout, style: RenderStyle):
    w = float(style.canvas_width_px)
    canvas_h = w * layout.domain.height

    def to_px(x: float, y: float) -> tuple[float, float]:
        return x * w, canvas_h - y * w

    return to_px, w, canvas_h


def _document(width: float, height: float, body: list[str]) -> str:
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        '<svg xmlns="http://www.w3.org/2000/svg" '
        'xmlns:xlink="http://www.w3.org/1999/xlink" version="1.1" '
        f'width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">'
    )
    return "\n".join([head] + body + ["</svg>"]) + "\n"


def _base_elements(layout: DotLayout, style: RenderStyle,
                   envelope_profile: Optional[Callable] = None) -> tuple[list[str], float, float]:
    to_px, w, canvas_h = _pixel_map(layout, style)
    body = [
        f'<rect x="0" y="0" width="{_fmt(w)}" height="{_fmt(canvas_h)}" '
        f'fill="{style.background}"/>',
        # Baseline rule along y = 0.
        f'<line x1="0" y1="{_fmt(canvas_h)}" x2="{_fmt(w)}" y2="{_fmt(canvas_h)}" '
        f'stroke="#888888" stroke-width="1"/>',
    ]
    if envelope_profile is not None and style.envelope is not None:
        xs = np.linspace(0.0, 1.0, GRID_SIZE)
        band = np.minimum(np.asarray(envelope_profile(xs), dtype=np.float64),
                          layout.domain.height)
        half = layout.domain.height / 2.0
        top = [to_px(x, half + b / 2.0) for x, b in zip(xs, band)]
        bottom = [to_px(x, half - b / 2.0) for x, b in zip(xs[::-1], band[::-1])]
        points = " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in top + bottom)
        body.append(
            f'<polygon points="{points}" fill="none" '
            f'stroke="{style.envelope.color}" '
            f'stroke-width="{_fmt(style.envelope.width_px)}"/>'
        )
    return body, w, canvas_h


def render_svg(layout: DotLayout, style: RenderStyle,
               envelope_profile: Optional[Callable] = None) -> str:
    """SVG document with one circle per dot, in dot order.

    y is flipped so y = 0 sits on the bottom edge. Class colors come from
    the palette, indexed by the label's rank among the sorted class labels.
    An optional height profile is traced as the centrality envelope when the
    style carries an envelope stroke.
    """
    class_idx = _class_indices(layout)
    _check_palette(style, class_idx)
    body, w, canvas_h = _base_elements(layout, style, envelope_profile)
    to_px, _, _ = _pixel_map(layout, style)
    for i in range(len(layout)):
        px, py = to_px(float(layout.x[i]), float(layout.y[i]))
        body.append(
            f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="{_fmt(style.dot_radius_px)}" '
            f'fill="{style.palette[class_idx[i]]}"/>'
        )
    return _document(w, canvas_h, body)


def render_icons(layout: DotLayout, icons: Sequence[str], style: RenderStyle,
                 envelope_profile: Optional[Callable] = None) -> str:
    """SVG document with one image per dot, centered on the dot position.

    Icons are image references (hrefs) aligned with the dots; repeated
    references are emitted once under <defs> and instanced with <use>.
    Each icon's edge length is twice the dot radius.
    """
    if len(icons) != len(layout):
        raise ValueError(f"{len(icons)} icons for {len(layout)} dots")
    body, w, canvas_h = _base_elements(layout, style, envelope_profile)
    to_px, _, _ = _pixel_map(layout, style)
    edge = 2.0 * style.dot_radius_px

    unique: dict[str, str] = {}
    for href in icons:
        if href not in unique:
            unique[href] = f"icon{len(unique)}"
    defs = ["<defs>"]
    for href, ident in unique.items():
        defs.append(
            f'<image id="{ident}" xlink:href="{href}" '
            f'width="{_fmt(edge)}" height="{_fmt(edge)}"/>'
        )
    defs.append("</defs>")
    body = defs + body

    for i in range(len(layout)):
        px, py = to_px(float(layout.x[i]), float(layout.y[i]))
        body.append(
            f'<use xlink:href="#{unique[icons[i]]}" '
            f'x="{_fmt(px - style.dot_radius_px)}" y="{_fmt(py - style.dot_radius_px)}"/>'
        )
    return _document(w, canvas_h, body)
