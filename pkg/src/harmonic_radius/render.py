"""Images of the polar grid of the disk under a harmonic mapping, as SVG."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple
from xml.sax.saxutils import escape

import numpy as np

from .expr import PoleError
from .mapping import HarmonicMapping, eval_f


class EmptyImageError(ValueError):
    pass


@dataclass(frozen=True)
class Curve:
    kind: str  # "circle" or "ray"
    param: float  # circle radius or ray angle
    points: np.ndarray
    gaps: int = 0


@dataclass(frozen=True)
class PolylineImage:
    curves: Tuple[Curve, ...]
    mapping_label: str
    mapping_spec: str = ""


def _image_points(m: HarmonicMapping, z: np.ndarray):
    try:
        w = eval_f(m, z)
    except PoleError:
        w = np.empty_like(z)
        for k, zk in enumerate(z):
            try:
                w[k] = eval_f(m, zk)
            except PoleError:
                w[k] = np.nan
    keep = np.isfinite(w.real) & np.isfinite(w.imag)
    return w[keep], int(np.count_nonzero(~keep))


def sample_image(m: HarmonicMapping, r_max: float = 0.98, n_circles: int = 12, n_rays: int = 24,
                 pts_per_curve: int = 512) -> PolylineImage:
    """Images of the circles |z| = k r_max / n_circles and the rays arg z = 2 pi j / n_rays."""
    if not 0 < r_max < 1:
        raise ValueError(f"r_max must lie in (0, 1), got {r_max}")
    if pts_per_curve < 2 or n_circles < 0 or n_rays < 0:
        raise ValueError("need pts_per_curve >= 2 and non-negative curve counts")
    curves = []
    theta = 2 * np.pi * np.arange(pts_per_curve) / pts_per_curve
    for k in range(1, n_circles + 1):
        rho = k * r_max / n_circles
        pts, gaps = _image_points(m, rho * np.exp(1j * theta))
        if len(pts) >= 2:
            curves.append(Curve("circle", rho, pts, gaps))
    t = np.linspace(0.0, r_max, pts_per_curve)
    for j in range(n_rays):
        phi = 2 * np.pi * j / n_rays
        pts, gaps = _image_points(m, t * np.exp(1j * phi))
        if len(pts) >= 2:
            curves.append(Curve("ray", phi, pts, gaps))
    return PolylineImage(tuple(curves), m.label, m.spec or m.label)


STYLES = {
    "circle": 'fill="none" stroke="#1f4e99" stroke-width="{w}"',
    "ray": 'fill="none" stroke="#b0411e" stroke-width="{w}" stroke-dasharray="{d}"',
}


def _fmt(x: float) -> str:
    return f"{x:.9g}" if x != 0 else "0"


def emit_svg(img: PolylineImage, width_px: int = 800) -> str:
    """Standalone SVG: one path per curve, circles solid and rays dashed.

    The y axis is flipped so the picture has the usual orientation of the
    complex plane.
    """
    if width_px < 100:
        raise ValueError("width_px must be at least 100")
    if not img.curves:
        raise EmptyImageError("image has no curves")
    allpts = np.concatenate([c.points for c in img.curves])
    x0, x1 = float(allpts.real.min()), float(allpts.real.max())
    y0, y1 = float(-allpts.imag.max()), float(-allpts.imag.min())
    span = max(x1 - x0, y1 - y0, 1e-12)
    pad = 0.05 * span
    vx, vy = x0 - pad, y0 - pad
    vw, vh = (x1 - x0) + 2 * pad, (y1 - y0) + 2 * pad
    height_px = max(1, int(round(width_px * vh / vw)))
    stroke = _fmt(span / width_px)
    dash = _fmt(4 * span / width_px)
    spec = img.mapping_spec.replace("--", "- -")
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- mapping: {spec} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width_px}" height="{height_px}" '
        f'viewBox="{_fmt(vx)} {_fmt(vy)} {_fmt(vw)} {_fmt(vh)}">',
        f"<title>{escape(img.mapping_label)}</title>",
    ]
    for c in img.curves:
        coords = " L".join(f"{_fmt(p.real)},{_fmt(-p.imag)}" for p in c.points)
        close = " Z" if c.kind == "circle" else ""
        style = STYLES[c.kind].format(w=stroke, d=dash)
        lines.append(f'<path class="{c.kind}" d="M{coords}{close}" {style}/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
