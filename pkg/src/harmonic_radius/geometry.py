"""Planar segment predicates for closed polylines given as complex arrays."""
from __future__ import annotations

from fractions import Fraction

import numpy as np

# Relative error bound for the floating-point 2x2 orientation determinant;
# anything below it is re-decided in exact rational arithmetic.
_ORIENT_ERR = 1e-15


def _exact_orient(ax, ay, bx, by, cx, cy) -> int:
    F = Fraction
    det = (F(bx) - F(ax)) * (F(cy) - F(ay)) - (F(by) - F(ay)) * (F(cx) - F(ax))
    return (det > 0) - (det < 0)


def orient(a, b, c):
    """Sign of the turn a -> b -> c (+1 left, -1 right, 0 collinear).

    Vectorized over broadcast complex arrays; float results whose magnitude
    is within the rounding bound are recomputed exactly.
    """
    a, b, c = np.broadcast_arrays(np.asarray(a, complex), np.asarray(b, complex), np.asarray(c, complex))
    shape = a.shape
    a, b, c = a.ravel(), b.ravel(), c.ravel()
    t1 = (b.real - a.real) * (c.imag - a.imag)
    t2 = (b.imag - a.imag) * (c.real - a.real)
    det = t1 - t2
    sign = np.sign(det).astype(int)
    for k in np.nonzero(np.abs(det) <= _ORIENT_ERR * (np.abs(t1) + np.abs(t2)))[0]:
        sign[k] = _exact_orient(a[k].real, a[k].imag, b[k].real, b[k].imag, c[k].real, c[k].imag)
    return sign.reshape(shape)


def _on_segment(p, q, x):
    """x collinear with p-q lies within the bounding box of p-q."""
    return (
        (np.minimum(p.real, q.real) <= x.real)
        & (x.real <= np.maximum(p.real, q.real))
        & (np.minimum(p.imag, q.imag) <= x.imag)
        & (x.imag <= np.maximum(p.imag, q.imag))
    )


def segments_intersect(p1, q1, p2, q2):
    """Closed-segment intersection test; collinear overlap counts."""
    p1, q1, p2, q2 = np.broadcast_arrays(*(np.asarray(v, complex) for v in (p1, q1, p2, q2)))
    o1 = orient(p1, q1, p2)
    o2 = orient(p1, q1, q2)
    o3 = orient(p2, q2, p1)
    o4 = orient(p2, q2, q1)
    hit = (o1 * o2 < 0) & (o3 * o4 < 0)
    hit |= (o1 == 0) & _on_segment(p1, q1, p2)
    hit |= (o2 == 0) & _on_segment(p1, q1, q2)
    hit |= (o3 == 0) & _on_segment(p2, q2, p1)
    hit |= (o4 == 0) & _on_segment(p2, q2, q1)
    return hit


def _point_segment_distance(x, p, q):
    d = q - p
    dd = np.abs(d) ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(dd > 0, ((x - p) * np.conj(d)).real / dd, 0.0)
    t = np.clip(t, 0.0, 1.0)
    return np.abs(x - (p + t * d))


def segment_distance(p1, q1, p2, q2):
    """Euclidean distance between closed segments (0 when they meet)."""
    d = np.minimum.reduce(
        [
            _point_segment_distance(p1, p2, q2),
            _point_segment_distance(q1, p2, q2),
            _point_segment_distance(p2, p1, q1),
            _point_segment_distance(q2, p1, q1),
        ]
    )
    return np.where(segments_intersect(p1, q1, p2, q2), 0.0, d)


def first_self_intersection(points: np.ndarray):
    """Scan a closed polyline for two non-adjacent intersecting segments.

    Segment k joins points[k] and points[(k+1) % n]. Returns
    ``(pair, clearance)`` where pair = (i, j) is the lexicographically first
    intersecting pair of segment indices (or None) and clearance is the
    minimum distance between non-adjacent segments.
    """
    pts = np.asarray(points, complex)
    n = len(pts)
    start = pts
    end = np.roll(pts, -1)
    first = None
    clearance = np.inf
    for i in range(n - 2):
        j = np.arange(i + 2, n if i > 0 else n - 1)
        if j.size == 0:
            continue
        dist = segment_distance(start[i], end[i], start[j], end[j])
        clearance = min(clearance, float(dist.min()))
        if first is None and clearance == 0.0:
            first = (i, int(j[np.argmax(dist == 0.0)]))
    return first, (0.0 if first is not None else clearance)
