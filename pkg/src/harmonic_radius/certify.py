"""Sampled certification of sense-preservation, injectivity and the
classical inequalities for the analytic data.

Verdicts are empirical: HOLDS_SAMPLED means no violation was seen on the
sample set after local refinement. Every FAILS_WITNESS verdict stores a
witness that ``replay`` re-evaluates from scratch.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass, replace
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from .expr import Expr, PoleError, derivative, evaluate
from .geometry import first_self_intersection, segments_intersect
from .mapping import HarmonicMapping, eval_f, jacobian
from .sampling import disk_points

SCHEMA_VERSION = 1
INEQUALITY_TOL = 1e-9
INEQUALITY_RADIUS = 0.95
STARLIKE_EXCLUDE = 1e-6
PAIRWISE_TOL = 1e-9
NEWTON_STEPS = 40
MAX_CANDIDATES = 4000


class Verdict(str, enum.Enum):
    HOLDS_SAMPLED = "HOLDS_SAMPLED"
    FAILS_WITNESS = "FAILS_WITNESS"
    INCONCLUSIVE = "INCONCLUSIVE"


class Check(str, enum.Enum):
    SENSE_PRESERVING = "SensePreserving"
    INJECTIVE_PAIRWISE = "InjectivePairwise"
    BOUNDARY_SIMPLE = "BoundarySimple"
    SCHWARZ_PICK = "Inequality(schwarz_pick)"
    GROWTH_CONVEX = "Inequality(growth_convex)"
    GROWTH_UNIVALENT = "Inequality(growth_univalent)"
    STARLIKE_HALF = "Inequality(starlike_half)"


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    n_radii: int = 64
    n_angles: int = 256
    refine_depth: int = 2

    def __post_init__(self):
        if self.n_radii < 2 or self.n_angles < 8 or self.refine_depth < 0:
            raise ValueError(f"invalid grid {self}")


@dataclass(frozen=True)
class Certificate:
    label: str
    check: Check
    radius: float
    verdict: Verdict
    margin: float
    witness: tuple = ()
    witness_value: Optional[float] = None
    grid: Optional[GridSpec] = None
    note: str = ""

    def to_json(self) -> str:
        doc = {
            "version": SCHEMA_VERSION,
            "label": self.label,
            "check": self.check.value,
            "radius": self.radius,
            "verdict": self.verdict.value,
            "margin": _json_float(self.margin),
            "witness": [{"re": z.real, "im": z.imag} for z in self.witness],
            "witness_value": _json_float(self.witness_value),
            "grid": asdict(self.grid) if self.grid else None,
            "note": self.note,
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        doc = json.loads(text)
        if doc.get("version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported certificate version {doc.get('version')!r}")
        return cls(
            label=doc["label"],
            check=Check(doc["check"]),
            radius=doc["radius"],
            verdict=Verdict(doc["verdict"]),
            margin=_float_from_json(doc["margin"]),
            witness=tuple(complex(p["re"], p["im"]) for p in doc["witness"]),
            witness_value=_float_from_json(doc["witness_value"]),
            grid=GridSpec(**doc["grid"]) if doc["grid"] else None,
            note=doc["note"],
        )


def _json_float(x):
    # JSON has no infinities; keep them as strings so round-trips stay exact.
    if x is None or math.isfinite(x):
        return x
    return repr(float(x))


def _float_from_json(x):
    return float(x) if isinstance(x, str) else x


def _check_radius(r: float):
    if not 0 < r < 1:
        raise ValueError(f"radius must lie in (0, 1), got {r}")


def polar_grid(r: float, grid: GridSpec) -> np.ndarray:
    """Closed polar grid on |z| <= r; the origin appears once."""
    radii = np.linspace(0.0, r, grid.n_radii)[1:]
    angles = 2 * np.pi * np.arange(grid.n_angles) / grid.n_angles
    pts = (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()
    return np.concatenate([[0j], pts])


# ----------------------------------------------------- sense-preservation


def certify_sense_preserving(m: HarmonicMapping, r: float, grid: GridSpec = GridSpec()) -> Certificate:
    """Minimum Jacobian over the polar grid of the closed disk |z| <= r.

    The sampled minimum is refined ``refine_depth`` times on a local patch
    whose spacing shrinks 4x per level. The witness is the sample with the
    smallest Jacobian, so ``margin`` equals the Jacobian at the witness.
    """
    _check_radius(r)
    dr = r / (grid.n_radii - 1)
    dphi = 2 * np.pi / grid.n_angles
    try:
        zs = polar_grid(r, grid)
        js = jacobian(m, zs)
        k = int(np.argmin(js))
        best_z, best_j = complex(zs[k]), float(js[k])
        offsets = np.arange(-4, 5)
        for depth in range(1, grid.refine_depth + 1):
            scale = 4.0**depth
            rho = np.clip(abs(best_z) + offsets * dr / scale, 0.0, r)
            phi = math.atan2(best_z.imag, best_z.real) + offsets * dphi / scale
            patch = (rho[:, None] * np.exp(1j * phi)[None, :]).ravel()
            jp = jacobian(m, patch)
            k = int(np.argmin(jp))
            if jp[k] < best_j:
                best_z, best_j = complex(patch[k]), float(jp[k])
    except PoleError as exc:
        return Certificate(m.label, Check.SENSE_PRESERVING, r, Verdict.INCONCLUSIVE, math.nan,
                           grid=grid, note=f"pole proximity: {exc}")
    if best_j > 0:
        return Certificate(m.label, Check.SENSE_PRESERVING, r, Verdict.HOLDS_SAMPLED, best_j, grid=grid)
    return Certificate(m.label, Check.SENSE_PRESERVING, r, Verdict.FAILS_WITNESS, best_j,
                       witness=(best_z,), witness_value=best_j, grid=grid)


def infer_injectivity(cert: Certificate, h_is_convex_injective: bool) -> Certificate:
    """Promote a sense-preservation certificate on |z| <= r to injectivity.

    Valid because a sense-preserving f = h + conj(g) on a disk is injective
    there whenever h is convex and univalent on the whole unit disk. The
    convexity premise is the caller's assertion and is not checked.
    """
    if cert.check is not Check.SENSE_PRESERVING or cert.verdict is not Verdict.HOLDS_SAMPLED:
        raise PreconditionError("injectivity inference needs a HOLDS_SAMPLED sense-preservation certificate")
    if not h_is_convex_injective:
        return replace(cert, check=Check.INJECTIVE_PAIRWISE, verdict=Verdict.INCONCLUSIVE,
                       note="analytic part not asserted convex; no inference")
    return replace(cert, check=Check.INJECTIVE_PAIRWISE,
                   note="inferred from sense-preservation with convex univalent analytic part")


# ------------------------------------------------------------ injectivity


def _solve_preimage(m: HarmonicMapping, z0: np.ndarray, target: np.ndarray, r: float) -> np.ndarray:
    """Vectorized Newton iteration for f(z) = target, iterates kept in |z| <= r.

    With a = h', b = g' the real-linear map dz -> a dz + conj(b dz) has
    determinant |a|^2 - |b|^2, giving the closed-form step below.
    """
    z = z0.copy()
    for _ in range(NEWTON_STEPS):
        e = target - eval_f(m, z)
        a = evaluate(m.dh, z)
        b = evaluate(m.dg, z)
        det = np.abs(a) ** 2 - np.abs(b) ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            step = (np.conj(a) * e - np.conj(b) * np.conj(e)) / det
        step = np.where(np.isfinite(step), step, 0)
        z = z + step
        mod = np.abs(z)
        z = np.where(mod > r, z * (r / np.maximum(mod, 1e-300)), z)
    return z


def injective_pairwise(m: HarmonicMapping, r: float, grid: GridSpec = GridSpec(),
                       tol: float = PAIRWISE_TOL) -> Certificate:
    """Search the grid for two separated points with the same image.

    Image points lying within the local image cell size of each other are
    candidate collisions (found with a k-d tree instead of a dense all-pairs
    loop). Each candidate is polished by Newton's method on f(z2) = f(z1);
    a pair counts when |z1 - z2| is at least the radial grid spacing and the
    image gap is at most ``tol``. The margin is the smallest image gap over
    separated polished pairs (inf when there are none).
    """
    _check_radius(r)
    if tol <= 0:
        raise ValueError("tol must be positive")
    spacing = r / (grid.n_radii - 1)
    try:
        zs = polar_grid(r, grid)
        fz = eval_f(m, zs)
        cell = np.maximum(spacing, np.abs(zs) * 2 * np.pi / grid.n_angles)
        scale = (np.abs(evaluate(m.dh, zs)) + np.abs(evaluate(m.dg, zs))) * cell
        tree = cKDTree(np.column_stack([fz.real, fz.imag]))
        neighbours = tree.query_ball_point(np.column_stack([fz.real, fz.imag]), r=scale)
        ii, jj = [], []
        for i, js in enumerate(neighbours):
            for j in js:
                if j != i and abs(zs[i] - zs[j]) >= 2 * spacing:
                    ii.append(i)
                    jj.append(j)
        margin = math.inf
        if ii:
            ii = np.asarray(ii)
            jj = np.asarray(jj)
            gap = np.abs(fz[ii] - fz[jj]) / np.maximum(scale[ii], scale[jj])
            order = np.argsort(gap, kind="stable")[:MAX_CANDIDATES]
            ii, jj = ii[order], jj[order]
            z1 = zs[ii]
            z2 = _solve_preimage(m, zs[jj], fz[ii], r)
            sep = np.abs(z1 - z2)
            img_gap = np.abs(eval_f(m, z1) - eval_f(m, z2))
            ok = sep >= spacing
            if np.any(ok):
                margin = float(img_gap[ok].min())
            found = np.nonzero(ok & (img_gap <= tol))[0]
            if found.size:
                k = found[np.argmax(sep[found])]
                w = (complex(z1[k]), complex(z2[k]))
                val = float(img_gap[k])
                return Certificate(m.label, Check.INJECTIVE_PAIRWISE, r, Verdict.FAILS_WITNESS, margin,
                                   witness=w, witness_value=val, grid=grid)
    except PoleError as exc:
        return Certificate(m.label, Check.INJECTIVE_PAIRWISE, r, Verdict.INCONCLUSIVE, math.nan,
                           grid=grid, note=f"pole proximity: {exc}")
    return Certificate(m.label, Check.INJECTIVE_PAIRWISE, r, Verdict.HOLDS_SAMPLED, margin, grid=grid)


def _boundary_points(m, r, samples):
    theta = 2 * np.pi * np.arange(samples) / samples
    z = r * np.exp(1j * theta)
    return z, eval_f(m, z)


def _crossing_value(m, za, zb, step) -> float:
    """Largest orientation product of the segment pair starting at za, zb.

    Non-positive for intersecting segments.
    """
    rot = np.exp(1j * step)
    p1, q1, p2, q2 = (complex(v) for v in eval_f(m, np.array([za, za * rot, zb, zb * rot])))
    def cross(a, b, c):
        return (b - a).real * (c - a).imag - (b - a).imag * (c - a).real
    return max(cross(p1, q1, p2) * cross(p1, q1, q2), cross(p2, q2, p1) * cross(p2, q2, q1))


def boundary_simple(m: HarmonicMapping, r: float, samples: int = 4096) -> Certificate:
    """Self-intersection test of the closed curve theta -> f(r e^{i theta}).

    Margin is the smallest distance between non-adjacent segments.
    """
    _check_radius(r)
    if samples < 64:
        raise ValueError("samples must be at least 64")
    grid = GridSpec(n_radii=2, n_angles=samples, refine_depth=0)
    try:
        z, pts = _boundary_points(m, r, samples)
    except PoleError as exc:
        return Certificate(m.label, Check.BOUNDARY_SIMPLE, r, Verdict.INCONCLUSIVE, math.nan,
                           grid=grid, note=f"pole proximity: {exc}")
    pair, clearance = first_self_intersection(pts)
    if pair is None:
        return Certificate(m.label, Check.BOUNDARY_SIMPLE, r, Verdict.HOLDS_SAMPLED, clearance, grid=grid)
    i, j = pair
    w = (complex(z[i]), complex(z[j]))
    val = _crossing_value(m, w[0], w[1], 2 * np.pi / samples)
    return Certificate(m.label, Check.BOUNDARY_SIMPLE, r, Verdict.FAILS_WITNESS, 0.0,
                       witness=w, witness_value=val, grid=grid)


# ------------------------------------------------------------ inequalities


def schwarz_pick_gap(w: Expr, z):
    """|w'(z)| - (1 - |w(z)|^2) / (1 - |z|^2); non-positive for class-B w."""
    dw = evaluate(derivative(w), z)
    wz = evaluate(w, z)
    return np.abs(dw) - (1 - np.abs(wz) ** 2) / (1 - np.abs(z) ** 2)


def _upper_bound_cert(label, check, values, zs, r) -> Certificate:
    # values must stay <= INEQUALITY_TOL; the margin is the largest one.
    k = int(np.argmax(values))
    worst = float(values[k])
    if worst <= INEQUALITY_TOL:
        return Certificate(label, check, r, Verdict.HOLDS_SAMPLED, worst)
    return Certificate(label, check, r, Verdict.FAILS_WITNESS, worst,
                       witness=(complex(zs[k]),), witness_value=worst)


def check_schwarz_pick(w: Expr, n_samples: int = 10_000, r_max: float = 0.99, label: str = "") -> Certificate:
    """Largest sampled value of schwarz_pick_gap; holds when <= 1e-9."""
    zs = disk_points(n_samples, r_max)
    gap = schwarz_pick_gap(w, zs)
    return _upper_bound_cert(label or str(w), Check.SCHWARZ_PICK, gap, zs, r_max)


def growth_gap(h: Expr, kind: str, z):
    """|h(z)| minus the growth bound for convex or univalent h."""
    t = np.abs(z)
    factor = t * (1 + t)
    if kind == "univalent":
        factor = factor / (1 - t)
    elif kind != "convex":
        raise ValueError(f"kind must be 'convex' or 'univalent', got {kind!r}")
    return np.abs(evaluate(h, z)) - factor * np.abs(evaluate(derivative(h), z))


def check_growth_bound(h: Expr, kind: str, n_samples: int = 10_000,
                       r_max: float = INEQUALITY_RADIUS, label: str = "") -> Certificate:
    zs = disk_points(n_samples, r_max)
    gap = growth_gap(h, kind, zs)
    check = Check.GROWTH_CONVEX if kind == "convex" else Check.GROWTH_UNIVALENT
    return _upper_bound_cert(label or str(h), check, gap, zs, r_max)


def starlike_gap(h: Expr, z):
    """Re(z h'(z) / h(z)) - 1/2."""
    return (z * evaluate(derivative(h), z) / evaluate(h, z)).real - 0.5


def check_starlike_half(h: Expr, n_samples: int = 10_000,
                        r_max: float = INEQUALITY_RADIUS, label: str = "") -> Certificate:
    """Minimum of Re(z h'/h) - 1/2 over samples with 1e-6 <= |z| <= r_max."""
    zs = disk_points(n_samples, r_max, r_min=STARLIKE_EXCLUDE)
    gap = starlike_gap(h, zs)
    k = int(np.argmin(gap))
    low = float(gap[k])
    if low >= -INEQUALITY_TOL:
        return Certificate(label or str(h), Check.STARLIKE_HALF, r_max, Verdict.HOLDS_SAMPLED, low)
    return Certificate(label or str(h), Check.STARLIKE_HALF, r_max, Verdict.FAILS_WITNESS, low,
                       witness=(complex(zs[k]),), witness_value=low)


# ----------------------------------------------------------------- replay


def replay(cert: Certificate, m: Optional[HarmonicMapping] = None, fn: Optional[Expr] = None) -> float:
    """Recompute the checked quantity at the stored witness.

    For grid checks pass the mapping ``m``; for inequality checks pass the
    analytic function ``fn`` the certificate was computed for.
    """
    if not cert.witness:
        raise PreconditionError("certificate carries no witness")
    z = cert.witness
    if cert.check is Check.SENSE_PRESERVING:
        return float(jacobian(m, z[0]))
    if cert.check is Check.INJECTIVE_PAIRWISE:
        return float(abs(eval_f(m, z[0]) - eval_f(m, z[1])))
    if cert.check is Check.BOUNDARY_SIMPLE:
        step = 2 * np.pi / cert.grid.n_angles
        val = _crossing_value(m, z[0], z[1], step)
        rot = np.exp(1j * step)
        p = eval_f(m, np.array([z[0], z[0] * rot, z[1], z[1] * rot]))
        if not segments_intersect(p[0], p[1], p[2], p[3]):
            raise AssertionError("stored boundary witness no longer intersects")
        return val
    zz = np.array([z[0]])
    if cert.check is Check.SCHWARZ_PICK:
        return float(schwarz_pick_gap(fn, zz)[0])
    if cert.check is Check.GROWTH_CONVEX:
        return float(growth_gap(fn, "convex", zz)[0])
    if cert.check is Check.GROWTH_UNIVALENT:
        return float(growth_gap(fn, "univalent", zz)[0])
    if cert.check is Check.STARLIKE_HALF:
        return float(starlike_gap(fn, zz)[0])
    raise PreconditionError(f"no replay for {cert.check}")
