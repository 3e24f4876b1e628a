"""Sense-preservation radii, the extremal bound functions and sharpness search."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

BRACKET_WIDTH = 1e-13
MAX_BISECTIONS = 60
RESIDUAL_TOL = 1e-12

ZETA_MAX = 1 - 1e-9
ZETA_SCAN_STEP = 1e-3
GOLDEN_ITERATIONS = 200


class Kind(str, enum.Enum):
    CONVEX = "convex"
    UNIVALENT = "univalent"


@dataclass(frozen=True)
class RadiusResult:
    value: float
    equation: str
    residual: float
    bracket_lo: float
    bracket_hi: float
    iterations: int
    exact: Optional[str] = None


def theorem_radius(kind: Kind | str) -> RadiusResult:
    """1/3 for convex analytic part, 2 - sqrt(3) for univalent analytic part."""
    kind = Kind(kind)
    if kind is Kind.CONVEX:
        return RadiusResult(1 / 3, "ConvexTheorem", 0.0, 0.0, 1.0, 0, exact="1/3")
    return RadiusResult(2 - math.sqrt(3), "UnivalentTheorem", 0.0, 0.0, 1.0, 0, exact="2-sqrt(3)")


def poly_n1(n: int, r: float) -> float:
    return n * r ** (n + 1) + (n + 1) * r**n - 1


def dpoly_n1(n: int, r: float) -> float:
    return n * (n + 1) * r**n + (n + 1) * n * r ** (n - 1)


def poly_n2(n: int, r: float) -> float:
    return (n - 1) * r ** (n + 1) + (n + 1) * r**n + r - 1


def dpoly_n2(n: int, r: float) -> float:
    return (n - 1) * (n + 1) * r**n + (n + 1) * n * r ** (n - 1) + 1


def _increasing_root(p: Callable[[float], float], dp: Callable[[float], float]):
    """Root in (0, 1) of a function increasing from p(0) < 0 to p(1) > 0.

    Bisection until the bracket is below 1e-13, then one Newton step kept
    only if it stays in the bracket and lowers the residual.
    """
    lo, hi = 0.0, 1.0
    iterations = 0
    mid = 0.5
    while hi - lo > BRACKET_WIDTH and iterations < MAX_BISECTIONS:
        mid = 0.5 * (lo + hi)
        iterations += 1
        pm = p(mid)
        if pm == 0:
            return mid, 0.0, lo, hi, iterations
        if pm < 0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    px = p(x)
    slope = dp(x)
    if slope != 0:
        polished = x - px / slope
        if lo < polished < hi and abs(p(polished)) < abs(px):
            x, px = polished, p(polished)
    return x, px, lo, hi, iterations


def _poly_radius(n: int, p, dp, name: str) -> RadiusResult:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"n must be an integer >= 1, got {n!r}")
    n = int(n)
    value, residual, lo, hi, its = _increasing_root(lambda r: p(n, r), lambda r: dp(n, r))
    if lo == value:
        lo = max(0.0, value - BRACKET_WIDTH)
    if hi == value:
        hi = min(1.0, value + BRACKET_WIDTH)
    return RadiusResult(value, f"{name}({n})", residual, lo, hi, its)


def radius_n1(n: int) -> RadiusResult:
    """Unique root in (0, 1) of n r^(n+1) + (n+1) r^n - 1 (convex h, w = e^{it} z^n)."""
    return _poly_radius(n, poly_n1, dpoly_n1, "PolyN1")


def radius_n2(n: int) -> RadiusResult:
    """Unique root in (0, 1) of (n-1) r^(n+1) + (n+1) r^n + r - 1 (univalent h, w = e^{it} z^n)."""
    return _poly_radius(n, poly_n2, dpoly_n2, "PolyN2")


# ------------------------------------------------------- extremal bounds


def bound_U(r, zeta):
    """g'(r)/h'(r) for h = z/(1+z) and the real Blaschke factor at zeta."""
    d = 1 + r * zeta
    return (r + zeta) / d + r * (1 + r) * (1 - zeta**2) / d**2


def bound_V(r, zeta):
    """g'(r)/h'(r) for h = z/(1+z)^2 and the real Blaschke factor at zeta."""
    d = 1 + r * zeta
    return (r + zeta) / d + (1 - zeta**2) / d**2 * r * (1 + r) / (1 - r)


def dU_dzeta_at1(r):
    return (1 - 3 * r) / (1 + r)


def dV_dzeta_at1(r):
    return (1 - 4 * r + r**2) / (1 - r**2)


@dataclass(frozen=True)
class Witness:
    zeta: float
    excess: float


def golden_max(f: Callable[[float], float], a: float, b: float, iterations: int = GOLDEN_ITERATIONS):
    """Golden-section search for a maximum of ``f`` on [a, b]."""
    inv_phi = (math.sqrt(5) - 1) / 2
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iterations):
        if b - a <= 0:
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    return (c, fc) if fc > fd else (d, fd)


def sharpness_witness(kind: Kind | str, r: float) -> Optional[Witness]:
    """Largest excess bound(r, zeta) - 1 over zeta in [0, 1 - 1e-9].

    A coarse scan with step 1e-3 locates the best cell, then golden-section
    search refines it. Returns None unless the excess is positive, i.e.
    unless the extremal mapping fails to be sense-preserving at the real
    point r.
    """
    kind = Kind(kind)
    if not 0 < r < 1:
        raise ValueError(f"r must lie in (0, 1), got {r}")
    bound = bound_U if kind is Kind.CONVEX else bound_V
    grid = np.append(np.arange(0.0, ZETA_MAX, ZETA_SCAN_STEP), ZETA_MAX)
    values = bound(r, grid)
    i = int(np.argmax(values))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    # Golden-section evaluates strictly inside [lo, hi], so zeta > 0.
    zeta, best = golden_max(lambda t: float(bound(r, t)), float(lo), float(hi))
    excess = best - 1
    if excess > 0:
        return Witness(zeta=zeta, excess=excess)
    return None


def radius_table(n_max: int):
    """Rows (n, radius_n1(n), radius_n2(n)) for n = 1..n_max."""
    return [(n, radius_n1(n), radius_n2(n)) for n in range(1, n_max + 1)]
