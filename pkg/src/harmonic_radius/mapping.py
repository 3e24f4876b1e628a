"""Harmonic mappings f = h + conj(g) with co-analytic part g = w*h."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .expr import (
    Constant,
    Expr,
    Z,
    build_catalog,
    derivative,
    evaluate,
    parse_catalog,
    HalfPlane,
    Koebe,
)
from .sampling import disk_points

NORMALIZATION_TOL = 1e-12
DILATATION_TOL = 1e-9
DILATATION_SAMPLES = 1000
DILATATION_RADIUS = 0.99
DERIVATIVE_GUARD = 1e-14


class NormalizationError(ValueError):
    """h(0) != 0 or h'(0) != 1."""


class DilatationBoundError(ValueError):
    """The dilatation factor w exceeds modulus 1 at a sampled point."""


class DegenerateDerivative(ArithmeticError):
    """h' vanishes (numerically) at the requested point."""


class MappingSpecError(ValueError):
    """Malformed mapping text."""


@dataclass(frozen=True)
class HarmonicMapping:
    h: Expr
    w: Expr
    label: str = ""
    spec: str = ""
    g: Expr = field(init=False, repr=False)
    dh: Expr = field(init=False, repr=False)
    dg: Expr = field(init=False, repr=False)

    def __post_init__(self):
        g = self.w * self.h
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "dh", derivative(self.h))
        object.__setattr__(self, "dg", derivative(g))


def make_mapping(h: Expr, w: Expr, label: str = "", spec: str = "") -> HarmonicMapping:
    """Build f = h + conj(w*h) after checking normalization and |w| <= 1.

    The bound on w is a sanity gate over 10^3 quasi-uniform points with
    |z| <= 0.99, not a proof.
    """
    if abs(evaluate(h, 0j)) > NORMALIZATION_TOL:
        raise NormalizationError(f"h(0) = {evaluate(h, 0j)} != 0")
    dh0 = evaluate(derivative(h), 0j)
    if abs(dh0 - 1) > NORMALIZATION_TOL:
        raise NormalizationError(f"h'(0) = {dh0} != 1")
    zs = disk_points(DILATATION_SAMPLES, DILATATION_RADIUS, seed=0)
    wmax = float(np.max(np.abs(evaluate(w, zs))))
    if wmax > 1 + DILATATION_TOL:
        raise DilatationBoundError(f"sampled |w| reaches {wmax:.6g} > 1")
    m = HarmonicMapping(h=h, w=w, label=label, spec=spec)
    if abs(evaluate(m.g, 0j)) > NORMALIZATION_TOL:
        raise NormalizationError("g(0) != 0")
    return m


def eval_f(m: HarmonicMapping, z):
    """h(z) + conj(g(z))."""
    return evaluate(m.h, z) + np.conj(evaluate(m.g, z))


def jacobian(m: HarmonicMapping, z):
    """|h'(z)|^2 - |g'(z)|^2."""
    a = evaluate(m.dh, z)
    b = evaluate(m.dg, z)
    return np.abs(a) ** 2 - np.abs(b) ** 2


def dilatation_ratio(m: HarmonicMapping, z):
    """g'(z) / h'(z); raises DegenerateDerivative where |h'| < 1e-14."""
    a = evaluate(m.dh, z)
    if np.min(np.abs(a)) < DERIVATIVE_GUARD:
        raise DegenerateDerivative("h' vanishes at the requested point")
    return evaluate(m.dg, z) / a


# ------------------------------------------------------------- built-ins


def f1() -> HarmonicMapping:
    """z/(1-z) - conj(z/2); not sense-preserving on the whole disk."""
    h = build_catalog(HalfPlane(-1))
    # g/h = -(1 - z)/2
    w = Constant(-0.5) * (1 - Z)
    return make_mapping(h, w, label="f1", spec="f1")


def f2() -> HarmonicMapping:
    """z/(1-z)^2 - conj(z/(2(1-z))); not sense-preserving on the whole disk."""
    h = build_catalog(Koebe(-1))
    w = Constant(-0.5) * (1 - Z)
    return make_mapping(h, w, label="f2", spec="f2")


BUILTINS = {"f1": f1, "f2": f2}


def parse_mapping(text: str) -> HarmonicMapping:
    """Parse ``f1``, ``f2`` or ``h=<catalog>;w=<catalog>``."""
    text = text.strip()
    if text in BUILTINS:
        return BUILTINS[text]()
    parts = {}
    for chunk in text.split(";"):
        key, sep, value = chunk.partition("=")
        key = key.strip().lower()
        if not sep or key not in ("h", "w") or key in parts:
            raise MappingSpecError(f"expected 'h=<catalog>;w=<catalog>', got {text!r}")
        parts[key] = value.strip()
    if set(parts) != {"h", "w"}:
        raise MappingSpecError(f"expected 'h=<catalog>;w=<catalog>', got {text!r}")
    h_id = parse_catalog(parts["h"])
    w_id = parse_catalog(parts["w"])
    spec = f"h={h_id.text()};w={w_id.text()}"
    return make_mapping(build_catalog(h_id), build_catalog(w_id), label=spec, spec=spec)
