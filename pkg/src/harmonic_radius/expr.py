"""Rational expression trees for analytic functions on the unit disk.

Trees are immutable; evaluation works on Python complex scalars and on
numpy complex arrays alike. Differentiation is symbolic and performs no
simplification, so derivative trees are evaluated exactly as built.
"""
from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

POLE_GUARD = 1e-14

Number = Union[int, float, complex]


class PoleError(ArithmeticError):
    """A denominator came within POLE_GUARD of zero."""


class CatalogError(ValueError):
    """Invalid catalog parameters or catalog text."""


class Expr:
    """Base node. Supports arithmetic operators to build trees."""

    __slots__ = ()

    def __call__(self, z):
        return evaluate(self, z)

    def __add__(self, other):
        return Add(self, _lift(other))

    def __radd__(self, other):
        return Add(_lift(other), self)

    def __sub__(self, other):
        return Sub(self, _lift(other))

    def __rsub__(self, other):
        return Sub(_lift(other), self)

    def __mul__(self, other):
        return Mul(self, _lift(other))

    def __rmul__(self, other):
        return Mul(_lift(other), self)

    def __truediv__(self, other):
        return Div(self, _lift(other))

    def __rtruediv__(self, other):
        return Div(_lift(other), self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, k):
        return IntPow(self, k)


def _lift(value) -> Expr:
    if isinstance(value, Expr):
        return value
    return Constant(complex(value))


@dataclass(frozen=True)
class Variable(Expr):
    def __str__(self):
        return "z"


@dataclass(frozen=True)
class Constant(Expr):
    value: complex

    def __post_init__(self):
        v = complex(self.value)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise ValueError(f"non-finite constant {self.value!r}")
        object.__setattr__(self, "value", v)

    def __str__(self):
        v = self.value
        if v.imag == 0:
            return f"{v.real:g}"
        return f"({v.real:g}{v.imag:+g}i)"


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr

    def __str__(self):
        return f"({self.left} + {self.right})"


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr

    def __str__(self):
        return f"({self.left} - {self.right})"


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr

    def __str__(self):
        return f"{self.left}*{self.right}"


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr

    def __str__(self):
        return f"{self.left}/{self.right}"


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr

    def __str__(self):
        return f"-{self.operand}"


@dataclass(frozen=True)
class IntPow(Expr):
    base: Expr
    k: int

    def __post_init__(self):
        if isinstance(self.k, bool) or not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"IntPow exponent must be an integer >= 1, got {self.k!r}")

    def __str__(self):
        return f"{self.base}^{self.k}"


Z = Variable()
ZERO = Constant(0)
ONE = Constant(1)


def evaluate(e: Expr, z):
    """Evaluate ``e`` at ``z`` (complex scalar or complex ndarray).

    Raises PoleError if any division denominator has modulus below
    POLE_GUARD.
    """
    if isinstance(e, Variable):
        return z
    if isinstance(e, Constant):
        if np.ndim(z):
            return np.full(np.shape(z), e.value, dtype=complex)
        return e.value
    if isinstance(e, Add):
        return evaluate(e.left, z) + evaluate(e.right, z)
    if isinstance(e, Sub):
        return evaluate(e.left, z) - evaluate(e.right, z)
    if isinstance(e, Mul):
        return evaluate(e.left, z) * evaluate(e.right, z)
    if isinstance(e, Div):
        den = evaluate(e.right, z)
        if np.min(np.abs(den)) < POLE_GUARD:
            raise PoleError(f"denominator {e.right} vanishes near z")
        return evaluate(e.left, z) / den
    if isinstance(e, Neg):
        return -evaluate(e.operand, z)
    if isinstance(e, IntPow):
        return evaluate(e.base, z) ** e.k
    raise TypeError(f"not an expression node: {e!r}")


def derivative(e: Expr) -> Expr:
    """Symbolic d/dz by the sum, product, quotient and power rules."""
    if isinstance(e, Variable):
        return ONE
    if isinstance(e, Constant):
        return ZERO
    if isinstance(e, Add):
        return Add(derivative(e.left), derivative(e.right))
    if isinstance(e, Sub):
        return Sub(derivative(e.left), derivative(e.right))
    if isinstance(e, Mul):
        return Add(Mul(derivative(e.left), e.right), Mul(e.left, derivative(e.right)))
    if isinstance(e, Div):
        num = Sub(Mul(derivative(e.left), e.right), Mul(e.left, derivative(e.right)))
        return Div(num, IntPow(e.right, 2))
    if isinstance(e, Neg):
        return Neg(derivative(e.operand))
    if isinstance(e, IntPow):
        db = derivative(e.base)
        if e.k == 1:
            return db
        power = e.base if e.k == 2 else IntPow(e.base, e.k - 1)
        return Mul(Mul(Constant(e.k), power), db)
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------- catalog


@dataclass(frozen=True)
class HalfPlane:
    """z / (1 + s z): convex univalent map onto a half-plane."""

    sign: int

    def text(self) -> str:
        return f"halfplane:{self.sign:+d}"


@dataclass(frozen=True)
class Koebe:
    """z / (1 + s z)^2."""

    sign: int

    def text(self) -> str:
        return f"koebe:{self.sign:+d}"


@dataclass(frozen=True)
class Blaschke:
    """(z + zeta) / (1 + zeta z) for real zeta in [-1, 1]."""

    zeta: float

    def text(self) -> str:
        return f"blaschke:{self.zeta!r}"


@dataclass(frozen=True)
class Monomial:
    """exp(i theta) z^n."""

    theta: float
    n: int

    def text(self) -> str:
        return f"monomial:{self.theta!r}:{self.n}"


@dataclass(frozen=True)
class ConstantFn:
    """The constant c with |c| < 1."""

    c: complex

    def text(self) -> str:
        c = complex(self.c)
        return f"const:{c.real!r}{c.imag:+}i"


CatalogId = Union[HalfPlane, Koebe, Blaschke, Monomial, ConstantFn]

# Catalog members that belong to the Schwarz class (|w| <= 1 on the disk).
DILATATION_KINDS = (Blaschke, Monomial, ConstantFn)


def _check_sign(sign) -> int:
    if sign not in (1, -1):
        raise CatalogError(f"sign must be +1 or -1, got {sign!r}")
    return int(sign)


def build_catalog(cid: CatalogId) -> Expr:
    """Expression tree for a catalog function."""
    if isinstance(cid, HalfPlane):
        s = _check_sign(cid.sign)
        return Z / (1 + Constant(s) * Z)
    if isinstance(cid, Koebe):
        s = _check_sign(cid.sign)
        return Z / IntPow(1 + Constant(s) * Z, 2)
    if isinstance(cid, Blaschke):
        zeta = float(cid.zeta)
        if not -1.0 <= zeta <= 1.0:
            raise CatalogError(f"Blaschke zeta must lie in [-1, 1], got {zeta}")
        return (Z + Constant(zeta)) / (1 + Constant(zeta) * Z)
    if isinstance(cid, Monomial):
        if isinstance(cid.n, bool) or not isinstance(cid.n, int) or cid.n < 1:
            raise CatalogError(f"Monomial degree must be an integer >= 1, got {cid.n!r}")
        rot = cmath.exp(1j * float(cid.theta))
        power = Z if cid.n == 1 else IntPow(Z, cid.n)
        return Constant(rot) * power
    if isinstance(cid, ConstantFn):
        c = complex(cid.c)
        if not abs(c) < 1:
            raise CatalogError(f"constant dilatation needs |c| < 1, got |c| = {abs(c)}")
        return Constant(c)
    raise CatalogError(f"unknown catalog id {cid!r}")


def _parse_sign(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise CatalogError(f"bad sign {text!r}") from None
    return _check_sign(value)


def _parse_complex(text: str) -> complex:
    # Accept both the 'i' and 'j' imaginary suffixes.
    cleaned = re.sub(r"\s+", "", text).replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError:
        raise CatalogError(f"bad complex number {text!r}") from None


def _parse_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise CatalogError(f"bad real number {text!r}") from None
    if not math.isfinite(value):
        raise CatalogError(f"non-finite number {text!r}")
    return value


def parse_catalog(text: str) -> CatalogId:
    """Parse the canonical text form, e.g. ``koebe:+1`` or ``monomial:0:2``.

    Grammar::

        halfplane:<+1|-1>
        koebe:<+1|-1>
        blaschke:<real zeta>
        monomial:<real theta>:<integer n>
        const:<complex c>        (e.g. 0.5+0i, -0.25, 0.1-0.3i)
    """
    tag, _, rest = text.strip().partition(":")
    tag = tag.lower()
    if not rest:
        raise CatalogError(f"missing parameters in {text!r}")
    if tag == "halfplane":
        cid = HalfPlane(_parse_sign(rest))
    elif tag == "koebe":
        cid = Koebe(_parse_sign(rest))
    elif tag == "blaschke":
        cid = Blaschke(_parse_float(rest))
    elif tag == "monomial":
        theta, sep, n = rest.partition(":")
        if not sep:
            raise CatalogError(f"monomial needs theta and n: {text!r}")
        try:
            degree = int(n)
        except ValueError:
            raise CatalogError(f"bad monomial degree {n!r}") from None
        cid = Monomial(_parse_float(theta), degree)
    elif tag == "const":
        cid = ConstantFn(_parse_complex(rest))
    else:
        raise CatalogError(f"unknown catalog tag {tag!r}")
    build_catalog(cid)  # validates parameters
    return cid
