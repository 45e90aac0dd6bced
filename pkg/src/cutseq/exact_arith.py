"""Exact arithmetic in Q(sqrt 2) and the projective action of 2x2 matrices on directions.

Scalars are pairs of arbitrary-precision rationals (a, b) representing a + b*sqrt(2),
kept in canonical (fully reduced) form by fractions.Fraction.  Sign tests are decided
exactly, never through floating point, so sector classifications downstream carry no
tolerance.  Directions live on the projective line: either an exact Q(sqrt 2) vector
normalized to (mu, 1) or (+-1, 0), or a floating angle in [0, pi].  The two horizontal
points (1, 0) and (-1, 0) are kept distinct because the renormalization map in angle
coordinates sends 0 to pi.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

SQRT2_FLOAT = math.sqrt(2.0)


class SingularMatrixError(ZeroDivisionError):
    """Inversion of a matrix with zero determinant."""


def _frac(value: int | str | Fraction) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


@dataclass(frozen=True)
class Q2Scalar:
    """An element a + b*sqrt(2) of Q(sqrt 2), with exact rational a and b."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", _frac(self.a))
        object.__setattr__(self, "b", _frac(self.b))

    # -- ring/field structure ------------------------------------------------

    def __add__(self, other: Q2Scalar | int) -> Q2Scalar:
        other = _coerce(other)
        return Q2Scalar(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self) -> Q2Scalar:
        return Q2Scalar(-self.a, -self.b)

    def __sub__(self, other: Q2Scalar | int) -> Q2Scalar:
        other = _coerce(other)
        return Q2Scalar(self.a - other.a, self.b - other.b)

    def __rsub__(self, other: int) -> Q2Scalar:
        return _coerce(other) - self

    def __mul__(self, other: Q2Scalar | int) -> Q2Scalar:
        other = _coerce(other)
        return Q2Scalar(
            self.a * other.a + 2 * self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    __rmul__ = __mul__

    def inverse(self) -> Q2Scalar:
        # (a + b s)^-1 = (a - b s) / (a^2 - 2 b^2); the norm vanishes only at 0.
        norm = self.a * self.a - 2 * self.b * self.b
        if norm == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt 2)")
        return Q2Scalar(self.a / norm, -self.b / norm)

    def __truediv__(self, other: Q2Scalar | int) -> Q2Scalar:
        return self * _coerce(other).inverse()

    def __rtruediv__(self, other: int) -> Q2Scalar:
        return _coerce(other) / self

    # -- exact order ---------------------------------------------------------

    def sign(self) -> int:
        """Exact sign, via sign analysis of a, b and comparison of a^2 with 2 b^2."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # a and b have opposite signs; the larger square wins.
        return sa if self.a * self.a > 2 * self.b * self.b else sb

    def __lt__(self, other: Q2Scalar | int) -> bool:
        return (self - _coerce(other)).sign() < 0

    def __le__(self, other: Q2Scalar | int) -> bool:
        return (self - _coerce(other)).sign() <= 0

    def __gt__(self, other: Q2Scalar | int) -> bool:
        return (self - _coerce(other)).sign() > 0

    def __ge__(self, other: Q2Scalar | int) -> bool:
        return (self - _coerce(other)).sign() >= 0

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    # -- conversions ---------------------------------------------------------

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * SQRT2_FLOAT

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        tail = f"{abs(self.b)}*sqrt2"
        if self.a == 0:
            return tail if self.b > 0 else "-" + tail
        op = "+" if self.b > 0 else "-"
        return f"{self.a}{op}{tail}"

    @classmethod
    def parse(cls, text: str) -> Q2Scalar:
        """Parse 'p/q', 'r/s*sqrt2' or 'p/q+r/s*sqrt2' (signs and spaces allowed)."""
        s = text.replace(" ", "")
        m = re.fullmatch(
            r"(?P<a>[+-]?\d+(?:/\d+)?)?"
            r"(?:(?P<op>[+-])?(?P<b>\d+(?:/\d+)?)?\*?sqrt2)?",
            s,
        )
        if not m or (m.group("a") is None and "sqrt2" not in s) or s == "":
            raise ValueError(f"cannot parse Q(sqrt 2) scalar: {text!r}")
        a = Fraction(0)
        b = Fraction(0)
        if "sqrt2" in s:
            coeff = Fraction(m.group("b") or 1)
            b = -coeff if m.group("op") == "-" else coeff
            if m.group("a") is not None and m.group("op") is None and m.group("b") is None:
                # forms like '3sqrt2' without operator: the leading number is b
                b = Fraction(m.group("a"))
            elif m.group("a") is not None:
                a = Fraction(m.group("a"))
        else:
            a = Fraction(m.group("a"))
        return cls(a, b)


ZERO = Q2Scalar()
ONE = Q2Scalar(Fraction(1))
SQRT2 = Q2Scalar(Fraction(0), Fraction(1))
HALF_SQRT2 = Q2Scalar(Fraction(0), Fraction(1, 2))


def _coerce(value: Q2Scalar | int | Fraction) -> Q2Scalar:
    if isinstance(value, Q2Scalar):
        return value
    return Q2Scalar(_frac(value))


def _sign_of(value) -> int:
    if isinstance(value, Q2Scalar):
        return value.sign()
    return (value > 0) - (value < 0)


@dataclass(frozen=True)
class Mat2:
    """A 2x2 matrix; entries are Q2Scalar (exact) or float, uniformly per matrix."""

    m11: object
    m12: object
    m21: object
    m22: object

    @classmethod
    def identity(cls) -> Mat2:
        return cls(ONE, ZERO, ZERO, ONE)

    @property
    def is_exact(self) -> bool:
        return isinstance(self.m11, Q2Scalar)

    def det(self):
        return self.m11 * self.m22 - self.m12 * self.m21

    def __matmul__(self, other: Mat2) -> Mat2:
        return Mat2(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    def inverse(self) -> Mat2:
        d = self.det()
        if _sign_of(d) == 0:
            raise SingularMatrixError("matrix has zero determinant")
        return Mat2(self.m22 / d, -self.m12 / d, -self.m21 / d, self.m11 / d)

    def entries(self) -> tuple:
        return (self.m11, self.m12, self.m21, self.m22)

    def as_floats(self) -> tuple[float, float, float, float]:
        return tuple(float(e) for e in self.entries())

    def to_json(self) -> list:
        """Row-major 4-element array; exact entries in the p/q+r/s*sqrt2 form."""
        return [str(e) if isinstance(e, Q2Scalar) else e for e in self.entries()]

    def apply_vector(self, x, y) -> tuple:
        return (self.m11 * x + self.m12 * y, self.m21 * x + self.m22 * y)


@dataclass(frozen=True)
class ExactDirection:
    """Exact projective direction, normalized to (mu, 1) or to (+-1, 0).

    The horizontal cases keep the sign of x so that the angle 0 (x = +1) stays
    distinct from the angle pi (x = -1); projectively they are the same point.
    """

    x: Q2Scalar
    y: Q2Scalar

    @classmethod
    def make(cls, x: Q2Scalar, y: Q2Scalar) -> ExactDirection:
        sy = y.sign()
        if sy < 0:
            x, y, sy = -x, -y, 1
        if sy == 0:
            sx = x.sign()
            if sx == 0:
                raise ValueError("zero vector does not define a direction")
            return cls(ONE if sx > 0 else -ONE, ZERO)
        return cls(x / y, ONE)

    @classmethod
    def from_cot(cls, mu: Q2Scalar | int | Fraction) -> ExactDirection:
        return cls(_coerce(mu), ONE)

    @classmethod
    def horizontal(cls, positive: bool = True) -> ExactDirection:
        """The direction of angle 0 (positive x axis) or pi (negative x axis)."""
        return cls(ONE if positive else -ONE, ZERO)

    @property
    def is_horizontal(self) -> bool:
        return self.y.is_zero()

    def mu(self) -> Q2Scalar:
        """Inverse slope x/y; infinite (undefined) for the horizontal points."""
        if self.is_horizontal:
            raise ZeroDivisionError("horizontal direction has infinite inverse slope")
        return self.x

    def theta(self) -> float:
        if self.is_horizontal:
            return 0.0 if self.x.sign() > 0 else math.pi
        t = math.atan2(float(self.y), float(self.x))
        return t if t >= 0 else t + math.pi

    def angle_key(self):
        """Sort key increasing with the angle in [0, pi]."""
        if self.is_horizontal:
            return (0, ZERO) if self.x.sign() > 0 else (2, ZERO)
        return (1, -self.x)


@dataclass(frozen=True)
class ApproxDirection:
    """Floating direction, an angle in [0, pi]."""

    theta: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"angle {self.theta} outside [0, pi]")

    def angle_key(self):
        return (1, self.theta)


Direction = ExactDirection | ApproxDirection


def approx_from_exact(d: ExactDirection) -> ApproxDirection:
    """Exact to floating is allowed; the reverse conversion is deliberately absent."""
    return ApproxDirection(d.theta())


def direction_from_vector(x: float, y: float) -> ApproxDirection:
    if y < 0:
        x, y = -x, -y
    t = math.atan2(y, x)
    return ApproxDirection(t if t >= 0 else t + math.pi)


def moebius_apply(m: Mat2, d: Direction) -> Direction:
    """Projective action of m on a direction; total, preserves the [0, pi] chart.

    Exact directions require exact matrix entries.  When the image is horizontal
    the sign of the image x coordinate distinguishes angle 0 from angle pi.
    """
    if isinstance(d, ExactDirection):
        if not m.is_exact:
            raise TypeError("exact direction needs a matrix with Q(sqrt 2) entries")
        return ExactDirection.make(*m.apply_vector(d.x, d.y))
    a, b, c, e = m.as_floats()
    vx, vy = math.cos(d.theta), math.sin(d.theta)
    wx, wy = a * vx + b * vy, c * vx + e * vy
    if wy < 0.0:
        wx, wy = -wx, -wy
    t = math.atan2(wy, wx)
    return ApproxDirection(t if t >= 0 else t + math.pi)


def direction_theta(d: Direction) -> float:
    return d.theta() if isinstance(d, ExactDirection) else d.theta
