"""Regular 2n-gon geometry: labelled sides, dihedral isometries, Veech shear.

The polygon has 2n unit sides, is centered at the origin and carries its first
side horizontally on top, vertices numbered clockwise from the top left.
Opposite sides are parallel, carry the same letter and are identified by the
translation through twice the side midpoint.  Vertex coordinates are exact
Q(sqrt 2) values for n in {2, 4} and floats otherwise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exact_arith import HALF_SQRT2, ONE, ZERO, ApproxDirection, ExactDirection, Mat2, Q2Scalar
from .symbolic import LetterPermutation, letter_at, letters_for

CONSTRUCTION_TOL = 1e-12


class InvalidN(ValueError):
    """Polygon side-pair count below 2."""


def _q2(a, b=0) -> Q2Scalar:
    return Q2Scalar(Fraction(a), Fraction(b))


_HALF = _q2(Fraction(1, 2))
_APOTHEM_OCT = _q2(Fraction(1, 2), Fraction(1, 2))  # (1 + sqrt 2) / 2


@dataclass(frozen=True)
class LabeledPolygon:
    """A labelled regular 2n-gon with opposite sides identified."""

    n: int
    vertices: tuple[tuple[float, float], ...]
    exact_vertices: tuple[tuple[Q2Scalar, Q2Scalar], ...] | None

    @property
    def side_count(self) -> int:
        return 2 * self.n

    def letter(self, side: int) -> str:
        return letter_at(side % self.n + 1)

    def side_endpoints(self, side: int) -> tuple[tuple[float, float], tuple[float, float]]:
        v = self.vertices
        return v[side], v[(side + 1) % (2 * self.n)]

    def side_midpoint(self, side: int) -> tuple[float, float]:
        (ax, ay), (bx, by) = self.side_endpoints(side)
        return ((ax + bx) / 2.0, (ay + by) / 2.0)

    def exact_side_endpoints(self, side: int):
        v = self.exact_vertices
        if v is None:
            raise ValueError("polygon has no exact coordinates for this n")
        return v[side], v[(side + 1) % (2 * self.n)]

    def contains(self, x: float, y: float, margin: float = 0.0) -> bool:
        """Interior test (convexity): inside every outward half-plane by margin."""
        for k in range(2 * self.n):
            (ax, ay), (bx, by) = self.side_endpoints(k)
            ex, ey = bx - ax, by - ay
            # outward normal of a clockwise polygon is the left normal (-ey, ex)
            if (x - ax) * (-ey) + (y - ay) * ex > -margin:
                return False
        return True

    def contains_exact(self, x: Q2Scalar, y: Q2Scalar) -> bool:
        if self.exact_vertices is None:
            raise ValueError("polygon has no exact coordinates for this n")
        for k in range(2 * self.n):
            (ax, ay), (bx, by) = self.exact_side_endpoints(k)
            ex, ey = bx - ax, by - ay
            if ((x - ax) * (-ey) + (y - ay) * ex).sign() >= 0:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "vertices": [[vx, vy] for vx, vy in self.vertices],
            "side_labels": {str(k): self.letter(k) for k in range(2 * self.n)},
            "exact_vertices": None
            if self.exact_vertices is None
            else [[str(vx), str(vy)] for vx, vy in self.exact_vertices],
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


@lru_cache(maxsize=None)
def build_polygon(n: int) -> LabeledPolygon:
    """Regular 2n-gon with unit sides, horizontal top side, clockwise labels."""
    if n < 2:
        raise InvalidN(f"need at least 2 side pairs, got {n}")
    letters_for(n)
    radius = 1.0 / (2.0 * math.sin(math.pi / (2 * n)))
    verts = []
    for k in range(2 * n):
        phi = math.pi / 2 + math.pi / (2 * n) - k * math.pi / n
        verts.append((radius * math.cos(phi), radius * math.sin(phi)))
    exact = None
    if n == 2:
        h = _HALF
        exact = ((-h, h), (h, h), (h, -h), (-h, -h))
    elif n == 4:
        h, c = _HALF, _APOTHEM_OCT
        exact = (
            (-h, c), (h, c), (c, h), (c, -h),
            (h, -c), (-h, -c), (-c, -h), (-c, h),
        )
    poly = LabeledPolygon(n, tuple(verts), exact)
    for k in range(2 * n):
        (ax, ay), (bx, by) = poly.side_endpoints(k)
        length = math.hypot(bx - ax, by - ay)
        if abs(length - 1.0) > CONSTRUCTION_TOL:
            raise AssertionError(f"side {k} has length {length}")
    return poly


# -- dihedral isometries -----------------------------------------------------

_NU_OCTAGON = None


def _octagon_nus() -> tuple[Mat2, ...]:
    global _NU_OCTAGON
    if _NU_OCTAGON is None:
        s = HALF_SQRT2
        one, zero = ONE, ZERO
        _NU_OCTAGON = (
            Mat2(one, zero, zero, one),
            Mat2(s, s, s, -s),
            Mat2(s, s, -s, s),
            Mat2(zero, one, one, zero),
            Mat2(zero, one, -one, zero),
            Mat2(-s, s, s, s),
            Mat2(-s, s, -s, -s),
            Mat2(-one, zero, zero, one),
        )
    return _NU_OCTAGON


def _square_nus() -> tuple[Mat2, ...]:
    one, zero = ONE, ZERO
    return (
        Mat2(one, zero, zero, one),
        Mat2(zero, one, one, zero),
        Mat2(zero, one, -one, zero),
        Mat2(-one, zero, zero, one),
    )


@lru_cache(maxsize=None)
def isometry_nu(i: int, n: int) -> Mat2:
    """The dihedral element carrying the closed sector i onto the closed sector 0.

    Even indices 2k are the clockwise rotations by k pi / n, odd indices 2k+1
    the reflections in the line of angle (k+1) pi / 2n.  Exact entries for
    n in {2, 4}, floats otherwise.
    """
    if not 0 <= i < 2 * n:
        raise IndexError(f"isometry index {i} outside 0..{2 * n - 1}")
    if n == 4:
        return _octagon_nus()[i]
    if n == 2:
        return _square_nus()[i]
    if i % 2 == 0:
        k = i // 2
        c, s = math.cos(k * math.pi / n), math.sin(k * math.pi / n)
        return Mat2(c, s, -s, c)
    k = i // 2
    phi = (k + 1) * math.pi / (2 * n)
    c2, s2 = math.cos(2 * phi), math.sin(2 * phi)
    return Mat2(c2, s2, s2, -c2)


@lru_cache(maxsize=None)
def induced_permutation(i: int, n: int) -> LetterPermutation:
    """Letter permutation induced by isometry i, computed geometrically.

    Each side midpoint is mapped through the matrix and located among the side
    midpoints (up to the central symmetry identifying opposite sides); the
    letter of the source pair goes to the letter of the image pair.
    """
    if not 0 <= i < 2 * n:
        raise IndexError(f"isometry index {i} outside 0..{2 * n - 1}")
    poly = build_polygon(n)
    nu = isometry_nu(i, n)
    images: list[str] = [""] * n
    if nu.is_exact and poly.exact_vertices is not None:
        mids = []
        for k in range(2 * n):
            (ax, ay), (bx, by) = poly.exact_side_endpoints(k)
            mids.append(((ax + bx) / _q2(2), (ay + by) / _q2(2)))
        for j in range(n):
            mx, my = nu.apply_vector(*mids[j])
            for k, (cx, cy) in enumerate(mids):
                if (mx - cx).is_zero() and (my - cy).is_zero():
                    images[j] = poly.letter(k)
                    break
            else:
                raise AssertionError("isometry does not permute the sides")
    else:
        a, b, c, d = nu.as_floats()
        mids = [poly.side_midpoint(k) for k in range(2 * n)]
        for j in range(n):
            mx, my = mids[j]
            ix, iy = a * mx + b * my, c * mx + d * my
            for k, (cx, cy) in enumerate(mids):
                if math.hypot(ix - cx, iy - cy) < 1e-9:
                    images[j] = poly.letter(k)
                    break
            else:
                raise AssertionError("isometry does not permute the sides")
    return LetterPermutation(tuple(images))


def cot_half_sector(n: int):
    """cot(pi / 2n): exact 1 + sqrt 2 for the octagon, 1 for the square."""
    if n == 4:
        return _q2(1, 1)
    if n == 2:
        return _q2(1)
    return 1.0 / math.tan(math.pi / (2 * n))


@lru_cache(maxsize=None)
def veech_elements(n: int) -> tuple[Mat2, Mat2]:
    """The parabolic shear sigma and the affine reflection gamma = sigma o (vertical flip).

    sigma = (1, 2 cot(pi/2n); 0, 1) twists the horizontal cylinder decomposition;
    gamma = (-1, 2 cot(pi/2n); 0, 1) is an involution and satisfies
    gamma @ nu_(2n-1) = sigma.
    """
    if n < 2:
        raise InvalidN(f"need at least 2 side pairs, got {n}")
    c = cot_half_sector(n)
    if isinstance(c, Q2Scalar):
        one, zero = ONE, ZERO
        two_c = _q2(2) * c
    else:
        one, zero = 1.0, 0.0
        two_c = 2.0 * c
    sigma = Mat2(one, two_c, zero, one)
    gamma = Mat2(-one, two_c, zero, one)
    return sigma, gamma


# -- sectors -----------------------------------------------------------------

_COT_BOUNDS_OCT = (
    _q2(1, 1), _q2(1), _q2(-1, 1), _q2(0), _q2(1, -1), _q2(-1), _q2(-1, -1),
)
_COT_BOUNDS_SQ = (_q2(1), _q2(0), _q2(-1))


def sector_cot_bounds(n: int):
    """cot(k pi / 2n) for k = 1..2n-1, decreasing; exact for n in {2, 4}."""
    if n == 4:
        return _COT_BOUNDS_OCT
    if n == 2:
        return _COT_BOUNDS_SQ
    return tuple(1.0 / math.tan(k * math.pi / (2 * n)) for k in range(1, 2 * n))


def sector_of(d, n: int) -> int:
    """Index i of the half-open sector [i pi/2n, (i+1) pi/2n) holding d.

    The last sector is closed so that the angle pi lands in sector 2n-1; the
    angle 0 is in sector 0.  Exact directions are classified by exact inverse
    slope comparisons.
    """
    if isinstance(d, ExactDirection):
        if n not in (2, 4):
            raise ValueError("exact sector classification needs n in {2, 4}")
        if d.is_horizontal:
            return 0 if d.x.sign() > 0 else 2 * n - 1
        mu = d.mu()
        bounds = sector_cot_bounds(n)
        for i, bound in enumerate(bounds):
            if mu > bound:
                return i
        return 2 * n - 1
    theta = d.theta if isinstance(d, ApproxDirection) else float(d)
    i = int(math.floor(theta * (2 * n) / math.pi))
    return min(max(i, 0), 2 * n - 1)
