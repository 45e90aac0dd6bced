"""Piecewise renormalization map on directions and its additive continued fraction.

The map acts on the projective directions [0, pi]: on the closed sector i it is
the fractional-linear action of gamma @ nu_i, where nu_i renormalizes the sector
to sector 0 and gamma is the affine reflection.  All branches send their sector
onto [pi/2n, pi], so itinerary entries after the first are never 0; an itinerary
read off the half-open sectors is the additive continued fraction expansion of
the direction.  The two indifferent fixed points are pi/2n (branch 1) and pi
(branch 2n-1); expansions with an eventually constant tail at those branches
are the terminating directions, whose trajectories are periodic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exact_arith import (
    ApproxDirection,
    Direction,
    ExactDirection,
    Mat2,
    Q2Scalar,
    direction_theta,
    moebius_apply,
)
from .polygon import cot_half_sector, isometry_nu, sector_cot_bounds, sector_of, veech_elements


class InvalidPrefixError(ValueError):
    """An expansion prefix violating the admissible-entry constraints."""


@dataclass(frozen=True)
class FareyBranch:
    """One branch: sector index, acting matrix, closed sector domain in mu."""

    sector: int
    matrix: Mat2
    mu_hi: object  # cot(i pi / 2n), None for +infinity (sector 0)
    mu_lo: object  # cot((i+1) pi / 2n), None for -infinity (last sector)


@lru_cache(maxsize=None)
def farey_branch(i: int, n: int) -> FareyBranch:
    if not 0 <= i < 2 * n:
        raise IndexError(f"branch index {i} outside 0..{2 * n - 1}")
    _, gamma = veech_elements(n)
    matrix = gamma @ isometry_nu(i, n)
    bounds = sector_cot_bounds(n)
    mu_hi = None if i == 0 else bounds[i - 1]
    mu_lo = None if i == 2 * n - 1 else bounds[i]
    return FareyBranch(i, matrix, mu_hi, mu_lo)


def farey_apply(d: Direction, n: int) -> tuple[Direction, int]:
    """One step of the renormalization map; returns the image and the sector used."""
    sector = sector_of(d, n)
    return moebius_apply(farey_branch(sector, n).matrix, d), sector


def itinerary(d: Direction, n: int, depth: int) -> tuple[int, ...]:
    """Sector indices of d, F(d), F^2(d), ... with half-open sector convention."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    out = []
    cur = d
    for _ in range(depth):
        cur, sector = farey_apply(cur, n)
        out.append(sector)
    return tuple(out)


# -- expansions ---------------------------------------------------------------


@dataclass(frozen=True)
class Expansion:
    """An additive continued fraction expansion: entries plus an optional constant tail.

    tail, when set, must be 1 or 2n-1 and means the entries continue with that
    value forever.
    """

    n: int
    entries: tuple[int, ...]
    tail: int | None = None

    def __post_init__(self) -> None:
        if self.tail is not None and self.tail not in (1, 2 * self.n - 1):
            raise ValueError(f"constant tail must be 1 or {2 * self.n - 1}")

    @property
    def in_s_star(self) -> bool:
        """Entry 0 may occur only in position 0."""
        top = 2 * self.n - 1
        if any(not 0 <= e <= top for e in self.entries):
            return False
        return all(e != 0 for e in self.entries[1:]) and (self.tail != 0)

    @property
    def is_sector_sequence(self) -> bool:
        """Realizable as an itinerary: tail 1 needs an odd predecessor, tail 2n-1 an even one.

        The predecessor is the last entry before the constant tail begins (the
        entries are first canonicalized by absorbing trailing tail values).
        """
        if not self.in_s_star:
            return False
        if self.tail is None:
            return True
        entries = list(self.entries)
        while entries and entries[-1] == self.tail:
            entries.pop()
        if not entries:
            return True
        prev = entries[-1]
        if self.tail == 1:
            return prev % 2 == 1
        return prev % 2 == 0 and prev != 0

    def prefix(self, depth: int) -> tuple[int, ...]:
        if depth <= len(self.entries):
            return self.entries[:depth]
        if self.tail is None:
            raise ValueError(f"expansion has only {len(self.entries)} entries")
        return self.entries + (self.tail,) * (depth - len(self.entries))


def _check_prefix(prefix: tuple[int, ...], n: int) -> None:
    if not prefix:
        raise InvalidPrefixError("empty prefix")
    top = 2 * n - 1
    if not 0 <= prefix[0] <= top or any(not 1 <= e <= top for e in prefix[1:]):
        raise InvalidPrefixError(f"prefix {prefix} violates the entry constraints")


def _sector_endpoints(i: int, n: int) -> tuple[Direction, Direction]:
    bounds = sector_cot_bounds(n)
    exact = n in (2, 4)
    if exact:
        lo = ExactDirection.horizontal(True) if i == 0 else ExactDirection.from_cot(bounds[i - 1])
        hi = (
            ExactDirection.horizontal(False)
            if i == 2 * n - 1
            else ExactDirection.from_cot(bounds[i])
        )
        return lo, hi
    step = math.pi / (2 * n)
    return ApproxDirection(i * step), ApproxDirection(min((i + 1) * step, math.pi))


@dataclass(frozen=True)
class SectorInterval:
    """Closed interval of directions cut out by an expansion prefix."""

    lo: Direction
    hi: Direction
    prefix: tuple[int, ...]
    n: int

    def theta_bounds(self) -> tuple[float, float]:
        return direction_theta(self.lo), direction_theta(self.hi)

    def width(self) -> float:
        a, b = self.theta_bounds()
        return b - a

    def contains_theta(self, theta: float, slack: float = 1e-12) -> bool:
        a, b = self.theta_bounds()
        return a - slack <= theta <= b + slack


def _order(a: Direction, b: Direction) -> tuple[Direction, Direction]:
    return (a, b) if a.angle_key() <= b.angle_key() else (b, a)


@lru_cache(maxsize=None)
def _inverse_branch(i: int, n: int) -> Mat2:
    return farey_branch(i, n).matrix.inverse()


def sector_interval(prefix: tuple[int, ...] | list[int], n: int = 4) -> SectorInterval:
    """Directions whose expansion starts with the given prefix.

    The innermost sector is pulled back through the inverse branches of the
    remaining entries; nesting under prefix extension is automatic because each
    pullback lands inside its branch's sector.
    """
    prefix = tuple(prefix)
    _check_prefix(prefix, n)
    lo, hi = _sector_endpoints(prefix[-1], n)
    for entry in reversed(prefix[:-1]):
        inv = _inverse_branch(entry, n)
        lo, hi = _order(moebius_apply(inv, lo), moebius_apply(inv, hi))
    return SectorInterval(lo, hi, prefix, n)


def fixed_point(tail: int, n: int) -> Direction:
    """The direction fixed by branch 1 (angle pi/2n) or branch 2n-1 (angle pi)."""
    if tail == 1:
        c = cot_half_sector(n)
        if isinstance(c, Q2Scalar):
            return ExactDirection.from_cot(c)
        return ApproxDirection(math.pi / (2 * n))
    if tail == 2 * n - 1:
        if n in (2, 4):
            return ExactDirection.horizontal(False)
        return ApproxDirection(math.pi)
    raise ValueError(f"no fixed branch with index {tail}")


def direction_from_expansion(exp: Expansion, depth: int) -> SectorInterval:
    """Interval after `depth` entries; exact fixed-point preimage for constant tails.

    With a constant tail the interval is degenerate: the direction is the
    pullback of the branch fixed point through the inverse branches of the
    explicit entries.
    """
    n = exp.n
    if not exp.in_s_star:
        raise InvalidPrefixError(f"expansion {exp.entries} (tail {exp.tail}) not valid")
    if exp.tail is not None:
        point = fixed_point(exp.tail, n)
        for entry in reversed(exp.entries):
            point = moebius_apply(_inverse_branch(entry, n), point)
        return SectorInterval(point, point, exp.prefix(depth), n)
    return sector_interval(exp.prefix(depth), n)


# -- terminating directions ---------------------------------------------------


@dataclass(frozen=True)
class TerminationResult:
    terminating: bool
    certainty: str  # "exact" | "heuristic" | "bounded"
    tail: int | None
    depth: int
    itinerary: tuple[int, ...]


def is_terminating(d: Direction, n: int, max_depth: int) -> TerminationResult:
    """Detect an eventually constant expansion tail within max_depth steps.

    Exact directions (n in {2, 4}) give a proof: the orbit lands exactly on a
    branch fixed point.  Floating directions are judged heuristically by a
    constant run over the last 10 sampled entries.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    exact = isinstance(d, ExactDirection)
    fp_low = fixed_point(1, n) if n in (2, 4) else None
    entries: list[int] = []
    cur = d
    for k in range(max_depth):
        if exact:
            if cur == fp_low:
                return TerminationResult(True, "exact", 1, k, tuple(entries))
            if cur.is_horizontal and cur.x.sign() < 0:
                return TerminationResult(True, "exact", 2 * n - 1, k, tuple(entries))
        cur, sector = farey_apply(cur, n)
        entries.append(sector)
    if not exact and len(entries) >= 10:
        # Constant final entries alone prove nothing: generic orbits routinely
        # ride a parabolic fixed point for dozens of steps before escaping.
        # A terminating direction is pinned by actually sitting on the fixed
        # point to machine precision, where the escape time is astronomical.
        window = entries[-10:]
        tail = window[0]
        if all(e == tail for e in window) and tail in (1, 2 * n - 1):
            target = math.pi / (2 * n) if tail == 1 else math.pi
            if abs(direction_theta(cur) - target) < 1e-12:
                return TerminationResult(True, "heuristic", tail, max_depth, tuple(entries))
    return TerminationResult(False, "bounded", None, max_depth, tuple(entries))


# -- the classical square map (demo) -------------------------------------------


def square_farey(t):
    """The classical map t/(1-t) on [0, 1/2] and (1-t)/t on [1/2, 1]."""
    if not 0 <= t <= 1:
        raise ValueError("argument must lie in [0, 1]")
    if t <= Fraction(1, 2) if isinstance(t, Fraction) else t <= 0.5:
        return t / (1 - t)
    return (1 - t) / t


def square_coordinate(theta: float) -> float:
    """Radial projection of a first-quadrant angle to the line x + y = 1."""
    return math.sin(theta) / (math.cos(theta) + math.sin(theta))
