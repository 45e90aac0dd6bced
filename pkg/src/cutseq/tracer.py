"""Trace linear trajectories on the identified polygon; periodicity; SVG plots.

A trajectory travels in a fixed direction, and on hitting a side re-enters at
the corresponding point of the opposite side (translation by twice the side
midpoint, toward the center).  The floating engine renormalizes each crossing
onto its side segment, so the translation invariance is exact by construction
and no drift accumulates.  The exact engine (n in {2, 4}, Q(sqrt 2) data)
parametrizes the trajectory by crossing time and carries the accumulated
side-pairing translation, which keeps denominators bounded; recurrence of the
exact boundary state certifies periodicity.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .exact_arith import Direction, ExactDirection, Q2Scalar, direction_theta
from .polygon import LabeledPolygon

_TWO = Q2Scalar(Fraction(2))


class VertexHit(RuntimeError):
    """The trajectory meets a vertex (within epsilon, or exactly in exact mode)."""

    def __init__(self, crossing: int, side: int):
        super().__init__(f"vertex hit at crossing {crossing} on side {side}")
        self.crossing = crossing
        self.side = side


@dataclass(frozen=True)
class TraceConfig:
    epsilon: float = 1e-9
    max_crossings: int = 1000
    mode: str = "approx"  # "approx" | "exact"

    def __post_init__(self) -> None:
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.max_crossings < 1:
            raise ValueError("max_crossings must be >= 1")
        if self.mode not in ("approx", "exact"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class Crossing:
    letter: str
    point: tuple[float, float]
    side: int


@dataclass
class TraceLog:
    direction: Direction
    start: tuple
    crossings: list[Crossing] = field(default_factory=list)

    @property
    def word(self) -> str:
        return "".join(c.letter for c in self.crossings)


def _direction_vector(d: Direction) -> tuple[float, float]:
    t = direction_theta(d)
    return math.cos(t), math.sin(t)


def _float_sides(poly: LabeledPolygon, vx: float, vy: float):
    """Per-side data for sides the direction can exit through (outward normal . v > 0)."""
    out = []
    for k in range(2 * poly.n):
        (ax, ay), (bx, by) = poly.side_endpoints(k)
        ex, ey = bx - ax, by - ay
        if -ey * vx + ex * vy <= 0:  # outward normal of a clockwise polygon is (-ey, ex)
            continue
        denom = ex * vy - ey * vx
        if denom == 0:
            continue
        mx, my = (ax + bx) / 2.0, (ay + by) / 2.0
        out.append((ax, ay, ex, ey, 1.0 / denom, -2.0 * mx, -2.0 * my, poly.letter(k), k))
    return out


def _run_float(poly, start, d, cfg, want_log=False, want_states=False):
    vx, vy = _direction_vector(d)
    sides = _float_sides(poly, vx, vy)
    eps = cfg.epsilon
    hi = 1.0 - eps
    px, py = float(start[0]), float(start[1])
    letters: list[str] = []
    crossings: list[Crossing] = []
    states: list[tuple[int, float]] = []
    add_letter = letters.append
    for step in range(cfg.max_crossings):
        for ax, ay, ex, ey, inv, tx, ty, letter, k in sides:
            u = ((px - ax) * vy - (py - ay) * vx) * inv
            if 0.0 <= u <= 1.0:
                if u < eps or u > hi:
                    raise VertexHit(step, k)
                qx, qy = ax + u * ex, ay + u * ey
                add_letter(letter)
                if want_log:
                    crossings.append(Crossing(letter, (qx, qy), k))
                if want_states:
                    states.append((k, u))
                px, py = qx + tx, qy + ty
                break
        else:
            raise AssertionError("ray found no exit side")
    return letters, crossings, states


def _exact_sides(poly: LabeledPolygon, d: ExactDirection):
    vx, vy = d.x, d.y
    out = []
    for k in range(2 * poly.n):
        (ax, ay), (bx, by) = poly.exact_side_endpoints(k)
        ex, ey = bx - ax, by - ay
        if (-ey * vx + ex * vy).sign() <= 0:
            continue
        denom = vx * ey - vy * ex
        if denom.sign() == 0:
            continue
        mx, my = (ax + bx) / _TWO, (ay + by) / _TWO
        out.append((ax, ay, ex, ey, denom.inverse(), -(_TWO * mx), -(_TWO * my), poly.letter(k), k))
    return out


def _run_exact(poly, start, d, cfg, want_log=False, want_states=False):
    if poly.exact_vertices is None:
        raise ValueError("exact tracing needs a polygon with exact coordinates (n in {2, 4})")
    if not isinstance(d, ExactDirection):
        raise TypeError("exact tracing needs an exact direction")
    p0x = start[0] if isinstance(start[0], Q2Scalar) else Q2Scalar(Fraction(start[0]))
    p0y = start[1] if isinstance(start[1], Q2Scalar) else Q2Scalar(Fraction(start[1]))
    vx, vy = d.x, d.y
    sides = _exact_sides(poly, d)
    # The physical point after m crossings is p0 + t v - D with D the summed
    # side-pairing translations; solving against the fixed p0 keeps all
    # denominators bounded by the heights of the side data.
    dx = dy = Q2Scalar()
    t_prev = None
    letters: list[str] = []
    crossings: list[Crossing] = []
    states: list[tuple[int, Q2Scalar]] = []
    for step in range(cfg.max_crossings):
        best = None
        for ax, ay, ex, ey, inv, tx, ty, letter, k in sides:
            rx, ry = ax + dx - p0x, ay + dy - p0y
            u = (rx * vy - ry * vx) * inv
            if u.sign() < 0 or (u - 1).sign() > 0:
                continue
            t = (rx * ey - ry * ex) * inv
            if t_prev is not None and (t - t_prev).sign() <= 0:
                continue
            if best is None or (t - best[0]).sign() < 0:
                best = (t, u, ax, ay, ex, ey, tx, ty, letter, k)
        if best is None:
            raise AssertionError("ray found no exit side")
        t, u, ax, ay, ex, ey, tx, ty, letter, k = best
        if u.sign() == 0 or (u - 1).sign() == 0:
            raise VertexHit(step, k)
        letters.append(letter)
        if want_log:
            qx, qy = ax + u * ex, ay + u * ey
            crossings.append(Crossing(letter, (float(qx), float(qy)), k))
        if want_states:
            states.append((k, u))
        dx, dy = dx - tx, dy - ty  # D grows by +2 mid = -(tx, ty)
        t_prev = t
    return letters, crossings, states


def _runner(cfg: TraceConfig):
    return _run_exact if cfg.mode == "exact" else _run_float


def trace(poly: LabeledPolygon, start, d: Direction, cfg: TraceConfig) -> tuple[str, TraceLog]:
    """Cutting sequence of max_crossings crossings, with the full crossing log."""
    letters, crossings, _ = _runner(cfg)(poly, start, d, cfg, want_log=True)
    log = TraceLog(d, tuple(start), crossings)
    return "".join(letters), log


def trace_word(poly: LabeledPolygon, start, d: Direction, cfg: TraceConfig) -> str:
    """Cutting sequence only; the lean path for long traces."""
    letters, _, _ = _runner(cfg)(poly, start, d, cfg)
    return "".join(letters)


def detect_period(poly: LabeledPolygon, start, d: Direction, cfg: TraceConfig) -> int | None:
    """Smallest crossing count after which the boundary state recurs, else None.

    The boundary map is invertible, so a periodic orbit returns exactly to its
    first boundary state; floating states recur within epsilon, exact states
    exactly.
    """
    _, _, states = _runner(cfg)(poly, start, d, cfg, want_states=True)
    if not states:
        return None
    side0, u0 = states[0]
    for m in range(1, len(states)):
        side, u = states[m]
        if side != side0:
            continue
        if cfg.mode == "exact":
            if (u - u0).is_zero():
                return m
        elif abs(u - u0) < cfg.epsilon:
            return m
    return None


def random_interior_point(
    poly: LabeledPolygon, rng: random.Random, margin: float = 1e-3
) -> tuple[float, float]:
    bound = max(max(abs(x), abs(y)) for x, y in poly.vertices)
    while True:
        x = rng.uniform(-bound, bound)
        y = rng.uniform(-bound, bound)
        if poly.contains(x, y, margin=margin):
            return (x, y)


def random_exact_interior_point(
    poly: LabeledPolygon, rng: random.Random
) -> tuple[Q2Scalar, Q2Scalar]:
    while True:
        x = Q2Scalar(Fraction(rng.randint(-6, 6), 13))
        y = Q2Scalar(Fraction(rng.randint(-6, 6), 17))
        if poly.contains_exact(x, y):
            return (x, y)


# -- plotting ------------------------------------------------------------------


def plot_svg(log: TraceLog, poly: LabeledPolygon, size: int = 480) -> str:
    """SVG 1.1 picture of the polygon, its side labels and the logged segments."""
    if not log.crossings:
        raise ValueError("empty trace log")
    bound = max(max(abs(x), abs(y)) for x, y in poly.vertices) * 1.15
    scale = size / (2 * bound)

    def sx(x: float) -> float:
        return round((x + bound) * scale, 3)

    def sy(y: float) -> float:
        return round((bound - y) * scale, 3)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size}" height="{size}" viewBox="0 0 {size} {size}">'
    ]
    pts = " ".join(f"{sx(x)},{sy(y)}" for x, y in poly.vertices)
    out.append(f'<polygon points="{pts}" fill="none" stroke="black" stroke-width="1.5"/>')
    for k in range(2 * poly.n):
        mx, my = poly.side_midpoint(k)
        out.append(
            f'<text x="{sx(mx * 1.08)}" y="{sy(my * 1.08)}" font-size="{size // 30}" '
            f'text-anchor="middle">{poly.letter(k)}</text>'
        )
    px, py = float(log.start[0]), float(log.start[1])
    for c in log.crossings:
        qx, qy = c.point
        out.append(
            f'<line x1="{sx(px)}" y1="{sy(py)}" x2="{sx(qx)}" y2="{sy(qy)}" '
            f'stroke="crimson" stroke-width="0.8"/>'
        )
        mx, my = poly.side_midpoint(c.side)
        px, py = qx - 2 * mx, qy - 2 * my
    out.append("</svg>")
    return "\n".join(out)
