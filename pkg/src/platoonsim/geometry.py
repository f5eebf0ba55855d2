"""Planar geometry primitives: angle arithmetic, line-of-sight, path
parameterization, and signed path error.

Conventions used throughout the package:

* headings are measured CCW from the +x axis, in radians, wrapped to (-pi, pi]
* the relative angles are alpha = wrap(gamma - lambda), i.e. a heading
  measured against the line of sight, for both the vehicle and its target
* positive lateral acceleration turns the heading CCW (gamma_dot = a / V)
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Union

from .errors import DegenerateGeometryError, DomainError

TWO_PI = 2.0 * math.pi


def wrap_angle(theta: float) -> float:
    """Wrap an angle to (-pi, pi].

    Uses IEEE remainder, which is exact, so wrapping is deterministic and
    odd-symmetric away from the seam at pi.
    """
    if not math.isfinite(theta):
        raise DomainError(f"cannot wrap non-finite angle {theta!r}")
    r = math.remainder(theta, TWO_PI)
    # remainder ties land on -pi for inputs congruent to pi; the contract
    # includes +pi and excludes -pi.
    if r <= -math.pi:
        r += TWO_PI
    return r


@dataclass(frozen=True)
class Vec2:
    """Cartesian point or displacement in meters."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DomainError(f"non-finite Vec2 components ({self.x}, {self.y})")

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)


@dataclass(frozen=True)
class VehicleState:
    """Planar pose plus forward speed of one vehicle.

    The heading is stored wrapped; speed must be nonnegative.
    """

    position: Vec2
    heading: float
    speed: float

    def __post_init__(self):
        object.__setattr__(self, "heading", wrap_angle(self.heading))
        if not math.isfinite(self.speed) or self.speed < 0.0:
            raise DomainError(f"vehicle speed must be >= 0, got {self.speed}")


@dataclass(frozen=True)
class Circle:
    """Circular path. ``ref_angle`` fixes the arc-length origin (the angle
    from the center at s=0); the default puts s=0 at the bottom of the
    circle so a CCW target initially heads along +x."""

    center: Vec2
    radius: float
    direction: Literal["ccw", "cw"] = "ccw"
    ref_angle: float = -math.pi / 2.0

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0.0):
            raise DomainError(f"circle radius must be > 0, got {self.radius}")
        if self.direction not in ("ccw", "cw"):
            raise DomainError(f"circle direction must be 'ccw' or 'cw', got {self.direction!r}")


@dataclass(frozen=True)
class Line:
    """Straight path through ``origin`` at a fixed direction angle."""

    origin: Vec2
    angle: float


Path = Union[Circle, Line]


@dataclass(frozen=True)
class EngagementGeometry:
    """Relative coordinates between a follower and its target.

    d       range, meters (> 0)
    lam     line-of-sight angle from follower to target
    alpha_t target heading relative to the LOS, wrap(gamma_t - lam)
    alpha_v follower heading relative to the LOS, wrap(gamma_v - lam)
    """

    d: float
    lam: float
    alpha_t: float
    alpha_v: float

    def __post_init__(self):
        if not (self.d > 0.0):
            raise DegenerateGeometryError(f"engagement range must be > 0, got {self.d}")


def los_angle(frm: Vec2, to: Vec2) -> float:
    """Angle of the vector (to - frm), CCW from +x, wrapped."""
    dx, dy = to.x - frm.x, to.y - frm.y
    if dx == 0.0 and dy == 0.0:
        raise DegenerateGeometryError("line of sight undefined for coincident points")
    return wrap_angle(math.atan2(dy, dx))


def engagement(follower: VehicleState, target: VehicleState) -> EngagementGeometry:
    """Relative coordinates of a follower/target pair."""
    d = (target.position - follower.position).norm()
    lam = los_angle(follower.position, target.position)
    return EngagementGeometry(
        d=d,
        lam=lam,
        alpha_t=wrap_angle(target.heading - lam),
        alpha_v=wrap_angle(follower.heading - lam),
    )


def curvature(path: Path) -> float:
    """Signed curvature: +1/R for a CCW circle, -1/R for CW, 0 for a line."""
    if isinstance(path, Circle):
        k = 1.0 / path.radius
        return k if path.direction == "ccw" else -k
    return 0.0


def path_point(path: Path, s: float) -> tuple[Vec2, float]:
    """Point and tangent heading at arc length ``s`` along the path."""
    if isinstance(path, Circle):
        if path.direction == "ccw":
            theta = path.ref_angle + s / path.radius
            heading = wrap_angle(theta + math.pi / 2.0)
        else:
            theta = path.ref_angle - s / path.radius
            heading = wrap_angle(theta - math.pi / 2.0)
        p = Vec2(path.center.x + path.radius * math.cos(theta),
                 path.center.y + path.radius * math.sin(theta))
        return p, heading
    p = Vec2(path.origin.x + s * math.cos(path.angle),
             path.origin.y + s * math.sin(path.angle))
    return p, wrap_angle(path.angle)


def path_error(path: Path, p: Vec2) -> float:
    """Signed distance from the path: positive outside a circle, positive
    left of travel for a line."""
    if isinstance(path, Circle):
        return (p - path.center).norm() - path.radius
    # left normal of the travel direction
    nx, ny = -math.sin(path.angle), math.cos(path.angle)
    return (p.x - path.origin.x) * nx + (p.y - path.origin.y) * ny
