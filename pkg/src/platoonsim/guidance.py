"""Guidance laws and the platoon command structure.

Two trajectory-shaping laws steer each vehicle toward the point ahead of it
(its predecessor, or a virtual target constrained to the path):

* regular:  a = (V^2/d) * (-4*alpha_v - 2*alpha_t)
* sine:     a = (V^2/d) * (-4*sin(alpha_v) - 2*sin(alpha_t))

Longitudinal control is a speed-command chain: the last vehicle tracks the
commanded platoon speed, and each vehicle ahead of it is commanded to the
speed that closes its follower's gap toward d_star. The same scaling gives
the virtual target its speed from the lead vehicle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .errors import DomainError
from .geometry import Circle, EngagementGeometry, Path, VehicleState, curvature, wrap_angle

# Range floor: both the lateral law and the speed scaling divide by d.
D_MIN = 1e-3
# Speed commands are clamped to [0, V_CAP_FACTOR * V_c]; the scaling law is
# unbounded as d -> 0 and the clamp bounds actuator demand without moving
# the equilibrium.
V_CAP_FACTOR = 3.0
# gamma_dot = a/V needs a nonzero divisor; simulation floors speeds here.
V_FLOOR_FACTOR = 0.01


class GuidanceLaw(str, Enum):
    REGULAR = "regular"
    SINE = "sine"


@dataclass(frozen=True)
class GuidanceParams:
    """Physical guidance parameters.

    d_star  desired separation / look-ahead distance, meters
    k_v     first-order velocity controller gain, 1/s
    V_c     commanded platoon speed, m/s
    """

    d_star: float
    k_v: float
    V_c: float

    def __post_init__(self):
        if not (self.d_star > 0.0):
            raise DomainError(f"d_star must be > 0, got {self.d_star}")
        if not (self.k_v > 0.0):
            raise DomainError(f"k_v must be > 0, got {self.k_v}")
        if not (self.V_c > 0.0):
            raise DomainError(f"V_c must be > 0, got {self.V_c}")

    def check_path(self, path: Path) -> None:
        """A circular path requires the chord d_star to exist: d_star < 2R."""
        if isinstance(path, Circle) and not (self.d_star < 2.0 * path.radius):
            raise DomainError(
                f"d_star must satisfy d_star < 2R (chord must exist): "
                f"d_star={self.d_star}, R={path.radius}")

    @property
    def v_cap(self) -> float:
        return V_CAP_FACTOR * self.V_c

    @property
    def v_floor(self) -> float:
        return V_FLOOR_FACTOR * self.V_c


@dataclass(frozen=True)
class WheelSpeeds:
    """Differential-drive wheel speeds realizing a commanded turn."""

    v_right: float
    v_left: float


def lateral_accel_scalar(law: GuidanceLaw, d: float, alpha_t: float,
                         alpha_v: float, V: float) -> float:
    """Lateral acceleration from bare relative coordinates. Single source of
    the law formula; the simulation hot loop calls this directly."""
    d = max(d, D_MIN)
    av = wrap_angle(alpha_v)
    at = wrap_angle(alpha_t)
    if law == GuidanceLaw.SINE:
        return (V * V / d) * (-4.0 * math.sin(av) - 2.0 * math.sin(at))
    return (V * V / d) * (-4.0 * av - 2.0 * at)


def lateral_accel(law: GuidanceLaw, geom: EngagementGeometry, V: float) -> float:
    """Lateral acceleration command for a follower at speed V."""
    return lateral_accel_scalar(law, geom.d, geom.alpha_t, geom.alpha_v, V)


def virtual_target_speed(V_follower: float, d: float, d_star: float,
                         v_cap: float) -> float:
    """Speed of the path-constrained virtual target.

    V_t = V_follower * d_star / d: the target slows when the follower falls
    behind and speeds up as it closes, with equality at d = d_star.
    """
    d = max(d, D_MIN)
    v = V_follower * d_star / d
    return min(max(v, 0.0), v_cap)


def _speed_of(entry) -> float:
    # chain_speed_commands accepts VehicleState entries or bare speeds so the
    # relative-coordinate model can reuse the same command structure.
    if isinstance(entry, VehicleState):
        return entry.speed
    return float(entry)


def chain_speed_commands(platoon: Sequence, gaps: Sequence[float],
                         params: GuidanceParams) -> list[float]:
    """Speed commands for every vehicle in the platoon.

    ``gaps[i]`` is the range from vehicle i to its predecessor (``gaps[0]``
    is lead-to-virtual-target). The last vehicle is commanded the platoon
    speed; each other vehicle i is commanded V[i+1] * d_star / gaps[i+1],
    the speed that closes its follower's gap. Entry i therefore depends on
    vehicle i+1 only, which is what makes longitudinal information flow
    strictly forward.
    """
    n = len(platoon)
    if n == 0:
        raise DomainError("platoon must contain at least one vehicle")
    if len(gaps) != n:
        raise DomainError(f"expected {n} gaps, got {len(gaps)}")
    cmds = [0.0] * n
    cmds[n - 1] = params.V_c
    for i in range(n - 1):
        d = max(gaps[i + 1], D_MIN)
        v = _speed_of(platoon[i + 1]) * params.d_star / d
        cmds[i] = min(max(v, 0.0), params.v_cap)
    return cmds


def lead_target_accel(V_t: float, path: Path) -> float:
    """Lateral acceleration of the virtual target: centripetal on a circle
    (signed by direction), zero on a line."""
    if V_t < 0.0:
        raise DomainError(f"target speed must be >= 0, got {V_t}")
    return V_t * V_t * curvature(path)


def wheel_speeds(V_c: float, a: float, track_width: float) -> WheelSpeeds:
    """Map a forward speed and lateral acceleration to differential-drive
    wheel speeds via the implied turn radius R_t = V_c^2 / a."""
    if not (V_c > 0.0):
        raise DomainError(f"forward speed must be > 0, got {V_c}")
    if not (track_width > 0.0):
        raise DomainError(f"track width must be > 0, got {track_width}")
    if a == 0.0:
        return WheelSpeeds(V_c, V_c)
    r_t = V_c * V_c / a
    half = track_width / (2.0 * r_t)
    return WheelSpeeds(V_c * (1.0 + half), V_c * (1.0 - half))
