"""Trajectory-shaping platoon guidance: geometry, guidance laws, nonlinear
simulation, linear stability analysis, and a service/CLI front end."""

__version__ = "0.1.0"

from .errors import (DegenerateGeometryError, DomainError, NumericBlowupError,
                     PlatoonsimError, ScenarioError)
from .geometry import Circle, EngagementGeometry, Line, Path, Vec2, VehicleState
from .guidance import GuidanceLaw, GuidanceParams, WheelSpeeds
from .sim import Disturbance, PlatoonState, Scenario, TrajectoryLog

__all__ = [
    "__version__",
    "PlatoonsimError", "DomainError", "DegenerateGeometryError",
    "ScenarioError", "NumericBlowupError",
    "Vec2", "VehicleState", "Circle", "Line", "Path", "EngagementGeometry",
    "GuidanceLaw", "GuidanceParams", "WheelSpeeds",
    "Scenario", "Disturbance", "PlatoonState", "TrajectoryLog",
]
