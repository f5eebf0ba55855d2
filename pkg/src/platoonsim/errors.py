"""Exception taxonomy shared across the package.

The CLI maps these onto distinct exit codes, the service onto distinct
error payload codes, so the classes must stay distinguishable.
"""


class PlatoonsimError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(PlatoonsimError):
    """A physically or mathematically invalid request (e.g. chord longer
    than the circle diameter, nonpositive gain)."""


class DegenerateGeometryError(DomainError):
    """Coincident points where a direction or range is required."""


class ScenarioError(PlatoonsimError):
    """A scenario document failed validation. Carries the offending field."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class NumericBlowupError(PlatoonsimError):
    """A state or derivative became non-finite during integration."""

    def __init__(self, message: str, t: float | None = None,
                 vehicle: int | None = None):
        self.t = t
        self.vehicle = vehicle
        super().__init__(message)
