"""Wire models for the HTTP service.

Pydantic validates shapes and types on the wire; semantic validation
(ranges, cross-field constraints, preset resolution) is delegated to the
core scenario parser so the service and the file format cannot drift.
"""
from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..sim import PRESET_NAMES, Scenario, scenario_from_dict


class PathModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    type: Literal["circle", "line"]
    center: Optional[list[float]] = None
    origin: Optional[list[float]] = None
    radius: Optional[float] = None
    direction: Optional[Literal["ccw", "cw"]] = None
    angle: Optional[float] = None


class InitialModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    preset: Optional[Literal["equilibrium", "offset"]] = None
    dr: Optional[float] = None
    dgamma: Optional[float] = None
    states: Optional[list[dict]] = None


class DisturbanceModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    vehicle: int
    kind: Literal["lateral", "velocity"]
    magnitude: float
    t_start: float
    duration: float


class ScenarioModel(BaseModel):
    """Mirror of the on-disk scenario document."""

    model_config = ConfigDict(extra="forbid")

    path: PathModel
    n: int
    law: Literal["regular", "sine"]
    d_star: float
    k_v: float
    V_c: float
    dt: Optional[float] = None
    t_final: Optional[float] = None
    initial: Optional[InitialModel | list[dict]] = None
    disturbances: Optional[list[DisturbanceModel]] = None
    track_width: Optional[float] = None
    log_decimation: Optional[int] = None

    def to_scenario(self) -> Scenario:
        doc = self.model_dump(exclude_none=True)
        return scenario_from_dict(doc)


class ScenarioSelector(BaseModel):
    """Either an inline scenario document or a preset name, not both.
    ``law`` overrides the scenario's law when given."""

    model_config = ConfigDict(extra="forbid")

    scenario: Optional[ScenarioModel] = None
    preset: Optional[str] = None
    law: Optional[Literal["regular", "sine"]] = None

    @model_validator(mode="after")
    def _exactly_one_source(self):
        if (self.scenario is None) == (self.preset is None):
            raise ValueError("provide exactly one of 'scenario' or 'preset'")
        return self


class SimulateRequest(ScenarioSelector):
    with_linearization: bool = False


class VehicleMetricsModel(BaseModel):
    vehicle: int
    max_abs_path_error: float
    terminal_mean_path_error: float
    max_abs_gap_error: float
    max_abs_speed_error: float
    settling_time: float


class SummaryModel(BaseModel):
    """Run summary. ``scenario`` is the full document echo; re-parsing it
    reproduces the identical trajectory CSV."""

    version: str
    runtime_s: float
    n: int
    law: str
    thresholds: dict[str, float]
    vehicles: list[VehicleMetricsModel]
    scenario: dict
    linearization: Optional[dict] = None


class SimulateResponse(BaseModel):
    summary: SummaryModel
    csv: str


class LinearizeRequest(ScenarioSelector):
    pass


class LinearizeResponse(BaseModel):
    report: dict


class EquilibriumRequest(ScenarioSelector):
    pass


class EquilibriumResponse(BaseModel):
    n: int
    R: Optional[float] = None  # None for a straight-line path
    residual_regular: float
    residual_sine: float
    offsets_regular: Optional[list[float]] = None
    offsets_method: Optional[str] = None


class SweepRequest(ScenarioSelector):
    # bounds checked in one place server-side so violations map to a
    # single error class
    ratio_min: float
    ratio_max: float
    steps: int


class SweepRow(BaseModel):
    ratio: float
    law: str
    offsets: list[float]


class SweepResponse(BaseModel):
    rows: list[SweepRow]
    csv: str


class PresetListResponse(BaseModel):
    presets: list[str] = Field(default_factory=lambda: list(PRESET_NAMES))


class HealthResponse(BaseModel):
    status: str
    version: str


class ErrorBody(BaseModel):
    code: Literal["parse", "domain", "numeric", "internal"]
    message: str
