"""HTTP service exposing the simulator and the stability analysis.

Run with: uvicorn platoonsim.service.app:app
"""
from __future__ import annotations

import dataclasses
import math
import time

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import DomainError, NumericBlowupError, ScenarioError
from ..geometry import Circle, Line
from ..guidance import GuidanceLaw, GuidanceParams
from ..sim import (PRESET_NAMES, Scenario, metrics, preset_scenario, run,
                   scenario_to_dict)
from ..stability import (ControlInput, equilibrium_state, linearize,
                         rhs_relative, steady_state_regular)
from .schemas import (EquilibriumRequest, EquilibriumResponse, HealthResponse,
                      LinearizeRequest, LinearizeResponse, PresetListResponse,
                      ScenarioSelector, SimulateRequest, SimulateResponse,
                      SummaryModel, SweepRequest, SweepResponse, SweepRow)

app = FastAPI(title="platoonsim", version=__version__)


def _error_response(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status,
                        content={"code": code, "message": message})


@app.exception_handler(ScenarioError)
async def _scenario_error(request: Request, exc: ScenarioError):
    return _error_response(422, "parse", str(exc))


@app.exception_handler(RequestValidationError)
async def _validation_error(request: Request, exc: RequestValidationError):
    first = exc.errors()[0]
    loc = ".".join(str(p) for p in first.get("loc", ()))
    return _error_response(422, "parse", f"{loc}: {first.get('msg', 'invalid')}")


@app.exception_handler(DomainError)
async def _domain_error(request: Request, exc: DomainError):
    return _error_response(400, "domain", str(exc))


@app.exception_handler(NumericBlowupError)
async def _numeric_error(request: Request, exc: NumericBlowupError):
    return _error_response(400, "numeric", str(exc))


@app.exception_handler(Exception)
async def _internal_error(request: Request, exc: Exception):
    return _error_response(500, "internal", f"{type(exc).__name__}: {exc}")


def resolve_scenario(sel: ScenarioSelector) -> Scenario:
    if sel.preset is not None:
        sc = preset_scenario(sel.preset)
    else:
        sc = sel.scenario.to_scenario()
    if sel.law is not None:
        sc = dataclasses.replace(sc, law=GuidanceLaw(sel.law))
    return sc


def _circle_radius(sc: Scenario, what: str) -> float:
    if not isinstance(sc.path, Circle):
        raise DomainError(f"{what} requires a circular path")
    return sc.path.radius


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.get("/presets", response_model=PresetListResponse)
def presets() -> PresetListResponse:
    return PresetListResponse()


@app.get("/presets/{name}")
def preset_doc(name: str):
    try:
        sc = preset_scenario(name)
    except DomainError as exc:
        return _error_response(404, "domain", str(exc))
    return scenario_to_dict(sc)


def build_summary(sc: Scenario, with_linearization: bool = False) -> tuple[SummaryModel, str]:
    """Run a scenario and assemble the summary plus trajectory CSV."""
    t0 = time.perf_counter()
    log = run(sc)
    m = metrics(log, sc)
    lin = None
    if with_linearization:
        R = _circle_radius(sc, "linearization")
        lin = linearize(sc.n, sc.params, R).to_dict()
    runtime = time.perf_counter() - t0
    summary = SummaryModel(
        version=__version__,
        runtime_s=runtime,
        n=sc.n,
        law=sc.law.value,
        thresholds={"path": m.thresholds[0], "gap": m.thresholds[1],
                    "speed": m.thresholds[2]},
        vehicles=[dataclasses.asdict(v) for v in m.vehicles],
        scenario=scenario_to_dict(sc),
        linearization=lin)
    return summary, log.to_csv()


@app.post("/simulate", response_model=SimulateResponse)
def simulate(req: SimulateRequest) -> SimulateResponse:
    sc = resolve_scenario(req)
    summary, csv = build_summary(sc, req.with_linearization)
    return SimulateResponse(summary=summary, csv=csv)


@app.post("/linearize", response_model=LinearizeResponse)
def linearize_endpoint(req: LinearizeRequest) -> LinearizeResponse:
    sc = resolve_scenario(req)
    R = _circle_radius(sc, "linearization")
    report = linearize(sc.n, sc.params, R)
    return LinearizeResponse(report=report.to_dict())


@app.post("/equilibrium", response_model=EquilibriumResponse)
def equilibrium_endpoint(req: EquilibriumRequest) -> EquilibriumResponse:
    sc = resolve_scenario(req)
    if isinstance(sc.path, Circle):
        R = sc.path.radius
        curvature = 1.0 / R
    else:
        R = math.inf
        curvature = 0.0
    x0 = equilibrium_state(sc.n, sc.params, R)
    u = ControlInput(curvature=curvature, V_c=sc.params.V_c)
    residuals = {}
    for law in (GuidanceLaw.REGULAR, GuidanceLaw.SINE):
        r = rhs_relative(x0, u, law, sc.params)
        residuals[law] = max(abs(float(v)) for v in r)
    offsets = None
    method = None
    if isinstance(sc.path, Circle):
        res = steady_state_regular(sc.n, sc.params, R)
        offsets = list(res.offsets)
        method = res.method
    return EquilibriumResponse(
        n=sc.n,
        R=None if isinstance(sc.path, Line) else R,
        residual_regular=residuals[GuidanceLaw.REGULAR],
        residual_sine=residuals[GuidanceLaw.SINE],
        offsets_regular=offsets,
        offsets_method=method)


def sweep_rows(sc: Scenario, ratio_min: float, ratio_max: float,
               steps: int) -> list[SweepRow]:
    """Offsets of both laws over a grid of d*/2R ratios at the base
    scenario's R, n, k_v, V_c. Rows ordered by ratio, regular before sine."""
    R = _circle_radius(sc, "sweep")
    if not (0.0 < ratio_min < ratio_max < 1.0):
        raise DomainError(
            f"sweep requires 0 < ratio_min < ratio_max < 1, "
            f"got [{ratio_min}, {ratio_max}]")
    if steps < 2:
        raise DomainError(f"sweep requires steps >= 2, got {steps}")
    rows = []
    for k in range(steps):
        ratio = ratio_min + (ratio_max - ratio_min) * k / (steps - 1)
        params = GuidanceParams(d_star=2.0 * R * ratio, k_v=sc.params.k_v,
                                V_c=sc.params.V_c)
        for law in (GuidanceLaw.REGULAR, GuidanceLaw.SINE):
            res = steady_state_regular(sc.n, params, R, law=law)
            rows.append(SweepRow(ratio=ratio, law=law.value,
                                 offsets=list(res.offsets)))
    return rows


def sweep_csv(rows: list[SweepRow], n: int) -> str:
    header = "ratio,law," + ",".join(f"offset_{i}" for i in range(1, n + 1))
    out = [header]
    for row in rows:
        cells = [f"{row.ratio:.9g}", row.law]
        cells += [f"{o:.9g}" for o in row.offsets]
        out.append(",".join(cells))
    return "\n".join(out) + "\n"


@app.post("/sweep", response_model=SweepResponse)
def sweep_endpoint(req: SweepRequest) -> SweepResponse:
    sc = resolve_scenario(req)
    rows = sweep_rows(sc, req.ratio_min, req.ratio_max, req.steps)
    return SweepResponse(rows=rows, csv=sweep_csv(rows, sc.n))
