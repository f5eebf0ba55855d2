"""Fixed-step deterministic platoon simulation in Cartesian coordinates.

A virtual target moves along the desired path; vehicle 1 follows it and each
further vehicle follows its predecessor, all under the selected guidance law.
Integration is classical fixed-step RK4 over the joint state
[target arc length, (x, y, heading, speed) per vehicle], so identical
scenarios produce bit-identical trajectories.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import DegenerateGeometryError, DomainError, NumericBlowupError, ScenarioError
from .geometry import (Circle, Line, Path, Vec2, VehicleState,
                       path_error, path_point, wrap_angle)
from .guidance import (GuidanceLaw, GuidanceParams, chain_speed_commands,
                       lateral_accel_scalar, lead_target_accel,
                       virtual_target_speed)

CSV_HEADER = "t,vehicle,x,y,gamma,V,d,alpha_t,alpha_v,a_cmd,V_cmd,path_err,gap_err,vel_err"


@dataclass(frozen=True)
class Disturbance:
    """A rectangular-window disturbance applied to one vehicle.

    kind "lateral": magnitude (m/s^2) is added to the vehicle's commanded
    lateral acceleration. kind "velocity": magnitude (m/s) is added to the
    vehicle's effective forward speed in its own kinematics only; the speed
    state, the controller, and the values other vehicles see are untouched,
    so the offset vanishes cleanly when the window closes.
    """

    vehicle: int
    kind: str
    magnitude: float
    t_start: float
    duration: float

    def __post_init__(self):
        if self.vehicle < 1:
            raise DomainError(f"disturbance vehicle index must be >= 1, got {self.vehicle}")
        if self.kind not in ("lateral", "velocity"):
            raise DomainError(
                f"disturbance kind must be 'lateral' or 'velocity', got {self.kind!r}")
        if not (self.duration > 0.0):
            raise DomainError(f"disturbance duration must be > 0, got {self.duration}")
        if not (math.isfinite(self.magnitude) and math.isfinite(self.t_start)):
            raise DomainError("disturbance magnitude and t_start must be finite")

    def active(self, t: float) -> bool:
        return self.t_start <= t < self.t_start + self.duration


@dataclass(frozen=True)
class InitialConditions:
    """Initial platoon placement.

    preset "equilibrium": vehicles on the path at chord spacing d_star
    behind the virtual target, tangent headings, speed V_c.
    preset "offset": equilibrium plus a radial displacement dr (outward /
    left of travel) and heading offset dgamma on every vehicle.
    preset "explicit": states given per vehicle.
    """

    preset: str = "equilibrium"
    dr: float = 0.0
    dgamma: float = 0.0
    states: Optional[tuple[VehicleState, ...]] = None


@dataclass(frozen=True)
class Scenario:
    path: Path
    n: int
    law: GuidanceLaw
    params: GuidanceParams
    initial: InitialConditions = InitialConditions()
    disturbances: tuple[Disturbance, ...] = ()
    dt: float = 0.01
    t_final: float = 200.0
    track_width: Optional[float] = None
    log_decimation: int = 10

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.n < 1:
            raise DomainError(f"platoon size must be >= 1, got {self.n}")
        if not (self.dt > 0.0):
            raise DomainError(f"dt must be > 0, got {self.dt}")
        if not (self.t_final > self.dt):
            raise DomainError(f"t_final must exceed dt, got {self.t_final}")
        if self.log_decimation < 1:
            raise DomainError(f"log_decimation must be >= 1, got {self.log_decimation}")
        self.params.check_path(self.path)
        for k, dist in enumerate(self.disturbances):
            if not (1 <= dist.vehicle <= self.n):
                raise DomainError(
                    f"disturbance {k}: vehicle index {dist.vehicle} outside 1..{self.n}")
        if self.initial.preset == "explicit":
            if self.initial.states is None or len(self.initial.states) != self.n:
                got = 0 if self.initial.states is None else len(self.initial.states)
                raise DomainError(f"explicit initial conditions require {self.n} states, got {got}")
        elif self.initial.preset not in ("equilibrium", "offset"):
            raise DomainError(f"unknown initial preset {self.initial.preset!r}")
        if self.track_width is not None and not (self.track_width > 0.0):
            raise DomainError(f"track_width must be > 0, got {self.track_width}")


@dataclass(frozen=True)
class PlatoonState:
    """Full platoon state at one instant: virtual target arc length and
    speed, plus every vehicle's pose and speed (index 0 = lead)."""

    t: float
    s: float
    v_t: float
    vehicles: tuple[VehicleState, ...]


@dataclass(frozen=True)
class VehicleRates:
    dx: float
    dy: float
    dheading: float
    dspeed: float


@dataclass(frozen=True)
class PlatoonRates:
    ds: float
    vehicles: tuple[VehicleRates, ...]


@dataclass
class TrajectoryLog:
    """Per-vehicle records at each logged step.

    Each row is (t, vehicle, x, y, gamma, V, d, alpha_t, alpha_v, a_cmd,
    V_cmd, path_err, gap_err, vel_err), vehicle ids 1-based.
    """

    n: int
    rows: list[tuple] = field(default_factory=list)

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        for r in self.rows:
            parts = [f"{r[0]:.9g}", str(r[1])]
            parts.extend(f"{v:.9g}" for v in r[2:])
            lines.append(",".join(parts))
        return "\n".join(lines) + "\n"

    def vehicle_rows(self, vehicle: int) -> list[tuple]:
        return [r for r in self.rows if r[1] == vehicle]


# ---------------------------------------------------------------------------
# initial conditions

def initial_state(scenario: Scenario) -> PlatoonState:
    scenario.validate()
    p = scenario.params
    path = scenario.path
    if scenario.initial.preset == "explicit":
        vehicles = tuple(scenario.initial.states)
        return PlatoonState(t=0.0, s=0.0, v_t=p.V_c, vehicles=vehicles)

    vehicles = []
    if isinstance(path, Circle):
        psi = 2.0 * math.asin(p.d_star / (2.0 * path.radius))
        sign = 1.0 if path.direction == "ccw" else -1.0
        for i in range(1, scenario.n + 1):
            theta = path.ref_angle - sign * i * psi
            pos = Vec2(path.center.x + path.radius * math.cos(theta),
                       path.center.y + path.radius * math.sin(theta))
            heading = wrap_angle(theta + sign * math.pi / 2.0)
            vehicles.append(VehicleState(pos, heading, p.V_c))
    else:
        for i in range(1, scenario.n + 1):
            pos = Vec2(path.origin.x - i * p.d_star * math.cos(path.angle),
                       path.origin.y - i * p.d_star * math.sin(path.angle))
            vehicles.append(VehicleState(pos, path.angle, p.V_c))

    if scenario.initial.preset == "offset":
        dr, dg = scenario.initial.dr, scenario.initial.dgamma
        shifted = []
        for v in vehicles:
            if isinstance(path, Circle):
                rad = (v.position - path.center).norm()
                ux = (v.position.x - path.center.x) / rad
                uy = (v.position.y - path.center.y) / rad
            else:
                ux, uy = -math.sin(path.angle), math.cos(path.angle)
            pos = Vec2(v.position.x + dr * ux, v.position.y + dr * uy)
            shifted.append(VehicleState(pos, wrap_angle(v.heading + dg), v.speed))
        vehicles = shifted

    return PlatoonState(t=0.0, s=0.0, v_t=p.V_c, vehicles=tuple(vehicles))


# ---------------------------------------------------------------------------
# dynamics

class _Signals:
    """Everything derived from one platoon state: pairwise geometry, lateral
    commands, speed commands, and the virtual target's motion."""

    __slots__ = ("tgt_x", "tgt_y", "tgt_heading", "v_t", "a0",
                 "gaps", "lams", "alpha_t", "alpha_v", "accels", "v_cmds", "v_effs")


def _signals(y: Sequence[float], t: float, sc: Scenario) -> _Signals:
    n = sc.n
    p = sc.params
    sig = _Signals()
    tgt_pos, tgt_heading = path_point(sc.path, y[0])
    sig.tgt_x, sig.tgt_y, sig.tgt_heading = tgt_pos.x, tgt_pos.y, tgt_heading

    # velocity disturbances modify only the disturbed vehicle's own kinematics
    v_effs = [y[4 * i + 4] for i in range(n)]
    for dist in sc.disturbances:
        if dist.kind == "velocity" and dist.active(t):
            v_effs[dist.vehicle - 1] += dist.magnitude
    sig.v_effs = v_effs

    gaps, lams, a_ts, a_vs = [], [], [], []
    px, py, pheading = sig.tgt_x, sig.tgt_y, tgt_heading
    for i in range(n):
        x, yy, g = y[4 * i + 1], y[4 * i + 2], y[4 * i + 3]
        dx, dy = px - x, py - yy
        d = math.hypot(dx, dy)
        if d == 0.0:
            pair = "virtual target" if i == 0 else f"vehicle {i}"
            raise DegenerateGeometryError(
                f"vehicle {i + 1} coincides with {pair} at t={t:.6g}")
        lam = math.atan2(dy, dx)
        gaps.append(d)
        lams.append(lam)
        a_ts.append(wrap_angle(pheading - lam))
        a_vs.append(wrap_angle(g - lam))
        px, py, pheading = x, yy, g
    sig.gaps, sig.lams, sig.alpha_t, sig.alpha_v = gaps, lams, a_ts, a_vs

    sig.v_t = virtual_target_speed(y[4], gaps[0], p.d_star, p.v_cap)
    sig.a0 = lead_target_accel(sig.v_t, sc.path)

    accels = []
    for i in range(n):
        a = lateral_accel_scalar(sc.law, gaps[i], a_ts[i], a_vs[i], v_effs[i])
        accels.append(a)
    for dist in sc.disturbances:
        if dist.kind == "lateral" and dist.active(t):
            accels[dist.vehicle - 1] += dist.magnitude
    sig.accels = accels

    speeds = [y[4 * i + 4] for i in range(n)]
    sig.v_cmds = chain_speed_commands(speeds, gaps, p)
    return sig


def _deriv(y: Sequence[float], t: float, sc: Scenario) -> list[float]:
    n = sc.n
    p = sc.params
    sig = _signals(y, t, sc)
    out = [sig.v_t]
    for i in range(n):
        g = y[4 * i + 3]
        v_eff = max(sig.v_effs[i], p.v_floor)
        out.append(v_eff * math.cos(g))
        out.append(v_eff * math.sin(g))
        out.append(sig.accels[i] / v_eff)
        out.append(p.k_v * (sig.v_cmds[i] - y[4 * i + 4]))
    return out


def _to_vector(state: PlatoonState) -> list[float]:
    y = [state.s]
    for v in state.vehicles:
        y.extend((v.position.x, v.position.y, v.heading, v.speed))
    return y


def _from_vector(y: Sequence[float], t: float, v_t: float) -> PlatoonState:
    vehicles = []
    for i in range(len(y) // 4):
        vehicles.append(VehicleState(Vec2(y[4 * i + 1], y[4 * i + 2]),
                                     y[4 * i + 3], y[4 * i + 4]))
    return PlatoonState(t=t, s=y[0], v_t=v_t, vehicles=tuple(vehicles))


def derivatives(state: PlatoonState, scenario: Scenario) -> PlatoonRates:
    """Time derivative of the platoon state under the scenario's law."""
    y = _to_vector(state)
    d = _deriv(y, state.t, scenario)
    rates = tuple(VehicleRates(d[4 * i + 1], d[4 * i + 2], d[4 * i + 3], d[4 * i + 4])
                  for i in range(scenario.n))
    return PlatoonRates(ds=d[0], vehicles=rates)


def _rk4_step(y: list[float], t: float, dt: float, sc: Scenario) -> list[float]:
    k1 = _deriv(y, t, sc)
    y2 = [y[i] + 0.5 * dt * k1[i] for i in range(len(y))]
    k2 = _deriv(y2, t + 0.5 * dt, sc)
    y3 = [y[i] + 0.5 * dt * k2[i] for i in range(len(y))]
    k3 = _deriv(y3, t + 0.5 * dt, sc)
    y4 = [y[i] + dt * k3[i] for i in range(len(y))]
    k4 = _deriv(y4, t + dt, sc)
    out = [y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
           for i in range(len(y))]
    # keep headings wrapped and speeds above the floor
    floor = sc.params.v_floor
    for i in range(sc.n):
        out[4 * i + 3] = wrap_angle(out[4 * i + 3])
        if out[4 * i + 4] < floor:
            out[4 * i + 4] = floor
    return out


def step(state: PlatoonState, scenario: Scenario) -> PlatoonState:
    """Advance one dt by classical RK4. Deterministic: same inputs give
    bit-identical outputs."""
    y = _to_vector(state)
    try:
        out = _rk4_step(y, state.t, scenario.dt, scenario)
    except (ValueError, OverflowError, DomainError) as exc:
        raise NumericBlowupError(
            f"integration failed at t={state.t:.6g}: {exc}", t=state.t) from exc
    t_next = state.t + scenario.dt
    v_t = _signals(out, t_next, scenario).v_t
    return _from_vector(out, t_next, v_t)


def _check_finite(y: Sequence[float], t: float, n: int) -> None:
    for j, val in enumerate(y):
        if not math.isfinite(val):
            vehicle = None if j == 0 else (j - 1) // 4 + 1
            who = "virtual target" if vehicle is None else f"vehicle {vehicle}"
            raise NumericBlowupError(
                f"non-finite state for {who} at t={t:.6g}", t=t, vehicle=vehicle)


def _log_rows(log: TrajectoryLog, y: Sequence[float], t: float, sc: Scenario) -> None:
    sig = _signals(y, t, sc)
    p = sc.params
    for i in range(sc.n):
        x, yy, g, v = y[4 * i + 1], y[4 * i + 2], y[4 * i + 3], y[4 * i + 4]
        perr = path_error(sc.path, Vec2(x, yy))
        log.rows.append((t, i + 1, x, yy, g, v, sig.gaps[i], sig.alpha_t[i],
                         sig.alpha_v[i], sig.accels[i], sig.v_cmds[i], perr,
                         sig.gaps[i] - p.d_star, v - p.V_c))


def run(scenario: Scenario) -> TrajectoryLog:
    """Integrate a scenario from t=0 to t_final, applying its disturbance
    schedule, and return the decimated trajectory log."""
    scenario.validate()
    state0 = initial_state(scenario)
    y = _to_vector(state0)
    n_steps = int(round(scenario.t_final / scenario.dt))
    decim = scenario.log_decimation
    log = TrajectoryLog(n=scenario.n)
    _check_finite(y, 0.0, scenario.n)
    _log_rows(log, y, 0.0, scenario)
    for k in range(1, n_steps + 1):
        t_prev = (k - 1) * scenario.dt
        try:
            y = _rk4_step(y, t_prev, scenario.dt, scenario)
        except (ValueError, OverflowError, DomainError) as exc:
            raise NumericBlowupError(
                f"integration failed at t={t_prev:.6g}: {exc}", t=t_prev) from exc
        if k % decim == 0 or k == n_steps:
            t = k * scenario.dt
            _check_finite(y, t, scenario.n)
            _log_rows(log, y, t, scenario)
    return log


# ---------------------------------------------------------------------------
# metrics

@dataclass(frozen=True)
class VehicleMetrics:
    vehicle: int
    max_abs_path_error: float
    terminal_mean_path_error: float
    max_abs_gap_error: float
    max_abs_speed_error: float
    settling_time: float


@dataclass(frozen=True)
class SimMetrics:
    vehicles: tuple[VehicleMetrics, ...]
    thresholds: tuple[float, float, float]  # path (m), gap (m), speed (m/s)


def error_thresholds(params: GuidanceParams) -> tuple[float, float, float]:
    """Convergence thresholds. 0.1 m / 0.1 m / 0.1 m/s at highway scale
    (V_c = 25 m/s), scaled linearly with V_c for other scales."""
    scale = params.V_c / 25.0
    return (0.1 * scale, 0.1 * scale, 0.1 * scale)


def metrics(log: TrajectoryLog, scenario: Scenario) -> SimMetrics:
    if not log.rows:
        raise DomainError("cannot compute metrics of an empty log")
    thr = error_thresholds(scenario.params)
    t_end = log.rows[-1][0]
    t_tail = t_end - 0.1 * scenario.t_final
    out = []
    for i in range(1, scenario.n + 1):
        rows = log.vehicle_rows(i)
        perr = [abs(r[11]) for r in rows]
        gerr = [abs(r[12]) for r in rows]
        verr = [abs(r[13]) for r in rows]
        tail = [abs(r[11]) for r in rows if r[0] >= t_tail]
        settle = 0.0
        for r in rows:
            if abs(r[11]) > thr[0] or abs(r[12]) > thr[1] or abs(r[13]) > thr[2]:
                settle = r[0]
        out.append(VehicleMetrics(
            vehicle=i,
            max_abs_path_error=max(perr),
            terminal_mean_path_error=sum(tail) / len(tail),
            max_abs_gap_error=max(gerr),
            max_abs_speed_error=max(verr),
            settling_time=settle,
        ))
    return SimMetrics(vehicles=tuple(out), thresholds=thr)


# ---------------------------------------------------------------------------
# scenario marshaling and presets

def _vec_from(value, fieldname: str) -> Vec2:
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or not all(isinstance(c, (int, float)) for c in value)):
        raise ScenarioError(fieldname, f"expected [x, y], got {value!r}")
    return Vec2(float(value[0]), float(value[1]))


def _require_number(d: dict, key: str, prefix: str = "") -> float:
    name = prefix + key
    if key not in d:
        raise ScenarioError(name, "missing required field")
    v = d[key]
    if not isinstance(v, (int, float)) or isinstance(v, bool):
        raise ScenarioError(name, f"expected a number, got {v!r}")
    return float(v)


def scenario_from_dict(doc: dict) -> Scenario:
    """Build and validate a Scenario from its canonical dict form (the
    parsed scenario file, or the service request body)."""
    if not isinstance(doc, dict):
        raise ScenarioError("scenario", f"expected a mapping, got {type(doc).__name__}")

    pd = doc.get("path")
    if not isinstance(pd, dict) or "type" not in pd:
        raise ScenarioError("path", "expected a mapping with a 'type' field")
    if pd["type"] == "circle":
        center = _vec_from(pd.get("center", [0.0, 0.0]), "path.center")
        radius = _require_number(pd, "radius", "path.")
        direction = pd.get("direction", "ccw")
        if direction not in ("ccw", "cw"):
            raise ScenarioError("path.direction", f"expected 'ccw' or 'cw', got {direction!r}")
        try:
            ref = float(pd.get("ref_angle", -math.pi / 2.0))
            path: Path = Circle(center, radius, direction, ref)
        except DomainError as exc:
            raise ScenarioError("path", str(exc)) from exc
    elif pd["type"] == "line":
        origin = _vec_from(pd.get("origin", [0.0, 0.0]), "path.origin")
        angle = float(pd.get("angle", 0.0))
        path = Line(origin, angle)
    else:
        raise ScenarioError("path.type", f"expected 'circle' or 'line', got {pd['type']!r}")

    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ScenarioError("n", f"expected an integer >= 1, got {n!r}")

    law_name = doc.get("law")
    try:
        law = GuidanceLaw(law_name)
    except ValueError:
        raise ScenarioError("law", f"expected 'regular' or 'sine', got {law_name!r}") from None

    try:
        params = GuidanceParams(d_star=_require_number(doc, "d_star"),
                                k_v=_require_number(doc, "k_v"),
                                V_c=_require_number(doc, "V_c"))
    except DomainError as exc:
        raise ScenarioError("params", str(exc)) from exc

    init_doc = doc.get("initial", {"preset": "equilibrium"})
    if isinstance(init_doc, list):
        states = []
        for k, sd in enumerate(init_doc):
            if not isinstance(sd, dict):
                raise ScenarioError(f"initial[{k}]", "expected a mapping with x, y, gamma, V")
            try:
                states.append(VehicleState(
                    Vec2(_require_number(sd, "x", f"initial[{k}]."),
                         _require_number(sd, "y", f"initial[{k}].")),
                    _require_number(sd, "gamma", f"initial[{k}]."),
                    _require_number(sd, "V", f"initial[{k}].")))
            except DomainError as exc:
                raise ScenarioError(f"initial[{k}]", str(exc)) from exc
        initial = InitialConditions(preset="explicit", states=tuple(states))
    elif isinstance(init_doc, dict):
        preset = init_doc.get("preset", "equilibrium")
        if preset == "equilibrium":
            initial = InitialConditions()
        elif preset == "offset":
            initial = InitialConditions(preset="offset",
                                        dr=float(init_doc.get("dr", 0.0)),
                                        dgamma=float(init_doc.get("dgamma", 0.0)))
        else:
            raise ScenarioError("initial.preset",
                                f"expected 'equilibrium' or 'offset', got {preset!r}")
    else:
        raise ScenarioError("initial", "expected a preset mapping or a list of states")

    dists = []
    for k, dd in enumerate(doc.get("disturbances", []) or []):
        if not isinstance(dd, dict):
            raise ScenarioError(f"disturbances[{k}]", "expected a mapping")
        kind = dd.get("kind")
        if kind not in ("lateral", "velocity"):
            raise ScenarioError(f"disturbances[{k}].kind",
                                f"expected 'lateral' or 'velocity', got {kind!r}")
        veh = dd.get("vehicle")
        if not isinstance(veh, int) or isinstance(veh, bool):
            raise ScenarioError(f"disturbances[{k}].vehicle",
                                f"expected an integer, got {veh!r}")
        dists.append(Disturbance(
            vehicle=veh, kind=kind,
            magnitude=_require_number(dd, "magnitude", f"disturbances[{k}]."),
            t_start=_require_number(dd, "t_start", f"disturbances[{k}]."),
            duration=_require_number(dd, "duration", f"disturbances[{k}].")))

    tw = doc.get("track_width")
    if tw is not None and (not isinstance(tw, (int, float)) or isinstance(tw, bool)):
        raise ScenarioError("track_width", f"expected a number, got {tw!r}")
    decim = doc.get("log_decimation", 10)
    if not isinstance(decim, int) or isinstance(decim, bool) or decim < 1:
        raise ScenarioError("log_decimation", f"expected an integer >= 1, got {decim!r}")

    sc = Scenario(path=path, n=n, law=law, params=params, initial=initial,
                  disturbances=tuple(dists),
                  dt=_require_number(doc, "dt"),
                  t_final=_require_number(doc, "t_final"),
                  track_width=None if tw is None else float(tw),
                  log_decimation=decim)
    try:
        sc.validate()
    except DomainError:
        raise
    return sc


def scenario_to_dict(sc: Scenario) -> dict:
    """Canonical dict form; the exact inverse of scenario_from_dict."""
    if isinstance(sc.path, Circle):
        pd = {"type": "circle", "center": [sc.path.center.x, sc.path.center.y],
              "radius": sc.path.radius, "direction": sc.path.direction}
        if sc.path.ref_angle != -math.pi / 2.0:
            pd["ref_angle"] = sc.path.ref_angle
    else:
        pd = {"type": "line", "origin": [sc.path.origin.x, sc.path.origin.y],
              "angle": sc.path.angle}
    doc = {
        "path": pd,
        "n": sc.n,
        "law": sc.law.value,
        "d_star": sc.params.d_star,
        "k_v": sc.params.k_v,
        "V_c": sc.params.V_c,
        "dt": sc.dt,
        "t_final": sc.t_final,
    }
    if sc.initial.preset == "explicit":
        doc["initial"] = [{"x": v.position.x, "y": v.position.y,
                           "gamma": v.heading, "V": v.speed}
                          for v in sc.initial.states]
    elif sc.initial.preset == "offset":
        doc["initial"] = {"preset": "offset", "dr": sc.initial.dr,
                          "dgamma": sc.initial.dgamma}
    else:
        doc["initial"] = {"preset": "equilibrium"}
    if sc.disturbances:
        doc["disturbances"] = [
            {"vehicle": d.vehicle, "kind": d.kind, "magnitude": d.magnitude,
             "t_start": d.t_start, "duration": d.duration}
            for d in sc.disturbances]
    if sc.track_width is not None:
        doc["track_width"] = sc.track_width
    if sc.log_decimation != 10:
        doc["log_decimation"] = sc.log_decimation
    return doc


PRESET_NAMES = ("highway", "robot")


def preset_scenario(name: str, law: GuidanceLaw | str | None = None) -> Scenario:
    """Named parameter presets. "highway": R=50 m, d*=75 m, V_c=25 m/s,
    k_v=0.5, n=4. "robot": R=1 m, d*=0.7 m, V_c=0.35 m/s, n=6. A law suffix
    is accepted in the name ("highway-regular") or passed separately;
    default is the sine law."""
    base = name
    if "-" in name:
        base, suffix = name.split("-", 1)
        if law is None:
            law = suffix
    if law is None:
        law = GuidanceLaw.SINE
    try:
        law = GuidanceLaw(law)
    except ValueError:
        raise DomainError(f"unknown guidance law {law!r}") from None

    if base == "highway":
        return Scenario(
            path=Circle(Vec2(0.0, 0.0), 50.0),
            n=4, law=law,
            params=GuidanceParams(d_star=75.0, k_v=0.5, V_c=25.0),
            dt=0.01, t_final=200.0)
    if base == "robot":
        return Scenario(
            path=Circle(Vec2(0.0, 0.0), 1.0),
            n=6, law=law,
            params=GuidanceParams(d_star=0.7, k_v=0.5, V_c=0.35),
            dt=0.002, t_final=60.0, track_width=0.1)
    raise DomainError(f"unknown preset {name!r}; expected one of {PRESET_NAMES}")
