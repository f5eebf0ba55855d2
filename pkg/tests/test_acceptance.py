"""End-to-end acceptance checks, one test per headline behavior.

Each test computes its verdict, records a one-line result (printed in the
terminal summary), and then asserts. Tolerances are stated inline; where a
check fails, the assertion message carries the measured values so the line
is diagnosable without rerunning.
"""
import math
import time
from dataclasses import replace

import numpy as np
import pytest
import yaml

from platoonsim.cli import main as cli_main
from platoonsim.geometry import Circle, Vec2, VehicleState
from platoonsim.guidance import GuidanceLaw, GuidanceParams
from platoonsim.sim import (Disturbance, InitialConditions, Scenario,
                            derivatives, error_thresholds, initial_state,
                            metrics, preset_scenario, run)
from platoonsim.stability import (ControlInput, closed_form_spectrum,
                                  equilibrium_state, jacobian_fd, linearize,
                                  rhs_relative, steady_state_regular)

HIGHWAY = GuidanceParams(d_star=75.0, k_v=0.5, V_c=25.0)
R_HIGHWAY = 50.0


def last_violation_time(rows, thresholds, t_min=0.0):
    """Latest logged time at or after t_min where any error exceeds its
    threshold; t_min - 1 if none does."""
    worst = t_min - 1.0
    th_p, th_g, th_v = thresholds
    for r in rows:
        if r[0] >= t_min and (abs(r[11]) >= th_p or abs(r[12]) >= th_g
                              or abs(r[13]) >= th_v):
            worst = max(worst, r[0])
    return worst


def test_criterion_1_sine_equilibrium_exactness(criterion):
    t0 = time.perf_counter()
    worst = 0.0
    worst_case = None
    for n in (1, 2, 4, 6):
        for ratio in (0.1, 0.5, 0.75, 0.95):
            for v_c in (0.35, 25.0):
                R = 50.0
                params = GuidanceParams(d_star=2.0 * R * ratio, k_v=0.5,
                                        V_c=v_c)
                x = equilibrium_state(n, params, R)
                u = ControlInput(curvature=1.0 / R, V_c=v_c)
                resid = float(np.max(np.abs(
                    rhs_relative(x, u, GuidanceLaw.SINE, params))))
                if resid > worst:
                    worst, worst_case = resid, (n, ratio, v_c)
    ok = worst <= 1e-12
    detail = (f"max ||rhs||_inf over grid = {worst:.3e} "
              f"(tol 1e-12, worst at n,ratio,V_c={worst_case}, "
              f"{time.perf_counter() - t0:.2f}s)")
    criterion(1, ok, detail)
    assert ok, detail


def test_criterion_2_regular_offset_value(criterion):
    t0 = time.perf_counter()
    solver = steady_state_regular(4, HIGHWAY, R_HIGHWAY)
    off_solver = abs(solver.offsets[-1])

    sc = Scenario(path=Circle(Vec2(0.0, 0.0), R_HIGHWAY), n=4,
                  law=GuidanceLaw.REGULAR, params=HIGHWAY, dt=0.01,
                  t_final=300.0)
    m = metrics(run(sc), sc)
    off_sim = m.vehicles[-1].terminal_mean_path_error

    agree = abs(off_solver - off_sim) / off_sim <= 0.01
    in_window_sim = abs(off_sim - 11.35) <= 0.5
    in_window_solver = abs(off_solver - 11.35) <= 0.5
    ok = agree and in_window_sim and in_window_solver
    detail = (f"vehicle-4 offset: solver {off_solver:.4f} m, "
              f"300s sim {off_sim:.4f} m "
              f"(routes agree to {abs(off_solver - off_sim) / off_sim:.2%}; "
              f"target window 11.35 +/- 0.5 m; "
              f"{time.perf_counter() - t0:.2f}s)")
    criterion(2, ok, detail)
    assert ok, detail


def test_criterion_3_sine_platoon_convergence(criterion):
    t0 = time.perf_counter()
    base = preset_scenario("highway")
    sc = replace(base, law=GuidanceLaw.SINE,
                 initial=InitialConditions(preset="offset", dr=5.0,
                                           dgamma=0.2))
    log = run(sc)
    th = error_thresholds(sc.params)
    t_end = log.rows[-1][0]
    final = [r for r in log.rows if r[0] == t_end]
    worst_p = max(abs(r[11]) for r in final)
    worst_g = max(abs(r[12]) for r in final)
    worst_v = max(abs(r[13]) for r in final)
    ok = worst_p < th[0] and worst_g < th[1] and worst_v < th[2]
    detail = (f"at t={t_end:g}s: |path| {worst_p:.3e} m, "
              f"|gap| {worst_g:.3e} m, |vel| {worst_v:.3e} m/s "
              f"(tols {th[0]:g}/{th[1]:g}/{th[2]:g}; "
              f"{time.perf_counter() - t0:.2f}s)")
    criterion(3, ok, detail)
    assert ok, detail


def test_criterion_4_jacobian_oracle_agreement(criterion):
    t0 = time.perf_counter()
    rng = np.random.default_rng(42)
    M = rng.normal(size=(12, 12))

    def lin_rhs(x, u, law, params):
        return M @ np.asarray(x, dtype=float)

    x0 = rng.normal(size=12)
    u = ControlInput(curvature=0.0, V_c=1.0)
    J = jacobian_fd(lin_rhs, x0, u, GuidanceLaw.SINE, HIGHWAY)
    err_linear = float(np.max(np.abs(J - M)))

    rep = linearize(3, HIGHWAY, R_HIGHWAY)
    blocks_ok = rep.max_block_discrepancy <= 1e-5
    reported = len(rep.block_discrepancies)

    ok = err_linear < 1e-9 and (blocks_ok or reported > 0)
    detail = (f"linear-system FD error {err_linear:.2e} (tol 1e-9); "
              f"printed-block discrepancy {rep.max_block_discrepancy:.2e} "
              f"({'within 1e-5' if blocks_ok else f'{reported} entries reported'}; "
              f"{time.perf_counter() - t0:.2f}s)")
    criterion(4, ok, detail)
    assert ok, detail


def test_criterion_5_spectrum_verification(criterion):
    t0 = time.perf_counter()
    reports = {n: linearize(n, HIGHWAY, R_HIGHWAY) for n in (1, 2, 3, 4, 5)}

    # multiset match of the finite-difference spectrum per n
    dists = {}
    for n, rep in reports.items():
        cf = list(rep.closed_form)
        worst = 0.0
        for z in rep.spectrum:
            i = min(range(len(cf)), key=lambda i: abs(cf[i] - z))
            worst = max(worst, abs(cf.pop(i) - z))
        dists[n] = worst
    multiset_ok = all(d <= 1e-3 for d in dists.values())

    stable_ok = all(max(z.real for z in rep.spectrum) < 0.0
                    for rep in reports.values())

    beta = reports[4].beta
    beta_ok = abs(beta - 0.95) <= 0.02

    # distinct families across n: centroid of each numeric cluster, matched
    # to the n=2 baseline by nearest family anchor
    def family_centroids(rep):
        anchors = sorted(set(np.round(rep.closed_form, 12)),
                         key=lambda z: (z.real, z.imag))
        groups = {a: [] for a in anchors}
        for z in rep.spectrum:
            a = min(anchors, key=lambda a: abs(a - z))
            groups[a].append(z)
        return {a: sum(g) / len(g) for a, g in groups.items() if g}

    base = family_centroids(reports[2])
    cross_n = 0.0
    for n in (1, 3, 4, 5):
        for a, cent in family_centroids(reports[n]).items():
            nearest = min(base.values(), key=lambda b: abs(b - cent))
            cross_n = max(cross_n, abs(cent - nearest))
    cross_ok = cross_n <= 1e-6

    ok = multiset_ok and stable_ok and beta_ok and cross_ok
    dist_txt = ", ".join(f"n={n}:{d:.2e}" for n, d in dists.items())
    detail = (f"multiset dists [{dist_txt}] (tol 1e-3, "
              f"{'ok' if multiset_ok else 'FAIL'}); "
              f"Re<0 {'ok' if stable_ok else 'FAIL'}; "
              f"beta={beta.real:.4f}{beta.imag:+.4f}j vs 0.95+/-0.02 "
              f"({'ok' if beta_ok else 'FAIL'}); "
              f"cross-n families {cross_n:.2e} (tol 1e-6, "
              f"{'ok' if cross_ok else 'FAIL'}); "
              f"{time.perf_counter() - t0:.2f}s")
    criterion(5, ok, detail)
    assert ok, detail


@pytest.mark.parametrize("kind,vehicle,magnitude", [
    ("lateral", 1, 35.0),
    ("velocity", 4, 5.0),
])
def test_criterion_6_disturbance_recovery(criterion, kind, vehicle, magnitude):
    t0 = time.perf_counter()
    base = preset_scenario("highway")
    dist = Disturbance(vehicle=vehicle, kind=kind, magnitude=magnitude,
                       t_start=35.0, duration=1.0)
    sc = replace(base, law=GuidanceLaw.SINE, t_final=150.0,
                 disturbances=(dist,))
    log = run(sc)
    th = error_thresholds(sc.params)
    t_rec = last_violation_time(log.rows, th, t_min=35.0)
    perturbed = t_rec >= 35.0
    ok = perturbed and t_rec <= 136.0
    detail = (f"{kind} kick on vehicle {vehicle}: errors back below "
              f"thresholds at t={t_rec:.2f}s (window ends 36s, "
              f"deadline 136s; {time.perf_counter() - t0:.2f}s)")
    # both parametrized runs share criterion 6; keep the worse outcome
    from conftest import ACCEPTANCE_RESULTS

    prev = ACCEPTANCE_RESULTS.get(6)
    if prev is None:
        criterion(6, ok, detail)
    else:
        criterion(6, prev[0] and ok, prev[1] + " | " + detail)
    assert ok, detail


def test_criterion_7_upstream_lateral_isolation(criterion):
    t0 = time.perf_counter()
    base = preset_scenario("robot")
    dist = Disturbance(vehicle=3, kind="lateral", magnitude=1.0,
                       t_start=5.0, duration=1.0)
    sc = replace(base, law=GuidanceLaw.SINE, t_final=30.0,
                 disturbances=(dist,))
    log = run(sc)
    peak = {i: max(abs(r[11]) for r in log.rows if r[1] == i)
            for i in (1, 2, 3)}
    ok = peak[3] > 0.0 and max(peak[1], peak[2]) <= 0.05 * peak[3]
    detail = (f"peak |path err|: v3 {peak[3]:.4g} m, "
              f"v1 {peak[1]:.3g} m, v2 {peak[2]:.3g} m "
              f"(upstream limit 5% = {0.05 * peak[3]:.4g} m; "
              f"{time.perf_counter() - t0:.2f}s)")
    criterion(7, ok, detail)
    assert ok, detail


def test_criterion_8_information_flow_bit_invariance(criterion):
    t0 = time.perf_counter()
    n = 5
    sc = Scenario(path=Circle(Vec2(0.0, 0.0), R_HIGHWAY), n=n,
                  law=GuidanceLaw.SINE, params=HIGHWAY, dt=0.01, t_final=1.0,
                  initial=InitialConditions(preset="offset", dr=3.0,
                                            dgamma=0.1))
    state = initial_state(sc)
    # make the configuration heterogeneous so accidental symmetries cannot
    # mask a dependence
    vehicles = tuple(
        VehicleState(Vec2(v.position.x + 0.1 * i, v.position.y - 0.05 * i),
                     v.heading + 0.01 * i, v.speed + 0.2 * i)
        for i, v in enumerate(state.vehicles))
    state = replace(state, vehicles=vehicles)
    base = derivatives(state, sc)

    violations = []
    lateral_couplings = 0
    speed_couplings = 0
    for j in range(n):  # 0-based index of the perturbed vehicle
        v = state.vehicles[j]
        moved = VehicleState(Vec2(v.position.x + 0.37, v.position.y - 0.21),
                             v.heading + 0.05, v.speed + 0.3)
        pert = replace(state, vehicles=tuple(
            moved if k == j else state.vehicles[k] for k in range(n)))
        rates = derivatives(pert, sc)
        for i in range(n):
            same_heading = rates.vehicles[i].dheading == base.vehicles[i].dheading
            same_speed = rates.vehicles[i].dspeed == base.vehicles[i].dspeed
            if j not in (i - 1, i):
                if not same_heading:
                    violations.append(f"lateral of {i + 1} reacts to {j + 1}")
            elif not same_heading:
                lateral_couplings += 1
            if j not in (i, i + 1):
                if not same_speed:
                    violations.append(f"speed of {i + 1} reacts to {j + 1}")
            elif not same_speed:
                speed_couplings += 1
    ok = not violations and lateral_couplings > 0 and speed_couplings > 0
    detail = (f"no out-of-pattern dependence over {n * n} vehicle pairs; "
              f"{lateral_couplings} lateral / {speed_couplings} speed "
              f"in-pattern couplings observed; "
              f"{time.perf_counter() - t0:.2f}s"
              + ("; violations: " + "; ".join(violations) if violations
                 else ""))
    criterion(8, ok, detail)
    assert ok, detail


def test_criterion_9_determinism_and_round_trip(criterion, tmp_path):
    t0 = time.perf_counter()
    doc = {
        "path": {"type": "circle", "center": [0.0, 0.0], "radius": 50.0},
        "n": 4, "law": "sine", "d_star": 75.0, "k_v": 0.5, "V_c": 25.0,
        "dt": 0.01, "t_final": 10.0,
        "initial": {"preset": "offset", "dr": 5.0, "dgamma": 0.2},
        "disturbances": [{"vehicle": 2, "kind": "lateral", "magnitude": 3.0,
                          "t_start": 4.0, "duration": 1.0}],
    }
    scen = tmp_path / "scenario.yaml"
    scen.write_text(yaml.safe_dump(doc))
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        rc = cli_main(["simulate", "--scenario", str(scen),
                       "--out", str(out)])
        assert rc == 0
        outs.append((out / "trajectory.csv").read_bytes())
    identical = outs[0] == outs[1]

    echo = yaml.safe_load((tmp_path / "a" / "summary.yaml").read_text())
    scen2 = tmp_path / "echo.yaml"
    scen2.write_text(yaml.safe_dump(echo["scenario"]))
    rc = cli_main(["simulate", "--scenario", str(scen2),
                   "--out", str(tmp_path / "c")])
    assert rc == 0
    echo_same = (tmp_path / "c" / "trajectory.csv").read_bytes() == outs[0]

    ok = identical and echo_same
    detail = (f"repeat run byte-identical: {identical}; "
              f"summary-echo rerun byte-identical: {echo_same} "
              f"({len(outs[0])} bytes; {time.perf_counter() - t0:.2f}s)")
    criterion(9, ok, detail)
    assert ok, detail
