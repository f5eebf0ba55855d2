"""Relative-coordinate dynamics and linear stability analysis.

The platoon is described per vehicle by (d, alpha_t, alpha_v, V): range to
the predecessor, the predecessor's and the vehicle's headings relative to
the line of sight, and forward speed. Vehicle 1's predecessor is the
path-constrained virtual target, whose speed and lateral acceleration are
algebraic functions of vehicle 1's state.

The module provides the nonlinear rhs, the circular-path equilibrium, the
closed-form (staircase) system matrix, a finite-difference Jacobian oracle,
eigenvalue computation, the closed-form spectrum, and a steady-turn solver
for the regular law's converged offsets.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainError, NumericBlowupError
from .geometry import Circle, Vec2, wrap_angle
from .guidance import (D_MIN, GuidanceLaw, GuidanceParams, chain_speed_commands,
                       lateral_accel_scalar, virtual_target_speed)


@dataclass(frozen=True)
class RelativeState:
    """Concatenated per-vehicle relative coordinates, shape (4n,):
    [d_1, alpha_t_1, alpha_v_1, V_1, d_2, ...]."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size % 4 != 0 or v.size == 0:
            raise DomainError(f"relative state must have 4n entries, got shape {v.shape}")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.size // 4


@dataclass(frozen=True)
class ControlInput:
    """Exogenous input: path curvature (0 for a line) and commanded speed."""

    curvature: float
    V_c: float

    def __post_init__(self):
        if not (self.V_c > 0.0):
            raise DomainError(f"V_c must be > 0, got {self.V_c}")


def _state_array(x) -> np.ndarray:
    if isinstance(x, RelativeState):
        return x.values
    return np.asarray(x, dtype=float)


def rhs_relative(x, u: ControlInput, law: GuidanceLaw,
                 params: GuidanceParams) -> np.ndarray:
    """Time derivative of the relative platoon state.

    Vehicle 0 (the virtual target) has V_0 = V_1 d*/d_1 and
    a_0 = V_0^2 * curvature; every real vehicle uses the guidance law for
    its lateral acceleration and the command chain for its speed command.
    """
    xv = _state_array(x)
    n = xv.size // 4
    if n < 1 or xv.size % 4 != 0:
        raise DomainError(f"state must have 4n entries, got {xv.size}")

    d = [max(xv[4 * i], D_MIN) for i in range(n)]
    at = [wrap_angle(xv[4 * i + 1]) for i in range(n)]
    av = [wrap_angle(xv[4 * i + 2]) for i in range(n)]
    V = [xv[4 * i + 3] for i in range(n)]
    floor = params.v_floor

    v0 = virtual_target_speed(V[0], d[0], params.d_star, params.v_cap)
    a0 = v0 * v0 * u.curvature
    accels = [lateral_accel_scalar(law, d[i], at[i], av[i], V[i]) for i in range(n)]
    v_cmds = chain_speed_commands(V, d, params)

    pred_v = [v0] + V[:-1]
    pred_a = [a0] + accels[:-1]
    out = np.empty(4 * n)
    for i in range(n):
        sin_at, sin_av = math.sin(at[i]), math.sin(av[i])
        lam_dot = (pred_v[i] * sin_at - V[i] * sin_av) / d[i]
        out[4 * i] = pred_v[i] * math.cos(at[i]) - V[i] * math.cos(av[i])
        out[4 * i + 1] = pred_a[i] / max(pred_v[i], floor) - lam_dot
        out[4 * i + 2] = accels[i] / max(V[i], floor) - lam_dot
        out[4 * i + 3] = params.k_v * (v_cmds[i] - V[i])
    return out


def equilibrium_state(n: int, params: GuidanceParams, R: float) -> RelativeState:
    """Circular-path equilibrium: every vehicle at range d* with
    alpha_t = asin(d*/2R) = -alpha_v and speed V_c. R may be inf (line)."""
    if n < 1:
        raise DomainError(f"platoon size must be >= 1, got {n}")
    ratio = params.d_star / (2.0 * R)
    if not (0.0 <= ratio < 1.0):
        raise DomainError(
            f"equilibrium requires d_star < 2R (chord must exist): "
            f"d_star={params.d_star}, R={R}")
    theta = math.asin(ratio)
    block = [params.d_star, theta, -theta, params.V_c]
    return RelativeState(np.array(block * n))


def assemble_A_symbolic(n: int, params: GuidanceParams, R: float) -> np.ndarray:
    """The staircase system matrix of the sine law linearized at the
    circular equilibrium, assembled from its closed-form 4x4 blocks.

    Row blocks: the lead vehicle's self-coupling block, then each follower's
    self-coupling block; the superdiagonal blocks carry the backward-flowing
    speed command, the subdiagonal blocks the forward-flowing lateral
    coupling. Information flow is asymmetric, so the two off-diagonal blocks
    are not transposes of each other.
    """
    if n < 1:
        raise DomainError(f"platoon size must be >= 1, got {n}")
    s = params.d_star / (2.0 * R)
    if not (0.0 <= s < 1.0):
        raise DomainError(
            f"linearization requires d_star < 2R: d_star={params.d_star}, R={R}")
    al = math.sqrt(1.0 - s * s)
    V, D, k = params.V_c, params.d_star, params.k_v

    A_tt = np.array([
        [-V * al / D, -V * s, -V * s, 0.0],
        [V * s / D ** 2, -V * al / D, V * al / D, 0.0],
        [V * s / D ** 2, -3.0 * V * al / D, -3.0 * V * al / D, 0.0],
        [0.0, 0.0, 0.0, -k]])
    A_vv = np.array([
        [0.0, -V * s, -V * s, -al],
        [2.0 * V * s / D ** 2, -V * al / D, V * al / D, -s / D],
        [0.0, -3.0 * V * al / D, -3.0 * V * al / D, s / D],
        [0.0, 0.0, 0.0, -k]])
    A_tv = np.zeros((4, 4))
    A_tv[3] = [-V * k / D, 0.0, 0.0, k]
    A_vt = np.array([
        [0.0, 0.0, 0.0, al],
        [-2.0 * V * s / D ** 2, -2.0 * V * al / D, -4.0 * V * al / D, s / D],
        [0.0, 0.0, 0.0, -s / D],
        [0.0, 0.0, 0.0, 0.0]])

    A = np.zeros((4 * n, 4 * n))
    for i in range(n):
        A[4 * i:4 * i + 4, 4 * i:4 * i + 4] = A_tt if i == 0 else A_vv
        if i + 1 < n:
            A[4 * i:4 * i + 4, 4 * i + 4:4 * i + 8] = A_tv
        if i > 0:
            A[4 * i:4 * i + 4, 4 * i - 4:4 * i] = A_vt
    return A


def jacobian_fd(rhs: Callable, x0, u: ControlInput, law: GuidanceLaw,
                params: GuidanceParams) -> np.ndarray:
    """Central-difference Jacobian of ``rhs`` at ``x0`` with per-coordinate
    step h_j = 1e-6 * max(1, |x0_j|). Deterministic."""
    x = _state_array(x0)
    m = x.size
    J = np.empty((m, m))
    for j in range(m):
        h = 1e-6 * max(1.0, abs(x[j]))
        xp = x.copy()
        xm = x.copy()
        xp[j] += h
        xm[j] -= h
        fp = np.asarray(rhs(xp, u, law, params), dtype=float)
        fm = np.asarray(rhs(xm, u, law, params), dtype=float)
        if not (np.all(np.isfinite(fp)) and np.all(np.isfinite(fm))):
            raise NumericBlowupError(
                f"rhs non-finite while probing coordinate {j}")
        J[:, j] = (fp - fm) / (2.0 * h)
    return J


def eigenvalues(A: np.ndarray) -> np.ndarray:
    """All eigenvalues of a real square matrix, canonically ordered by real
    part then imaginary part, with a residual check on every eigenpair."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise DomainError("matrix entries must be finite")
    try:
        w, vecs = np.linalg.eig(A)
    except np.linalg.LinAlgError as exc:
        raise NumericBlowupError(
            f"eigenvalue iteration failed: {exc}; "
            f"norm={np.linalg.norm(A):.3e}") from exc
    norm_a = np.linalg.norm(A, 2)
    tol = 1e-8 * max(norm_a, 1e-300)
    for k in range(w.size):
        v = vecs[:, k]
        resid = np.linalg.norm(A @ v - w[k] * v)
        if resid > tol:
            raise NumericBlowupError(
                f"eigenpair residual {resid:.3e} exceeds {tol:.3e} "
                f"for eigenvalue {w[k]:.6g}")
    order = np.lexsort((w.imag, w.real))
    return w[order]


def _known_families(n: int, params: GuidanceParams, R: float) -> tuple[list[complex], float, float]:
    s = params.d_star / (2.0 * R)
    al = math.sqrt(1.0 - s * s)
    c = params.V_c * al / params.d_star
    imag = params.V_c * math.sqrt(2.0 * (al * al / params.d_star ** 2
                                         + 1.0 / (4.0 * R * R)))
    known = [complex(-params.k_v, 0.0), complex(-c, 0.0)]
    for _ in range(n):
        known.append(complex(-2.0 * c, imag))
        known.append(complex(-2.0 * c, -imag))
    return known, al, c


def _extract_beta(n: int, params: GuidanceParams, R: float) -> complex:
    """beta from the finite-difference spectrum at the sine equilibrium.

    The two remaining eigenvalue families after the analytic ones are
    removed are the roots of a monic quadratic with linear coefficient k_v
    (their pairwise sums all equal -k_v). Each remaining eigenvalue mu
    gives an estimate of the constant coefficient q = -mu^2 - k_v*mu;
    averaging over the family and solving the quadratic recovers the two
    roots -beta*k_v and -(1-beta)*k_v in one step, real or complex.
    """
    k = params.k_v
    if n < 2:
        # no family members exist; fall back to the product identity the
        # n >= 2 extraction estimates numerically
        s = params.d_star / (2.0 * R)
        q = k * params.V_c * math.sqrt(1.0 - s * s) / params.d_star
    else:
        u = ControlInput(curvature=1.0 / R, V_c=params.V_c)
        x0 = equilibrium_state(n, params, R)
        residual = list(eigenvalues(jacobian_fd(rhs_relative, x0, u,
                                                GuidanceLaw.SINE, params)))
        known, _, _ = _known_families(n, params, R)
        for target in known:
            idx = min(range(len(residual)),
                      key=lambda i: abs(residual[i] - target))
            residual.pop(idx)
        if len(residual) != 2 * (n - 1):
            raise DomainError(
                f"beta extraction failed: expected {2 * (n - 1)} residual "
                f"eigenvalues, found {len(residual)}")
        q_est = [-mu * mu - k * mu for mu in residual]
        q = sum(q_est) / len(q_est)
        spread = max(abs(qe - q) for qe in q_est)
        if spread > 0.05 * (abs(q) + k * k):
            raise DomainError(
                f"beta extraction failed: inconsistent family estimates "
                f"(spread {spread:.3e} around q={q:.6g})")
    disc = 1.0 - 4.0 * q / (k * k)
    beta = (1.0 + cmath.sqrt(disc)) / 2.0
    if beta.imag == 0.0:
        beta = complex(beta.real, 0.0)
    return beta


def closed_form_spectrum(n: int, params: GuidanceParams,
                         R: float) -> tuple[np.ndarray, complex]:
    """The 4n closed-form eigenvalues at the circular sine equilibrium,
    plus the extracted beta.

    Families: -k_v and -V_c*alpha/d* once each; the complex pair
    -2*V_c*alpha/d* +/- j*V_c*sqrt(2*(alpha^2/d*^2 + 1/(4R^2))) n times;
    -beta*k_v and -(1-beta)*k_v n-1 times each. beta is extracted from the
    finite-difference spectrum (see _extract_beta); for n=1 the last two
    families are empty and beta is reported from the same quadratic
    identity evaluated analytically.
    """
    if n < 1:
        raise DomainError(f"platoon size must be >= 1, got {n}")
    known, _, _ = _known_families(n, params, R)
    beta = _extract_beta(n, params, R)
    k = params.k_v
    values = list(known)
    for _ in range(n - 1):
        values.append(-beta * k)
        values.append(-(1.0 - beta) * k)
    arr = np.array(values, dtype=complex)
    order = np.lexsort((arr.imag, arr.real))
    return arr[order], beta


# ---------------------------------------------------------------------------
# steady-turn solver for the converged circles of the regular law

@dataclass(frozen=True)
class SteadyStateResult:
    """Converged steady-turn geometry per vehicle. ``offsets[i]`` is the
    vehicle's circle-radius offset from the path radius (negative inside),
    ``gaps[i]`` its constant range to the predecessor. ``method`` records
    whether the Newton solver or the simulation fallback produced it."""

    offsets: tuple[float, ...]
    gaps: tuple[float, ...]
    radii: tuple[float, ...]
    method: str


def _steady_pair_residual(r_p: float, r: float, psi: float, d_star: float,
                          law: GuidanceLaw) -> tuple[float, float]:
    """Residuals of the two steady-turn conditions for one vehicle whose
    predecessor rotates on radius r_p: the chord between the circles must
    equal the chain gap r*d_star/r_p, and the guidance law must supply
    exactly the centripetal acceleration of the vehicle's own circle (the
    common angular rate cancels)."""
    dg = math.sqrt(r_p * r_p + r * r - 2.0 * r_p * r * math.cos(psi))
    if dg < 1e-12:
        return 1e6, 1e6
    lam = math.atan2(r_p * math.sin(psi), r_p * math.cos(psi) - r)
    a_v = math.pi / 2.0 - lam
    a_t = psi + math.pi / 2.0 - lam
    if law == GuidanceLaw.SINE:
        shaped = -4.0 * math.sin(a_v) - 2.0 * math.sin(a_t)
    else:
        shaped = -4.0 * a_v - 2.0 * a_t
    f1 = dg - r * d_star / r_p
    f2 = (r / dg) * shaped - 1.0
    return f1, f2


def _solve_vehicle(r_p: float, d_star: float, law: GuidanceLaw) -> Optional[tuple[float, float]]:
    """Damped Newton on (radius, angular separation) for one vehicle.
    Returns None if it fails to converge."""
    if d_star >= 2.0 * r_p:
        return None
    psi = 2.0 * math.asin(d_star / (2.0 * r_p))
    r = r_p
    for _ in range(120):
        f1, f2 = _steady_pair_residual(r_p, r, psi, d_star, law)
        if abs(f1) < 1e-11 and abs(f2) < 1e-13:
            return r, psi
        h_r = 1e-7 * max(1.0, abs(r))
        h_p = 1e-8
        f1r, f2r = _steady_pair_residual(r_p, r + h_r, psi, d_star, law)
        f1p, f2p = _steady_pair_residual(r_p, r, psi + h_p, d_star, law)
        j11, j12 = (f1r - f1) / h_r, (f1p - f1) / h_p
        j21, j22 = (f2r - f2) / h_r, (f2p - f2) / h_p
        det = j11 * j22 - j12 * j21
        if det == 0.0 or not math.isfinite(det):
            return None
        dr = (f2 * j12 - f1 * j22) / det
        dp = (f1 * j21 - f2 * j11) / det
        base = f1 * f1 + f2 * f2
        step_scale = 1.0
        while step_scale > 1e-6:
            rn = r + step_scale * dr
            pn = psi + step_scale * dp
            if rn > 1e-9 and 0.0 < pn < math.pi:
                g1, g2 = _steady_pair_residual(r_p, rn, pn, d_star, law)
                if g1 * g1 + g2 * g2 < base:
                    r, psi = rn, pn
                    break
            step_scale *= 0.5
        else:
            return None
    f1, f2 = _steady_pair_residual(r_p, r, psi, d_star, law)
    if abs(f1) < 1e-9 and abs(f2) < 1e-11:
        return r, psi
    return None


def _simulation_offsets(n: int, params: GuidanceParams, R: float,
                        law: GuidanceLaw) -> SteadyStateResult:
    """Long-horizon simulation fallback: run the Cartesian platoon and read
    the terminal mean radius of each vehicle."""
    from .sim import Scenario, run  # local import to keep sim optional here

    period = params.d_star / params.V_c
    dt = min(0.01, max(1e-4, 0.002 * period))
    t_final = 50.0 * period
    sc = Scenario(path=Circle(Vec2(0.0, 0.0), R), n=n, law=law, params=params,
                  dt=dt, t_final=t_final)
    log = run(sc)
    t_tail = t_final * 0.9
    radii = []
    for i in range(1, n + 1):
        rows = [r for r in log.rows if r[1] == i and r[0] >= t_tail]
        radii.append(sum(math.hypot(r[2], r[3]) for r in rows) / len(rows))
    gaps = []
    prev = R
    for r in radii:
        gaps.append(r * params.d_star / prev)
        prev = r
    return SteadyStateResult(offsets=tuple(r - R for r in radii),
                             gaps=tuple(gaps), radii=tuple(radii),
                             method="simulation")


def steady_state_regular(n: int, params: GuidanceParams, R: float,
                         law: GuidanceLaw = GuidanceLaw.REGULAR) -> SteadyStateResult:
    """Converged circle offsets of an n-vehicle platoon on a circular path.

    Solves the steady-turn conditions chain-sequentially (each vehicle and
    its predecessor rotate rigidly about the path center at a common rate
    with constant gap and relative angles). Falls back to a long-horizon
    simulation, flagged in the result, if the Newton chain fails.
    """
    if n < 1:
        raise DomainError(f"platoon size must be >= 1, got {n}")
    if not (params.d_star < 2.0 * R):
        raise DomainError(
            f"steady state requires d_star < 2R: d_star={params.d_star}, R={R}")
    radii: list[float] = []
    gaps: list[float] = []
    r_p = R
    for _ in range(n):
        sol = _solve_vehicle(r_p, params.d_star, law)
        if sol is None:
            return _simulation_offsets(n, params, R, law)
        r, psi = sol
        radii.append(r)
        gaps.append(r * params.d_star / r_p)
        r_p = r
    return SteadyStateResult(offsets=tuple(r - R for r in radii),
                             gaps=tuple(gaps), radii=tuple(radii),
                             method="newton")


# ---------------------------------------------------------------------------
# linearization report

@dataclass(frozen=True)
class LinearizationReport:
    """Everything the linear analysis produces at one operating point."""

    n: int
    d_star: float
    R: float
    V_c: float
    k_v: float
    alpha: float
    beta: complex
    beta_source: str  # "extracted" (from the FD spectrum) or "analytic" (n=1)
    equilibrium: RelativeState
    A_symbolic: np.ndarray
    A_fd: np.ndarray
    spectrum: np.ndarray
    closed_form: np.ndarray
    max_block_discrepancy: float
    block_discrepancies: tuple[tuple[int, int, float, float], ...]

    def to_dict(self) -> dict:
        def cplx(z: complex) -> dict:
            return {"real": float(z.real), "imag": float(z.imag)}

        return {
            "n": self.n,
            "d_star": self.d_star,
            "R": self.R,
            "V_c": self.V_c,
            "k_v": self.k_v,
            "alpha": self.alpha,
            "beta": cplx(self.beta),
            "beta_source": self.beta_source,
            "eigenvalues_numeric": [cplx(z) for z in self.spectrum],
            "eigenvalues_closed_form": [cplx(z) for z in self.closed_form],
            "max_block_discrepancy": self.max_block_discrepancy,
            "block_discrepancies": [
                {"row": r, "col": c, "fd": fd, "symbolic": sym}
                for r, c, fd, sym in self.block_discrepancies],
        }


# entries differing by more than this (absolute + relative) are reported
BLOCK_DISCREPANCY_TOL = 1e-5


def linearize(n: int, params: GuidanceParams, R: float) -> LinearizationReport:
    """Linearize the sine-law platoon at the circular equilibrium and
    compare the finite-difference Jacobian against the closed-form blocks.

    The finite-difference Jacobian of the implemented rhs is authoritative;
    entries of the closed-form assembly that disagree beyond tolerance are
    reported, never silently preferred.
    """
    u = ControlInput(curvature=1.0 / R, V_c=params.V_c)
    x0 = equilibrium_state(n, params, R)
    A_sym = assemble_A_symbolic(n, params, R)
    A_fd = jacobian_fd(rhs_relative, x0, u, GuidanceLaw.SINE, params)
    spectrum = eigenvalues(A_fd)
    closed, beta = closed_form_spectrum(n, params, R)

    s = params.d_star / (2.0 * R)
    alpha = math.sqrt(1.0 - s * s)
    diffs = []
    max_disc = 0.0
    for i in range(4 * n):
        for j in range(4 * n):
            disc = abs(A_fd[i, j] - A_sym[i, j]) / (1.0 + abs(A_sym[i, j]))
            max_disc = max(max_disc, disc)
            if disc > BLOCK_DISCREPANCY_TOL:
                diffs.append((i, j, float(A_fd[i, j]), float(A_sym[i, j])))
    return LinearizationReport(
        n=n, d_star=params.d_star, R=R, V_c=params.V_c, k_v=params.k_v,
        alpha=alpha, beta=beta,
        beta_source="extracted" if n >= 2 else "analytic",
        equilibrium=x0, A_symbolic=A_sym, A_fd=A_fd,
        spectrum=spectrum, closed_form=closed,
        max_block_discrepancy=max_disc,
        block_discrepancies=tuple(diffs))
