"""The interaction point: behind state, shock speeds and derived constants."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import ahead as ahead_mod
from . import fluid, jump
from .ahead import AheadField
from .errors import (
    DegenerateJump,
    InadmissibleConfiguration,
    NoConvergence,
    SingularSystem,
)
from .fluid import Eos, PrimState
from .jump import BRENT_RTOL, Family, ShockPair

POINT_TOL = 1e-12


@dataclass(frozen=True)
class PointSolution:
    behind: PrimState
    V1: float
    V2: float


@dataclass(frozen=True)
class InteractionData:
    r0: float
    rho0: float
    eta0: float
    beta0: float
    V1_0: float
    V2_0: float
    a: float
    Gamma0: float
    alpha_prime_0: float
    beta_prime_0: float
    ahead_minus_0: dict = field(default_factory=dict)
    w0_unshifted: float = 0.0
    diagnostics: dict = field(default_factory=dict)


def _states_equal(s1: PrimState, s2: PrimState) -> bool:
    return abs(s1.rho - s2.rho) <= 1e-12 * max(s1.rho, s2.rho) and abs(s1.w - s2.w) <= 1e-12


def _branch_velocity(eos: Eos, rho, minus: PrimState, family: Family):
    """Velocity behind a compressive shock of the given family with density rho."""
    dp = np.asarray(fluid.pressure(eos, rho)) - fluid.pressure(eos, minus.rho)
    jump_w = np.sqrt(np.maximum(dp * (rho - minus.rho) / (rho * minus.rho), 0.0))
    return minus.w - jump_w if family is Family.LEFT else minus.w + jump_w


def _branch_solve(ahead1: PrimState, ahead2: PrimState, eos: Eos) -> PrimState:
    """Intersect the two compressive Hugoniot branches (bracketed 1D solve)."""
    lo = max(ahead1.rho, ahead2.rho)

    def g(rho):
        return float(_branch_velocity(eos, rho, ahead1, Family.LEFT)
                     - _branch_velocity(eos, rho, ahead2, Family.RIGHT))

    g_lo = g(lo)
    if g_lo <= 0.0:
        if abs(g_lo) <= 1e-12 * (1.0 + abs(ahead1.w) + abs(ahead2.w)):
            raise DegenerateJump("ahead states admit only a zero-strength interaction")
        raise InadmissibleConfiguration("ahead states do not produce two compressive shocks")
    hi = lo * 2.0
    while g(hi) > 0.0:
        hi *= 2.0
        if hi > 1e12 * lo:
            raise NoConvergence("could not bracket the interaction density")
    rho = brentq(g, lo, hi, xtol=1e-15 * lo, rtol=BRENT_RTOL, maxiter=500)
    return PrimState(rho, float(_branch_velocity(eos, rho, ahead1, Family.LEFT)))


def _newton_point(ahead1, ahead2, eos, guess, max_iter=60):
    x = np.array([guess.rho, guess.w], dtype=float)
    s1, s2 = jump.flux_scale(eos, ahead1), jump.flux_scale(eos, ahead2)

    def F(x):
        return np.array([
            jump._I(eos, x[0], x[1], ahead1.rho, ahead1.w) / s1,
            jump._I(eos, x[0], x[1], ahead2.rho, ahead2.w) / s2,
        ])

    for _ in range(max_iter):
        f = F(x)
        if np.max(np.abs(f)) <= POINT_TOL:
            return PrimState(float(x[0]), float(x[1]))
        p1 = jump._I_partials(eos, x[0], x[1], ahead1.rho, ahead1.w)
        p2 = jump._I_partials(eos, x[0], x[1], ahead2.rho, ahead2.w)
        jac = np.array([[p1[0] / s1, p1[1] / s1], [p2[0] / s2, p2[1] / s2]])
        try:
            dx = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            return None
        lam = 1.0
        while x[0] + lam * dx[0] <= 0.0 and lam > 1e-6:
            lam *= 0.5
        if x[0] + lam * dx[0] <= 0.0:
            return None
        x = x + lam * dx
        if not np.all(np.isfinite(x)):
            return None
    return None


def _admissible(behind, ahead1, ahead2, eos) -> bool:
    try:
        p1, p2 = ShockPair(behind, ahead1), ShockPair(behind, ahead2)
        V1, V2 = jump.shock_speed(p1), jump.shock_speed(p2)
        return bool(jump.determinism(p1, Family.LEFT, eos) and jump.determinism(p2, Family.RIGHT, eos)
                    and V1 < V2)
    except DegenerateJump:
        return False


def solve_point(ahead1: PrimState, ahead2: PrimState, eos: Eos, r0: float = 1.0,
                guess: PrimState | None = None) -> PointSolution:
    """Behind state and shock speeds at the interaction point.

    Newton on ``(rho0, w0)`` is tried first; if it fails or lands on an
    inadmissible root, the two compressive Hugoniot branches are intersected
    by a bracketed solve instead.
    """
    ahead1 = PrimState(float(ahead1.rho), float(ahead1.w))
    ahead2 = PrimState(float(ahead2.rho), float(ahead2.w))
    fluid._check_rho([ahead1.rho, ahead2.rho])
    if _states_equal(ahead1, ahead2):
        raise DegenerateJump("identical ahead states: nothing interacts")
    if guess is None:
        guess = PrimState(1.2 * max(ahead1.rho, ahead2.rho), 0.5 * (ahead1.w + ahead2.w))
    behind = _newton_point(ahead1, ahead2, eos, guess)
    if behind is None or not _admissible(behind, ahead1, ahead2, eos):
        behind = _branch_solve(ahead1, ahead2, eos)
        if not _admissible(behind, ahead1, ahead2, eos):
            raise InadmissibleConfiguration("interaction root violates determinism")
    V1 = float(jump.shock_speed(ShockPair(behind, ahead1)))
    V2 = float(jump.shock_speed(ShockPair(behind, ahead2)))
    return PointSolution(behind, V1, V2)


def frame_shift(point: PointSolution, ahead1: AheadField, ahead2: AheadField):
    """Move to the frame where the behind velocity vanishes.

    Returns the shifted point solution, both shifted ahead fields and the
    velocity that was removed.
    """
    w0 = float(point.behind.w)
    shifted = PointSolution(PrimState(point.behind.rho, point.behind.w - w0), point.V1 - w0, point.V2 - w0)
    return shifted, ahead_mod.shifted(ahead1, w0), ahead_mod.shifted(ahead2, w0), w0


def compute_a(eta0: float, V1_0: float, V2_0: float) -> float:
    a = (eta0 + V1_0) / (eta0 - V1_0) * (eta0 - V2_0) / (eta0 + V2_0)
    if not 0.0 < a < 1.0:
        raise InadmissibleConfiguration(f"coordinate ratio a={a} outside (0, 1)")
    return float(a)


def compute_Gamma0(eta0: float, V1_0: float) -> float:
    if not -eta0 < V1_0 < 0.0:
        raise InadmissibleConfiguration("need -eta0 < V1_0 < 0 for Gamma0")
    return float(-(eta0 + V1_0) / (eta0 - V1_0))


def origin_jacobian(eta0: float, Gamma0: float) -> np.ndarray:
    """d(t, r)/d(u, v) at the origin."""
    return np.array([[-1.0 / (eta0 * Gamma0), 1.0 / eta0], [1.0 / Gamma0, 1.0]])


def origin_char_map(eta0: float, Gamma0: float) -> np.ndarray:
    """d(u, v)/d(t, r) at the origin: u grows against outgoing, v against incoming characteristics."""
    return np.array([[-0.5 * eta0 * Gamma0, 0.5 * Gamma0], [0.5 * eta0, 0.5]])


@dataclass(frozen=True)
class SlopeSystem:
    alpha_prime_0: float
    beta_prime_0: float
    matrix: np.ndarray
    rhs: np.ndarray
    det: float
    F1_0: float
    F2_0: float
    M1: tuple[float, float]
    M2: tuple[float, float]
    ahead_minus_0: dict


def slope_system(rho0: float, r0: float, eta0: float, a: float, Gamma0: float,
                 ahead1: AheadField, ahead2: AheadField, eos: Eos) -> SlopeSystem:
    """Assemble and solve the 2x2 system for the initial invariant slopes.

    Ahead fields must already be in the frame where the behind velocity is 0.
    """
    behind = PrimState(rho0, 0.0)
    s1 = ahead1.evaluate(0.0, r0).state
    s2 = ahead2.evaluate(0.0, r0).state
    s1 = PrimState(float(s1.rho), float(s1.w))
    s2 = PrimState(float(s2.rho), float(s2.w))
    pair1, pair2 = ShockPair(behind, s1), ShockPair(behind, s2)
    F1 = float(jump.coeff_F1(pair1, eos))
    F2 = float(jump.coeff_F2(pair2, eos))
    M1 = tuple(float(m) for m in jump.coeff_M(pair1, eos, Family.LEFT))
    M2 = tuple(float(m) for m in jump.coeff_M(pair2, eos, Family.RIGHT))
    ga1, gb1 = ahead_mod.invariant_gradients(ahead1, eos, 0.0, r0)
    ga2, gb2 = ahead_mod.invariant_gradients(ahead2, eos, 0.0, r0)
    # derivatives of the shock traces (t, r) at the origin
    dt1, dr1 = (1.0 - 1.0 / Gamma0) / eta0, 1.0 / Gamma0 + 1.0
    dt2, dr2 = (1.0 - a / Gamma0) / eta0, a / Gamma0 + 1.0
    da1 = float(ga1[0] * dt1 + ga1[1] * dr1)
    db1 = float(gb1[0] * dt1 + gb1[1] * dr1)
    da2 = float(ga2[0] * dt2 + ga2[1] * dr2)
    db2 = float(gb2[0] * dt2 + gb2[1] * dr2)
    rhs = np.array([M1[0] * da1 + M1[1] * db1, M2[0] * da2 + M2[1] * db2])
    mat = np.array([[1.0, -F1], [-a * F2, 1.0]])
    det = float(np.linalg.det(mat))
    if abs(det) < 1e-12:
        raise SingularSystem("slope system is singular")
    sol = np.linalg.solve(mat, rhs)
    i1, i2 = fluid.to_invariants(eos, s1), fluid.to_invariants(eos, s2)
    minus0 = {
        "alpha1": float(i1.alpha), "beta1": float(i1.beta),
        "alpha2": float(i2.alpha), "beta2": float(i2.beta),
        "dalpha1_du": da1, "dbeta1_du": db1, "dalpha2_dv": da2, "dbeta2_dv": db2,
    }
    return SlopeSystem(float(sol[0]), float(sol[1]), mat, rhs, det, F1, F2, M1, M2, minus0)


def initial_slopes(data: InteractionData, ahead1: AheadField, ahead2: AheadField,
                   eos: Eos) -> tuple[float, float]:
    s = slope_system(data.rho0, data.r0, data.eta0, data.a, data.Gamma0, ahead1, ahead2, eos)
    return s.alpha_prime_0, s.beta_prime_0


@dataclass(frozen=True)
class Setup:
    """Everything the scheme needs: constants plus the shifted ahead fields."""

    data: InteractionData
    ahead1: AheadField
    ahead2: AheadField
    eos: Eos


def setup_interaction(ahead1: AheadField, ahead2: AheadField, eos: Eos, r0: float,
                      guess: PrimState | None = None) -> Setup:
    """Solve the interaction point, shift the frame and compute all constants."""
    if not r0 > 0.0:
        raise InadmissibleConfiguration("interaction radius must be positive")
    s1 = ahead1.evaluate(0.0, r0).state
    s2 = ahead2.evaluate(0.0, r0).state
    point = solve_point(PrimState(float(s1.rho), float(s1.w)), PrimState(float(s2.rho), float(s2.w)),
                        eos, r0, guess)
    shifted, f1, f2, w0 = frame_shift(point, ahead1, ahead2)
    rho0 = float(shifted.behind.rho)
    eta0 = float(fluid.sound_speed(eos, rho0))
    a = compute_a(eta0, shifted.V1, shifted.V2)
    G0 = compute_Gamma0(eta0, shifted.V1)
    sys_ = slope_system(rho0, r0, eta0, a, G0, f1, f2, eos)
    diag = {
        "F1_0": sys_.F1_0, "F2_0": sys_.F2_0, "F1F2_minus_a2": sys_.F1_0 * sys_.F2_0 - a * a,
        "detM": sys_.det, "detM_minus_identity": sys_.det - (1.0 - a**3),
        "M1": list(sys_.M1), "M2": list(sys_.M2), "a0": float(sys_.rhs[0]), "b0": float(sys_.rhs[1]),
        "rho0": rho0, "w0": w0, "V1_unshifted": point.V1, "V2_unshifted": point.V2,
    }
    data = InteractionData(
        r0=float(r0), rho0=rho0, eta0=eta0, beta0=float(fluid.potential(eos, rho0)),
        V1_0=float(shifted.V1), V2_0=float(shifted.V2), a=a, Gamma0=G0,
        alpha_prime_0=sys_.alpha_prime_0, beta_prime_0=sys_.beta_prime_0,
        ahead_minus_0=sys_.ahead_minus_0, w0_unshifted=w0, diagnostics=diag,
    )
    return Setup(data, f1, f2, eos)
