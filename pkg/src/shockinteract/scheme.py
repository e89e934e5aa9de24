"""Fixed-point iteration for the state behind both shocks on the lattice.

Each sweep uses only the previous iterate (Jacobi style):

1. kinematics: ``rho, w, c_in, c_out`` from ``(alpha, beta)``,
2. the time field ``t`` from ``phi = r_u / c_in`` and ``psi = r_v / c_out``,
3. behind and ahead traces along both shocks, shock speeds and the
   boundary ratios ``Gamma``,
4. the new ``r`` from its mixed-derivative identity and the shock
   boundary conditions,
5. the new boundary invariants from the shock relations and the interior
   invariants from the transport equations.

Fields are stored as deviations from the linear initial iterate
(``r - r0 - u/Gamma0 - v`` and the boundary traces minus ``beta0``) together
with ``P = dr/du`` and ``Q = dr/dv``. The invariants are split as
``alpha = alpha1_plus(u) + alpha_tilde`` and ``beta = beta2_plus(v) + beta_tilde``;
the u-spacing is tiny when ``a`` is small, and differencing the small tilde
parts instead of the full values avoids cancellation.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, replace

import numpy as np

from . import fluid, jump
from .ahead import AheadField, invariants_along
from .chart import INTERIOR, CharGrid
from .errors import (CharacteristicDegeneracy, NoConvergence, NonFinite, NonPositiveRadius,
                     ShockInteractError, SonicShock)
from .fluid import Eos, InvState, PrimState
from .interaction import InteractionData
from .jump import NEWTON_MAX_ITER, NEWTON_TOL, ShockPair

log = logging.getLogger(__name__)

DEGENERACY_RTOL = 1e-10
R_FORMS = ("direct", "lambda")
DELTA_KEYS = ("r", "alpha_tilde", "beta_tilde", "alpha1_plus", "beta2_plus")


@dataclass(frozen=True)
class IterationConfig:
    tol_fix: float = 1e-10
    max_iters: int = 100
    newton_tol: float = NEWTON_TOL
    newton_max_iter: int = NEWTON_MAX_ITER
    r_form: str = "direct"

    def __post_init__(self) -> None:
        if not self.tol_fix > 0.0:
            raise ValueError("tol_fix must be positive")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ValueError("max_iters must be a positive integer")
        if self.r_form not in R_FORMS:
            raise ValueError(f"r_form must be one of {R_FORMS}")


@dataclass(frozen=True)
class FieldSet:
    """One iterate on the lattice, stored as deviations from the origin values."""

    grid: CharGrid
    r0: float
    beta0: float
    Gamma0: float
    eta0: float
    rn: np.ndarray  # r - (r0 + u/Gamma0 + v)
    at: np.ndarray  # alpha_tilde, zero on u = v
    bt: np.ndarray  # beta_tilde, zero on u = a v
    P: np.ndarray  # dr/du
    Q: np.ndarray  # dr/dv
    tr1: np.ndarray  # alpha behind shock 1 minus beta0, on the diagonal trace
    tr2: np.ndarray  # beta behind shock 2 minus beta0, on the lower trace

    @property
    def da(self) -> np.ndarray:
        """``alpha - beta0``."""
        return self.tr1[self.grid.col_of] + self.at

    @property
    def db(self) -> np.ndarray:
        """``beta - beta0``."""
        return _lower_trace_on_nodes(self.grid, self.tr2) + self.bt

    @property
    def dr(self) -> np.ndarray:
        """``r - r0``."""
        return self.grid.u / self.Gamma0 + self.grid.v + self.rn

    @property
    def r(self) -> np.ndarray:
        return self.r0 + self.dr

    @property
    def time_slopes(self) -> tuple[float, float]:
        """``(t_u, t_v)`` of the linear initial iterate."""
        return -1.0 / (self.eta0 * self.Gamma0), 1.0 / self.eta0

    @property
    def alpha(self) -> np.ndarray:
        return self.beta0 + self.da

    @property
    def beta(self) -> np.ndarray:
        return self.beta0 + self.db

    @property
    def alpha1_plus(self) -> np.ndarray:
        return self.beta0 + self.tr1

    @property
    def beta2_plus(self) -> np.ndarray:
        return self.beta0 + self.tr2

    @property
    def alpha_tilde(self) -> np.ndarray:
        return self.at

    @property
    def beta_tilde(self) -> np.ndarray:
        return self.bt


def _lower_trace_on_nodes(grid: CharGrid, trace: np.ndarray) -> np.ndarray:
    """Lower-trace function of ``v`` sampled at every node's height."""
    out = np.empty(grid.n_nodes)
    lat = grid.row_of >= 0
    out[lat] = trace[grid.row_of[lat]]
    out[grid.diag] = grid.lower_at_diag_heights() @ trace
    return out


@dataclass(frozen=True)
class Kinematics:
    rho: np.ndarray
    w: np.ndarray
    eta: np.ndarray
    c_in: np.ndarray
    c_out: np.ndarray
    phi: np.ndarray
    psi: np.ndarray


@dataclass(frozen=True)
class Traces:
    """States behind (+) and ahead (-) of both shocks, with their (t, r)."""

    alpha1_plus: np.ndarray
    beta1_plus: np.ndarray
    alpha1_minus: np.ndarray
    beta1_minus: np.ndarray
    t1: np.ndarray
    r1: np.ndarray
    alpha2_plus: np.ndarray
    beta2_plus: np.ndarray
    alpha2_minus: np.ndarray
    beta2_minus: np.ndarray
    t2: np.ndarray
    r2: np.ndarray

    def pair(self, eos: Eos, family: int) -> ShockPair:
        if family == 1:
            ap, bp, am, bm = self.alpha1_plus, self.beta1_plus, self.alpha1_minus, self.beta1_minus
        else:
            ap, bp, am, bm = self.alpha2_plus, self.beta2_plus, self.alpha2_minus, self.beta2_minus
        return ShockPair(fluid.to_primitive(eos, InvState(ap, bp)),
                         fluid.to_primitive(eos, InvState(am, bm)))


@dataclass(frozen=True)
class Gammas:
    Gamma1: np.ndarray  # along u = v, function of u
    Gamma2: np.ndarray  # along u = a v, function of v
    gamma1: np.ndarray
    gamma2: np.ndarray


@dataclass
class SolveReport:
    iterations: int
    converged: bool
    deltas: list[dict]
    contraction: list[float]
    norms: list[dict]
    r_checks: list[dict]
    elapsed: float
    residuals: "ResidualReport | None" = None

    def delta_array(self) -> np.ndarray:
        return np.array([[d[k] for k in DELTA_KEYS] for d in self.deltas])


@dataclass(frozen=True)
class Solution:
    data: InteractionData
    fields: FieldSet
    t_dev: np.ndarray  # t minus its linear part
    kin: Kinematics
    traces: Traces
    V1: np.ndarray
    V2: np.ndarray
    gammas: Gammas

    @property
    def t(self) -> np.ndarray:
        phi0, psi0 = self.fields.time_slopes
        g = self.fields.grid
        return phi0 * g.u + psi0 * g.v + self.t_dev


# -- initialization ----------------------------------------------------------


def init_fields(data: InteractionData, grid: CharGrid, r_perturbation: float = 0.0) -> FieldSet:
    """Linear initial iterate; ``r_perturbation * v**2`` is optionally added to ``r``."""
    v = grid.v
    c = float(r_perturbation)
    P = np.full(grid.n_nodes, 1.0 / data.Gamma0)
    Q = 1.0 + 2.0 * c * v
    zero = np.zeros(grid.n_nodes)
    return FieldSet(grid, data.r0, data.beta0, data.Gamma0, data.eta0, c * v * v, zero, zero.copy(),
                    P, Q, data.alpha_prime_0 * grid.u_trace, data.beta_prime_0 * grid.v_trace)


# -- single-sweep building blocks --------------------------------------------


def kinematics(fields: FieldSet, eos: Eos, eta0: float | None = None) -> Kinematics:
    prim = fluid.to_primitive(eos, InvState(fields.alpha, fields.beta))
    rho, w = np.asarray(prim.rho), np.asarray(prim.w)
    eta = np.asarray(fluid.sound_speed(eos, rho))
    c_in, c_out = w - eta, w + eta
    ref = DEGENERACY_RTOL * (float(eta0) if eta0 is not None else float(np.max(eta)))
    if np.any(~(c_in < -ref)) or np.any(~(c_out > ref)):
        raise CharacteristicDegeneracy("characteristic speeds must satisfy c_in < 0 < c_out",
                                       min_abs_c_in=float(np.min(np.abs(c_in))),
                                       min_c_out=float(np.min(c_out)))
    return Kinematics(rho, w, eta, c_in, c_out, fields.P / c_in, fields.Q / c_out)


def time_deviation(fields: FieldSet, eos: Eos, kin: Kinematics | None = None) -> np.ndarray:
    """``t`` minus its linear part, integrated along the diagonal and then up each column."""
    grid = fields.grid
    kin = kin if kin is not None else kinematics(fields, eos)
    phi0, psi0 = fields.time_slopes
    g = (kin.phi[grid.diag] - phi0) + (kin.psi[grid.diag] - psi0)
    t_diag = grid.trace_cumtrapz(g, grid.hu)
    return t_diag[grid.col_of] + grid.column_cumtrapz(kin.psi - psi0)


def time_field(fields: FieldSet, eos: Eos, kin: Kinematics | None = None) -> np.ndarray:
    """``t`` from ``t_u = phi`` on the diagonal and ``t_v = psi`` up each column."""
    phi0, psi0 = fields.time_slopes
    g = fields.grid
    return phi0 * g.u + psi0 * g.v + time_deviation(fields, eos, kin)


def shock_traces(fields: FieldSet, t: np.ndarray, ahead1: AheadField, ahead2: AheadField,
                 eos: Eos) -> Traces:
    g = fields.grid
    d, lo = g.diag, g.lower
    r = fields.r
    a1m, b1m = invariants_along(ahead1, eos, t[d], r[d])
    a2m, b2m = invariants_along(ahead2, eos, t[lo], r[lo])
    return Traces(fields.alpha[d], fields.beta[d], np.asarray(a1m), np.asarray(b1m), t[d], r[d],
                  fields.alpha[lo], fields.beta[lo], np.asarray(a2m), np.asarray(b2m), t[lo], r[lo])


def shock_speeds(traces: Traces, eos: Eos) -> tuple[np.ndarray, np.ndarray]:
    V1 = np.asarray(jump.shock_speed(traces.pair(eos, 1)))
    V2 = np.asarray(jump.shock_speed(traces.pair(eos, 2)))
    return V1, V2


def _gamma_ratio(c_in, c_out, V):
    den_in, den_out = np.abs(c_in), np.abs(c_out - V)
    ref = np.maximum(np.abs(c_out), 1.0)
    if np.any(den_in <= 1e-12 * ref) or np.any(den_out <= 1e-12 * ref):
        raise SonicShock("boundary ratio undefined: sonic shock or stagnant behind state")
    return c_out / c_in * (V - c_in) / (c_out - V)


def gammas(traces: Traces, V1: np.ndarray, V2: np.ndarray, eos: Eos, grid: CharGrid) -> Gammas:
    """Boundary ratios ``Gamma1(u)``, ``Gamma2(v)`` and ``gamma1 = Gamma2/Gamma1`` etc."""
    p1, p2 = traces.pair(eos, 1).plus, traces.pair(eos, 2).plus
    ci1, co1 = fluid.char_speeds(eos, p1)
    ci2, co2 = fluid.char_speeds(eos, p2)
    G1 = _gamma_ratio(np.asarray(ci1), np.asarray(co1), V1)
    G2 = grid.region.a * _gamma_ratio(np.asarray(ci2), np.asarray(co2), V2)
    # Gamma2 at v = u_i needs the lower trace at the diagonal heights; the lower
    # node j and the diagonal node j share u = a v_j, so gamma2 is pointwise.
    g1 = (grid.lower_at_diag_heights() @ G2) / G1
    g2 = G2 / G1
    return Gammas(G1, G2, g1, g2)


def mixed_coefficient(fields: FieldSet, kin: Kinematics, eos: Eos) -> np.ndarray:
    """``M = mu r_u + nu r_v``, the right side of ``r_uv = M``."""
    Du, Dv = fields.grid.derivative_operators()
    (cin_a, cin_b), (cout_a, cout_b) = fluid.speed_gradients(eos, PrimState(kin.rho, kin.w))
    da, db = fields.da, fields.db
    # alpha_v and beta_u only see the tilde parts
    dcin_dv = cin_a * (Dv @ fields.at) + cin_b * (Dv @ db)
    dcout_du = cout_a * (Du @ da) + cout_b * (Du @ fields.bt)
    span = kin.c_out - kin.c_in
    mu = kin.c_out / (span * kin.c_in) * dcin_dv
    nu = -kin.c_in / (span * kin.c_out) * dcout_du
    return mu * fields.P + nu * fields.Q


def update_r(fields: FieldSet, M: np.ndarray, gam: Gammas, data: InteractionData,
             form: str = "direct") -> tuple[np.ndarray, np.ndarray, np.ndarray, dict]:
    """New ``(r - r0 - u/Gamma0 - v, P, Q)`` and consistency diagnostics.

    ``form="direct"`` evaluates the trace functions through the closed forms
    of their antiderivatives; ``form="lambda"`` integrates the trace
    derivatives ``Lambda`` with the trapezoid rule. Both share the fixed point.
    """
    g = fields.grid
    a = g.region.a
    Ly = g.lower_at_diag_heights()
    E = g.extra_row_operator()
    EM = E @ M
    K = g.column_totals(M)
    P_low_y = Ly @ fields.P[g.lower]
    Q_diag = fields.Q[g.diag]
    if form == "direct":
        col_base = gam.gamma1 * P_low_y + EM / gam.Gamma1
        low_base = gam.gamma2 * Q_diag + gam.Gamma2 * K
    elif form == "lambda":
        ops = g.lsq_operators()
        dg1 = np.gradient(gam.gamma1, g.hu, edge_order=2)
        dg2 = np.gradient(gam.gamma2, g.h, edge_order=2)
        Pu_low_y = Ly @ (ops["u"] @ fields.P)[g.lower]
        M_low_y = Ly @ M[g.lower]
        Qv_diag = (ops["v"] @ fields.Q)[g.diag]
        lam1 = dg1 * P_low_y + gam.gamma1 * a * Pu_low_y + gam.gamma1 * M_low_y
        lam2 = dg2 * Q_diag + gam.gamma2 * a * Qv_diag + gam.gamma2 * a * M[g.diag]
        col_base = 1.0 / data.Gamma0 + g.trace_cumtrapz(lam1, g.hu) + EM / gam.Gamma1
        low_base = 1.0 + g.trace_cumtrapz(lam2, g.h) + gam.Gamma2 * K
    else:
        raise ValueError(f"unknown r_form {form!r}")
    P = col_base[g.col_of] + g.column_cumtrapz(M)
    Q = np.empty(g.n_nodes)
    lat = g.row_of >= 0
    Q[lat] = low_base[g.row_of[lat]] + g.row_cumtrapz(M)[lat]
    Q[g.diag[1:]] = (Ly @ low_base + EM)[1:]
    # r minus its linear part: along the diagonal, then up the columns
    Pn, Qn = P - 1.0 / data.Gamma0, Q - 1.0
    rn_diag = g.trace_cumtrapz(Pn[g.diag] + Qn[g.diag], g.hu)
    rn = rn_diag[g.col_of] + g.column_cumtrapz(Qn)
    # second reconstruction: along the lower shock, then along rows
    rn_low = g.trace_cumtrapz(a * Pn[g.lower] + Qn[g.lower], g.h)
    alt = rn_low[g.row_of[lat]] + g.row_cumtrapz(Pn)[lat]
    Dv = g.derivative_operators()[1]
    interior = g.kind == INTERIOR
    checks = {
        "path_mismatch": float(np.max(np.abs(alt - rn[lat]))),
        "mixed_residual": float(np.max(np.abs((Dv @ P - M)[interior]))) if interior.any() else 0.0,
    }
    return rn, P, Q, checks


def update_invariants(fields: FieldSet, kin: Kinematics, traces: Traces, eos: Eos,
                      cfg: IterationConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """New boundary invariants (shock relations) and interior invariants (transport)."""
    g = fields.grid
    r = fields.r
    if np.any(~(r > 0.0)):
        raise NonPositiveRadius("radius field left r > 0", r_min=float(np.min(r)))
    kw = dict(tol=cfg.newton_tol, max_iter=cfg.newton_max_iter)
    a1 = jump.solve_H1(traces.beta1_plus, traces.alpha1_minus, traces.beta1_minus, eos,
                       guess=fields.alpha1_plus, **kw)
    b2 = jump.solve_H2(traces.alpha2_plus, traces.alpha2_minus, traces.beta2_minus, eos,
                       guess=fields.beta2_plus, **kw)
    tr1 = np.asarray(a1) - fields.beta0
    tr2 = np.asarray(b2) - fields.beta0
    A = -2.0 * kin.eta * kin.w / r
    at = g.column_cumtrapz(A * kin.psi)
    bt = np.empty(g.n_nodes)
    lat = g.row_of >= 0
    bt[lat] = g.row_cumtrapz(A * kin.phi)[lat]
    bt[g.diag] = g.extra_row_operator() @ (A * kin.phi)
    return tr1, tr2, at, bt


def discrete_norms(fields: FieldSet) -> dict:
    """Sup norms of second derivatives of ``r``, the tilde fields and the traces."""
    g = fields.grid
    ops = g.lsq_operators()

    def norm0(f):
        return float(max(np.max(np.abs(ops[k] @ f)) for k in ("uu", "uv", "vv")))

    r_norm = float(max(np.max(np.abs(ops["u"] @ fields.P)), np.max(np.abs(ops["v"] @ fields.P)),
                       np.max(np.abs(ops["v"] @ fields.Q))))
    return {
        "r": r_norm,
        "alpha_tilde": norm0(fields.alpha_tilde),
        "beta_tilde": norm0(fields.beta_tilde),
        "alpha1_plus": float(np.max(np.abs(np.diff(fields.tr1, 2)))) / g.hu**2,
        "beta2_plus": float(np.max(np.abs(np.diff(fields.tr2, 2)))) / g.h**2,
    }


@dataclass(frozen=True)
class Sweep:
    kin: Kinematics
    t_dev: np.ndarray
    traces: Traces
    V1: np.ndarray
    V2: np.ndarray
    gammas: Gammas
    M: np.ndarray


def evaluate_iterate(fields: FieldSet, data: InteractionData, ahead1: AheadField,
                     ahead2: AheadField, eos: Eos) -> Sweep:
    """All quantities of one iterate that the next sweep consumes."""
    kin = kinematics(fields, eos, data.eta0)
    t_dev = time_deviation(fields, eos, kin)
    phi0, psi0 = fields.time_slopes
    t = phi0 * fields.grid.u + psi0 * fields.grid.v + t_dev
    tr = shock_traces(fields, t, ahead1, ahead2, eos)
    V1, V2 = shock_speeds(tr, eos)
    gam = gammas(tr, V1, V2, eos, fields.grid)
    M = mixed_coefficient(fields, kin, eos)
    return Sweep(kin, t_dev, tr, V1, V2, gam, M)


def sweep(fields: FieldSet, data: InteractionData, ahead1: AheadField, ahead2: AheadField,
          eos: Eos, cfg: IterationConfig) -> tuple[FieldSet, Sweep, dict]:
    ev = evaluate_iterate(fields, data, ahead1, ahead2, eos)
    rn, P, Q, checks = update_r(fields, ev.M, ev.gammas, data, cfg.r_form)
    tr1, tr2, at, bt = update_invariants(fields, ev.kin, ev.traces, eos, cfg)
    new = replace(fields, rn=rn, at=at, bt=bt, P=P, Q=Q, tr1=tr1, tr2=tr2)
    for name in ("rn", "at", "bt", "P", "Q", "tr1", "tr2"):
        if not np.all(np.isfinite(getattr(new, name))):
            raise NonFinite(f"non-finite values in {name}")
    return new, ev, checks


def field_deltas(old: FieldSet, new: FieldSet) -> dict:
    return {
        "r": float(np.max(np.abs(new.rn - old.rn))),
        "alpha_tilde": float(np.max(np.abs(new.at - old.at))),
        "beta_tilde": float(np.max(np.abs(new.bt - old.bt))),
        "alpha1_plus": float(np.max(np.abs(new.tr1 - old.tr1))),
        "beta2_plus": float(np.max(np.abs(new.tr2 - old.tr2))),
    }


def iterate(data: InteractionData, grid: CharGrid, ahead1: AheadField, ahead2: AheadField,
            eos: Eos, cfg: IterationConfig = IterationConfig(), init: FieldSet | None = None,
            with_residuals: bool = True) -> tuple[Solution, SolveReport]:
    """Run sweeps until the largest monitored sup-norm change is at most ``tol_fix``.

    Ahead fields must be given in the frame where the behind velocity at the
    interaction point vanishes (see ``interaction.setup_interaction``).
    """
    start = time.perf_counter()
    fields = init if init is not None else init_fields(data, grid)
    deltas, norms, checks, contraction = [], [], [], []
    converged = False
    for m in range(int(cfg.max_iters)):
        try:
            new, _, chk = sweep(fields, data, ahead1, ahead2, eos, cfg)
        except ShockInteractError as exc:
            exc.context["iteration"] = m
            exc.context["deltas"] = deltas
            raise
        d = field_deltas(fields, new)
        d["max"] = max(d[k] for k in DELTA_KEYS)
        deltas.append(d)
        checks.append(chk)
        norms.append(discrete_norms(new))
        if len(deltas) > 1 and deltas[-2]["max"] > 0.0:
            contraction.append(d["max"] / deltas[-2]["max"])
        log.debug("iteration %d: max delta %.3e", m + 1, d["max"])
        fields = new
        if d["max"] <= cfg.tol_fix:
            converged = True
            break
    if not converged:
        raise NoConvergence(f"no convergence to tol_fix={cfg.tol_fix} in {cfg.max_iters} sweeps",
                            deltas=deltas, contraction=contraction)
    ev = evaluate_iterate(fields, data, ahead1, ahead2, eos)
    sol = Solution(data, fields, ev.t_dev, ev.kin, ev.traces, ev.V1, ev.V2, ev.gammas)
    report = SolveReport(len(deltas), converged, deltas, contraction, norms, checks,
                         time.perf_counter() - start)
    if with_residuals:
        report.residuals = residuals(sol, eos)
    return sol, report


# -- diagnostics --------------------------------------------------------------


@dataclass(frozen=True)
class ResidualReport:
    pde: dict  # sup norms of the four characteristic/transport residuals
    boundary_speed: dict  # |dr/ds - V dt/ds| along each shock
    boundary_ratio: dict  # |r_v - Gamma r_u| along each shock
    jump_abs: dict  # sup |J| along each shock
    point: dict  # interaction-point conditions
    determinism: dict  # strict admissibility at every trace node
    mixed_identity: float  # sup |r_uv - (mu r_u + nu r_v)| on interior nodes
    h: float


def _centered(L: np.ndarray, axis: int, step: float) -> np.ndarray:
    out = np.full(L.shape, np.nan)
    if axis == 0:
        out[1:-1, :] = (L[2:, :] - L[:-2, :]) / (2.0 * step)
    else:
        out[:, 1:-1] = (L[:, 2:] - L[:, :-2]) / (2.0 * step)
    return out


def residuals(sol: Solution, eos: Eos) -> ResidualReport:
    """Check the solution against the full problem statement."""
    f, g, data = sol.fields, sol.fields.grid, sol.data
    lat = g.lattice_array
    # alpha_v = alpha_tilde_v and beta_u = beta_tilde_u on lattice lines; the
    # linear parts of r and t are differentiated exactly
    r, t, at, bt = lat(f.rn), lat(sol.t_dev), lat(f.at), lat(f.bt)
    phi0, psi0 = f.time_slopes
    cin, cout = lat(sol.kin.c_in), lat(sol.kin.c_out)
    A = -2.0 * lat(sol.kin.eta) * lat(sol.kin.w) / lat(f.r)
    ru, rv = 1.0 / data.Gamma0 + _centered(r, 0, g.hu), 1.0 + _centered(r, 1, g.h)
    tu, tv = phi0 + _centered(t, 0, g.hu), psi0 + _centered(t, 1, g.h)
    av, bu = _centered(at, 1, g.h), _centered(bt, 0, g.hu)

    def sup(x):
        x = x[np.isfinite(x)]
        return float(np.max(np.abs(x))) if x.size else float("nan")

    pde = {
        "r_u": sup(ru - cin * tu),
        "r_v": sup(rv - cout * tv),
        "alpha_v": sup(av - A * tv),
        "beta_u": sup(bu - A * tu),
    }
    tr = sol.traces
    a = g.region.a

    def slope(x, step):
        return np.gradient(x, step, edge_order=2)

    rn, td = f.rn, sol.t_dev
    dr1 = 1.0 / data.Gamma0 + 1.0 + slope(rn[g.diag], g.hu)
    dt1 = phi0 + psi0 + slope(td[g.diag], g.hu)
    dr2 = a / data.Gamma0 + 1.0 + slope(rn[g.lower], g.h)
    dt2 = a * phi0 + psi0 + slope(td[g.lower], g.h)
    speed = {"shock1": float(np.max(np.abs(dr1 - sol.V1 * dt1))),
             "shock2": float(np.max(np.abs(dr2 - sol.V2 * dt2)))}
    ratio = {"shock1": float(np.max(np.abs(f.Q[g.diag] - sol.gammas.Gamma1 * f.P[g.diag]))),
             "shock2": float(np.max(np.abs(f.Q[g.lower] - sol.gammas.Gamma2 * f.P[g.lower])))}
    J1 = jump.J(tr.alpha1_plus, tr.beta1_plus, tr.alpha1_minus, tr.beta1_minus, eos)
    J2 = jump.J(tr.alpha2_plus, tr.beta2_plus, tr.alpha2_minus, tr.beta2_minus, eos)
    jabs = {"shock1": float(np.max(np.abs(J1))), "shock2": float(np.max(np.abs(J2)))}
    Du, Dv = g.derivative_operators()
    o = g.diag[0]
    point = {
        "alpha_origin_err": float(abs(f.da[o])),
        "beta_origin_err": float(abs(f.db[o])),
        "r_origin_err": float(abs(f.dr[o])),
        "t_origin_err": float(abs(sol.t_dev[o])),
        "r_u_origin_err": float(abs(f.P[o] - 1.0 / data.Gamma0)),
        "r_v_origin_err": float(abs(f.Q[o] - 1.0)),
        "alpha_u_origin_err": float(abs((Du @ f.da)[o] - data.alpha_prime_0)),
        "beta_v_origin_err": float(abs((Dv @ f.db)[o] - data.beta_prime_0)),
        "V1_origin_err": float(abs(sol.V1[0] - data.V1_0)),
        "V2_origin_err": float(abs(sol.V2[0] - data.V2_0)),
    }
    det1 = np.atleast_1d(jump.determinism(tr.pair(eos, 1), 1, eos))
    det2 = np.atleast_1d(jump.determinism(tr.pair(eos, 2), 2, eos))
    determ = {"shock1": bool(np.all(det1)), "shock2": bool(np.all(det2))}
    interior = g.kind == INTERIOR
    ev_M = mixed_coefficient(f, sol.kin, eos)
    mixed = float(np.max(np.abs((Dv @ f.P - ev_M)[interior]))) if interior.any() else 0.0
    return ResidualReport(pde, speed, ratio, jabs, point, determ, mixed, g.h)
