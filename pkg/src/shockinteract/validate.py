"""Post-solve checks: asymptotic form, Jacobian, refinement order, uniqueness."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .chart import Region, build_grid
from .errors import NoConvergence
from .interaction import Setup
from .scheme import IterationConfig, Solution, SolveReport, init_fields, iterate

ASYMPTOTIC_BAND = 4.0  # origin exclusion, in grid cells along each index direction
ASYMPTOTIC_STABILITY = 2.0
JACOBIAN_RTOL = 0.05
ORDER_RANGE = (1.7, 2.3)
RATIO_RANGE = (3.0, 5.0)
UNIQUENESS_FACTOR = 10.0
PDE_KEYS = ("r_u", "r_v", "alpha_v", "beta_u")


@dataclass(frozen=True)
class Problem:
    """A configured interaction: constants, shifted ahead fields and solver settings."""

    setup: Setup
    epsilon: float
    cfg: IterationConfig = IterationConfig()

    def solve(self, N: int, r_perturbation: float = 0.0,
              with_residuals: bool = True) -> tuple[Solution, SolveReport]:
        s = self.setup
        grid = build_grid(Region(self.epsilon, s.data.a), N)
        init = init_fields(s.data, grid, r_perturbation)
        return iterate(s.data, grid, s.ahead1, s.ahead2, s.eos, self.cfg, init, with_residuals)


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tolerance: str
    passed: bool | None  # None marks a check that was not run
    detail: dict = field(default_factory=dict)


@dataclass
class ValidationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed is not False for c in self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if c.passed is False]

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checks": [asdict(c) for c in self.checks]}


# -- asymptotic form ------------------------------------------------------


def asymptotic_quotients(sol: Solution, Gamma0: float | None = None,
                         band: float = ASYMPTOTIC_BAND) -> dict:
    """``sup |f - L_f| / v^2`` for ``r, t, alpha, beta`` away from the origin.

    Nodes closer to the origin than ``band`` cells in both index directions
    (``v < band * h`` and ``u < band * hu``) are excluded, where the quotient
    is a ratio of two roundoff-sized numbers.

    ``L_f`` is the predicted linear part built from the interaction constants;
    ``Gamma0`` may be overridden to test the sensitivity to a wrong constant.
    """
    f, g, d = sol.fields, sol.fields.grid, sol.data
    u, v = g.u, g.v
    G = d.Gamma0 if Gamma0 is None else float(Gamma0)
    phi0, psi0 = f.time_slopes
    # deviations are stored relative to the true-constant linear parts
    r_dev = f.rn + u / d.Gamma0 - u / G
    t_dev = sol.t_dev + phi0 * u + psi0 * v - (v - u / G) / d.eta0
    a_dev = f.da - d.alpha_prime_0 * u
    b_dev = f.db - d.beta_prime_0 * v
    keep = (v >= band * g.h) | (u >= band * g.hu)
    out = {}
    for name, dev in (("r", r_dev), ("t", t_dev), ("alpha", a_dev), ("beta", b_dev)):
        out[name] = float(np.max(np.abs(dev[keep]) / v[keep] ** 2))
    return out


def asymptotic_check(sol: Solution, sol_fine: Solution | None = None,
                     Gamma0: float | None = None) -> list[Check]:
    """Quotients are finite, and stable within a factor 2 under ``N -> 2N`` if a finer run is given."""
    q = asymptotic_quotients(sol, Gamma0)
    checks = []
    qf = asymptotic_quotients(sol_fine, Gamma0) if sol_fine is not None else None
    for name, val in q.items():
        finite = bool(np.isfinite(val))
        if qf is None:
            checks.append(Check(f"asymptotic_{name}", val, "finite", finite))
            continue
        lo, hi = sorted((val, qf[name]))
        ratio = hi / lo if lo > 0.0 else (1.0 if hi == 0.0 else np.inf)
        ok = finite and bool(np.isfinite(qf[name])) and ratio <= ASYMPTOTIC_STABILITY
        checks.append(Check(f"asymptotic_{name}", val, f"finite, ratio <= {ASYMPTOTIC_STABILITY}", ok,
                            {"fine": qf[name], "ratio": float(ratio)}))
    return checks


# -- Jacobian -----------------------------------------------------------------


def jacobian_field(sol: Solution) -> np.ndarray:
    """``det d(t, r)/d(u, v)`` at every node from second-order derivative fits."""
    f, g, d = sol.fields, sol.fields.grid, sol.data
    Du, Dv = g.derivative_operators()
    phi0, psi0 = f.time_slopes
    t_u, t_v = phi0 + Du @ sol.t_dev, psi0 + Dv @ sol.t_dev
    r_u, r_v = 1.0 / d.Gamma0 + Du @ f.rn, 1.0 + Dv @ f.rn
    return t_u * r_v - t_v * r_u


def jacobian_check(sol: Solution) -> Check:
    det = jacobian_field(sol)
    d = sol.data
    predicted = -2.0 / (d.eta0 * d.Gamma0)
    origin = float(det[sol.fields.grid.diag[0]])
    rel = abs(origin - predicted) / abs(predicted)
    min_abs = float(np.min(np.abs(det)))
    sign_const = bool(np.all(np.sign(det) == np.sign(predicted)))
    ok = rel <= JACOBIAN_RTOL and min_abs > 0.0 and sign_const
    return Check("jacobian", origin, f"rel err <= {JACOBIAN_RTOL}, min |det| > 0", ok,
                 {"predicted": predicted, "rel_err": rel, "min_abs": min_abs,
                  "max_abs": float(np.max(np.abs(det))), "sign_constant": sign_const})


# -- refinement ---------------------------------------------------------------


@dataclass(frozen=True)
class RefinementResult:
    N: list[int]
    h: list[float]
    residuals: dict  # key -> list over N
    ratios: dict  # key -> successive ratios
    orders: dict  # key -> least-squares slope of log residual vs log h
    solutions: list = field(default_factory=list, repr=False)


def refinement_study(problem: Problem, N_list, keep_solutions: bool = False) -> RefinementResult:
    N_list = [int(n) for n in N_list]
    if len(N_list) < 2:
        raise ValueError("a refinement study needs at least two resolutions")
    res = {k: [] for k in PDE_KEYS}
    res.update({"speed_shock1": [], "speed_shock2": []})
    hs, sols = [], []
    for N in N_list:
        sol, rep = problem.solve(N)
        R = rep.residuals
        for k in PDE_KEYS:
            res[k].append(R.pde[k])
        res["speed_shock1"].append(R.boundary_speed["shock1"])
        res["speed_shock2"].append(R.boundary_speed["shock2"])
        hs.append(R.h)
        if keep_solutions:
            sols.append((sol, rep))
    ratios, orders = {}, {}
    for k, vals in res.items():
        vals = np.asarray(vals)
        ratios[k] = (vals[:-1] / vals[1:]).tolist()
        orders[k] = float(np.polyfit(np.log(hs), np.log(vals), 1)[0])
    return RefinementResult(N_list, hs, res, ratios, orders, sols)


def refinement_checks(study: RefinementResult) -> list[Check]:
    checks = []
    for k in PDE_KEYS:
        order = study.orders[k]
        ratios = study.ratios[k]
        ok = ORDER_RANGE[0] <= order <= ORDER_RANGE[1] and all(
            RATIO_RANGE[0] <= q <= RATIO_RANGE[1] for q in ratios)
        checks.append(Check(f"order_{k}", order, f"order in {ORDER_RANGE}, ratios in {RATIO_RANGE}",
                            ok, {"ratios": ratios, "residuals": study.residuals[k]}))
    return checks


# -- uniqueness -----------------------------------------------------------------


def field_difference(a: Solution, b: Solution) -> float:
    fa, fb = a.fields, b.fields
    return float(max(np.max(np.abs(fa.rn - fb.rn)), np.max(np.abs(a.t_dev - b.t_dev)),
                     np.max(np.abs(fa.da - fb.da)), np.max(np.abs(fa.db - fb.db))))


def uniqueness_probe(problem: Problem, N: int, amplitude: float = 1e-3) -> Check:
    """Standard and ``amplitude * v**2``-perturbed initial ``r`` must reach the same fields."""
    tol = UNIQUENESS_FACTOR * problem.cfg.tol_fix
    try:
        ref, rep_ref = problem.solve(N, 0.0, with_residuals=False)
        per, rep_per = problem.solve(N, amplitude, with_residuals=False)
    except NoConvergence as exc:
        return Check("uniqueness", float("nan"), f"<= {tol:g}", None,
                     {"status": "inconclusive", "reason": str(exc)})
    delta = field_difference(ref, per)
    return Check("uniqueness", delta, f"<= {tol:g}", delta <= tol,
                 {"amplitude": amplitude, "iterations": [rep_ref.iterations, rep_per.iterations]})


def run_validation(problem: Problem, N_list, Gamma0_override: float | None = None,
                   amplitude: float = 1e-3) -> ValidationReport:
    """Refinement, asymptotic, Jacobian and uniqueness checks on one problem.

    ``Gamma0_override`` replaces the predicted constant in the asymptotic
    check only, which is how a wrong prediction is shown to be detected.
    """
    N_list = sorted(int(n) for n in N_list)
    report = ValidationReport()
    if len(N_list) >= 2:
        study = refinement_study(problem, N_list, keep_solutions=True)
        report.checks += refinement_checks(study)
        coarse, fine = study.solutions[-2][0], study.solutions[-1][0]
    else:
        report.checks.append(Check("refinement", float("nan"), "needs >= 2 resolutions", None,
                                   {"status": "not run"}))
        coarse, fine = problem.solve(N_list[0])[0], None
    report.checks += asymptotic_check(coarse, fine, Gamma0_override)
    report.checks.append(jacobian_check(fine if fine is not None else coarse))
    report.checks.append(uniqueness_probe(problem, N_list[0], amplitude))
    return report
