"""Acceptance criteria, one test each, at their stated tolerances.

Each test records a one-line verdict which is printed as it runs and again
in the terminal summary.
"""

import time

import numpy as np

import oracles
from conftest import ACCEPTANCE_LINES, EPSILON, STUDY_TOL
from shockinteract import chart, interaction, jump, problems, validate
from shockinteract.ahead import ConstantField, Side
from shockinteract.errors import InadmissibleError
from shockinteract.fluid import Eos, PrimState
from shockinteract.jump import ShockPair
from shockinteract.scheme import IterationConfig
from shockinteract.validate import Problem


def record(k: int, ok: bool, text: str) -> None:
    line = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {text}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def random_constant_setups(rng, n):
    out = []
    while len(out) < n:
        eos = Eos(float(rng.choice([1.4, 2.0])), 1.0)
        f1 = ConstantField(rng.uniform(0.5, 2.0), rng.uniform(0.05, 1.0), Side.LEFT)
        f2 = ConstantField(rng.uniform(0.5, 2.0), -rng.uniform(0.05, 1.0), Side.RIGHT)
        try:
            out.append(interaction.setup_interaction(f1, f2, eos, rng.uniform(0.5, 3.0)))
        except InadmissibleError:
            continue
    return out


def test_c01_point_identities(rng):
    start = time.perf_counter()
    setups = random_constant_setups(rng, 50)
    err_F = max(abs(s.data.diagnostics["F1_0"] * s.data.diagnostics["F2_0"] - s.data.a**2) for s in setups)
    err_M = max(abs(s.data.diagnostics["detM"] - (1.0 - s.data.a**3)) for s in setups)
    elapsed = time.perf_counter() - start
    ok = err_F <= 1e-10 and err_M <= 1e-10 and elapsed < 5.0
    record(1, ok, f"max|F1F2-a^2|={err_F:.1e} max|detM-(1-a^3)|={err_M:.1e} ({elapsed:.2f} s)")
    assert ok


def test_c02_symmetric_point_oracle():
    eos = Eos(2.0, 1.0)
    start = time.perf_counter()
    p = interaction.solve_point(PrimState(1.0, 0.4), PrimState(1.0, -0.4), eos)
    elapsed = time.perf_counter() - start
    rho_ref, V_ref = oracles.symmetric_point(0.4)
    rel_rho = abs(p.behind.rho - rho_ref) / rho_ref
    rel_V = abs(p.V1 - V_ref) / abs(V_ref)
    det = [bool(jump.determinism(ShockPair(p.behind, ahead), k, eos))
           for k, ahead in ((1, PrimState(1.0, 0.4)), (2, PrimState(1.0, -0.4)))]
    ok = (rel_rho <= 1e-6 and rel_V <= 1e-6 and abs(p.behind.w) <= 1e-12
          and abs(p.V1 + p.V2) <= 1e-10 and all(det) and elapsed < 1.0)
    record(2, ok, f"rho0={p.behind.rho:.8f} V1={p.V1:.8f} |w0|={abs(p.behind.w):.1e}"
                  f" |V1+V2|={abs(p.V1 + p.V2):.1e} determinism={det}")
    assert ok


def test_c03_jump_partials(rng):
    start = time.perf_counter()
    worst = 0.0
    for d in oracles.random_hugoniot_pairs(rng, 100):
        eos = Eos(d["gamma"])
        pair = ShockPair(PrimState(d["rho_p"], d["w_p"]), PrimState(d["rho_m"], d["w_m"]))
        x = np.array(oracles.invariants(d["rho_p"], d["w_p"], d["gamma"])
                     + oracles.invariants(d["rho_m"], d["w_m"], d["gamma"]))
        fd = oracles.fd_gradient(lambda y: jump.J(*y, eos), x)
        got = (jump.dJ_dalpha_plus(pair, eos), jump.dJ_dbeta_plus(pair, eos))
        worst = max(worst, abs(got[0] - fd[0]) / abs(fd[0]), abs(got[1] - fd[1]) / abs(fd[1]))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-5 and elapsed < 5.0
    record(3, ok, f"max rel err vs centered FD {worst:.1e} on 100 pairs ({elapsed:.2f} s)")
    assert ok


def test_c04_scheme_convergence(sym_setup):
    start = time.perf_counter()
    p = Problem(sym_setup, EPSILON, IterationConfig(tol_fix=1e-10, max_iters=50))
    _, rep = p.solve(64, with_residuals=False)
    elapsed = time.perf_counter() - start
    after3 = rep.contraction[2:]
    ok = rep.converged and rep.iterations <= 50 and max(after3) < 1.0 and elapsed < 60.0
    record(4, ok, f"{rep.iterations} sweeps, max contraction after 3 sweeps {max(after3):.3f}"
                  f" ({elapsed:.2f} s)")
    assert ok


def test_c05_residual_refinement(sym_setup):
    start = time.perf_counter()
    p = Problem(sym_setup, EPSILON, IterationConfig(tol_fix=STUDY_TOL))
    study = validate.refinement_study(p, [32, 64, 128], keep_solutions=True)
    elapsed = time.perf_counter() - start
    ratios = {k: study.ratios[k] for k in validate.PDE_KEYS}
    pde_ok = all(3.0 <= q <= 5.0 for qs in ratios.values() for q in qs)
    R = [rep.residuals for _, rep in study.solutions]
    jmax = max(max(r.jump_abs.values()) for r in R)
    # O(h^2): halving h cuts the boundary-speed residual by about four
    speed = [study.ratios["speed_shock1"], study.ratios["speed_shock2"]]
    speed_ok = all(3.0 <= q <= 5.0 for qs in speed for q in qs)
    det_ok = all(r.determinism["shock1"] and r.determinism["shock2"] for r in R)
    ok = pde_ok and jmax <= 1e-8 and speed_ok and det_ok and elapsed < 300.0
    text = " ".join(f"{k}:{'/'.join(f'{q:.2f}' for q in qs)}" for k, qs in ratios.items())
    record(5, ok, f"ratios {text}; max|J|={jmax:.1e}; speed ratios"
                  f" {'/'.join(f'{q:.2f}' for qs in speed for q in qs)}; determinism={det_ok}"
                  f" ({elapsed:.1f} s)")
    assert ok


def test_c06_asymptotic_form(sym_solutions):
    worst = 0.0
    finite = True
    for N in (32, 64):
        for c in validate.asymptotic_check(sym_solutions[N][0], sym_solutions[2 * N][0]):
            finite &= bool(np.isfinite(c.value) and np.isfinite(c.detail["fine"]))
            worst = max(worst, c.detail["ratio"])
    q = validate.asymptotic_quotients(sym_solutions[128][0])
    ok = finite and worst <= 2.0
    record(6, ok, "quotients at N=128 " + " ".join(f"{k}={v:.3f}" for k, v in q.items())
           + f"; worst N->2N ratio {worst:.4f}")
    assert ok


def test_c07_jacobian(sym_solutions):
    c = validate.jacobian_check(sym_solutions[64][0])
    predicted = abs(c.detail["predicted"])
    # bounded away from zero: no node below half the predicted magnitude
    ok = c.passed and c.detail["min_abs"] >= 0.5 * predicted
    record(7, ok, f"origin det {c.value:.5f} vs {c.detail['predicted']:.5f}"
                  f" (rel {c.detail['rel_err']:.1e}); |det| in [{c.detail['min_abs']:.4f},"
                  f" {c.detail['max_abs']:.4f}]")
    assert ok


def test_c08_phi_normalization():
    start = time.perf_counter()
    res = chart.phi_normalize(lambda x: 0.5 * x + x * x, 0.1, 0.5)
    elapsed = time.perf_counter() - start
    tail = np.asarray(res.ratios)[2:-3]
    geometric = bool(tail.size and np.all(tail < 1.0) and np.ptp(tail) <= 0.1)
    ok = (res.conjugation_residual <= 1e-8 and abs(res.dphi0 - 1.0) <= 1e-6
          and geometric and elapsed < 1.0)
    record(8, ok, f"{res.iterations} iterates, delta ratios {tail.min():.3f}..{tail.max():.3f},"
                  f" residual {res.conjugation_residual:.1e}, phi'(0)-1={res.dphi0 - 1.0:.1e}"
                  f" ({elapsed:.3f} s)")
    assert ok


def test_c09_uniqueness(sym_problem):
    c = validate.uniqueness_probe(sym_problem, 64, amplitude=1e-3)
    tol = 10.0 * sym_problem.cfg.tol_fix
    ok = bool(c.passed) and c.value <= tol
    record(9, ok, f"max field difference {c.value:.1e} <= {tol:.0e},"
                  f" sweeps {c.detail['iterations']}")
    assert ok


def test_c10_source_scaling(eos):
    sups = {}
    for r0 in (1.0, 2.0):
        f1, f2 = problems.symmetric_fields(r0, r_ref_coefficients=1.0)
        s = interaction.setup_interaction(f1, f2, eos, r0)
        sol, _ = Problem(s, EPSILON, IterationConfig(tol_fix=1e-10)).solve(64, with_residuals=False)
        _, Dv = sol.fields.grid.derivative_operators()
        sups[r0] = float(np.max(np.abs(Dv @ sol.fields.da)))
    ratio = sups[1.0] / sups[2.0]
    ok = abs(ratio - 2.0) <= 0.15 * 2.0
    record(10, ok, f"sup|alpha_v| r0=1: {sups[1.0]:.5e}, r0=2: {sups[2.0]:.5e}, ratio {ratio:.4f}")
    assert ok
