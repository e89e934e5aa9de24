"""Command line: ``riemann``, ``solve``, ``validate`` and ``phi`` workflows.

Every command reads one JSON configuration, applies the command-line
overrides and writes its outputs below the output directory together with
the effective configuration. Exit status: 0 success, 1 failed validation
checks, 2 inadmissible input, 3 no convergence, 4 configuration or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
import time
from dataclasses import asdict, is_dataclass, replace
from pathlib import Path

import numpy as np

from . import config as config_mod
from . import jump
from .chart import phi_normalize
from .config import RunConfig
from .errors import ConfigError, ShockInteractError
from .fluid import PrimState
from .interaction import Setup, setup_interaction
from .jump import ShockPair
from .scheme import Solution, SolveReport
from .validate import Problem, run_validation

log = logging.getLogger("shockinteract")

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
FLOAT_FMT = "%.17e"


# -- serialization --------------------------------------------------------------


def jsonable(obj):
    """Plain JSON types; non-finite floats become ``None``."""
    if is_dataclass(obj) and not isinstance(obj, type):
        return jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def write_json(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(jsonable(doc), sort_keys=True, indent=2, allow_nan=False) + "\n")


def write_table(path: Path, header: list[str], columns: list[np.ndarray]) -> None:
    data = np.column_stack([np.asarray(c, dtype=float) for c in columns])
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in data:
            w.writerow([FLOAT_FMT % x for x in row])


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {out}: {exc.strerror}") from None
    return out


def _stamp(cfg: RunConfig, doc: dict) -> dict:
    return {"config_hash": config_mod.config_hash(cfg), **doc}


# -- workflows ---------------------------------------------------------------------


def interaction_summary(setup: Setup) -> dict:
    d, eos = setup.data, setup.eos
    ahead = [f.evaluate(0.0, d.r0).state for f in (setup.ahead1, setup.ahead2)]
    behind = PrimState(d.rho0, 0.0)
    det = {f"shock{k}": bool(jump.determinism(ShockPair(behind, PrimState(float(s.rho), float(s.w))), k, eos))
           for k, s in ((1, ahead[0]), (2, ahead[1]))}
    diag = d.diagnostics
    return {
        "rho0": d.rho0, "w0": d.w0_unshifted, "eta0": d.eta0, "beta0": d.beta0,
        "V1_0": d.V1_0, "V2_0": d.V2_0,
        "V1_0_unshifted": diag["V1_unshifted"], "V2_0_unshifted": diag["V2_unshifted"],
        "a": d.a, "Gamma0": d.Gamma0, "alpha_prime_0": d.alpha_prime_0, "beta_prime_0": d.beta_prime_0,
        "detM": diag["detM"], "detM_minus_identity": diag["detM_minus_identity"],
        "F1F2": diag["F1_0"] * diag["F2_0"], "F1F2_minus_a2": diag["F1F2_minus_a2"],
        "origin_jacobian": -2.0 / (d.eta0 * d.Gamma0),
        "determinism": det,
    }


def _setup(cfg: RunConfig) -> Setup:
    f1, f2 = cfg.build_fields()
    return setup_interaction(f1, f2, cfg.eos.build(), cfg.r0)


def _problem(cfg: RunConfig, setup: Setup) -> Problem:
    return Problem(setup, cfg.epsilon, cfg.iteration.build())


def cmd_riemann(cfg: RunConfig) -> int:
    setup = _setup(cfg)
    out = _out_dir(cfg)
    summary = interaction_summary(setup)
    write_json(out / "riemann.json", _stamp(cfg, {"interaction": summary}))
    print(f"rho0={summary['rho0']:.10g} a={summary['a']:.10g} Gamma0={summary['Gamma0']:.10g}"
          f" -> {out / 'riemann.json'}")
    return EXIT_OK


def solution_tables(sol: Solution, eos) -> dict:
    """Field and trace tables as ``name -> (header, columns)``."""
    f, g, tr = sol.fields, sol.fields.grid, sol.traces
    J1 = jump.J(tr.alpha1_plus, tr.beta1_plus, tr.alpha1_minus, tr.beta1_minus, eos)
    J2 = jump.J(tr.alpha2_plus, tr.beta2_plus, tr.alpha2_minus, tr.beta2_minus, eos)
    return {
        "fields.csv": (["u", "v", "t", "r", "alpha", "beta", "rho", "w"],
                       [g.u, g.v, sol.t, f.r, f.alpha, f.beta, sol.kin.rho, sol.kin.w]),
        "shock1.csv": (["u", "t", "r", "V", "J"], [g.u_trace, tr.t1, tr.r1, sol.V1, J1]),
        "shock2.csv": (["v", "t", "r", "V", "J"], [g.v_trace, tr.t2, tr.r2, sol.V2, J2]),
    }


def run_summary(sol: Solution, rep: SolveReport) -> dict:
    g = sol.fields.grid
    return {
        "grid": {"N": g.N, "n_nodes": g.n_nodes, "h": g.h, "hu": g.hu,
                 "epsilon": g.region.epsilon, "a": g.region.a},
        "iterations": rep.iterations, "converged": rep.converged,
        "deltas": rep.deltas, "contraction": rep.contraction, "norms": rep.norms,
        "r_checks": rep.r_checks, "residuals": rep.residuals,
    }


def cmd_solve(cfg: RunConfig) -> int:
    setup = _setup(cfg)
    out = _out_dir(cfg)
    start = time.perf_counter()
    sol, rep = _problem(cfg, setup).solve(cfg.N, cfg.probe.r_perturbation)
    for name, (header, cols) in solution_tables(sol, setup.eos).items():
        write_table(out / name, header, cols)
    doc = {"interaction": interaction_summary(setup), "run": run_summary(sol, rep)}
    write_json(out / "summary.json", _stamp(cfg, doc))
    # wall time goes to the log only so reruns give identical files
    log.info("solve finished in %.2f s", time.perf_counter() - start)
    print(f"converged in {rep.iterations} sweeps, {sol.fields.grid.n_nodes} nodes -> {out}")
    return EXIT_OK


def cmd_validate(cfg: RunConfig) -> int:
    setup = _setup(cfg)
    out = _out_dir(cfg)
    v = cfg.validation
    it = replace(cfg.iteration.build(), tol_fix=v.tol_fix)
    problem = Problem(setup, cfg.epsilon, it)
    report = run_validation(problem, v.N_list, v.gamma0_override,
                            cfg.probe.uniqueness_amplitude)
    doc = {"interaction": interaction_summary(setup), "N_list": v.N_list,
           "gamma0_override": v.gamma0_override, "report": report.to_dict()}
    write_json(out / "validation.json", _stamp(cfg, doc))
    for c in report.checks:
        status = "skip" if c.passed is None else ("pass" if c.passed else "FAIL")
        print(f"{status:4s}  {c.name:<20s} {c.value:.6g}  ({c.tolerance})")
    if not report.passed:
        print("failed checks: " + ", ".join(report.failed()), file=sys.stderr)
        return EXIT_CHECKS_FAILED
    return EXIT_OK


def cmd_phi(cfg: RunConfig) -> int:
    p = cfg.phi

    def f(x):
        return p.a * x + p.quadratic * x * x + p.cubic * x * x * x

    res = phi_normalize(f, p.x_max, p.a, p.n_max, p.tol, p.n_points)
    out = _out_dir(cfg)
    write_table(out / "phi.csv", ["x", "phi"], [res.x, res.phi])
    doc = {"a": res.a, "iterations": res.iterations, "deltas": res.deltas, "ratios": res.ratios,
           "phi0": res.phi0, "dphi0": res.dphi0, "conjugation_residual": res.conjugation_residual}
    write_json(out / "phi.json", _stamp(cfg, doc))
    print(f"phi: {res.iterations} iterates, phi'(0)={res.dphi0:.12g},"
          f" conjugation residual {res.conjugation_residual:.3e} -> {out}")
    return EXIT_OK


COMMANDS = {"riemann": cmd_riemann, "solve": cmd_solve, "validate": cmd_validate, "phi": cmd_phi}


# -- entry point -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shockinteract",
                                     description="Interaction of two spherical shocks in a barotropic fluid.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {"riemann": "solve the interaction point only",
             "solve": "run the fixed-point scheme and write field and trace tables",
             "validate": "refinement, asymptotic, Jacobian and uniqueness checks",
             "phi": "shock-straightening normalization of a scalar contraction"}
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", required=name != "phi", help="JSON run configuration")
        p.add_argument("--out", help="output directory (overrides 'out')")
        p.add_argument("--grid-n", type=int, help="grid subdivisions N (overrides 'N')")
        p.add_argument("--epsilon", type=float, help="region size in v (overrides 'epsilon')")
        p.add_argument("--tol", type=float, help="fixed-point tolerance (overrides 'iteration.tol_fix',"
                       " 'validation.tol_fix' and 'phi.tol')")
        p.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS,
                       help="log progress to stderr")
    return parser


def _report_error(exc: ShockInteractError) -> int:
    doc = {"error": exc.kind, "message": str(exc), "exit_code": exc.exit_code}
    ctx = {k: v for k, v in exc.context.items() if k in ("iteration", "count")}
    if ctx:
        doc["context"] = ctx
    print(json.dumps(jsonable(doc), sort_keys=True), file=sys.stderr)
    return exc.exit_code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_mod.load(args.config) if args.config else RunConfig()
        cfg = config_mod.effective(cfg, N=args.grid_n, epsilon=args.epsilon, tol=args.tol, out=args.out)
        code = COMMANDS[args.command](cfg)
        write_json(Path(cfg.out) / f"{args.command}.config.json", config_mod.to_dict(cfg))
        return code
    except ShockInteractError as exc:
        return _report_error(exc)
    except OSError as exc:
        return _report_error(ConfigError(f"I/O error: {exc}"))


if __name__ == "__main__":
    sys.exit(main())
