"""Jump conditions across a shock and the implicit shock relations.

Brackets are ``[f] = f_plus - f_minus`` with *plus* the state behind the
shock and *minus* the state ahead. All routines broadcast over arrays so a
whole boundary trace can be processed in one call.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import fluid
from .errors import DegenerateJump, InadmissibleBranch, NoConvergence, PotentialOutOfRange, SonicShock
from .fluid import Eos, PrimState

RHO_JUMP_RTOL = 1e-9
NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 50
BRENT_RTOL = 4.0 * np.finfo(float).eps  # smallest relative tolerance brentq accepts


class Family(enum.Enum):
    LEFT = 1  # shock 1, moves into the fluid on its left
    RIGHT = 2  # shock 2

    @classmethod
    def parse(cls, tag: "Family | str | int") -> "Family":
        if isinstance(tag, Family):
            return tag
        key = str(tag).strip().lower()
        if key in ("1", "left"):
            return cls.LEFT
        if key in ("2", "right"):
            return cls.RIGHT
        raise ValueError(f"unknown shock family {tag!r}")


@dataclass(frozen=True)
class ShockPair:
    plus: PrimState
    minus: PrimState


def _arr(x) -> np.ndarray:
    return np.asarray(x, dtype=float)


def _fluxes(eos: Eos, rho: np.ndarray, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Mass flux and momentum flux."""
    return rho * w, rho * w * w + eos.kappa * rho**eos.gamma


def _I(eos, rp, wp, rm, wm):
    mp, ep = _fluxes(eos, rp, wp)
    mm, em = _fluxes(eos, rm, wm)
    return (mp - mm) ** 2 - (ep - em) * (rp - rm)


def _I_partials(eos, rp, wp, rm, wm):
    """Partials of I with respect to (rho+, w+, rho-, w-)."""
    mp, ep = _fluxes(eos, rp, wp)
    mm, em = _fluxes(eos, rm, wm)
    dm, de, dr = mp - mm, ep - em, rp - rm
    c2p = eos.gamma * eos.kappa * rp ** (eos.gamma - 1.0)
    c2m = eos.gamma * eos.kappa * rm ** (eos.gamma - 1.0)
    i_rp = 2.0 * dm * wp - (wp * wp + c2p) * dr - de
    i_wp = 2.0 * dm * rp - 2.0 * rp * wp * dr
    i_rm = -2.0 * dm * wm + (wm * wm + c2m) * dr + de
    i_wm = -2.0 * dm * rm + 2.0 * rm * wm * dr
    return i_rp, i_wp, i_rm, i_wm


def flux_scale(eos: Eos, minus: PrimState) -> np.ndarray:
    """Natural magnitude of I, used to make tolerances relative."""
    rho = _arr(minus.rho)
    eta = _arr(fluid.sound_speed(eos, rho))
    return (rho * (np.abs(_arr(minus.w)) + eta)) ** 2


def hugoniot_I(pair: ShockPair, eos: Eos):
    """``[rho w]^2 - [rho w^2 + p][rho]``; zero on the Hugoniot locus."""
    rp, rm = fluid._check_rho(pair.plus.rho), fluid._check_rho(pair.minus.rho)
    return fluid._out(_I(eos, rp, _arr(pair.plus.w), rm, _arr(pair.minus.w)))


def _speed(rp, wp, rm, wm, strict=True):
    dr = rp - rm
    bad = np.abs(dr) <= RHO_JUMP_RTOL * np.maximum(rp, rm)
    if strict and np.any(bad):
        raise DegenerateJump("density jump vanishes; shock speed undefined")
    with np.errstate(divide="ignore", invalid="ignore"):
        return (rp * wp - rm * wm) / dr


def shock_speed(pair: ShockPair):
    """``V = [rho w] / [rho]``."""
    return fluid._out(_speed(_arr(pair.plus.rho), _arr(pair.plus.w),
                             _arr(pair.minus.rho), _arr(pair.minus.w)))


def J(alpha_plus, beta_plus, alpha_minus, beta_minus, eos: Eos):
    """``I`` expressed in Riemann invariants."""
    p = fluid.to_primitive(eos, fluid.InvState(alpha_plus, beta_plus))
    m = fluid.to_primitive(eos, fluid.InvState(alpha_minus, beta_minus))
    return fluid._out(_I(eos, _arr(p.rho), _arr(p.w), _arr(m.rho), _arr(m.w)))


def J_gradient(alpha_plus, beta_plus, alpha_minus, beta_minus, eos: Eos):
    """Exact partials of J with respect to all four invariants.

    Valid anywhere (not only on the Hugoniot locus); obtained by the chain
    rule through ``d(rho, w)/d(alpha, beta)``.
    """
    p = fluid.to_primitive(eos, fluid.InvState(alpha_plus, beta_plus))
    m = fluid.to_primitive(eos, fluid.InvState(alpha_minus, beta_minus))
    rp, wp, rm, wm = _arr(p.rho), _arr(p.w), _arr(m.rho), _arr(m.w)
    i_rp, i_wp, i_rm, i_wm = _I_partials(eos, rp, wp, rm, wm)
    kp = rp / (2.0 * _arr(fluid.sound_speed(eos, rp)))
    km = rm / (2.0 * _arr(fluid.sound_speed(eos, rm)))
    return (
        kp * i_rp + 0.5 * i_wp,
        kp * i_rp - 0.5 * i_wp,
        km * i_rm + 0.5 * i_wm,
        km * i_rm - 0.5 * i_wm,
    )


def _pair_speeds(pair: ShockPair, eos: Eos):
    rp, wp = _arr(pair.plus.rho), _arr(pair.plus.w)
    rm, wm = _arr(pair.minus.rho), _arr(pair.minus.w)
    V = _speed(rp, wp, rm, wm)
    eta_p = _arr(fluid.sound_speed(eos, rp))
    eta_m = _arr(fluid.sound_speed(eos, rm))
    return V, wp - eta_p, wp + eta_p, wm - eta_m, wm + eta_m, eta_p


def dJ_dalpha_plus(pair: ShockPair, eos: Eos):
    """Closed form on the Hugoniot locus: ``-([rho] rho+ / 2 eta+) (c_out+ - V)^2``."""
    V, cin_p, cout_p, _, _, eta_p = _pair_speeds(pair, eos)
    k = (_arr(pair.plus.rho) - _arr(pair.minus.rho)) * _arr(pair.plus.rho) / (2.0 * eta_p)
    return fluid._out(-k * (cout_p - V) ** 2)


def dJ_dbeta_plus(pair: ShockPair, eos: Eos):
    """Closed form on the Hugoniot locus: ``-([rho] rho+ / 2 eta+) (V - c_in+)^2``."""
    V, cin_p, cout_p, _, _, eta_p = _pair_speeds(pair, eos)
    k = (_arr(pair.plus.rho) - _arr(pair.minus.rho)) * _arr(pair.plus.rho) / (2.0 * eta_p)
    return fluid._out(-k * (V - cin_p) ** 2)


def _sonic_guard(den: np.ndarray, ref: np.ndarray) -> None:
    if np.any(np.abs(den) <= 1e-14 * np.maximum(ref, 1.0)):
        raise SonicShock("shock speed coincides with a characteristic speed")


def coeff_F1(pair: ShockPair, eos: Eos):
    """``dH1/dbeta+ = -((V - c_in+) / (c_out+ - V))^2``."""
    V, cin_p, cout_p, _, _, eta_p = _pair_speeds(pair, eos)
    _sonic_guard(cout_p - V, eta_p)
    return fluid._out(-(((V - cin_p) / (cout_p - V)) ** 2))


def coeff_F2(pair: ShockPair, eos: Eos):
    """``dH2/dalpha+ = -((c_out+ - V) / (V - c_in+))^2``."""
    V, cin_p, cout_p, _, _, eta_p = _pair_speeds(pair, eos)
    _sonic_guard(V - cin_p, eta_p)
    return fluid._out(-(((cout_p - V) / (V - cin_p)) ** 2))


def coeff_M(pair: ShockPair, eos: Eos, family: Family | str):
    """Partials of the shock relation with respect to the ahead invariants.

    Returns ``(M1, M2) = (dH/dalpha-, dH/dbeta-)`` by implicit
    differentiation of ``J = 0``.
    """
    family = Family.parse(family)
    _speed(_arr(pair.plus.rho), _arr(pair.plus.w), _arr(pair.minus.rho), _arr(pair.minus.w))
    ip = fluid.to_invariants(eos, pair.plus)
    im = fluid.to_invariants(eos, pair.minus)
    ja_p, jb_p, ja_m, jb_m = J_gradient(ip.alpha, ip.beta, im.alpha, im.beta, eos)
    den = ja_p if family is Family.LEFT else jb_p
    _sonic_guard(den, flux_scale(eos, pair.minus) * 1e-3)
    return fluid._out(-ja_m / den), fluid._out(-jb_m / den)


def coeff_M1(pair: ShockPair, eos: Eos, family: Family | str = Family.LEFT):
    return coeff_M(pair, eos, family)[0]


def coeff_M2(pair: ShockPair, eos: Eos, family: Family | str = Family.LEFT):
    return coeff_M(pair, eos, family)[1]


def _determinism_arrays(family: Family, V, cin_p, cout_p, cin_m, cout_m):
    if family is Family.LEFT:
        return (cin_p < V) & (V < cin_m)
    return (cout_m < V) & (V < cout_p)


def determinism(pair: ShockPair, family: Family | str, eos: Eos):
    """Strict admissibility: ``c_in+ < V < c_in-`` (left) or ``c_out- < V < c_out+`` (right)."""
    family = Family.parse(family)
    V, cin_p, cout_p, cin_m, cout_m, _ = _pair_speeds(pair, eos)
    ok = _determinism_arrays(family, V, cin_p, cout_p, cin_m, cout_m)
    return bool(ok) if np.ndim(ok) == 0 else ok


# -- implicit shock relations -------------------------------------------------


def _residual(family, x, known, am, bm, eos):
    """J and its derivative in the unknown behind invariant (NaN where undefined)."""
    ap, bp = (x, known) if family is Family.LEFT else (known, x)
    ell_min = fluid.potential(eos, eos.rho_min)
    ok = (0.5 * (ap + bp) > ell_min) & np.isfinite(ap) & np.isfinite(bp)
    safe = np.where(ok, x, 2.0 * (ell_min + 1.0) - known)
    ap, bp = (safe, known) if family is Family.LEFT else (known, safe)
    grad = J_gradient(ap, bp, am, bm, eos)
    val = np.where(ok, _arr(J(ap, bp, am, bm, eos)), np.nan)
    der = np.where(ok, grad[0] if family is Family.LEFT else grad[1], np.nan)
    return val, der


def _scalar_bracket_solve(family, guess, known, am, bm, eos, scale, tol):
    def f(x):
        ap, bp = (x, known) if family is Family.LEFT else (known, x)
        try:
            return float(J(ap, bp, am, bm, eos)) / scale
        except PotentialOutOfRange:
            return np.nan

    f0 = f(guess)
    if np.isfinite(f0) and abs(f0) <= tol:
        return guess
    step = 1e-3 * max(abs(guess), 1.0)
    for _ in range(60):
        for sgn in (1.0, -1.0):
            x1 = guess + sgn * step
            f1 = f(x1)
            if np.isfinite(f0) and np.isfinite(f1) and f0 * f1 < 0.0:
                lo, hi = sorted((guess, x1))
                return brentq(f, lo, hi, xtol=1e-15, rtol=BRENT_RTOL, maxiter=200)
        step *= 1.6
    raise NoConvergence("no sign change of J found around the guess")


def _solve_H(family: Family, known, alpha_minus, beta_minus, eos: Eos, guess,
             tol: float = NEWTON_TOL, max_iter: int = NEWTON_MAX_ITER, check: bool = True,
             polish: bool = True):
    known, am, bm, x0 = np.broadcast_arrays(_arr(known), _arr(alpha_minus), _arr(beta_minus),
                                            _arr(guess))
    scalar = known.ndim == 0
    known, am, bm, x0 = (np.atleast_1d(q) for q in (known, am, bm, x0))
    x = np.array(x0, dtype=float)
    mp = fluid.to_primitive(eos, fluid.InvState(am, bm))
    scale = flux_scale(eos, mp)
    val, der = _residual(family, x, known, am, bm, eos)
    for _ in range(max_iter):
        done = np.abs(val) <= tol * scale
        if np.all(done):
            break
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(done, 0.0, -val / der)
        step = np.nan_to_num(step, nan=0.0, posinf=0.0, neginf=0.0)
        cap = 0.25 * np.maximum(np.abs(x), 1.0)
        step = np.clip(step, -cap, cap)
        for _ in range(20):
            tval, tder = _residual(family, x + step, known, am, bm, eos)
            bad = ~np.isfinite(tval)
            if not np.any(bad):
                break
            step = np.where(bad, 0.5 * step, step)
        x = np.where(np.isfinite(tval), x + step, x)
        val, der = _residual(family, x, known, am, bm, eos)
    done = np.abs(val) <= tol * scale
    for idx in zip(*np.nonzero(~done)):
        x[idx] = _scalar_bracket_solve(family, float(x0[idx]), float(known[idx]), float(am[idx]),
                                       float(bm[idx]), eos, float(scale[idx]), tol)
    if polish:
        # one extra Newton step so warm starts inside the tolerance still improve
        val, der = _residual(family, x, known, am, bm, eos)
        with np.errstate(divide="ignore", invalid="ignore"):
            trial = x - val / der
        tval, _ = _residual(family, trial, known, am, bm, eos)
        better = np.isfinite(tval) & (np.abs(tval) <= np.abs(val))
        x = np.where(better, trial, x)
    if check:
        ap, bp = (x, known) if family is Family.LEFT else (known, x)
        plus = fluid.to_primitive(eos, fluid.InvState(ap, bp))
        pair = ShockPair(plus, mp)
        try:
            ok = determinism(pair, family, eos)
        except DegenerateJump as exc:
            raise InadmissibleBranch("shock relation converged to the zero-jump root") from exc
        if not np.all(ok):
            raise InadmissibleBranch(
                f"root violates strict determinism for the {family.name.lower()} family",
                nodes=np.nonzero(~np.atleast_1d(ok))[0].tolist(),
            )
    return float(x[0]) if scalar else x


def solve_H1(beta_plus, alpha_minus, beta_minus, eos: Eos, guess, **kw):
    """Solve ``J(alpha+, beta+, alpha-, beta-) = 0`` for ``alpha+`` (left shock)."""
    return _solve_H(Family.LEFT, beta_plus, alpha_minus, beta_minus, eos, guess, **kw)


def solve_H2(alpha_plus, alpha_minus, beta_minus, eos: Eos, guess, **kw):
    """Solve ``J(alpha+, beta+, alpha-, beta-) = 0`` for ``beta+`` (right shock)."""
    return _solve_H(Family.RIGHT, alpha_plus, alpha_minus, beta_minus, eos, guess, **kw)
