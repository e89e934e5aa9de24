"""Barotropic gamma-law fluid: pressure, sound speed, Riemann invariants.

All functions accept scalars or numpy arrays and broadcast elementwise.
The invariants are ``alpha = l(rho) + w`` and ``beta = l(rho) - w`` where
``l`` is the sound-speed potential, the antiderivative of ``eta / rho``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import NonPositiveDensity, NonPositiveRadius, PotentialOutOfRange

ArrayLike = Union[float, np.ndarray]

RHO_MIN = 1e-10


@dataclass(frozen=True)
class Eos:
    """Pressure law ``p = kappa * rho**gamma`` with ``gamma >= 1``."""

    gamma: float = 2.0
    kappa: float = 1.0
    rho_min: float = RHO_MIN

    def __post_init__(self) -> None:
        if not (self.gamma >= 1.0 and np.isfinite(self.gamma)):
            raise ValueError(f"gamma must be >= 1, got {self.gamma}")
        if not (self.kappa > 0.0 and np.isfinite(self.kappa)):
            raise ValueError(f"kappa must be > 0, got {self.kappa}")

    @property
    def isothermal(self) -> bool:
        return self.gamma == 1.0


@dataclass(frozen=True)
class PrimState:
    rho: ArrayLike
    w: ArrayLike


@dataclass(frozen=True)
class InvState:
    alpha: ArrayLike
    beta: ArrayLike


def _check_rho(rho: ArrayLike) -> np.ndarray:
    rho = np.asarray(rho, dtype=float)
    if np.any(~(rho > 0.0)):
        raise NonPositiveDensity("density must be positive", rho=rho)
    return rho


def _out(x: np.ndarray) -> ArrayLike:
    return float(x) if np.ndim(x) == 0 else x


def pressure(eos: Eos, rho: ArrayLike) -> ArrayLike:
    rho = _check_rho(rho)
    return _out(eos.kappa * rho**eos.gamma)


def sound_speed(eos: Eos, rho: ArrayLike) -> ArrayLike:
    """eta = sqrt(dp/drho)."""
    rho = _check_rho(rho)
    return _out(np.sqrt(eos.gamma * eos.kappa) * rho ** (0.5 * (eos.gamma - 1.0)))


def sound_speed_log_slope(eos: Eos) -> float:
    """d(ln eta)/d(ln rho), constant for a gamma law."""
    return 0.5 * (eos.gamma - 1.0)


def potential(eos: Eos, rho: ArrayLike) -> ArrayLike:
    rho = _check_rho(rho)
    if eos.isothermal:
        return _out(np.sqrt(eos.kappa) * np.log(rho))
    eta = np.sqrt(eos.gamma * eos.kappa) * rho ** (0.5 * (eos.gamma - 1.0))
    return _out(2.0 * eta / (eos.gamma - 1.0))


def rho_from_potential(eos: Eos, ell: ArrayLike) -> ArrayLike:
    ell = np.asarray(ell, dtype=float)
    ell_min = potential(eos, eos.rho_min)
    if np.any(~(ell > ell_min)) or np.any(~np.isfinite(ell)):
        raise PotentialOutOfRange("potential below the density floor", ell=ell)
    if eos.isothermal:
        return _out(np.exp(ell / np.sqrt(eos.kappa)))
    g = eos.gamma
    base = (g - 1.0) * ell / (2.0 * np.sqrt(g * eos.kappa))
    return _out(base ** (2.0 / (g - 1.0)))


def to_invariants(eos: Eos, s: PrimState) -> InvState:
    ell = np.asarray(potential(eos, s.rho))
    w = np.asarray(s.w, dtype=float)
    return InvState(_out(ell + w), _out(ell - w))


def to_primitive(eos: Eos, s: InvState) -> PrimState:
    a = np.asarray(s.alpha, dtype=float)
    b = np.asarray(s.beta, dtype=float)
    rho = rho_from_potential(eos, 0.5 * (a + b))
    return PrimState(rho, _out(0.5 * (a - b)))


def char_speeds(eos: Eos, s: PrimState) -> tuple[ArrayLike, ArrayLike]:
    """Return ``(c_in, c_out) = (w - eta, w + eta)``."""
    eta = np.asarray(sound_speed(eos, s.rho))
    w = np.asarray(s.w, dtype=float)
    return _out(w - eta), _out(w + eta)


def prim_jacobian(eos: Eos, s: PrimState) -> np.ndarray:
    """d(rho, w)/d(alpha, beta) as a (2, 2, ...) array."""
    rho = _check_rho(s.rho)
    eta = np.asarray(sound_speed(eos, rho))
    k = rho / (2.0 * eta)
    half = np.full_like(k, 0.5)
    return np.array([[k, k], [half, -half]])


def speed_gradients(eos: Eos, s: PrimState) -> tuple[np.ndarray, np.ndarray]:
    """Partials of ``c_in`` and ``c_out`` with respect to ``(alpha, beta)``.

    Returns two arrays of shape (2, ...): ``[dc/dalpha, dc/dbeta]``.
    """
    # d eta / d alpha = d eta / d beta = eta'(rho) * rho / (2 eta)
    rho = np.asarray(s.rho, dtype=float)
    de = np.full_like(rho, 0.5 * sound_speed_log_slope(eos))
    c_in = np.array([0.5 - de, -0.5 - de])
    c_out = np.array([0.5 + de, -0.5 + de])
    return c_in, c_out


def source_A(eos: Eos, s: InvState, r: ArrayLike) -> ArrayLike:
    """Geometric source ``A = -2 eta w / r`` of the transport equations."""
    r = np.asarray(r, dtype=float)
    if np.any(~(r > 0.0)):
        raise NonPositiveRadius("radius must be positive", r=r)
    p = to_primitive(eos, s)
    eta = np.asarray(sound_speed(eos, p.rho))
    return _out(-2.0 * eta * np.asarray(p.w) / r)
