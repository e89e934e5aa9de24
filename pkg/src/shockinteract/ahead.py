"""State-ahead developments consumed along the two shock curves.

The fields are supplied, not solved for. ``euler_residual`` reports how far
a supplied field is from the spherically symmetric isentropic equations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Mapping

import numpy as np

from . import fluid
from .errors import OutOfDomain
from .fluid import Eos, PrimState


class Side(enum.Enum):
    LEFT = "left"  # ahead of shock 1, smaller radii
    RIGHT = "right"  # ahead of shock 2, larger radii


@dataclass(frozen=True)
class Box:
    """Closed validity box ``t0 <= t <= t1``, ``r0 <= r <= r1``."""

    t0: float = -np.inf
    t1: float = np.inf
    r0: float = -np.inf
    r1: float = np.inf

    def contains(self, t, r) -> np.ndarray:
        t, r = np.asarray(t, dtype=float), np.asarray(r, dtype=float)
        return (t >= self.t0) & (t <= self.t1) & (r >= self.r0) & (r <= self.r1)


@dataclass(frozen=True)
class FieldSample:
    state: PrimState
    # [[rho_t, rho_r], [w_t, w_r]] stacked along the leading two axes
    gradient: np.ndarray


class AheadField:
    """Base class: subclasses implement ``_eval`` on unchecked arrays."""

    side: Side
    box: Box

    def _eval(self, t: np.ndarray, r: np.ndarray) -> tuple[np.ndarray, ...]:
        raise NotImplementedError

    def with_box(self, box: Box) -> "AheadField":
        return replace(self, box=box)

    def evaluate(self, t, r) -> FieldSample:
        t, r = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(r, dtype=float))
        inside = self.box.contains(t, r)
        if not np.all(inside):
            raise OutOfDomain(
                f"{self.side.value} ahead field evaluated outside its validity box",
                count=int(np.size(inside) - np.count_nonzero(inside)),
            )
        rho, w, rho_t, rho_r, w_t, w_r = self._eval(t, r)
        if np.any(~(rho > 0.0)):
            raise OutOfDomain("ahead density is not positive inside the validity box")
        grad = np.array([[rho_t, rho_r], [w_t, w_r]])
        return FieldSample(PrimState(fluid._out(rho), fluid._out(w)), grad)


@dataclass(frozen=True)
class ConstantField(AheadField):
    rho: float
    w: float
    side: Side = Side.LEFT
    box: Box = field(default_factory=Box)

    def _eval(self, t, r):
        z = np.zeros_like(t)
        return self.rho + z, self.w + z, z, z, z, z


_KEYS = ("t", "r", "tt", "tr", "rr")


@dataclass(frozen=True)
class TaylorField(AheadField):
    """Quadratic polynomial in ``(t, r - r_ref)`` for both density and velocity.

    ``rho_coef`` / ``w_coef`` map ``t, r, tt, tr, rr`` to the Taylor
    coefficients, e.g. ``rho = rho0 + c_t t + c_r x + c_tt t^2/2 + c_tr t x + c_rr x^2/2``.
    """

    rho0: float
    w0: float
    r_ref: float
    rho_coef: Mapping[str, float] = field(default_factory=dict)
    w_coef: Mapping[str, float] = field(default_factory=dict)
    side: Side = Side.LEFT
    box: Box = field(default_factory=Box)

    def __post_init__(self) -> None:
        for coef in (self.rho_coef, self.w_coef):
            unknown = set(coef) - set(_KEYS)
            if unknown:
                raise ValueError(f"unknown Taylor coefficient(s) {sorted(unknown)}")

    @staticmethod
    def _poly(c0, coef, t, x):
        g = {k: float(coef.get(k, 0.0)) for k in _KEYS}
        val = c0 + g["t"] * t + g["r"] * x + 0.5 * g["tt"] * t * t + g["tr"] * t * x + 0.5 * g["rr"] * x * x
        dt = g["t"] + g["tt"] * t + g["tr"] * x
        dr = g["r"] + g["tr"] * t + g["rr"] * x
        return val, dt, dr

    def _eval(self, t, r):
        x = r - self.r_ref
        rho, rho_t, rho_r = self._poly(self.rho0, self.rho_coef, t, x)
        w, w_t, w_r = self._poly(self.w0, self.w_coef, t, x)
        return rho, w, rho_t, rho_r, w_t, w_r


@dataclass(frozen=True)
class ShiftedField(AheadField):
    """Galilean velocity shift ``w -> w - dw`` of another field."""

    base: AheadField
    dw: float
    side: Side = Side.LEFT
    box: Box = field(default_factory=Box)

    def _eval(self, t, r):
        rho, w, rho_t, rho_r, w_t, w_r = self.base._eval(t, r)
        return rho, w - self.dw, rho_t, rho_r, w_t, w_r


def shifted(fld: AheadField, dw: float) -> AheadField:
    if isinstance(fld, ShiftedField):
        return ShiftedField(fld.base, fld.dw + dw, fld.side, fld.box)
    return ShiftedField(fld, dw, fld.side, fld.box)


def evaluate(fld: AheadField, t, r) -> FieldSample:
    return fld.evaluate(t, r)


def invariants_along(fld: AheadField, eos: Eos, t, r) -> tuple:
    """Riemann invariants of the field at the given points."""
    inv = fluid.to_invariants(eos, fld.evaluate(t, r).state)
    return inv.alpha, inv.beta


def invariant_gradients(fld: AheadField, eos: Eos, t, r) -> tuple[np.ndarray, np.ndarray]:
    """``(d alpha/dt, d alpha/dr)`` and ``(d beta/dt, d beta/dr)``."""
    s = fld.evaluate(t, r)
    eta = np.asarray(fluid.sound_speed(eos, s.state.rho))
    k = eta / np.asarray(s.state.rho)
    (rho_t, rho_r), (w_t, w_r) = s.gradient
    return np.array([k * rho_t + w_t, k * rho_r + w_r]), np.array([k * rho_t - w_t, k * rho_r - w_r])


def euler_residual(fld: AheadField, eos: Eos, t, r, h_fd: float | None = None):
    """Residuals of mass and momentum balance in spherical symmetry.

    With ``h_fd`` the flux derivatives ``d(rho w)/dr`` and ``dp/dr`` are taken
    by centered differences instead of the analytic partials.
    """
    t, r = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(r, dtype=float))
    if np.any(r <= 0.0):
        raise OutOfDomain("euler_residual needs r > 0")
    s = fld.evaluate(t, r)
    rho, w = np.asarray(s.state.rho), np.asarray(s.state.w)
    (rho_t, rho_r), (w_t, w_r) = s.gradient
    if h_fd is None:
        dflux = rho_r * w + rho * w_r
        dp = np.asarray(fluid.sound_speed(eos, rho)) ** 2 * rho_r
    else:
        hi, lo = fld.evaluate(t, r + h_fd).state, fld.evaluate(t, r - h_fd).state
        dflux = (np.asarray(hi.rho) * hi.w - np.asarray(lo.rho) * lo.w) / (2 * h_fd)
        dp = (np.asarray(fluid.pressure(eos, hi.rho)) - np.asarray(fluid.pressure(eos, lo.rho))) / (2 * h_fd)
    mass = rho_t + dflux + 2.0 * rho * w / r
    momentum = w_t + w * w_r + dp / rho
    return fluid._out(mass), fluid._out(momentum)
