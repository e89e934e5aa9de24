"""Ready-made ahead data for demonstrations and tests."""

from __future__ import annotations

from .ahead import Box, Side, TaylorField
from .fluid import Eos

SYMMETRIC_RHO = 1.0
SYMMETRIC_W = 0.4


def symmetric_fields(r0: float = 1.0, rho: float = SYMMETRIC_RHO, w: float = SYMMETRIC_W,
                     eos: Eos = Eos(), box: Box | None = None,
                     r_ref_coefficients: float | None = None) -> tuple[TaylorField, TaylorField]:
    """Two equal shocks converging on ``r0`` from opposite sides.

    Ahead of each shock the fluid moves towards the interaction point with
    speed ``w`` and uniform density ``rho`` at ``t = 0``. The density time
    derivative is the one the spherical mass balance imposes on that state,
    ``rho_t = -2 rho w / r``; it is evaluated at ``r_ref_coefficients``
    (default ``r0``), so reusing one value for several ``r0`` keeps the ahead
    data identical. A constant ahead state would make the behind state
    exactly uniform and every test of the iteration trivial.
    """
    rc = r0 if r_ref_coefficients is None else float(r_ref_coefficients)
    drho = 2.0 * rho * w / rc
    left = TaylorField(rho, w, r0, {"t": -drho}, {}, Side.LEFT)
    right = TaylorField(rho, -w, r0, {"t": drho}, {}, Side.RIGHT)
    if box is not None:
        left, right = left.with_box(box), right.with_box(box)
    return left, right


def default_box(r0: float, epsilon: float, eta0: float) -> Box:
    """Validity box comfortably containing the solution region."""
    return Box(-2.0 * epsilon / eta0, 2.0 * epsilon / eta0, r0 - 2.0 * epsilon, r0 + 2.0 * epsilon)
