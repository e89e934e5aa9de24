import numpy as np
import pytest

from shockinteract import ahead, problems
from shockinteract.ahead import Box, ConstantField, Side, TaylorField
from shockinteract.errors import OutOfDomain
from shockinteract.fluid import Eos


def test_box_contains_is_closed():
    b = Box(0.0, 1.0, 2.0, 3.0)
    assert b.contains(0.0, 2.0) and b.contains(1.0, 3.0)
    assert not b.contains(-1e-12, 2.5)
    assert list(b.contains([0.5, 2.0], [2.5, 2.5])) == [True, False]


def test_constant_field():
    f = ConstantField(1.3, -0.2, Side.RIGHT)
    s = f.evaluate([0.0, 1.0], [1.0, 2.0])
    assert np.all(s.state.rho == 1.3) and np.all(s.state.w == -0.2)
    assert np.all(s.gradient == 0.0)


def test_taylor_field_values_and_gradient():
    f = TaylorField(1.0, 0.3, 2.0, {"t": 0.5, "r": -0.2, "tt": 0.4, "tr": 0.1, "rr": -0.6},
                    {"r": 0.7, "tr": -0.3})
    t, r = 0.1, 2.05
    x = r - 2.0
    s = f.evaluate(t, r)
    rho = 1.0 + 0.5 * t - 0.2 * x + 0.2 * t * t + 0.1 * t * x - 0.3 * x * x
    assert float(s.state.rho) == pytest.approx(rho, rel=1e-15)
    assert float(s.state.w) == pytest.approx(0.3 + 0.7 * x - 0.3 * t * x, rel=1e-15)
    h = 1e-6
    grad = np.array([[(f.evaluate(t + h, r).state.rho - f.evaluate(t - h, r).state.rho) / (2 * h),
                      (f.evaluate(t, r + h).state.rho - f.evaluate(t, r - h).state.rho) / (2 * h)],
                     [(f.evaluate(t + h, r).state.w - f.evaluate(t - h, r).state.w) / (2 * h),
                      (f.evaluate(t, r + h).state.w - f.evaluate(t, r - h).state.w) / (2 * h)]])
    assert np.allclose(s.gradient, grad, atol=1e-9)


def test_unknown_coefficient_rejected():
    with pytest.raises(ValueError):
        TaylorField(1.0, 0.0, 1.0, {"x": 1.0})


def test_outside_box_rejected():
    f = ConstantField(1.0, 0.0, box=Box(-1.0, 1.0, 0.5, 1.5))
    f.evaluate(0.0, 1.0)
    with pytest.raises(OutOfDomain) as exc:
        f.evaluate([0.0, 2.0], [1.0, 1.0])
    assert exc.value.context["count"] == 1


def test_nonpositive_density_inside_box_rejected():
    f = TaylorField(1.0, 0.0, 1.0, {"r": -10.0})
    with pytest.raises(OutOfDomain):
        f.evaluate(0.0, 1.2)


def test_shift_composes():
    base = ConstantField(1.0, 0.5, Side.LEFT)
    s = ahead.shifted(ahead.shifted(base, 0.1), 0.2)
    assert s.base is base and s.dw == pytest.approx(0.3)
    assert float(s.evaluate(0.0, 1.0).state.w) == pytest.approx(0.2)
    assert s.side is Side.LEFT


def test_invariant_gradients_against_fd():
    eos = Eos(1.4)
    f = TaylorField(1.2, 0.3, 1.0, {"t": 0.4, "r": -0.3}, {"t": 0.2, "rr": 1.0})
    ga, gb = ahead.invariant_gradients(f, eos, 0.02, 1.03)
    h = 1e-6

    def inv(t, r):
        return np.array(ahead.invariants_along(f, eos, t, r), dtype=float)

    dt = (inv(0.02 + h, 1.03) - inv(0.02 - h, 1.03)) / (2 * h)
    dr = (inv(0.02, 1.03 + h) - inv(0.02, 1.03 - h)) / (2 * h)
    assert np.allclose([ga[0], gb[0]], dt, atol=1e-8)
    assert np.allclose([ga[1], gb[1]], dr, atol=1e-8)


def test_symmetric_fields_satisfy_mass_balance_at_the_point():
    eos = Eos(2.0)
    for r0 in (1.0, 2.0):
        f1, f2 = problems.symmetric_fields(r0)
        for f in (f1, f2):
            mass, momentum = ahead.euler_residual(f, eos, 0.0, r0)
            assert mass == pytest.approx(0.0, abs=1e-14)
            # uniform density and velocity: no pressure or velocity gradient
            assert momentum == pytest.approx(0.0, abs=1e-14)


def test_shared_coefficients_for_scaling_study():
    f1, _ = problems.symmetric_fields(2.0, r_ref_coefficients=1.0)
    g1, _ = problems.symmetric_fields(1.0)
    assert f1.rho_coef == g1.rho_coef and f1.r_ref == 2.0


def test_euler_residual_fd_matches_analytic():
    eos = Eos(2.0)
    f = TaylorField(1.1, 0.2, 1.0, {"t": 0.3, "r": 0.5, "rr": -0.4}, {"r": -0.2, "t": 0.1})
    exact = np.array(ahead.euler_residual(f, eos, 0.01, 1.02))
    fd = np.array(ahead.euler_residual(f, eos, 0.01, 1.02, h_fd=1e-5))
    assert np.allclose(exact, fd, atol=1e-8)
    with pytest.raises(OutOfDomain):
        ahead.euler_residual(f, eos, 0.0, -1.0)
