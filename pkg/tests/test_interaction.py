import numpy as np
import pytest

import oracles
from shockinteract import fluid, interaction, jump, problems
from shockinteract.ahead import ConstantField, Side, TaylorField
from shockinteract.errors import DegenerateJump, InadmissibleConfiguration, InadmissibleError
from shockinteract.fluid import Eos, PrimState
from shockinteract.jump import ShockPair


def random_setups(rng, n, gammas=(1.4, 2.0)):
    """``n`` admissible interactions with random states and first-order gradients."""
    out = []
    while len(out) < n:
        g = float(rng.choice(gammas))
        eos = Eos(g, 1.0)
        r0 = rng.uniform(0.5, 3.0)
        coef = [{k: rng.uniform(-0.3, 0.3) for k in ("t", "r")} for _ in range(4)]
        f1 = TaylorField(rng.uniform(0.5, 2.0), rng.uniform(0.1, 1.0), r0, coef[0], coef[1], Side.LEFT)
        f2 = TaylorField(rng.uniform(0.5, 2.0), -rng.uniform(0.1, 1.0), r0, coef[2], coef[3], Side.RIGHT)
        try:
            out.append(interaction.setup_interaction(f1, f2, eos, r0))
        except InadmissibleError:
            continue
    return out


def test_symmetric_point_matches_bisection_oracle(eos):
    rho_ref, V_ref = oracles.symmetric_point(0.4)
    p = interaction.solve_point(PrimState(1.0, 0.4), PrimState(1.0, -0.4), eos)
    assert p.behind.rho == pytest.approx(rho_ref, rel=1e-12)
    assert p.V1 == pytest.approx(V_ref, rel=1e-12)
    assert abs(p.behind.w) <= 1e-12
    assert abs(p.V1 + p.V2) <= 1e-12
    # the root also satisfies the cubic form of the same balance law
    r = p.behind.rho
    assert (r * r - 1.16) * (r - 1.0) == pytest.approx(0.16, abs=1e-13)


def test_symmetric_constants(sym_setup):
    d = sym_setup.data
    rho, V1 = oracles.symmetric_point(0.4)
    e = oracles.eta(rho, 2.0)
    assert d.eta0 == pytest.approx(e, rel=1e-12)
    assert d.beta0 == pytest.approx(oracles.ell(rho, 2.0), rel=1e-12)
    assert d.a == pytest.approx(((e + V1) / (e - V1)) ** 2, rel=1e-10)
    assert d.Gamma0 == pytest.approx(-(e + V1) / (e - V1), rel=1e-12)
    assert d.V2_0 == pytest.approx(-V1, rel=1e-12)
    # symmetric data: a is the square of -Gamma0
    assert d.a == pytest.approx(d.Gamma0**2, rel=1e-10)
    assert d.diagnostics["F1_0"] == pytest.approx(-d.a, rel=1e-10)


def _slopes_by_fd(s, h=1e-6):
    """Initial slopes from differencing the solved shock relations along both traces.

    At the origin ``w = 0`` so the sources vanish: along ``u = v`` beta grows
    like ``beta'_0 u`` and along ``u = a v`` alpha grows like ``a alpha'_0 v``.
    """
    d, eos = s.data, s.eos
    phi0, psi0 = -1.0 / (d.eta0 * d.Gamma0), 1.0 / d.eta0

    def ahead(f, t, r):
        st = f.evaluate(t, r).state
        return fluid.to_invariants(eos, PrimState(float(st.rho), float(st.w)))

    def alpha1(u):
        m = ahead(s.ahead1, (phi0 + psi0) * u, d.r0 + (1.0 / d.Gamma0 + 1.0) * u)
        return jump.solve_H1(d.beta0 + d.beta_prime_0 * u, m.alpha, m.beta, eos, d.beta0)

    def beta2(v):
        m = ahead(s.ahead2, (d.a * phi0 + psi0) * v, d.r0 + (d.a / d.Gamma0 + 1.0) * v)
        return jump.solve_H2(d.beta0 + d.a * d.alpha_prime_0 * v, m.alpha, m.beta, eos, d.beta0)

    return (alpha1(h) - alpha1(-h)) / (2 * h), (beta2(h) - beta2(-h)) / (2 * h)


def test_symmetric_slopes(sym_setup):
    d = sym_setup.data
    a_fd, b_fd = _slopes_by_fd(sym_setup)
    assert d.alpha_prime_0 == pytest.approx(a_fd, rel=1e-6)
    assert d.beta_prime_0 == pytest.approx(b_fd, rel=1e-6)
    assert d.alpha_prime_0 == pytest.approx(-8.0911017, rel=1e-7)
    assert d.beta_prime_0 == pytest.approx(0.77799065, rel=1e-7)


def test_random_slopes_match_fd(rng):
    for s in random_setups(rng, 10):
        a_fd, b_fd = _slopes_by_fd(s)
        scale = 1.0 + abs(s.data.alpha_prime_0) + abs(s.data.beta_prime_0)
        assert abs(s.data.alpha_prime_0 - a_fd) <= 1e-6 * scale
        assert abs(s.data.beta_prime_0 - b_fd) <= 1e-6 * scale


def test_identities_on_random_pairs(rng):
    for s in random_setups(rng, 20):
        diag = s.data.diagnostics
        a = s.data.a
        assert abs(diag["F1_0"] * diag["F2_0"] - a * a) <= 1e-12
        assert abs(diag["detM"] - (1.0 - a**3)) <= 1e-12


def test_random_point_solutions_satisfy_jump_conditions(rng):
    for s in random_setups(rng, 20):
        d = s.data
        behind = PrimState(d.rho0, 0.0)
        for k, f in ((1, s.ahead1), (2, s.ahead2)):
            st = f.evaluate(0.0, d.r0).state
            pair = ShockPair(behind, PrimState(float(st.rho), float(st.w)))
            scale = float(jump.flux_scale(s.eos, pair.minus))
            assert abs(jump.hugoniot_I(pair, s.eos)) <= 1e-11 * scale
            assert jump.determinism(pair, k, s.eos)
        assert d.V1_0 < 0.0 < d.V2_0
        assert 0.0 < d.a < 1.0


def test_frame_shift_removes_behind_velocity(eos):
    f1 = ConstantField(1.0, 0.6, Side.LEFT)
    f2 = ConstantField(1.5, -0.1, Side.RIGHT)
    s = interaction.setup_interaction(f1, f2, eos, 1.0)
    w0 = s.data.w0_unshifted
    assert abs(w0) > 1e-3
    assert float(s.ahead1.evaluate(0.0, 1.0).state.w) == pytest.approx(0.6 - w0)
    p = interaction.solve_point(PrimState(1.0, 0.6), PrimState(1.5, -0.1), eos)
    assert p.behind.w == pytest.approx(w0, abs=1e-12)
    assert s.data.V1_0 == pytest.approx(p.V1 - w0, abs=1e-12)


def test_newton_and_bracket_agree(eos):
    a1, a2 = PrimState(1.2, 0.9), PrimState(0.8, -0.4)
    p_newton = interaction.solve_point(a1, a2, eos)
    p_bad_guess = interaction.solve_point(a1, a2, eos, guess=PrimState(50.0, 10.0))
    assert p_newton.behind.rho == pytest.approx(p_bad_guess.behind.rho, rel=1e-12)


def test_identical_states_are_degenerate(eos):
    with pytest.raises(DegenerateJump):
        interaction.solve_point(PrimState(1.0, 0.2), PrimState(1.0, 0.2), eos)


def test_diverging_flow_is_inadmissible(eos):
    with pytest.raises(InadmissibleConfiguration):
        interaction.solve_point(PrimState(1.0, -0.5), PrimState(1.0, 0.5), eos)


def test_nonpositive_radius_rejected(eos):
    f1, f2 = problems.symmetric_fields(1.0)
    with pytest.raises(InadmissibleConfiguration):
        interaction.setup_interaction(f1, f2, eos, 0.0)


def test_origin_maps_are_inverse(sym_setup):
    d = sym_setup.data
    J = interaction.origin_jacobian(d.eta0, d.Gamma0)
    K = interaction.origin_char_map(d.eta0, d.Gamma0)
    assert np.allclose(J @ K, np.eye(2), atol=1e-13)
    assert np.linalg.det(J) == pytest.approx(-2.0 / (d.eta0 * d.Gamma0), rel=1e-13)


def test_compute_a_range_checked():
    with pytest.raises(InadmissibleConfiguration):
        interaction.compute_a(1.0, 0.5, -0.5)
    with pytest.raises(InadmissibleConfiguration):
        interaction.compute_Gamma0(1.0, 0.5)


def test_reflection_mirrors_outputs(rng, eos):
    checked = 0
    while checked < 10:
        r1, r2 = rng.uniform(0.5, 2.0, 2)
        w1, w2 = rng.uniform(0.1, 0.8), -rng.uniform(0.1, 0.8)
        try:
            p = interaction.solve_point(PrimState(r1, w1), PrimState(r2, w2), eos)
        except InadmissibleError:
            continue
        checked += 1
        q = interaction.solve_point(PrimState(r2, -w2), PrimState(r1, -w1), eos)
        assert q.behind.rho == pytest.approx(p.behind.rho, rel=1e-12)
        assert q.behind.w == pytest.approx(-p.behind.w, abs=1e-12)
        assert q.V1 == pytest.approx(-p.V2, rel=1e-12) and q.V2 == pytest.approx(-p.V1, rel=1e-12)
        s = interaction.setup_interaction(ConstantField(r1, w1, Side.LEFT), ConstantField(r2, w2, Side.RIGHT),
                                          eos, 1.0)
        m = interaction.setup_interaction(ConstantField(r2, -w2, Side.LEFT),
                                          ConstantField(r1, -w1, Side.RIGHT), eos, 1.0)
        assert m.data.a == pytest.approx(s.data.a, rel=1e-10)
