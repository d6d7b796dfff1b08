import numpy as np
import pytest
from scipy import linalg

from freeneg import (
    Bipartition,
    LindbladGenerator,
    NumericalError,
    QuadraticHamiltonian,
    dgamma_dt,
    evolve_exact,
    evolve_rk4,
    negativity_trajectory,
    random_mixed_covariance,
    steady_state,
    tight_binding,
    uniform_loss,
    validate,
)
from freeneg.dynamics import default_dt

from conftest import SX, SY, two_mode_gamma, two_mode_loss_negativity

SY2 = np.kron(np.eye(2), SY)


def test_two_mode_loss_generator():
    gam = 0.8
    gen = uniform_loss(2, gam)
    np.testing.assert_allclose(gen.x, gam / 2 * np.eye(4), atol=1e-15)
    np.testing.assert_allclose(gen.y_matrix, -gam / 2 * SY2, atol=1e-15)
    assert gen.is_physical()


def test_zero_loss_rate():
    gen = uniform_loss(3, 0.0)
    assert not gen.x.any() and not gen.y.any()


def test_unphysical_generator_is_detected():
    gen = uniform_loss(2, 1.0)
    bad = LindbladGenerator(gen.k, 0.1 * gen.x, gen.y)
    assert not bad.is_physical()


def test_steady_state_is_fixed_point(rng):
    gen = uniform_loss(4, 0.6, tight_binding(4))
    gss = steady_state(gen)
    np.testing.assert_allclose(dgamma_dt(gss, gen), 0, atol=1e-10)


def test_loss_steady_state_is_vacuum():
    gss = steady_state(uniform_loss(3, 0.5))
    np.testing.assert_allclose(gss.gamma, -np.kron(np.eye(3), SY), atol=1e-12)


def test_pure_noise_rhs():
    y = random_mixed_covariance(2, seed=3).m
    gen = LindbladGenerator(np.zeros((4, 4)), np.zeros((4, 4)), y)
    g = random_mixed_covariance(2, seed=4)
    np.testing.assert_allclose(dgamma_dt(g, gen), 2 * y)


def test_two_mode_closed_form_trajectory():
    gam = 1.0
    gen = uniform_loss(2, gam)
    g0 = two_mode_gamma()
    for t in (0.1, 0.7, 2.0, 6.0):
        want = np.exp(-gam * t) * (g0.gamma + SY2) - SY2
        np.testing.assert_allclose(evolve_exact(g0, gen, t).gamma, want, atol=1e-10)


def test_unitary_evolution():
    h = tight_binding(3, 0.9)
    gen = LindbladGenerator(h.k, np.zeros((6, 6)), np.zeros((6, 6)))
    g0 = random_mixed_covariance(3, seed=11)
    t = 0.37
    u = linalg.expm(-4j * h.matrix * t)
    want = u @ g0.gamma @ u.conj().T
    got = evolve_exact(g0, gen, t)
    np.testing.assert_allclose(got.gamma, want, atol=1e-12)
    np.testing.assert_allclose(linalg.svdvals(got.m), linalg.svdvals(g0.m), atol=1e-12)


def test_time_zero_is_identity(rng):
    g0 = random_mixed_covariance(3, rng)
    gen = uniform_loss(3, 1.0, tight_binding(3))
    np.testing.assert_array_equal(evolve_exact(g0, gen, 0.0).m, g0.m)
    np.testing.assert_array_equal(evolve_rk4(g0, gen, 0.0).m, g0.m)


def test_rk4_matches_exact():
    gen = uniform_loss(2, 1.0)
    g0 = two_mode_gamma()
    diff = np.abs(evolve_rk4(g0, gen, 1.0, 1e-3).m - evolve_exact(g0, gen, 1.0).m).max()
    assert diff <= 1e-8


def test_rk4_is_fourth_order():
    gen = uniform_loss(4, 0.7, tight_binding(4))
    g0 = random_mixed_covariance(4, seed=2)
    exact = evolve_exact(g0, gen, 1.0).m
    e1 = np.abs(evolve_rk4(g0, gen, 1.0, 0.1).m - exact).max()
    e2 = np.abs(evolve_rk4(g0, gen, 1.0, 0.05).m - exact).max()
    assert 12 < e1 / e2 < 20


def test_rk4_lands_on_final_time():
    gen = uniform_loss(2, 1.0)
    g0 = two_mode_gamma()
    np.testing.assert_allclose(
        evolve_rk4(g0, gen, 0.3333, 1e-3).m, evolve_exact(g0, gen, 0.3333).m, atol=1e-10
    )


def test_rk4_aborts_when_unstable():
    gen = uniform_loss(2, 1.0, QuadraticHamiltonian(50 * tight_binding(2).k))
    with pytest.raises(NumericalError):
        evolve_rk4(random_mixed_covariance(2, seed=0), gen, 1.0, 0.5)


def test_default_dt():
    assert default_dt(uniform_loss(2, 0.0)) == 1e-2
    assert default_dt(uniform_loss(2, 100.0)) < 1e-2


def test_trajectory_closed_form(two_mode_cut):
    gen = uniform_loss(2, 1.0)
    times = np.linspace(0, 5, 26)
    traj = negativity_trajectory(two_mode_gamma(), gen, times, two_mode_cut)
    for t, e in traj:
        assert e == pytest.approx(two_mode_loss_negativity(t), abs=1e-8)
        assert e > 0
    assert traj[0][1] == pytest.approx(np.log(2), abs=1e-12)
    assert traj[-1][1] == pytest.approx(0.5 * np.exp(-10), rel=0.05)


def test_trajectory_requires_sorted_times(two_mode_cut):
    with pytest.raises(ValueError):
        negativity_trajectory(two_mode_gamma(), uniform_loss(2, 1.0), [1.0, 0.5], two_mode_cut)


def test_no_dynamics_keeps_negativity(two_mode_cut):
    traj = negativity_trajectory(two_mode_gamma(0.7), uniform_loss(2, 0.0), [0, 1, 5], two_mode_cut)
    assert len({round(e, 14) for _, e in traj}) == 1


def test_no_sudden_death(two_mode_cut):
    for _, e in negativity_trajectory(two_mode_gamma(), uniform_loss(2, 1.0), np.linspace(0, 10, 41), two_mode_cut):
        assert e > 0


def test_semigroup_and_validity(rng):
    gen = uniform_loss(4, 0.4, tight_binding(4, 1.3))
    g0 = random_mixed_covariance(4, rng)
    a = evolve_exact(evolve_exact(g0, gen, 0.3), gen, 0.9)
    b = evolve_exact(g0, gen, 1.2)
    np.testing.assert_allclose(a.m, b.m, atol=1e-10)
    assert validate(b).valid


def test_generator_split(rng):
    gen = uniform_loss(4, 0.4, tight_binding(4))
    part = Bipartition(4, (0, 1))
    loc, inter = gen.split(part)
    total = loc + inter
    for name in ("k", "x", "y"):
        np.testing.assert_array_equal(getattr(total, name), getattr(gen, name))
    assert not inter.x.any() and not inter.y.any()
    assert inter.k.any()
