import numpy as np
import pytest

from freeneg import (
    Bipartition,
    DivergentAreaLawError,
    area_law_bound,
    cdw_covariance,
    clustering_constant,
    finite_area_law_bound,
    gibbs_covariance,
    kitaev_chain,
    long_range_hopping,
    negativity,
    purity,
    tight_binding,
    uniform_loss,
)
from freeneg.models import (
    DecayProfile,
    LatticeSpec,
    build_hamiltonian,
    decay_integrals,
    locality_constant,
    site_block_norms,
)
from freeneg.oracle import density_from_covariance, quadratic_operator

from conftest import SY


def test_tight_binding_infinite_temperature():
    assert not gibbs_covariance(tight_binding(6), 0.0).m.any()


def test_energy_two_ways():
    # Tr[H_op rho] = sum_ab H_ab Gamma_ab for a zero-diagonal antisymmetric H
    h = tight_binding(3, 0.8)
    g = gibbs_covariance(h, 0.9)
    dense = np.trace(quadratic_operator(h.k) @ density_from_covariance(g).rho).real
    assert dense == pytest.approx(np.sum(h.matrix * g.gamma).real, abs=1e-12)


def test_kitaev_decoupled_has_no_entanglement():
    h = kitaev_chain(6, 0.0)
    for beta in (0.1, 1.0, 10.0):
        g = gibbs_covariance(h, beta)
        for n_a in (1, 3, 5):
            assert negativity(g, Bipartition.first(6, n_a)).value == pytest.approx(0.0, abs=1e-12)


def test_kitaev_topological_bond_across_cut():
    g = gibbs_covariance(kitaev_chain(8, 1.5), 50.0)
    assert negativity(g, Bipartition.half_chain(8)).value > 0.1


def test_long_range_reduces_to_tight_binding():
    np.testing.assert_allclose(long_range_hopping(10, 0.7, 1e6).k, tight_binding(10, 0.7).k, atol=1e-12)


def test_long_range_locality_and_norm():
    fits = [locality_constant(long_range_hopping(n, 1.0, 2.1), 2.1)["c_fit"] for n in (10, 20, 40)]
    assert max(fits) < 10 and np.ptp(fits) < 1e-12
    norms = [np.linalg.norm(long_range_hopping(n, 1.0, 2.1).k, 2) for n in (10, 20, 40, 80)]
    assert norms[-1] < 2 * norms[0]


def test_invalid_model_parameters():
    with pytest.raises(ValueError):
        tight_binding(1)
    with pytest.raises(ValueError):
        long_range_hopping(4, 1.0, 0.0)
    with pytest.raises(ValueError):
        build_hamiltonian({"name": "ising", "n": 4})


def test_build_hamiltonian():
    np.testing.assert_array_equal(build_hamiltonian({"name": "kitaev", "n": 4, "t": 0.5}).k, kitaev_chain(4, 0.5).k)
    np.testing.assert_array_equal(
        build_hamiltonian({"name": "long_range", "n": 5, "alpha": 3.0}).k, long_range_hopping(5, 1.0, 3.0).k
    )


def test_uniform_loss_matrices():
    gen = uniform_loss(3, 0.4)
    np.testing.assert_allclose(gen.x, 0.2 * np.eye(6), atol=1e-15)
    np.testing.assert_allclose(gen.y_matrix, -0.2 * np.kron(np.eye(3), SY), atol=1e-15)
    with pytest.raises(ValueError):
        uniform_loss(3, -1.0)


def test_cdw():
    m = cdw_covariance(2).m
    assert m[0, 1] == 1 and m[2, 3] == -1
    assert purity(cdw_covariance(6)) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        cdw_covariance(3)


def test_decay_profile():
    f = DecayProfile(2.0)
    assert f(0) == 1.0
    assert np.all(np.diff(f(np.arange(10))) < 0)


def test_site_block_norms_shape():
    bn = site_block_norms(tight_binding(5).k)
    assert bn.shape == (5, 5)
    assert bn[0, 1] == pytest.approx(0.25)


def test_clustering_constant():
    assert clustering_constant(np.zeros((8, 8)), 2.0)["c_fit"] == 0.0
    fit = clustering_constant(gibbs_covariance(tight_binding(12), 0.1), 2.0)
    assert 0 < fit["c_fit"] < np.inf
    fits = [
        clustering_constant(gibbs_covariance(long_range_hopping(n, 1.0, 2.1), 0.05), 2.1)["c_fit"]
        for n in (20, 40, 80)
    ]
    assert np.ptp(fits) / fits[0] < 0.01


def test_decay_integrals_closed_form():
    g, big_g = decay_integrals(2.0, 1.0)
    assert g == pytest.approx(2.0**-3 / 3)
    assert big_g == pytest.approx(2.0**-2 / 6)


def test_decay_integrals_quadrature_matches_closed_form():
    # D = 1 by quadrature through the general branch
    from scipy import integrate

    alpha = 2.3
    g_num = integrate.quad(lambda s: (s + 1) ** (-2 * alpha), 1.0, np.inf)[0]
    assert decay_integrals(alpha, 1.0)[0] == pytest.approx(g_num)
    g2, big_g2 = decay_integrals(3.0, 1.0, dimension=2)
    assert 0 < g2 and 0 < big_g2


def test_area_law_refuses_slow_decay():
    with pytest.raises(DivergentAreaLawError):
        area_law_bound(1.0, 1.0, LatticeSpec(10))
    with pytest.raises(DivergentAreaLawError):
        decay_integrals(0.8, 1.0)


def test_area_law_bound_values():
    assert area_law_bound(0.0, 2.0, LatticeSpec(10)) == 0.0
    assert area_law_bound(2.0, 2.0, LatticeSpec(10), c_g=3.0) == pytest.approx(3 * 4 * 2.0**-2 / 6)
    with pytest.raises(ValueError):
        LatticeSpec(1)


def test_finite_area_law_bound_holds():
    for n in (10, 20, 40):
        g = gibbs_covariance(long_range_hopping(n, 1.0, 1.5), 0.05)
        part = Bipartition.half_chain(n)
        c = clustering_constant(g, 1.5)["c_fit"]
        k_minus = 1 - max(np.linalg.norm(b, 2) for b in (g.m[: n, : n], g.m[n:, n:]))
        bound = finite_area_law_bound(c, 1.5, part.modes_a, part.modes_b, k_minus)
        assert negativity(g, part).value <= bound
    assert finite_area_law_bound(1.0, 2.0, [0], [1], k_minus=0.0) == np.inf
