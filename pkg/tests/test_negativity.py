import numpy as np
import pytest

from freeneg import (
    Bipartition,
    CovarianceMatrix,
    SingularGammaA,
    evolve_exact,
    gamma_a_zero_negativity,
    negativity,
    negativity_via_twisted,
    partition,
    random_mixed_covariance,
    twisted_covariance,
    uniform_loss,
)
from freeneg.negativity import build_pencil, pencil_spectrum

from conftest import SX, SY, random_cut, two_mode_gamma, two_mode_gibbs_negativity


def _direct_poly(b, lam):
    """``lam^(2 N_A) det([[Gamma_A + I/lam, Gamma_AB], [Gamma_BA, Gamma_B - lam I]])``."""
    na, nb = b.m_a.shape[0], b.m_b.shape[0]
    mat = np.block(
        [[b.gamma_a + np.eye(na) / lam, b.gamma_ab], [b.gamma_ba, b.gamma_b - lam * np.eye(nb)]]
    )
    return lam**na * np.linalg.det(mat)


def test_pencil_of_zero_state():
    part = Bipartition(3, (0,))
    p = build_pencil(partition(np.zeros((6, 6)), part))
    assert p.det(2.0) == pytest.approx((-2.0) ** 4)
    spec = pencil_spectrum(build_pencil(partition(np.zeros((4, 4)), Bipartition(2, (0,)))))
    pairs = sorted(zip(np.abs(spec.s_diag), np.abs(spec.t_diag)))
    np.testing.assert_allclose(pairs, [(0, 1), (0, 1), (1, 0), (1, 0)], atol=1e-14)
    assert np.all(spec.roots == 0)


@pytest.mark.parametrize("bj", [0.3, 1.0, 2.5])
def test_pencil_two_mode_gibbs_polynomial(bj, two_mode_cut):
    g = two_mode_gamma(np.tanh(bj / 2))
    p = build_pencil(partition(g, two_mode_cut))
    for lam in (0.5, 2.0, 0.3 + 0.7j):
        assert p.det(lam) == pytest.approx((1 + np.tanh(bj / 2) ** 2) ** 2 * lam**2, rel=1e-12)
    spec = pencil_spectrum(p)
    np.testing.assert_allclose(np.abs(spec.roots), 0, atol=1e-12)


def test_pencil_matches_direct_determinant(rng):
    for n in (2, 4, 6):
        g = random_mixed_covariance(n, rng)
        part = random_cut(n, rng)
        b = partition(g, part)
        lam = 0.7 + 0.2j
        assert build_pencil(b).det(lam) == pytest.approx(_direct_poly(b, lam), rel=1e-9)


def test_spectrum_abs_poly_on_unit_circle(rng):
    g = random_mixed_covariance(5, rng)
    part = random_cut(5, rng)
    p = build_pencil(partition(g, part))
    spec = pencil_spectrum(p)
    for phi in np.linspace(0, 2 * np.pi, 7):
        lam = np.exp(1j * phi)
        assert spec.abs_poly(lam) == pytest.approx(abs(p.det(lam)), rel=1e-8)


def test_two_mode_loss_roots(two_mode_cut):
    gen = uniform_loss(2, 1.0)
    for t in (0.2, 1.0, 3.0):
        g = evolve_exact(two_mode_gamma(), gen, t)
        spec = pencil_spectrum(build_pencil(partition(g, two_mode_cut)))
        e = np.exp(-t)
        b = 2 * e**2 / (1 - e) ** 2 + 1
        lm, lp = np.sqrt(b - np.sqrt(b * b - 1)), np.sqrt(b + np.sqrt(b * b - 1))
        assert lm < 1 < lp
        np.testing.assert_allclose(np.abs(spec.roots), [lm, lm, lp, lp], rtol=1e-8)


def test_negativity_of_zero_state():
    assert negativity(np.zeros((8, 8)), Bipartition(4, (0, 2))).value == 0.0


@pytest.mark.parametrize("bj", [0.0, 0.1, 1.0, 5.0])
def test_negativity_two_mode_gibbs(bj, two_mode_cut):
    e = negativity(two_mode_gamma(np.tanh(bj / 2)), two_mode_cut).value
    assert e == pytest.approx(two_mode_gibbs_negativity(bj), abs=1e-12)


def test_negativity_two_mode_gibbs_reference_value(two_mode_cut):
    # ln(2 cosh 1 / (1 + cosh 1)) = 0.1935518...
    e = negativity(two_mode_gamma(np.tanh(0.5)), two_mode_cut).value
    assert e == pytest.approx(0.1935518165664721, abs=1e-12)


def test_negativity_maximally_entangled(two_mode_cut):
    assert negativity(two_mode_gamma(), two_mode_cut).value == pytest.approx(np.log(2), abs=1e-14)


def test_negativity_zero_diagonal_block_closed_form(rng):
    for _ in range(10):
        n = int(rng.integers(2, 7))
        part = random_cut(n, rng)
        g = random_mixed_covariance(n, rng).m.copy()
        idx = np.flatnonzero(part.majorana_mask_a)
        g[np.ix_(idx, idx)] = 0
        # shrink so the result stays physical
        g *= 0.9 / max(1.0, np.linalg.norm(g, 2))
        assert negativity(g, part).value == pytest.approx(gamma_a_zero_negativity(g, part), abs=1e-10)


def test_negativity_json():
    d = negativity(two_mode_gamma(0.5), Bipartition(2, (0,))).to_dict()
    assert set(d) == {"value", "roots", "infinite_count"}
    assert all(set(r) == {"re", "im"} for r in d["roots"])


def test_twisted_covariance_product_state(rng):
    ga = random_mixed_covariance(2, rng).m
    gb = random_mixed_covariance(1, rng).m
    m = np.zeros((6, 6))
    m[:4, :4], m[4:, 4:] = ga, gb
    tc = twisted_covariance(partition(m, Bipartition(3, (0, 1))))
    np.testing.assert_allclose(tc.gt[:4, :4], -np.linalg.inv(1j * ga), atol=1e-12)
    np.testing.assert_allclose(tc.gt[4:, 4:], 1j * gb, atol=1e-12)
    np.testing.assert_allclose(tc.gt[:4, 4:], 0)


def test_twisted_covariance_eigenvalues_are_pencil_roots(rng):
    for _ in range(5):
        g = random_mixed_covariance(4, rng)
        part = random_cut(4, rng)
        b = partition(g, part)
        ev = np.sort(np.abs(twisted_covariance(b).eigenvalues()))
        roots = np.sort(np.abs(pencil_spectrum(build_pencil(b)).roots))
        np.testing.assert_allclose(ev, roots, rtol=1e-8, atol=1e-10)


def test_twisted_requires_invertible_gamma_a(two_mode_cut):
    with pytest.raises(SingularGammaA):
        negativity_via_twisted(two_mode_gamma(0.5), two_mode_cut)


def test_path_equivalence(rng):
    done = 0
    while done < 200:
        n = int(rng.integers(2, 9))
        g = random_mixed_covariance(n, rng)
        part = random_cut(n, rng)
        if np.linalg.svd(partition(g, part).m_a, compute_uv=False).min() < 1e-3:
            continue
        assert negativity(g, part).value == pytest.approx(negativity_via_twisted(g, part), abs=1e-8)
        done += 1


def test_continuity_at_singular_gamma_a(rng):
    n = 4
    part = Bipartition(n, (0, 1))
    base = 0.8 * random_mixed_covariance(n, rng).m
    idx = np.flatnonzero(part.majorana_mask_a)
    base[np.ix_(idx, idx)] = 0
    e0 = negativity(base, part).value
    w = rng.normal(size=(4, 4))
    w = (w - w.T) / np.linalg.norm(w - w.T, 2)
    for eps in (1e-2, 1e-4, 1e-6):
        g = base.copy()
        g[np.ix_(idx, idx)] = eps * w
        assert abs(negativity(g, part).value - e0) <= 10 * eps


def test_roots_pair_up(rng):
    for _ in range(20):
        n = int(rng.integers(2, 7))
        g = random_mixed_covariance(n, rng)
        roots = negativity(g, random_cut(n, rng)).spectrum.roots
        assert np.all(np.abs(roots.imag) <= 1e-8 * (1 + np.abs(roots)))
        mags = np.sort(np.abs(roots))
        np.testing.assert_allclose(mags[0::2], mags[1::2], rtol=1e-6, atol=1e-8)


def test_product_states_have_zero_negativity(rng):
    for _ in range(20):
        na, nb = rng.integers(1, 4, size=2)
        m = np.zeros((2 * (na + nb),) * 2)
        m[: 2 * na, : 2 * na] = random_mixed_covariance(int(na), rng).m
        m[2 * na :, 2 * na :] = random_mixed_covariance(int(nb), rng).m
        assert negativity(m, Bipartition.first(int(na + nb), int(na))).value <= 1e-10


def test_negativity_is_nonnegative(rng):
    for _ in range(50):
        n = int(rng.integers(1, 6)) + 1
        assert negativity(random_mixed_covariance(n, rng), random_cut(n, rng)).value >= 0


def test_negativity_of_fock_states_is_zero():
    from freeneg import cdw_covariance

    for n in (2, 4, 6):
        assert negativity(cdw_covariance(n), Bipartition.half_chain(n)).value == 0.0
