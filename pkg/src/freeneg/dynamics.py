"""
Quadratic Lindblad dynamics of the covariance matrix.

For jump operators ``L_mu = sum_j L[mu, j] c_j`` and ``B = L^dag L`` (that is
``B_ij = sum_mu conj(L_mu,i) L_mu,j``) the covariance obeys

    dGamma/dt = -i [4H, Gamma] - {X, Gamma} + 2Y,   X = 2 Re B,  Y = 2i Im B.

In the real storage ``Gamma = i g``, ``H = i k``, ``Y = i y`` this reads

    dg/dt = -A g - g A^T + 2 y,   A = X - 4 k,

which is what everything below integrates.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .exceptions import InvalidCovarianceError, NumericalError
from .gaussian import (
    Bipartition,
    CovarianceMatrix,
    QuadraticHamiltonian,
    _antisym,
    _as_m,
    ensure_physical,
)
from .negativity import negativity

logger = logging.getLogger(__name__)

LYAP_SINGULAR_TOL = 1e-10

__all__ = [
    "LindbladGenerator",
    "dgamma_dt",
    "steady_state",
    "evolve_exact",
    "evolve_rk4",
    "default_dt",
    "negativity_trajectory",
]


@dataclass(frozen=True)
class LindbladGenerator:
    """Hamiltonian part ``k`` (``H = 1j k``) and dissipator matrices ``x``, ``y`` (``Y = 1j y``)."""

    k: np.ndarray
    x: np.ndarray
    y: np.ndarray
    l_coeffs: np.ndarray = field(default=None, compare=False)

    @classmethod
    def from_jump_operators(cls, h: QuadraticHamiltonian | None, l_coeffs, n_modes=None):
        """Build from an ``M x 2N`` complex coefficient matrix of the jump operators."""
        lc = np.atleast_2d(np.asarray(l_coeffs, dtype=complex))
        n2 = lc.shape[1] if lc.size else 2 * (h.n_modes if h is not None else n_modes)
        b = lc.conj().T @ lc if lc.size else np.zeros((n2, n2), dtype=complex)
        k = h.k if h is not None else np.zeros((n2, n2))
        return cls(np.asarray(k, float), 2.0 * b.real, 2.0 * b.imag, lc)

    @property
    def n_modes(self) -> int:
        return self.k.shape[0] // 2

    @property
    def h_matrix(self) -> np.ndarray:
        return 1j * self.k

    @property
    def y_matrix(self) -> np.ndarray:
        return 1j * self.y

    @property
    def drift(self) -> np.ndarray:
        """``A = X + 4iH`` as a real matrix."""
        return self.x - 4.0 * self.k

    def is_physical(self, tol: float = 1e-10) -> bool:
        """``X + Y >= 0`` and ``X - Y >= 0``."""
        for sign in (1, -1):
            if linalg.eigvalsh(self.x + sign * self.y_matrix).min(initial=0.0) < -tol:
                return False
        return True

    def __add__(self, other: "LindbladGenerator") -> "LindbladGenerator":
        return LindbladGenerator(self.k + other.k, self.x + other.x, self.y + other.y)

    def split(self, part: Bipartition):
        """Return ``(local, inter)`` generators: block-diagonal and off-diagonal parts."""
        loc = LindbladGenerator(
            part.block_diagonal_part(self.k),
            part.block_diagonal_part(self.x),
            part.block_diagonal_part(self.y),
        )
        inter = LindbladGenerator(
            part.off_diagonal_part(self.k),
            part.off_diagonal_part(self.x),
            part.off_diagonal_part(self.y),
        )
        return loc, inter


def dgamma_dt(gamma, gen: LindbladGenerator) -> np.ndarray:
    """Right-hand side of the covariance equation of motion (real part ``dg/dt``)."""
    g = _as_m(gamma)
    a = gen.drift
    return -a @ g - g @ a.T + 2.0 * gen.y


def _lyapunov_singular(a: np.ndarray) -> bool:
    ev = linalg.eigvals(a)
    sums = ev[:, None] + ev.conj()[None, :]
    return bool(np.abs(sums).min() < LYAP_SINGULAR_TOL)


def steady_state(gen: LindbladGenerator) -> CovarianceMatrix:
    """Solve ``A g + g A^T = 2 y``; raises if the Lyapunov operator is singular."""
    a = gen.drift
    if _lyapunov_singular(a):
        raise NumericalError("Lyapunov equation is singular (no unique steady state)")
    g = linalg.solve_continuous_lyapunov(a, 2.0 * gen.y)
    return CovarianceMatrix(_antisym(g))


def _noise_integral(a: np.ndarray, y: np.ndarray, t: float):
    """``(e^{-At}, int_0^t e^{-As} 2y e^{-A^T s} ds)`` via one block exponential."""
    n = a.shape[0]
    big = np.zeros((2 * n, 2 * n))
    big[:n, :n] = -a
    big[:n, n:] = 2.0 * y
    big[n:, n:] = a.T
    f = linalg.expm(big * t)
    prop = f[:n, :n]
    return prop, f[:n, n:] @ prop.T


def evolve_exact(gamma0, gen: LindbladGenerator, t: float) -> CovarianceMatrix:
    """
    ``Gamma(t) = Gamma_ss + e^{-At} (Gamma_0 - Gamma_ss) e^{-A^dag t}``.

    When the Lyapunov equation has no unique solution (e.g. purely unitary
    dynamics) the noise integral is evaluated directly instead.
    """
    g0 = _as_m(gamma0)
    if t == 0:
        return CovarianceMatrix(g0)
    a = gen.drift
    if _lyapunov_singular(a):
        prop, noise = _noise_integral(a, gen.y, t)
        g = prop @ g0 @ prop.T + noise
    else:
        gss = steady_state(gen).m
        prop = linalg.expm(-a * t)
        g = gss + prop @ (g0 - gss) @ prop.T
    return ensure_physical(g)


def default_dt(gen: LindbladGenerator) -> float:
    scale = 4 * linalg.norm(gen.k, 2) + linalg.norm(gen.x, 2) + linalg.norm(gen.y, 2)
    return min(1e-2, 0.1 / scale) if scale > 0 else 1e-2


def evolve_rk4(gamma0, gen: LindbladGenerator, t: float, dt: float | None = None) -> CovarianceMatrix:
    """Classical RK4; the last step is shortened to land exactly on ``t``."""
    if dt is None:
        dt = default_dt(gen)
    if dt <= 0:
        raise ValueError("dt must be positive")
    g = np.array(_as_m(gamma0), dtype=float)
    a, y2 = gen.drift, 2.0 * gen.y

    def rhs(m):
        return -a @ m - m @ a.T + y2

    n_full = int(np.floor(t / dt + 1e-12))
    steps = [dt] * n_full
    rest = t - n_full * dt
    if rest > 1e-15 * max(1.0, t):
        steps.append(rest)
    for h in steps:
        k1 = rhs(g)
        k2 = rhs(g + 0.5 * h * k1)
        k3 = rhs(g + 0.5 * h * k2)
        k4 = rhs(g + h * k3)
        g = _antisym(g + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4))
    smax = linalg.norm(g, 2) if g.size else 0.0
    if smax > 1 + 1e-6:
        raise NumericalError(f"RK4 left the physical region (||Gamma|| = {smax:.6f}); reduce dt")
    try:
        return ensure_physical(g)
    except InvalidCovarianceError:
        # slightly above 1 but within the RK4 abort threshold
        u, s, vh = linalg.svd(g)
        return CovarianceMatrix(_antisym((u * np.minimum(s, 1.0)) @ vh))


def negativity_trajectory(gamma0, gen: LindbladGenerator, times, part: Bipartition):
    """List of ``(t, E(t))`` along the exact evolution."""
    times = np.asarray(times, dtype=float)
    if np.any(np.diff(times) < 0):
        raise ValueError("times must be sorted")
    out = []
    for t in times:
        g = evolve_exact(gamma0, gen, float(t))
        out.append((float(t), negativity(g, part).value))
    return out
