"""
Model Hamiltonians, dissipators and locality/clustering diagnostics on 1D chains.

All Hamiltonians are returned as :class:`QuadraticHamiltonian` with the
Majorana matrix convention of :mod:`freeneg.gaussian`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .dynamics import LindbladGenerator
from .exceptions import DivergentAreaLawError
from .gaussian import CovarianceMatrix, QuadraticHamiltonian, _as_m, vacuum_covariance

__all__ = [
    "LatticeSpec",
    "DecayProfile",
    "hopping_hamiltonian",
    "tight_binding",
    "kitaev_chain",
    "long_range_hopping",
    "uniform_loss",
    "cdw_covariance",
    "site_block_norms",
    "clustering_constant",
    "locality_constant",
    "decay_integrals",
    "area_law_bound",
    "finite_area_law_bound",
    "build_hamiltonian",
]


@dataclass(frozen=True)
class LatticeSpec:
    length: int
    dimension: int = 1
    internal_dof: int = 1
    boundary: str = "open"

    def __post_init__(self):
        if self.length < 2:
            raise ValueError("lattice needs at least two sites")
        if self.boundary != "open":
            raise ValueError("only open boundaries are supported")


@dataclass(frozen=True)
class DecayProfile:
    """Power-law envelope ``F(r) = (r + 1)^-alpha``."""

    alpha: float

    def __call__(self, r):
        return (np.asarray(r, dtype=float) + 1.0) ** (-self.alpha)


def hopping_hamiltonian(hop: np.ndarray) -> QuadraticHamiltonian:
    """``H_op = -sum_{i<j} hop[i, j] (f_i^dag f_j + h.c.)`` for a real symmetric ``hop``."""
    hop = np.asarray(hop, dtype=float)
    n = hop.shape[0]
    k = np.zeros((2 * n, 2 * n))
    for i in range(n):
        for j in range(i + 1, n):
            tij = hop[i, j]
            if tij == 0.0:
                continue
            # f_i^dag f_j + h.c. = (i/2)(c_{2i} c_{2j+1} + c_{2j} c_{2i+1})
            k[2 * i, 2 * j + 1] -= tij / 4
            k[2 * j, 2 * i + 1] -= tij / 4
    return QuadraticHamiltonian(k - k.T)


def tight_binding(n: int, t: float = 1.0) -> QuadraticHamiltonian:
    """Open nearest-neighbour chain ``-t sum_i (f_i^dag f_{i+1} + h.c.)``."""
    if n < 2:
        raise ValueError("n must be >= 2")
    hop = np.zeros((n, n))
    idx = np.arange(n - 1)
    hop[idx, idx + 1] = hop[idx + 1, idx] = t
    return hopping_hamiltonian(hop)


def kitaev_chain(n: int, t: float = 1.0) -> QuadraticHamiltonian:
    """``-sum_i i c_{2i} c_{2i+1} + t sum_i i c_{2i+1} c_{2i+2}`` (open chain)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    k = np.zeros((2 * n, 2 * n))
    for p in range(n):
        k[2 * p, 2 * p + 1] = -0.5
    for p in range(n - 1):
        k[2 * p + 1, 2 * p + 2] = 0.5 * t
    return QuadraticHamiltonian(k - k.T)


def long_range_hopping(n: int, t: float = 1.0, alpha: float = 2.1) -> QuadraticHamiltonian:
    """Hopping amplitude ``t |i - j|^-alpha`` between every pair of sites."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if n < 2:
        raise ValueError("n must be >= 2")
    r = np.abs(np.subtract.outer(np.arange(n), np.arange(n))).astype(float)
    with np.errstate(divide="ignore"):
        hop = np.where(r > 0, t * r ** (-alpha), 0.0)
    return hopping_hamiltonian(hop)


def uniform_loss(n: int, gamma_rate: float, h: QuadraticHamiltonian | None = None) -> LindbladGenerator:
    """Jump operators ``sqrt(gamma) f_j`` on every site (plus an optional Hamiltonian)."""
    if gamma_rate < 0:
        raise ValueError("loss rate must be non-negative")
    lc = np.zeros((n, 2 * n), dtype=complex)
    amp = np.sqrt(gamma_rate) / 2
    for j in range(n):
        lc[j, 2 * j], lc[j, 2 * j + 1] = amp, 1j * amp
    if h is None:
        h = QuadraticHamiltonian(np.zeros((2 * n, 2 * n)))
    return LindbladGenerator.from_jump_operators(h, lc)


def cdw_covariance(n: int) -> CovarianceMatrix:
    """Charge-density wave with every second site filled (sites 1, 3, ... 0-based)."""
    if n % 2:
        raise ValueError("CDW state needs an even number of sites")
    return vacuum_covariance(n, occupied=range(1, n, 2))


def site_block_norms(mat, internal_dof: int = 1) -> np.ndarray:
    """Operator norms ``||Pi_r M Pi_r'||`` of the per-site Majorana blocks."""
    m = np.asarray(_as_m(mat) if isinstance(mat, CovarianceMatrix) else mat)
    w = 2 * internal_dof
    nsite = m.shape[0] // w
    blocks = m.reshape(nsite, w, nsite, w).transpose(0, 2, 1, 3)
    return np.linalg.norm(blocks, ord=2, axis=(2, 3))


def _fit_envelope(mat, alpha: float, internal_dof: int) -> dict:
    bn = site_block_norms(mat, internal_dof)
    r = np.abs(np.subtract.outer(np.arange(bn.shape[0]), np.arange(bn.shape[0])))
    ratio = bn / DecayProfile(alpha)(r)
    i, j = np.unravel_index(np.argmax(ratio), ratio.shape)
    return {"c_fit": float(ratio.max(initial=0.0)), "argmax_distance": int(r[i, j])}


def clustering_constant(gamma, alpha: float, internal_dof: int = 1) -> dict:
    """Smallest ``C`` with ``||Pi_r Gamma Pi_r'|| <= C F_alpha(|r - r'|)`` for all pairs."""
    return _fit_envelope(gamma, alpha, internal_dof)


def locality_constant(h: QuadraticHamiltonian, alpha: float, internal_dof: int = 1) -> dict:
    """Smallest ``h`` with ``||Pi_r H Pi_r'|| <= h F_alpha(|r - r'|)``."""
    return _fit_envelope(h.k, alpha, internal_dof)


def decay_integrals(alpha: float, r: float, dimension: int = 1) -> tuple:
    """
    ``g(r) = int_r^inf F(R)^2 R^(D-1) dR`` and ``G(r) = int_r^inf g(R) dR``.

    Closed forms in one dimension; quadrature otherwise.
    """
    if alpha <= (dimension + 1) / 2:
        raise DivergentAreaLawError(
            f"alpha={alpha} <= (D+1)/2={(dimension + 1) / 2}: G(r) diverges"
        )
    if dimension == 1:
        g = (r + 1) ** (1 - 2 * alpha) / (2 * alpha - 1)
        big_g = (r + 1) ** (2 - 2 * alpha) / ((2 * alpha - 1) * (2 * alpha - 2))
        return g, big_g

    def g_of(x):
        return integrate.quad(lambda s: (s + 1) ** (-2 * alpha) * s ** (dimension - 1), x, np.inf)[0]

    return g_of(r), integrate.quad(g_of, r, np.inf)[0]


def area_law_bound(
    c: float,
    alpha: float,
    lattice: LatticeSpec,
    dist: float = 1.0,
    boundary_size: int = 1,
    c_g: float = 1.0,
) -> float:
    """
    Asymptotic area-law certificate ``c_g C^2 |I| |dA| G(dist)``.

    ``c_g`` is a geometry constant the caller must supply; for checks against
    actual numbers use :func:`finite_area_law_bound`.
    """
    _, big_g = decay_integrals(alpha, dist, lattice.dimension)
    return float(c_g * c**2 * lattice.internal_dof * boundary_size * big_g)


def finite_area_law_bound(
    c: float,
    alpha: float,
    sites_a,
    sites_b,
    k_minus: float = 1.0,
    internal_dof: int = 1,
) -> float:
    """
    Rigorous finite-lattice bound ``k_-^-2 |I| C^2 sum_{r in A, r' in B} F(|r - r'|)^2``.

    Follows from ``E <= k_-^-2 ||Gamma_AB||_2^2 / 2`` and ``||block||_2^2 <= 2|I| ||block||^2``.
    """
    if k_minus <= 0:
        return float("inf")
    ra = np.asarray(list(sites_a), dtype=float)
    rb = np.asarray(list(sites_b), dtype=float)
    s = np.sum(DecayProfile(alpha)(np.abs(np.subtract.outer(ra, rb))) ** 2)
    return float(internal_dof * c**2 * s / k_minus**2)


def build_hamiltonian(spec: dict) -> QuadraticHamiltonian:
    """Construct a model from a config dict ``{"name": ..., "n": ..., ...}``."""
    name = spec["name"]
    n = int(spec["n"])
    t = float(spec.get("t", 1.0))
    if name == "tight_binding":
        return tight_binding(n, t)
    if name == "kitaev":
        return kitaev_chain(n, t)
    if name == "long_range":
        return long_range_hopping(n, t, float(spec.get("alpha", 2.1)))
    raise ValueError(f"unknown model {name!r}")
