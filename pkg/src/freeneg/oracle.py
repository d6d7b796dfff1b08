"""
Exponential-cost reference path: dense density matrices and the fermionic
partial transpose, used to cross-check the covariance-matrix formulas.

The Fock basis is ordered with mode 0 as the most significant bit, and
Majoranas are built by a Jordan-Wigner string of ``(-1)^n`` factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import linalg

from .exceptions import SizeCapError
from .gaussian import Bipartition, CovarianceMatrix, _as_m, canonical_form

MAX_DENSE_MODES = 6
MAX_TRANSPOSE_MODES = 5

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.diag([1.0, -1.0]).astype(complex)

__all__ = [
    "DenseState",
    "MajoranaBasis",
    "jordan_wigner_basis",
    "density_from_covariance",
    "covariance_from_density",
    "majorana_expansion",
    "partial_transpose",
    "twisted_partial_transpose",
    "oracle_negativity",
    "quadratic_operator",
    "gibbs_density",
]


@dataclass(frozen=True)
class MajoranaBasis:
    ops: tuple

    @property
    def n_modes(self) -> int:
        return len(self.ops) // 2

    @property
    def dim(self) -> int:
        return 2**self.n_modes

    def parity_a(self, modes) -> np.ndarray:
        """``prod_{j in A} (i c_{2j} c_{2j+1})`` (equals ``(-1)^{N_A} (-1)^{F_A}``)."""
        p = np.eye(self.dim, dtype=complex)
        for j in modes:
            p = p @ (1j * self.ops[2 * j] @ self.ops[2 * j + 1])
        return p


@dataclass(frozen=True)
class DenseState:
    n_modes: int
    rho: np.ndarray

    def check(self, tol: float = 1e-10) -> dict:
        herm = float(np.abs(self.rho - self.rho.conj().T).max())
        tr = complex(np.trace(self.rho))
        emin = float(linalg.eigvalsh(0.5 * (self.rho + self.rho.conj().T)).min())
        return {
            "hermiticity_defect": herm,
            "trace": tr,
            "min_eigenvalue": emin,
            "valid": herm <= tol and abs(tr - 1) <= tol and emin >= -tol,
        }


def _cap(n_modes: int, cap: int, what: str):
    if n_modes > cap:
        raise SizeCapError(f"{what} supports at most {cap} modes, got {n_modes}")


@lru_cache(maxsize=None)
def _jw(n_modes: int) -> tuple:
    ops = []
    for j in range(n_modes):
        for s in (_SX, _SY):
            mat = np.ones((1, 1), dtype=complex)
            for op in [_SZ] * j + [s] + [np.eye(2)] * (n_modes - j - 1):
                mat = np.kron(mat, op)
            mat.setflags(write=False)
            ops.append(mat)
    return tuple(ops)


def jordan_wigner_basis(n_modes: int) -> MajoranaBasis:
    _cap(n_modes, MAX_DENSE_MODES, "jordan_wigner_basis")
    return MajoranaBasis(_jw(n_modes))


def density_from_covariance(gamma) -> DenseState:
    """Dense ``rho = prod_j (1 - i nu_j c'_{2j} c'_{2j+1}) / 2`` in rotated Majoranas."""
    m = _as_m(gamma)
    n = m.shape[0] // 2
    _cap(n, MAX_DENSE_MODES, "density_from_covariance")
    basis = jordan_wigner_basis(n)
    o, nus = canonical_form(m)
    ops = np.array(basis.ops)
    rotated = np.einsum("jk,jab->kab", o, ops)
    eye = np.eye(basis.dim, dtype=complex)
    rho = eye.copy()
    for j, nu in enumerate(nus):
        rho = rho @ (eye - 1j * nu * rotated[2 * j] @ rotated[2 * j + 1]) / 2
    return DenseState(n, rho)


def covariance_from_density(state: DenseState) -> CovarianceMatrix:
    """``Gamma_ab = 1/2 Tr([c_a, c_b] rho)``."""
    ops = np.array(jordan_wigner_basis(state.n_modes).ops)
    # Tr(c_a c_b rho) for all a, b
    corr = np.einsum("aij,bjk,ki->ab", ops, ops, state.rho)
    gam = 0.5 * (corr - corr.T)
    return CovarianceMatrix(np.imag(gam))


@lru_cache(maxsize=None)
def _monomials(n_modes: int):
    """All ordered Majorana products ``c_S``, indexed by bitmask S."""
    ops = _jw(n_modes)
    n2 = 2 * n_modes
    dim = 2**n_modes
    mons = np.empty((1 << n2, dim, dim), dtype=complex)
    mons[0] = np.eye(dim)
    for mask in range(1, 1 << n2):
        top = mask.bit_length() - 1
        mons[mask] = mons[mask ^ (1 << top)] @ ops[top]
    mons.setflags(write=False)
    degree = np.array([bin(s).count("1") for s in range(1 << n2)])
    return mons, degree


def majorana_expansion(state: DenseState) -> np.ndarray:
    """Coefficients ``Tr(c_S^dag rho) / 2^N`` for every bitmask S."""
    _cap(state.n_modes, MAX_TRANSPOSE_MODES, "majorana_expansion")
    mons, _ = _monomials(state.n_modes)
    # Tr(c_S^dag rho) = sum_ij conj(c_S)_ij rho_ij
    return np.einsum("sij,ij->s", mons.conj(), state.rho) / 2**state.n_modes


def _a_mask_bits(part: Bipartition) -> int:
    bits = 0
    for j in part.modes_a:
        bits |= (1 << (2 * j)) | (1 << (2 * j + 1))
    return bits


def partial_transpose(state: DenseState, part: Bipartition, *, phase: bool = True) -> np.ndarray:
    """
    Untwisted fermionic partial transpose: ``c_S -> i^{|S cap A|} c_S``.

    Only even monomials are kept.  With ``phase=False`` the expansion is simply
    reassembled, which reproduces ``rho`` and checks the coefficient convention.
    """
    coef = majorana_expansion(state)
    mons, degree = _monomials(state.n_modes)
    even = degree % 2 == 0
    if phase:
        abits = _a_mask_bits(part)
        k_a = np.array([bin(s & abits).count("1") for s in range(coef.size)])
        coef = coef * (1j**k_a)
    return np.einsum("s,sij->ij", coef[even], mons[even])


def twisted_partial_transpose(state: DenseState, part: Bipartition) -> np.ndarray:
    """``rho^{T_A} P_A`` with ``P_A = prod_{j in A} (i c_{2j} c_{2j+1})``."""
    pt = partial_transpose(state, part)
    return pt @ jordan_wigner_basis(state.n_modes).parity_a(part.modes_a)


def oracle_negativity(gamma, part: Bipartition, *, check_hermitian: bool = True) -> float:
    """``ln || rho^{T_A} ||_1`` from the spectrum of the twisted transpose."""
    m = _as_m(gamma)
    _cap(m.shape[0] // 2, MAX_TRANSPOSE_MODES, "oracle_negativity")
    tw = twisted_partial_transpose(density_from_covariance(m), part)
    herm = np.abs(tw - tw.conj().T).max()
    if check_hermitian and herm > 1e-9:
        raise ArithmeticError(f"twisted partial transpose not Hermitian (defect {herm:.2e})")
    ev = linalg.eigvalsh(0.5 * (tw + tw.conj().T))
    return float(np.log(np.sum(np.abs(ev))))


def quadratic_operator(k: np.ndarray) -> np.ndarray:
    """Dense ``sum_ab H_ab c_a c_b`` for ``H = 1j * k``."""
    n = k.shape[0] // 2
    ops = np.array(jordan_wigner_basis(n).ops)
    return 1j * np.einsum("ab,aij,bjk->ik", k, ops, ops)


def gibbs_density(k: np.ndarray, beta: float) -> DenseState:
    """Dense ``exp(-beta H_op) / Z`` built directly from the operator."""
    h = quadratic_operator(np.asarray(k, dtype=float))
    h = 0.5 * (h + h.conj().T)
    w, v = linalg.eigh(h)
    p = np.exp(-beta * (w - w.min()))
    rho = (v * (p / p.sum())) @ v.conj().T
    return DenseState(k.shape[0] // 2, rho)
