"""
Fermionic Gaussian states at the level of Majorana covariance matrices.

Conventions
-----------
Mode ``j`` (0-based) owns the Majorana operators ``c[2j] = f_j + f_j^dag`` and
``c[2j+1] = -i (f_j - f_j^dag)``.  The covariance matrix

    Gamma[a, b] = 1/2 Tr([c_a, c_b] rho)

is purely imaginary and antisymmetric, so we store only its real part ``m``
with ``Gamma = 1j * m``.  The same holds for the Hamiltonian matrix ``H`` of
``H_op = sum_ab H[a, b] c_a c_b`` (stored as ``k`` with ``H = 1j * k``).

An empty mode has ``m[2j, 2j+1] = +1``, an occupied one ``-1``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import linalg
from scipy.stats import special_ortho_group

from .exceptions import InvalidCovarianceError, NumericalError

logger = logging.getLogger(__name__)

ANTISYM_RTOL = 1e-12
SPECTRAL_TOL = 1e-10
CLIP_TOL = 1e-8

__all__ = [
    "CovarianceMatrix",
    "QuadraticHamiltonian",
    "Bipartition",
    "BlockView",
    "ValidationReport",
    "validate",
    "ensure_physical",
    "symplectic_eigenvalues",
    "canonical_form",
    "gibbs_covariance",
    "partition",
    "norms",
    "purity",
    "random_mixed_covariance",
    "vacuum_covariance",
]


def _antisym(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a - a.T)


@dataclass(frozen=True)
class CovarianceMatrix:
    """Covariance matrix ``Gamma = 1j * m`` of an N-mode Gaussian state."""

    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
            raise InvalidCovarianceError(f"expected a 2N x 2N matrix, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    @property
    def n_modes(self) -> int:
        return self.m.shape[0] // 2

    @property
    def gamma(self) -> np.ndarray:
        """The complex (purely imaginary) covariance matrix."""
        return 1j * self.m

    def to_dict(self) -> dict:
        return {"n_modes": self.n_modes, "m": self.m.ravel().tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "CovarianceMatrix":
        n = int(data["n_modes"])
        m = np.asarray(data["m"], dtype=float)
        if m.size != 4 * n * n:
            raise InvalidCovarianceError(
                f"'m' has {m.size} entries, expected {4 * n * n} for n_modes={n}"
            )
        return cls(m.reshape(2 * n, 2 * n))

    @classmethod
    def from_gamma(cls, gamma: np.ndarray) -> "CovarianceMatrix":
        """Build from a purely imaginary complex matrix."""
        return cls(np.imag(np.asarray(gamma)))


@dataclass(frozen=True)
class QuadraticHamiltonian:
    """Quadratic Majorana Hamiltonian with matrix ``H = 1j * k``."""

    k: np.ndarray

    def __post_init__(self):
        k = np.array(self.k, dtype=float)
        if k.ndim != 2 or k.shape[0] != k.shape[1] or k.shape[0] % 2:
            raise ValueError(f"expected a 2N x 2N matrix, got shape {k.shape}")
        if np.max(np.abs(k + k.T), initial=0.0) > ANTISYM_RTOL * max(1.0, np.abs(k).max(initial=0.0)):
            raise ValueError("Hamiltonian matrix must be antisymmetric")
        k = _antisym(k)
        k.setflags(write=False)
        object.__setattr__(self, "k", k)

    @property
    def n_modes(self) -> int:
        return self.k.shape[0] // 2

    @property
    def matrix(self) -> np.ndarray:
        return 1j * self.k


@dataclass(frozen=True)
class Bipartition:
    """Split of the modes ``0..N-1`` into subsystems A and B."""

    n_modes: int
    modes_a: tuple
    modes_b: tuple = field(default=None)

    def __post_init__(self):
        a = tuple(int(j) for j in self.modes_a)
        if self.modes_b is None:
            b = tuple(j for j in range(self.n_modes) if j not in set(a))
        else:
            b = tuple(int(j) for j in self.modes_b)
        if len(set(a)) != len(a) or len(set(b)) != len(b):
            raise ValueError("mode lists must not contain duplicates")
        if set(a) & set(b):
            raise ValueError("subsystems A and B overlap")
        if set(a) | set(b) != set(range(self.n_modes)):
            raise ValueError(f"A and B must cover modes 0..{self.n_modes - 1} exactly")
        if not a or not b:
            raise ValueError("both subsystems must be non-empty")
        object.__setattr__(self, "modes_a", a)
        object.__setattr__(self, "modes_b", b)

    @classmethod
    def first(cls, n_modes: int, n_a: int) -> "Bipartition":
        """A = the first ``n_a`` modes (a left block of a chain)."""
        return cls(n_modes, tuple(range(n_a)))

    @classmethod
    def half_chain(cls, n_modes: int) -> "Bipartition":
        return cls.first(n_modes, n_modes // 2)

    @property
    def n_a(self) -> int:
        return len(self.modes_a)

    @property
    def n_b(self) -> int:
        return len(self.modes_b)

    @property
    def majorana_perm(self) -> np.ndarray:
        """Majorana index order with all of A before B."""
        return np.array([x for j in self.modes_a + self.modes_b for x in (2 * j, 2 * j + 1)])

    @property
    def majorana_mask_a(self) -> np.ndarray:
        """Boolean mask over the 2N Majorana indices selecting subsystem A."""
        mask = np.zeros(2 * self.n_modes, dtype=bool)
        for j in self.modes_a:
            mask[2 * j] = mask[2 * j + 1] = True
        return mask

    def block_diagonal_part(self, mat: np.ndarray) -> np.ndarray:
        """Keep only the A-A and B-B blocks of ``mat`` (original ordering)."""
        mask = self.majorana_mask_a
        same = mask[:, None] == mask[None, :]
        return np.where(same, mat, 0)

    def off_diagonal_part(self, mat: np.ndarray) -> np.ndarray:
        return mat - self.block_diagonal_part(mat)

    def to_dict(self) -> dict:
        return {"modes_a": list(self.modes_a), "modes_b": list(self.modes_b)}


@dataclass(frozen=True)
class BlockView:
    """Blocks of ``m`` after reordering Majoranas so that A precedes B."""

    m_a: np.ndarray
    m_b: np.ndarray
    m_ab: np.ndarray

    @property
    def m_ba(self) -> np.ndarray:
        return -self.m_ab.T

    @property
    def gamma_a(self) -> np.ndarray:
        return 1j * self.m_a

    @property
    def gamma_b(self) -> np.ndarray:
        return 1j * self.m_b

    @property
    def gamma_ab(self) -> np.ndarray:
        return 1j * self.m_ab

    @property
    def gamma_ba(self) -> np.ndarray:
        return 1j * self.m_ba

    @property
    def permuted(self) -> np.ndarray:
        """The full real matrix in the A-first ordering."""
        return np.block([[self.m_a, self.m_ab], [self.m_ba, self.m_b]])

    def reassemble(self, part: Bipartition) -> CovarianceMatrix:
        perm = part.majorana_perm
        m = np.empty((perm.size, perm.size))
        m[np.ix_(perm, perm)] = self.permuted
        return CovarianceMatrix(m)


@dataclass(frozen=True)
class ValidationReport:
    antisymmetry_defect: float
    max_singular_value: float
    nus: np.ndarray
    valid: bool

    def __bool__(self):
        return self.valid


def _as_m(gamma) -> np.ndarray:
    if isinstance(gamma, CovarianceMatrix):
        return gamma.m
    return np.asarray(gamma, dtype=float)


def symplectic_eigenvalues(gamma) -> np.ndarray:
    """Return the N values ``nu_j >= 0`` with spectrum of Gamma = {+-nu_j}."""
    m = _antisym(_as_m(gamma))
    ev = linalg.eigvalsh(1j * m)
    n = m.shape[0] // 2
    return np.sort(np.abs(ev[n:]))[::-1]


def validate(gamma) -> ValidationReport:
    """Check antisymmetry and the spectral bound ``||Gamma|| <= 1``."""
    m = _as_m(gamma)
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    defect = float(np.abs(m + m.T).max(initial=0.0))
    svals = linalg.svdvals(m) if m.size else np.zeros(0)
    smax = float(svals.max(initial=0.0))
    nus = symplectic_eigenvalues(m)
    ok = defect <= ANTISYM_RTOL * scale and smax <= 1.0 + SPECTRAL_TOL
    return ValidationReport(defect, smax, nus, ok)


def ensure_physical(m: np.ndarray, *, clip_tol: float = CLIP_TOL) -> CovarianceMatrix:
    """
    Antisymmetrize ``m`` and clip symplectic eigenvalues slightly above one.

    Violations up to ``clip_tol`` are clipped with a warning; anything larger
    raises :class:`InvalidCovarianceError`.
    """
    m = _antisym(np.asarray(m, dtype=float))
    smax = float(linalg.svdvals(m).max(initial=0.0))
    if smax <= 1.0 + SPECTRAL_TOL:
        return CovarianceMatrix(m)
    if smax > 1.0 + clip_tol:
        raise InvalidCovarianceError(f"largest singular value {smax:.3e} exceeds 1")
    logger.warning("clipping covariance spectrum: max singular value %.3e", smax)
    u, s, vh = linalg.svd(m)
    m = _antisym((u * np.minimum(s, 1.0)) @ vh)
    return CovarianceMatrix(m)


def canonical_form(gamma, tol: float = 1e-8):
    """
    Real orthogonal ``O`` and ``nus >= 0`` with ``m = O (+)_j nu_j J O^T``.

    ``J = [[0, 1], [-1, 0]]``.  Uses the real Schur form of the antisymmetric
    matrix; zero eigenvalues that Schur leaves as 1x1 blocks are paired up.
    """
    m = _antisym(_as_m(gamma))
    n2 = m.shape[0]
    t, z = linalg.schur(m, output="real")
    pairs, singles = [], []
    i = 0
    while i < n2:
        if i + 1 < n2 and t[i + 1, i] != 0.0:
            pairs.append((i, i + 1))
            i += 2
        else:
            singles.append(i)
            i += 1
    pairs += list(zip(singles[0::2], singles[1::2]))
    cols, nus = [], []
    for p, q in pairs:
        b = 0.5 * (t[p, q] - t[q, p])
        if b < 0:
            p, q, b = q, p, -b
        cols += [p, q]
        nus.append(b)
    o = z[:, cols]
    nus = np.array(nus)
    d = np.zeros_like(m)
    for j, nu in enumerate(nus):
        d[2 * j, 2 * j + 1], d[2 * j + 1, 2 * j] = nu, -nu
    err = np.abs(o @ d @ o.T - m).max(initial=0.0)
    if err > tol:
        raise NumericalError(f"canonical form reconstruction error {err:.2e}")
    return o, nus


def gibbs_covariance(h: QuadraticHamiltonian, beta: float) -> CovarianceMatrix:
    """
    Covariance of ``exp(-beta H_op) / Z``: ``Gamma = tanh(2 beta H)``.

    For small ``beta`` this is ``Gamma ~ 2 beta H``.
    """
    if not np.isfinite(beta):
        raise ValueError("beta must be finite")
    eps, u = linalg.eigh(1j * h.k)
    gam = (u * np.tanh(2.0 * beta * eps)) @ u.conj().T
    return CovarianceMatrix(_antisym(np.imag(gam)))


def partition(gamma, part: Bipartition) -> BlockView:
    m = _as_m(gamma)
    if m.shape[0] != 2 * part.n_modes:
        raise IndexError(
            f"bipartition covers {part.n_modes} modes, covariance has {m.shape[0] // 2}"
        )
    perm = part.majorana_perm
    mp = m[np.ix_(perm, perm)]
    na = 2 * part.n_a
    return BlockView(mp[:na, :na].copy(), mp[na:, na:].copy(), mp[:na, na:].copy())


def norms(matrix) -> dict:
    """Operator, Frobenius and trace norms of a (complex) matrix."""
    s = linalg.svdvals(np.atleast_2d(np.asarray(matrix)))
    return {
        "operator_norm": float(s.max(initial=0.0)),
        "frobenius_norm": float(np.sqrt(np.sum(s**2))),
        "trace_norm": float(np.sum(s)),
    }


def purity(gamma) -> float:
    """``Tr rho^2 = prod_j (1 + nu_j^2) / 2``."""
    nus = symplectic_eigenvalues(gamma)
    return float(np.prod((1.0 + nus**2) / 2.0))


def random_mixed_covariance(n_modes: int, seed=None, nu_max: float = 0.95) -> CovarianceMatrix:
    """
    Haar-random orthogonal rotation of a canonical form with ``nu_j ~ U[0, nu_max]``.

    ``seed`` may be an int or a :class:`numpy.random.Generator`.
    """
    if not 0.0 <= nu_max <= 1.0:
        raise ValueError("nu_max must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    nus = rng.uniform(0.0, nu_max, size=n_modes)
    o = special_ortho_group.rvs(2 * n_modes, random_state=rng) if n_modes > 0 else np.eye(0)
    d = np.zeros((2 * n_modes, 2 * n_modes))
    for j, nu in enumerate(nus):
        d[2 * j, 2 * j + 1], d[2 * j + 1, 2 * j] = nu, -nu
    return CovarianceMatrix(_antisym(o @ d @ o.T))


def vacuum_covariance(n_modes: int, occupied: Sequence[int] = ()) -> CovarianceMatrix:
    """Fock-state covariance; modes listed in ``occupied`` are filled."""
    occ = set(occupied)
    m = np.zeros((2 * n_modes, 2 * n_modes))
    for j in range(n_modes):
        s = -1.0 if j in occ else 1.0
        m[2 * j, 2 * j + 1], m[2 * j + 1, 2 * j] = s, -s
    return CovarianceMatrix(m)
