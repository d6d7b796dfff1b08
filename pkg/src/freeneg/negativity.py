"""
Logarithmic negativity of Gaussian states from the twisted characteristic polynomial.

With ``Gamma`` split into blocks (A first), the twisted characteristic polynomial

    P(lam) = lam^(2 N_A) det([[Gamma_A + I/lam, Gamma_AB], [Gamma_BA, Gamma_B - lam I]])

equals ``det(a0 + lam a1)`` for the pencil

    a0 = [[I_A, 0], [Gamma_BA, Gamma_B]],   a1 = [[Gamma_A, Gamma_AB], [0, -I_B]].

The negativity is ``E = 1/2 ln |P_>(0)|`` where ``P_>`` keeps the roots
outside the unit disk.  From the generalized Schur form ``(S, T)`` of the
pencil this is ``E = 1/2 sum_j ln max(|s_j|, |t_j|)``, which stays
well-defined when ``Gamma_A`` is singular (roots at infinity).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .exceptions import NumericalError, SingularGammaA
from .gaussian import Bipartition, BlockView, CovarianceMatrix, partition

logger = logging.getLogger(__name__)

UNIT_CIRCLE_TOL = 1e-9
NEGATIVE_FLOOR = -1e-10
SINGULAR_TOL = 1e-8

__all__ = [
    "TwistedPencil",
    "PencilSpectrum",
    "NegativityResult",
    "TwistedCovariance",
    "build_pencil",
    "pencil_spectrum",
    "negativity",
    "twisted_covariance",
    "negativity_via_twisted",
    "gamma_a_zero_negativity",
]


@dataclass(frozen=True)
class TwistedPencil:
    a0: np.ndarray
    a1: np.ndarray
    n_a: int

    def det(self, lam: complex) -> complex:
        """Evaluate ``P(lam) = det(a0 + lam a1)`` directly."""
        return complex(linalg.det(self.a0 + lam * self.a1))


@dataclass(frozen=True)
class PencilSpectrum:
    s_diag: np.ndarray
    t_diag: np.ndarray
    roots: np.ndarray
    infinite_count: int
    scale: float = 1.0

    def abs_poly(self, lam: complex) -> float:
        """``|P(lam)|`` from the triangular factors (unitary factors drop out)."""
        return float(np.prod(np.abs(self.s_diag + lam * self.t_diag))) / self.scale ** len(self.s_diag)


@dataclass(frozen=True)
class NegativityResult:
    value: float
    spectrum: PencilSpectrum

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "roots": [{"re": float(r.real), "im": float(r.imag)} for r in self.spectrum.roots],
            "infinite_count": self.spectrum.infinite_count,
        }


@dataclass(frozen=True)
class TwistedCovariance:
    gt: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        return linalg.eigvals(self.gt)


def build_pencil(blocks: BlockView) -> TwistedPencil:
    na, nb = blocks.m_a.shape[0], blocks.m_b.shape[0]
    a0 = np.zeros((na + nb, na + nb), dtype=complex)
    a1 = np.zeros_like(a0)
    a0[:na, :na] = np.eye(na)
    a0[na:, :na] = blocks.gamma_ba
    a0[na:, na:] = blocks.gamma_b
    a1[:na, :na] = blocks.gamma_a
    a1[:na, na:] = blocks.gamma_ab
    a1[na:, na:] = -np.eye(nb)
    return TwistedPencil(a0, a1, na)


def pencil_spectrum(p: TwistedPencil) -> PencilSpectrum:
    """Generalized Schur (QZ) decomposition of the pencil ``(a0, a1)``."""
    # Both matrices are rescaled by the same constant; the scale is kept so
    # that callers can undo it (it shifts E by N ln c).
    c = max(np.abs(p.a0).max(initial=0.0), np.abs(p.a1).max(initial=0.0), 1e-300)
    c = 1.0 / c
    try:
        s, t, _, _ = linalg.qz(c * p.a0, c * p.a1, output="complex")
    except (linalg.LinAlgError, ValueError) as exc:
        cond = np.linalg.cond(p.a0 + p.a1)
        raise NumericalError(f"QZ decomposition failed (cond(a0+a1)={cond:.2e}): {exc}") from exc
    sd, td = np.diag(s).copy(), np.diag(t).copy()
    if not (np.all(np.isfinite(sd)) and np.all(np.isfinite(td))):
        raise NumericalError("non-finite entries in generalized Schur form")
    if np.any((np.abs(sd) == 0) & (np.abs(td) == 0)):
        raise NumericalError("singular pencil: P(lambda) vanishes identically")
    tiny = 1e-14 * max(np.abs(sd).max(initial=0.0), np.abs(td).max(initial=0.0))
    finite = np.abs(td) > tiny
    roots = -sd[finite] / td[finite]
    roots = roots[np.argsort(np.abs(roots), kind="stable")]
    return PencilSpectrum(sd, td, roots, int(np.count_nonzero(~finite)), c)


def negativity(gamma, part: Bipartition) -> NegativityResult:
    """Logarithmic negativity ``E = 1/2 ln |P_>(0)|`` via the pencil."""
    spec = pencil_spectrum(build_pencil(partition(gamma, part)))
    mags = np.maximum(np.abs(spec.s_diag), np.abs(spec.t_diag))
    near = np.abs(np.abs(spec.roots) - 1.0) <= UNIT_CIRCLE_TOL
    if np.any(near):
        logger.debug("%d pencil roots within %.0e of the unit circle", near.sum(), UNIT_CIRCLE_TOL)
    value = 0.5 * float(np.sum(np.log(mags))) - 0.5 * mags.size * np.log(spec.scale)
    if value < 0.0:
        if value < NEGATIVE_FLOOR:
            logger.warning("negativity %.3e below numerical floor", value)
        value = 0.0
    return NegativityResult(value, spec)


def twisted_covariance(blocks: BlockView) -> TwistedCovariance:
    """Covariance matrix of the twisted partial transpose (``+`` branch)."""
    ga = blocks.gamma_a
    if ga.size == 0 or linalg.svdvals(ga).min() <= SINGULAR_TOL:
        raise SingularGammaA("Gamma_A is singular; twisted covariance undefined")
    ga_inv = linalg.inv(ga)
    gab, gba = blocks.gamma_ab, blocks.gamma_ba
    gt = np.block(
        [
            [-ga_inv, 1j * ga_inv @ gab],
            [-1j * gba @ ga_inv, blocks.gamma_b - gba @ ga_inv @ gab],
        ]
    )
    return TwistedCovariance(gt)


def negativity_via_twisted(gamma, part: Bipartition) -> float:
    """``E = 1/2 ln|det Gamma_A| + sum_{lam > 1} ln lam`` over eigenvalue pairs."""
    blocks = partition(gamma, part)
    tc = twisted_covariance(blocks)
    lam = np.abs(tc.eigenvalues())
    _, logdet = np.linalg.slogdet(blocks.gamma_a)
    # eigenvalues come in +- pairs, so half the sum over all of them
    return float(0.5 * logdet + 0.5 * np.sum(np.log(np.maximum(lam, 1.0))))


def gamma_a_zero_negativity(gamma, part: Bipartition) -> float:
    """Closed form ``1/2 tr ln(I_B + Gamma_BA Gamma_AB)``, exact when Gamma_A or Gamma_B is 0."""
    blocks = partition(gamma, part)
    ev = linalg.eigvalsh(blocks.m_ab.T @ blocks.m_ab)
    return float(0.5 * np.sum(np.log1p(np.clip(ev, 0.0, None))))
