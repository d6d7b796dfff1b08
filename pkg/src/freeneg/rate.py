"""
Rate of change of the negativity under Gaussian dynamics.

    dE/dt = 1/2 Tr[P_AB(Gamma) dGamma/dt],
    P_AB(Gamma) = int dk/2pi (Z_AB(k) + Gamma)^-1,  Z_AB(k) = e^{ik} I_A (+) (-e^{-ik}) I_B.

``P_AB`` is available by periodic trapezoidal quadrature and, for invertible
diagonal blocks, from the spectral projectors of the twisted covariance
``Gt`` (A-first ordering):

    A-A block:  -P_A P^< Gt P_A
    B-B block:  +P_B P^> Gt^-1 P_B
    A-B block:  +i P_A P^> P_B,      B-A block: its Hermitian conjugate.

All matrices returned here are in the original Majorana ordering.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .exceptions import NumericalError, SingularBlock, UnitCircleEigenvalue
from .dynamics import LindbladGenerator, dgamma_dt
from .gaussian import Bipartition, _as_m, norms, partition
from .negativity import twisted_covariance

logger = logging.getLogger(__name__)

SINGULARITY_FLAG_TOL = 1e-6
BLOCK_UNIT_TOL = 1e-13
BLOCK_SINGULAR_TOL = 1e-8
EIGVEC_COND_MAX = 1e10
QUAD_COND_MAX = 1e12
DEFAULT_NODES = 1024
RATE_IMAG_WARN = 1e-9
RATE_IMAG_RAISE = 1e-6

__all__ = [
    "PabMatrix",
    "pab_quadrature",
    "pab_block",
    "pab",
    "rate",
    "rate_decomposition",
    "rate_bounds",
]


@dataclass(frozen=True)
class PabMatrix:
    p: np.ndarray
    method: str
    singularity_flag: bool

    @property
    def norm(self) -> float:
        return float(linalg.norm(self.p, 2))


def _unpermute(mat: np.ndarray, part: Bipartition) -> np.ndarray:
    perm = part.majorana_perm
    out = np.empty_like(mat)
    out[np.ix_(perm, perm)] = mat
    return out


def pab_quadrature(gamma, part: Bipartition, nodes: int = DEFAULT_NODES, shift: float = 0.0) -> PabMatrix:
    """
    Trapezoid rule on ``nodes`` equispaced points of ``[-pi, pi)``.

    ``shift`` offsets the grid by a fraction of the spacing, which lets a
    caller step around a near-singular node.
    """
    g = 1j * _as_m(gamma)
    n2 = g.shape[0]
    mask = part.majorana_mask_a
    ks = -np.pi + 2 * np.pi * (np.arange(nodes) + shift) / nodes
    acc = np.zeros((n2, n2), dtype=complex)
    flag = False
    for k in ks:
        z = np.where(mask, np.exp(1j * k), -np.exp(-1j * k))
        mat = g + np.diag(z)
        if np.linalg.cond(mat) > QUAD_COND_MAX:
            flag = True
        acc += linalg.inv(mat)
    if flag:
        logger.warning("near-singular quadrature node in P_AB; result unreliable")
    return PabMatrix(acc / nodes, "quadrature", flag)


def pab_block(gamma, part: Bipartition, on_unit_circle: str = "raise") -> PabMatrix:
    """
    ``P_AB`` from the spectral projectors of the twisted covariance.

    Eigenvalues within ``BLOCK_UNIT_TOL`` (round-off level) of the unit circle
    make the projectors ambiguous.  By default this raises
    :class:`UnitCircleEigenvalue`; with ``on_unit_circle="inside"`` they are
    assigned to ``P^<`` and the result is flagged.  Such eigenvalues belong to
    modes that stay pure, so their contribution is constant.  Eigenvalues that
    have genuinely left the circle, however slightly, are classified by the
    strict test ``|lambda| < 1``.
    """
    if on_unit_circle not in ("raise", "inside"):
        raise ValueError(f"unknown on_unit_circle policy {on_unit_circle!r}")
    b = partition(gamma, part)
    for name, blk in (("Gamma_A", b.m_a), ("Gamma_B", b.m_b)):
        if linalg.svdvals(blk).min() <= BLOCK_SINGULAR_TOL:
            raise SingularBlock(f"{name} is singular; block representation unavailable")
    gt = twisted_covariance(b).gt
    lam, vec = linalg.eig(gt)
    dist = np.abs(np.abs(lam) - 1.0)
    if on_unit_circle == "raise" and np.any(dist <= BLOCK_UNIT_TOL):
        bad = lam[dist <= BLOCK_UNIT_TOL]
        raise UnitCircleEigenvalue(f"twisted covariance has eigenvalues on the unit circle: {bad}", bad)
    cond = np.linalg.cond(vec)
    if cond > EIGVEC_COND_MAX:
        raise NumericalError(f"eigenvector matrix of twisted covariance ill-conditioned ({cond:.2e})")
    vinv = linalg.inv(vec)
    inside = np.abs(lam) < 1.0
    p_in = (vec * inside) @ vinv
    p_out = (vec * ~inside) @ vinv
    na = 2 * part.n_a
    p = np.empty_like(gt)
    p[:na, :na] = -(p_in @ gt)[:na, :na]
    p[na:, na:] = (p_out @ linalg.inv(gt))[na:, na:]
    p[:na, na:] = 1j * p_out[:na, na:]
    p[na:, :na] = p[:na, na:].conj().T
    flag = bool(np.any(dist <= SINGULARITY_FLAG_TOL))
    return PabMatrix(_unpermute(p, part), "block", flag)


def pab(gamma, part: Bipartition, method: str = "block") -> PabMatrix:
    """
    Block representation by default, quadrature as fallback (or on request).

    Unit-circle eigenvalues fall back to the ``"inside"`` tie-break of
    :func:`pab_block`, with ``singularity_flag`` set.
    """
    if method == "quadrature":
        return pab_quadrature(gamma, part)
    if method != "block":
        raise ValueError(f"unknown P_AB method {method!r}")
    try:
        return pab_block(gamma, part)
    except UnitCircleEigenvalue as exc:
        logger.warning("%s; assigning them to the inner projector", exc)
        return pab_block(gamma, part, on_unit_circle="inside")
    except (SingularBlock, NumericalError) as exc:
        logger.info("block P_AB unavailable (%s); using quadrature", exc)
        return pab_quadrature(gamma, part)


def rate(gamma, dgamma, part: Bipartition, method: str = "block", p: PabMatrix | None = None) -> float:
    """``1/2 Tr[P_AB dGamma]`` for ``dGamma = 1j * dgamma`` (real antisymmetric ``dgamma``)."""
    if p is None:
        p = pab(gamma, part, method)
    val = 0.5 * np.sum(p.p.T * (1j * np.asarray(dgamma)))
    scale = max(1.0, abs(val.real))
    if abs(val.imag) > RATE_IMAG_RAISE * scale:
        raise NumericalError(f"rate has imaginary residue {val.imag:.2e}")
    if abs(val.imag) > RATE_IMAG_WARN * scale:
        # nearly degenerate eigenvalues close to |lambda| = 1 condition the projectors poorly
        logger.warning("rate has imaginary residue %.2e", val.imag)
    return float(val.real)


def rate_decomposition(gamma, gen: LindbladGenerator, part: Bipartition, method: str = "block") -> dict:
    """Split ``dE/dt`` into local-operation and inter-subsystem contributions."""
    p = pab(gamma, part, method)
    loc, inter = gen.split(part)
    g = _as_m(gamma)
    # the equation of motion is linear in (k, x, y)
    r_lo = rate(g, dgamma_dt(g, loc), part, p=p)
    r_inter = rate(g, dgamma_dt(g, inter), part, p=p)
    total = rate(g, dgamma_dt(g, gen), part, p=p)
    return {
        "total": total,
        "lo": r_lo,
        "inter": r_inter,
        "singularity_flag": p.singularity_flag,
    }


def rate_bounds(gen: LindbladGenerator, part: Bipartition) -> dict:
    """Magnitude bound ``2(4|H|_1 + |X|_1 + |Y|_1)`` and the inter-only increase bound."""

    def bound(g: LindbladGenerator) -> float:
        return 2.0 * (
            4.0 * norms(g.k)["trace_norm"] + norms(g.x)["trace_norm"] + norms(g.y)["trace_norm"]
        )

    _, inter = gen.split(part)
    return {"magnitude_bound": bound(gen), "increase_bound": bound(inter)}
