"""
Gaussian channels and universal bounds on the negativity.

A channel ``(C, D, K)`` acts as ``Gamma_out = K (Gamma_in^-1 + D)^-1 K^dag + C``.
``C`` and ``D`` are purely imaginary antisymmetric and ``K`` purely imaginary;
all three are stored through real matrices (``C = 1j * c`` etc.).

With ``Gamma = 1/2 Tr([c_a, c_b] rho)`` this map is completely positive when
``[[C, K], [K^dag, -D]]`` has spectrum in ``[-1, 1]``, i.e. when the real
matrix ``[[c, kappa], [-kappa^T, -d]]`` is a contraction.  Note the sign of
``D``: with ``+D`` random "valid" channels produce unphysical outputs.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from scipy import linalg

from .exceptions import ChannelError
from .gaussian import Bipartition, CovarianceMatrix, _as_m, ensure_physical, partition

CHANNEL_TOL = 1e-10
LOCAL_TOL = 1e-12
APPLICABLE_SLACK = 1e-12

__all__ = [
    "GaussianChannel",
    "BoundReport",
    "apply_channel",
    "validate_channel",
    "identity_channel",
    "random_local_channel",
    "bound_report",
    "trace_log_bound",
]


@dataclass(frozen=True)
class GaussianChannel:
    c: np.ndarray
    d: np.ndarray
    kappa: np.ndarray

    @property
    def n_modes(self) -> int:
        return self.c.shape[0] // 2

    def choi_matrix(self) -> np.ndarray:
        """The Hermitian block matrix ``[[C, K], [K^dag, -D]]`` whose spectrum decides CP."""
        c, d, k = 1j * self.c, 1j * self.d, 1j * self.kappa
        return np.block([[c, k], [k.conj().T, -d]])


def identity_channel(n_modes: int) -> GaussianChannel:
    z = np.zeros((2 * n_modes, 2 * n_modes))
    return GaussianChannel(z, z.copy(), np.eye(2 * n_modes))


def validate_channel(ch: GaussianChannel, part: Optional[Bipartition] = None) -> dict:
    """
    Complete-positivity check ``-1 <= [[C, K], [K^dag, -D]] <= 1``.

    If ``part`` is given, locality (no A-B blocks in C, D, K) is also checked.
    """
    ev = linalg.eigvalsh(ch.choi_matrix())
    cp = bool(ev.min(initial=0.0) >= -1 - CHANNEL_TOL and ev.max(initial=0.0) <= 1 + CHANNEL_TOL)
    report = {"completely_positive": cp, "eigenvalue_range": (float(ev.min()), float(ev.max()))}
    if part is not None:
        off = max(
            np.abs(part.off_diagonal_part(mat)).max(initial=0.0) for mat in (ch.c, ch.d, ch.kappa)
        )
        report["local"] = bool(off <= LOCAL_TOL)
        report["valid"] = cp and report["local"]
    else:
        report["valid"] = cp
    return report


def apply_channel(gamma_in, ch: GaussianChannel) -> CovarianceMatrix:
    """Apply via ``K Gamma_in (I + D Gamma_in)^-1 K^dag + C`` so singular inputs are fine."""
    g = _as_m(gamma_in)
    # D Gamma = (i d)(i g) = -d g; everything stays real
    lhs = np.eye(g.shape[0]) - ch.d @ g
    if np.linalg.cond(lhs) > 1e12:
        raise ChannelError("I + D Gamma_in is numerically singular")
    inner = linalg.solve(lhs.T, g.T).T  # g @ inv(lhs)
    out = ch.kappa @ inner @ ch.kappa.T + ch.c
    return ensure_physical(out)


def random_local_channel(part: Bipartition, seed=None, norm: float = 1.0) -> GaussianChannel:
    """
    Random local channel: for each subsystem X a random real antisymmetric
    ``W_X`` with ``||W_X|| <= norm`` is split into ``[[c_X, kappa_X], [-kappa_X^T, -d_X]]``.
    """
    from .gaussian import random_mixed_covariance

    rng = np.random.default_rng(seed)
    n2 = 2 * part.n_modes
    c, d, kappa = np.zeros((n2, n2)), np.zeros((n2, n2)), np.zeros((n2, n2))
    for modes in (part.modes_a, part.modes_b):
        idx = np.array([x for j in modes for x in (2 * j, 2 * j + 1)])
        w = norm * random_mixed_covariance(2 * len(modes), rng, nu_max=1.0).m
        s = idx.size
        c[np.ix_(idx, idx)] = w[:s, :s]
        kappa[np.ix_(idx, idx)] = w[:s, s:]
        d[np.ix_(idx, idx)] = -w[s:, s:]
    return GaussianChannel(c, d, kappa)


def trace_log_bound(m_ab: np.ndarray, k: float) -> float:
    """``1/2 tr ln(I_B + k^-2 Gamma_BA Gamma_AB)``."""
    if k <= 0:
        return float("inf")
    ev = linalg.eigvalsh(m_ab.T @ m_ab)
    return float(0.5 * np.sum(np.log1p(np.clip(ev, 0.0, None) / k**2)))


@dataclass(frozen=True)
class BoundReport:
    upper: Optional[float]
    lower: float
    lower_improved: float
    simple_upper: Optional[float]
    simple_lower: float
    k_plus: float
    k_minus: float
    gamma_ab_opnorm: float
    gamma_ab_frobenius: float
    upper_applicable: bool

    def to_dict(self) -> dict:
        return asdict(self)


def bound_report(gamma, part: Bipartition, k: Optional[float] = None) -> BoundReport:
    """
    Upper and lower negativity bounds built from the off-diagonal block.

    ``k`` overrides ``k_-`` in the upper bound (any ``||Gamma_AB|| <= k <= k_-``
    is admissible); by default the extreme value ``k_-`` is used.
    """
    b = partition(gamma, part)
    na = linalg.norm(b.m_a, 2) if b.m_a.size else 0.0
    nb = linalg.norm(b.m_b, 2) if b.m_b.size else 0.0
    k_plus = 1.0 + max(na, nb)
    k_minus = 1.0 - max(na, nb)
    k_plus_improved = 1.0 + min(na, nb)
    s = linalg.svdvals(b.m_ab)
    op = float(s.max(initial=0.0))
    fro2 = float(np.sum(s**2))
    k_up = k_minus if k is None else float(k)
    if k is not None and k_up > k_minus + APPLICABLE_SLACK:
        raise ValueError(f"k={k_up} exceeds k_minus={k_minus}")
    applicable = bool(op <= k_up + APPLICABLE_SLACK and k_up > 0)
    upper = trace_log_bound(b.m_ab, k_up) if k_up > 0 else None
    simple_upper = 0.5 * fro2 / k_up**2 if k_up > 0 else None
    if op > 0:
        simple_lower = np.log1p(op**2 / k_plus**2) / (2 * op**2) * fro2
    else:
        simple_lower = 0.0
    return BoundReport(
        upper=upper,
        lower=trace_log_bound(b.m_ab, k_plus),
        lower_improved=trace_log_bound(b.m_ab, k_plus_improved),
        simple_upper=simple_upper,
        simple_lower=float(simple_lower),
        k_plus=float(k_plus),
        k_minus=float(k_minus),
        gamma_ab_opnorm=op,
        gamma_ab_frobenius=float(np.sqrt(fro2)),
        upper_applicable=applicable,
    )
