"""
Parameter sweeps: bounds versus temperature, static area law of Gibbs states
and negativity change rates under dissipative dynamics.

Every sweep returns a list of flat dicts (one per grid point) in grid order.
Grid points are independent; ``workers > 1`` distributes them over processes
without changing the output order.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .bounds import bound_report
from .dynamics import evolve_exact
from .gaussian import Bipartition, gibbs_covariance, random_mixed_covariance
from .models import (
    build_hamiltonian,
    cdw_covariance,
    clustering_constant,
    decay_integrals,
    finite_area_law_bound,
    long_range_hopping,
    uniform_loss,
)
from .negativity import negativity
from .rate import rate_bounds, rate_decomposition

RATE_TIME = 1e-8
QUANTILES = (0.05, 0.5, 0.95)

__all__ = [
    "parallel_map",
    "experiment_fig1",
    "experiment_area_law",
    "experiment_fig2",
    "rate_vs_cut",
    "FIG1_COLUMNS",
    "AREA_LAW_COLUMNS",
    "FIG2_COLUMNS",
    "RATE_COLUMNS",
]

FIG1_COLUMNS = [
    "beta", "exact", "lower", "lower_improved", "upper",
    "simple_lower", "simple_upper", "gamma_ab_opnorm", "k_minus", "applicable",
]
AREA_LAW_COLUMNS = [
    "n", "n_a", "exact", "c_fit", "k_minus", "finite_bound", "tail_integral",
]
FIG2_COLUMNS = [
    "n", "n_a", "init", "samples",
    "rate_mean", "rate_min", "rate_q05", "rate_q50", "rate_q95", "rate_max",
    "lo_mean", "inter_mean", "increase_bound", "magnitude_bound", "flagged",
]
RATE_COLUMNS = [
    "N_A", "rate_total", "rate_lo", "rate_inter", "increase_bound", "magnitude_bound",
]


def parallel_map(fn, items, workers: int = 1) -> list:
    """``list(map(fn, items))``, optionally over a process pool (order kept)."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _cut(n: int, n_a=None) -> Bipartition:
    return Bipartition.half_chain(n) if n_a is None else Bipartition.first(n, int(n_a))


# --- temperature sweep -----------------------------------------------------


def _fig1_point(args) -> dict:
    model, beta, n_a = args
    h = build_hamiltonian(model)
    part = _cut(h.n_modes, n_a)
    g = gibbs_covariance(h, beta)
    rep = bound_report(g, part)
    return {
        "beta": float(beta),
        "exact": negativity(g, part).value,
        "lower": rep.lower,
        "lower_improved": rep.lower_improved,
        "upper": rep.upper,
        "simple_lower": rep.simple_lower,
        "simple_upper": rep.simple_upper,
        "gamma_ab_opnorm": rep.gamma_ab_opnorm,
        "k_minus": rep.k_minus,
        "applicable": rep.upper_applicable,
    }


def experiment_fig1(model: dict, beta_grid, n_a=None, workers: int = 1) -> list:
    """
    Exact negativity and all bounds for Gibbs states along ``beta_grid``.

    Parameters
    ----------
    model : dict
        Model spec understood by :func:`freeneg.models.build_hamiltonian`.
    beta_grid : sequence of float
    n_a : int, optional
        Size of the left block A; half chain by default.
    """
    betas = [float(b) for b in beta_grid]
    if not betas:
        raise ValueError("beta grid is empty")
    return parallel_map(_fig1_point, [(model, b, n_a) for b in betas], workers)


# --- static area law -------------------------------------------------------


def _area_point(args) -> dict:
    n, alpha, beta, t = args
    h = long_range_hopping(n, t, alpha)
    part = Bipartition.half_chain(n)
    g = gibbs_covariance(h, beta)
    c_fit = clustering_constant(g, alpha)["c_fit"]
    rep = bound_report(g, part)
    bound = finite_area_law_bound(c_fit, alpha, part.modes_a, part.modes_b, rep.k_minus)
    return {
        "n": n,
        "n_a": part.n_a,
        "exact": negativity(g, part).value,
        "c_fit": c_fit,
        "k_minus": rep.k_minus,
        "finite_bound": bound,
        "tail_integral": decay_integrals(alpha, 1.0)[1],
    }


def experiment_area_law(n_grid, alpha: float = 1.5, beta: float = 0.05, t: float = 1.0, workers: int = 1) -> list:
    """
    Half-chain negativity of long-range Gibbs states versus system size.

    Raises :class:`DivergentAreaLawError` up front when ``alpha`` is too
    small for the decay tail to be summable.
    """
    decay_integrals(alpha, 1.0)
    ns = [int(n) for n in n_grid]
    if not ns:
        raise ValueError("size grid is empty")
    return parallel_map(_area_point, [(n, alpha, beta, t) for n in ns], workers)


# --- dynamical rates -------------------------------------------------------


def _summary(values) -> dict:
    v = np.asarray(values, dtype=float)
    qs = np.quantile(v, QUANTILES)
    return {
        "rate_mean": float(v.mean()),
        "rate_min": float(v.min()),
        "rate_q05": float(qs[0]),
        "rate_q50": float(qs[1]),
        "rate_q95": float(qs[2]),
        "rate_max": float(v.max()),
    }


def _fig2_point(args) -> dict:
    n, alpha, t, gamma_rate, init, samples, seed_seq, time, nu_max = args
    gen = uniform_loss(n, gamma_rate, long_range_hopping(n, t, alpha))
    part = Bipartition.half_chain(n)
    if init == "cdw":
        starts = [cdw_covariance(n)]
    else:
        rng = np.random.default_rng(seed_seq)
        starts = [random_mixed_covariance(n, rng, nu_max) for _ in range(samples)]
    totals, los, inters, flagged = [], [], [], 0
    for g0 in starts:
        d = rate_decomposition(evolve_exact(g0, gen, time), gen, part)
        totals.append(d["total"])
        los.append(d["lo"])
        inters.append(d["inter"])
        flagged += int(d["singularity_flag"])
    rb = rate_bounds(gen, part)
    row = {"n": n, "n_a": part.n_a, "init": init, "samples": len(starts)}
    row.update(_summary(totals))
    row.update(
        lo_mean=float(np.mean(los)),
        inter_mean=float(np.mean(inters)),
        increase_bound=rb["increase_bound"],
        magnitude_bound=rb["magnitude_bound"],
        flagged=flagged,
    )
    return row


def experiment_fig2(
    n_grid,
    alpha: float = 2.1,
    t: float = 1.0,
    gamma_rate: float = 0.5,
    init: str = "cdw",
    samples: int = 100,
    seed: int = 0,
    time: float = RATE_TIME,
    nu_max: float = 0.95,
    workers: int = 1,
) -> list:
    """
    Half-cut negativity rate for the lossy long-range hopping chain.

    The rate is evaluated at ``time`` after an exact propagation step, which
    regularizes pure initial states.  For ``init="random"`` each size draws
    ``samples`` states from its own child seed, so rows do not depend on the
    worker count; mean, extremes and quantiles are reported.
    """
    if init not in ("cdw", "random"):
        raise ValueError(f"unknown initial state {init!r}")
    ns = [int(n) for n in n_grid]
    if not ns:
        raise ValueError("size grid is empty")
    if init == "random" and samples < 1:
        raise ValueError("samples must be positive")
    seeds = np.random.SeedSequence(seed).spawn(len(ns))
    args = [(n, alpha, t, gamma_rate, init, samples, s, time, nu_max) for n, s in zip(ns, seeds)]
    return parallel_map(_fig2_point, args, workers)


def _cut_point(args) -> dict:
    gamma0, gen, n_a, time = args
    n = gen.n_modes
    part = Bipartition.first(n, n_a)
    g = evolve_exact(gamma0, gen, time)
    d = rate_decomposition(g, gen, part)
    rb = rate_bounds(gen, part)
    return {
        "N_A": n_a,
        "rate_total": d["total"],
        "rate_lo": d["lo"],
        "rate_inter": d["inter"],
        "increase_bound": rb["increase_bound"],
        "magnitude_bound": rb["magnitude_bound"],
    }


def rate_vs_cut(gamma0, gen, n_a_grid=None, time: float = RATE_TIME, workers: int = 1) -> list:
    """Rate decomposition and bounds for left blocks of every size in ``n_a_grid``."""
    n = gen.n_modes
    grid = list(range(1, n)) if n_a_grid is None else [int(x) for x in n_a_grid]
    if not grid:
        raise ValueError("cut grid is empty")
    return parallel_map(_cut_point, [(gamma0, gen, na, time) for na in grid], workers)
