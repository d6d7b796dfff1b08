"""
Command-line interface.

Every subcommand reads a JSON config (``--config``), validates it against a
schema that rejects unknown keys, and writes CSV (or JSON for single-state
reports) to ``--out`` or stdout.

Exit codes: 0 success, 2 configuration / size-cap error, 3 numerical failure.
Errors are reported on stderr as a JSON object.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

import jsonschema
import numpy as np

from . import __version__
from .bounds import bound_report
from .dynamics import evolve_exact, evolve_rk4
from .exceptions import (
    ChannelError,
    DivergentAreaLawError,
    FreeNegError,
    InvalidCovarianceError,
    SizeCapError,
)
from .experiments import (
    AREA_LAW_COLUMNS,
    FIG1_COLUMNS,
    FIG2_COLUMNS,
    RATE_COLUMNS,
    RATE_TIME,
    experiment_area_law,
    experiment_fig1,
    experiment_fig2,
    parallel_map,
    rate_vs_cut,
)
from .gaussian import (
    Bipartition,
    CovarianceMatrix,
    gibbs_covariance,
    partition,
    purity,
    random_mixed_covariance,
    validate,
)
from .io import config_hash, render_csv, to_json
from .models import build_hamiltonian, cdw_covariance, uniform_loss
from .negativity import negativity, negativity_via_twisted
from .oracle import MAX_TRANSPOSE_MODES, oracle_negativity

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3

# --- schemas ---------------------------------------------------------------

_NUM = {"type": "number"}
_POS_INT = {"type": "integer", "minimum": 1}

MODEL = {
    "type": "object",
    "properties": {
        "name": {"enum": ["tight_binding", "kitaev", "long_range"]},
        "n": {"type": "integer", "minimum": 2},
        "t": _NUM,
        "alpha": {"type": "number", "exclusiveMinimum": 0},
    },
    "required": ["name", "n"],
    "additionalProperties": False,
}

STATE = {
    "oneOf": [
        {
            "type": "object",
            "properties": {
                "type": {"const": "covariance"},
                "n_modes": _POS_INT,
                "m": {"type": "array", "items": _NUM},
            },
            "required": ["type", "n_modes", "m"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"type": {"const": "gibbs"}, "model": MODEL, "beta": {"type": "number", "minimum": 0}},
            "required": ["type", "model", "beta"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"type": {"const": "cdw"}, "n": {"type": "integer", "minimum": 2}},
            "required": ["type", "n"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "type": {"const": "random"},
                "n": _POS_INT,
                "seed": {"type": "integer", "minimum": 0},
                "nu_max": {"type": "number", "minimum": 0, "maximum": 1},
            },
            "required": ["type", "n", "seed"],
            "additionalProperties": False,
        },
    ]
}

CUT = {
    "type": "object",
    "properties": {
        "modes_a": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1},
        "n_a": _POS_INT,
    },
    "additionalProperties": False,
}

GENERATOR = {
    "type": "object",
    "properties": {"model": MODEL, "loss_rate": {"type": "number", "minimum": 0}},
    "required": ["loss_rate"],
    "additionalProperties": False,
}


def _obj(props: dict, required=()):
    return {"type": "object", "properties": props, "required": list(required), "additionalProperties": False}


SCHEMAS = {
    "negativity": _obj({"state": STATE, "cut": CUT, "method": {"enum": ["pencil", "twisted", "oracle"]}}, ["state"]),
    "bounds": _obj(
        {
            "state": STATE,
            "model": MODEL,
            "betas": {"type": "array", "items": {"type": "number", "minimum": 0}},
            "cut": CUT,
            "k": {"type": "number", "exclusiveMinimum": 0},
        }
    ),
    "evolve": _obj(
        {
            "state": STATE,
            "generator": GENERATOR,
            "times": {"type": "array", "items": {"type": "number", "minimum": 0}},
            "cut": CUT,
            "integrator": {"enum": ["exact", "rk4"]},
            "dt": {"type": "number", "exclusiveMinimum": 0},
        },
        ["state", "generator", "times"],
    ),
    "rate": _obj(
        {
            "state": STATE,
            "generator": GENERATOR,
            "time": {"type": "number", "minimum": 0},
            "n_a_grid": {"type": "array", "items": _POS_INT},
        },
        ["state", "generator"],
    ),
    "sweep-temperature": _obj(
        {"model": MODEL, "betas": {"type": "array", "items": {"type": "number", "minimum": 0}}, "cut": CUT},
        ["model", "betas"],
    ),
    "sweep-area-law": _obj(
        {
            "n_grid": {"type": "array", "items": {"type": "integer", "minimum": 2}},
            "alpha": {"type": "number", "exclusiveMinimum": 0},
            "beta": {"type": "number", "minimum": 0},
            "t": _NUM,
        },
        ["n_grid"],
    ),
    "sweep-dynamic": _obj(
        {
            "n_grid": {"type": "array", "items": {"type": "integer", "minimum": 2}},
            "alpha": {"type": "number", "exclusiveMinimum": 0},
            "t": _NUM,
            "loss_rate": {"type": "number", "minimum": 0},
            "init": {"enum": ["cdw", "random"]},
            "samples": _POS_INT,
            "seed": {"type": "integer", "minimum": 0},
            "time": {"type": "number", "exclusiveMinimum": 0},
            "nu_max": {"type": "number", "minimum": 0, "maximum": 1},
        },
        ["n_grid"],
    ),
    "oracle-check": _obj(
        {
            "n_modes": _POS_INT,
            "samples": _POS_INT,
            "seed": {"type": "integer", "minimum": 0},
            "nu_max": {"type": "number", "minimum": 0, "maximum": 1},
        },
        ["n_modes"],
    ),
}


class ConfigError(Exception):
    pass


# --- config helpers --------------------------------------------------------


def load_config(path: str, command: str) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc}") from exc
    try:
        jsonschema.validate(cfg, SCHEMAS[command])
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"schema error at {where}: {exc.message}") from exc
    return cfg


def build_state(spec: dict) -> CovarianceMatrix:
    kind = spec["type"]
    if kind == "covariance":
        g = CovarianceMatrix.from_dict(spec)
        if not validate(g):
            raise InvalidCovarianceError("covariance matrix is not physical")
        return g
    if kind == "gibbs":
        return gibbs_covariance(build_hamiltonian(spec["model"]), spec["beta"])
    if kind == "cdw":
        return cdw_covariance(spec["n"])
    return random_mixed_covariance(spec["n"], spec["seed"], spec.get("nu_max", 0.95))


def build_cut(spec, n_modes: int) -> Bipartition:
    if not spec:
        return Bipartition.half_chain(n_modes)
    if "modes_a" in spec and "n_a" in spec:
        raise ConfigError("cut takes either 'modes_a' or 'n_a', not both")
    if "modes_a" in spec:
        return Bipartition(n_modes, spec["modes_a"])
    return Bipartition.first(n_modes, spec["n_a"])


def build_generator(spec: dict, n_modes: int):
    h = None
    if "model" in spec:
        h = build_hamiltonian(spec["model"])
        if h.n_modes != n_modes:
            raise ConfigError(f"generator model has {h.n_modes} modes, state has {n_modes}")
    return uniform_loss(n_modes, spec["loss_rate"], h)


def _seed_of(cfg: dict):
    if "seed" in cfg:
        return cfg["seed"]
    state = cfg.get("state") or {}
    return state.get("seed", "none")


# --- commands --------------------------------------------------------------


def _negativity_value(g, part, method: str) -> float:
    if method == "twisted":
        return negativity_via_twisted(g, part)
    if method == "oracle":
        return oracle_negativity(g, part)
    return negativity(g, part).value


def cmd_negativity(cfg, args):
    g = build_state(cfg["state"])
    part = build_cut(cfg.get("cut"), g.n_modes)
    method = args.method or cfg.get("method", "pencil")
    res = negativity(g, part)
    out = res.to_dict()
    out["method"] = method
    if method != "pencil":
        out["value"] = _negativity_value(g, part, method)
    out["bounds"] = bound_report(g, part).to_dict()
    out["cut"] = part.to_dict()
    return "json", out


def _bounds_row(g, part, k, beta=None):
    rep = bound_report(g, part, k)
    return {
        "beta": beta,
        "lower": rep.lower,
        "exact": negativity(g, part).value,
        "upper": rep.upper,
        "applicable": rep.upper_applicable,
        "simple_lower": rep.simple_lower,
        "simple_upper": rep.simple_upper,
        "k_plus": rep.k_plus,
        "k_minus": rep.k_minus,
    }


BOUNDS_COLUMNS = ["beta", "lower", "exact", "upper", "applicable", "simple_lower", "simple_upper", "k_plus", "k_minus"]


def cmd_bounds(cfg, args):
    k = cfg.get("k")
    if "state" in cfg:
        if "model" in cfg or "betas" in cfg:
            raise ConfigError("give either 'state' or 'model' with 'betas'")
        g = build_state(cfg["state"])
        part = build_cut(cfg.get("cut"), g.n_modes)
        beta = cfg["state"].get("beta")
        return "csv", ([_bounds_row(g, part, k, beta)], BOUNDS_COLUMNS)
    if "model" not in cfg or not cfg.get("betas"):
        raise ConfigError("bounds needs 'state', or 'model' with a non-empty 'betas'")
    h = build_hamiltonian(cfg["model"])
    part = build_cut(cfg.get("cut"), h.n_modes)
    rows = [_bounds_row(gibbs_covariance(h, b), part, k, float(b)) for b in cfg["betas"]]
    return "csv", (rows, BOUNDS_COLUMNS)


def cmd_evolve(cfg, args):
    g0 = build_state(cfg["state"])
    gen = build_generator(cfg["generator"], g0.n_modes)
    part = build_cut(cfg.get("cut"), g0.n_modes)
    times = [float(t) for t in cfg["times"]]
    if not times:
        raise ConfigError("times is empty")
    if any(b < a for a, b in zip(times, times[1:])):
        raise ConfigError("times must be sorted")
    rows = []
    for t in times:
        if cfg.get("integrator", "exact") == "rk4":
            g = evolve_rk4(g0, gen, t, cfg.get("dt"))
        else:
            g = evolve_exact(g0, gen, t)
        rows.append(
            {
                "t": t,
                "E": negativity(g, part).value,
                "purity": purity(g),
                "gamma_ab_frobenius": float(np.linalg.norm(partition(g, part).m_ab)),
            }
        )
    return "csv", (rows, ["t", "E", "purity", "gamma_ab_frobenius"])


def cmd_rate(cfg, args):
    g0 = build_state(cfg["state"])
    gen = build_generator(cfg["generator"], g0.n_modes)
    grid = cfg.get("n_a_grid")
    if grid is not None and not grid:
        raise ConfigError("n_a_grid is empty")
    if grid and max(grid) >= g0.n_modes:
        raise ConfigError("every N_A must be smaller than the number of modes")
    rows = rate_vs_cut(g0, gen, grid, cfg.get("time", RATE_TIME), args.workers)
    return "csv", (rows, RATE_COLUMNS)


def cmd_sweep_temperature(cfg, args):
    if not cfg["betas"]:
        raise ConfigError("betas is empty")
    n_a = None
    cut = cfg.get("cut")
    if cut:
        if "modes_a" in cut:
            raise ConfigError("sweep-temperature cuts are left blocks; use 'n_a'")
        n_a = cut["n_a"]
    rows = experiment_fig1(cfg["model"], cfg["betas"], n_a, args.workers)
    return "csv", (rows, FIG1_COLUMNS)


def cmd_sweep_area_law(cfg, args):
    if not cfg["n_grid"]:
        raise ConfigError("n_grid is empty")
    rows = experiment_area_law(
        cfg["n_grid"], cfg.get("alpha", 1.5), cfg.get("beta", 0.05), cfg.get("t", 1.0), args.workers
    )
    return "csv", (rows, AREA_LAW_COLUMNS)


def cmd_sweep_dynamic(cfg, args):
    if not cfg["n_grid"]:
        raise ConfigError("n_grid is empty")
    init = cfg.get("init", "cdw")
    if init == "cdw" and any(n % 2 for n in cfg["n_grid"]):
        raise ConfigError("CDW initial state needs even sizes")
    rows = experiment_fig2(
        cfg["n_grid"],
        alpha=cfg.get("alpha", 2.1),
        t=cfg.get("t", 1.0),
        gamma_rate=cfg.get("loss_rate", 0.5),
        init=init,
        samples=cfg.get("samples", 100),
        seed=cfg.get("seed", 0),
        time=cfg.get("time", RATE_TIME),
        nu_max=cfg.get("nu_max", 0.95),
        workers=args.workers,
    )
    return "csv", (rows, FIG2_COLUMNS)


def _oracle_sample(args):
    n, seed_seq, nu_max, method = args
    rng = np.random.default_rng(seed_seq)
    g = random_mixed_covariance(n, rng, nu_max)
    n_a = int(rng.integers(1, n))
    modes_a = tuple(sorted(rng.choice(n, size=n_a, replace=False).tolist()))
    part = Bipartition(n, modes_a)
    e_cov = _negativity_value(g, part, method)
    e_ora = oracle_negativity(g, part)
    return {
        "modes_a": " ".join(map(str, modes_a)),
        "e_covariance": e_cov,
        "e_oracle": e_ora,
        "abs_diff": abs(e_cov - e_ora),
    }


def cmd_oracle_check(cfg, args):
    n = cfg["n_modes"]
    if n > MAX_TRANSPOSE_MODES:
        raise SizeCapError(f"oracle check supports at most {MAX_TRANSPOSE_MODES} modes, got {n}")
    if n < 2:
        raise ConfigError("oracle check needs at least two modes")
    method = args.method or "pencil"
    samples = cfg.get("samples", 50)
    seeds = np.random.SeedSequence(cfg.get("seed", 0)).spawn(samples)
    items = [(n, s, cfg.get("nu_max", 0.95), method) for s in seeds]
    rows = parallel_map(_oracle_sample, items, args.workers)
    for i, r in enumerate(rows):
        r["sample"] = i
    worst = max(r["abs_diff"] for r in rows)
    print(json.dumps({"max_abs_diff": worst, "samples": samples}), file=sys.stderr)
    return "csv", (rows, ["sample", "modes_a", "e_covariance", "e_oracle", "abs_diff"])


COMMANDS = {
    "negativity": cmd_negativity,
    "bounds": cmd_bounds,
    "evolve": cmd_evolve,
    "rate": cmd_rate,
    "sweep-temperature": cmd_sweep_temperature,
    "sweep-area-law": cmd_sweep_area_law,
    "sweep-dynamic": cmd_sweep_dynamic,
    "oracle-check": cmd_oracle_check,
}

_METHOD_COMMANDS = {"negativity", "oracle-check"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="freeneg", description=__doc__.split("\n\n")[0].strip())
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--workers", type=int, default=1, help="worker processes for sweeps")
        p.add_argument("-v", "--verbose", action="store_true")
        if name in _METHOD_COMMANDS:
            p.add_argument("--method", choices=["pencil", "twisted", "oracle"])
        else:
            p.set_defaults(method=None)
    return parser


def _fail(code: int, kind: str, message: str) -> int:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(name)s: %(message)s")
    if args.workers < 1:
        return _fail(EXIT_CONFIG, "config", "--workers must be positive")
    try:
        cfg = load_config(args.config, args.command)
        kind, payload = COMMANDS[args.command](cfg, args)
    except (ConfigError, SizeCapError, DivergentAreaLawError, InvalidCovarianceError, ChannelError) as exc:
        return _fail(EXIT_CONFIG, type(exc).__name__, str(exc))
    except (ValueError, IndexError, KeyError) as exc:
        return _fail(EXIT_CONFIG, "config", str(exc))
    except (FreeNegError, ArithmeticError, np.linalg.LinAlgError) as exc:
        return _fail(EXIT_NUMERICAL, type(exc).__name__, str(exc))

    if kind == "json":
        text = to_json(payload)
    else:
        rows, columns = payload
        meta = {"version": __version__, "seed": _seed_of(cfg), "config_sha256": config_hash(cfg), "command": args.command}
        text = render_csv(rows, columns, meta)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
