"""Command-line front end.

Commands::

    splitflow maslov   --input path.json       Maslov index of a Lagrangian path
    splitflow sf       --input path.json       spectral flow of a symmetric path
    splitflow verify   --input problem.json    the four spectral-flow formulas
    splitflow spectrum --input problem.json    Evans spectrum of one realization

Results go to stdout as JSON (and to ``--out``/<command>.json when given);
diagnostics go to stderr.  Exit codes: 0 success, 2 bad input, 3 numerical
failure, and for ``verify`` 16 plus the sum of the failing theorems' bits
(local 1, general 2, pre-splitting 4, splitting 8).
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import defaults
from .bvp.boundary import split_boundary_conditions
from .bvp.flow import maslov_side, minus_only, track
from .bvp.problem import ProblemError
from .bvp.spectrum import SpectrumError, spectrum
from .bvp.theorems import verify_theorems
from .io import (ConfigError, dumps, lagrangian_path_from_config, load_config,
                 operator_path_from_config, pair_paths_from_config,
                 problem_from_config, write_csv)
from .maslov import CrossingError, RefinementError, maslov_details
from .pairs import diagonal, double, pair_path
from .specflow import eigenvalue_trace, spectral_flow_details
from .symplectic import SymplecticError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_THEOREM = 16


class NumericalFailure(RuntimeError):
    def __init__(self, stage: str, exc: Exception):
        super().__init__(f"{stage}: {exc}")


def _stage(name, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except (ConfigError, ProblemError, SymplecticError):
        raise
    except (RefinementError, CrossingError, SpectrumError, RuntimeError,
            np.linalg.LinAlgError, FloatingPointError) as exc:
        raise NumericalFailure(name, exc) from exc


def _window(text):
    """'w' gives [-w, w]; 'a,b' gives [a, b]."""
    try:
        parts = [float(x) for x in str(text).split(",")]
    except ValueError as exc:
        raise ConfigError(f"bad --window '{text}'") from exc
    if len(parts) == 1:
        if parts[0] <= 0:
            raise ConfigError("--window must be positive")
        return (-parts[0], parts[0])
    if len(parts) != 2 or not parts[0] < parts[1]:
        raise ConfigError("--window needs 'w' or 'a,b' with a < b")
    return tuple(parts)


def _trace_path(args, default_name):
    if not args.trace:
        return None
    if args.trace is not True:
        return Path(args.trace)
    return Path(args.out or ".") / default_name


def _crossings(result):
    return [{"t_a": s.a, "t_b": s.b, "eps": s.eps, "change": s.k_b - s.k_a}
            for s in result.jumps]


def cmd_maslov(args, cfg):
    if "pair" in cfg:
        first, second = pair_paths_from_config(cfg, args.seed)
        dbl = double(first(0.0).space)
        path, lam = pair_path(first, second, dbl), diagonal(dbl)
    else:
        path, lam = lagrangian_path_from_config(cfg, args.seed)
    res = _stage("maslov index", maslov_details, path, lam)
    return {"maslov_index": res.value, "crossings": _crossings(res),
            "evaluations": res.evaluations}, EXIT_OK


def cmd_sf(args, cfg):
    path = operator_path_from_config(cfg, args.seed)
    res = _stage("spectral flow", spectral_flow_details, path)
    trace = _trace_path(args, "sf_trace.csv")
    if trace is not None:
        ts = np.linspace(0.0, 1.0, args.grid or 101)
        rows = eigenvalue_trace(path, ts)
        write_csv(trace, ["t"] + [f"lambda_{j + 1}" for j in range(rows.shape[1] - 1)], rows)
    return {"spectral_flow": res.value, "crossings": _crossings(res),
            "evaluations": res.evaluations}, EXIT_OK


def _tracking_kw(args):
    kw = {}
    if args.window is not None:
        lo, hi = _window(args.window)
        kw["window"] = min(-lo, hi)
    return kw


def cmd_verify(args, cfg):
    problem = problem_from_config(cfg.get("problem", cfg))
    options = dict(cfg.get("verify", {}))
    grid = {}
    if args.window is not None:
        grid["tracking_window"] = _tracking_kw(args)["window"]
    if args.grid:
        grid["tracking_grid"] = int(args.grid)
    with defaults.override(grid=grid):
        report = _stage("theorem verification", verify_theorems, problem, options)
        trace = _trace_path(args, "verify_trace.csv")
        if trace is not None:
            flow = _stage("eigenvalue tracking", track, problem, problem.delta)
            rows = flow.trace_rows()
            width = max(len(r) for r in rows) - 1
            write_csv(trace, ["t"] + [f"lambda_{j + 1}" for j in range(width)], rows)
    out = report.as_dict()
    if not problem.product_form:
        out["open_question"] = _open_question(problem)
    code = EXIT_OK if report.passed else EXIT_THEOREM | report.failure_bits
    return out, code


def _open_question(problem):
    """Both Maslov indices of the minus-side path, exposed without assertion."""
    split = split_boundary_conditions(problem)
    a = _stage("open question", maslov_side, problem, split.ell0, times=minus_only)
    b = _stage("open question", maslov_side, problem, problem.delta, times=minus_only)
    return {"against_split_condition": a, "against_transmission": b}


def cmd_spectrum(args, cfg):
    problem = problem_from_config(cfg.get("problem", cfg))
    window = _window(args.window) if args.window is not None else tuple(
        cfg.get("window", (-3.5, 3.5)))
    t = float(args.t if args.t is not None else cfg.get("t", 0.0))
    domain_name = args.domain or cfg.get("domain", "circle")
    if domain_name == "circle":
        domain = problem.delta
    elif domain_name in ("minus", "plus"):
        split = split_boundary_conditions(problem)
        domain = split.ell0 if domain_name == "minus" else split.ell1
    else:
        raise ConfigError(f"unknown domain '{domain_name}'")
    rep = _stage("spectrum", spectrum, problem, domain, t, window=window,
                 grid=args.grid or None)
    trace = _trace_path(args, "evans_trace.csv")
    if trace is not None:
        write_csv(trace, ["lambda", "det"], np.column_stack([rep.grid, rep.det]))
    return {"problem": problem.name, "domain": domain_name, "t": t,
            "window": list(rep.window), "eigenvalues": rep.eigenvalues,
            "multiplicities": rep.multiplicities, "margin": rep.margin}, EXIT_OK


COMMANDS = {"maslov": cmd_maslov, "sf": cmd_sf, "verify": cmd_verify,
            "spectrum": cmd_spectrum}


def example_path(name: str) -> Path:
    """Path of a bundled example config, e.g. ``example_path('demo.json')``."""
    return Path(str(resources.files("splitflow") / "examples" / name))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="splitflow", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--input", required=False,
                   help="JSON (or TOML) config; 'example:NAME' reads a bundled example")
    p.add_argument("--out", help="directory for result files")
    p.add_argument("--seed", type=int, default=0, help="seed for 'random' families")
    p.add_argument("--window", help="spectral window: 'w' for [-w, w] or 'a,b'")
    p.add_argument("--grid", type=int, help="scan points (spectrum) or trace samples (sf)")
    p.add_argument("--trace", nargs="?", const=True, default=None,
                   help="write a CSV trace (optionally to the given file)")
    p.add_argument("--tol-kernel", type=float, help="relative kernel tolerance")
    p.add_argument("--tol-subspace", type=float, help="subspace equality tolerance")
    p.add_argument("--domain", choices=["circle", "minus", "plus"],
                   help="spectrum: closed circle or one split half")
    p.add_argument("--t", type=float, help="spectrum: family parameter (default 0)")
    return p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.input is None:
            raise ConfigError("--input is required")
        src = args.input
        if src.startswith("example:"):
            src = example_path(src.split(":", 1)[1])
        cfg = load_config(src)
        tol = {}
        for key, val in (("kernel", args.tol_kernel), ("subspace", args.tol_subspace)):
            if val is not None:
                if not val > 0:
                    raise ConfigError(f"--tol-{key} must be positive")
                tol[key] = val
        if args.grid is not None and args.grid < 3:
            raise ConfigError("--grid must be at least 3")
        if args.out:
            Path(args.out).mkdir(parents=True, exist_ok=True)
        with defaults.override(tol=tol):
            result, code = COMMANDS[args.command](args, cfg)
    except (ConfigError, ProblemError, SymplecticError) as exc:
        print(f"splitflow: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailure as exc:
        print(f"splitflow: numerical failure in {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = dumps(result)
    sys.stdout.write(text)
    if args.out:
        (Path(args.out) / f"{args.command}.json").write_text(text)
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
