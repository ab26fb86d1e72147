"""Config parsing and result serialization for the command line.

Matrices are row-major nested lists.  Floats in JSON output are rounded to
12 significant digits so that identical runs give identical bytes.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .bvp.problem import ModelProblem, Piece, ProblemError, bulk_shift
from .maslov import LagrangianPath
from .samples import PhasePath, random_loop_in, random_operator_path
from .specflow import OperatorPath
from .symplectic import (Lagrangian, SymplecticError, orthonormalize,
                         standard_space)

try:  # Python >= 3.11
    import tomllib
except ImportError:  # pragma: no cover
    try:
        import tomli as tomllib
    except ImportError:
        tomllib = None


class ConfigError(ValueError):
    """Malformed or inconsistent input."""


# --- reading --------------------------------------------------------------

def load_config(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    if path.suffix == ".toml":
        if tomllib is None:
            raise ConfigError("TOML input needs Python >= 3.11 or the tomli package")
        try:
            return tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"malformed TOML in {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return data


def matrix(value, name: str, shape=None) -> np.ndarray:
    try:
        a = np.atleast_2d(np.asarray(value, dtype=float))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name} must be a numeric matrix") from exc
    if a.ndim != 2 or (shape is not None and a.shape != tuple(shape)):
        raise ConfigError(f"{name} must have shape {shape}, got {a.shape}")
    return a


def _get(cfg: dict, key: str, default=None, required=False):
    if key not in cfg:
        if required:
            raise ConfigError(f"missing key '{key}'")
        return default
    return cfg[key]


def _number(value, name: str) -> float:
    try:
        return float(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name} must be a number") from exc


# --- model problems -----------------------------------------------------

def problem_from_config(cfg: dict) -> ModelProblem:
    """Build a :class:`ModelProblem`.

    Keys: ``name``; ``sigma`` (default the 2 x 2 rotation); ``B`` or ``b``
    (``B = b diag(1, -1)``); ``L`` (2 pi) and ``ell`` (L/2); ``family``:
    ``{"name": "bulk_shift", "shift": s}``, ``{"name": "zero"}`` or
    ``{"name": "pieces", "minus": [...], "plus": [...], "collar": c}`` with
    pieces ``{"length", "c0", "c1"}``; ``product_form`` (true);
    ``reversed`` (false).
    """
    if not isinstance(cfg, dict):
        raise ConfigError("problem config must be an object")
    name = str(_get(cfg, "name", "problem"))
    sigma = cfg.get("sigma")
    sigma = None if sigma is None else matrix(sigma, "sigma")
    m = 2 if sigma is None else sigma.shape[0]
    if "B" in cfg:
        B = matrix(cfg["B"], "B", (m, m))
    else:
        b = _number(_get(cfg, "b", 0.0), "b")
        if m != 2:
            raise ConfigError("'b' is only defined for m = 2; give B")
        B = b * np.diag([1.0, -1.0])
    L = _number(_get(cfg, "L", 2 * np.pi), "L")
    ell = _number(_get(cfg, "ell", L / 2), "ell")
    if not 0 < ell < L:
        raise ConfigError("need 0 < ell < L")
    fam = _get(cfg, "family", {"name": "bulk_shift", "shift": 3.0})
    if isinstance(fam, str):
        fam = {"name": fam}
    kind = fam.get("name", "bulk_shift")
    product_form = bool(_get(cfg, "product_form", True))
    try:
        if kind in ("bulk_shift", "zero"):
            shift = 0.0 if kind == "zero" else _number(fam.get("shift", 3.0), "shift")
            pr = bulk_shift(sigma, B, shift=shift, L=L, ell=ell, name=name)
            if not product_form:
                pr = ModelProblem(pr.sigma, pr.B, pr.minus, pr.plus,
                                  product_form=False, name=name)
        elif kind == "pieces":
            def pieces(side):
                items = fam.get(side)
                if not items:
                    raise ConfigError(f"family.{side} must list pieces")
                out = []
                for i, p in enumerate(items):
                    c0 = matrix(p.get("c0", np.zeros((m, m))), f"{side}[{i}].c0", (m, m))
                    c1 = matrix(p.get("c1", c0), f"{side}[{i}].c1", (m, m))
                    out.append(Piece(_number(p.get("length"), f"{side}[{i}].length"), c0, c1))
                return out

            minus, plus = pieces("minus"), pieces("plus")
            for side, ps, want in (("minus", minus, ell), ("plus", plus, L - ell)):
                if abs(sum(p.length for p in ps) - want) > 1e-9 * L:
                    raise ConfigError(f"family.{side} lengths must add up to {want:.12g}")
            pr = ModelProblem(sigma if sigma is not None else np.array([[0.0, -1.0], [1.0, 0.0]]),
                              B, minus, plus, product_form=product_form,
                              collar=_number(fam.get("collar", 0.0), "collar"), name=name)
        else:
            raise ConfigError(f"unknown family '{kind}'")
    except ProblemError as exc:
        raise ConfigError(str(exc)) from exc
    if _get(cfg, "reversed", False):
        pr = pr.reversed()
    return pr


# --- Lagrangian paths ---------------------------------------------------

def _lagrangian(space, spec, name) -> Lagrangian:
    if spec is None or spec == "standard" or spec == "horizontal":
        return space.standard
    if spec == "vertical":
        return space.standard.perp()
    if isinstance(spec, dict) and "frame" in spec:
        F = matrix(spec["frame"], f"{name}.frame", (space.dim, space.n))
        try:
            return Lagrangian(space, orthonormalize(F))
        except SymplecticError as exc:
            raise ConfigError(f"{name}: {exc}") from exc
    raise ConfigError(f"{name} must be 'standard', 'vertical' or {{'frame': ...}}")


def _samples(items, name, shape):
    if not isinstance(items, list) or len(items) < 2:
        raise ConfigError(f"{name} needs at least two samples")
    ts = np.array([_number(s.get("t"), f"{name}.t") for s in items])
    if abs(ts[0]) > 1e-12 or abs(ts[-1] - 1) > 1e-12 or np.any(np.diff(ts) <= 0):
        raise ConfigError(f"{name}: t must increase from 0 to 1")
    mats = np.array([matrix(s.get("matrix"), f"{name}.matrix", shape) for s in items])
    if np.abs(mats - np.swapaxes(mats, 1, 2)).max() > 1e-10 * max(1.0, np.abs(mats).max()):
        raise ConfigError(f"{name}: sample matrices must be symmetric")

    def at(t):
        j = int(np.clip(np.searchsorted(ts, t, side="right") - 1, 0, len(ts) - 2))
        w = (t - ts[j]) / (ts[j + 1] - ts[j])
        return (1 - w) * mats[j] + w * mats[j + 1]

    return at


def lagrangian_path_from_config(cfg: dict, seed: int = 0):
    """(path, lambda) from a path spec.

    Keys: ``n``; ``lambda`` ('standard', 'vertical' or a frame); ``path``:
    ``{"family": "constant", "frame": ...}``, ``{"family": "rotating_line",
    "start": a, "sweep": s}`` (n = 1, the line at angle ``a + s t``),
    ``{"family": "unitary_diagonal", "start": [...], "end": [...]}`` (the
    image of ``diag(exp(i phi(t)))`` over lambda, phases linear),
    ``{"family": "random"}`` (seeded phase path) or
    ``{"samples": [{"t": ..., "matrix": S}, ...]}``: graphs of symmetric
    ``S(t)`` over the chart center (``center``, default 'vertical' relative
    to lambda, i.e. its orthogonal complement), interpolated linearly.
    """
    n = int(_number(_get(cfg, "n", 1), "n"))
    if n < 1:
        raise ConfigError("n must be positive")
    space = standard_space(n)
    lam = _lagrangian(space, cfg.get("lambda"), "lambda")
    spec = _get(cfg, "path", required=True)
    if not isinstance(spec, dict):
        raise ConfigError("path must be an object")
    if "samples" in spec:
        center = _lagrangian(space, spec.get("center", None), "center") \
            if "center" in spec else lam.perp()
        S = _samples(spec["samples"], "path.samples", (n, n))
        F, JF = center.frame, space.J @ center.frame
        return LagrangianPath(lambda t: Lagrangian(space, orthonormalize(F + JF @ S(t)))), lam
    fam = spec.get("family")
    if fam == "constant":
        mu = _lagrangian(space, spec.get("frame", "vertical"), "path")
        return LagrangianPath(lambda t: mu), lam
    if fam == "rotating_line":
        if n != 1:
            raise ConfigError("rotating_line needs n = 1")
        a = _number(spec.get("start", np.pi / 2), "start")
        s = _number(spec.get("sweep", np.pi), "sweep")
        return LagrangianPath(lambda t: Lagrangian(
            space, np.array([[np.cos(a + s * t)], [np.sin(a + s * t)]]))), lam
    if fam == "unitary_diagonal":
        p0 = np.atleast_1d(np.asarray(spec.get("start", np.zeros(n)), float))
        p1 = np.atleast_1d(np.asarray(spec.get("end", p0), float))
        if p0.shape != (n,) or p1.shape != (n,):
            raise ConfigError("start and end need n phases")
        return PhasePath(lam, np.zeros((n, n)), p0, p1 - p0).path, lam
    if fam == "random":
        p = random_loop_in(space, np.random.default_rng(seed))
        return p.path, p.lam
    raise ConfigError(f"unknown path family '{fam}'")


def pair_paths_from_config(cfg: dict, seed: int = 0):
    """The two component paths of ``{"n": n, "pair": [spec_1, spec_2]}``.

    Each spec is a ``path`` object as in :func:`lagrangian_path_from_config`;
    both are evaluated at the same parameter.
    """
    specs = cfg.get("pair")
    if not isinstance(specs, list) or len(specs) != 2:
        raise ConfigError("pair must list exactly two path specs")
    base = {k: v for k, v in cfg.items() if k != "pair"}
    return tuple(lagrangian_path_from_config(dict(base, path=spec), seed + i)[0]
                 for i, spec in enumerate(specs))


# --- operator paths -------------------------------------------------------

def operator_path_from_config(cfg: dict, seed: int = 0) -> OperatorPath:
    """Operator path from a spec.

    ``path``: ``{"family": "constant", "matrix": A}``, ``{"family": "linear",
    "start": A0, "end": A1}``, ``{"family": "diagonal", "start": [...],
    "end": [...]}``, ``{"family": "random", "d": d}`` or ``{"samples": [...]}``
    with symmetric ``matrix`` entries interpolated linearly.
    """
    spec = _get(cfg, "path", required=True)
    if not isinstance(spec, dict):
        raise ConfigError("path must be an object")
    if "samples" in spec:
        first = matrix(spec["samples"][0].get("matrix") if spec["samples"] else None,
                       "path.samples[0].matrix")
        return OperatorPath(_samples(spec["samples"], "path.samples", first.shape))
    fam = spec.get("family")
    if fam == "constant":
        A = matrix(spec.get("matrix"), "matrix")
        return OperatorPath(lambda t: A, lambda t: np.zeros_like(A))
    if fam == "linear":
        A0 = matrix(spec.get("start"), "start")
        A1 = matrix(spec.get("end"), "end", A0.shape)
        return OperatorPath(lambda t: (1 - t) * A0 + t * A1, lambda t: A1 - A0)
    if fam == "diagonal":
        d0 = np.atleast_1d(np.asarray(spec.get("start"), float))
        d1 = np.atleast_1d(np.asarray(spec.get("end"), float))
        if d0.shape != d1.shape or d0.ndim != 1:
            raise ConfigError("start and end must be equal-length lists")
        return OperatorPath(lambda t: np.diag((1 - t) * d0 + t * d1),
                            lambda t: np.diag(d1 - d0))
    if fam == "random":
        d = int(_number(spec.get("d", 3), "d"))
        return random_operator_path(d, np.random.default_rng(seed))
    raise ConfigError(f"unknown operator family '{fam}'")


# --- writing --------------------------------------------------------------

def rounded(obj, digits: int = 12):
    """Recursively convert numpy types and round floats to ``digits`` significant digits."""
    if isinstance(obj, dict):
        return {str(k): rounded(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [rounded(v, digits) for v in obj]
    if isinstance(obj, np.ndarray):
        return rounded(obj.tolist(), digits)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not np.isfinite(x):
            return None
        x = float(f"{x:.{digits}g}")
        return 0.0 if x == 0 else x
    return obj


def dumps(obj) -> str:
    return json.dumps(rounded(obj), indent=2, sort_keys=True) + "\n"


def write_csv(path, header, rows):
    """Rows may be ragged; short rows are padded with empty cells."""
    width = len(header)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            cells = [f"{float(x):.12g}" for x in r]
            w.writerow(cells + [""] * (width - len(cells)))
