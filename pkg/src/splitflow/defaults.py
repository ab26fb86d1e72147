"""Numerical defaults shared by every module.

All thresholds live here so that the CLI can override them in one place.
Library functions read the active table through :func:`current`; the CLI
installs overrides with :func:`override`, which is context-local and so
safe under threads.
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    #: singular values below ``kernel * largest`` count as zero
    kernel: float = 1e-8
    #: principal-angle distance below which two subspaces are equal
    subspace: float = 1e-9
    #: orthonormality / isotropy / unitarity checks
    frame: float = 1e-10
    #: re-orthonormalization is allowed up to this defect
    reortho: float = 1e-8
    #: |phase - pi| below this counts as sitting at -1
    phase: float = 1e-8
    #: |eigenvalue| below this counts as sitting at 0
    zero: float = 1e-8
    #: eigenvalues of a crossing form below this count as degenerate
    form: float = 1e-6
    #: matrix logarithm refuses eigenvalues this close to the cut at -1
    log_cut: float = 1e-6


@dataclass(frozen=True)
class Grids:
    #: evaluator calls allowed per index computation
    budget: int = 2**20
    #: initial step of the adaptive samplers, as a fraction of the interval
    initial_step: float = 1.0 / 64
    #: finite-difference steps for crossing forms
    fd_step: float = 1e-4
    fd_min_step: float = 1e-7
    #: spectral-parameter scan for the Evans determinant
    spectrum_grid: int = 2001
    root_bracket: float = 1e-12
    #: eigenvalue tracking in t
    tracking_steps: int = 16
    #: scan points per spectrum while tracking
    tracking_grid: int = 401
    #: half-width of the tracking window around 0
    tracking_window: float = 1.0
    #: Galerkin oracle size (odd: modes -K..K)
    galerkin_modes: int = 401


@dataclass(frozen=True)
class Defaults:
    tol: Tolerances = Tolerances()
    grid: Grids = Grids()


_ACTIVE: contextvars.ContextVar[Defaults] = contextvars.ContextVar(
    "splitflow_defaults", default=Defaults())


def current() -> Defaults:
    return _ACTIVE.get()


def tol() -> Tolerances:
    return _ACTIVE.get().tol


def grid() -> Grids:
    return _ACTIVE.get().grid


@contextlib.contextmanager
def override(tol: dict | None = None, grid: dict | None = None):
    """Temporarily replace some defaults, e.g. ``override(tol={"kernel": 1e-9})``."""
    base = _ACTIVE.get()
    new = Defaults(tol=replace(base.tol, **(tol or {})),
                   grid=replace(base.grid, **(grid or {})))
    token = _ACTIVE.set(new)
    try:
        yield new
    finally:
        _ACTIVE.reset(token)


def table() -> dict:
    """The active defaults as a flat dictionary (for reports)."""
    d = current()
    out = {f"tol.{k}": v for k, v in vars(d.tol).items()}
    out.update({f"grid.{k}": v for k, v in vars(d.grid).items()})
    return out
