"""Spectral flow of paths of symmetric (or Hermitian) matrices.

Eigenvalues are counted in the half-open window ``[0, eps)`` per segment,
so an eigenvalue sitting at 0 at the start of a path is already inside the
window.  Segments are refined until ``||A(b) - A(a)||`` is below half the
distance from ``eps`` to the spectrum; by Weyl's inequality no eigenvalue
can then reach ``eps``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import defaults
from .maslov import (CrossingError, IndexResult, SymmetricForm, _richardson,
                     _side, _walk, _with_step, local_contribution)
from .symplectic import null_space


@dataclass(frozen=True)
class OperatorPath:
    """``t in [0, 1] -> A(t)``, a d x d symmetric or Hermitian matrix.

    ``derivative`` optionally supplies ``A'(t)`` for crossing forms.
    """

    evaluator: Callable[[float], np.ndarray]
    derivative: Callable[[float], np.ndarray] | None = None

    def __call__(self, t: float) -> np.ndarray:
        A = np.atleast_2d(np.asarray(self.evaluator(float(t))))
        scale = max(1.0, np.abs(A).max(initial=0.0))
        if np.abs(A - A.conj().T).max(initial=0.0) > defaults.tol().frame * scale:
            raise ValueError(f"operator is not symmetric at t={t:.6g}")
        return (A + A.conj().T) / 2

    @property
    def dim(self) -> int:
        return self(0.0).shape[0]

    def reversed(self) -> "OperatorPath":
        d = self.derivative
        return OperatorPath(lambda t: self.evaluator(1.0 - t),
                            None if d is None else (lambda t: -d(1.0 - t)))

    def reparametrized(self, g: Callable[[float], float]) -> "OperatorPath":
        return OperatorPath(lambda t: self.evaluator(g(t)))

    def then(self, other: "OperatorPath") -> "OperatorPath":
        f, h = self.evaluator, other.evaluator
        return OperatorPath(lambda t: f(2 * t) if t <= 0.5 else h(2 * t - 1))

    def mapped(self, fn: Callable[[np.ndarray], np.ndarray]) -> "OperatorPath":
        return OperatorPath(lambda t: fn(self.evaluator(t)))


def spectral_flow_details(path: OperatorPath, *, eps_cap: float = 1.0,
                          max_step: float = 1.0,
                          budget: int | None = None) -> IndexResult:
    """Spectral flow with its partition; see :func:`spectral_flow`."""
    if eps_cap <= 0:
        raise ValueError("eps_cap must be positive")
    ztol = defaults.tol().zero

    def spectrum(A):
        return np.linalg.eigvalsh(A)

    def margin_of(A, eps):
        return float(np.abs(np.linalg.eigvalsh(A) - eps).min())

    def count(A, eps):
        ev = np.linalg.eigvalsh(A)
        return int(np.sum((ev >= -ztol) & (ev < eps)))

    return _walk(path, spectrum, margin_of, count, eps_cap, max_step, budget)


def spectral_flow(path: OperatorPath, **kw) -> int:
    """Net number of eigenvalues crossing 0 upward along the path.

    Parameters
    ----------
    path : OperatorPath
    eps_cap : float, optional
        Upper bound for the per-segment window ``[0, eps)``.
    max_step : float, optional
        Forces a partition at least this fine.
    budget : int, optional
        Maximum number of evaluator calls.
    """
    return spectral_flow_details(path, **kw).value


def negative_count(A, tol: float | None = None) -> int:
    tol = defaults.tol().zero if tol is None else tol
    return int(np.sum(np.linalg.eigvalsh(A) < -tol))


def endpoint_flow(path: OperatorPath) -> int:
    """Difference of negative-eigenvalue counts between t = 0 and t = 1."""
    return negative_count(path(0.0)) - negative_count(path(1.0))


def riesz(A) -> np.ndarray:
    """``A (1 + A^2)^{-1/2}`` by the spectral theorem."""
    A = np.atleast_2d(np.asarray(A))
    w, Q = np.linalg.eigh((A + A.conj().T) / 2)
    out = (Q * (w / np.sqrt(1.0 + w * w))) @ Q.conj().T
    return out.real if np.isrealobj(A) else out


def crossing_form_sf(path: OperatorPath, t_star: float) -> SymmetricForm:
    """``d/dt <x, A(t) y>`` at ``t*`` restricted to Ker A(t*)."""
    t_star = float(t_star)
    A0 = path(t_star)
    K = null_space(A0, scale=1.0)
    if K.shape[1] == 0:
        raise CrossingError(f"A(t*) is invertible at t*={t_star:.6g}")
    if path.derivative is not None:
        dA = np.asarray(path.derivative(t_star))
    else:
        dA = _with_step(lambda h: _richardson(
            lambda t: path(t) - A0, t_star, h, _side(t_star)))
    return SymmetricForm(K, K.conj().T @ dA @ K)


def local_spectral_flow(path: OperatorPath, t_star: float) -> int:
    """Local spectral flow at a regular crossing (signature, or -q / +p at the ends)."""
    return local_contribution(crossing_form_sf(path, t_star), float(t_star))


def eigenvalue_trace(path: OperatorPath, ts) -> np.ndarray:
    """Rows ``(t, sorted eigenvalues...)``."""
    return np.array([[t, *np.linalg.eigvalsh(path(t))] for t in ts])
