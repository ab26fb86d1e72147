"""Transfer matrices, Cauchy data spaces and boundary conditions.

Coordinates on the boundary spaces:

* ``beta_-``: ``(u(0), u(ell))``, Green form ``<sigma u_ell, v_ell> - <sigma u_0, v_0>``;
* ``beta_+``: ``(u(L), u(ell))``, Green form ``<sigma u_L, v_L> - <sigma u_ell, v_ell>``.

Both list the trace at the point ``0 = L`` first, so a trace pair from the two
sides matches when the coordinates agree, and the two forms are negatives of
each other.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .. import defaults
from ..pairs import box_plus
from ..symplectic import Lagrangian, intersection_dim
from .problem import Coefficients, ModelProblem, ProblemError


def _times(t):
    """Normalize ``t`` to a (t_minus, t_plus) pair."""
    if isinstance(t, Coefficients):
        return t.s, t.t
    if np.ndim(t) == 0:
        return float(t), float(t)
    a, b = t
    return float(a), float(b)


def _pieces_on(problem: ModelProblem, a: float, b: float):
    """(piece, overlap length) for the pieces meeting [a, b], in order."""
    out = []
    x = 0.0
    for side in ("-", "+"):
        for p in problem.arc(side):
            lo, hi = max(a, x), min(b, x + p.length)
            if hi > lo:
                out.append((side, p, hi - lo))
            x += p.length
    return out


def expm_batch(M: np.ndarray) -> np.ndarray:
    """Matrix exponential of a stack of small matrices.

    Large stacks use one scaling-and-squaring Taylor scheme for the whole
    stack (pure array operations); small ones go to :func:`scipy.linalg.expm`,
    whose per-matrix setup dominates for big stacks of tiny matrices.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim == 2 or M.shape[0] < 16:
        return sla.expm(M)
    norm = np.abs(M).sum(axis=-2).max()
    s = max(0, int(np.ceil(np.log2(max(norm, 1e-300) / 0.25))))
    X = M / 2.0**s
    m = M.shape[-1]
    E = np.broadcast_to(np.eye(m), M.shape).copy()
    term = E.copy()
    # ||X|| <= 1/4: 14 Taylor terms are below double rounding
    for k in range(1, 15):
        term = term @ X / k
        E += term
    for _ in range(s):
        E = E @ E
    return E


def arc_transfer(problem: ModelProblem, side: str, t: float, lams) -> np.ndarray:
    """Transfer matrices over a whole arc for a batch of spectral parameters.

    Returns an array of shape ``(len(lams), m, m)``; pieces with identical
    generator and length share one batched exponential.
    """
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    s = problem.sigma
    m = problem.m
    T = np.broadcast_to(np.eye(m), (lams.size, m, m)).copy()
    cache: dict = {}
    for p in problem.arc(side):
        G0 = -problem.B + s @ p.at(t)
        key = (G0.tobytes(), p.length)
        E = cache.get(key)
        if E is None:
            E = expm_batch((G0[None] - lams[:, None, None] * s[None]) * p.length)
            cache[key] = E
        T = E @ T
    return T


def transfer_matrix(problem: ModelProblem, interval, t, lam: float = 0.0) -> np.ndarray:
    """``T`` with ``u(b) = T u(a)`` for solutions of ``(A + C_t - lam) u = 0``.

    ``interval = (a, b)`` must lie within one arc (``0 <= a <= b <= ell`` or
    ``ell <= a <= b <= L``).  ``t`` may be a pair ``(t_minus, t_plus)``.
    """
    a, b = map(float, interval)
    ell, L = problem.ell, problem.L
    tol = 1e-12 * max(1.0, L)
    if not (0 <= a <= b + tol):
        raise ProblemError("interval must be increasing and inside [0, L]")
    if not ((b <= ell + tol) or (a >= ell - tol)) or b > L + tol:
        raise ProblemError("interval must lie within one arc")
    tm, tp = _times(t)
    s = problem.sigma
    T = np.eye(problem.m)
    for side, p, length in _pieces_on(problem, a, b):
        tt = tm if side == "-" else tp
        G = -problem.B + s @ (p.at(tt) - lam * np.eye(problem.m))
        T = sla.expm(G * length) @ T
    return T


def graph_frame(T: np.ndarray, top: bool = True) -> np.ndarray:
    """Orthonormal frame of ``[1; T]`` (or ``[T; 1]``), batched over leading axes.

    Uses ``[1; T] (1 + T^T T)^{-1/2}``, which is continuous in ``T``.
    """
    T = np.asarray(T)
    m = T.shape[-1]
    w, Q = np.linalg.eigh(np.eye(m) + np.swapaxes(T, -1, -2) @ T)
    S = (Q * (1.0 / np.sqrt(w))[..., None, :]) @ np.swapaxes(Q, -1, -2)
    I = np.broadcast_to(np.eye(m), T.shape)
    stack = np.concatenate([I, T] if top else [T, I], axis=-2)
    return stack @ S


def side_frames(problem: ModelProblem, side: str, t: float, lams) -> np.ndarray:
    """Batched frames of the Cauchy data spaces of one arc."""
    T = arc_transfer(problem, side, t, lams)
    return graph_frame(T, top=(side == "-"))


def cauchy_data_space(problem: ModelProblem, side: str, t, lam: float = 0.0) -> Lagrangian:
    """Traces of solutions of ``(A + C_t - lam) u = 0`` on one arc.

    For ``side = '-'`` this is ``{(u(0), T_- u(0))}`` in ``beta_-``; for
    ``side = '+'`` it is ``{(T_+ u(ell), u(ell))}`` in ``beta_+``.
    """
    tm, tp = _times(t)
    tt = tm if side == "-" else tp
    F = side_frames(problem, side, tt, [lam])[0]
    space = problem.beta_minus if side == "-" else problem.beta_plus
    return Lagrangian(space, F)


def circle_cauchy_data(problem: ModelProblem, t, lam: float = 0.0) -> Lagrangian:
    """``Lambda_- ⊞ Lambda_+`` in the full boundary space."""
    tm, tp = _times(t)
    return box_plus(cauchy_data_space(problem, "-", tm, lam),
                    Lagrangian(problem.beta_minus,
                               cauchy_data_space(problem, "+", tp, lam).frame),
                    problem.beta)


def transmission_lagrangian(problem: ModelProblem) -> Lagrangian:
    """``{(phi, phi)}`` in ``beta_- ⊕ beta_+``."""
    return problem.delta


def periodic_kernel_dim(problem: ModelProblem, t, lam: float = 0.0) -> int:
    """dim Ker(A + C_t - lam) on the closed circle, as dim Ker(T_+ T_- - 1)."""
    tm, tp = _times(t)
    Tm = arc_transfer(problem, "-", tm, [lam])[0]
    Tp = arc_transfer(problem, "+", tp, [lam])[0]
    M = Tp @ Tm - np.eye(problem.m)
    s = np.linalg.svd(M, compute_uv=False)
    scale = max(1.0, np.linalg.norm(Tp, 2) * np.linalg.norm(Tm, 2))
    return int(np.sum(s <= defaults.tol().kernel * scale))


def circle_kernel_dim(problem: ModelProblem, t) -> int:
    """dim of (Lambda_- ⊞ Lambda_+) ∩ delta."""
    return intersection_dim(circle_cauchy_data(problem, t), problem.delta)


@dataclass(frozen=True)
class SplitConditions:
    """Boundary conditions for the two halves: ``ell0`` in beta_-, ``ell1`` in beta_+."""

    ell0: Lagrangian
    ell1: Lagrangian
    warning: str | None = None


def split_boundary_conditions(problem: ModelProblem) -> SplitConditions:
    """``ell0 = Lambda_0^+`` read in ``beta_-`` and ``ell1 = Lambda_1^-`` read in ``beta_+``.

    Without product form the split is still accepted when ``A + C_0`` is
    invertible on the circle, with a warning.
    """
    warning = None
    if not problem.product_form:
        if circle_kernel_dim(problem, 0.0) > 0:
            raise ProblemError(
                "split needs product form or an invertible operator at t = 0")
        warning = "problem is not of product form; A + C_0 is invertible"
        warnings.warn(warning, stacklevel=2)
    lam0_plus = cauchy_data_space(problem, "+", 0.0)
    lam1_minus = cauchy_data_space(problem, "-", 1.0)
    return SplitConditions(Lagrangian(problem.beta_minus, lam0_plus.frame),
                           Lagrangian(problem.beta_plus, lam1_minus.frame),
                           warning)
