"""Maslov index of Lagrangian paths via the winding of Souriau eigenphases.

The index of a unitary path ``W(t)`` counts eigenvalues entering or leaving
the closed arc ``{e^{i(pi + theta)} : 0 <= theta <= eps}`` segment by
segment.  On each segment ``eps`` is chosen so that ``e^{i(pi + eps)}``
stays away from the spectrum; the partition is refined adaptively until the
motion of ``W`` over a segment is below half that margin, which (``W`` being
normal) keeps every eigenvalue off the moving end of the arc.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg as sla

from . import defaults
from .souriau import souriau_matrix
from .symplectic import (Lagrangian, SymplecticError, graph_operator,
                         intersection_basis, lagrangian_from_unitary,
                         null_space, polar_unitary, unitary_of_lagrangian)


class RefinementError(RuntimeError):
    """Adaptive sampling did not converge within the evaluation budget."""


class CrossingError(ValueError):
    """A crossing-form computation could not be carried out as requested."""


# --- paths ---------------------------------------------------------------

@dataclass(frozen=True)
class UnitaryPath:
    """``t in [0, 1] -> W(t)``, an n x n unitary matrix."""

    evaluator: Callable[[float], np.ndarray]

    def __call__(self, t: float) -> np.ndarray:
        return np.asarray(self.evaluator(float(t)), dtype=complex)

    def reversed(self) -> "UnitaryPath":
        return UnitaryPath(lambda t: self.evaluator(1.0 - t))

    def reparametrized(self, g: Callable[[float], float]) -> "UnitaryPath":
        return UnitaryPath(lambda t: self.evaluator(g(t)))

    def then(self, other: "UnitaryPath") -> "UnitaryPath":
        return UnitaryPath(_catenate(self.evaluator, other.evaluator))


@dataclass(frozen=True)
class LagrangianPath:
    """``t in [0, 1] -> mu(t)``, a Lagrangian in a fixed space."""

    evaluator: Callable[[float], Lagrangian]

    def __call__(self, t: float) -> Lagrangian:
        return self.evaluator(float(t))

    def reversed(self) -> "LagrangianPath":
        return LagrangianPath(lambda t: self.evaluator(1.0 - t))

    def reparametrized(self, g: Callable[[float], float]) -> "LagrangianPath":
        return LagrangianPath(lambda t: self.evaluator(g(t)))

    def then(self, other: "LagrangianPath") -> "LagrangianPath":
        return LagrangianPath(_catenate(self.evaluator, other.evaluator))

    def souriau(self, lam: Lagrangian) -> UnitaryPath:
        return UnitaryPath(lambda t: souriau_matrix(lam, self.evaluator(t)))


def _catenate(f, g):
    def h(t):
        return f(2 * t) if t <= 0.5 else g(2 * t - 1)
    return h


def unitary_geodesic(U0, U1) -> Callable[[float], np.ndarray]:
    """``t -> U0 exp(t log(U0^* U1))`` with the principal logarithm."""
    U0 = np.asarray(U0, dtype=complex)
    D = unitary_log(U0.conj().T @ np.asarray(U1, dtype=complex), refuse=False)

    def ev(t):
        return polar_unitary(U0 @ sla.expm(t * D))
    return ev


def lagrangian_geodesic(lam: Lagrangian, mu0: Lagrangian,
                        mu1: Lagrangian) -> LagrangianPath:
    """Path from mu0 to mu1 through the unitary lifts relative to ``lam``."""
    g = unitary_geodesic(unitary_of_lagrangian(lam, mu0),
                         unitary_of_lagrangian(lam, mu1))
    return LagrangianPath(lambda t: lagrangian_from_unitary(lam, g(t)))


# --- symmetric forms -----------------------------------------------------

@dataclass(frozen=True, eq=False)
class SymmetricForm:
    """A symmetric (or Hermitian) form on the span of ``carrier``."""

    carrier: np.ndarray
    matrix: np.ndarray
    p: int = field(init=False)
    q: int = field(init=False)

    def __post_init__(self):
        M = np.atleast_2d(np.asarray(self.matrix))
        if M.size == 0:
            M = np.zeros((0, 0))
        M = (M + M.conj().T) / 2
        object.__setattr__(self, "matrix", M)
        if M.shape[0]:
            ev = np.linalg.eigvalsh(M)
            scale = max(1.0, np.abs(ev).max())
            t = defaults.tol().form * scale
            p, q = int(np.sum(ev > t)), int(np.sum(ev < -t))
        else:
            p = q = 0
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def signature(self) -> tuple[int, int]:
        return (self.p, self.q)

    @property
    def sign(self) -> int:
        return self.p - self.q

    @property
    def regular(self) -> bool:
        return self.p + self.q == self.dim


# --- the index -----------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    a: float
    b: float
    eps: float
    k_a: int
    k_b: int


@dataclass(frozen=True)
class IndexResult:
    value: int
    segments: tuple[Segment, ...]
    evaluations: int

    @property
    def jumps(self) -> list[Segment]:
        return [s for s in self.segments if s.k_a != s.k_b]


def _choose_level(points: np.ndarray, cap: float) -> float:
    """Level in (0, cap] maximizing the distance to ``points``."""
    inside = np.sort(points[(points > 0) & (points < cap)])
    edges = np.concatenate([[0.0], inside, [cap]])
    cands = np.concatenate([(edges[:-1] + edges[1:]) / 2, [cap]])
    cands = cands[cands > 0]
    dist = np.array([np.abs(points - c).min() if points.size else np.inf
                     for c in cands])
    return float(cands[int(np.argmax(dist))])


def _walk(evaluate, spectrum, margin_of, count, cap, max_step, budget):
    """Shared adaptive sweep for the unitary and self-adjoint indices.

    ``evaluate(t)`` returns a matrix, ``spectrum(M)`` the points used to pick
    the level, ``margin_of(M, eps)`` the distance from the level to the
    spectrum, and ``count(M, eps)`` the number of points in the window.
    """
    g = defaults.grid()
    budget = g.budget if budget is None else budget
    calls = 0

    def ev(t):
        nonlocal calls
        calls += 1
        if calls > budget:
            raise RefinementError(
                f"evaluation budget of {budget} exhausted; path may be discontinuous")
        return evaluate(t)

    a, Ma = 0.0, ev(0.0)
    h = min(g.initial_step, max_step)
    segs: list[Segment] = []
    total = 0
    while a < 1.0:
        eps = _choose_level(spectrum(Ma), cap)
        d = margin_of(Ma, eps)
        k_a = count(Ma, eps)
        while True:
            b = min(a + h, 1.0)
            if b - a < 1e-13:
                raise RefinementError(f"step underflow at t={a:.6g}")
            Mb = ev(b)
            ok = np.linalg.norm(Mb - Ma, 2) < d / 2
            if ok:
                Mm = ev((a + b) / 2)
                ok = np.linalg.norm(Mm - Ma, 2) < d / 2
            if ok:
                break
            h /= 2
        k_b = count(Mb, eps)
        segs.append(Segment(a, b, eps, k_a, k_b))
        total += k_b - k_a
        a, Ma = b, Mb
        h = min(2 * h, max_step)
    return IndexResult(int(total), tuple(segs), calls)


def _unitary_theta(W):
    ph = np.angle(np.linalg.eigvals(W) * -1.0)  # phase measured from pi
    return ph


def index_unitary_details(path: UnitaryPath, *, eps_cap: float = np.pi / 2,
                          max_step: float = 1.0,
                          budget: int | None = None) -> IndexResult:
    """The index with its partition; see :func:`index_unitary_path`."""
    if not 0 < eps_cap <= np.pi / 2:
        raise ValueError("eps_cap must lie in (0, pi/2]")
    ztol = defaults.tol().phase

    def spectrum(W):
        return _unitary_theta(W)

    def margin_of(W, eps):
        return float(np.abs(np.linalg.eigvals(W) - np.exp(1j * (np.pi + eps))).min())

    def count(W, eps):
        th = _unitary_theta(W)
        return int(np.sum((th >= -ztol) & (th <= eps)))

    return _walk(path, spectrum, margin_of, count, eps_cap, max_step, budget)


def index_unitary_path(path: UnitaryPath, **kw) -> int:
    """Net number of eigenvalues of ``W(t)`` crossing -1 counterclockwise.

    The counting window ``e^{i(pi + theta)}``, ``0 <= theta <= eps`` is
    closed at -1, so an eigenvalue sitting at -1 at an endpoint counts as
    already inside it.

    Parameters
    ----------
    path : UnitaryPath
    eps_cap : float, optional
        Upper bound for the per-segment window width, in (0, pi/2].
    max_step : float, optional
        Forces a partition at least this fine.
    budget : int, optional
        Maximum number of evaluator calls.
    """
    return index_unitary_details(path, **kw).value


def maslov_index(path: LagrangianPath, lam: Lagrangian, **kw) -> int:
    """Maslov index of ``mu(t)`` relative to ``lam`` (index of its Souriau path)."""
    return index_unitary_path(path.souriau(lam), **kw)


def maslov_details(path: LagrangianPath, lam: Lagrangian, **kw) -> IndexResult:
    return index_unitary_details(path.souriau(lam), **kw)


# --- crossing forms ------------------------------------------------------

def unitary_log(V, refuse: bool = True) -> np.ndarray:
    """Principal logarithm of a unitary matrix via its Schur form.

    With ``refuse`` set, raises if an eigenvalue is within the configured
    distance of the cut at -1.
    """
    T, Z = sla.schur(np.asarray(V, dtype=complex), output="complex")
    d = np.diag(T)
    if refuse and np.abs(d + 1).min(initial=np.inf) < defaults.tol().log_cut:
        raise CrossingError("eigenvalue on the branch cut of the logarithm")
    return Z @ np.diag(1j * np.angle(d)) @ Z.conj().T


def _richardson(f, t_star, h, side):
    """Derivative of ``f`` at ``t_star`` with one Richardson step.

    ``side`` is 0 for central differences, +1 forward, -1 backward; ``f``
    must vanish at ``t_star`` for the one-sided rules.
    """
    if side == 0:
        def D(s):
            return (f(t_star + s) - f(t_star - s)) / (2 * s)
        return (4 * D(h / 2) - D(h)) / 3
    def D(s):
        return (f(t_star + side * s) - f(t_star)) / (side * s)
    return 2 * D(h / 2) - D(h)


def _side(t_star):
    if t_star <= 0.0:
        return 1
    if t_star >= 1.0:
        return -1
    return 0


def _with_step(compute):
    g = defaults.grid()
    h = g.fd_step
    last = None
    while h >= g.fd_min_step:
        try:
            return compute(h)
        except (CrossingError, SymplecticError) as exc:
            last = exc
            h /= 4
    raise CrossingError(f"finite differences failed down to the minimum step: {last}")


def crossing_form_unitary(path: UnitaryPath, t_star: float) -> SymmetricForm:
    """Hermitian crossing form on Ker(W(t*) + 1).

    Writes ``W(t) = W(t*) exp(i R(t))`` with ``R(t*) = 0`` and returns
    ``<x, R'(t*) y>`` on the kernel.
    """
    t_star = float(t_star)
    W0 = path(t_star)
    n = W0.shape[0]
    K = null_space(W0 + np.eye(n), scale=1.0)
    if K.shape[1] == 0:
        return SymmetricForm(np.zeros((n, 0)), np.zeros((0, 0)))
    W0h = W0.conj().T

    def R(t):
        return -1j * unitary_log(W0h @ path(t))

    dR = _with_step(lambda h: _richardson(R, t_star, h, _side(t_star)))
    return SymmetricForm(K, K.conj().T @ dR @ K)


def crossing_form_graph(path: LagrangianPath, lam: Lagrangian,
                        t_star: float) -> SymmetricForm:
    """Crossing form ``d/dt omega(x, phi(t) y)`` on ``mu(t*) ∩ lam``.

    ``phi(t)`` is the graph operator of ``mu(t)`` over ``mu(t*)``.
    """
    t_star = float(t_star)
    center = path(t_star)
    basis = intersection_basis(center, lam)
    if basis.shape[1] == 0:
        return SymmetricForm(basis, np.zeros((0, 0)))
    A = center.frame.T @ basis

    def phi(t):
        return graph_operator(center, path(t))

    dphi = _with_step(lambda h: _richardson(phi, t_star, h, _side(t_star)))
    return SymmetricForm(basis, A.T @ dphi @ A)


def local_contribution(form: SymmetricForm, t_star: float) -> int:
    """Local index of a regular crossing: signature inside, -q at 0, +p at 1."""
    if not form.regular:
        raise CrossingError("crossing form is degenerate")
    if t_star <= 0.0:
        return -form.q
    if t_star >= 1.0:
        return form.p
    return form.sign


def local_index_at_regular_crossing(path: LagrangianPath, lam: Lagrangian,
                                    t_star: float, delta: float) -> int:
    """Local Maslov index at a regular crossing from its crossing form.

    The window ``[t* - delta, t* + delta]`` (clipped to [0, 1]) is rejected
    if the index sweep finds an eigenvalue passing -1 anywhere in it outside
    ``delta / 64`` of ``t*``.
    """
    t_star = float(t_star)
    if delta <= 0:
        raise ValueError("delta must be positive")
    upath = path.souriau(lam)
    form = crossing_form_unitary(upath, t_star)
    if form.dim == 0:
        return 0
    value = local_contribution(form, t_star)
    lo, hi = max(0.0, t_star - delta), min(1.0, t_star + delta)
    eta = delta / 64
    for a, b in ((lo, t_star - eta), (t_star + eta, hi)):
        if b - a <= 0:
            continue
        res = index_unitary_details(window_path(upath, a, b))
        if res.jumps:
            s = res.jumps[0]
            raise CrossingError(
                f"second crossing near t={a + (b - a) * s.a:.6g} inside the window")
    return value


def window_path(path, lo: float, hi: float):
    """Restriction of a path to [lo, hi], reparametrized to [0, 1]."""
    cls = type(path)
    return cls(lambda s: path.evaluator(lo + (hi - lo) * s))


# --- Hormander index -----------------------------------------------------

def connecting_path(mu0: Lagrangian, mu1: Lagrangian,
                    via: Lagrangian | None = None) -> LagrangianPath:
    """A path from mu0 to mu1, optionally passing through ``via`` at t = 1/2."""
    base = mu0.space.standard
    if via is None:
        return lagrangian_geodesic(base, mu0, mu1)
    return lagrangian_geodesic(base, mu0, via).then(lagrangian_geodesic(base, via, mu1))


def hormander_index(mu0: Lagrangian, mu1: Lagrangian, lam: Lagrangian,
                    lam_prime: Lagrangian, via: Lagrangian | None = None) -> int:
    """``Mas(path, lam) - Mas(path, lam')`` for a path from mu0 to mu1.

    The value does not depend on the path; ``via`` selects a different one.
    """
    p = connecting_path(mu0, mu1, via)
    return maslov_index(p, lam) - maslov_index(p, lam_prime)
