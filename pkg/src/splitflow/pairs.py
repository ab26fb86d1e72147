"""The double symplectic space and Maslov indices of pairs of Lagrangians.

``H ⊞ H`` is ``H ⊕ H`` with form ``omega ⊕ (-omega)`` and complex
structure ``J ⊕ (-J)``.  The diagonal is Lagrangian there, and so is
``mu ⊞ lam`` for any two Lagrangians of ``H``; the index of a pair path is
the index of ``mu_t ⊞ lam_t`` relative to the diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np
import scipy.linalg as sla

from .maslov import LagrangianPath, maslov_index
from .souriau import souriau_matrix
from .symplectic import (Lagrangian, SymplecticError, SymplecticSpace,
                         complex_matrix, lagrangian_from_unitary, real_matrix)


@dataclass(frozen=True, eq=False)
class DoubleSpace:
    """``H ⊞ H`` built on ``base``; ``space`` is the 4n-dimensional result."""

    base: SymplecticSpace

    @cached_property
    def space(self) -> SymplecticSpace:
        J = sla.block_diag(self.base.J, -self.base.J)
        F = sla.block_diag(self.base.reference, self.base.reference)
        return SymplecticSpace(J, F, name=f"{self.base.name}⊞{self.base.name}")

    def embed(self, x, y) -> np.ndarray:
        return np.concatenate([np.asarray(x), np.asarray(y)])

    def omega(self, u, v) -> float:
        return self.space.omega(u, v)


def double(space: SymplecticSpace) -> DoubleSpace:
    return DoubleSpace(space)


def diagonal(dbl: DoubleSpace) -> Lagrangian:
    """``{x ⊞ x}`` with frame ``(e_k ⊞ e_k) / sqrt2``."""
    d = dbl.base.dim
    return Lagrangian(dbl.space, np.vstack([np.eye(d), np.eye(d)]) / np.sqrt(2.0))


def box_plus(mu: Lagrangian, lam: Lagrangian, dbl: DoubleSpace | None = None) -> Lagrangian:
    """``mu ⊞ lam`` in the double space."""
    if not mu.space.same_as(lam.space):
        raise SymplecticError("Lagrangians live in different spaces")
    dbl = double(mu.space) if dbl is None else dbl
    return Lagrangian(dbl.space, sla.block_diag(mu.frame, lam.frame))


def pair_path(mu: Callable[[float], Lagrangian], lam: Callable[[float], Lagrangian],
              dbl: DoubleSpace) -> LagrangianPath:
    """``t -> mu(t) ⊞ lam(t)``, both components sampled at the same t."""
    return LagrangianPath(lambda t: box_plus(mu(t), lam(t), dbl))


def maslov_pair(mu, lam, **kw) -> int:
    """Maslov index of the pair path ``(mu_t, lam_t)``.

    Either argument may be a :class:`LagrangianPath`, a callable, or a fixed
    :class:`Lagrangian`.
    """
    f, g = _as_callable(mu), _as_callable(lam)
    dbl = double(f(0.0).space)
    return maslov_index(pair_path(f, g, dbl), diagonal(dbl), **kw)


def _as_callable(x):
    if isinstance(x, Lagrangian):
        return lambda t: x
    if isinstance(x, LagrangianPath):
        return x.evaluator
    return x


@dataclass(frozen=True, eq=False)
class DiagramMaps:
    """The maps relating the Souriau pictures of ``H`` (over lam) and ``H ⊞ H`` (over the diagonal).

    ``A`` is the real symmetric involution ``J (P_perp - P_lam)`` of ``H``,
    read as a complex matrix on the diagonal's coordinates; ``V`` is
    ``(-i - A) / sqrt2``.  ``a(U) = (U ⊕ 1) V`` lifts unitaries, ``b(W) =
    i (W ⊕ 1) A`` transports Souriau images and ``P(mu) = mu ⊞ lam``.
    """

    lam: Lagrangian
    dbl: DoubleSpace
    delta: Lagrangian
    A: np.ndarray
    V: np.ndarray

    def _tilde(self, U) -> np.ndarray:
        Ur = real_matrix(self.lam, U)
        big = sla.block_diag(Ur, np.eye(self.lam.space.dim))
        return complex_matrix(self.delta, big)

    def a(self, U) -> np.ndarray:
        return self._tilde(U) @ self.V

    def b(self, W) -> np.ndarray:
        return 1j * self._tilde(W) @ self.A

    def P(self, mu: Lagrangian) -> Lagrangian:
        return box_plus(mu, self.lam, self.dbl)

    def check(self, mu: Lagrangian) -> float:
        """``|| S_Delta(P(mu)) - b(S_lam(mu)) ||``."""
        lhs = souriau_matrix(self.delta, self.P(mu))
        rhs = self.b(souriau_matrix(self.lam, mu))
        return float(np.linalg.norm(lhs - rhs, 2))

    def v_image(self) -> Lagrangian:
        """``V`` applied to the complement of the diagonal."""
        return lagrangian_from_unitary(self.delta, self.V)


def diagram_maps(lam: Lagrangian) -> DiagramMaps:
    sp = lam.space
    dbl = double(sp)
    delta = diagonal(dbl)
    P = lam.frame @ lam.frame.T
    R = np.eye(sp.dim) - 2 * P
    A = (sp.J @ R).astype(complex)
    V = (-1j * np.eye(sp.dim) - A) / np.sqrt(2.0)
    return DiagramMaps(lam, dbl, delta, A, V)
