"""Seeded paths with known indices, used by the tests and the CLI.

``phase_path`` builds ``mu(t) = rho(O(t) diag(exp(i phi_j(t))))`` with
``O(t) = exp(t K)`` real orthogonal and each ``phi_j`` linear.  The Souriau
matrix is ``O D^2 O^T``, so its eigenphases are ``2 phi_j(t)`` whatever
``K`` is, and the Maslov index has the closed form of :func:`phase_index`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .maslov import LagrangianPath
from .specflow import OperatorPath
from .symplectic import Lagrangian, lagrangian_from_unitary, random_lagrangian


@dataclass(frozen=True)
class PhasePath:
    """A path ``rho(exp(tK) diag(exp(i (a + t b))))`` over ``lam``."""

    lam: Lagrangian
    K: np.ndarray
    a: np.ndarray
    b: np.ndarray

    def unitary(self, t: float) -> np.ndarray:
        O = sla.expm(t * self.K)
        return O * np.exp(1j * (self.a + t * self.b))[None, :]

    def __call__(self, t: float) -> Lagrangian:
        return lagrangian_from_unitary(self.lam, self.unitary(t))

    @property
    def path(self) -> LagrangianPath:
        return LagrangianPath(self)

    def crossings(self) -> list[tuple[float, int]]:
        """(t, direction) for each passage of an eigenphase ``2 phi_j`` through pi."""
        out = []
        for a, b in zip(self.a, self.b):
            if b == 0:
                continue
            psi0, psi1 = 2 * a - np.pi, 2 * (a + b) - np.pi
            lo, hi = sorted((psi0, psi1))
            for k in range(int(np.ceil(lo / (2 * np.pi))), int(np.floor(hi / (2 * np.pi))) + 1):
                out.append(((2 * np.pi * k - psi0) / (psi1 - psi0), int(np.sign(b))))
        return sorted(out)


def phase_index(a, b) -> int:
    """Maslov index of a phase path: ``sum_j floor(psi_j(1)/2pi) - floor(psi_j(0)/2pi)``.

    ``psi_j = 2 phi_j - pi`` is the eigenphase measured from pi; the floor
    form encodes the closed counting arc at pi for both directions.
    """
    a, b = np.asarray(a, float), np.asarray(b, float)
    psi0 = 2 * a - np.pi
    psi1 = 2 * (a + b) - np.pi
    return int(np.sum(np.floor(psi1 / (2 * np.pi)) - np.floor(psi0 / (2 * np.pi))))


def random_phase_path(lam: Lagrangian, rng: np.random.Generator,
                      speed: float = 3.0) -> PhasePath:
    """A seeded phase path over ``lam`` with generic (interior) crossings."""
    n = lam.n
    G = rng.standard_normal((n, n))
    K = (G - G.T) / 2
    a = rng.uniform(-np.pi, np.pi, n)
    b = rng.uniform(-speed, speed, n)
    return PhasePath(lam, K, a, b)


def random_loop_in(space, rng, n_turns: int = 1):
    """A seeded Lagrangian path in ``space`` over a random reference."""
    return random_phase_path(random_lagrangian(space, rng), rng, speed=3.0 * n_turns)


def random_operator_path(d: int, rng: np.random.Generator, kind: str = "smooth") -> OperatorPath:
    """Seeded symmetric paths: ``linear`` interpolation or a ``smooth`` rotating one."""
    def sym():
        G = rng.standard_normal((d, d))
        return (G + G.T) / 2

    A0, A1 = sym(), sym()
    if kind == "linear":
        return OperatorPath(lambda t: (1 - t) * A0 + t * A1, lambda t: A1 - A0)
    G = rng.standard_normal((d, d))
    K = (G - G.T) / 2
    D0 = rng.uniform(-2, 2, d)
    D1 = rng.uniform(-2, 2, d)

    def ev(t):
        O = sla.expm(t * K)
        return (O * ((1 - t) * D0 + t * D1)) @ O.T

    return OperatorPath(ev)
