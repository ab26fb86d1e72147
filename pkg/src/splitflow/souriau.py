"""The Souriau map and the complexified picture of the Lagrangian Grassmannian.

For a Lagrangian ``lam`` and a unitary lift ``U`` of ``mu`` (``U(lam^perp) = mu``
in lam-coordinates) the Souriau image is ``W = U theta(U)`` where
``theta(U) = tau U^* tau`` and ``tau`` is complex conjugation of the
coordinates.  In coordinates ``theta(U) = U^T`` and so ``W = U U^T``.
The -1 eigenspace of ``W`` is the complexification of ``mu ∩ lam``.

The second half of the module works in the complexification ``H (x) C``.
``E_+`` and ``E_-`` are the ``+i`` and ``-i`` eigenspaces of ``J``; each
complexified Lagrangian is the graph of a unitary ``E_+ -> E_-``, written
as a matrix in the bases cached on the space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import defaults
from .symplectic import (Lagrangian, SymplecticError, from_complex, is_unitary,
                         unitary_of_lagrangian)


def theta(lam: Lagrangian, U) -> np.ndarray:
    """``tau_lam U^* tau_lam``; in lam-coordinates this is the transpose."""
    U = np.asarray(U, dtype=complex)
    return np.conj(U.conj().T)


def unitary_phases(W) -> np.ndarray:
    """Sorted arguments in (-pi, pi] of the eigenvalues of a unitary matrix."""
    ev = np.linalg.eigvals(np.asarray(W, dtype=complex))
    ph = np.angle(ev)
    ph[ph <= -np.pi] += 2 * np.pi
    return np.sort(ph)


def kernel_plus_identity(W, tol: float | None = None) -> int:
    """dim Ker(W + 1) for unitary W, via eigenphases within ``tol`` of pi."""
    tol = defaults.tol().phase if tol is None else tol
    ph = unitary_phases(W)
    return int(np.sum(np.abs(np.abs(ph) - np.pi) <= tol))


def group_phases(phases, tol: float | None = None) -> list[tuple[float, int]]:
    """Group sorted phases into (representative, multiplicity) clusters."""
    tol = defaults.tol().phase if tol is None else tol
    out: list[list] = []
    for p in np.sort(np.asarray(phases)):
        if out and p - out[-1][0] <= tol:
            out[-1][1] += 1
        else:
            out.append([float(p), 1])
    # the circle wraps: -pi and pi coincide
    if len(out) > 1 and out[0][0] + 2 * np.pi - out[-1][0] <= tol:
        last = out.pop()
        out[0] = [np.pi, out[0][1] + last[1]]
    return [(p, m) for p, m in out]


@dataclass(frozen=True, eq=False)
class SouriauImage:
    """Souriau image ``W`` of a Lagrangian relative to ``base``."""

    W: np.ndarray
    base: Lagrangian
    phases: np.ndarray

    @property
    def kernel_dim(self) -> int:
        """dim_C Ker(W + 1)."""
        return kernel_plus_identity(self.W)

    def grouped(self):
        return group_phases(self.phases)


def souriau_matrix(lam: Lagrangian, mu_or_U) -> np.ndarray:
    """The matrix ``W = U theta(U)`` (no eigen-decomposition)."""
    if isinstance(mu_or_U, Lagrangian):
        U = unitary_of_lagrangian(lam, mu_or_U)
    else:
        U = np.atleast_2d(np.asarray(mu_or_U, dtype=complex))
        if U.shape != (lam.n, lam.n) or not is_unitary(U):
            raise SymplecticError("lift must be an n x n unitary matrix")
    return U @ U.T


def souriau_map(lam: Lagrangian, mu_or_U) -> SouriauImage:
    """Souriau image of a Lagrangian (lifted internally) or of a unitary lift."""
    W = souriau_matrix(lam, mu_or_U)
    return SouriauImage(W, lam, unitary_phases(W))


# --- complexification ----------------------------------------------------

@dataclass(frozen=True, eq=False)
class ComplexLagrangianGraph:
    """A complex Lagrangian ``{x + T x : x in E_+}`` in the cached bases."""

    T: np.ndarray

    def distance(self, other: "ComplexLagrangianGraph") -> float:
        return float(np.linalg.norm(self.T - other.T, 2))


def complexify(mu: Lagrangian) -> ComplexLagrangianGraph:
    """Graph unitary of ``mu (x) C``."""
    sp = mu.space
    G = mu.frame.astype(complex)
    c_plus = sp.e_plus.conj().T @ G
    c_minus = sp.e_minus.conj().T @ G
    return ComplexLagrangianGraph(c_minus @ np.linalg.inv(c_plus))


def k_plus(space, u) -> np.ndarray:
    """``u -> u - iJu``, a real-to-E_+ isomorphism."""
    u = np.asarray(u)
    return u - 1j * (space.J @ u)


def k_minus(space, u) -> np.ndarray:
    """``u -> u + iJu``, a real-to-E_- isomorphism (antilinear in J)."""
    u = np.asarray(u)
    return u + 1j * (space.J @ u)


def conjugation_graph(lam: Lagrangian) -> np.ndarray:
    """Matrix of ``T_lam : E_+ -> E_-`` with ``k_minus o tau_lam = T_lam o k_plus``."""
    sp = lam.space
    F = sp.reference
    # basis vectors of E_+ are k_plus(F_j)/sqrt2; tau fixes lam and negates J lam
    lam_perp = sp.J @ lam.frame
    tau = lam.frame @ lam.frame.T - lam_perp @ lam_perp.T
    return sp.e_minus.conj().T @ k_minus(sp, tau @ F) / np.sqrt(2.0)


def phi_map(W, lam: Lagrangian) -> ComplexLagrangianGraph:
    """Graph of ``-k_minus o W o tau_lam o k_plus^{-1}`` for W in lam-coordinates."""
    W = np.atleast_2d(np.asarray(W, dtype=complex))
    if W.shape != (lam.n, lam.n) or not is_unitary(W, 1e-8):
        raise SymplecticError("W must be an n x n unitary matrix")
    sp = lam.space
    F = sp.reference
    lam_perp = sp.J @ lam.frame
    tau = lam.frame @ lam.frame.T - lam_perp @ lam_perp.T
    # k_plus^{-1} of the j-th basis vector of E_+ is F_j / sqrt2
    u = tau @ F / np.sqrt(2.0)
    z = lam.frame.T @ u + 1j * (lam_perp.T @ u)
    Wu = from_complex(lam, W @ z)
    return ComplexLagrangianGraph(-(sp.e_minus.conj().T @ k_minus(sp, Wu)))
