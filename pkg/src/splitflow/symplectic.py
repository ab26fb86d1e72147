"""Real symplectic linear algebra on R^{2n}.

A :class:`SymplecticSpace` is R^{2n} with the Euclidean inner product and a
compatible complex structure ``J`` (orthogonal, ``J^2 = -1``); the symplectic
form is ``omega(x, y) = <J x, y>``.  Lagrangian subspaces are stored as
orthonormal frames.

Complex coordinates: for a Lagrangian ``lam`` with frame ``F`` the map

    x + J y  ->  x (x) 1 + y (x) i,        x, y in lam

identifies (R^{2n}, J) with C^n.  In these coordinates a vector ``v`` has
``z = F^T v + i (J F)^T v``; :func:`to_complex` and :func:`from_complex`
implement the two directions.  Unitary operators commuting with ``J``
become complex n x n matrices ``U = X + iY``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg as sla

from . import defaults


class SymplecticError(ValueError):
    """Invalid symplectic data (bad J, non-Lagrangian frame, shape mismatch)."""


def _readonly(a):
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


def orthonormalize(vectors: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the column span, via QR with a sign convention.

    Raises if the columns are numerically dependent.
    """
    vectors = np.asarray(vectors)
    q, r = np.linalg.qr(vectors)
    d = np.abs(np.diag(r))
    if d.size and d.min() <= defaults.tol().kernel * max(d.max(), 1e-300):
        raise SymplecticError("frame is numerically rank deficient")
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1
    return q * signs


def null_space(a: np.ndarray, scale: float | None = None) -> np.ndarray:
    """Orthonormal basis of the kernel of ``a`` (columns).

    Singular values below ``kernel_tol * scale`` count as zero, where
    ``scale`` defaults to the largest singular value (at least 1).
    """
    a = np.atleast_2d(a)
    u, s, vh = np.linalg.svd(a)
    if scale is None:
        scale = max(s.max(initial=0.0), 1.0)
    rank = int(np.sum(s > defaults.tol().kernel * scale))
    return vh[rank:].conj().T


def principal_angle_distance(f: np.ndarray, g: np.ndarray) -> float:
    """Largest principal angle between the column spans of two orthonormal frames."""
    if f.shape != g.shape:
        return np.inf
    if f.shape[1] == 0:
        return 0.0
    # sines of the angles: accurate near zero, unlike arccos of the cosines
    s = np.linalg.svd(g - f @ (f.conj().T @ g), compute_uv=False)
    return float(np.arcsin(np.clip(s.max(), 0.0, 1.0)))


@dataclass(frozen=True, eq=False)
class SymplecticSpace:
    """R^{2n} with complex structure ``J`` and a distinguished Lagrangian.

    ``reference`` is the frame of the standard Lagrangian (``lambda_std``);
    for :func:`standard_space` it spans the first n basis vectors.
    """

    J: np.ndarray
    reference: np.ndarray
    name: str = "H"

    def __post_init__(self):
        J = np.asarray(self.J, dtype=float)
        if J.ndim != 2 or J.shape[0] != J.shape[1] or J.shape[0] % 2:
            raise SymplecticError("J must be a square matrix of even size")
        eye = np.eye(J.shape[0])
        t = 1e-12
        if (np.abs(J + J.T).max() > t or np.abs(J.T @ J - eye).max() > t
                or np.abs(J @ J + eye).max() > t):
            raise SymplecticError("J must satisfy J^T = -J, J^T J = 1, J^2 = -1")
        object.__setattr__(self, "J", _readonly(J))
        object.__setattr__(self, "reference", _readonly(self.reference))
        if self.reference.shape != (J.shape[0], J.shape[0] // 2):
            raise SymplecticError("reference frame has the wrong shape")

    @property
    def dim(self) -> int:
        return self.J.shape[0]

    @property
    def n(self) -> int:
        return self.J.shape[0] // 2

    def omega(self, x, y) -> float:
        return float(np.dot(self.J @ np.asarray(x), np.asarray(y)))

    def same_as(self, other: "SymplecticSpace") -> bool:
        return self is other or (self.J.shape == other.J.shape
                                 and np.array_equal(self.J, other.J))

    @cached_property
    def standard(self) -> "Lagrangian":
        return Lagrangian(self, self.reference)

    @cached_property
    def e_plus(self) -> np.ndarray:
        # orthonormal basis of E_+ = {J z = i z}, built from the reference Lagrangian
        F = self.reference
        return (F - 1j * (self.J @ F)) / np.sqrt(2.0)

    @cached_property
    def e_minus(self) -> np.ndarray:
        F = self.reference
        return (F + 1j * (self.J @ F)) / np.sqrt(2.0)


def standard_space(n: int) -> SymplecticSpace:
    """R^{2n} with ``J e_i = e_{n+i}``, ``J e_{n+i} = -e_i``."""
    if int(n) != n or n < 1:
        raise SymplecticError("n must be a positive integer")
    n = int(n)
    J = np.zeros((2 * n, 2 * n))
    J[n:, :n] = np.eye(n)
    J[:n, n:] = -np.eye(n)
    return SymplecticSpace(J, np.eye(2 * n)[:, :n])


def space_from_J(J: np.ndarray, name: str = "H") -> SymplecticSpace:
    """Wrap a compatible complex structure, choosing some Lagrangian as reference."""
    J = np.asarray(J, dtype=float)
    dim = J.shape[0]
    # greedy: take e_k unless it pairs with the span so far
    vecs = []
    for k in range(dim):
        v = np.eye(dim)[:, k]
        if vecs:
            B = np.column_stack(vecs)
            v = v - B @ (B.T @ v)
            JB = J @ B
            v = v - JB @ (JB.T @ v)
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            vecs.append(v / nv)
        if len(vecs) == dim // 2:
            break
    return SymplecticSpace(J, np.column_stack(vecs), name=name)


@dataclass(frozen=True, eq=False)
class Lagrangian:
    """A Lagrangian subspace given by an orthonormal, isotropic n-frame."""

    space: SymplecticSpace
    frame: np.ndarray = field(repr=False)

    def __post_init__(self):
        F = np.asarray(self.frame, dtype=float)
        sp = self.space
        if F.shape != (sp.dim, sp.n):
            raise SymplecticError(
                f"frame must have shape {(sp.dim, sp.n)}, got {F.shape}")
        t = defaults.tol()
        defect = np.abs(F.T @ F - np.eye(sp.n)).max()
        if defect > t.frame:
            if defect > t.reortho:
                raise SymplecticError("frame is not orthonormal")
            F = orthonormalize(F)
        if np.abs(F.T @ sp.J @ F).max() > t.frame:
            raise SymplecticError("frame is not isotropic")
        object.__setattr__(self, "frame", _readonly(F))

    @classmethod
    def span(cls, space: SymplecticSpace, vectors) -> "Lagrangian":
        """Lagrangian spanned by any n independent isotropic vectors."""
        return cls(space, orthonormalize(np.asarray(vectors, dtype=float)))

    @property
    def n(self) -> int:
        return self.space.n

    def perp(self) -> "Lagrangian":
        """The orthogonal complement, which is ``J`` applied to the subspace."""
        return Lagrangian(self.space, self.space.J @ self.frame)

    def projector(self) -> np.ndarray:
        return self.frame @ self.frame.T

    def distance(self, other: "Lagrangian") -> float:
        return principal_angle_distance(self.frame, other.frame)

    def equals(self, other: "Lagrangian", tol: float | None = None) -> bool:
        tol = defaults.tol().subspace if tol is None else tol
        return self.space.same_as(other.space) and self.distance(other) <= tol


def is_lagrangian(space: SymplecticSpace, frame) -> bool:
    """True iff the (orthonormal) frame spans a Lagrangian subspace."""
    F = np.asarray(frame, dtype=float)
    if F.ndim == 1:
        F = F[:, None]
    if F.shape != (space.dim, space.n):
        raise SymplecticError(
            f"frame must have shape {(space.dim, space.n)}, got {F.shape}")
    t = defaults.tol()
    defect = np.abs(F.T @ F - np.eye(space.n)).max()
    if defect > t.reortho:
        raise SymplecticError("frame is not orthonormal")
    F = orthonormalize(F)
    return bool(np.abs(F.T @ space.J @ F).max() <= t.frame)


def _check_same(a: Lagrangian, b: Lagrangian):
    if not a.space.same_as(b.space):
        raise SymplecticError("Lagrangians live in different spaces")


def intersection_basis(mu: Lagrangian, lam: Lagrangian) -> np.ndarray:
    """Orthonormal basis (columns) of ``mu ∩ lam``."""
    _check_same(mu, lam)
    coeffs = null_space(np.hstack([mu.frame, -lam.frame]))
    if coeffs.shape[1] == 0:
        return np.zeros((mu.space.dim, 0))
    return orthonormalize(mu.frame @ coeffs[: mu.n])


def intersection_dim(mu: Lagrangian, lam: Lagrangian) -> int:
    """dim(mu ∩ lam), the rank deficit of the stacked frames."""
    _check_same(mu, lam)
    s = np.linalg.svd(np.hstack([mu.frame, lam.frame]), compute_uv=False)
    return int(np.sum(s <= defaults.tol().kernel * s.max()))


def graph_lagrangian(mu: Lagrangian, phi) -> Lagrangian:
    """The graph ``{x + phi(x)}`` of ``phi : mu -> J(mu)``.

    ``phi`` is the n x n matrix of the map in the frames ``F`` of ``mu`` and
    ``J F`` of its complement.  The induced form ``omega(x, phi y)`` equals
    ``phi`` itself in these frames, so the graph is Lagrangian iff ``phi``
    is symmetric.
    """
    phi = np.atleast_2d(np.asarray(phi, dtype=float))
    if phi.shape != (mu.n, mu.n):
        raise SymplecticError("phi must be n x n")
    if np.abs(phi - phi.T).max() > defaults.tol().frame * max(1.0, np.abs(phi).max()):
        raise SymplecticError("induced form omega(x, phi y) is not symmetric")
    F = mu.frame
    return Lagrangian.span(mu.space, F + mu.space.J @ F @ phi)


def graph_operator(center: Lagrangian, mu: Lagrangian) -> np.ndarray:
    """Matrix of ``phi`` with ``mu = graph(phi : center -> J center)``.

    Raises if ``mu`` is not transversal to ``J(center)``.
    """
    _check_same(center, mu)
    F = center.frame
    P = F.T @ mu.frame
    Q = (center.space.J @ F).T @ mu.frame
    if np.linalg.svd(P, compute_uv=False).min() < 1e-6:
        raise SymplecticError("subspace is not transversal to the complement chart")
    return Q @ np.linalg.inv(P)


# --- complex coordinates -------------------------------------------------

def to_complex(lam: Lagrangian, v) -> np.ndarray:
    """Complex coordinates of real vectors in the identification ``H_J = lam (x) C``."""
    F = lam.frame
    JF = lam.space.J @ F
    v = np.asarray(v)
    return F.T @ v + 1j * (JF.T @ v)


def from_complex(lam: Lagrangian, z) -> np.ndarray:
    F = lam.frame
    JF = lam.space.J @ F
    z = np.asarray(z)
    return F @ z.real + JF @ z.imag


def complex_matrix(lam: Lagrangian, T) -> np.ndarray:
    """Complex n x n matrix of a real operator commuting with J."""
    return to_complex(lam, np.asarray(T) @ lam.frame)


def real_matrix(lam: Lagrangian, U) -> np.ndarray:
    """Real 2n x 2n operator of a complex matrix in lam-coordinates."""
    F = lam.frame
    JF = lam.space.J @ F
    Bm = np.hstack([F, JF])
    X, Y = np.real(U), np.imag(U)
    return Bm @ np.block([[X, -Y], [Y, X]]) @ Bm.T


def is_unitary(U, tol: float | None = None) -> bool:
    U = np.asarray(U)
    tol = defaults.tol().frame if tol is None else tol
    return (U.ndim == 2 and U.shape[0] == U.shape[1]
            and np.abs(U.conj().T @ U - np.eye(U.shape[0])).max() <= tol)


def polar_unitary(U) -> np.ndarray:
    """Nearest unitary matrix (unitary factor of the polar decomposition)."""
    w, _, vh = np.linalg.svd(np.asarray(U, dtype=complex))
    return w @ vh


def lagrangian_from_unitary(lam: Lagrangian, U) -> Lagrangian:
    """``rho(U) = U(lam^perp)``, with ``U`` in lam-coordinates."""
    U = np.atleast_2d(np.asarray(U, dtype=complex))
    if U.shape != (lam.n, lam.n) or not is_unitary(U):
        raise SymplecticError("U must be an n x n unitary matrix")
    # lam^perp has coordinates i*b, b real
    return Lagrangian(lam.space, from_complex(lam, 1j * U))


def unitary_of_lagrangian(lam: Lagrangian, mu: Lagrangian) -> np.ndarray:
    """A unitary ``U`` with ``U(lam^perp) = mu``.

    Column j of ``U`` is ``-i`` times the coordinates of the j-th frame vector
    of ``mu``; a polar correction removes rounding from unitarity.
    """
    _check_same(lam, mu)
    return polar_unitary(-1j * to_complex(lam, mu.frame))


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_lagrangian(space: SymplecticSpace, rng: np.random.Generator) -> Lagrangian:
    """Haar-random Lagrangian (image of a Haar unitary under rho)."""
    return lagrangian_from_unitary(space.standard, random_unitary(space.n, rng))


def random_lagrangian_meeting(lam: Lagrangian, k: int,
                              rng: np.random.Generator) -> Lagrangian:
    """Random Lagrangian meeting ``lam`` in exactly ``k`` dimensions.

    Built as ``rho(O D)`` with ``O`` real orthogonal and ``D`` diagonal with
    k phases equal to pi/2 and the rest uniform away from pi/2.
    """
    n = lam.n
    phases = rng.uniform(-np.pi / 2 + 0.2, np.pi / 2 - 0.2, size=n)
    phases[:k] = np.pi / 2
    O = sla.qr(rng.standard_normal((n, n)))[0]
    return lagrangian_from_unitary(lam, O @ np.diag(np.exp(1j * phases)))
