"""First-order systems ``sigma (d/dtau + B) + C_t(tau)`` on a split circle.

The circle of length ``L`` is cut at ``tau = 0`` and ``tau = ell`` into the
arcs ``M_- = [0, ell]`` and ``M_+ = [ell, L]``.  On each arc the
perturbation is piecewise constant in ``tau``; on a piece it depends
affinely on the family parameter, ``C(t) = c0 + t (c1 - c0)``.

An eigenfunction of ``A + C - lam`` solves

    u' = (-B + sigma (C - lam)) u,

so transfer matrices over a piece are matrix exponentials of that generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np
import scipy.linalg as sla

from ..pairs import DoubleSpace, diagonal
from ..symplectic import SymplecticSpace


class ProblemError(ValueError):
    """Invalid model-problem data; the message names the violated condition."""


ALGEBRA_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Piece:
    """A stretch of arc of given length carrying ``C(t) = c0 + t (c1 - c0)``."""

    length: float
    c0: np.ndarray
    c1: np.ndarray

    def at(self, t: float) -> np.ndarray:
        return self.c0 + t * (self.c1 - self.c0)

    @property
    def rate(self) -> float:
        """Operator norm of dC/dt."""
        return float(np.linalg.norm(self.c1 - self.c0, 2))

    @property
    def is_zero(self) -> bool:
        return not (np.any(self.c0) or np.any(self.c1))


def _zero_piece(length, m):
    z = np.zeros((m, m))
    return Piece(float(length), z, z)


@dataclass(frozen=True, eq=False)
class ModelProblem:
    """Coefficients of the operator and of its perturbation family.

    Parameters
    ----------
    sigma, B : (m, m) arrays
        ``sigma`` skew and orthogonal, ``B`` symmetric, ``sigma B = -B sigma``.
    minus, plus : sequences of Piece
        The perturbation on ``[0, ell]`` and on ``[ell, L]``, in order.
    product_form : bool
        Declares that ``C`` vanishes within ``collar`` of both split points.
    collar : float
    """

    sigma: np.ndarray
    B: np.ndarray
    minus: tuple[Piece, ...]
    plus: tuple[Piece, ...]
    product_form: bool = True
    collar: float = 0.0
    name: str = field(default="problem", compare=False)

    def __post_init__(self):
        sigma = np.atleast_2d(np.asarray(self.sigma, dtype=float))
        B = np.atleast_2d(np.asarray(self.B, dtype=float))
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "minus", tuple(self.minus))
        object.__setattr__(self, "plus", tuple(self.plus))
        self.validate()

    # -- validation -------------------------------------------------------

    def validate(self):
        s, B = self.sigma, self.B
        m = s.shape[0]
        if s.shape != (m, m) or m % 2:
            raise ProblemError("sigma must be square of even size")
        if B.shape != (m, m):
            raise ProblemError("B must have the same shape as sigma")
        if np.abs(s + s.T).max() > ALGEBRA_TOL:
            raise ProblemError("sigma must be skew-symmetric (sigma^T = -sigma)")
        if np.abs(s.T @ s - np.eye(m)).max() > ALGEBRA_TOL:
            raise ProblemError("sigma must be orthogonal (sigma^T sigma = 1)")
        if np.abs(B - B.T).max() > ALGEBRA_TOL:
            raise ProblemError("B must be symmetric")
        if np.abs(s @ B + B @ s).max() > ALGEBRA_TOL * max(1.0, np.abs(B).max()):
            raise ProblemError("product-form algebra violated: sigma B != -B sigma")
        for side, pieces in (("minus", self.minus), ("plus", self.plus)):
            if not pieces:
                raise ProblemError(f"{side} arc has no pieces")
            for p in pieces:
                if not p.length > 0:
                    raise ProblemError(f"{side} arc has a piece of non-positive length")
                for c in (p.c0, p.c1):
                    if c.shape != (m, m):
                        raise ProblemError(f"{side} arc: C has the wrong shape")
                    if np.abs(c - c.T).max() > ALGEBRA_TOL * max(1.0, np.abs(c).max()):
                        raise ProblemError(f"{side} arc: C must be symmetric")
        if self.product_form:
            if self.collar <= 0:
                raise ProblemError("product form needs a positive collar")
            for side, pieces in (("minus", self.minus), ("plus", self.plus)):
                for ends in (pieces, pieces[::-1]):
                    run = 0.0
                    for p in ends:
                        if run >= self.collar:
                            break
                        if not p.is_zero:
                            raise ProblemError(
                                f"product form violated: C is nonzero within the "
                                f"collar on the {side} arc")
                        run += p.length

    # -- geometry ---------------------------------------------------------

    @property
    def m(self) -> int:
        return self.sigma.shape[0]

    @property
    def ell(self) -> float:
        return float(sum(p.length for p in self.minus))

    @property
    def L(self) -> float:
        return self.ell + float(sum(p.length for p in self.plus))

    def arc(self, side: str) -> tuple[Piece, ...]:
        if side == "-":
            return self.minus
        if side == "+":
            return self.plus
        raise ValueError("side must be '-' or '+'")

    def rate(self, side: str) -> float:
        """sup over the arc of ||dC/dt||."""
        return max(p.rate for p in self.arc(side))

    def coefficient(self, tau: float, t: float) -> np.ndarray:
        """C_t(tau) for tau in [0, L)."""
        tau = float(tau) % self.L
        x = 0.0
        for p in self.minus + self.plus:
            if tau < x + p.length:
                return p.at(t)
            x += p.length
        return self.plus[-1].at(t)

    # -- boundary symplectic spaces --------------------------------------

    @cached_property
    def beta_minus(self) -> SymplecticSpace:
        """Traces ``(u(0), u(ell))`` with the Green form of ``M_-``."""
        s = self.sigma
        m = self.m
        J = sla.block_diag(-s, s)
        ref = np.vstack([np.eye(m), np.eye(m)]) / np.sqrt(2.0)
        return SymplecticSpace(J, ref, name="beta-")

    @cached_property
    def beta_plus(self) -> SymplecticSpace:
        """Traces ``(u(L), u(ell))`` with the Green form of ``M_+``."""
        s = self.sigma
        m = self.m
        J = sla.block_diag(s, -s)
        ref = np.vstack([np.eye(m), np.eye(m)]) / np.sqrt(2.0)
        return SymplecticSpace(J, ref, name="beta+")

    @cached_property
    def beta(self) -> DoubleSpace:
        """``beta_- ⊕ beta_+``; its form is that of the double of ``beta_-``."""
        return DoubleSpace(self.beta_minus)

    @cached_property
    def delta(self):
        """Transmission Lagrangian: matching traces from both sides."""
        return diagonal(self.beta)

    def side_of(self, space) -> str:
        """'-', '+' or 'circle' according to which boundary space ``space`` is."""
        if space.same_as(self.beta.space):
            return "circle"
        if space.same_as(self.beta_minus):
            return "-"
        if space.same_as(self.beta_plus):
            return "+"
        raise ProblemError("Lagrangian does not live in a boundary space of this problem")

    # -- derived problems -------------------------------------------------

    def reversed(self) -> "ModelProblem":
        """The family run backwards, ``C_t -> C_{1-t}``."""
        def rev(ps):
            return tuple(Piece(p.length, p.c1, p.c0) for p in ps)
        return replace(self, minus=rev(self.minus), plus=rev(self.plus),
                       name=self.name + "-reversed")


def bulk_shift(sigma=None, B=None, b: float = 0.3, shift: float = 3.0,
               L: float = 2 * np.pi, ell: float | None = None,
               name: str = "bulk_shift") -> ModelProblem:
    """``C_t = shift * t * chi`` with ``chi`` the middle third of each arc.

    Without ``sigma``/``B`` this is the m = 2 system with
    ``sigma = [[0, -1], [1, 0]]`` and ``B = b diag(1, -1)``.
    """
    sigma = np.array([[0.0, -1.0], [1.0, 0.0]]) if sigma is None else np.asarray(sigma, float)
    m = sigma.shape[0]
    B = b * np.diag([1.0, -1.0]) if B is None else np.asarray(B, float)
    ell = L / 2 if ell is None else float(ell)

    def arc(length):
        third = length / 3
        z = np.zeros((m, m))
        return (_zero_piece(third, m), Piece(third, z, shift * np.eye(m)),
                _zero_piece(third, m))

    collar = min(ell, L - ell) / 3
    return ModelProblem(sigma, B, arc(ell), arc(L - ell), product_form=True,
                        collar=collar, name=name)


def demo_problem() -> ModelProblem:
    """The default demonstration family (b = 0.3, shift 3, L = 2 pi, ell = pi)."""
    return bulk_shift(b=0.3, shift=3.0, name="demo")


def zero_family(sigma=None, B=None, b: float = 0.0, L: float = 2 * np.pi,
                ell: float | None = None) -> ModelProblem:
    """The constant family ``C_t = 0``."""
    return bulk_shift(sigma, B, b=b, shift=0.0, L=L, ell=ell, name="zero")


@dataclass(frozen=True)
class Coefficients:
    """The operator with ``C_s`` on ``M_-`` and ``C_t`` on ``M_+``."""

    problem: ModelProblem
    s: float
    t: float

    def on(self, side: str) -> list[np.ndarray]:
        tt = self.s if side == "-" else self.t
        return [p.at(tt) for p in self.problem.arc(side)]

    def difference(self, other: "Coefficients") -> float:
        """sup over tau of ||C - C'|| between two coefficient sets."""
        pr = self.problem
        d = 0.0
        for side, a, b in (("-", self.s, other.s), ("+", self.t, other.t)):
            d = max(d, pr.rate(side) * abs(a - b))
        return d


def two_parameter_family(problem: ModelProblem, s: float, t: float) -> Coefficients:
    """The operator equal to ``A + C_s`` on ``M_-`` and ``A + C_t`` on ``M_+``."""
    return Coefficients(problem, float(s), float(t))
