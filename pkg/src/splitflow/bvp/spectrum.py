"""Eigenvalues of boundary value problems from an Evans determinant.

``lam`` is an eigenvalue of the realization with boundary condition ``ell``
iff the Cauchy data space at spectral parameter ``lam`` meets ``ell``.  With
continuous orthonormal frames ``F(lam)`` of the Cauchy data and ``F_ell``
of ``ell``, the determinant ``D(lam) = det[F(lam) | F_ell]`` vanishes
exactly there.

The determinant is scanned on a grid; sign changes are refined by batched
multisection, and so are sign changes of ``D'`` next to local minima of
``|D|`` (roots of even order).  Every
report is certified: the Cauchy data path ``lam -> Lambda(lam)`` turns
monotonically, so the number of eigenvalues in the window equals the
absolute Maslov index of that path relative to ``ell``, which is computed
from Souriau eigenphases on the same grid.  On a mismatch the grid is
refined.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import defaults
from ..maslov import RefinementError, _choose_level
from ..symplectic import Lagrangian, intersection_dim
from .boundary import _times, side_frames
from .problem import ModelProblem


class SpectrumError(RuntimeError):
    """Root isolation or certification failed."""


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalues in ``window`` with multiplicities and the determinant trace."""

    eigenvalues: np.ndarray
    multiplicities: np.ndarray
    window: tuple[float, float]
    grid: np.ndarray = field(repr=False)
    det: np.ndarray = field(repr=False)
    margin: float
    root_orders: np.ndarray = field(repr=False)
    refinements: int = 0

    @property
    def expanded(self) -> np.ndarray:
        """Eigenvalues repeated by multiplicity."""
        return np.repeat(self.eigenvalues, self.multiplicities)

    @property
    def count(self) -> int:
        return int(self.multiplicities.sum())


class Realization:
    """The operator on a circle or an arc with a fixed boundary Lagrangian.

    ``domain`` determines the setting: a Lagrangian of the full boundary
    space gives the closed problem (with ``delta`` the circle itself), one of
    ``beta_-`` or ``beta_+`` gives the corresponding arc.
    """

    def __init__(self, problem: ModelProblem, domain: Lagrangian):
        self.problem = problem
        self.domain = domain
        self.kind = problem.side_of(domain.space)
        sp = domain.space
        F = domain.frame
        self._F = F
        self._JF = sp.J @ F

    def frames(self, times, lams) -> np.ndarray:
        """Batched orthonormal frames of the Cauchy data spaces."""
        tm, tp = _times(times)
        pr = self.problem
        if self.kind == "-":
            return side_frames(pr, "-", tm, lams)
        if self.kind == "+":
            return side_frames(pr, "+", tp, lams)
        Fm = side_frames(pr, "-", tm, lams)
        Fp = side_frames(pr, "+", tp, lams)
        N, d, n = Fm.shape
        out = np.zeros((N, 2 * d, 2 * n))
        out[:, :d, :n] = Fm
        out[:, d:, n:] = Fp
        return out

    def lagrangian(self, times, lam: float = 0.0) -> Lagrangian:
        return Lagrangian(self.domain.space, self.frames(times, [lam])[0])

    def det(self, frames) -> np.ndarray:
        N = frames.shape[0]
        F = np.broadcast_to(self._F, (N,) + self._F.shape)
        return np.linalg.det(np.concatenate([frames, F], axis=2))

    def souriau(self, frames) -> np.ndarray:
        """Batched Souriau matrices of the frames relative to the domain."""
        Z = np.swapaxes(self._F, 0, 1) @ frames + 1j * (np.swapaxes(self._JF, 0, 1) @ frames)
        U = -1j * Z
        return U @ np.swapaxes(U, -1, -2)

    def kernel_dim(self, times, lam: float) -> int:
        return intersection_dim(self.lagrangian(times, lam), self.domain)


def _theta(W):
    """Eigenphases measured from pi, batched: angle(-eig)."""
    return np.angle(-np.linalg.eigvals(W))


def _phase_count(real: Realization, times, lams, Ws) -> int:
    """Net passages of Souriau eigenvalues through -1 along the lam grid."""
    ztol = defaults.tol().phase
    budget = defaults.grid().budget
    calls = [0]

    def evaluate(lam):
        calls[0] += 1
        if calls[0] > budget:
            raise RefinementError("phase count exhausted its budget")
        return real.souriau(real.frames(times, [lam]))[0]

    def count(W, eps):
        th = _theta(W)
        return int(np.sum((th >= -ztol) & (th <= eps)))

    def sweep(a, Wa, b, Wb, depth=0):
        # count over [a, b], bisecting until one segment suffices
        th = _theta(Wa)
        eps = _choose_level(th, np.pi / 2)
        d = float(np.abs(np.linalg.eigvals(Wa) - np.exp(1j * (np.pi + eps))).min())
        if np.linalg.norm(Wb - Wa, 2) < d / 2:
            c = (a + b) / 2
            Wc = evaluate(c)
            if np.linalg.norm(Wc - Wa, 2) < d / 2:
                return count(Wb, eps) - count(Wa, eps)
        if depth > 60:
            raise RefinementError("phase count step underflow")
        c = (a + b) / 2
        Wc = evaluate(c)
        return sweep(a, Wa, c, Wc, depth + 1) + sweep(c, Wc, b, Wb, depth + 1)

    total = 0
    i, N = 0, len(lams)
    evs = np.linalg.eigvals(Ws)
    ths = np.angle(-evs)

    def count_at(j, eps):
        return int(np.sum((ths[j] >= -ztol) & (ths[j] <= eps)))

    while i < N - 1:
        Wi = Ws[i]
        eps = _choose_level(ths[i], np.pi / 2)
        d = float(np.abs(evs[i] - np.exp(1j * (np.pi + eps))).min())
        j = i
        while j + 1 < N:
            stop = min(N, j + 65)
            # Frobenius norms bound the operator norms from above
            ok = np.linalg.norm(Ws[j + 1:stop] - Wi, axis=(1, 2)) < d / 2
            bad = np.nonzero(~ok)[0]
            if bad.size:
                j += int(bad[0])
                break
            j = stop - 1
        if j == i:
            total += sweep(lams[i], Wi, lams[i + 1], Ws[i + 1])
            i += 1
        else:
            total += count_at(j, eps) - count_at(i, eps)
            i = j
    return total


def _multisection(f_batch, brackets, tol, k=32):
    """Shrink sign-change brackets of ``f`` together, k+1 samples per bracket per round."""
    br = [tuple(b) for b in brackets]
    while True:
        live = [i for i, (a, b) in enumerate(br) if b - a > tol]
        if not live:
            break
        xs = np.concatenate([np.linspace(*br[i], k + 1) for i in live])
        vals = f_batch(xs).reshape(len(live), k + 1)
        for row, i in zip(vals, live):
            x = np.linspace(*br[i], k + 1)
            sg = np.sign(row)
            change = np.nonzero(sg[:-1] * sg[1:] <= 0)[0]
            if not change.size:
                # rounding hid the sign change: keep the smallest sample
                c = x[int(np.argmin(np.abs(row)))]
                br[i] = (c, c)
                continue
            j = change[0]
            if sg[j] == 0:
                br[i] = (x[j], x[j])
            elif sg[j + 1] == 0:
                br[i] = (x[j + 1], x[j + 1])
            else:
                br[i] = (x[j], x[j + 1])
    return [0.5 * (a + b) for a, b in br]


def _edge_clear(real, times, x, scale):
    """Distance-like quantity of Souriau eigenvalues at x from -1."""
    W = real.souriau(real.frames(times, [x]))[0]
    return float(np.abs(np.linalg.eigvals(W) + 1).min())


def spectrum(problem: ModelProblem, domain: Lagrangian, t=0.0,
             window=(-1.0, 1.0), grid: int | None = None,
             certify: bool = True) -> SpectrumReport:
    """Eigenvalues in ``window`` of the realization with boundary condition ``domain``.

    Parameters
    ----------
    problem : ModelProblem
    domain : Lagrangian
        In the full boundary space (closed problem, usually ``delta``) or in
        one of the side spaces.
    t : float or (float, float)
        Family parameter, or separate parameters for the two arcs.
    window : (float, float)
    grid : int, optional
        Number of scan points (default from :mod:`splitflow.defaults`).
    certify : bool
        Check the eigenvalue count against the Souriau phase count.
    """
    g = defaults.grid()
    npts = g.spectrum_grid if grid is None else int(grid)
    lo, hi = map(float, window)
    if not hi > lo:
        raise ValueError("window must be an increasing pair")
    real = Realization(problem, domain)
    width = hi - lo
    # edges must not be eigenvalues: move them outward slightly
    for _ in range(50):
        shifted = False
        if _edge_clear(real, t, lo, width) < 1e-7:
            lo -= 1e-3 * width
            shifted = True
        if _edge_clear(real, t, hi, width) < 1e-7:
            hi += 1e-3 * width
            shifted = True
        if not shifted:
            break
    refinements = 0
    while True:
        rep = _scan(real, t, lo, hi, npts, g.root_bracket, certify)
        if rep is not None:
            return SpectrumReport(*rep, refinements=refinements)
        refinements += 1
        if refinements > 3:
            raise SpectrumError(
                f"eigenvalue count not certified on [{lo:.6g}, {hi:.6g}] after refinement")
        npts = 4 * (npts - 1) + 1


def _scan(real: Realization, times, lo, hi, npts, bracket, certify):
    lams = np.linspace(lo, hi, npts)
    frames = real.frames(times, lams)
    D = real.det(frames)

    def det_batch(xs):
        return real.det(real.frames(times, xs))

    h = (hi - lo) / (npts - 1)
    roots: list[float] = []
    s = np.sign(D)
    sign_br = []
    for i in range(npts - 1):
        if s[i] == 0:
            roots.append(float(lams[i]))
        elif s[i] * s[i + 1] < 0:
            sign_br.append((lams[i], lams[i + 1]))
    if s[-1] == 0:
        roots.append(float(lams[-1]))
    roots += _multisection(det_batch, sign_br, bracket)
    aD = np.abs(D)
    fd = 1e-6 * max(1.0, hi - lo)

    def dprime_batch(xs):
        v = det_batch(np.concatenate([xs + fd, xs - fd]))
        return (v[: xs.size] - v[xs.size:]) / (2 * fd)

    min_br = []
    for i in range(1, npts - 1):
        if not (aD[i] <= aD[i - 1] and aD[i] <= aD[i + 1]):
            continue
        if s[i - 1] != s[i] or s[i] != s[i + 1] or s[i] == 0:
            continue
        min_br.append(((lams[i - 1], lams[i + 1]), D[i]))
    if min_br:
        ends = dprime_batch(np.array([x for b, _ in min_br for x in b])).reshape(-1, 2)
        min_br = [b for b, e in zip(min_br, ends) if np.sign(e[0]) != np.sign(e[1])]
        mins = _multisection(dprime_batch, [b for b, _ in min_br], bracket)
        split = []
        for (br, fa), r in zip(min_br, mins):
            if np.sign(det_batch(np.array([r]))[0]) not in (0, np.sign(fa)):
                # two close simple roots around the minimum
                split += [(br[0], r), (r, br[1])]
            elif real.kernel_dim(times, r) > 0:
                roots.append(float(r))
        roots += _multisection(det_batch, split, bracket)
    roots = sorted(roots)
    merged: list[float] = []
    for r in roots:
        if merged and r - merged[-1] < 1e-9:
            continue
        merged.append(r)
    ev = np.array(merged)
    mult = np.array([real.kernel_dim(times, r) for r in ev], dtype=int)
    keep = mult > 0
    ev, mult = ev[keep], mult[keep]
    orders = _root_orders(det_batch, ev, h)
    if ev.size:
        away = np.ones(npts, bool)
        for r in ev:
            away &= np.abs(lams - r) > 2 * h
        margin = float(aD[away].min()) if away.any() else 0.0
    else:
        margin = float(aD.min())
    if certify:
        Ws = real.souriau(frames)
        total = abs(_phase_count(real, times, lams, Ws))
        if total != int(mult.sum()):
            return None
    return ev, mult, (lo, hi), lams, D, margin, orders


def _root_orders(det_batch, roots, h):
    """Order of vanishing of D at each root from the scaling of |D|."""
    if not len(roots):
        return np.zeros(0)
    e = min(h / 4, 1e-3)
    offs = np.array([e, -e, e / 2, -e / 2])
    v = np.abs(det_batch((np.asarray(roots)[:, None] + offs[None]).ravel())).reshape(-1, 4)
    a1, a2 = v[:, 0] + v[:, 1], v[:, 2] + v[:, 3]
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log2(a1 / a2)
