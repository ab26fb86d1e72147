"""Independent check of circle spectra by a truncated Fourier basis.

The basis is ``e_k(tau) = exp(2 pi i k tau / L) / sqrt(L) (x) C^m`` for
``|k| <= K``.  The unperturbed operator is block diagonal with blocks
``i (2 pi k / L) sigma + sigma B``; the perturbation contributes the Fourier
coefficients of the piecewise-constant ``C``, computed exactly.  For ``C``
constant in ``tau`` the truncation is exact on every retained mode.
"""

from __future__ import annotations

import numpy as np

from .. import defaults
from .boundary import _times
from .problem import ModelProblem


def galerkin_matrix(problem: ModelProblem, t, modes: int | None = None) -> np.ndarray:
    """Hermitian Galerkin matrix of ``A + C_t`` on the circle.

    ``modes`` is the (odd) number of retained Fourier modes.
    """
    modes = defaults.grid().galerkin_modes if modes is None else int(modes)
    K = modes // 2
    m, L = problem.m, problem.L
    ks = np.arange(-K, K + 1)
    N = ks.size
    s, B = problem.sigma, problem.B
    H = np.zeros((N, m, N, m), dtype=complex)
    omega = 2 * np.pi * ks / L
    for i, w in enumerate(omega):
        H[i, :, i, :] = 1j * w * s + s @ B
    tm, tp = _times(t)
    diff = omega[None, :] - omega[:, None]  # row j, column k: w_k - w_j
    x = 0.0
    for side in ("-", "+"):
        tt = tm if side == "-" else tp
        for p in problem.arc(side):
            a, b = x, x + p.length
            x = b
            c = p.at(tt)
            if not np.any(c):
                continue
            with np.errstate(divide="ignore", invalid="ignore"):
                f = (np.exp(1j * diff * b) - np.exp(1j * diff * a)) / (1j * diff * L)
            f[diff == 0] = (b - a) / L
            H += f[:, None, :, None] * c[None, :, None, :]
    H = H.reshape(N * m, N * m)
    return (H + H.conj().T) / 2


def galerkin_eigenvalues(problem: ModelProblem, t, window=None,
                         modes: int | None = None) -> np.ndarray:
    ev = np.linalg.eigvalsh(galerkin_matrix(problem, t, modes))
    if window is not None:
        lo, hi = window
        ev = ev[(ev >= lo) & (ev <= hi)]
    return ev


def zero_band(problem: ModelProblem, t, modes: int | None = None,
              fine: np.ndarray | None = None) -> float:
    """Half-width of the band around 0 that the truncation cannot resolve.

    The truncation error of eigenvalues near 0 is estimated from the change
    between ``modes`` and about half as many modes (the error decays like
    1/modes for piecewise-constant coefficients); the band is four times
    that estimate, and never below the zero tolerance.
    """
    modes = defaults.grid().galerkin_modes if modes is None else int(modes)
    if fine is None:
        fine = galerkin_eigenvalues(problem, t, modes=modes)
    coarse = galerkin_eigenvalues(problem, t, (-1.0, 1.0), (modes // 4) * 2 + 1)
    est = 0.0
    for x in fine[np.abs(fine) < 1e-2]:
        est = max(est, np.abs(coarse - x).min(initial=np.inf))
    return max(defaults.tol().zero, 4 * est)


def galerkin_spectral_flow(problem: ModelProblem, modes: int | None = None,
                           times=None) -> int:
    """Negative-eigenvalue count at the start minus that at the end.

    ``times`` maps the family parameter to (t_minus, t_plus); the default is
    the diagonal family.  Eigenvalues within :func:`zero_band` of 0 count as
    zero, which is not negative (the half-open counting convention).
    """
    times = (lambda t: (t, t)) if times is None else times
    out = []
    for t in (0.0, 1.0):
        ev = galerkin_eigenvalues(problem, times(t), modes=modes)
        band = zero_band(problem, times(t), modes, fine=ev)
        out.append(int(np.sum(ev < -band)))
    return out[0] - out[1]
