"""Spectral flow by eigenvalue tracking, and the matching Maslov indices.

Tracking: at the start of each step the spectrum in ``[-w, w]`` is computed
and a level ``eps`` in ``(0, w/2]`` is chosen as far as possible from it;
``d`` is its distance to the spectrum (at least ``w - eps`` for eigenvalues
outside the window).  The step is then limited so that the perturbation
changes by less than ``d/2`` in operator norm, so no eigenvalue reaches
``eps`` within the step.  The count uses the half-open window ``[0, eps)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .. import defaults
from ..maslov import LagrangianPath, _choose_level, maslov_index
from ..symplectic import Lagrangian
from .problem import ModelProblem
from .spectrum import Realization, spectrum

Times = Callable[[float], tuple[float, float]]


def diagonal_times(t: float) -> tuple[float, float]:
    return (t, t)


def minus_only(t: float) -> tuple[float, float]:
    """``s -> (s, 0)``: the family ``A_{s,0}``."""
    return (t, 0.0)


def plus_after(t: float) -> tuple[float, float]:
    """``t -> (1, t)``: the family ``A_{1,t}``."""
    return (1.0, t)


@dataclass(frozen=True)
class TrackStep:
    t: float
    eps: float
    margin: float
    count: int
    eigenvalues: np.ndarray


@dataclass(frozen=True)
class FlowResult:
    value: int
    steps: tuple[TrackStep, ...]

    def crossing_segments(self):
        """Pairs (t_a, t_b) of steps over which the count changed."""
        out = []
        for a, b in zip(self.steps, self.steps[1:]):
            if self._count(b, a.eps) != a.count:
                out.append((a.t, b.t))
        return out

    @staticmethod
    def _count(step, eps):
        ztol = defaults.tol().zero
        ev = step.eigenvalues
        return int(np.sum((ev >= -ztol) & (ev < eps)))

    def trace_rows(self):
        return [(s.t, *np.sort(s.eigenvalues)) for s in self.steps]


def _variation(problem: ModelProblem, kind: str, times: Times, a: float, b: float) -> float:
    """sup over tau of ||C(b) - C(a)||; ``times`` is assumed monotone per arc."""
    (ma, pa), (mb, pb) = times(a), times(b)
    v = 0.0
    if kind in ("-", "circle"):
        v = max(v, problem.rate("-") * abs(mb - ma))
    if kind in ("+", "circle"):
        v = max(v, problem.rate("+") * abs(pb - pa))
    return v


def track(problem: ModelProblem, domain: Lagrangian, t_range=(0.0, 1.0),
          times: Times | None = None, window: float | None = None,
          grid: int | None = None) -> FlowResult:
    """Spectral flow of ``t -> A_domain + C_times(t)`` over ``t_range`` with its steps."""
    times = diagonal_times if times is None else times
    g = defaults.grid()
    w = g.tracking_window if window is None else float(window)
    npts = g.tracking_grid if grid is None else grid
    kind = Realization(problem, domain).kind
    t0, t1 = map(float, t_range)
    direction = 1.0 if t1 >= t0 else -1.0
    ztol = defaults.tol().zero
    budget = g.budget

    def spec(t):
        rep = spectrum(problem, domain, times(t), window=(-w, w), grid=npts)
        return rep.expanded

    def level(ev):
        eps = _choose_level(ev, w / 2)
        d = min(np.abs(ev - eps).min(initial=np.inf), w - eps)
        return eps, d

    def count(ev, eps):
        return int(np.sum((ev >= -ztol) & (ev < eps)))

    steps = []
    total = 0
    t, ev = t0, spec(t0)
    max_h = abs(t1 - t0) / g.tracking_steps if t1 != t0 else 0.0
    calls = 1
    while direction * (t1 - t) > 0:
        eps, d = level(ev)
        k_a = count(ev, eps)
        steps.append(TrackStep(t, eps, d, k_a, ev))
        # largest admissible step by the perturbation bound
        h = max_h
        while _variation(problem, kind, times, t, t + direction * h) >= d / 2:
            h /= 2
            if h < 1e-13:
                raise RuntimeError(f"tracking step underflow at t={t:.6g}")
        tb = t + direction * h
        if direction * (tb - t1) > 0 or abs(tb - t1) < 1e-14:
            tb = t1
        evb = spec(tb)
        calls += 1
        if calls > budget:
            raise RuntimeError("tracking budget exhausted")
        total += count(evb, eps) - k_a
        t, ev = tb, evb
    eps, d = level(ev)
    steps.append(TrackStep(t, eps, d, count(ev, eps), ev))
    return FlowResult(int(total), tuple(steps))


def spectral_flow_bvp(problem: ModelProblem, domain: Lagrangian,
                      t_range=(0.0, 1.0), times: Times | None = None, **kw) -> int:
    """Spectral flow of the realization with fixed boundary condition ``domain``.

    ``domain`` in the full boundary space gives the closed circle (use
    ``problem.delta``); a Lagrangian of ``beta_-`` or ``beta_+`` gives the
    corresponding arc.  ``times`` maps the family parameter to the pair
    ``(t_minus, t_plus)``; the default is ``t -> (t, t)``.
    """
    return track(problem, domain, t_range, times, **kw).value


def cauchy_path(problem: ModelProblem, domain: Lagrangian, t_range=(0.0, 1.0),
                times: Times | None = None) -> LagrangianPath:
    """The Cauchy data path (at spectral parameter 0) in the domain's space."""
    times = diagonal_times if times is None else times
    real = Realization(problem, domain)
    t0, t1 = map(float, t_range)
    return LagrangianPath(lambda s: real.lagrangian(times(t0 + (t1 - t0) * s)))


def maslov_side(problem: ModelProblem, domain: Lagrangian, t_range=(0.0, 1.0),
                times: Times | None = None) -> int:
    """Maslov index of the Cauchy data path relative to ``domain``."""
    return maslov_index(cauchy_path(problem, domain, t_range, times), domain)
