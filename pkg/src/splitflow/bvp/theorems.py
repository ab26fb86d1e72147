"""Numerical instances of the spectral-flow formulas for a model problem.

Every left-hand side is a tracked spectral flow (Evans spectra along the
family); every right-hand side is either another tracked spectral flow or a
Maslov index of Cauchy data paths (Souriau eigenphases), so the two sides
of each identity come from different computations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from ..maslov import crossing_form_graph, maslov_index
from ..symplectic import intersection_basis
from .boundary import split_boundary_conditions
from .flow import (cauchy_path, diagonal_times, maslov_side, minus_only,
                   plus_after, track)
from .galerkin import galerkin_spectral_flow
from .problem import ModelProblem

BITS = {"local": 1, "general": 2, "pre_split": 4, "main": 8}


@dataclass
class TheoremCheck:
    name: str
    lhs: int | None
    rhs: list
    provenance: dict
    passed: bool
    note: str = ""
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {"lhs": self.lhs, "rhs": self.rhs, "provenance": self.provenance,
               "status": "pass" if self.passed else "fail"}
        if self.note:
            out["note"] = self.note
        out.update(self.extra)
        return out


@dataclass
class VerificationReport:
    problem: str
    checks: dict

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    @property
    def failure_bits(self) -> int:
        return sum(BITS[k] for k, c in self.checks.items() if not c.passed)

    def as_dict(self) -> dict:
        return {"problem": self.problem,
                "theorems": {k: c.as_dict() for k, c in self.checks.items()},
                "all_pass": self.passed}


# --- local formula -------------------------------------------------------

def _refine_crossing(problem, a, b, tol=1e-10):
    """Locate the crossing in [a, b] by bisecting the Maslov count on [a, m]."""
    delta = problem.delta

    def jump(m):
        return maslov_index(cauchy_path(problem, delta, (a, m)), delta)

    if jump(b) == 0:
        return None
    lo, hi = a, b
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if jump(mid) != 0:
            hi = mid
        else:
            lo = mid
    return hi


def kernel_solution_form(problem: ModelProblem, t_star: float, traces: np.ndarray,
                         nodes: int = 20) -> np.ndarray:
    """``Q_0(x, y) = int x^T (dC/dt) y`` for kernel solutions with given traces.

    ``traces`` holds full boundary vectors ``(u(0), u(ell), u(L), u(ell))`` as
    columns; each solution is integrated from its value at ``tau = 0``.
    """
    m = problem.m
    s = problem.sigma
    xg, wg = np.polynomial.legendre.leggauss(nodes)
    u = traces[:m].copy()
    Q = np.zeros((traces.shape[1], traces.shape[1]))
    for p in problem.minus + problem.plus:
        G = -problem.B + s @ p.at(t_star)
        dC = p.c1 - p.c0
        if np.any(dC):
            taus = 0.5 * p.length * (xg + 1)
            for tau, w in zip(taus, wg):
                x = sla.expm(G * tau) @ u
                Q += 0.5 * p.length * w * (x.T @ dC @ x)
        u = sla.expm(G * p.length) @ u
    return (Q + Q.T) / 2


def local_formula(problem: ModelProblem, flow=None, max_delta: float = 0.05) -> TheoremCheck:
    """Windowed spectral flow, windowed Maslov index and crossing-form sign at one crossing."""
    delta_l = problem.delta
    flow = track(problem, delta_l) if flow is None else flow
    segs = flow.crossing_segments()
    for a, b in segs:
        t_star = _refine_crossing(problem, a, b)
        if t_star is None:
            continue
        path = cauchy_path(problem, delta_l)
        form_m = crossing_form_graph(path, delta_l, t_star)
        if form_m.dim == 0 or not form_m.regular:
            continue
        basis = intersection_basis(path(t_star), delta_l)
        q0 = kernel_solution_form(problem, t_star, basis)
        others = [x for seg in segs for x in seg if (x < a or x > b)]
        gap = min([abs(x - t_star) for x in others], default=1.0)
        dlt = min(max_delta, gap / 2)
        lo, hi = max(0.0, t_star - dlt), min(1.0, t_star + dlt)
        sf = track(problem, delta_l, (lo, hi)).value
        mas = maslov_side(problem, delta_l, (lo, hi))
        if t_star >= 1.0 - 1e-9:
            local = form_m.p
        elif t_star <= 1e-9:
            local = -form_m.q
        else:
            local = form_m.sign
        sig0 = np.linalg.eigvalsh(q0)
        scale = max(1.0, np.abs(sig0).max())
        sign0 = int(np.sum(sig0 > 1e-6 * scale) - np.sum(sig0 < -1e-6 * scale))
        diff = float(np.abs(q0 - form_m.matrix).max())
        ok = (sf == mas == local) and sign0 == form_m.sign
        return TheoremCheck(
            "local", sf, [mas, local],
            {"lhs": "tracked spectral flow on the window",
             "rhs": ["Maslov index of circle Cauchy data on the window",
                     "signature of the graph crossing form"]},
            ok, extra={"t_star": t_star, "window": [lo, hi],
                       "signature": list(form_m.signature),
                       "kernel_form_signature": sign0,
                       "kernel_form_difference": diff})
    return TheoremCheck("local", None, [], {"lhs": "none", "rhs": []}, True,
                        note="no regular crossing")


# --- the global identities ----------------------------------------------

def verify_theorems(problem: ModelProblem, config: dict | None = None) -> VerificationReport:
    """Check the local, general, pre-splitting and splitting formulas.

    ``config`` keys: ``local`` (bool, default True), ``oracle`` (bool,
    default True: compare the circle spectral flow with the Galerkin oracle).
    """
    config = dict(config or {})
    delta = problem.delta
    split = split_boundary_conditions(problem)

    circle = track(problem, delta)
    sf_circle = circle.value
    sf_minus = track(problem, split.ell0).value
    sf_plus = track(problem, split.ell1).value
    sf_s0 = track(problem, delta, times=minus_only).value
    sf_1t = track(problem, delta, times=plus_after).value

    mas_circle = maslov_side(problem, delta)
    mas_minus = maslov_side(problem, split.ell0)
    mas_plus = maslov_side(problem, split.ell1)

    checks = {}
    if config.get("local", True):
        checks["local"] = local_formula(problem, circle)
    checks["general"] = TheoremCheck(
        "general", sf_circle, [mas_circle],
        {"lhs": "tracked spectral flow (circle, and each half below)",
         "rhs": ["Maslov index of Cauchy data against the domain"]},
        sf_circle == mas_circle and sf_minus == mas_minus and sf_plus == mas_plus,
        extra={"halves": {"minus": {"sf": sf_minus, "maslov": mas_minus},
                          "plus": {"sf": sf_plus, "maslov": mas_plus}}})
    checks["pre_split"] = TheoremCheck(
        "pre_split", sf_circle, [sf_s0, sf_1t],
        {"lhs": "tracked spectral flow (circle)",
         "rhs": ["tracked spectral flow of s -> A(s, 0)",
                 "tracked spectral flow of t -> A(1, t)"]},
        sf_circle == sf_s0 + sf_1t)
    main_ok = sf_circle == sf_minus + sf_plus
    extra = {}
    if split.warning:
        extra["warning"] = split.warning
    if config.get("oracle", True):
        g = galerkin_spectral_flow(problem)
        extra["galerkin"] = g
        main_ok = main_ok and g == sf_circle
    checks["main"] = TheoremCheck(
        "main", sf_circle, [sf_minus, sf_plus],
        {"lhs": "tracked spectral flow (circle)",
         "rhs": ["tracked spectral flow on M- with the split condition",
                 "tracked spectral flow on M+ with the split condition"]},
        main_ok, extra=extra)
    return VerificationReport(problem.name, checks)


__all__ = ["verify_theorems", "local_formula", "kernel_solution_form",
           "VerificationReport", "TheoremCheck", "BITS", "diagonal_times"]
