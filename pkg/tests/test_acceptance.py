"""Acceptance criteria, one test each, with their tolerances and time limits.

Each test prints a single ``[criterion k] PASS/FAIL`` line (pytest runs with
``-s``) and asserts both the numerical statement and the time limit.
"""

import time

import numpy as np

from splitflow.bvp import (bulk_shift, demo_problem, galerkin_eigenvalues,
                           galerkin_spectral_flow, maslov_side, minus_only,
                           plus_after, spectrum, split_boundary_conditions,
                           track)
from splitflow.maslov import (crossing_form_graph, crossing_form_unitary,
                              hormander_index, local_contribution,
                              local_index_at_regular_crossing, maslov_index)
from splitflow.pairs import maslov_pair
from splitflow.samples import (PhasePath, phase_index, random_operator_path,
                               random_phase_path)
from splitflow.souriau import complexify, phi_map, souriau_map, souriau_matrix
from splitflow.specflow import OperatorPath, riesz, spectral_flow
from splitflow.symplectic import (intersection_dim, random_lagrangian,
                                  random_lagrangian_meeting, standard_space)

TOL_RIESZ = 1e-12
TOL_INTEGER = 1e-8
TOL_ORACLE = 1e-6
TOL_DIAGRAM = 1e-9
GRID = [(b, shift) for b in (0.0, 0.3, 0.7) for shift in (1.0, 2.0, 3.0)]


def report(k, name, ok, elapsed, limit=None, detail=""):
    within = limit is None or elapsed < limit
    status = "PASS" if ok and within else "FAIL"
    budget = f" (limit {limit:.0f} s)" if limit is not None else ""
    print(f"\n[criterion {k:2d}] {status}  {name}: {detail}  {elapsed:.2f} s{budget}")
    assert ok, f"criterion {k} failed: {detail}"
    assert within, f"criterion {k} exceeded {limit} s ({elapsed:.2f} s)"


def phase_corpus(count):
    out = []
    for seed in range(count):
        rng = np.random.default_rng(1000 + seed)
        lam = random_lagrangian(standard_space(1 + seed % 4), rng)
        out.append(random_phase_path(lam, rng))
    return out


def operator_corpus(count):
    out = []
    for seed in range(count):
        rng = np.random.default_rng(2000 + seed)
        out.append((random_operator_path(1 + seed % 6, rng,
                                         "linear" if seed % 3 == 0 else "smooth"), rng))
    return out


def test_criterion_01_kernel_identity():
    start = time.perf_counter()
    bad = 0
    for seed in range(500):
        rng = np.random.default_rng(seed)
        n = 1 + seed % 5
        lam = random_lagrangian(standard_space(n), rng)
        mu = random_lagrangian_meeting(lam, rng.integers(0, n + 1), rng)
        bad += souriau_map(lam, mu).kernel_dim != intersection_dim(mu, lam)
    report(1, "kernel identity", bad == 0, time.perf_counter() - start, 5,
           f"500 pairs, {bad} mismatches")


def test_criterion_02_pair_reduction():
    start = time.perf_counter()
    bad = 0
    for p in phase_corpus(100):
        expect = phase_index(p.a, p.b)
        bad += not (maslov_index(p.path, p.lam) == maslov_pair(p.path, p.lam) == expect)
    report(2, "pair reduction", bad == 0, time.perf_counter() - start, 30,
           f"100 paths, {bad} mismatches")


def test_criterion_03_antisymmetry():
    start = time.perf_counter()
    corpus = phase_corpus(100)
    bad = 0
    for k, p in enumerate(corpus):
        bad += maslov_pair(p.lam, p.path) != -maslov_pair(p.path, p.lam)
        q = corpus[(k + 4) % len(corpus)]
        if q.lam.n == p.lam.n:
            bad += maslov_pair(q.path, p.path) != -maslov_pair(p.path, q.path)
    report(3, "antisymmetry", bad == 0, time.perf_counter() - start, 30,
           f"100 paths, {bad} mismatches")


def crossing_paths(count):
    """Phase paths with interior crossings, plus paths crossing at t = 0 or t = 1."""
    for seed in range(count):
        rng = np.random.default_rng(3000 + seed)
        n = 1 + seed % 4
        lam = random_lagrangian(standard_space(n), rng)
        p = random_phase_path(lam, rng)
        kind = seed % 3
        if kind:
            a, b = p.a.copy(), p.b.copy()
            b[0] = np.sign(b[0]) * max(abs(b[0]), 0.5)
            # 2 phi_0 = pi at t = 0 (kind 1) or t = 1 (kind 2)
            a[0] = np.pi / 2 if kind == 1 else np.pi / 2 - b[0]
            p = PhasePath(lam, p.K, a, b)
        yield p


def test_criterion_04_crossing_forms():
    start = time.perf_counter()
    bad, crossings, ends, paths = 0, 0, 0, 0
    for p in crossing_paths(60):
        ts = sorted({round(t, 12) for t, _ in p.crossings()})
        if not ts:
            continue
        paths += 1
        for t in ts:
            gap = min([abs(s - t) for s in ts if s != t], default=1.0)
            g = crossing_form_graph(p.path, p.lam, t)
            u = crossing_form_unitary(p.path.souriau(p.lam), t)
            local = local_index_at_regular_crossing(p.path, p.lam, t, min(0.05, gap / 2))
            ok = g.regular and u.regular and g.signature == u.signature
            ok = ok and local == local_contribution(g, t)
            bad += not ok
            crossings += 1
            ends += t in (0.0, 1.0)
    report(4, "crossing-form signatures", bad == 0 and paths >= 50,
           time.perf_counter() - start, 30,
           f"{paths} paths, {crossings} crossings ({ends} at endpoints), {bad} mismatches")


def scalar(f):
    return OperatorPath(lambda t: np.array([[f(t)]]))


def test_criterion_05_spectral_flow_conventions():
    start = time.perf_counter()
    ok = (spectral_flow(OperatorPath(lambda t: np.diag([1.0, -2.0]))) == 0
          and spectral_flow(scalar(lambda t: t - 0.5)) == 1
          and spectral_flow(scalar(lambda t: t)) == 0)
    bad = 0
    for p, rng in operator_corpus(100):
        d = p(0.0).shape[0]
        G = rng.standard_normal((d, d))
        B = (G + G.T) / 2
        A1 = p(1.0)
        q = OperatorPath(lambda t: (1 - t) * A1 + t * B)
        sf = spectral_flow(p)
        bad += spectral_flow(p.then(q)) != sf + spectral_flow(q)
        bad += spectral_flow(p.reparametrized(lambda t: t ** 3)) != sf
    report(5, "spectral-flow conventions", ok and bad == 0, time.perf_counter() - start,
           detail=f"definition examples {'ok' if ok else 'wrong'}, 100 paths, {bad} mismatches")


def test_criterion_06_riesz():
    start = time.perf_counter()
    R = riesz(np.diag([3.0, -4.0]))
    err = float(np.abs(R - np.diag([3 / np.sqrt(10), -4 / np.sqrt(17)])).max())
    bad = sum(spectral_flow(p.mapped(riesz)) != spectral_flow(p)
              for p, _ in operator_corpus(100))
    report(6, "Riesz equivariance", bad == 0 and err <= TOL_RIESZ,
           time.perf_counter() - start,
           detail=f"closed form error {err:.1e}, 100 paths, {bad} mismatches")


def test_criterion_07_circle_spectrum():
    start = time.perf_counter()
    p = bulk_shift(b=0.0, shift=0.0)
    rep = spectrum(p, p.delta, 0.0, window=(-3.5, 3.5))
    ints = np.arange(-3, 4)
    err = float(np.abs(rep.eigenvalues - ints).max()) if rep.eigenvalues.size == 7 else np.inf
    gal = np.sort(galerkin_eigenvalues(p, 0.0, (-3.5, 3.5), modes=401))
    ev = np.sort(rep.expanded)
    gap = float(np.abs(ev - gal).max()) if ev.size == gal.size else np.inf
    ok = err <= TOL_INTEGER and list(rep.multiplicities) == [2] * 7 and gap <= TOL_ORACLE
    report(7, "closed-circle spectrum", ok, time.perf_counter() - start, 10,
           f"integer error {err:.1e}, Evans vs Galerkin {gap:.1e}")


def test_criterion_08_general_formula():
    start = time.perf_counter()
    bad, rows = 0, []
    for b, shift in GRID:
        p = bulk_shift(b=b, shift=shift)
        split = split_boundary_conditions(p)
        for cond in (p.delta, split.ell0, split.ell1):
            sf, mas = track(p, cond).value, maslov_side(p, cond)
            bad += sf != mas
            rows.append(sf)
    report(8, "general formula", bad == 0, time.perf_counter() - start, 60,
           f"9 configs x (circle, minus, plus), {bad} mismatches, values {rows}")


def test_criterion_09_pre_splitting():
    start = time.perf_counter()
    bad, vals = 0, []
    for p in [demo_problem()] + [bulk_shift(b=b, shift=s) for b, s in GRID]:
        sf = track(p, p.delta).value
        s0 = track(p, p.delta, times=minus_only).value
        t1 = track(p, p.delta, times=plus_after).value
        bad += sf != s0 + t1
        vals.append((sf, s0, t1))
    report(9, "pre-splitting", bad == 0, time.perf_counter() - start, 60,
           f"demo + 9 configs, {bad} mismatches, values {vals}")


def test_criterion_10_main_splitting():
    start = time.perf_counter()
    bad, vals = 0, []
    for p in [demo_problem()] + [bulk_shift(b=b, shift=s) for b, s in GRID]:
        split = split_boundary_conditions(p)
        sf = track(p, p.delta).value
        minus = track(p, split.ell0).value
        plus = track(p, split.ell1).value
        gal = galerkin_spectral_flow(p, modes=401)
        bad += not (sf == minus + plus == gal)
        vals.append((sf, minus, plus, gal))
    report(10, "main splitting", bad == 0, time.perf_counter() - start, 120,
           f"demo + 9 configs, {bad} mismatches, values {vals}")


def test_criterion_11_diagram():
    start = time.perf_counter()
    worst = 0.0
    for seed in range(100):
        rng = np.random.default_rng(4000 + seed)
        sp = standard_space(1 + seed % 4)
        lam, mu = random_lagrangian(sp, rng), random_lagrangian(sp, rng)
        worst = max(worst, phi_map(souriau_matrix(lam, mu), lam).distance(complexify(mu)))
    report(11, "appendix diagram", worst <= TOL_DIAGRAM, time.perf_counter() - start, 5,
           f"100 Lagrangians, worst {worst:.1e}")


def test_criterion_12_hormander_cocycle():
    start = time.perf_counter()
    bad = 0
    for seed in range(50):
        rng = np.random.default_rng(5000 + seed)
        sp = standard_space(1 + seed % 3)
        x, y, a, b, c = (random_lagrangian(sp, rng) for _ in range(5))
        bad += hormander_index(x, y, a, b) + hormander_index(x, y, b, c) != \
            hormander_index(x, y, a, c)
    report(12, "Hormander cocycle", bad == 0, time.perf_counter() - start,
           detail=f"50 quintuples, {bad} mismatches")
