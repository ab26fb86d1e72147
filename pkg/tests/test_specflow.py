import numpy as np
import pytest

from splitflow.maslov import CrossingError, RefinementError
from splitflow.samples import random_operator_path
from splitflow.specflow import (OperatorPath, crossing_form_sf, endpoint_flow,
                                local_spectral_flow, riesz, spectral_flow,
                                spectral_flow_details)
from splitflow.symplectic import null_space

TOL = 1e-12
TOL_FORM = 1e-6
SEEDS = range(40)


def scalar(f):
    return OperatorPath(lambda t: np.array([[f(t)]]))


def test_definition_examples():
    assert spectral_flow(OperatorPath(lambda t: np.diag([1.0, -2.0]))) == 0
    assert spectral_flow(scalar(lambda t: t - 0.5)) == 1
    assert spectral_flow(scalar(lambda t: t)) == 0


def test_half_open_window_conventions():
    assert spectral_flow(scalar(lambda t: -t)) == -1
    assert spectral_flow(scalar(lambda t: 1 - t)) == 0
    assert spectral_flow(scalar(lambda t: t - 1)) == 1
    assert spectral_flow(scalar(lambda t: 0.5 - t)) == -1


def test_endpoint_counts():
    for seed in SEEDS:
        rng = np.random.default_rng(seed)
        path = random_operator_path(1 + seed % 6, rng, "linear" if seed % 2 else "smooth")
        assert spectral_flow(path) == endpoint_flow(path)


def test_catenation_reparametrization_reversal():
    for seed in SEEDS:
        rng = np.random.default_rng(seed)
        d = 1 + seed % 6
        p = random_operator_path(d, rng)
        A1 = p(1.0)
        G = rng.standard_normal((d, d))
        B = (G + G.T) / 2
        q = OperatorPath(lambda t: (1 - t) * A1 + t * B)
        assert spectral_flow(p.then(q)) == spectral_flow(p) + spectral_flow(q)
        assert spectral_flow(p.reparametrized(lambda t: t ** 2)) == spectral_flow(p)
        assert spectral_flow(p.reversed()) == -spectral_flow(p)


def test_partition_robustness():
    for seed in SEEDS:
        rng = np.random.default_rng(seed)
        p = random_operator_path(1 + seed % 6, rng)
        base = spectral_flow(p)
        assert spectral_flow(p, max_step=1 / 200) == base
        assert spectral_flow(p, eps_cap=0.05) == base


def test_riesz_closed_form():
    assert np.abs(riesz(np.zeros((3, 3)))).max() == 0
    R = riesz(np.diag([3.0, -4.0]))
    assert np.abs(R - np.diag([3 / np.sqrt(10), -4 / np.sqrt(17)])).max() <= TOL


def test_riesz_properties_and_equivariance():
    for seed in SEEDS:
        rng = np.random.default_rng(seed)
        d = 1 + seed % 6
        p = random_operator_path(d, rng)
        A = 5 * p(0.3)
        R = riesz(A)
        assert np.linalg.norm(R, 2) < 1
        ev = np.linalg.eigvalsh(A)
        assert np.abs(np.linalg.eigvalsh(R) - ev / np.sqrt(1 + ev ** 2)).max() <= TOL
        assert spectral_flow(p.mapped(riesz)) == spectral_flow(p)


def test_crossing_form_examples():
    p = OperatorPath(lambda t: np.array([[t - 0.5]]), lambda t: np.eye(1))
    form = crossing_form_sf(p, 0.5)
    assert form.signature == (1, 0)
    assert local_spectral_flow(p, 0.5) == 1
    q = OperatorPath(lambda t: np.diag([t - 0.5, 0.5 - t]))
    form = crossing_form_sf(q, 0.5)
    assert form.signature == (1, 1)
    assert local_spectral_flow(q, 0.5) == 0
    assert spectral_flow(q) == 0


def test_crossing_form_requires_kernel():
    with pytest.raises(CrossingError):
        crossing_form_sf(OperatorPath(lambda t: np.eye(2)), 0.5)


def test_local_to_global_on_diagonal_paths():
    for seed in SEEDS:
        rng = np.random.default_rng(seed)
        d = 1 + seed % 6
        d0, d1 = rng.uniform(-2, 2, d), rng.uniform(-2, 2, d)
        path = OperatorPath(lambda t: np.diag((1 - t) * d0 + t * d1))
        ts = [d0[j] / (d0[j] - d1[j]) for j in range(d)
              if d0[j] != d1[j] and 0 <= d0[j] / (d0[j] - d1[j]) <= 1]
        total = sum(local_spectral_flow(path, t) for t in ts)
        assert total == spectral_flow(path)


def test_endpoint_local_flow():
    # eigenvalues leaving 0 at t = 0: -q; arriving at t = 1: +p
    p = OperatorPath(lambda t: np.diag([t, -t]))
    assert local_spectral_flow(p, 0.0) == -1 == spectral_flow(p)
    q = OperatorPath(lambda t: np.diag([t - 1, 1 - t]))
    assert local_spectral_flow(q, 1.0) == 1 == spectral_flow(q)


def test_kernel_form_matches_riesz_derivative():
    # A_D fixed with a kernel; the family adds C_t = t C
    for seed in range(10):
        rng = np.random.default_rng(seed)
        d = 3 + seed % 4
        Q = np.linalg.qr(rng.standard_normal((d, d)))[0]
        ev = rng.uniform(0.5, 2, d) * rng.choice([-1, 1], d)
        ev[0] = 0.0
        AD = (Q * ev) @ Q.T
        G = rng.standard_normal((d, d))
        C = (G + G.T) / 2
        K = null_space(AD, scale=1.0)
        h = 1e-5
        dR = (riesz(AD + h * C) - riesz(AD - h * C)) / (2 * h)
        q_sf = crossing_form_sf(OperatorPath(lambda t: AD + (t - 0.5) * C, lambda t: C), 0.5)
        assert np.abs(K.T @ dR @ K - K.T @ C @ K).max() <= TOL_FORM
        assert np.abs(q_sf.matrix - K.T @ C @ K).max() <= TOL


def test_symmetry_enforced_and_budget():
    with pytest.raises(ValueError):
        OperatorPath(lambda t: np.array([[0.0, 1.0], [0.0, 0.0]]))(0.0)
    jump = scalar(lambda t: -1.0 if t < 0.3 else 1.0)
    with pytest.raises(RefinementError):
        spectral_flow_details(jump, budget=100)
