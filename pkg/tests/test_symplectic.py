import numpy as np
import pytest

from splitflow import defaults
from splitflow.symplectic import (Lagrangian, SymplecticError, graph_lagrangian,
                                  graph_operator, intersection_basis,
                                  intersection_dim, is_lagrangian, is_unitary,
                                  lagrangian_from_unitary, orthonormalize,
                                  principal_angle_distance, random_lagrangian,
                                  random_lagrangian_meeting, random_unitary,
                                  real_matrix, complex_matrix, space_from_J,
                                  standard_space, unitary_of_lagrangian)

TOL = 1e-12
TOL_SUB = 1e-9
SEEDS = range(20)


def e(k, dim):
    return np.eye(dim)[:, k]


def test_standard_space_n1():
    sp = standard_space(1)
    assert np.array_equal(sp.J, np.array([[0.0, -1.0], [1.0, 0.0]]))


def test_standard_space_n2_square():
    sp = standard_space(2)
    assert np.abs(sp.J @ sp.J + np.eye(4)).max() <= TOL


def test_standard_space_n3_omega():
    sp = standard_space(3)
    assert sp.omega(e(0, 6), e(3, 6)) == 1.0
    assert sp.omega(e(0, 6), e(1, 6)) == 0.0


def test_standard_space_rejects_zero():
    with pytest.raises(SymplecticError):
        standard_space(0)


def test_space_rejects_bad_J():
    with pytest.raises(SymplecticError):
        space_from_J(np.eye(2))


def test_space_from_J_reference_is_lagrangian():
    rng = np.random.default_rng(0)
    sp = standard_space(3)
    Q = np.linalg.qr(rng.standard_normal((6, 6)))[0]
    sp2 = space_from_J(Q @ sp.J @ Q.T)
    assert is_lagrangian(sp2, sp2.reference)


def test_is_lagrangian_examples():
    assert is_lagrangian(standard_space(1), e(0, 2))
    sp = standard_space(2)
    assert is_lagrangian(sp, np.column_stack([e(0, 4), e(1, 4)]))
    assert not is_lagrangian(sp, np.column_stack([e(0, 4), e(2, 4)]))


def test_is_lagrangian_reorthonormalizes_small_defects():
    sp = standard_space(2)
    F = np.column_stack([e(0, 4), e(1, 4)]) * (1 + 1e-9)
    assert is_lagrangian(sp, F)


def test_is_lagrangian_rejects_non_orthonormal_and_shape():
    sp = standard_space(2)
    with pytest.raises(SymplecticError):
        is_lagrangian(sp, 2 * np.column_stack([e(0, 4), e(1, 4)]))
    with pytest.raises(SymplecticError):
        is_lagrangian(sp, np.ones((4, 3)))
    with pytest.raises(SymplecticError):
        orthonormalize(np.column_stack([e(0, 4), e(0, 4)]))


def test_lagrangian_span_accepts_any_basis():
    sp = standard_space(2)
    lam = Lagrangian.span(sp, np.column_stack([e(0, 4) + e(1, 4), 3 * e(1, 4)]))
    assert lam.equals(sp.standard)


def test_intersection_examples():
    sp = standard_space(2)
    std = sp.standard
    assert intersection_dim(std, std) == 2
    assert intersection_dim(std.perp(), std) == 0
    mu = Lagrangian(sp, np.column_stack([e(0, 4), e(3, 4)]))
    assert intersection_dim(mu, std) == 1
    b = intersection_basis(mu, std)
    assert b.shape == (4, 1)
    assert abs(abs(b[0, 0]) - 1) <= TOL


def test_intersection_symmetric_and_extremes():
    for seed in SEEDS:
        rng = np.random.default_rng(seed)
        n = 1 + seed % 4
        sp = standard_space(n)
        mu, lam = random_lagrangian(sp, rng), random_lagrangian(sp, rng)
        assert intersection_dim(mu, lam) == intersection_dim(lam, mu)
        assert intersection_dim(mu, mu) == n
        assert intersection_dim(mu, mu.perp()) == 0


def test_random_lagrangian_meeting_has_requested_dimension():
    for seed in SEEDS:
        rng = np.random.default_rng(seed)
        n = 1 + seed % 4
        lam = random_lagrangian(standard_space(n), rng)
        k = seed % (n + 1)
        mu = random_lagrangian_meeting(lam, k, rng)
        assert intersection_dim(mu, lam) == k


def test_graph_lagrangian_zero_and_scalar():
    sp = standard_space(1)
    std = sp.standard
    assert graph_lagrangian(std, [[0.0]]).equals(std)
    c = 0.7
    g = graph_lagrangian(std, [[c]])
    expect = np.array([[1.0], [c]]) / np.hypot(1, c)
    assert principal_angle_distance(g.frame, expect) <= TOL_SUB


def test_graph_lagrangian_rejects_asymmetric():
    sp = standard_space(2)
    with pytest.raises(SymplecticError):
        graph_lagrangian(sp.standard, [[0.0, 1.0], [0.0, 0.0]])


def test_graph_operator_round_trip():
    for seed in SEEDS:
        rng = np.random.default_rng(seed)
        n = 1 + seed % 4
        mu = random_lagrangian(standard_space(n), rng)
        S = rng.standard_normal((n, n))
        S = (S + S.T) / 2
        g = graph_lagrangian(mu, S)
        assert is_lagrangian(g.space, g.frame)
        assert np.abs(graph_operator(mu, g) - S).max() <= 1e-10


def test_graph_operator_rejects_non_transversal():
    sp = standard_space(1)
    with pytest.raises(SymplecticError):
        graph_operator(sp.standard, sp.standard.perp())


def test_unitary_examples():
    sp = standard_space(1)
    lam = sp.standard
    assert lagrangian_from_unitary(lam, np.eye(1)).equals(lam.perp())
    assert lagrangian_from_unitary(lam, [[1j]]).equals(lam)
    th = 0.4
    mu = lagrangian_from_unitary(lam, [[np.exp(1j * th)]])
    # angle th from lam^perp = e2, towards -e1
    expect = np.array([[-np.sin(th)], [np.cos(th)]])
    assert principal_angle_distance(mu.frame, expect) <= TOL_SUB


def test_unitary_block_conditions():
    for seed in SEEDS:
        rng = np.random.default_rng(seed)
        U = random_unitary(1 + seed % 4, rng)
        X, Y = U.real, U.imag
        assert np.abs(X @ Y.T - Y @ X.T).max() <= 1e-10
        assert np.abs(X @ X.T + Y @ Y.T - np.eye(len(U))).max() <= 1e-10


def test_unitary_round_trip():
    for seed in SEEDS:
        rng = np.random.default_rng(seed)
        n = 1 + seed % 4
        sp = standard_space(n)
        lam, mu = random_lagrangian(sp, rng), random_lagrangian(sp, rng)
        U = unitary_of_lagrangian(lam, mu)
        assert is_unitary(U)
        assert lagrangian_from_unitary(lam, U).distance(mu) <= TOL_SUB
    sp = standard_space(2)
    lam = sp.standard
    assert lagrangian_from_unitary(lam, unitary_of_lagrangian(lam, lam.perp())).equals(lam.perp())


def test_lagrangian_from_unitary_rejects_non_unitary():
    with pytest.raises(SymplecticError):
        lagrangian_from_unitary(standard_space(1).standard, [[2.0]])


def test_complex_real_matrix_round_trip():
    rng = np.random.default_rng(3)
    lam = random_lagrangian(standard_space(3), rng)
    U = random_unitary(3, rng)
    R = real_matrix(lam, U)
    assert np.abs(R @ lam.space.J - lam.space.J @ R).max() <= 1e-12
    assert np.abs(complex_matrix(lam, R) - U).max() <= 1e-12


def test_tolerance_override_changes_kernel_threshold():
    sp = standard_space(1)
    std = sp.standard
    mu = Lagrangian(sp, np.array([[1.0], [1e-7]]) / np.hypot(1, 1e-7))
    assert intersection_dim(mu, std) == 0
    with defaults.override(tol={"kernel": 1e-6}):
        assert intersection_dim(mu, std) == 1
