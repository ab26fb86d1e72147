import numpy as np
import pytest

from splitflow.maslov import LagrangianPath, maslov_index
from splitflow.pairs import (box_plus, diagonal, diagram_maps, double,
                             maslov_pair, pair_path)
from splitflow.samples import phase_index, random_phase_path
from splitflow.souriau import souriau_matrix
from splitflow.symplectic import (SymplecticError, intersection_dim,
                                  is_lagrangian, lagrangian_from_unitary,
                                  random_lagrangian,
                                  random_unitary, standard_space)

TOL = 1e-12
TOL_DIAGRAM = 1e-10
SEEDS = range(20)


def test_double_space_and_diagonal():
    sp = standard_space(2)
    dbl = double(sp)
    assert dbl.space.dim == 8
    d = diagonal(dbl)
    assert is_lagrangian(dbl.space, d.frame)
    x, y = np.arange(4.0), np.ones(4)
    assert dbl.omega(dbl.embed(x, x), dbl.embed(y, y)) == pytest.approx(0.0, abs=TOL)
    assert dbl.omega(dbl.embed(x, 0 * x), dbl.embed(y, 0 * y)) == pytest.approx(sp.omega(x, y))


def test_box_plus_is_lagrangian_and_meets_diagonal():
    for seed in SEEDS:
        rng = np.random.default_rng(seed)
        sp = standard_space(1 + seed % 3)
        mu, lam = random_lagrangian(sp, rng), random_lagrangian(sp, rng)
        bp = box_plus(mu, lam)
        assert is_lagrangian(bp.space, bp.frame)
        assert intersection_dim(bp, diagonal(double(sp))) == intersection_dim(mu, lam)


def test_box_plus_rejects_mixed_spaces():
    with pytest.raises(SymplecticError):
        box_plus(standard_space(1).standard, standard_space(2).standard)


def test_pair_reduction_on_phase_paths():
    for seed in SEEDS:
        rng = np.random.default_rng(seed)
        lam = random_lagrangian(standard_space(1 + seed % 3), rng)
        p = random_phase_path(lam, rng)
        expect = phase_index(p.a, p.b)
        assert maslov_index(p.path, lam) == expect
        assert maslov_pair(p.path, lam) == expect


def test_pair_antisymmetry():
    for seed in SEEDS:
        rng = np.random.default_rng(seed)
        sp = standard_space(1 + seed % 3)
        p = random_phase_path(random_lagrangian(sp, rng), rng)
        q = random_phase_path(random_lagrangian(sp, rng), rng)
        assert maslov_pair(q, p) == -maslov_pair(p, q)


def test_pair_path_components_sampled_together():
    sp = standard_space(1)
    rng = np.random.default_rng(0)
    p = random_phase_path(sp.standard, rng)
    path = pair_path(p, p, double(sp))
    assert isinstance(path, LagrangianPath)
    assert maslov_index(path, diagonal(double(sp))) == 0


def test_double_form_signs():
    sp = standard_space(1)
    dbl = double(sp)
    e1, e2, z = np.array([1.0, 0.0]), np.array([0.0, 1.0]), np.zeros(2)
    assert dbl.omega(dbl.embed(e1, z), dbl.embed(e2, z)) == sp.omega(e1, e2)
    assert dbl.omega(dbl.embed(z, e1), dbl.embed(z, e2)) == -sp.omega(e1, e2)
    J = dbl.space.J
    assert np.abs(J @ J + np.eye(4)).max() == 0


def test_box_plus_examples():
    sp = standard_space(2)
    std = sp.standard
    d = diagonal(double(sp))
    assert intersection_dim(box_plus(std, std), d) == 2
    assert intersection_dim(box_plus(std, std.perp()), d) == 0


def test_constant_pair():
    sp = standard_space(2)
    rng = np.random.default_rng(4)
    assert maslov_pair(random_lagrangian(sp, rng), random_lagrangian(sp, rng)) == 0


def test_diagram_identities():
    for seed in SEEDS:
        rng = np.random.default_rng(seed)
        n = 1 + seed % 3
        lam = random_lagrangian(standard_space(n), rng)
        dm = diagram_maps(lam)
        V = dm.V
        assert np.abs(V - V.T).max() <= TOL_DIAGRAM
        assert np.abs(V @ V - 1j * dm.A).max() <= TOL_DIAGRAM
        assert dm.v_image().equals(box_plus(lam.perp(), lam))
        assert dm.check(random_lagrangian(lam.space, rng)) <= TOL_DIAGRAM


def test_diagram_lift_and_eigenvalues():
    for seed in SEEDS:
        rng = np.random.default_rng(seed)
        n = 1 + seed % 3
        lam = random_lagrangian(standard_space(n), rng)
        dm = diagram_maps(lam)
        U = random_unitary(n, rng)
        mu = lagrangian_from_unitary(lam, U)
        lifted = lagrangian_from_unitary(dm.delta, dm.a(U))
        assert lifted.equals(box_plus(mu, lam))
        big = np.linalg.eigvals(souriau_matrix(dm.delta, dm.a(U)))
        small = np.linalg.eigvals(souriau_matrix(lam, U))
        for E in big:
            assert np.abs(small + E ** 2).min() <= 1e-9
