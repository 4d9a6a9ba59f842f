"""Dense symmetric kernel: factorization, logdet, solves, block assembly."""
import math

import numpy as np
import pytest

from lossymem.errors import DimensionMismatch, NotPositiveDefinite
from lossymem.matrix_core import (
    SymMatrix,
    available_backends,
    backend_name,
    block_diag,
    matmul,
    set_backend,
    spd_factor,
    spd_logdet,
    spd_solve,
    symmetrize,
    top_left,
    transpose_matmul,
)


@pytest.fixture(params=available_backends())
def backend(request):
    previous = backend_name()
    set_backend(request.param)
    yield request.param
    set_backend(previous)


def random_spd(rng, dim):
    g = rng.standard_normal((dim, dim))
    return symmetrize(g.T @ g + np.eye(dim))


def cofactor_det(a):
    # brute-force expansion along the first row, independent of any factorization
    d = a.shape[0]
    if d == 1:
        return a[0, 0]
    total = 0.0
    for j in range(d):
        minor = np.delete(np.delete(a, 0, axis=0), j, axis=1)
        total += (-1.0) ** j * a[0, j] * cofactor_det(minor)
    return total


def test_logdet_identity_is_zero(backend):
    assert spd_logdet(SymMatrix(np.eye(4))) == pytest.approx(0.0, abs=1e-14)


def test_logdet_scaled_identity(backend):
    assert spd_logdet(SymMatrix(2.0 * np.eye(2))) == pytest.approx(2.0 * math.log(2.0), abs=1e-14)


def test_logdet_diagonal(backend):
    assert spd_logdet(SymMatrix(np.diag([2.0, 4.0]))) == pytest.approx(math.log(8.0), abs=1e-14)


def test_solve_identity_returns_rhs(backend):
    rhs = np.array([1.0, -2.0, 3.0])
    out = spd_solve(SymMatrix(np.eye(3)), rhs)
    np.testing.assert_allclose(out, rhs, atol=1e-14)


def test_solve_diagonal_inverse(backend):
    out = spd_solve(SymMatrix(np.diag([2.0, 4.0])), np.eye(2))
    np.testing.assert_allclose(out, np.diag([0.5, 0.25]), atol=1e-14)


def test_solve_self_gives_identity(backend):
    rng = np.random.default_rng(3)
    m = random_spd(rng, 6)
    out = spd_solve(SymMatrix(m), m)
    assert np.abs(out - np.eye(6)).max() <= 1e-10


def test_solve_residual_bound(backend):
    rng = np.random.default_rng(4)
    for dim in (2, 5, 9, 16):
        m = random_spd(rng, dim)
        rhs = rng.standard_normal((dim, 3))
        out = spd_solve(SymMatrix(m), rhs)
        residual = np.linalg.norm(m @ out - rhs)
        assert residual <= 1e-10 * np.linalg.norm(rhs)


def test_solve_composed_with_matrix_is_identity(backend):
    rng = np.random.default_rng(5)
    for dim in range(1, 17):
        m = random_spd(rng, dim)
        inv = spd_solve(SymMatrix(m), np.eye(dim))
        assert np.abs(m @ inv - np.eye(dim)).max() <= 1e-10


def test_logdet_matches_cofactor_determinant(backend):
    rng = np.random.default_rng(6)
    for dim in range(1, 7):
        m = random_spd(rng, dim)
        direct = cofactor_det(np.asarray(m))
        assert math.exp(spd_logdet(SymMatrix(m))) == pytest.approx(direct, rel=1e-10)


def test_factor_exposes_logdet_and_solve(backend):
    rng = np.random.default_rng(7)
    m = random_spd(rng, 5)
    factor = spd_factor(SymMatrix(m))
    assert factor.logdet() == pytest.approx(spd_logdet(SymMatrix(m)), abs=1e-12)
    rhs = rng.standard_normal((5, 2))
    np.testing.assert_allclose(factor.solve(rhs), spd_solve(SymMatrix(m), rhs), atol=1e-12)


def test_not_positive_definite_raises(backend):
    with pytest.raises(NotPositiveDefinite):
        spd_logdet(SymMatrix(np.diag([1.0, -1.0])))
    # indefinite but with positive diagonal
    with pytest.raises(NotPositiveDefinite):
        spd_logdet(SymMatrix(np.array([[1.0, 2.0], [2.0, 1.0]])))
    with pytest.raises(NotPositiveDefinite):
        spd_logdet(SymMatrix(np.zeros((3, 3))))


def test_solve_rejects_mismatched_rhs(backend):
    m = SymMatrix(np.eye(3))
    with pytest.raises(DimensionMismatch):
        spd_solve(m, np.ones((2, 2)))
    with pytest.raises(DimensionMismatch):
        spd_solve(m, np.ones(4))


def test_block_diag_of_identities():
    out = block_diag(SymMatrix(np.eye(2)), SymMatrix(np.eye(2)))
    np.testing.assert_array_equal(np.asarray(out), np.eye(4))


def test_block_diag_scaled(backend):
    out = block_diag(SymMatrix(2.0 * np.eye(2)), SymMatrix(3.0 * np.eye(2)))
    np.testing.assert_array_equal(np.asarray(out), np.diag([2.0, 2.0, 3.0, 3.0]))


def test_block_diag_logdet_additivity(backend):
    rng = np.random.default_rng(8)
    a = SymMatrix(random_spd(rng, 3))
    b = SymMatrix(random_spd(rng, 4))
    combined = spd_logdet(block_diag(a, b))
    assert combined == pytest.approx(spd_logdet(a) + spd_logdet(b), abs=1e-12)


def test_top_left_of_identity():
    out = top_left(SymMatrix(np.eye(4)), 2)
    np.testing.assert_array_equal(np.asarray(out), np.eye(2))


def test_top_left_full_is_same():
    rng = np.random.default_rng(9)
    m = SymMatrix(random_spd(rng, 4))
    np.testing.assert_array_equal(np.asarray(top_left(m, 4)), np.asarray(m))


def test_top_left_diagonal():
    out = top_left(SymMatrix(np.diag([1.0, 2.0, 3.0, 4.0])), 2)
    np.testing.assert_array_equal(np.asarray(out), np.diag([1.0, 2.0]))


def test_top_left_of_block_diag_recovers_block():
    rng = np.random.default_rng(10)
    a = SymMatrix(random_spd(rng, 3))
    b = SymMatrix(random_spd(rng, 2))
    recovered = top_left(block_diag(a, b), 3)
    # exact round trip, no arithmetic allowed to perturb the entries
    np.testing.assert_array_equal(np.asarray(recovered), np.asarray(a))


def test_top_left_rejects_oversize():
    with pytest.raises(DimensionMismatch):
        top_left(SymMatrix(np.eye(3)), 4)


def test_matmul_identity():
    rng = np.random.default_rng(11)
    m = rng.standard_normal((4, 4))
    np.testing.assert_array_equal(matmul(np.eye(4), m), m)


def test_matmul_diagonals():
    out = matmul(np.diag([2.0, 3.0]), np.diag([5.0, 7.0]))
    np.testing.assert_allclose(out, np.diag([10.0, 21.0]), atol=1e-15)


def test_matmul_rejects_mismatch():
    with pytest.raises(DimensionMismatch):
        matmul(np.ones((2, 3)), np.ones((2, 3)))


def test_transpose_matmul_orthogonal_rotation():
    theta = 0.37
    rot = np.array([[math.cos(theta), -math.sin(theta)],
                    [math.sin(theta), math.cos(theta)]])
    assert np.abs(transpose_matmul(rot, rot) - np.eye(2)).max() <= 1e-12


def test_symmetrization_on_construction():
    raw = np.array([[1.0, 2.0], [4.0, 3.0]])
    m = SymMatrix(raw)
    np.testing.assert_array_equal(np.asarray(m), np.array([[1.0, 3.0], [3.0, 3.0]]))
    assert m.dim == 2


def test_entries_are_immutable():
    m = SymMatrix(np.eye(2))
    with pytest.raises(ValueError):
        np.asarray(m)[0, 0] = 5.0


def test_backends_agree():
    rng = np.random.default_rng(12)
    m = random_spd(rng, 8)
    results = {}
    previous = backend_name()
    try:
        for name in available_backends():
            set_backend(name)
            results[name] = (spd_logdet(SymMatrix(m)),
                             spd_solve(SymMatrix(m), np.eye(8)))
    finally:
        set_backend(previous)
    names = list(results)
    for name in names[1:]:
        assert results[name][0] == pytest.approx(results[names[0]][0], abs=1e-12)
        assert np.abs(results[name][1] - results[names[0]][1]).max() <= 1e-10
